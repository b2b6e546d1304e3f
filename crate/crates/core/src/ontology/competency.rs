//! Competency checking: run the CQ suite against base plus inferred triples
//! and report per-question outcomes.

use std::collections::BTreeMap;
use std::fmt;

use crate::query::{evaluate, find_question, parse_query, CompetencyQuestion, CqError};
use crate::rdf::TripleStore;

/// Per-question result. A question passes when it returns a nonempty
/// solution set, and additionally matches its declared expected row count
/// when it ran with the catalog defaults.
#[derive(Debug, Clone)]
pub struct CqOutcome {
    pub id: String,
    pub title: String,
    pub rows: usize,
    pub expected: Option<usize>,
    pub passed: bool,
}

impl fmt::Display for CqOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "pass" } else { "FAIL" };
        match self.expected {
            Some(expected) => {
                write!(f, "{}\t{}\trows={} (expected {})\t{}", self.id, verdict, self.rows, expected, self.title)
            }
            None => write!(f, "{}\t{}\trows={}\t{}", self.id, verdict, self.rows, self.title),
        }
    }
}

/// Evaluate every question of the suite over `store_with_closure` (base and
/// inferred triples combined). `overrides` substitute template placeholders
/// for all questions; expected row counts only apply when no overrides are
/// given.
pub fn check_competency(
    store_with_closure: &TripleStore,
    suite: &[CompetencyQuestion],
    overrides: &BTreeMap<String, String>,
) -> Result<Vec<CqOutcome>, CqCheckError> {
    suite.iter().map(|question| run_question(store_with_closure, question, overrides)).collect()
}

/// Evaluate a single question by id.
pub fn check_one(
    store_with_closure: &TripleStore,
    suite: &[CompetencyQuestion],
    id: &str,
    overrides: &BTreeMap<String, String>,
) -> Result<CqOutcome, CqCheckError> {
    let question = find_question(suite, id)?;
    run_question(store_with_closure, question, overrides)
}

fn run_question(
    store: &TripleStore,
    question: &CompetencyQuestion,
    overrides: &BTreeMap<String, String>,
) -> Result<CqOutcome, CqCheckError> {
    let text = question.instantiate(overrides)?;
    let query = parse_query(&text).map_err(|source| CqCheckError::BadTemplate {
        id: question.id.clone(),
        source,
    })?;
    let rows = evaluate(store, &query).len();
    let expected = if overrides.is_empty() { question.expect } else { None };
    let passed = rows > 0 && expected.is_none_or(|n| rows == n);
    Ok(CqOutcome { id: question.id.clone(), title: question.title.clone(), rows, expected, passed })
}

#[derive(Debug, thiserror::Error)]
pub enum CqCheckError {
    #[error(transparent)]
    Catalog(#[from] CqError),
    #[error("{id}: template does not parse: {source}")]
    BadTemplate {
        id: String,
        #[source]
        source: crate::query::QueryParseError,
    },
}
