//! Query AST for the SPARQL subset.

use std::collections::BTreeMap;
use std::fmt;

use crate::connectors::CompareOp;
use crate::rdf::Term;

/// Subject/predicate/object slot of a pattern: a concrete term or a variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PatternTerm {
    Term(Term),
    Var(String),
}

impl PatternTerm {
    pub fn as_var(&self) -> Option<&str> {
        match self {
            PatternTerm::Var(v) => Some(v),
            PatternTerm::Term(_) => None,
        }
    }

    pub fn as_term(&self) -> Option<&Term> {
        match self {
            PatternTerm::Term(t) => Some(t),
            PatternTerm::Var(_) => None,
        }
    }
}

impl fmt::Display for PatternTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatternTerm::Term(t) => write!(f, "{t}"),
            PatternTerm::Var(v) => write!(f, "?{v}"),
        }
    }
}

/// One basic graph pattern entry. The predicate is an IRI or a variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriplePattern {
    pub subject: PatternTerm,
    pub predicate: PatternTerm,
    pub object: PatternTerm,
}

impl TriplePattern {
    pub fn variables(&self) -> impl Iterator<Item = &str> {
        [&self.subject, &self.predicate, &self.object].into_iter().filter_map(|p| p.as_var())
    }

    /// Number of concrete (non-variable) positions.
    pub fn bound_positions(&self) -> usize {
        [&self.subject, &self.predicate, &self.object]
            .into_iter()
            .filter(|p| p.as_term().is_some())
            .count()
    }
}

/// Operand of a FILTER comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Operand {
    Var(String),
    Term(Term),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilterExpr {
    pub left: Operand,
    pub op: CompareOp,
    pub right: Operand,
}

impl FilterExpr {
    pub fn variables(&self) -> impl Iterator<Item = &str> {
        [&self.left, &self.right].into_iter().filter_map(|o| match o {
            Operand::Var(v) => Some(v.as_str()),
            Operand::Term(_) => None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderSpec {
    pub variable: String,
    pub descending: bool,
}

/// A SELECT query over one basic graph pattern with conjunctive filters.
#[derive(Debug, Clone, PartialEq)]
pub struct SelectQuery {
    pub variables: Vec<String>,
    pub patterns: Vec<TriplePattern>,
    pub filters: Vec<FilterExpr>,
    pub order: Option<OrderSpec>,
    pub limit: Option<usize>,
}

/// One solution: a binding of exactly the projected variables.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SolutionRow {
    bindings: BTreeMap<String, Term>,
}

impl SolutionRow {
    pub fn new(bindings: BTreeMap<String, Term>) -> Self {
        SolutionRow { bindings }
    }

    pub fn get(&self, variable: &str) -> Option<&Term> {
        self.bindings.get(variable)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Term)> {
        self.bindings.iter().map(|(k, v)| (k.as_str(), v))
    }
}
