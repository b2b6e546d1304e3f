//! Competency question catalog: parameterized query templates identified by
//! CQ ids, loaded from the plain-text catalog format shipped under
//! `fixtures/cq/catalog.txt`.

use std::collections::BTreeMap;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CqError {
    #[error("unknown competency question id {0}")]
    UnknownQuestion(String),
    #[error("{id}: no value for placeholder {{{placeholder}}}")]
    MissingParam { id: String, placeholder: String },
    #[error("catalog format error at line {line}: {message}")]
    Catalog { line: usize, message: String },
}

/// One catalog entry: id, the question text, the parameterized query
/// template, default placeholder values, and an optional expected row count
/// that applies when the question runs with its defaults.
#[derive(Debug, Clone)]
pub struct CompetencyQuestion {
    pub id: String,
    pub title: String,
    pub template: String,
    pub defaults: BTreeMap<String, String>,
    pub expect: Option<usize>,
}

impl CompetencyQuestion {
    /// Substitute placeholders from defaults merged with `overrides`;
    /// errors if any `{placeholder}` remains unresolved.
    pub fn instantiate(&self, overrides: &BTreeMap<String, String>) -> Result<String, CqError> {
        let mut text = self.template.clone();
        let mut params = self.defaults.clone();
        for (k, v) in overrides {
            params.insert(k.clone(), v.clone());
        }
        for (key, value) in &params {
            text = text.replace(&format!("{{{key}}}"), value);
        }
        if let Some(placeholder) = find_placeholder(&text) {
            return Err(CqError::MissingParam { id: self.id.clone(), placeholder });
        }
        Ok(text)
    }
}

/// A `{word}` occurrence (no whitespace inside) left after substitution;
/// the `{` of a WHERE block never qualifies.
fn find_placeholder(text: &str) -> Option<String> {
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'{' {
            let start = i + 1;
            let mut end = start;
            while end < bytes.len() && (bytes[end].is_ascii_alphanumeric() || bytes[end] == b'_') {
                end += 1;
            }
            if end > start && end < bytes.len() && bytes[end] == b'}' {
                return Some(text[start..end].to_owned());
            }
        }
        i += 1;
    }
    None
}

/// Parse the catalog text. Blocks start at `[ID]` headers; inside a block,
/// `title:`, `default.<key>:`, `expect:` and `query:` lines are recognized,
/// and everything after `query:` until the next header belongs to the
/// template.
pub fn parse_catalog(text: &str) -> Result<Vec<CompetencyQuestion>, CqError> {
    let mut questions: Vec<CompetencyQuestion> = Vec::new();
    let mut current: Option<CompetencyQuestion> = None;
    let mut in_query = false;

    for (index, line) in text.lines().enumerate() {
        let line_no = index + 1;
        let trimmed = line.trim();
        if let Some(id) = trimmed.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            if let Some(question) = current.take() {
                questions.push(question);
            }
            current = Some(CompetencyQuestion {
                id: id.to_owned(),
                title: String::new(),
                template: String::new(),
                defaults: BTreeMap::new(),
                expect: None,
            });
            in_query = false;
            continue;
        }
        let Some(question) = current.as_mut() else {
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            return Err(CqError::Catalog {
                line: line_no,
                message: "content before the first [CQ] header".into(),
            });
        };
        if in_query {
            question.template.push_str(line);
            question.template.push('\n');
            continue;
        }
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if let Some(title) = trimmed.strip_prefix("title:") {
            question.title = title.trim().to_owned();
        } else if let Some(rest) = trimmed.strip_prefix("default.") {
            let (key, value) = rest.split_once(':').ok_or_else(|| CqError::Catalog {
                line: line_no,
                message: "default line needs 'default.<key>: <value>'".into(),
            })?;
            question.defaults.insert(key.trim().to_owned(), value.trim().to_owned());
        } else if let Some(expect) = trimmed.strip_prefix("expect:") {
            let n = expect.trim().parse().map_err(|_| CqError::Catalog {
                line: line_no,
                message: "expect needs an integer".into(),
            })?;
            question.expect = Some(n);
        } else if trimmed == "query:" {
            in_query = true;
        } else {
            return Err(CqError::Catalog {
                line: line_no,
                message: format!("unrecognized line {trimmed:?}"),
            });
        }
    }
    if let Some(question) = current.take() {
        questions.push(question);
    }
    Ok(questions)
}

pub fn find_question<'a>(
    suite: &'a [CompetencyQuestion],
    id: &str,
) -> Result<&'a CompetencyQuestion, CqError> {
    suite.iter().find(|q| q.id == id).ok_or_else(|| CqError::UnknownQuestion(id.to_owned()))
}
