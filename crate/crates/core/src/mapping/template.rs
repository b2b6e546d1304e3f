//! IRI templates over source columns.

use crate::connectors::{Row, Value};
use crate::rdf::PrefixMap;

/// An IRI template like `artemis-data:plant/{plant_id}_{plant_name}_{city}`.
/// The leading prefixed name (or full IRI) is resolved at parse time;
/// `{column}` placeholders are substituted with slugged column values at
/// render time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IriTemplate {
    parts: Vec<TemplatePart>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum TemplatePart {
    Text(String),
    Column(String),
}

impl IriTemplate {
    pub fn parse(text: &str, prefixes: &PrefixMap) -> Result<Self, String> {
        let expanded = expand_prefix(text, prefixes)?;
        let mut parts = Vec::new();
        let mut literal = String::new();
        let mut chars = expanded.chars().peekable();
        while let Some(c) = chars.next() {
            match c {
                '{' => {
                    if !literal.is_empty() {
                        parts.push(TemplatePart::Text(std::mem::take(&mut literal)));
                    }
                    let mut column = String::new();
                    loop {
                        match chars.next() {
                            Some('}') => break,
                            Some('{') => return Err("nested '{' in template".into()),
                            Some(c) => column.push(c),
                            None => return Err("unterminated '{' in template".into()),
                        }
                    }
                    if column.is_empty() {
                        return Err("empty placeholder".into());
                    }
                    parts.push(TemplatePart::Column(column));
                }
                '}' => return Err("unmatched '}' in template".into()),
                c => literal.push(c),
            }
        }
        if !literal.is_empty() {
            parts.push(TemplatePart::Text(literal));
        }
        if !parts.iter().any(|p| matches!(p, TemplatePart::Column(_))) {
            // Constant templates are legal; nothing more to validate.
        }
        Ok(IriTemplate { parts })
    }

    pub fn columns(&self) -> impl Iterator<Item = &str> {
        self.parts.iter().filter_map(|p| match p {
            TemplatePart::Column(c) => Some(c.as_str()),
            TemplatePart::Text(_) => None,
        })
    }

    /// Substitute placeholders with the row's values; `None` when any
    /// referenced column is null.
    pub fn render(&self, row: &Row) -> Option<String> {
        let mut out = String::new();
        for part in &self.parts {
            match part {
                TemplatePart::Text(text) => out.push_str(text),
                TemplatePart::Column(column) => {
                    let value = row.get(column);
                    if value.is_null() {
                        return None;
                    }
                    out.push_str(&iri_component(value));
                }
            }
        }
        Some(out)
    }

    /// Match a concrete IRI back against the template, recovering the
    /// rendered component per placeholder. Placeholders are separated by
    /// non-empty literal text in every shipped template, and rendered
    /// components never contain the separator characters, so matching by
    /// splitting on the literal parts is unambiguous.
    pub fn reverse_match<'a>(&self, iri: &'a str) -> Option<Vec<(&str, &'a str)>> {
        let mut rest = iri;
        let mut out = Vec::new();
        let mut pending_column: Option<&str> = None;
        for part in &self.parts {
            match part {
                TemplatePart::Text(text) => match pending_column.take() {
                    Some(column) => {
                        let idx = rest.find(text.as_str())?;
                        out.push((column, &rest[..idx]));
                        rest = &rest[idx + text.len()..];
                    }
                    None => {
                        rest = rest.strip_prefix(text.as_str())?;
                    }
                },
                TemplatePart::Column(column) => {
                    if pending_column.is_some() {
                        // Adjacent placeholders cannot be split apart.
                        return None;
                    }
                    pending_column = Some(column);
                }
            }
        }
        if let Some(column) = pending_column {
            out.push((column, rest));
        } else if !rest.is_empty() {
            return None;
        }
        Some(out)
    }

    /// Whether a rendered component equals `expected` for this value.
    pub fn component_matches(value: &Value, expected: &str) -> bool {
        !value.is_null() && iri_component(value) == expected
    }
}

fn expand_prefix(text: &str, prefixes: &PrefixMap) -> Result<String, String> {
    if text.contains("://") || text.starts_with('{') {
        return Ok(text.to_owned());
    }
    match text.split_once(':') {
        Some((label, local)) => prefixes
            .expand(label, local)
            .ok_or_else(|| format!("unknown prefix '{label}:'")),
        None => Err("template is neither a full IRI nor a prefixed name".into()),
    }
}

/// IRI-component rendering of a value: the canonical string, lowercased,
/// spaces mapped to '-', everything outside `[a-z0-9_-]` dropped. Unlike the
/// strict unique-id slug this retains underscores, so unique-id strings
/// (which are underscore-joined slugs) pass through unchanged.
pub(crate) fn iri_component(value: &Value) -> String {
    let text = value.canonical_string().unwrap_or_default();
    let mut out = String::with_capacity(text.len());
    for c in text.to_lowercase().chars() {
        match c {
            ' ' => out.push('-'),
            'a'..='z' | '0'..='9' | '-' | '_' => out.push(c),
            _ => {}
        }
    }
    out
}
