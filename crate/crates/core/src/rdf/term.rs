//! RDF terms, triples and prefix maps.
//!
//! Terms and triples are immutable values; they are `Send + Sync` and safe to
//! share between threads.

use std::fmt;

use crate::vocab;

/// An RDF literal: a lexical form plus either a language tag or a datatype.
///
/// A plain literal is normalized to datatype `xsd:string` on construction, so
/// `"x"` and `"x"^^xsd:string` are the same value.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    lexical: String,
    kind: LiteralKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum LiteralKind {
    /// Implied datatype `xsd:string`.
    Plain,
    Lang(String),
    Typed(String),
}

impl Literal {
    pub fn string(lexical: impl Into<String>) -> Self {
        Literal { lexical: lexical.into(), kind: LiteralKind::Plain }
    }

    pub fn lang(lexical: impl Into<String>, tag: impl Into<String>) -> Self {
        Literal { lexical: lexical.into(), kind: LiteralKind::Lang(tag.into()) }
    }

    pub fn typed(lexical: impl Into<String>, datatype: impl Into<String>) -> Self {
        let datatype = datatype.into();
        if datatype == vocab::XSD_STRING {
            Literal { lexical: lexical.into(), kind: LiteralKind::Plain }
        } else {
            Literal { lexical: lexical.into(), kind: LiteralKind::Typed(datatype) }
        }
    }

    pub fn lexical(&self) -> &str {
        &self.lexical
    }

    /// Datatype IRI; `xsd:string` for plain literals, `rdf:langString` for
    /// language-tagged ones.
    pub fn datatype(&self) -> &str {
        match &self.kind {
            LiteralKind::Plain => vocab::XSD_STRING,
            LiteralKind::Lang(_) => vocab::RDF_LANG_STRING,
            LiteralKind::Typed(dt) => dt,
        }
    }

    pub fn language(&self) -> Option<&str> {
        match &self.kind {
            LiteralKind::Lang(tag) => Some(tag),
            _ => None,
        }
    }
}

/// An RDF term: IRI, blank node or literal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Iri(String),
    Blank(String),
    Literal(Literal),
}

impl Term {
    pub fn iri(iri: impl Into<String>) -> Self {
        Term::Iri(iri.into())
    }

    pub fn blank(label: impl Into<String>) -> Self {
        Term::Blank(label.into())
    }

    pub fn string(lexical: impl Into<String>) -> Self {
        Term::Literal(Literal::string(lexical))
    }

    pub fn lang(lexical: impl Into<String>, tag: impl Into<String>) -> Self {
        Term::Literal(Literal::lang(lexical, tag))
    }

    pub fn typed(lexical: impl Into<String>, datatype: impl Into<String>) -> Self {
        Term::Literal(Literal::typed(lexical, datatype))
    }

    pub fn integer(value: i64) -> Self {
        Term::typed(value.to_string(), vocab::XSD_INTEGER)
    }

    pub fn is_iri(&self) -> bool {
        matches!(self, Term::Iri(_))
    }

    pub fn is_blank(&self) -> bool {
        matches!(self, Term::Blank(_))
    }

    pub fn is_literal(&self) -> bool {
        matches!(self, Term::Literal(_))
    }

    pub fn as_iri(&self) -> Option<&str> {
        match self {
            Term::Iri(iri) => Some(iri),
            _ => None,
        }
    }

    pub fn as_literal(&self) -> Option<&Literal> {
        match self {
            Term::Literal(lit) => Some(lit),
            _ => None,
        }
    }
}

impl fmt::Display for Term {
    /// N-Triples style rendering; used in messages and TSV output.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Iri(iri) => write!(f, "<{iri}>"),
            Term::Blank(label) => write!(f, "_:{label}"),
            Term::Literal(lit) => {
                write!(f, "\"{}\"", escape_literal(lit.lexical()))?;
                if let Some(tag) = lit.language() {
                    write!(f, "@{tag}")
                } else if lit.datatype() != vocab::XSD_STRING {
                    write!(f, "^^<{}>", lit.datatype())
                } else {
                    Ok(())
                }
            }
        }
    }
}

pub(crate) fn escape_literal(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '"' => out.push_str("\\\""),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04X}", c as u32)),
            c => out.push(c),
        }
    }
    out
}

/// An RDF statement.
///
/// Invariants: the subject is an IRI or blank node, the predicate is an IRI.
/// All construction paths in this crate (parser, mapping engine, forecast
/// writer) uphold them; `new` asserts them in debug builds.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    pub subject: Term,
    pub predicate: Term,
    pub object: Term,
}

impl Triple {
    pub fn new(subject: Term, predicate: Term, object: Term) -> Self {
        debug_assert!(!subject.is_literal(), "triple subject must not be a literal");
        debug_assert!(predicate.is_iri(), "triple predicate must be an IRI");
        Triple { subject, predicate, object }
    }

    pub fn has_blank(&self) -> bool {
        self.subject.is_blank() || self.object.is_blank()
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} .", self.subject, self.predicate, self.object)
    }
}

/// Ordered map from prefix label to namespace IRI.
///
/// Labels are unique; re-inserting a label rebinds it in place.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PrefixMap {
    entries: Vec<(String, String)>,
}

impl PrefixMap {
    pub fn new() -> Self {
        PrefixMap::default()
    }

    /// The namespaces used across the toolkit, available without explicit
    /// declarations in queries and mapping documents.
    pub fn well_known() -> Self {
        let mut map = PrefixMap::new();
        for (label, ns) in [
            ("artemis", vocab::ARTEMIS_NS),
            ("artemis-data", vocab::ARTEMIS_DATA_NS),
            ("seas", vocab::SEAS_NS),
            ("cim", vocab::CIM_NS),
            ("saref", vocab::SAREF_NS),
            ("ids", vocab::IDS_NS),
            ("dcat", vocab::DCAT_NS),
            ("qb", vocab::QB_NS),
            ("rdf", vocab::RDF_NS),
            ("rdfs", vocab::RDFS_NS),
            ("owl", vocab::OWL_NS),
            ("dcterms", vocab::DCTERMS_NS),
            ("vann", vocab::VANN_NS),
            ("vs", vocab::VS_NS),
            ("xsd", vocab::XSD_NS),
        ] {
            map.insert(label, ns);
        }
        map
    }

    pub fn insert(&mut self, label: impl Into<String>, namespace: impl Into<String>) {
        let label = label.into();
        let namespace = namespace.into();
        if let Some(entry) = self.entries.iter_mut().find(|(l, _)| *l == label) {
            entry.1 = namespace;
        } else {
            self.entries.push((label, namespace));
        }
    }

    pub fn resolve(&self, label: &str) -> Option<&str> {
        self.entries.iter().find(|(l, _)| l == label).map(|(_, ns)| ns.as_str())
    }

    pub fn expand(&self, label: &str, local: &str) -> Option<String> {
        self.resolve(label).map(|ns| format!("{ns}{local}"))
    }

    /// Splits an IRI into (label, local part) using the longest declared
    /// namespace that prefixes it.
    pub fn compact<'a>(&'a self, iri: &'a str) -> Option<(&'a str, &'a str)> {
        self.entries
            .iter()
            .filter(|(_, ns)| iri.starts_with(ns.as_str()))
            .max_by_key(|(_, ns)| ns.len())
            .map(|(label, ns)| (label.as_str(), &iri[ns.len()..]))
    }

    /// Merge `other` into `self`; bindings from `other` win on label clashes.
    pub fn merge(&mut self, other: &PrefixMap) {
        for (label, ns) in &other.entries {
            self.insert(label.clone(), ns.clone());
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter().map(|(l, n)| (l.as_str(), n.as_str()))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_literal_is_xsd_string() {
        assert_eq!(Term::string("x"), Term::typed("x", vocab::XSD_STRING));
        assert_eq!(Literal::string("x").datatype(), vocab::XSD_STRING);
    }

    #[test]
    fn lang_literal_has_no_explicit_datatype() {
        let lit = Literal::lang("Electrical Grid", "en");
        assert_eq!(lit.language(), Some("en"));
        assert_eq!(lit.datatype(), vocab::RDF_LANG_STRING);
    }

    #[test]
    fn prefix_map_rebinds_in_place() {
        let mut map = PrefixMap::new();
        map.insert("ex", "http://example.org/a#");
        map.insert("ex", "http://example.org/b#");
        assert_eq!(map.len(), 1);
        assert_eq!(map.resolve("ex"), Some("http://example.org/b#"));
    }

    #[test]
    fn compact_picks_longest_namespace() {
        let mut map = PrefixMap::new();
        map.insert("a", "http://example.org/");
        map.insert("b", "http://example.org/deep/");
        let (label, local) = map.compact("http://example.org/deep/x").unwrap();
        assert_eq!((label, local), ("b", "x"));
    }

    #[test]
    fn term_display_is_ntriples_like() {
        assert_eq!(Term::iri("http://e/x").to_string(), "<http://e/x>");
        assert_eq!(Term::lang("grid", "en").to_string(), "\"grid\"@en");
        assert_eq!(
            Term::typed("2021-05-20", vocab::XSD_DATE).to_string(),
            "\"2021-05-20\"^^<http://www.w3.org/2001/XMLSchema#date>"
        );
        assert_eq!(Term::string("plain").to_string(), "\"plain\"");
    }
}
