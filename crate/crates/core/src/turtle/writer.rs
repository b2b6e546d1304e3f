//! Canonical Turtle serializer.
//!
//! Output layout is bit-stable: prefix directives first (sorted by label),
//! then triples grouped by subject and sorted lexicographically by their
//! (subject, predicate, object) encoded names, with `;` predicate lists and
//! `,` object lists. Serializing the same graph with the same prefixes
//! always produces the same bytes, which keeps golden-file tests trivial.

use crate::rdf::{PrefixMap, Term, Triple};
use crate::rdf::term::escape_literal;
use crate::vocab;

/// Render a graph as Turtle. Every namespace not covered by `prefixes` is
/// emitted as a full IRI; the output always reparses to the same triple set.
pub fn serialize_turtle(triples: &[Triple], prefixes: &PrefixMap) -> String {
    let mut out = String::new();
    let mut labels: Vec<(&str, &str)> = prefixes.iter().collect();
    labels.sort_by_key(|(label, _)| *label);
    for (label, ns) in &labels {
        out.push_str(&format!("@prefix {label}: <{ns}> .\n"));
    }

    let mut encoded: Vec<(String, String, String)> = triples
        .iter()
        .map(|t| {
            (
                encode_term(&t.subject, prefixes, false),
                encode_term(&t.predicate, prefixes, true),
                encode_term(&t.object, prefixes, false),
            )
        })
        .collect();
    encoded.sort();
    encoded.dedup();

    if encoded.is_empty() {
        return out;
    }
    out.push('\n');

    let mut i = 0;
    while i < encoded.len() {
        let subject = encoded[i].0.clone();
        out.push_str(&subject);
        let mut first_predicate = true;
        while i < encoded.len() && encoded[i].0 == subject {
            let predicate = encoded[i].1.clone();
            if first_predicate {
                out.push(' ');
                first_predicate = false;
            } else {
                out.push_str(" ;\n  ");
            }
            out.push_str(&predicate);
            let mut first_object = true;
            while i < encoded.len() && encoded[i].0 == subject && encoded[i].1 == predicate {
                if first_object {
                    out.push(' ');
                    first_object = false;
                } else {
                    out.push_str(" , ");
                }
                out.push_str(&encoded[i].2);
                i += 1;
            }
        }
        out.push_str(" .\n");
    }
    out
}

/// One term in Turtle syntax, compacting IRIs to prefixed names where the
/// local part stays inside the safe name alphabet.
pub fn encode_term(term: &Term, prefixes: &PrefixMap, predicate_position: bool) -> String {
    match term {
        Term::Iri(iri) => {
            if predicate_position && iri == vocab::RDF_TYPE {
                return "a".to_string();
            }
            if let Some((label, local)) = prefixes.compact(iri) {
                if pn_local_safe(local) {
                    return format!("{label}:{local}");
                }
            }
            format!("<{}>", escape_iri(iri))
        }
        Term::Blank(label) => format!("_:{label}"),
        Term::Literal(lit) => {
            let quoted = format!("\"{}\"", escape_literal(lit.lexical()));
            if let Some(tag) = lit.language() {
                format!("{quoted}@{tag}")
            } else if lit.datatype() == vocab::XSD_STRING {
                quoted
            } else {
                let dt = encode_term(&Term::iri(lit.datatype()), prefixes, false);
                format!("{quoted}^^{dt}")
            }
        }
    }
}

/// Conservative subset of PN_LOCAL: alphanumerics, '_', '-' and interior
/// dots. Anything else (notably '/') forces the full-IRI form.
fn pn_local_safe(local: &str) -> bool {
    if local.is_empty() || local.starts_with('.') || local.starts_with('-') || local.ends_with('.') {
        return false;
    }
    local.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '-' || c == '.')
}

fn escape_iri(iri: &str) -> String {
    let mut out = String::with_capacity(iri.len());
    for c in iri.chars() {
        match c {
            '<' | '>' | '"' | '{' | '}' | '|' | '^' | '`' | '\\' => {
                out.push_str(&format!("\\u{:04X}", c as u32));
            }
            c => out.push(c),
        }
    }
    out
}
