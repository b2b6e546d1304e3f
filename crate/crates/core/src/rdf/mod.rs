//! RDF data model: terms, triples, prefix maps and the triple store.

mod store;
pub(crate) mod term;

pub use store::{StoreError, TermId, TripleStore};
pub use term::{Literal, PrefixMap, Term, Triple};

use std::collections::BTreeSet;

/// Set equality of two graphs up to a consistent renaming of blank nodes.
///
/// Ground triples must match exactly; blank-containing triples are matched by
/// searching for a bijection between the two blank-label sets. Backtracking
/// is exponential in the number of blank labels, which stays tiny for the
/// graph sizes exercised here.
pub fn isomorphic(a: &[Triple], b: &[Triple]) -> bool {
    let a: BTreeSet<&Triple> = a.iter().collect();
    let b: BTreeSet<&Triple> = b.iter().collect();
    if a.len() != b.len() {
        return false;
    }

    let ground_a: BTreeSet<&Triple> = a.iter().filter(|t| !t.has_blank()).copied().collect();
    let ground_b: BTreeSet<&Triple> = b.iter().filter(|t| !t.has_blank()).copied().collect();
    if ground_a != ground_b {
        return false;
    }

    let blank_a: Vec<&Triple> = a.iter().filter(|t| t.has_blank()).copied().collect();
    let blank_b: BTreeSet<&Triple> = b.iter().filter(|t| t.has_blank()).copied().collect();
    if blank_a.len() != blank_b.len() {
        return false;
    }

    let labels_a = blank_labels(&blank_a);
    let labels_b = blank_labels(&blank_b.iter().copied().collect::<Vec<_>>());
    if labels_a.len() != labels_b.len() {
        return false;
    }

    let mut mapping: Vec<(String, String)> = Vec::new();
    assign(&labels_a, &labels_b, &mut mapping, &blank_a, &blank_b)
}

fn blank_labels(triples: &[&Triple]) -> Vec<String> {
    let mut labels = BTreeSet::new();
    for t in triples {
        if let Term::Blank(l) = &t.subject {
            labels.insert(l.clone());
        }
        if let Term::Blank(l) = &t.object {
            labels.insert(l.clone());
        }
    }
    labels.into_iter().collect()
}

fn assign(
    remaining: &[String],
    candidates: &[String],
    mapping: &mut Vec<(String, String)>,
    blank_a: &[&Triple],
    blank_b: &BTreeSet<&Triple>,
) -> bool {
    let Some(label) = remaining.first() else {
        return blank_a.iter().all(|t| blank_b.contains(&rename(t, mapping)));
    };
    for candidate in candidates {
        if mapping.iter().any(|(_, to)| to == candidate) {
            continue;
        }
        mapping.push((label.clone(), candidate.clone()));
        if assign(&remaining[1..], candidates, mapping, blank_a, blank_b) {
            return true;
        }
        mapping.pop();
    }
    false
}

fn rename(triple: &Triple, mapping: &[(String, String)]) -> Triple {
    let map_term = |term: &Term| match term {
        Term::Blank(l) => {
            let renamed = mapping
                .iter()
                .find(|(from, _)| from == l)
                .map(|(_, to)| to.clone())
                .unwrap_or_else(|| l.clone());
            Term::Blank(renamed)
        }
        other => other.clone(),
    };
    Triple::new(map_term(&triple.subject), map_term(&triple.predicate), map_term(&triple.object))
}
