//! Ontology quality evaluation: clarity, coherence and modularity, plus the
//! per-question competency outcomes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::rdf::{Term, TripleStore};
use crate::vocab;

use super::competency::CqOutcome;
use super::{Ontology, TermCategory};

/// Problems found by the coherence check. These are findings, not errors:
/// validation always completes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoherenceFinding {
    /// `rdfs:subClassOf` cycle among two or more distinct terms.
    SubclassCycle { members: Vec<String> },
    /// A superterm, domain or range target that is declared nowhere.
    DanglingReference { term: String, via: &'static str, target: String },
    /// A property with a literal (XSD) range used with an IRI or blank object.
    LiteralRangeViolation { property: String, subject: String },
}

impl fmt::Display for CoherenceFinding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoherenceFinding::SubclassCycle { members } => {
                write!(f, "subClassOf cycle {{{}}}", members.join(", "))
            }
            CoherenceFinding::DanglingReference { term, via, target } => {
                write!(f, "{term} references undeclared {via} target {target}")
            }
            CoherenceFinding::LiteralRangeViolation { property, subject } => {
                write!(f, "{property} has a literal range but {subject} uses it with a non-literal object")
            }
        }
    }
}

/// Outcome of evaluating an ontology against the design criteria.
#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    /// Share of terms carrying both a label and a comment, in [0, 1].
    pub clarity: f64,
    pub coherence: Vec<CoherenceFinding>,
    /// Internal / (internal + external) reference ratio per module, in [0, 1].
    pub modularity: BTreeMap<String, f64>,
    pub competency: Vec<CqOutcome>,
}

impl ValidationReport {
    /// A report counts as failed when coherence findings exist or any
    /// competency question failed.
    pub fn has_failures(&self) -> bool {
        !self.coherence.is_empty() || self.competency.iter().any(|cq| !cq.passed)
    }
}

/// Evaluate clarity, coherence and modularity. `instance_store` supplies the
/// data triples inspected by the literal-range check; competency outcomes are
/// filled in separately by `check_competency`.
pub fn validate(ontology: &Ontology, instance_store: &TripleStore) -> ValidationReport {
    let clarity = clarity(ontology);
    let modularity = modularity(ontology);
    let mut coherence = Vec::new();
    subclass_cycles(instance_store, &mut coherence);
    dangling_references(ontology, &mut coherence);
    literal_range_violations(ontology, instance_store, &mut coherence);
    ValidationReport { clarity, coherence, modularity, competency: Vec::new() }
}

fn clarity(ontology: &Ontology) -> f64 {
    if ontology.terms.is_empty() {
        return 1.0;
    }
    let documented = ontology
        .terms
        .values()
        .filter(|t| t.label.is_some() && t.comment.is_some())
        .count();
    documented as f64 / ontology.terms.len() as f64
}

fn modularity(ontology: &Ontology) -> BTreeMap<String, f64> {
    let mut out = BTreeMap::new();
    for module in &ontology.modules {
        let mut internal = 0usize;
        let mut external = 0usize;
        for term in module.terms.iter().filter_map(|iri| ontology.terms.get(iri)) {
            let refs = term
                .superterms
                .iter()
                .chain(term.domain.iter())
                .chain(term.range.iter());
            for target in refs {
                match ontology.terms.get(target) {
                    Some(def) if def.module == module.iri => internal += 1,
                    _ => external += 1,
                }
            }
        }
        let ratio = if internal + external == 0 {
            1.0
        } else {
            internal as f64 / (internal + external) as f64
        };
        out.insert(module.iri.clone(), ratio);
    }
    out
}

/// Strongly connected components of the subClassOf graph with two or more
/// distinct members become findings. Self-loops are ignored.
fn subclass_cycles(store: &TripleStore, findings: &mut Vec<CoherenceFinding>) {
    let sub_class = Term::iri(vocab::RDFS_SUBCLASS_OF);
    let mut edges: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    for t in store.match_pattern(None, Some(&sub_class), None) {
        if let (Some(s), Some(o)) = (t.subject.as_iri(), t.object.as_iri()) {
            if s != o {
                edges.entry(s.to_owned()).or_default().insert(o.to_owned());
            }
        }
    }

    // Iterative reachability is plenty at ontology scale: a cycle exists
    // exactly among nodes that can reach themselves.
    let mut reach: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    for (from, tos) in &edges {
        reach.insert(from, tos.iter().map(|s| s.as_str()).collect());
    }
    loop {
        let mut grew = false;
        let nodes: Vec<&str> = reach.keys().copied().collect();
        for node in nodes {
            let current: Vec<&str> = reach[node].iter().copied().collect();
            let mut additions: BTreeSet<&str> = BTreeSet::new();
            for next in current {
                if let Some(beyond) = reach.get(next) {
                    additions.extend(beyond.iter().copied());
                }
            }
            let set = reach.get_mut(node).unwrap();
            let before = set.len();
            set.extend(additions);
            grew |= set.len() > before;
        }
        if !grew {
            break;
        }
    }

    let mut in_cycle: BTreeSet<&str> = BTreeSet::new();
    for (node, reachable) in &reach {
        if reachable.contains(node) {
            in_cycle.insert(node);
        }
    }
    let mut seen: BTreeSet<&str> = BTreeSet::new();
    for node in in_cycle.iter().copied().collect::<Vec<_>>() {
        if seen.contains(node) {
            continue;
        }
        let members: Vec<String> = in_cycle
            .iter()
            .filter(|other| reach[node].contains(**other) && reach[**other].contains(node))
            .map(|s| (*s).to_owned())
            .collect();
        for m in &members {
            seen.insert(in_cycle.get(m.as_str()).copied().unwrap_or_default());
        }
        findings.push(CoherenceFinding::SubclassCycle { members });
    }
}

fn dangling_references(ontology: &Ontology, findings: &mut Vec<CoherenceFinding>) {
    for term in ontology.terms.values() {
        let refs = term
            .superterms
            .iter()
            .map(|t| ("superterm", t))
            .chain(term.domain.iter().map(|t| ("domain", t)))
            .chain(term.range.iter().map(|t| ("range", t)));
        for (via, target) in refs {
            if !ontology.declares(target) {
                findings.push(CoherenceFinding::DanglingReference {
                    term: term.iri.clone(),
                    via,
                    target: target.clone(),
                });
            }
        }
    }
}

fn literal_range_violations(
    ontology: &Ontology,
    instance_store: &TripleStore,
    findings: &mut Vec<CoherenceFinding>,
) {
    for term in ontology.terms.values() {
        if term.category == TermCategory::Class {
            continue;
        }
        let Some(range) = &term.range else { continue };
        if !range.starts_with(vocab::XSD_NS) {
            continue;
        }
        let predicate = Term::iri(&term.iri);
        for usage in instance_store.match_pattern(None, Some(&predicate), None) {
            if !usage.object.is_literal() {
                findings.push(CoherenceFinding::LiteralRangeViolation {
                    property: term.iri.clone(),
                    subject: usage.subject.to_string(),
                });
            }
        }
    }
}
