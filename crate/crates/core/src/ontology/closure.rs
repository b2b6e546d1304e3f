//! RDFS-lite forward-chaining closure.
//!
//! Rule set: rdfs5 (subPropertyOf transitivity), rdfs7 (property
//! inheritance), rdfs9 (type inheritance), rdfs11 (subClassOf transitivity),
//! rdfs2 (domain typing), rdfs3 (range typing), and `owl:equivalentClass`
//! treated as mutual `rdfs:subClassOf`. The fixpoint is reached by
//! semi-naive iteration: each newly derived triple is joined against the
//! already-derived set, so the engine terminates on any finite store (every
//! rule only combines terms that already exist).

use crate::rdf::{Term, Triple, TripleStore};
use crate::vocab;

/// Result of a closure computation: the inferred triples, disjoint from the
/// base store they were derived from, plus a combined store for evaluation.
/// The graph is immutable once computed and can be shared freely.
#[derive(Debug, Clone)]
pub struct ClosureGraph {
    inferred: Vec<Triple>,
    combined: TripleStore,
}

impl ClosureGraph {
    /// Triples derived by the rules and not present in the base.
    pub fn inferred(&self) -> &[Triple] {
        &self.inferred
    }

    /// Base plus inferred triples; what competency questions evaluate over.
    pub fn combined(&self) -> &TripleStore {
        &self.combined
    }

    pub fn inferred_len(&self) -> usize {
        self.inferred.len()
    }
}

/// Least fixpoint of the rule set over `store`, read-only over the base.
pub fn compute_closure(store: &TripleStore) -> ClosureGraph {
    let rdf_type = Term::iri(vocab::RDF_TYPE);
    let sub_class = Term::iri(vocab::RDFS_SUBCLASS_OF);
    let sub_prop = Term::iri(vocab::RDFS_SUBPROPERTY_OF);
    let domain = Term::iri(vocab::RDFS_DOMAIN);
    let range = Term::iri(vocab::RDFS_RANGE);

    let mut combined = store.clone();
    let mut frontier: Vec<Triple> = store.iter().collect();
    let mut inferred: Vec<Triple> = Vec::new();

    while let Some(triple) = frontier.pop() {
        let mut derived: Vec<Triple> = Vec::new();
        let p = triple.predicate.as_iri().unwrap_or_default();

        match p {
            vocab::RDFS_SUBCLASS_OF => {
                // rdfs11, both join directions.
                for left in combined.match_pattern(None, Some(&sub_class), Some(&triple.subject)) {
                    derived.push(Triple::new(left.subject, sub_class.clone(), triple.object.clone()));
                }
                if !triple.object.is_literal() {
                    for right in combined.match_pattern(Some(&triple.object), Some(&sub_class), None) {
                        derived.push(Triple::new(triple.subject.clone(), sub_class.clone(), right.object));
                    }
                    // rdfs9 against existing instances.
                    for inst in combined.match_pattern(None, Some(&rdf_type), Some(&triple.subject)) {
                        derived.push(Triple::new(inst.subject, rdf_type.clone(), triple.object.clone()));
                    }
                }
            }
            vocab::RDFS_SUBPROPERTY_OF => {
                // rdfs5, both join directions.
                for left in combined.match_pattern(None, Some(&sub_prop), Some(&triple.subject)) {
                    derived.push(Triple::new(left.subject, sub_prop.clone(), triple.object.clone()));
                }
                if !triple.object.is_literal() {
                    for right in combined.match_pattern(Some(&triple.object), Some(&sub_prop), None) {
                        derived.push(Triple::new(triple.subject.clone(), sub_prop.clone(), right.object));
                    }
                }
                // rdfs7 against existing uses of the subproperty.
                if let (Some(_), Some(q)) = (triple.subject.as_iri(), triple.object.as_iri()) {
                    let super_prop = Term::iri(q);
                    for usage in combined.match_pattern(None, Some(&triple.subject), None) {
                        derived.push(Triple::new(usage.subject, super_prop.clone(), usage.object));
                    }
                }
            }
            vocab::RDFS_DOMAIN => {
                if !triple.object.is_literal() {
                    for usage in combined.match_pattern(None, Some(&triple.subject), None) {
                        derived.push(Triple::new(usage.subject, rdf_type.clone(), triple.object.clone()));
                    }
                }
            }
            vocab::RDFS_RANGE => {
                if !triple.object.is_literal() {
                    for usage in combined.match_pattern(None, Some(&triple.subject), None) {
                        if !usage.object.is_literal() {
                            derived.push(Triple::new(usage.object, rdf_type.clone(), triple.object.clone()));
                        }
                    }
                }
            }
            vocab::RDF_TYPE => {
                // rdfs9 against existing subclass axioms. Literal class
                // targets derive nothing (mirrors the axiom-side guard).
                if !triple.object.is_literal() {
                    for axiom in combined.match_pattern(Some(&triple.object), Some(&sub_class), None) {
                        if axiom.object.is_literal() {
                            continue;
                        }
                        derived.push(Triple::new(triple.subject.clone(), rdf_type.clone(), axiom.object));
                    }
                }
            }
            vocab::OWL_EQUIVALENT_CLASS if !triple.object.is_literal() => {
                derived.push(Triple::new(triple.subject.clone(), sub_class.clone(), triple.object.clone()));
                derived.push(Triple::new(triple.object.clone(), sub_class.clone(), triple.subject.clone()));
            }
            _ => {}
        }

        // Any triple can be the instance-side premise of rdfs7/rdfs2/rdfs3.
        let pred_term = Term::iri(p);
        for axiom in combined.match_pattern(Some(&pred_term), Some(&sub_prop), None) {
            if let Some(q) = axiom.object.as_iri() {
                derived.push(Triple::new(triple.subject.clone(), Term::iri(q), triple.object.clone()));
            }
        }
        for axiom in combined.match_pattern(Some(&pred_term), Some(&domain), None) {
            if !axiom.object.is_literal() {
                derived.push(Triple::new(triple.subject.clone(), rdf_type.clone(), axiom.object));
            }
        }
        if !triple.object.is_literal() {
            for axiom in combined.match_pattern(Some(&pred_term), Some(&range), None) {
                if !axiom.object.is_literal() {
                    derived.push(Triple::new(triple.object.clone(), rdf_type.clone(), axiom.object));
                }
            }
        }

        for t in derived {
            if t.subject.is_literal() || !t.predicate.is_iri() {
                continue;
            }
            if combined.insert(&t) {
                inferred.push(t.clone());
                frontier.push(t);
            }
        }
    }

    inferred.sort();
    ClosureGraph { inferred, combined }
}
