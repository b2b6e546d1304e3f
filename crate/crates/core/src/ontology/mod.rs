//! Ontology modules: loading, RDFS-lite closure, and quality evaluation.

mod closure;
mod competency;
mod validate;

pub use closure::{compute_closure, ClosureGraph};
pub use competency::{check_competency, check_one, CqCheckError, CqOutcome};
pub use validate::{validate, CoherenceFinding, ValidationReport};

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use thiserror::Error;

use crate::rdf::{PrefixMap, Term, Triple, TripleStore};
use crate::turtle::{parse_turtle, TurtleError};
use crate::vocab;

#[derive(Debug, Error)]
pub enum OntologyError {
    #[error("in {document}: {source}")]
    Parse {
        document: String,
        #[source]
        source: TurtleError,
    },
    #[error("term {term} is defined in two modules: {first} and {second}")]
    ConflictingDefinition { term: String, first: String, second: String },
    #[error("term {term} has invalid status {status:?}")]
    InvalidTermStatus { term: String, status: String },
    #[error("failed to read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// One ontology module, identified by its `owl:Ontology` header.
#[derive(Debug, Clone, Default)]
pub struct OntologyModule {
    pub iri: String,
    pub title: Option<String>,
    pub version_iri: Option<String>,
    pub version_label: Option<String>,
    pub issued: Option<String>,
    pub license: Option<String>,
    pub preferred_prefix: Option<String>,
    pub preferred_namespace: Option<String>,
    /// IRIs of the terms carrying `rdfs:isDefinedBy` this module.
    pub terms: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TermCategory {
    Class,
    ObjectProperty,
    DatatypeProperty,
}

/// A class or property definition attributed to a module via
/// `rdfs:isDefinedBy`.
#[derive(Debug, Clone)]
pub struct TermDefinition {
    pub iri: String,
    pub module: String,
    pub category: TermCategory,
    pub label: Option<String>,
    pub comment: Option<String>,
    /// `rdfs:subClassOf` / `rdfs:subPropertyOf` targets.
    pub superterms: Vec<String>,
    pub domain: Option<String>,
    pub range: Option<String>,
    pub status: Option<String>,
}

const VALID_STATUSES: [&str; 4] = ["testing", "stable", "archaic", "unstable"];

/// The loaded ontology: one merged store plus the module and term indexes
/// derived from it.
#[derive(Debug, Clone)]
pub struct Ontology {
    pub store: TripleStore,
    pub modules: Vec<OntologyModule>,
    pub terms: BTreeMap<String, TermDefinition>,
    pub warnings: Vec<String>,
}

impl Ontology {
    /// Load and merge a set of Turtle documents, given as (name, text) pairs.
    /// External terms stay in the store as declaration stubs; module and term
    /// indexes are derived from `owl:Ontology` headers and `rdfs:isDefinedBy`.
    pub fn load_documents(documents: &[(String, String)]) -> Result<Self, OntologyError> {
        let mut store = TripleStore::new();
        let mut warnings = Vec::new();
        for (name, text) in documents {
            let (triples, prefixes) = parse_turtle(text, None)
                .map_err(|source| OntologyError::Parse { document: name.clone(), source })?;
            store.add_prefixes(&prefixes);
            for triple in normalize_legacy_axioms(triples, name, &mut warnings) {
                store.insert(&triple);
            }
        }
        Self::from_store(store, warnings)
    }

    /// Load every `.ttl` file in a directory, in file-name order.
    pub fn load_dir(dir: &Path) -> Result<Self, OntologyError> {
        let mut paths: Vec<_> = fs::read_dir(dir)
            .map_err(|source| OntologyError::Io { path: dir.display().to_string(), source })?
            .filter_map(|entry| entry.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|ext| ext == "ttl"))
            .collect();
        paths.sort();
        let mut documents = Vec::new();
        for path in paths {
            let text = fs::read_to_string(&path)
                .map_err(|source| OntologyError::Io { path: path.display().to_string(), source })?;
            documents.push((path.display().to_string(), text));
        }
        Self::load_documents(&documents)
    }

    /// Rebuild the module and term indexes from an already-merged store,
    /// e.g. one loaded from a snapshot.
    pub fn from_store(store: TripleStore, mut warnings: Vec<String>) -> Result<Self, OntologyError> {
        let type_iri = Term::iri(vocab::RDF_TYPE);
        let ontology_class = Term::iri(vocab::OWL_ONTOLOGY);

        let mut modules: Vec<OntologyModule> = store
            .match_pattern(None, Some(&type_iri), Some(&ontology_class))
            .filter_map(|t| t.subject.as_iri().map(str::to_owned))
            .map(|iri| read_module(&store, iri))
            .collect();
        modules.sort_by(|a, b| a.iri.cmp(&b.iri));

        let defined_by = Term::iri(vocab::RDFS_IS_DEFINED_BY);
        let mut terms: BTreeMap<String, TermDefinition> = BTreeMap::new();
        for triple in store.match_pattern(None, Some(&defined_by), None) {
            let (Some(term_iri), Some(module_iri)) =
                (triple.subject.as_iri(), triple.object.as_iri())
            else {
                continue;
            };
            if let Some(existing) = terms.get(term_iri) {
                if existing.module != module_iri {
                    return Err(OntologyError::ConflictingDefinition {
                        term: term_iri.to_owned(),
                        first: existing.module.clone(),
                        second: module_iri.to_owned(),
                    });
                }
                continue;
            }
            if let Some(def) = read_term_definition(&store, term_iri, module_iri)? {
                terms.insert(term_iri.to_owned(), def);
            } else {
                warnings.push(format!(
                    "{term_iri} carries rdfs:isDefinedBy but no class/property declaration"
                ));
            }
        }

        for module in &mut modules {
            module.terms =
                terms.values().filter(|d| d.module == module.iri).map(|d| d.iri.clone()).collect();
            module.terms.sort();
        }

        Ok(Ontology { store, modules, terms, warnings })
    }

    pub fn module(&self, iri: &str) -> Option<&OntologyModule> {
        self.modules.iter().find(|m| m.iri == iri)
    }

    pub fn prefixes(&self) -> &PrefixMap {
        self.store.prefixes()
    }

    /// True when `iri` is declared anywhere in the store (as a triple
    /// subject) or belongs to the built-in RDF/RDFS/OWL/XSD vocabulary.
    pub fn declares(&self, iri: &str) -> bool {
        if vocab::is_builtin_vocabulary(iri) {
            return true;
        }
        self.store.match_pattern(Some(&Term::iri(iri)), None, None).next().is_some()
    }
}

/// Rewrites `owl:subPropertyOf` (seen in legacy documents) to
/// `rdfs:subPropertyOf`, recording one warning per document.
fn normalize_legacy_axioms(
    triples: Vec<Triple>,
    document: &str,
    warnings: &mut Vec<String>,
) -> Vec<Triple> {
    let mut rewritten = 0usize;
    let out: Vec<Triple> = triples
        .into_iter()
        .map(|t| {
            if t.predicate.as_iri() == Some(vocab::OWL_SUB_PROPERTY_OF) {
                rewritten += 1;
                Triple::new(t.subject, Term::iri(vocab::RDFS_SUBPROPERTY_OF), t.object)
            } else {
                t
            }
        })
        .collect();
    if rewritten > 0 {
        warnings.push(format!(
            "{document}: normalized {rewritten} owl:subPropertyOf statement(s) to rdfs:subPropertyOf"
        ));
    }
    out
}

fn read_module(store: &TripleStore, iri: String) -> OntologyModule {
    let subject = Term::iri(&iri);
    let literal_of = |predicate: &str| -> Option<String> {
        store
            .match_pattern(Some(&subject), Some(&Term::iri(predicate)), None)
            .next()
            .and_then(|t| t.object.as_literal().map(|l| l.lexical().to_owned()))
    };
    let iri_of = |predicate: &str| -> Option<String> {
        store
            .match_pattern(Some(&subject), Some(&Term::iri(predicate)), None)
            .next()
            .and_then(|t| t.object.as_iri().map(str::to_owned))
    };
    OntologyModule {
        title: literal_of(vocab::DCTERMS_TITLE),
        version_iri: iri_of(vocab::OWL_VERSION_IRI),
        version_label: literal_of(vocab::OWL_VERSION_INFO),
        issued: literal_of(vocab::DCTERMS_ISSUED),
        license: iri_of(vocab::DCTERMS_LICENSE),
        preferred_prefix: literal_of(vocab::VANN_PREFERRED_PREFIX),
        preferred_namespace: iri_of(vocab::VANN_PREFERRED_URI),
        terms: Vec::new(),
        iri,
    }
}

fn read_term_definition(
    store: &TripleStore,
    term_iri: &str,
    module_iri: &str,
) -> Result<Option<TermDefinition>, OntologyError> {
    let subject = Term::iri(term_iri);
    let type_iri = Term::iri(vocab::RDF_TYPE);
    let mut category = None;
    for t in store.match_pattern(Some(&subject), Some(&type_iri), None) {
        category = match t.object.as_iri() {
            Some(vocab::OWL_CLASS) => Some(TermCategory::Class),
            Some(vocab::OWL_OBJECT_PROPERTY) => Some(TermCategory::ObjectProperty),
            Some(vocab::OWL_DATATYPE_PROPERTY) => Some(TermCategory::DatatypeProperty),
            _ => continue,
        };
        break;
    }
    let Some(category) = category else {
        return Ok(None);
    };

    let en_literal = |predicate: &str| -> Option<String> {
        store
            .match_pattern(Some(&subject), Some(&Term::iri(predicate)), None)
            .filter_map(|t| t.object.as_literal().cloned())
            .find(|l| l.language().is_none_or(|tag| tag == "en"))
            .map(|l| l.lexical().to_owned())
    };
    let iri_of = |predicate: &str| -> Option<String> {
        store
            .match_pattern(Some(&subject), Some(&Term::iri(predicate)), None)
            .next()
            .and_then(|t| t.object.as_iri().map(str::to_owned))
    };

    let super_predicate = match category {
        TermCategory::Class => vocab::RDFS_SUBCLASS_OF,
        _ => vocab::RDFS_SUBPROPERTY_OF,
    };
    let mut superterms: Vec<String> = store
        .match_pattern(Some(&subject), Some(&Term::iri(super_predicate)), None)
        .filter_map(|t| t.object.as_iri().map(str::to_owned))
        .collect();
    superterms.sort();

    let status = en_literal(vocab::VS_TERM_STATUS);
    if let Some(status) = &status {
        if !VALID_STATUSES.contains(&status.as_str()) {
            return Err(OntologyError::InvalidTermStatus {
                term: term_iri.to_owned(),
                status: status.clone(),
            });
        }
    }

    // Only properties carry domain/range; a class with them would be
    // category-inconsistent and is reported by validation, not here.
    let (domain, range) = match category {
        TermCategory::Class => (None, None),
        _ => (iri_of(vocab::RDFS_DOMAIN), iri_of(vocab::RDFS_RANGE)),
    };

    Ok(Some(TermDefinition {
        iri: term_iri.to_owned(),
        module: module_iri.to_owned(),
        category,
        label: en_literal(vocab::RDFS_LABEL),
        comment: en_literal(vocab::RDFS_COMMENT),
        superterms,
        domain,
        range,
        status,
    }))
}
