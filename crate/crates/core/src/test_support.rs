//! Shared helpers for unit tests: loading the repository fixtures and
//! building the materialized fixture store.

use std::path::{Path, PathBuf};

use crate::connectors::{standard_sources, SourceDescriptor};
use crate::mapping::{load_mappings, MappingRule, MaterializationReport, Materializer};
use crate::ontology::Ontology;
use crate::rdf::TripleStore;

pub fn fixtures_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("..").join("..").join("fixtures")
}

pub fn fixture_ontology() -> Ontology {
    Ontology::load_dir(&fixtures_dir().join("ontology")).expect("fixture ontology loads")
}

pub fn fixture_sources() -> Vec<SourceDescriptor> {
    standard_sources(&fixtures_dir().join("sources"))
}

pub fn fixture_rules(sources: &[SourceDescriptor]) -> Vec<MappingRule> {
    let json = std::fs::read_to_string(fixtures_dir().join("mappings/artemis-mappings.json"))
        .expect("fixture mappings readable");
    load_mappings(&json, sources).expect("fixture mappings load")
}

pub fn cq_catalog_text() -> String {
    std::fs::read_to_string(fixtures_dir().join("cq/catalog.txt")).expect("cq catalog readable")
}

/// Ontology + materialized fixture data in one store, as the build pipeline
/// produces it.
pub fn materialized_fixture() -> (TripleStore, MaterializationReport, Ontology) {
    let ontology = fixture_ontology();
    let sources = fixture_sources();
    let rules = fixture_rules(&sources);
    let mut store = ontology.store.clone();
    let report = Materializer::new(&rules, &sources)
        .with_grounding(&ontology.store)
        .materialize(&mut store)
        .expect("fixture materializes");
    (store, report, ontology)
}
