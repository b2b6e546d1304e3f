//! End-to-end orchestration: build the knowledge graph from the fixture
//! inputs, persist it as a Turtle snapshot, and load snapshots back.

use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::connectors::standard_sources;
use crate::mapping::{load_mappings, MappingError, MaterializationReport, Materializer};
use crate::ontology::{Ontology, OntologyError};
use crate::rdf::TripleStore;
use crate::turtle::{parse_turtle, serialize_turtle, TurtleError};
use crate::vocab;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Ontology(#[from] OntologyError),
    #[error(transparent)]
    Mapping(#[from] MappingError),
    #[error("snapshot: {0}")]
    Snapshot(#[from] TurtleError),
    #[error("failed to read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone)]
pub struct BuildConfig {
    pub ontology_dir: PathBuf,
    pub mappings_file: PathBuf,
    pub sources_dir: PathBuf,
}

pub struct BuildOutput {
    pub store: TripleStore,
    pub ontology: Ontology,
    pub report: MaterializationReport,
}

/// Load the ontology modules, load the mapping rules, and materialize the
/// standard sources into one store (schema plus data). Deterministic for
/// fixed inputs; running it twice yields byte-identical snapshots.
pub fn build_knowledge_graph(config: &BuildConfig) -> Result<BuildOutput, PipelineError> {
    let ontology = Ontology::load_dir(&config.ontology_dir)?;
    let mappings_text =
        std::fs::read_to_string(&config.mappings_file).map_err(|source| PipelineError::Io {
            path: config.mappings_file.display().to_string(),
            source,
        })?;
    let sources = standard_sources(&config.sources_dir);
    let rules = load_mappings(&mappings_text, &sources)?;

    let mut store = ontology.store.clone();
    let report = Materializer::new(&rules, &sources)
        .with_grounding(&ontology.store)
        .materialize(&mut store)?;
    Ok(BuildOutput { store, ontology, report })
}

/// Render a store as the canonical snapshot document.
pub fn store_to_snapshot(store: &TripleStore) -> String {
    let triples: Vec<_> = store.iter().collect();
    serialize_turtle(&triples, store.prefixes())
}

/// Parse a snapshot document back into a store. The legacy
/// `owl:subPropertyOf` spelling is normalized on the way in, so snapshots
/// and raw ontology documents load identically.
pub fn load_snapshot_text(text: &str) -> Result<TripleStore, PipelineError> {
    let (triples, prefixes) = parse_turtle(text, None)?;
    let mut store = TripleStore::new();
    store.add_prefixes(&prefixes);
    for triple in triples {
        let triple = if triple.predicate.as_iri() == Some(vocab::OWL_SUB_PROPERTY_OF) {
            crate::rdf::Triple::new(
                triple.subject,
                crate::rdf::Term::iri(vocab::RDFS_SUBPROPERTY_OF),
                triple.object,
            )
        } else {
            triple
        };
        store.insert(&triple);
    }
    Ok(store)
}

pub fn load_snapshot_file(path: &Path) -> Result<TripleStore, PipelineError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| PipelineError::Io { path: path.display().to_string(), source })?;
    load_snapshot_text(&text)
}
