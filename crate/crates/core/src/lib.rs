//! Knowledge-graph toolkit for smart-grid data.
//!
//! The crate ingests SCADA-style plant and production exports plus weather
//! fixtures, maps them to RDF under the Artemis ontology (which reuses
//! SEAS/CIM/SAREF/IDS terms), answers competency questions in materialized
//! and virtual modes, and runs a renewable-production forecasting scenario
//! whose results are written back into the knowledge graph.

pub mod connectors;
pub mod forecast;
pub mod mapping;
pub mod ontology;
pub mod pipeline;
pub mod query;
pub mod rdf;
pub mod turtle;
pub mod vocab;

#[cfg(test)]
pub(crate) mod test_support;

pub use rdf::{Literal, PrefixMap, Term, TermId, Triple, TripleStore};
pub use turtle::{parse_turtle, serialize_turtle, TurtleError};
