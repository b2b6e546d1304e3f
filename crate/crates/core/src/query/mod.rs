//! SPARQL-subset query engine: parsing, evaluation over the materialized
//! store, and the virtual (source-scanning) path. Hosts the competency
//! question catalog.

mod ast;
mod cq;
mod eval;
mod parser;
mod virt;

pub use ast::{FilterExpr, Operand, OrderSpec, PatternTerm, SelectQuery, SolutionRow, TriplePattern};
pub use cq::{find_question, parse_catalog, CompetencyQuestion, CqError};
pub use eval::evaluate;
pub use parser::{parse_query, QueryParseError};
pub use virt::{
    evaluate_virtual, rewrite_virtual, ColumnEquality, PatternPlan, PushedFilter, RewriteError,
    RouteObject, ScanRoute, VirtualPlan,
};

use crate::rdf::Term;

/// Render solutions as TSV: one header line with the projected variables,
/// then one line per row with N-Triples-style terms.
pub fn solutions_to_tsv(variables: &[String], rows: &[SolutionRow]) -> String {
    let mut out = String::new();
    out.push_str(&variables.join("\t"));
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = variables
            .iter()
            .map(|v| row.get(v).map(Term::to_string).unwrap_or_default())
            .collect();
        out.push_str(&cells.join("\t"));
        out.push('\n');
    }
    out
}
