//! Browser demo: three interactive operations over the embedded fixture
//! knowledge graph - Turtle parsing, query evaluation (materialized or
//! virtual), and the production forecaster. Each function returns a JSON
//! string so the page stays plain JavaScript.
//!
//! Build for the web with `wasm-pack build --target web crates/wasm-demo`;
//! the functions also compile natively, which is how the test suite covers
//! them.

use std::cell::OnceCell;

use chrono::Duration;
use serde_json::{json, Value as Json};
use wasm_bindgen::prelude::*;

use artemis_kg::connectors::{parse_timestamp, standard_sources_from, SourceDescriptor, SourceLocation};
use artemis_kg::forecast::{
    extract_series, forecast_day_ahead, forecast_very_short_term, DriverKind, OutageInterval,
    PointStatus, WeatherPoint,
};
use artemis_kg::mapping::{load_mappings, MappingRule, Materializer};
use artemis_kg::ontology::{compute_closure, Ontology};
use artemis_kg::query::{evaluate, evaluate_virtual, parse_query, rewrite_virtual};
use artemis_kg::turtle::{encode_term, parse_turtle, TurtleError};
use artemis_kg::{PrefixMap, Term, TripleStore};

const ONTOLOGY_DOCS: [(&str, &str); 4] = [
    ("artemis-plant.ttl", include_str!("../../../fixtures/ontology/artemis-plant.ttl")),
    ("artemis-grid.ttl", include_str!("../../../fixtures/ontology/artemis-grid.ttl")),
    ("artemis-energy.ttl", include_str!("../../../fixtures/ontology/artemis-energy.ttl")),
    ("externals.ttl", include_str!("../../../fixtures/ontology/externals.ttl")),
];
const MAPPINGS_JSON: &str = include_str!("../../../fixtures/mappings/artemis-mappings.json");
const PLANTS_CSV: &str = include_str!("../../../fixtures/sources/plants.csv");
const ORGANIZATIONS_CSV: &str = include_str!("../../../fixtures/sources/organizations.csv");
const PRODUCTION_CSV: &str = include_str!("../../../fixtures/sources/production.csv");
const WEATHER_JSON: &str = include_str!("../../../fixtures/sources/weather.json");
const WEATHER_FORECAST_JSON: &str = include_str!("../../../fixtures/sources/weather_forecast.json");

pub const DEMO_PLANT: &str = "https://projekat-artemis.rs/data/plant/12_plant-a_belgrade";

fn embedded_sources() -> Vec<SourceDescriptor> {
    standard_sources_from(|name| {
        SourceLocation::Inline(
            match name {
                "plants.csv" => PLANTS_CSV,
                "organizations.csv" => ORGANIZATIONS_CSV,
                "production.csv" => PRODUCTION_CSV,
                "weather.json" => WEATHER_JSON,
                other => panic!("unexpected source {other}"),
            }
            .to_owned(),
        )
    })
}

struct Demo {
    /// Ontology + materialized data + inferred triples, ready for queries.
    combined: TripleStore,
    rules: Vec<MappingRule>,
    sources: Vec<SourceDescriptor>,
}

thread_local! {
    static DEMO: OnceCell<Demo> = const { OnceCell::new() };
}

fn with_demo<T>(f: impl FnOnce(&Demo) -> T) -> T {
    DEMO.with(|cell| {
        let demo = cell.get_or_init(|| {
            let documents: Vec<(String, String)> = ONTOLOGY_DOCS
                .iter()
                .map(|(name, text)| (name.to_string(), text.to_string()))
                .collect();
            let ontology = Ontology::load_documents(&documents).expect("embedded ontology loads");
            let sources = embedded_sources();
            let rules = load_mappings(MAPPINGS_JSON, &sources).expect("embedded mappings load");
            let mut store = ontology.store.clone();
            Materializer::new(&rules, &sources)
                .materialize(&mut store)
                .expect("embedded sources materialize");
            let closure = compute_closure(&store);
            Demo { combined: closure.combined().clone(), rules, sources }
        });
        f(demo)
    })
}

fn term_token(term: &Term) -> String {
    encode_term(term, &PrefixMap::well_known(), false)
}

/// Parse a Turtle document; returns the triples (as display tokens), the
/// declared prefixes and the triple count, or a positioned error.
#[wasm_bindgen]
pub fn parse_turtle_json(text: &str) -> String {
    match parse_turtle(text, None) {
        Ok((triples, prefixes)) => {
            let rows: Vec<Json> = triples
                .iter()
                .map(|t| {
                    json!({
                        "s": term_token(&t.subject),
                        "p": encode_term(&t.predicate, &PrefixMap::well_known(), true),
                        "o": term_token(&t.object),
                    })
                })
                .collect();
            let prefix_list: Vec<Json> =
                prefixes.iter().map(|(label, ns)| json!({"prefix": label, "namespace": ns})).collect();
            json!({"ok": true, "count": triples.len(), "triples": rows, "prefixes": prefix_list})
                .to_string()
        }
        Err(TurtleError::Syntax { line, column, message }) => {
            json!({"ok": false, "error": {"line": line, "column": column, "message": message}})
                .to_string()
        }
        Err(TurtleError::UnknownPrefix { prefix, line, column }) => json!({
            "ok": false,
            "error": {"line": line, "column": column, "message": format!("unknown prefix '{prefix}:'")}
        })
        .to_string(),
    }
}

/// Evaluate a query against the embedded knowledge graph. Materialized mode
/// sees the RDFS closure; virtual mode rewrites the query into source scans.
#[wasm_bindgen]
pub fn run_query_json(text: &str, virtual_mode: bool) -> String {
    let query = match parse_query(text) {
        Ok(query) => query,
        Err(err) => return json!({"ok": false, "error": err.to_string()}).to_string(),
    };
    with_demo(|demo| {
        let rows = if virtual_mode {
            match rewrite_virtual(&query, &demo.rules, &demo.sources)
                .and_then(|plan| evaluate_virtual(&plan, &demo.sources))
            {
                Ok(rows) => rows,
                Err(err) => return json!({"ok": false, "error": err.to_string()}).to_string(),
            }
        } else {
            evaluate(&demo.combined, &query)
        };
        let cells: Vec<Vec<String>> = rows
            .iter()
            .map(|row| {
                query
                    .variables
                    .iter()
                    .map(|v| row.get(v).map(term_token).unwrap_or_default())
                    .collect()
            })
            .collect();
        json!({"ok": true, "vars": query.variables, "rows": cells, "count": cells.len()})
            .to_string()
    })
}

/// Run the forecaster for the demo plant and return both the observed
/// history and the predicted points, ready for charting. `mode` is "vst"
/// (horizon/step/order apply) or "day-ahead" (driven by the embedded weather
/// forecast, with an optional outage window).
#[wasm_bindgen]
pub fn forecast_json(mode: &str, horizon_min: i64, step_min: i64, order: usize, outage: bool) -> String {
    with_demo(|demo| {
        let from = parse_timestamp("2021-05-20T00:00:00Z").unwrap();
        let to = parse_timestamp("2021-05-21T00:00:00Z").unwrap();
        let series = match extract_series(&demo.combined, DEMO_PLANT, from, to) {
            Ok(series) => series,
            Err(err) => return json!({"ok": false, "error": err.to_string()}).to_string(),
        };

        let result = match mode {
            "vst" => forecast_very_short_term(
                &series,
                Duration::minutes(horizon_min),
                Duration::minutes(step_min),
                order.max(1),
            ),
            "day-ahead" => {
                let observations = weather_points(WEATHER_JSON);
                let forecast = weather_points(WEATHER_FORECAST_JSON);
                let outages = if outage {
                    vec![OutageInterval {
                        start: parse_timestamp("2021-05-21T10:00:00Z").unwrap(),
                        end: parse_timestamp("2021-05-21T12:00:00Z").unwrap(),
                    }]
                } else {
                    Vec::new()
                };
                forecast_day_ahead(&series, &observations, &forecast, DriverKind::Irradiance, &outages)
            }
            other => {
                return json!({"ok": false, "error": format!("unknown mode {other:?}")}).to_string()
            }
        };
        let result = match result {
            Ok(result) => result,
            Err(err) => return json!({"ok": false, "error": err.to_string()}).to_string(),
        };

        let history: Vec<Json> = series
            .points
            .iter()
            .map(|p| {
                json!({
                    "ts": p.ts.to_rfc3339(),
                    "kw": p.value_kw,
                    "outage": p.status == PointStatus::Outage,
                })
            })
            .collect();
        let points: Vec<Json> = result
            .points
            .iter()
            .map(|p| json!({"ts": p.ts.to_rfc3339(), "kw": p.predicted_kw, "method": p.method}))
            .collect();
        json!({
            "ok": true,
            "plant": DEMO_PLANT,
            "history": history,
            "points": points,
            "diagnostics": {
                "method": result.diagnostics.method,
                "coefficients": result.diagnostics.coefficients,
                "training_size": result.diagnostics.training_size,
                "residual_norm": result.diagnostics.residual_norm,
            },
        })
        .to_string()
    })
}

fn weather_points(jsontext: &str) -> Vec<WeatherPoint> {
    let text = jsontext.to_owned();
    let sources = standard_sources_from(move |name| {
        SourceLocation::Inline(if name == "weather.json" { text.clone() } else { String::new() })
    });
    let weather = sources.into_iter().find(|s| s.id == "weather").expect("weather descriptor");
    weather.read().expect("embedded weather parses").rows.iter().filter_map(WeatherPoint::from_row).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_turtle_json_reports_triples_and_errors() {
        let ok: Json =
            serde_json::from_str(&parse_turtle_json("@prefix ex: <http://e/> . ex:a ex:b ex:c ."))
                .unwrap();
        assert_eq!(ok["ok"], true);
        assert_eq!(ok["count"], 1);

        let err: Json = serde_json::from_str(&parse_turtle_json("ex:a ex:b")).unwrap();
        assert_eq!(err["ok"], false);
        assert!(err["error"]["message"].is_string());
    }

    #[test]
    fn query_runs_on_both_paths() {
        let q = "SELECT ?plant WHERE { ?plant a artemis:Plant }";
        let materialized: Json = serde_json::from_str(&run_query_json(q, false)).unwrap();
        assert_eq!(materialized["ok"], true);
        assert_eq!(materialized["count"], 2);
        let virtualized: Json = serde_json::from_str(&run_query_json(q, true)).unwrap();
        assert_eq!(virtualized["count"], 2);
    }

    #[test]
    fn closure_is_visible_in_materialized_mode() {
        let q = "SELECT ?x WHERE { ?x a seas:FeatureOfInterest }";
        let materialized: Json = serde_json::from_str(&run_query_json(q, false)).unwrap();
        // Plants are features of interest through the subclass axiom.
        assert_eq!(materialized["count"], 2);
    }

    #[test]
    fn vst_forecast_returns_history_and_points() {
        let out: Json = serde_json::from_str(&forecast_json("vst", 120, 15, 4, false)).unwrap();
        assert_eq!(out["ok"], true, "error: {}", out["error"]);
        assert_eq!(out["history"].as_array().unwrap().len(), 96);
        assert_eq!(out["points"].as_array().unwrap().len(), 8);
    }

    #[test]
    fn day_ahead_outage_masks_predictions() {
        let out: Json = serde_json::from_str(&forecast_json("day-ahead", 0, 0, 0, true)).unwrap();
        assert_eq!(out["ok"], true, "error: {}", out["error"]);
        let masked: Vec<&Json> = out["points"]
            .as_array()
            .unwrap()
            .iter()
            .filter(|p| {
                let ts = p["ts"].as_str().unwrap();
                ts.contains("T10:00") || ts.contains("T11:00")
            })
            .collect();
        assert_eq!(masked.len(), 2);
        assert!(masked.iter().all(|p| p["kw"].as_f64().unwrap() == 0.0));
    }

    #[test]
    fn horizon_over_two_hours_is_an_error() {
        let out: Json = serde_json::from_str(&forecast_json("vst", 180, 15, 4, false)).unwrap();
        assert_eq!(out["ok"], false);
    }
}
