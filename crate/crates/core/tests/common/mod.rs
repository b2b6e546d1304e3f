#![allow(dead_code)] // each integration suite uses its own subset of these helpers
#![allow(clippy::needless_range_loop)]

//! Shared helpers for the integration suites: an independent naive-fixpoint
//! closure oracle, random graph and query generators, and fixture loading.

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use rand::rngs::StdRng;
use rand::Rng;

use artemis_kg::connectors::{standard_sources, CompareOp, SourceDescriptor};
use artemis_kg::mapping::{load_mappings, MappingRule};
use artemis_kg::pipeline::{build_knowledge_graph, BuildConfig, BuildOutput};
use artemis_kg::query::{FilterExpr, Operand, PatternTerm, SelectQuery, TriplePattern};
use artemis_kg::vocab;
use artemis_kg::{Term, Triple};

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("..").join("..").join("fixtures")
}

pub fn fixture_config() -> BuildConfig {
    let dir = fixtures_dir();
    BuildConfig {
        ontology_dir: dir.join("ontology"),
        mappings_file: dir.join("mappings/artemis-mappings.json"),
        sources_dir: dir.join("sources"),
    }
}

pub fn build_fixture() -> BuildOutput {
    build_knowledge_graph(&fixture_config()).expect("fixture builds")
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

/// Gaussian elimination with partial pivoting; the oracle-side linear
/// solver, independent of the library's eigendecomposition route.
pub fn solve_linear_system(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())
            .unwrap();
        a.swap(col, pivot);
        b.swap(col, pivot);
        assert!(a[col][col].abs() > 1e-12, "oracle system is singular");
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= factor * a[col][k];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut value = b[row];
        for k in row + 1..n {
            value -= a[row][k] * x[k];
        }
        x[row] = value / a[row][row];
    }
    x
}

/// Naive iterate-until-stable closure, reimplemented independently of the
/// engine under test: every pass rebuilds its lookup tables from scratch and
/// applies all seven rules against the full current set.
pub fn naive_closure(base: &BTreeSet<Triple>) -> BTreeSet<Triple> {
    let mut all: BTreeSet<Triple> = base.clone();
    loop {
        let mut discovered: Vec<Triple> = Vec::new();

        let mut sub_class: Vec<(&Term, &Term)> = Vec::new();
        let mut sub_prop: Vec<(&Term, &Term)> = Vec::new();
        let mut domain: Vec<(&Term, &Term)> = Vec::new();
        let mut range: Vec<(&Term, &Term)> = Vec::new();
        let mut equivalent: Vec<(&Term, &Term)> = Vec::new();
        let mut types: Vec<(&Term, &Term)> = Vec::new();
        let mut by_predicate: BTreeMap<&str, Vec<(&Term, &Term)>> = BTreeMap::new();

        for triple in &all {
            let Some(p) = triple.predicate.as_iri() else { continue };
            let entry = (&triple.subject, &triple.object);
            match p {
                vocab::RDFS_SUBCLASS_OF => sub_class.push(entry),
                vocab::RDFS_SUBPROPERTY_OF => sub_prop.push(entry),
                vocab::RDFS_DOMAIN => domain.push(entry),
                vocab::RDFS_RANGE => range.push(entry),
                vocab::OWL_EQUIVALENT_CLASS => equivalent.push(entry),
                vocab::RDF_TYPE => types.push(entry),
                _ => {}
            }
            by_predicate.entry(p).or_default().push(entry);
        }

        let type_iri = Term::iri(vocab::RDF_TYPE);
        let sub_class_iri = Term::iri(vocab::RDFS_SUBCLASS_OF);
        let sub_prop_iri = Term::iri(vocab::RDFS_SUBPROPERTY_OF);

        // rdfs11
        for &(a, b) in &sub_class {
            for &(c, d) in &sub_class {
                if b == c {
                    discovered.push(Triple::new(a.clone(), sub_class_iri.clone(), d.clone()));
                }
            }
        }
        // rdfs5
        for &(a, b) in &sub_prop {
            for &(c, d) in &sub_prop {
                if b == c {
                    discovered.push(Triple::new(a.clone(), sub_prop_iri.clone(), d.clone()));
                }
            }
        }
        // rdfs9: literal class targets derive nothing.
        for &(c, d) in &sub_class {
            if d.is_literal() {
                continue;
            }
            for &(x, t) in &types {
                if t == c {
                    discovered.push(Triple::new(x.clone(), type_iri.clone(), d.clone()));
                }
            }
        }
        // rdfs7: both properties must be IRIs to appear in predicate position.
        for &(p, q) in &sub_prop {
            let (Some(p), Some(_)) = (p.as_iri(), q.as_iri()) else { continue };
            if let Some(usages) = by_predicate.get(p) {
                for &(s, o) in usages {
                    discovered.push(Triple::new(s.clone(), q.clone(), o.clone()));
                }
            }
        }
        // rdfs2
        for &(p, c) in &domain {
            let Some(p) = p.as_iri() else { continue };
            if c.is_literal() {
                continue;
            }
            if let Some(usages) = by_predicate.get(p) {
                for &(s, _) in usages {
                    discovered.push(Triple::new(s.clone(), type_iri.clone(), c.clone()));
                }
            }
        }
        // rdfs3: never type a literal object.
        for &(p, c) in &range {
            let Some(p) = p.as_iri() else { continue };
            if c.is_literal() {
                continue;
            }
            if let Some(usages) = by_predicate.get(p) {
                for &(_, o) in usages {
                    if !o.is_literal() {
                        discovered.push(Triple::new(o.clone(), type_iri.clone(), c.clone()));
                    }
                }
            }
        }
        // owl:equivalentClass as mutual subClassOf.
        for &(a, b) in &equivalent {
            if b.is_literal() {
                continue;
            }
            discovered.push(Triple::new(a.clone(), sub_class_iri.clone(), b.clone()));
            discovered.push(Triple::new(b.clone(), sub_class_iri.clone(), a.clone()));
        }

        let before = all.len();
        for triple in discovered {
            if !triple.subject.is_literal() && triple.predicate.is_iri() {
                all.insert(triple);
            }
        }
        if all.len() == before {
            return all;
        }
    }
}

/// Random schema + instance graph for closure testing. Subclass and
/// subproperty edges only go from lower to higher indexes, so the schema is
/// a DAG and the closure stays bounded.
pub fn random_schema_graph(rng: &mut StdRng, max_triples: usize) -> BTreeSet<Triple> {
    let classes: Vec<Term> =
        (0..rng.random_range(5..20)).map(|i| Term::iri(format!("http://s/C{i}"))).collect();
    let properties: Vec<Term> =
        (0..rng.random_range(3..10)).map(|i| Term::iri(format!("http://s/p{i}"))).collect();
    let individuals: Vec<Term> =
        (0..rng.random_range(10..200)).map(|i| Term::iri(format!("http://s/i{i}"))).collect();

    let mut graph: BTreeSet<Triple> = BTreeSet::new();
    let schema_edges = rng.random_range(5..40);
    for _ in 0..schema_edges {
        match rng.random_range(0..10) {
            0..=4 => {
                let a = rng.random_range(0..classes.len().saturating_sub(1));
                let b = rng.random_range(a + 1..classes.len());
                graph.insert(Triple::new(
                    classes[a].clone(),
                    Term::iri(vocab::RDFS_SUBCLASS_OF),
                    classes[b].clone(),
                ));
            }
            5..=6 => {
                if properties.len() >= 2 {
                    let a = rng.random_range(0..properties.len() - 1);
                    let b = rng.random_range(a + 1..properties.len());
                    graph.insert(Triple::new(
                        properties[a].clone(),
                        Term::iri(vocab::RDFS_SUBPROPERTY_OF),
                        properties[b].clone(),
                    ));
                }
            }
            7 => {
                let p = &properties[rng.random_range(0..properties.len())];
                let c = &classes[rng.random_range(0..classes.len())];
                graph.insert(Triple::new(p.clone(), Term::iri(vocab::RDFS_DOMAIN), c.clone()));
            }
            8 => {
                let p = &properties[rng.random_range(0..properties.len())];
                let c = &classes[rng.random_range(0..classes.len())];
                graph.insert(Triple::new(p.clone(), Term::iri(vocab::RDFS_RANGE), c.clone()));
            }
            _ => {
                let a = &classes[rng.random_range(0..classes.len())];
                let b = &classes[rng.random_range(0..classes.len())];
                if a != b {
                    graph.insert(Triple::new(
                        a.clone(),
                        Term::iri(vocab::OWL_EQUIVALENT_CLASS),
                        b.clone(),
                    ));
                }
            }
        }
    }

    while graph.len() < max_triples {
        match rng.random_range(0..3) {
            0 => {
                let i = &individuals[rng.random_range(0..individuals.len())];
                let c = &classes[rng.random_range(0..classes.len())];
                graph.insert(Triple::new(i.clone(), Term::iri(vocab::RDF_TYPE), c.clone()));
            }
            1 => {
                let s = &individuals[rng.random_range(0..individuals.len())];
                let p = &properties[rng.random_range(0..properties.len())];
                let o = &individuals[rng.random_range(0..individuals.len())];
                graph.insert(Triple::new(s.clone(), p.clone(), o.clone()));
            }
            _ => {
                let s = &individuals[rng.random_range(0..individuals.len())];
                let p = &properties[rng.random_range(0..properties.len())];
                let value = rng.random_range(0..1000);
                graph.insert(Triple::new(s.clone(), p.clone(), Term::integer(value)));
            }
        }
    }
    graph
}

/// Random graph mixing IRIs, blanks and all literal forms, for round-trip
/// testing.
pub fn random_rdf_graph(rng: &mut StdRng, max_triples: usize) -> Vec<Triple> {
    let n = rng.random_range(0..=max_triples);
    let mut graph: BTreeSet<Triple> = BTreeSet::new();
    while graph.len() < n {
        let subject = match rng.random_range(0..4) {
            0 => Term::blank(format!("n{}", rng.random_range(0..6))),
            _ => Term::iri(format!("http://g/s{}", rng.random_range(0..12))),
        };
        let predicate = Term::iri(format!("http://g/p{}", rng.random_range(0..8)));
        let object = match rng.random_range(0..8) {
            0 => Term::blank(format!("n{}", rng.random_range(0..6))),
            1 => Term::iri(format!("http://g/o{}", rng.random_range(0..12))),
            2 => Term::lang(random_text(rng), ["en", "de", "sr"][rng.random_range(0..3)]),
            3 => Term::integer(rng.random_range(-1000..1000)),
            4 => Term::typed(format!("{}.{}", rng.random_range(0..100), rng.random_range(0..10)), vocab::XSD_DECIMAL),
            5 => Term::typed("2021-05-20T10:00:00Z", vocab::XSD_DATE_TIME),
            _ => Term::string(random_text(rng)),
        };
        graph.insert(Triple::new(subject, predicate, object));
    }
    graph.into_iter().collect()
}

fn random_text(rng: &mut StdRng) -> String {
    let alphabet = ['a', 'b', ' ', 'ä', '"', '\\', '\n', 'z', '0', '\t'];
    let len = rng.random_range(0..10);
    (0..len).map(|_| alphabet[rng.random_range(0..alphabet.len())]).collect()
}

/// Random queries over the mapped fixture vocabulary; every predicate is
/// producible by some mapping rule, so the query runs on both evaluation
/// paths.
pub fn random_fixture_query(rng: &mut StdRng) -> SelectQuery {
    let classes = [
        vocab::ARTEMIS_PLANT,
        vocab::ARTEMIS_ORGANIZATION,
        vocab::ARTEMIS_PRODUCTION_OBSERVATION,
        vocab::ARTEMIS_WEATHER_OBSERVATION,
    ];
    let predicates = [
        vocab::RDFS_LABEL,
        "https://projekat-artemis.rs/latitude",
        "https://projekat-artemis.rs/longitude",
        vocab::ARTEMIS_CITY,
        "https://projekat-artemis.rs/countryCode",
        vocab::ARTEMIS_EIC_FUNCTION_ACRONYM,
        "https://projekat-artemis.rs/assetName",
        "https://projekat-artemis.rs/ownedBy",
        "https://projekat-artemis.rs/shortName",
        vocab::ARTEMIS_ABOUT_PLANT,
        vocab::ARTEMIS_TIMESTAMP,
        vocab::ARTEMIS_HAS_ACTIVE_POWER_KW,
        vocab::ARTEMIS_STATUS,
        vocab::ARTEMIS_TEMPERATURE_C,
        vocab::ARTEMIS_WIND_SPEED_MS,
        vocab::ARTEMIS_GHI_WM2,
    ];
    let constants: [Term; 5] = [
        Term::string("Belgrade"),
        Term::string("RES-FV"),
        Term::string("ONLINE"),
        Term::iri("https://projekat-artemis.rs/data/plant/12_plant-a_belgrade"),
        Term::iri("https://projekat-artemis.rs/data/org/elektroco"),
    ];

    let n_patterns = rng.random_range(1..=3);
    let mut patterns = Vec::new();
    let mut vars: Vec<String> = vec!["s0".into()];
    for i in 0..n_patterns {
        let subject_var = if i == 0 || rng.random_range(0..3) == 0 {
            "s0".to_string()
        } else {
            vars[rng.random_range(0..vars.len())].clone()
        };
        let kind = rng.random_range(0..4);
        let pattern = match kind {
            0 => TriplePattern {
                subject: PatternTerm::Var(subject_var),
                predicate: PatternTerm::Term(Term::iri(vocab::RDF_TYPE)),
                object: PatternTerm::Term(Term::iri(classes[rng.random_range(0..classes.len())])),
            },
            1 => {
                let object_var = format!("o{i}");
                vars.push(object_var.clone());
                TriplePattern {
                    subject: PatternTerm::Var(subject_var),
                    predicate: PatternTerm::Term(Term::iri(
                        predicates[rng.random_range(0..predicates.len())],
                    )),
                    object: PatternTerm::Var(object_var),
                }
            }
            2 => TriplePattern {
                subject: PatternTerm::Var(subject_var),
                predicate: PatternTerm::Term(Term::iri(
                    predicates[rng.random_range(0..predicates.len())],
                )),
                object: PatternTerm::Term(constants[rng.random_range(0..constants.len())].clone()),
            },
            _ => {
                let object_var = format!("o{i}");
                vars.push(object_var.clone());
                TriplePattern {
                    subject: PatternTerm::Var(subject_var),
                    predicate: PatternTerm::Term(Term::iri(vocab::ARTEMIS_TIMESTAMP)),
                    object: PatternTerm::Var(object_var),
                }
            }
        };
        patterns.push(pattern);
    }

    let mut filters = Vec::new();
    if rng.random_range(0..2) == 0 {
        // Filter on some object variable if one exists.
        let object_vars: Vec<&String> = vars.iter().filter(|v| v.starts_with('o')).collect();
        if let Some(var) = object_vars.first() {
            let (op, constant) = match rng.random_range(0..3) {
                0 => (
                    CompareOp::Ge,
                    Term::typed("2021-05-20T06:00:00Z", vocab::XSD_DATE_TIME),
                ),
                1 => (CompareOp::Le, Term::typed("400.0", vocab::XSD_DECIMAL)),
                _ => (CompareOp::Ne, Term::string("OUTAGE")),
            };
            filters.push(FilterExpr {
                left: Operand::Var((*var).clone()),
                op,
                right: Operand::Term(constant),
            });
        }
    }

    let projected: Vec<String> = if rng.random_range(0..2) == 0 {
        vec![vars[0].clone()]
    } else {
        vars.clone()
    };

    SelectQuery { variables: projected, patterns, filters, order: None, limit: None }
}
