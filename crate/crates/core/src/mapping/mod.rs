//! Declarative mapping rules turning source rows into triples, and the
//! materialization path that loads them into the store with curation
//! accounting (skipped rows, dropped assertions, suppressed duplicates).

mod template;

pub use template::IriTemplate;
pub(crate) use template::iri_component;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::Deserialize;
use thiserror::Error;

use crate::connectors::{ConnectorError, Row, SourceDescriptor, SourceRows, UniqueIdTemplate};
use crate::rdf::{PrefixMap, Term, Triple, TripleStore};
use crate::vocab;

#[derive(Debug, Error)]
pub enum MappingError {
    #[error("mapping document is not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("rule {rule_id} references unknown source {source_id}")]
    UnknownSource { rule_id: String, source_id: String },
    #[error("rule {rule_id}: malformed template {template:?}: {message}")]
    MalformedTemplate { rule_id: String, template: String, message: String },
    #[error("rule {rule_id}: template column {column} is not in source {source_id}")]
    UnknownTemplateColumn { rule_id: String, column: String, source_id: String },
    #[error("rule {rule_id}: invalid datatype IRI {datatype}")]
    InvalidDatatype { rule_id: String, datatype: String },
    #[error("rule {rule_id}: cannot resolve {text:?} as an IRI or literal")]
    UnresolvableTerm { rule_id: String, text: String },
    #[error("rule {rule_id}: predicate-object map must have exactly one of column, constant, iri_template")]
    AmbiguousObjectSpec { rule_id: String },
    #[error(transparent)]
    Connector(#[from] ConnectorError),
}

const ALLOWED_DATATYPES: [&str; 6] = [
    vocab::XSD_STRING,
    vocab::XSD_INTEGER,
    vocab::XSD_DECIMAL,
    vocab::XSD_DATE_TIME,
    vocab::XSD_BOOLEAN,
    vocab::XSD_DOUBLE,
];

/// How a predicate-object map produces its object term.
#[derive(Debug, Clone)]
pub enum ObjectSpec {
    /// Typed literal from a column value.
    Column { column: String, datatype: String },
    /// A fixed term.
    Constant(Term),
    /// IRI minted from column values.
    IriTemplate(IriTemplate),
}

impl ObjectSpec {
    /// Object term for one row; `None` when the backing value is null.
    pub(crate) fn make_term(&self, row: &Row) -> Option<Term> {
        match self {
            ObjectSpec::Column { column, datatype } => row
                .get(column)
                .canonical_string()
                .map(|lexical| Term::typed(lexical, datatype.clone())),
            ObjectSpec::Constant(term) => Some(term.clone()),
            ObjectSpec::IriTemplate(template) => template.render(row).map(Term::iri),
        }
    }
}

#[derive(Debug, Clone)]
pub struct PredicateObjectMap {
    pub predicate: String,
    pub object: ObjectSpec,
}

/// One declarative rule: rows of `source` become triples about the subject
/// minted by `subject_template`.
#[derive(Debug, Clone)]
pub struct MappingRule {
    pub rule_id: String,
    pub source: String,
    pub subject_template: IriTemplate,
    pub class: Option<String>,
    pub poms: Vec<PredicateObjectMap>,
}

#[derive(Deserialize)]
struct RawDocument {
    rules: Vec<RawRule>,
}

#[derive(Deserialize)]
struct RawRule {
    rule_id: String,
    source: String,
    subject_template: String,
    #[serde(default)]
    class: Option<String>,
    predicate_object_maps: Vec<RawPom>,
}

#[derive(Deserialize)]
struct RawPom {
    predicate: String,
    #[serde(default)]
    column: Option<String>,
    #[serde(default)]
    constant: Option<String>,
    #[serde(default)]
    iri_template: Option<String>,
    #[serde(default)]
    datatype: Option<String>,
}

/// Parse and validate a mapping document (JSON, `{"rules": [...]}` with the
/// field names used by the shipped fixture).
pub fn load_mappings(
    json: &str,
    sources: &[SourceDescriptor],
) -> Result<Vec<MappingRule>, MappingError> {
    let prefixes = PrefixMap::well_known();
    let document: RawDocument = serde_json::from_str(json)?;
    let mut rules = Vec::with_capacity(document.rules.len());
    for raw in document.rules {
        let source = sources.iter().find(|s| s.id == raw.source).ok_or_else(|| {
            MappingError::UnknownSource { rule_id: raw.rule_id.clone(), source_id: raw.source.clone() }
        })?;

        let subject_template = parse_template(&raw.rule_id, &raw.subject_template, source, &prefixes)?;

        let class = raw
            .class
            .map(|text| resolve_iri_text(&raw.rule_id, &text, &prefixes))
            .transpose()?;

        let mut poms = Vec::with_capacity(raw.predicate_object_maps.len());
        for raw_pom in raw.predicate_object_maps {
            let predicate = resolve_iri_text(&raw.rule_id, &raw_pom.predicate, &prefixes)?;
            let object = match (&raw_pom.column, &raw_pom.constant, &raw_pom.iri_template) {
                (Some(column), None, None) => {
                    if !source.has_column(column) {
                        return Err(MappingError::UnknownTemplateColumn {
                            rule_id: raw.rule_id.clone(),
                            column: column.clone(),
                            source_id: source.id.clone(),
                        });
                    }
                    let datatype = match &raw_pom.datatype {
                        Some(text) => {
                            let iri = resolve_iri_text(&raw.rule_id, text, &prefixes)?;
                            if !ALLOWED_DATATYPES.contains(&iri.as_str()) {
                                return Err(MappingError::InvalidDatatype {
                                    rule_id: raw.rule_id.clone(),
                                    datatype: text.clone(),
                                });
                            }
                            iri
                        }
                        None => vocab::XSD_STRING.to_owned(),
                    };
                    ObjectSpec::Column { column: column.clone(), datatype }
                }
                (None, Some(constant), None) => {
                    ObjectSpec::Constant(resolve_term_text(&raw.rule_id, constant, &prefixes)?)
                }
                (None, None, Some(template)) => {
                    ObjectSpec::IriTemplate(parse_template(&raw.rule_id, template, source, &prefixes)?)
                }
                _ => return Err(MappingError::AmbiguousObjectSpec { rule_id: raw.rule_id.clone() }),
            };
            poms.push(PredicateObjectMap { predicate, object });
        }

        rules.push(MappingRule {
            rule_id: raw.rule_id,
            source: raw.source,
            subject_template,
            class,
            poms,
        });
    }
    Ok(rules)
}

fn parse_template(
    rule_id: &str,
    text: &str,
    source: &SourceDescriptor,
    prefixes: &PrefixMap,
) -> Result<IriTemplate, MappingError> {
    let template = IriTemplate::parse(text, prefixes).map_err(|message| {
        MappingError::MalformedTemplate {
            rule_id: rule_id.to_owned(),
            template: text.to_owned(),
            message,
        }
    })?;
    for column in template.columns() {
        if !source.has_column(column) {
            return Err(MappingError::UnknownTemplateColumn {
                rule_id: rule_id.to_owned(),
                column: column.to_owned(),
                source_id: source.id.clone(),
            });
        }
    }
    Ok(template)
}

fn resolve_iri_text(
    rule_id: &str,
    text: &str,
    prefixes: &PrefixMap,
) -> Result<String, MappingError> {
    if text.contains("://") {
        return Ok(text.to_owned());
    }
    if let Some((label, local)) = text.split_once(':') {
        if let Some(iri) = prefixes.expand(label, local) {
            return Ok(iri);
        }
    }
    Err(MappingError::UnresolvableTerm { rule_id: rule_id.to_owned(), text: text.to_owned() })
}

/// A constant is either an IRI (full or prefixed) or a quoted literal with
/// an optional `@lang` or `^^datatype` suffix.
fn resolve_term_text(
    rule_id: &str,
    text: &str,
    prefixes: &PrefixMap,
) -> Result<Term, MappingError> {
    if let Some(rest) = text.strip_prefix('"') {
        let Some((lexical, suffix)) = rest.rsplit_once('"') else {
            return Err(MappingError::UnresolvableTerm {
                rule_id: rule_id.to_owned(),
                text: text.to_owned(),
            });
        };
        if suffix.is_empty() {
            return Ok(Term::string(lexical));
        }
        if let Some(tag) = suffix.strip_prefix('@') {
            return Ok(Term::lang(lexical, tag));
        }
        if let Some(dt) = suffix.strip_prefix("^^") {
            return Ok(Term::typed(lexical, resolve_iri_text(rule_id, dt, prefixes)?));
        }
        return Err(MappingError::UnresolvableTerm {
            rule_id: rule_id.to_owned(),
            text: text.to_owned(),
        });
    }
    Ok(Term::iri(resolve_iri_text(rule_id, text, prefixes)?))
}

/// Result of applying one rule to one row.
#[derive(Debug, Clone, Default)]
pub struct RuleApplication {
    pub triples: Vec<Triple>,
    /// Assertions not emitted because the object value was null.
    pub dropped_assertions: usize,
    /// True when a null subject-template column made the row unusable.
    pub skipped: bool,
}

/// Expand one rule over one row: a subject minted from the template, one
/// rdf:type triple when the rule declares a class, and one triple per
/// predicate-object map with a non-null object. Null object values drop the
/// single assertion; a null subject-key value skips the whole row.
pub fn apply_rule(rule: &MappingRule, row: &Row) -> RuleApplication {
    let mut out = RuleApplication::default();
    let Some(subject_iri) = rule.subject_template.render(row) else {
        out.skipped = true;
        return out;
    };
    let subject = Term::iri(subject_iri);

    if let Some(class) = &rule.class {
        out.triples.push(Triple::new(
            subject.clone(),
            Term::iri(vocab::RDF_TYPE),
            Term::iri(class),
        ));
    }

    for pom in &rule.poms {
        match pom.object.make_term(row) {
            Some(object) => {
                out.triples.push(Triple::new(subject.clone(), Term::iri(&pom.predicate), object));
            }
            None => out.dropped_assertions += 1,
        }
    }
    out
}

/// Accounting of one materialization run. The invariant
/// `triples_generated - duplicates_suppressed == store growth` holds on
/// every run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MaterializationReport {
    pub rows_read: usize,
    pub rows_skipped: usize,
    pub triples_generated: usize,
    pub duplicates_suppressed: usize,
    pub assertions_dropped: usize,
    pub warnings: Vec<String>,
}

impl fmt::Display for MaterializationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "rows read:             {}", self.rows_read)?;
        writeln!(f, "rows skipped:          {}", self.rows_skipped)?;
        writeln!(f, "triples generated:     {}", self.triples_generated)?;
        writeln!(f, "duplicates suppressed: {}", self.duplicates_suppressed)?;
        writeln!(f, "assertions dropped:    {}", self.assertions_dropped)?;
        writeln!(f, "warnings:              {}", self.warnings.len())?;
        for warning in &self.warnings {
            writeln!(f, "  - {warning}")?;
        }
        Ok(())
    }
}

/// Materialization driver. Rules are expanded row by row into the target
/// store; re-running over the same sources adds nothing (set semantics).
pub struct Materializer<'a> {
    rules: &'a [MappingRule],
    sources: &'a [SourceDescriptor],
    grounding: Option<&'a TripleStore>,
}

impl<'a> Materializer<'a> {
    pub fn new(rules: &'a [MappingRule], sources: &'a [SourceDescriptor]) -> Self {
        Materializer { rules, sources, grounding: None }
    }

    /// Check emitted predicates against an ontology store; each distinct
    /// predicate IRI that is not declared there yields exactly one warning.
    pub fn with_grounding(mut self, ontology_store: &'a TripleStore) -> Self {
        self.grounding = Some(ontology_store);
        self
    }

    pub fn materialize(&self, store: &mut TripleStore) -> Result<MaterializationReport, MappingError> {
        let mut report = MaterializationReport::default();
        let mut cache: HashMap<&str, SourceRows> = HashMap::new();
        let mut emitted_predicates: BTreeSet<String> = BTreeSet::new();

        for rule in self.rules {
            let source = self
                .sources
                .iter()
                .find(|s| s.id == rule.source)
                .ok_or_else(|| MappingError::UnknownSource {
                    rule_id: rule.rule_id.clone(),
                    source_id: rule.source.clone(),
                })?;
            if !cache.contains_key(source.id.as_str()) {
                let rows = source.read()?;
                report.warnings.extend(rows.warnings.iter().cloned());
                check_unique_ids(source, &rows.rows)?;
                cache.insert(source.id.as_str(), rows);
            }
            let rows = &cache[source.id.as_str()];

            for row in &rows.rows {
                report.rows_read += 1;
                let application = apply_rule(rule, row);
                if application.skipped {
                    report.rows_skipped += 1;
                    continue;
                }
                report.assertions_dropped += application.dropped_assertions;
                for triple in &application.triples {
                    report.triples_generated += 1;
                    if !store.insert(triple) {
                        report.duplicates_suppressed += 1;
                    }
                    if let Some(iri) = triple.predicate.as_iri() {
                        emitted_predicates.insert(iri.to_owned());
                    }
                }
            }
        }

        if let Some(ontology) = self.grounding {
            for predicate in &emitted_predicates {
                if vocab::is_builtin_vocabulary(predicate) {
                    continue;
                }
                let declared = ontology
                    .match_pattern(Some(&Term::iri(predicate)), None, None)
                    .next()
                    .is_some();
                if !declared {
                    report
                        .warnings
                        .push(format!("predicate {predicate} is not declared in the ontology"));
                }
            }
        }
        Ok(report)
    }
}

/// Distinct key tuples must render to distinct unique ids; a collision after
/// slugging is an ingest error.
fn check_unique_ids(source: &SourceDescriptor, rows: &[Row]) -> Result<(), ConnectorError> {
    if source.key_columns.is_empty() {
        return Ok(());
    }
    let template = UniqueIdTemplate::new(source.key_columns.iter().cloned());
    let mut seen: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for row in rows {
        let tuple: Vec<String> = source
            .key_columns
            .iter()
            .map(|c| row.get(c).canonical_string().unwrap_or_default())
            .collect();
        let Ok(id) = crate::connectors::render_unique_id(&template, row) else {
            continue;
        };
        match seen.get(&id) {
            Some(existing) if *existing != tuple => {
                return Err(ConnectorError::DuplicateUniqueId { id });
            }
            _ => {
                seen.insert(id, tuple);
            }
        }
    }
    Ok(())
}
