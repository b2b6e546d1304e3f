//! Source connectors: typed readers for the plant-metadata CSV (the frozen
//! projection of the SCADA query), the production CSV, and weather JSON
//! fixtures, plus unique-id rendering and row filters.

mod csv_reader;
mod weather;

pub use csv_reader::read_csv;
pub use weather::read_weather_json;

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use chrono::{DateTime, SecondsFormat, Utc};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConnectorError {
    #[error("source file {path} not found: {source}")]
    MissingFile {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("header mismatch in {source_id}: missing columns {missing:?}, extra columns {extra:?}")]
    HeaderMismatch { source_id: String, missing: Vec<String>, extra: Vec<String> },
    #[error("malformed source {source_id}: {message}")]
    Malformed { source_id: String, message: String },
    #[error("unique id template references column {column} which is null")]
    MissingKey { column: String },
    #[error("duplicate unique id {id} rendered from distinct key tuples")]
    DuplicateUniqueId { id: String },
    #[error("invalid source descriptor: {0}")]
    InvalidDescriptor(String),
}

/// Declared type of a source column.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColumnType {
    String,
    Integer,
    Decimal,
    Timestamp,
    /// Latitude/longitude component; parsed like a decimal.
    LatLon,
}

/// A typed cell value. Decimals keep their source lexical form so that
/// generated literals are stable down to the byte.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    String(String),
    Integer(i64),
    Decimal { lexical: String, value: f64 },
    Timestamp(DateTime<Utc>),
    Null,
}

impl Value {
    pub fn decimal(lexical: impl Into<String>) -> Option<Value> {
        let lexical = lexical.into();
        lexical.parse::<f64>().ok().filter(|v| v.is_finite()).map(|value| Value::Decimal { lexical, value })
    }

    pub fn is_null(&self) -> bool {
        matches!(self, Value::Null)
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Value::Integer(i) => Some(*i as f64),
            Value::Decimal { value, .. } => Some(*value),
            _ => None,
        }
    }

    pub fn as_timestamp(&self) -> Option<DateTime<Utc>> {
        match self {
            Value::Timestamp(ts) => Some(*ts),
            _ => None,
        }
    }

    /// Canonical lexical form: integers in decimal digits, decimals as read,
    /// timestamps as RFC 3339 UTC with a `Z` suffix.
    pub fn canonical_string(&self) -> Option<String> {
        match self {
            Value::String(s) => Some(s.clone()),
            Value::Integer(i) => Some(i.to_string()),
            Value::Decimal { lexical, .. } => Some(lexical.clone()),
            Value::Timestamp(ts) => Some(canonical_timestamp(ts)),
            Value::Null => None,
        }
    }
}

/// RFC 3339 UTC with `Z`; subseconds only when nonzero.
pub fn canonical_timestamp(ts: &DateTime<Utc>) -> String {
    if ts.timestamp_subsec_nanos() == 0 {
        ts.to_rfc3339_opts(SecondsFormat::Secs, true)
    } else {
        ts.to_rfc3339_opts(SecondsFormat::AutoSi, true)
    }
}

pub fn parse_timestamp(s: &str) -> Option<DateTime<Utc>> {
    DateTime::parse_from_rfc3339(s).ok().map(|dt| dt.with_timezone(&Utc))
}

/// One typed row of a source, keyed by column name. Missing and unparseable
/// cells are `Value::Null`; curation happens downstream in the mapping layer.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Row {
    values: BTreeMap<String, Value>,
}

impl Row {
    pub fn new() -> Self {
        Row::default()
    }

    pub fn set(&mut self, column: impl Into<String>, value: Value) {
        self.values.insert(column.into(), value);
    }

    pub fn get(&self, column: &str) -> &Value {
        self.values.get(column).unwrap_or(&Value::Null)
    }

    pub fn columns(&self) -> impl Iterator<Item = &str> {
        self.values.keys().map(String::as_str)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SourceKind {
    Csv,
    WeatherJson,
}

/// Where the bytes of a source come from. `Inline` keeps the connectors
/// usable without a filesystem (tests, the browser demo).
#[derive(Debug, Clone)]
pub enum SourceLocation {
    Path(PathBuf),
    Inline(String),
}

impl SourceLocation {
    pub(crate) fn read(&self, source_id: &str) -> Result<String, ConnectorError> {
        match self {
            SourceLocation::Path(path) => std::fs::read_to_string(path).map_err(|source| {
                ConnectorError::MissingFile { path: path.display().to_string(), source }
            }),
            SourceLocation::Inline(text) => {
                let _ = source_id;
                Ok(text.clone())
            }
        }
    }
}

/// Comparison operators shared by row filters and query FILTER expressions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompareOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CompareOp {
    pub fn matches(self, ordering: std::cmp::Ordering) -> bool {
        use std::cmp::Ordering::*;
        match self {
            CompareOp::Eq => ordering == Equal,
            CompareOp::Ne => ordering != Equal,
            CompareOp::Lt => ordering == Less,
            CompareOp::Le => ordering != Greater,
            CompareOp::Gt => ordering == Greater,
            CompareOp::Ge => ordering != Less,
        }
    }

    pub fn negate(self) -> CompareOp {
        match self {
            CompareOp::Eq => CompareOp::Ne,
            CompareOp::Ne => CompareOp::Eq,
            CompareOp::Lt => CompareOp::Ge,
            CompareOp::Le => CompareOp::Gt,
            CompareOp::Gt => CompareOp::Le,
            CompareOp::Ge => CompareOp::Lt,
        }
    }
}

impl fmt::Display for CompareOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CompareOp::Eq => "=",
            CompareOp::Ne => "!=",
            CompareOp::Lt => "<",
            CompareOp::Le => "<=",
            CompareOp::Gt => ">",
            CompareOp::Ge => ">=",
        };
        f.write_str(s)
    }
}

/// Row filter: column compared against a constant. A null cell never
/// satisfies the filter.
#[derive(Debug, Clone)]
pub struct RowFilter {
    pub column: String,
    pub op: CompareOp,
    pub value: Value,
}

impl RowFilter {
    pub fn equals(column: impl Into<String>, value: Value) -> Self {
        RowFilter { column: column.into(), op: CompareOp::Eq, value }
    }

    pub fn matches(&self, row: &Row) -> bool {
        let cell = row.get(&self.column);
        if cell.is_null() || self.value.is_null() {
            return false;
        }
        let ordering = match (cell, &self.value) {
            (Value::String(a), Value::String(b)) => a.cmp(b),
            (Value::Timestamp(a), Value::Timestamp(b)) => a.cmp(b),
            _ => match (cell.as_f64(), self.value.as_f64()) {
                (Some(a), Some(b)) => match a.partial_cmp(&b) {
                    Some(ord) => ord,
                    None => return false,
                },
                _ => return false,
            },
        };
        self.op.matches(ordering)
    }
}

pub fn filter_rows<'a>(
    rows: impl IntoIterator<Item = Row> + 'a,
    filter: &'a RowFilter,
) -> impl Iterator<Item = Row> + 'a {
    rows.into_iter().filter(|row| filter.matches(row))
}

/// Declarative description of a tabular or JSON source.
#[derive(Debug, Clone)]
pub struct SourceDescriptor {
    pub id: String,
    pub kind: SourceKind,
    pub location: SourceLocation,
    pub columns: Vec<(String, ColumnType)>,
    pub key_columns: Vec<String>,
    pub filter: Option<RowFilter>,
}

impl SourceDescriptor {
    pub fn new(
        id: impl Into<String>,
        kind: SourceKind,
        location: SourceLocation,
        columns: Vec<(String, ColumnType)>,
        key_columns: Vec<String>,
        filter: Option<RowFilter>,
    ) -> Result<Self, ConnectorError> {
        let names: Vec<&String> = columns.iter().map(|(n, _)| n).collect();
        for key in &key_columns {
            if !names.contains(&key) {
                return Err(ConnectorError::InvalidDescriptor(format!(
                    "key column {key} is not in the schema"
                )));
            }
        }
        if let Some(filter) = &filter {
            if !names.contains(&&filter.column) {
                return Err(ConnectorError::InvalidDescriptor(format!(
                    "filter column {} is not in the schema",
                    filter.column
                )));
            }
        }
        Ok(SourceDescriptor { id: id.into(), kind, location, columns, key_columns, filter })
    }

    pub fn column_type(&self, name: &str) -> Option<ColumnType> {
        self.columns.iter().find(|(n, _)| n == name).map(|(_, t)| *t)
    }

    pub fn has_column(&self, name: &str) -> bool {
        self.columns.iter().any(|(n, _)| n == name)
    }

    /// Read all rows, applying the descriptor's own filter if set.
    pub fn read(&self) -> Result<SourceRows, ConnectorError> {
        let mut result = match self.kind {
            SourceKind::Csv => read_csv(self)?,
            SourceKind::WeatherJson => read_weather_json(self)?,
        };
        if let Some(filter) = &self.filter {
            result.rows.retain(|row| filter.matches(row));
        }
        Ok(result)
    }
}

/// Rows of one source read end to end, with the cell-level warnings that
/// were recorded while typing them.
#[derive(Debug, Clone, Default)]
pub struct SourceRows {
    pub rows: Vec<Row>,
    pub warnings: Vec<String>,
}

/// Unique-id template: ordered column names joined by `_` after slugging.
#[derive(Debug, Clone)]
pub struct UniqueIdTemplate {
    pub columns: Vec<String>,
}

impl UniqueIdTemplate {
    pub fn new(columns: impl IntoIterator<Item = impl Into<String>>) -> Self {
        UniqueIdTemplate { columns: columns.into_iter().map(Into::into).collect() }
    }
}

/// Strict component slug: lowercase, spaces to '-', everything outside
/// `[a-z0-9-]` dropped. Joined components therefore never collide with the
/// `_` separator.
pub fn slug(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.to_lowercase().chars() {
        match c {
            ' ' => out.push('-'),
            'a'..='z' | '0'..='9' | '-' => out.push(c),
            _ => {}
        }
    }
    out
}

/// Render the unique id of a row: slugged column values joined by `_`.
/// Rendering is deterministic; a null in any template column is an error.
pub fn render_unique_id(template: &UniqueIdTemplate, row: &Row) -> Result<String, ConnectorError> {
    let mut parts = Vec::with_capacity(template.columns.len());
    for column in &template.columns {
        let value = row.get(column);
        let text = value
            .canonical_string()
            .ok_or_else(|| ConnectorError::MissingKey { column: column.clone() })?;
        parts.push(slug(&text));
    }
    Ok(parts.join("_"))
}

pub(crate) fn parse_cell(raw: &str, ty: ColumnType) -> Result<Value, ()> {
    if raw.is_empty() {
        return Ok(Value::Null);
    }
    match ty {
        ColumnType::String => Ok(Value::String(raw.to_owned())),
        ColumnType::Integer => raw.parse::<i64>().map(Value::Integer).map_err(|_| ()),
        ColumnType::Decimal | ColumnType::LatLon => Value::decimal(raw).ok_or(()),
        ColumnType::Timestamp => parse_timestamp(raw).map(Value::Timestamp).ok_or(()),
    }
}

/// The standard fixture source set: plants, organizations, production and
/// weather, resolved inside `dir`. Column contracts are fixed; see the
/// repository documentation.
pub fn standard_sources(dir: &std::path::Path) -> Vec<SourceDescriptor> {
    standard_sources_from(|name| SourceLocation::Path(dir.join(name)))
}

/// Same as [`standard_sources`] but resolving source files through `locate`,
/// e.g. to embedded in-memory fixtures.
pub fn standard_sources_from(locate: impl Fn(&str) -> SourceLocation) -> Vec<SourceDescriptor> {
    use ColumnType::*;
    let column = |name: &str, ty: ColumnType| (name.to_owned(), ty);
    vec![
        SourceDescriptor::new(
            "plants",
            SourceKind::Csv,
            locate("plants.csv"),
            vec![
                column("plant_id", Integer),
                column("plant_name", String),
                column("lat", LatLon),
                column("lon", LatLon),
                column("city", String),
                column("asset_name", String),
                column("ccode", String),
                column("eic_func_acronym", String),
                column("organization_short_name", String),
                column("organization_name", String),
            ],
            vec!["plant_id".into(), "plant_name".into(), "city".into()],
            None,
        )
        .expect("static descriptor"),
        SourceDescriptor::new(
            "organizations",
            SourceKind::Csv,
            locate("organizations.csv"),
            vec![column("organization_short_name", String), column("organization_name", String)],
            vec!["organization_short_name".into()],
            None,
        )
        .expect("static descriptor"),
        SourceDescriptor::new(
            "production",
            SourceKind::Csv,
            locate("production.csv"),
            vec![
                column("plant_id", String),
                column("ts", Timestamp),
                column("active_power_kw", Decimal),
                column("status", String),
            ],
            vec!["plant_id".into(), "ts".into()],
            None,
        )
        .expect("static descriptor"),
        SourceDescriptor::new(
            "weather",
            SourceKind::WeatherJson,
            locate("weather.json"),
            vec![
                column("ts", Timestamp),
                column("lat", LatLon),
                column("lon", LatLon),
                column("city", String),
                column("temp_c", Decimal),
                column("wind_speed_ms", Decimal),
                column("ghi_wm2", Decimal),
            ],
            vec!["city".into(), "ts".into()],
            None,
        )
        .expect("static descriptor"),
    ]
}
