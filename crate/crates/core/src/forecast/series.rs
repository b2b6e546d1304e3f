//! Production time series extracted from the knowledge graph.

use chrono::{DateTime, Duration, Utc};

use crate::connectors::parse_timestamp;
use crate::rdf::{Term, TripleStore};
use crate::vocab;

use super::ForecastError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointStatus {
    Online,
    Outage,
}

impl PointStatus {
    pub fn parse(s: &str) -> PointStatus {
        if s.eq_ignore_ascii_case("OUTAGE") {
            PointStatus::Outage
        } else {
            PointStatus::Online
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesPoint {
    pub ts: DateTime<Utc>,
    pub value_kw: f64,
    pub status: PointStatus,
}

/// Timestamped power observations for one plant. Timestamps are strictly
/// increasing and sit on a uniform cadence grid; gaps appear as missing
/// points, never as irregular spacing.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    pub plant: String,
    pub cadence_seconds: i64,
    pub points: Vec<SeriesPoint>,
}

impl TimeSeries {
    /// Build a series from (possibly unsorted) points. The cadence is the
    /// smallest gap; every other gap must be a whole multiple of it.
    pub fn new(plant: impl Into<String>, mut points: Vec<SeriesPoint>) -> Result<Self, ForecastError> {
        points.sort_by_key(|p| p.ts);
        for pair in points.windows(2) {
            if pair[0].ts == pair[1].ts {
                return Err(ForecastError::IrregularSeries(format!(
                    "duplicate timestamp {}",
                    pair[0].ts
                )));
            }
        }
        let cadence_seconds = points
            .windows(2)
            .map(|pair| (pair[1].ts - pair[0].ts).num_seconds())
            .min()
            .unwrap_or(0);
        for pair in points.windows(2) {
            let gap = (pair[1].ts - pair[0].ts).num_seconds();
            if cadence_seconds > 0 && gap % cadence_seconds != 0 {
                return Err(ForecastError::IrregularSeries(format!(
                    "gap of {gap}s is not a multiple of the {cadence_seconds}s cadence"
                )));
            }
        }
        Ok(TimeSeries { plant: plant.into(), cadence_seconds, points })
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    /// Values of ONLINE points, oldest first.
    pub fn online_values(&self) -> Vec<f64> {
        self.points
            .iter()
            .filter(|p| p.status == PointStatus::Online)
            .map(|p| p.value_kw)
            .collect()
    }

    pub fn last_ts(&self) -> Option<DateTime<Utc>> {
        self.points.last().map(|p| p.ts)
    }

    pub fn cadence(&self) -> Duration {
        Duration::seconds(self.cadence_seconds)
    }
}

/// Read the production observations of a plant over `[from, to)` out of the
/// store; the historical-production query of the catalog in function form.
pub fn extract_series(
    store: &TripleStore,
    plant_iri: &str,
    from: DateTime<Utc>,
    to: DateTime<Utc>,
) -> Result<TimeSeries, ForecastError> {
    let plant = Term::iri(plant_iri);
    let known_as_subject = store.match_pattern(Some(&plant), None, None).next().is_some();
    let known_as_object = store.match_pattern(None, None, Some(&plant)).next().is_some();
    if !known_as_subject && !known_as_object {
        return Err(ForecastError::UnknownPlant(plant_iri.to_owned()));
    }

    let about_plant = Term::iri(vocab::ARTEMIS_ABOUT_PLANT);
    let timestamp = Term::iri(vocab::ARTEMIS_TIMESTAMP);
    let power = Term::iri(vocab::ARTEMIS_HAS_ACTIVE_POWER_KW);
    let status = Term::iri(vocab::ARTEMIS_STATUS);

    let mut points = Vec::new();
    for link in store.match_pattern(None, Some(&about_plant), Some(&plant)) {
        let obs = link.subject;
        let literal_of = |predicate: &Term| -> Option<String> {
            store
                .match_pattern(Some(&obs), Some(predicate), None)
                .next()
                .and_then(|t| t.object.as_literal().map(|l| l.lexical().to_owned()))
        };
        let Some(ts) = literal_of(&timestamp).and_then(|s| parse_timestamp(&s)) else {
            continue;
        };
        let Some(value_kw) = literal_of(&power).and_then(|s| s.parse::<f64>().ok()) else {
            // Forecast instances also link plants via aboutPlant but carry
            // no power literal; they are not observations.
            continue;
        };
        if ts < from || ts >= to {
            continue;
        }
        let status = literal_of(&status).map(|s| PointStatus::parse(&s)).unwrap_or(PointStatus::Online);
        points.push(SeriesPoint { ts, value_kw, status });
    }
    TimeSeries::new(plant_iri, points)
}
