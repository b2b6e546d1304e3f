//! Renewable-production forecasting: statistical very-short-term prediction
//! (at most 2 hours ahead) from knowledge-graph history, day-ahead
//! prediction driven by weather forecasts with outage handling, and the
//! write-back of results as forecast instances.

mod linalg;
mod series;

pub use series::{extract_series, PointStatus, SeriesPoint, TimeSeries};

use chrono::{DateTime, Duration, Utc};
use thiserror::Error;

use crate::connectors::{canonical_timestamp, Row, Value};
use crate::mapping::iri_component;
use crate::rdf::{Term, Triple, TripleStore};
use crate::vocab;

/// Hard upper bound of the very-short-term mode.
pub const VERY_SHORT_TERM_MAX: Duration = Duration::hours(2);
/// Minimum number of matched ONLINE training pairs for a day-ahead fit.
pub const DAY_AHEAD_MIN_PAIRS: usize = 24;
const DEFAULT_AR_ORDER: usize = 4;

#[derive(Debug, Error)]
pub enum ForecastError {
    #[error("unknown plant IRI {0}")]
    UnknownPlant(String),
    #[error("the series has no points")]
    EmptySeries,
    #[error("horizon of {horizon_minutes} min exceeds the {max_minutes} min very-short-term bound")]
    HorizonTooLong { horizon_minutes: i64, max_minutes: i64 },
    #[error("invalid step: {0}")]
    InvalidStep(String),
    #[error("insufficient history: {available} usable points, {needed} needed")]
    InsufficientHistory { needed: usize, available: usize },
    #[error("the weather forecast series is empty")]
    EmptyWeatherForecast,
    #[error("series is not on a uniform cadence: {0}")]
    IrregularSeries(String),
}

/// Ordinary-least-squares autoregressive model of order `p`:
/// value_t = intercept + sum(coefficients[i] * value_{t-1-i}).
#[derive(Debug, Clone)]
pub struct ArModel {
    pub order: usize,
    pub intercept: f64,
    /// Lag coefficients, most recent lag first.
    pub coefficients: Vec<f64>,
    pub residual_norm: f64,
    pub training_rows: usize,
}

impl ArModel {
    /// One-step-ahead prediction from lags ordered most recent first.
    pub fn predict(&self, lags: &[f64]) -> f64 {
        debug_assert!(lags.len() >= self.order);
        let mut value = self.intercept;
        for (coefficient, lag) in self.coefficients.iter().zip(lags) {
            value += coefficient * lag;
        }
        value
    }
}

/// Fit an AR(p) model on the ONLINE points of the series (OUTAGE points are
/// dropped before forming the lag rows). Needs at least p+1 usable points;
/// degenerate normal equations resolve to the minimum-norm solution.
pub fn fit_ar(series: &TimeSeries, order: usize) -> Result<ArModel, ForecastError> {
    assert!(order >= 1, "autoregression needs order >= 1");
    let values = series.online_values();
    if values.len() < order + 1 {
        return Err(ForecastError::InsufficientHistory {
            needed: order + 1,
            available: values.len(),
        });
    }
    let mut rows = Vec::with_capacity(values.len() - order);
    let mut targets = Vec::with_capacity(values.len() - order);
    for t in order..values.len() {
        let mut row = Vec::with_capacity(order + 1);
        row.push(1.0);
        for lag in 1..=order {
            row.push(values[t - lag]);
        }
        rows.push(row);
        targets.push(values[t]);
    }
    let beta = linalg::least_squares(&rows, &targets);
    let residual = linalg::residual_norm(&rows, &targets, &beta);
    Ok(ArModel {
        order,
        intercept: beta[0],
        coefficients: beta[1..].to_vec(),
        residual_norm: residual,
        training_rows: rows.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ForecastMode {
    VeryShortTerm,
    DayAhead,
}

#[derive(Debug, Clone)]
pub struct ForecastRequest {
    pub plant: String,
    pub mode: ForecastMode,
    pub origin: DateTime<Utc>,
    pub horizon: Duration,
    pub step: Duration,
}

#[derive(Debug, Clone)]
pub struct ForecastPoint {
    pub ts: DateTime<Utc>,
    pub predicted_kw: f64,
    pub method: String,
}

#[derive(Debug, Clone)]
pub struct ModelDiagnostics {
    pub method: String,
    pub coefficients: Vec<f64>,
    pub training_size: usize,
    pub residual_norm: f64,
}

#[derive(Debug, Clone)]
pub struct ForecastResult {
    pub request: ForecastRequest,
    pub issued_at: DateTime<Utc>,
    pub points: Vec<ForecastPoint>,
    pub diagnostics: ModelDiagnostics,
}

impl ForecastResult {
    fn new(
        request: ForecastRequest,
        issued_at: DateTime<Utc>,
        points: Vec<ForecastPoint>,
        diagnostics: ModelDiagnostics,
    ) -> Result<Self, ForecastError> {
        if points.is_empty() {
            return Err(ForecastError::EmptyWeatherForecast);
        }
        debug_assert!(points.iter().all(|p| p.predicted_kw >= 0.0));
        Ok(ForecastResult { request, issued_at, points, diagnostics })
    }

    /// TSV export: ts, predicted kW, method tag.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("ts\tkw\tmethod\n");
        for point in &self.points {
            out.push_str(&format!(
                "{}\t{}\t{}\n",
                canonical_timestamp(&point.ts),
                format_kw(point.predicted_kw),
                point.method
            ));
        }
        out
    }
}

/// Iterated one-step-ahead AR prediction. Each prediction is clamped at 0
/// before it is fed back as a lag. With fewer than p+1 usable points the
/// method falls back to persistence: every step repeats the last observed
/// value.
pub fn forecast_very_short_term(
    series: &TimeSeries,
    horizon: Duration,
    step: Duration,
    order: usize,
) -> Result<ForecastResult, ForecastError> {
    if horizon > VERY_SHORT_TERM_MAX {
        return Err(ForecastError::HorizonTooLong {
            horizon_minutes: horizon.num_minutes(),
            max_minutes: VERY_SHORT_TERM_MAX.num_minutes(),
        });
    }
    if step <= Duration::zero() || horizon <= Duration::zero() {
        return Err(ForecastError::InvalidStep("horizon and step must be positive".into()));
    }
    if horizon.num_seconds() % step.num_seconds() != 0 {
        return Err(ForecastError::InvalidStep(format!(
            "step of {}s does not divide horizon of {}s",
            step.num_seconds(),
            horizon.num_seconds()
        )));
    }
    if series.is_empty() {
        return Err(ForecastError::EmptySeries);
    }

    let origin = series.last_ts().expect("series is non-empty");
    let steps = (horizon.num_seconds() / step.num_seconds()) as usize;
    let request = ForecastRequest {
        plant: series.plant.clone(),
        mode: ForecastMode::VeryShortTerm,
        origin,
        horizon,
        step,
    };

    let usable = series.online_values();
    if usable.len() < order + 1 {
        // Persistence fallback: repeat the last observed value.
        let last = series.points.last().expect("series is non-empty").value_kw.max(0.0);
        let points = (1..=steps)
            .map(|k| ForecastPoint {
                ts: origin + step * (k as i32),
                predicted_kw: last,
                method: "persistence".into(),
            })
            .collect();
        let diagnostics = ModelDiagnostics {
            method: "persistence".into(),
            coefficients: vec![],
            training_size: usable.len(),
            residual_norm: 0.0,
        };
        return ForecastResult::new(request, origin, points, diagnostics);
    }

    let model = fit_ar(series, order)?;
    let method = format!("ar({order})");
    // Most recent lag first.
    let mut lags: Vec<f64> = usable.iter().rev().take(order).copied().collect();
    let mut points = Vec::with_capacity(steps);
    for k in 1..=steps {
        let predicted = model.predict(&lags).max(0.0);
        points.push(ForecastPoint {
            ts: origin + step * (k as i32),
            predicted_kw: predicted,
            method: method.clone(),
        });
        lags.rotate_right(1);
        lags[0] = predicted;
    }
    let mut coefficients = vec![model.intercept];
    coefficients.extend(&model.coefficients);
    let diagnostics = ModelDiagnostics {
        method,
        coefficients,
        training_size: model.training_rows,
        residual_norm: model.residual_norm,
    };
    ForecastResult::new(request, origin, points, diagnostics)
}

/// One weather record, observation or forecast.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeatherPoint {
    pub ts: DateTime<Utc>,
    pub temp_c: Option<f64>,
    pub wind_speed_ms: Option<f64>,
    pub ghi_wm2: Option<f64>,
}

impl WeatherPoint {
    pub fn from_row(row: &Row) -> Option<WeatherPoint> {
        let ts = row.get("ts").as_timestamp()?;
        let field = |name: &str| match row.get(name) {
            Value::Null => None,
            value => value.as_f64(),
        };
        Some(WeatherPoint {
            ts,
            temp_c: field("temp_c"),
            wind_speed_ms: field("wind_speed_ms"),
            ghi_wm2: field("ghi_wm2"),
        })
    }
}

/// Weather variable driving a day-ahead fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DriverKind {
    WindSpeed,
    Irradiance,
}

impl DriverKind {
    /// Photovoltaic plants (EIC function acronym RES-FV) are driven by
    /// irradiance, everything else by wind speed.
    pub fn for_eic_acronym(acronym: &str) -> DriverKind {
        if acronym == "RES-FV" {
            DriverKind::Irradiance
        } else {
            DriverKind::WindSpeed
        }
    }

    pub fn value(self, point: &WeatherPoint) -> Option<f64> {
        match self {
            DriverKind::WindSpeed => point.wind_speed_ms,
            DriverKind::Irradiance => point.ghi_wm2,
        }
    }

    fn tag(self) -> &'static str {
        match self {
            DriverKind::WindSpeed => "linear(wind)",
            DriverKind::Irradiance => "linear(ghi)",
        }
    }
}

/// Scheduled outage interval, half-open: `[start, end)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OutageInterval {
    pub start: DateTime<Utc>,
    pub end: DateTime<Utc>,
}

impl OutageInterval {
    pub fn contains(&self, ts: DateTime<Utc>) -> bool {
        ts >= self.start && ts < self.end
    }
}

/// Day-ahead forecast: fit power = b0 + b1 * driver on ONLINE history points
/// matched to weather observations (nearest timestamp within half the
/// weather cadence), then predict along the weather forecast series.
/// Predictions inside scheduled outage intervals are forced to 0; everything
/// is clamped at 0.
pub fn forecast_day_ahead(
    history: &TimeSeries,
    weather_observations: &[WeatherPoint],
    weather_forecast: &[WeatherPoint],
    driver: DriverKind,
    outages: &[OutageInterval],
) -> Result<ForecastResult, ForecastError> {
    if weather_forecast.is_empty() {
        return Err(ForecastError::EmptyWeatherForecast);
    }

    let mut observations = weather_observations.to_vec();
    observations.sort_by_key(|p| p.ts);
    let half_cadence = series_cadence(&observations).map(|c| c / 2);

    let mut rows = Vec::new();
    let mut targets = Vec::new();
    for point in history.points.iter().filter(|p| p.status == PointStatus::Online) {
        let Some(nearest) = nearest_point(&observations, point.ts) else { continue };
        if let Some(half) = half_cadence {
            let distance = (nearest.ts - point.ts).abs();
            if distance > half {
                continue;
            }
        }
        let Some(driver_value) = driver.value(nearest) else { continue };
        rows.push(vec![1.0, driver_value]);
        targets.push(point.value_kw);
    }
    if rows.len() < DAY_AHEAD_MIN_PAIRS {
        return Err(ForecastError::InsufficientHistory {
            needed: DAY_AHEAD_MIN_PAIRS,
            available: rows.len(),
        });
    }

    let beta = linalg::least_squares(&rows, &targets);
    let residual = linalg::residual_norm(&rows, &targets, &beta);

    let mut forecast = weather_forecast.to_vec();
    forecast.sort_by_key(|p| p.ts);
    let step = series_cadence(&forecast).unwrap_or(Duration::hours(1));
    let origin = forecast.first().expect("checked non-empty").ts;
    let end = forecast.last().expect("checked non-empty").ts;

    let method = driver.tag();
    let mut points = Vec::with_capacity(forecast.len());
    for wx in &forecast {
        let Some(driver_value) = driver.value(wx) else { continue };
        let masked = outages.iter().any(|o| o.contains(wx.ts));
        let predicted = if masked { 0.0 } else { (beta[0] + beta[1] * driver_value).max(0.0) };
        points.push(ForecastPoint { ts: wx.ts, predicted_kw: predicted, method: method.into() });
    }

    let request = ForecastRequest {
        plant: history.plant.clone(),
        mode: ForecastMode::DayAhead,
        origin,
        horizon: end - origin + step,
        step,
    };
    let diagnostics = ModelDiagnostics {
        method: method.into(),
        coefficients: beta,
        training_size: rows.len(),
        residual_norm: residual,
    };
    ForecastResult::new(request, origin, points, diagnostics)
}

fn series_cadence(points: &[WeatherPoint]) -> Option<Duration> {
    points.windows(2).map(|pair| pair[1].ts - pair[0].ts).min()
}

fn nearest_point(sorted: &[WeatherPoint], ts: DateTime<Utc>) -> Option<&WeatherPoint> {
    if sorted.is_empty() {
        return None;
    }
    let idx = sorted.partition_point(|p| p.ts < ts);
    let after = sorted.get(idx);
    let before = idx.checked_sub(1).and_then(|i| sorted.get(i));
    match (before, after) {
        (Some(b), Some(a)) => {
            if (ts - b.ts) <= (a.ts - ts) {
                Some(b)
            } else {
                Some(a)
            }
        }
        (Some(b), None) => Some(b),
        (None, Some(a)) => Some(a),
        (None, None) => None,
    }
}

/// Default very-short-term run against store history: extract, fit, predict.
pub fn very_short_term_from_store(
    store: &TripleStore,
    plant_iri: &str,
    history_from: DateTime<Utc>,
    history_to: DateTime<Utc>,
    horizon: Duration,
    step: Duration,
    order: Option<usize>,
) -> Result<ForecastResult, ForecastError> {
    let series = extract_series(store, plant_iri, history_from, history_to)?;
    forecast_very_short_term(&series, horizon, step, order.unwrap_or(DEFAULT_AR_ORDER))
}

fn plant_uid(plant_iri: &str) -> &str {
    plant_iri.rsplit('/').next().unwrap_or(plant_iri)
}

fn format_kw(kw: f64) -> String {
    if kw.fract() == 0.0 {
        format!("{kw:.1}")
    } else {
        format!("{kw}")
    }
}

fn ts_literal(ts: &DateTime<Utc>) -> Term {
    Term::typed(canonical_timestamp(ts), vocab::XSD_DATE_TIME)
}

/// Write a forecast result into the store as a typed forecast instance:
/// rdf:type (artemis:ShortTermForecast or artemis:LongTermForecast), issued
/// timestamp, plant link, and one point node per prediction carrying its
/// timestamp and kW value. Returns the number of triples actually added;
/// writing the same result twice adds zero.
pub fn write_forecast(store: &mut TripleStore, result: &ForecastResult) -> usize {
    let class = match result.request.mode {
        ForecastMode::VeryShortTerm => vocab::ARTEMIS_SHORT_TERM_FORECAST,
        ForecastMode::DayAhead => vocab::ARTEMIS_LONG_TERM_FORECAST,
    };
    let issued_component = iri_component(&Value::Timestamp(result.issued_at));
    let forecast_iri = format!(
        "{}forecast/{}/{}",
        vocab::ARTEMIS_DATA_NS,
        plant_uid(&result.request.plant),
        issued_component
    );
    let forecast = Term::iri(&forecast_iri);

    let mut added = 0;
    let mut insert = |t: Triple, store: &mut TripleStore| {
        if store.insert(&t) {
            added += 1;
        }
    };
    insert(
        Triple::new(forecast.clone(), Term::iri(vocab::RDF_TYPE), Term::iri(class)),
        store,
    );
    insert(
        Triple::new(forecast.clone(), Term::iri(vocab::ARTEMIS_ISSUED_AT), ts_literal(&result.issued_at)),
        store,
    );
    insert(
        Triple::new(
            forecast.clone(),
            Term::iri(vocab::ARTEMIS_ABOUT_PLANT),
            Term::iri(&result.request.plant),
        ),
        store,
    );
    for (index, point) in result.points.iter().enumerate() {
        let point_iri = format!("{forecast_iri}/p{index}");
        let node = Term::iri(&point_iri);
        insert(
            Triple::new(forecast.clone(), Term::iri(vocab::ARTEMIS_HAS_POINT), node.clone()),
            store,
        );
        insert(
            Triple::new(node.clone(), Term::iri(vocab::ARTEMIS_TIMESTAMP), ts_literal(&point.ts)),
            store,
        );
        insert(
            Triple::new(
                node,
                Term::iri(vocab::ARTEMIS_PREDICTED_POWER_KW),
                Term::typed(format_kw(point.predicted_kw), vocab::XSD_DECIMAL),
            ),
            store,
        );
    }
    added
}

/// Write a weather forecast series as an artemis:WeatherForecast instance;
/// each point carries its timestamp plus whatever weather fields it has.
/// This is what makes the meteorological-forecast question answerable.
pub fn write_weather_forecast(
    store: &mut TripleStore,
    city: &str,
    issued_at: DateTime<Utc>,
    points: &[WeatherPoint],
) -> usize {
    let issued_component = iri_component(&Value::Timestamp(issued_at));
    let forecast_iri = format!(
        "{}wxf/{}/{}",
        vocab::ARTEMIS_DATA_NS,
        crate::connectors::slug(city),
        issued_component
    );
    let forecast = Term::iri(&forecast_iri);

    let mut added = 0;
    let mut insert = |t: Triple, store: &mut TripleStore| {
        if store.insert(&t) {
            added += 1;
        }
    };
    insert(
        Triple::new(
            forecast.clone(),
            Term::iri(vocab::RDF_TYPE),
            Term::iri(vocab::ARTEMIS_WEATHER_FORECAST),
        ),
        store,
    );
    insert(
        Triple::new(forecast.clone(), Term::iri(vocab::ARTEMIS_ISSUED_AT), ts_literal(&issued_at)),
        store,
    );
    insert(
        Triple::new(forecast.clone(), Term::iri(vocab::ARTEMIS_CITY), Term::string(city)),
        store,
    );
    for (index, point) in points.iter().enumerate() {
        let node = Term::iri(format!("{forecast_iri}/p{index}"));
        insert(
            Triple::new(forecast.clone(), Term::iri(vocab::ARTEMIS_HAS_POINT), node.clone()),
            store,
        );
        insert(
            Triple::new(node.clone(), Term::iri(vocab::ARTEMIS_TIMESTAMP), ts_literal(&point.ts)),
            store,
        );
        for (predicate, value) in [
            (vocab::ARTEMIS_WIND_SPEED_MS, point.wind_speed_ms),
            (vocab::ARTEMIS_GHI_WM2, point.ghi_wm2),
            (vocab::ARTEMIS_TEMPERATURE_C, point.temp_c),
        ] {
            if let Some(value) = value {
                insert(
                    Triple::new(
                        node.clone(),
                        Term::iri(predicate),
                        Term::typed(format_kw(value), vocab::XSD_DECIMAL),
                    ),
                    store,
                );
            }
        }
    }
    added
}
