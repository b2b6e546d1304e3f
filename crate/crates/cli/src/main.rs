//! Operator command line: build the knowledge graph from the fixture
//! sources, validate it, run queries and competency questions, and run the
//! forecasting scenario with optional write-back.
//!
//! Exit codes: 0 success, 1 usage error, 2 data/parse error, 3 validation
//! failures present, 4 forecast precondition failure. Data goes to stdout,
//! diagnostics to stderr.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use artemis_kg::connectors::{parse_timestamp, standard_sources, SourceDescriptor};
use artemis_kg::forecast::{
    extract_series, forecast_day_ahead, forecast_very_short_term, write_forecast,
    write_weather_forecast, DriverKind, ForecastError, ForecastMode, ForecastResult,
    OutageInterval, WeatherPoint,
};
use artemis_kg::mapping::load_mappings;
use artemis_kg::ontology::{check_competency, check_one, compute_closure, validate, Ontology};
use artemis_kg::pipeline::{build_knowledge_graph, load_snapshot_file, store_to_snapshot, BuildConfig};
use artemis_kg::query::{
    evaluate, evaluate_virtual, parse_catalog, parse_query, rewrite_virtual, solutions_to_tsv,
    CompetencyQuestion,
};
use artemis_kg::vocab;
use artemis_kg::{PrefixMap, Term, TripleStore};
use chrono::{DateTime, Duration, Utc};

const EXIT_USAGE: u8 = 1;
const EXIT_DATA: u8 = 2;
const EXIT_VALIDATION: u8 = 3;
const EXIT_FORECAST: u8 = 4;

#[derive(Parser)]
#[command(name = "artemis-kg", version, about = "Smart-grid knowledge graph toolkit")]
struct Cli {
    /// JSON run configuration; flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Print extra diagnostics to stderr.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default)]
struct PathArgs {
    /// Directory of ontology modules (*.ttl).
    #[arg(long)]
    ontology: Option<PathBuf>,
    /// Mapping rules document (JSON).
    #[arg(long)]
    mappings: Option<PathBuf>,
    /// Directory holding the source files.
    #[arg(long)]
    sources: Option<PathBuf>,
    /// Store snapshot file (Turtle).
    #[arg(long)]
    store: Option<PathBuf>,
    /// Competency question catalog.
    #[arg(long)]
    catalog: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Load ontology and mappings, materialize the sources, compute the
    /// closure and write the Turtle snapshot.
    Build {
        #[command(flatten)]
        paths: PathArgs,
    },
    /// Print the validation report and the competency question table.
    Validate {
        #[command(flatten)]
        paths: PathArgs,
    },
    /// Evaluate a query, materialized (with closure) or virtual.
    Query {
        #[command(flatten)]
        paths: PathArgs,
        /// Read the query from a file.
        #[arg(long, conflicts_with = "text")]
        file: Option<PathBuf>,
        /// Query text inline.
        #[arg(long)]
        text: Option<String>,
        /// Rewrite against the mapping rules and scan the sources instead
        /// of using the snapshot.
        #[arg(long = "virtual")]
        virtual_mode: bool,
    },
    /// Run one catalog competency question.
    Cq {
        /// Question id, e.g. CQ5.
        id: String,
        #[command(flatten)]
        paths: PathArgs,
        /// Placeholder values as k=v, repeatable or comma-separated.
        #[arg(long, value_delimiter = ',')]
        param: Vec<String>,
        #[arg(long = "virtual")]
        virtual_mode: bool,
    },
    /// Run the production forecaster for one plant.
    Forecast {
        #[command(flatten)]
        paths: PathArgs,
        /// Plant IRI (full or prefixed, e.g. artemis-data:plant/...).
        #[arg(long)]
        plant: String,
        /// vst (very short term, at most 2 h) or day-ahead.
        #[arg(long, default_value = "vst")]
        mode: String,
        /// Forecast horizon in minutes (vst).
        #[arg(long, default_value_t = 120)]
        horizon_min: i64,
        /// Step between predictions in minutes (vst).
        #[arg(long, default_value_t = 15)]
        step_min: i64,
        /// Autoregression order (vst).
        #[arg(long, default_value_t = 4)]
        order: usize,
        /// History window start (ISO-8601; defaults to all history).
        #[arg(long)]
        history_from: Option<String>,
        /// History window end (ISO-8601; defaults to all history).
        #[arg(long)]
        history_to: Option<String>,
        /// Weather forecast JSON (day-ahead; defaults to
        /// <sources>/weather_forecast.json).
        #[arg(long)]
        weather_forecast: Option<PathBuf>,
        /// Scheduled outage intervals as a JSON array of {start, end}.
        #[arg(long)]
        outages: Option<PathBuf>,
        /// Write the result back into the snapshot.
        #[arg(long)]
        write: bool,
        /// Output format: tsv or turtle (the written triples).
        #[arg(long, default_value = "tsv")]
        format: String,
    },
}

/// Runtime configuration; the optional JSON config file uses these field
/// names verbatim.
#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RunConfig {
    #[serde(default)]
    ontology_dir: Option<PathBuf>,
    #[serde(default)]
    mappings_file: Option<PathBuf>,
    #[serde(default)]
    sources_dir: Option<PathBuf>,
    #[serde(default)]
    store_file: Option<PathBuf>,
    #[serde(default)]
    catalog_file: Option<PathBuf>,
    #[serde(default)]
    mode: Option<String>,
    #[serde(default)]
    verbosity: Option<u8>,
}

struct Resolved {
    ontology_dir: PathBuf,
    mappings_file: PathBuf,
    sources_dir: PathBuf,
    store_file: PathBuf,
    catalog_file: PathBuf,
    virtual_default: bool,
    verbosity: u8,
}

fn resolve(paths: &PathArgs, config: &RunConfig, verbose: u8) -> Resolved {
    Resolved {
        ontology_dir: paths
            .ontology
            .clone()
            .or_else(|| config.ontology_dir.clone())
            .unwrap_or_else(|| PathBuf::from("fixtures/ontology")),
        mappings_file: paths
            .mappings
            .clone()
            .or_else(|| config.mappings_file.clone())
            .unwrap_or_else(|| PathBuf::from("fixtures/mappings/artemis-mappings.json")),
        sources_dir: paths
            .sources
            .clone()
            .or_else(|| config.sources_dir.clone())
            .unwrap_or_else(|| PathBuf::from("fixtures/sources")),
        store_file: paths
            .store
            .clone()
            .or_else(|| config.store_file.clone())
            .unwrap_or_else(|| PathBuf::from("artemis-kg.ttl")),
        catalog_file: paths
            .catalog
            .clone()
            .or_else(|| config.catalog_file.clone())
            .unwrap_or_else(|| PathBuf::from("fixtures/cq/catalog.txt")),
        virtual_default: config.mode.as_deref() == Some("virtual"),
        verbosity: verbose.max(config.verbosity.unwrap_or(0)),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let _ = err.print();
            return match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };

    let config = match load_config(cli.config.as_deref()) {
        Ok(config) => config,
        Err(err) => {
            eprintln!("error: {err:#}");
            return ExitCode::from(EXIT_USAGE);
        }
    };

    match dispatch(cli.command, &config, cli.verbose) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(EXIT_DATA)
        }
    }
}

fn load_config(path: Option<&Path>) -> Result<RunConfig> {
    let Some(path) = path else {
        return Ok(RunConfig::default());
    };
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read config {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("invalid config {}", path.display()))
}

fn dispatch(command: Command, config: &RunConfig, verbose: u8) -> Result<ExitCode> {
    match command {
        Command::Build { paths } => cmd_build(&resolve(&paths, config, verbose)),
        Command::Validate { paths } => {
            let resolved = resolve(&paths, config, verbose);
            if resolved.virtual_default {
                eprintln!("error: validate needs the materialized store; mode=virtual is not allowed");
                return Ok(ExitCode::from(EXIT_USAGE));
            }
            cmd_validate(&resolved)
        }
        Command::Query { paths, file, text, virtual_mode } => {
            let resolved = resolve(&paths, config, verbose);
            let text = match (file, text) {
                (Some(path), None) => std::fs::read_to_string(&path)
                    .with_context(|| format!("cannot read query file {}", path.display()))?,
                (None, Some(text)) => text,
                _ => {
                    eprintln!("error: query needs exactly one of --file or --text");
                    return Ok(ExitCode::from(EXIT_USAGE));
                }
            };
            cmd_query(&resolved, &text, virtual_mode || resolved.virtual_default)
        }
        Command::Cq { id, paths, param, virtual_mode } => {
            let resolved = resolve(&paths, config, verbose);
            let overrides = parse_params(&param)?;
            cmd_cq(&resolved, &id, &overrides, virtual_mode || resolved.virtual_default)
        }
        Command::Forecast {
            paths,
            plant,
            mode,
            horizon_min,
            step_min,
            order,
            history_from,
            history_to,
            weather_forecast,
            outages,
            write,
            format,
        } => {
            let resolved = resolve(&paths, config, verbose);
            if resolved.virtual_default {
                eprintln!("error: forecast needs the materialized store; mode=virtual is not allowed");
                return Ok(ExitCode::from(EXIT_USAGE));
            }
            let options = ForecastOptions {
                plant,
                mode,
                horizon: Duration::minutes(horizon_min),
                step: Duration::minutes(step_min),
                order,
                history_from,
                history_to,
                weather_forecast,
                outages,
                write,
                format,
            };
            cmd_forecast(&resolved, options)
        }
    }
}

fn parse_params(params: &[String]) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for param in params {
        let (key, value) = param
            .split_once('=')
            .ok_or_else(|| anyhow!("--param needs k=v, got {param:?}"))?;
        out.insert(key.trim().to_owned(), value.trim().to_owned());
    }
    Ok(out)
}

fn cmd_build(resolved: &Resolved) -> Result<ExitCode> {
    let config = BuildConfig {
        ontology_dir: resolved.ontology_dir.clone(),
        mappings_file: resolved.mappings_file.clone(),
        sources_dir: resolved.sources_dir.clone(),
    };
    let output = build_knowledge_graph(&config)?;
    let closure = compute_closure(&output.store);
    std::fs::write(&resolved.store_file, store_to_snapshot(&output.store))
        .with_context(|| format!("cannot write snapshot {}", resolved.store_file.display()))?;

    print!("{}", output.report);
    println!("store size:            {}", output.store.len());
    println!("inferred triples:      {}", closure.inferred_len());
    println!("snapshot:              {}", resolved.store_file.display());
    for warning in &output.ontology.warnings {
        eprintln!("warning: {warning}");
    }
    if resolved.verbosity > 0 {
        for module in &output.ontology.modules {
            eprintln!("module {} ({} terms)", module.iri, module.terms.len());
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn load_store(resolved: &Resolved) -> Result<TripleStore> {
    load_snapshot_file(&resolved.store_file).with_context(|| {
        format!(
            "cannot load snapshot {} (run `artemis-kg build` first?)",
            resolved.store_file.display()
        )
    })
}

fn load_catalog(resolved: &Resolved) -> Result<Vec<CompetencyQuestion>> {
    let text = std::fs::read_to_string(&resolved.catalog_file)
        .with_context(|| format!("cannot read catalog {}", resolved.catalog_file.display()))?;
    Ok(parse_catalog(&text)?)
}

fn cmd_validate(resolved: &Resolved) -> Result<ExitCode> {
    let store = load_store(resolved)?;
    let ontology = Ontology::from_store(store, Vec::new())?;
    let closure = compute_closure(&ontology.store);
    let mut report = validate(&ontology, &ontology.store);
    let suite = load_catalog(resolved)?;
    report.competency = check_competency(closure.combined(), &suite, &BTreeMap::new())?;

    println!("clarity: {:.4}", report.clarity);
    for (module, modularity) in &report.modularity {
        println!("modularity\t{module}\t{modularity:.4}");
    }
    if report.coherence.is_empty() {
        println!("coherence: no findings");
    } else {
        for finding in &report.coherence {
            println!("coherence finding: {finding}");
        }
    }
    for outcome in &report.competency {
        println!("{outcome}");
    }

    if report.has_failures() {
        eprintln!("validation failures present");
        Ok(ExitCode::from(EXIT_VALIDATION))
    } else {
        Ok(ExitCode::SUCCESS)
    }
}

fn virtual_machinery(
    resolved: &Resolved,
) -> Result<(Vec<artemis_kg::mapping::MappingRule>, Vec<SourceDescriptor>)> {
    let sources = standard_sources(&resolved.sources_dir);
    let mappings_text = std::fs::read_to_string(&resolved.mappings_file)
        .with_context(|| format!("cannot read mappings {}", resolved.mappings_file.display()))?;
    let rules = load_mappings(&mappings_text, &sources)?;
    Ok((rules, sources))
}

fn cmd_query(resolved: &Resolved, text: &str, virtual_mode: bool) -> Result<ExitCode> {
    let query = parse_query(text)?;
    let rows = if virtual_mode {
        let (rules, sources) = virtual_machinery(resolved)?;
        let plan = rewrite_virtual(&query, &rules, &sources)?;
        evaluate_virtual(&plan, &sources)?
    } else {
        let store = load_store(resolved)?;
        let closure = compute_closure(&store);
        evaluate(closure.combined(), &query)
    };
    print!("{}", solutions_to_tsv(&query.variables, &rows));
    eprintln!("{} row(s)", rows.len());
    Ok(ExitCode::SUCCESS)
}

fn cmd_cq(
    resolved: &Resolved,
    id: &str,
    overrides: &BTreeMap<String, String>,
    virtual_mode: bool,
) -> Result<ExitCode> {
    let suite = load_catalog(resolved)?;
    if virtual_mode {
        let question = artemis_kg::query::find_question(&suite, id)?;
        let query = parse_query(&question.instantiate(overrides)?)?;
        let (rules, sources) = virtual_machinery(resolved)?;
        let plan = rewrite_virtual(&query, &rules, &sources)?;
        let rows = evaluate_virtual(&plan, &sources)?;
        print!("{}", solutions_to_tsv(&query.variables, &rows));
        eprintln!("{}: {} row(s)", id, rows.len());
        return Ok(ExitCode::SUCCESS);
    }

    let store = load_store(resolved)?;
    let closure = compute_closure(&store);
    let question = artemis_kg::query::find_question(&suite, id)?;
    let query = parse_query(&question.instantiate(overrides)?)?;
    let rows = evaluate(closure.combined(), &query);
    print!("{}", solutions_to_tsv(&query.variables, &rows));
    let outcome = check_one(closure.combined(), &suite, id, overrides)?;
    eprintln!("{}", outcome);
    Ok(ExitCode::SUCCESS)
}

struct ForecastOptions {
    plant: String,
    mode: String,
    horizon: Duration,
    step: Duration,
    order: usize,
    history_from: Option<String>,
    history_to: Option<String>,
    weather_forecast: Option<PathBuf>,
    outages: Option<PathBuf>,
    write: bool,
    format: String,
}

fn resolve_plant_iri(text: &str) -> String {
    if text.contains("://") {
        return text.to_owned();
    }
    if let Some((label, local)) = text.split_once(':') {
        if let Some(iri) = PrefixMap::well_known().expand(label, local) {
            return iri;
        }
    }
    text.to_owned()
}

fn parse_ts_flag(flag: &Option<String>, fallback: &str) -> Result<DateTime<Utc>> {
    let text = flag.as_deref().unwrap_or(fallback);
    parse_timestamp(text).ok_or_else(|| anyhow!("invalid timestamp {text:?}"))
}

fn cmd_forecast(resolved: &Resolved, options: ForecastOptions) -> Result<ExitCode> {
    let mut store = load_store(resolved)?;
    let plant = resolve_plant_iri(&options.plant);
    let from = parse_ts_flag(&options.history_from, "1970-01-01T00:00:00Z")?;
    let to = parse_ts_flag(&options.history_to, "9999-01-01T00:00:00Z")?;

    let outcome: std::result::Result<(ForecastResult, Vec<WeatherPoint>), ForecastError> = (|| {
        let series = extract_series(&store, &plant, from, to)?;
        match options.mode.as_str() {
            "vst" => {
                let result =
                    forecast_very_short_term(&series, options.horizon, options.step, options.order)?;
                Ok((result, Vec::new()))
            }
            "day-ahead" => {
                let observations = read_weather_points(
                    &resolved.sources_dir.join("weather.json"),
                )
                .map_err(|e| ForecastError::InvalidStep(format!("weather observations: {e}")))?;
                let forecast_path = options
                    .weather_forecast
                    .clone()
                    .unwrap_or_else(|| resolved.sources_dir.join("weather_forecast.json"));
                let forecast_points = read_weather_points(&forecast_path)
                    .map_err(|e| ForecastError::InvalidStep(format!("weather forecast: {e}")))?;
                let outages = match &options.outages {
                    Some(path) => read_outages(path)
                        .map_err(|e| ForecastError::InvalidStep(format!("outages: {e}")))?,
                    None => Vec::new(),
                };
                let driver = plant_driver(&store, &plant);
                let result =
                    forecast_day_ahead(&series, &observations, &forecast_points, driver, &outages)?;
                Ok((result, forecast_points))
            }
            other => Err(ForecastError::InvalidStep(format!(
                "unknown mode {other:?}, expected vst or day-ahead"
            ))),
        }
    })();

    let (result, weather_points) = match outcome {
        Ok(pair) => pair,
        Err(err) => {
            eprintln!("forecast precondition failed: {err}");
            return Ok(ExitCode::from(EXIT_FORECAST));
        }
    };

    eprintln!(
        "method {} | training size {} | residual norm {:.6} | coefficients {:?}",
        result.diagnostics.method,
        result.diagnostics.training_size,
        result.diagnostics.residual_norm,
        result.diagnostics.coefficients,
    );

    match options.format.as_str() {
        "tsv" => print!("{}", result.to_tsv()),
        "turtle" => {
            let mut scratch = TripleStore::new();
            write_forecast(&mut scratch, &result);
            if result.request.mode == ForecastMode::DayAhead && !weather_points.is_empty() {
                write_weather_forecast(
                    &mut scratch,
                    "Belgrade",
                    result.issued_at,
                    &weather_points,
                );
            }
            print!("{}", store_to_snapshot(&scratch));
        }
        other => {
            eprintln!("error: unknown format {other:?}, expected tsv or turtle");
            return Ok(ExitCode::from(EXIT_USAGE));
        }
    }

    if options.write {
        let mut added = write_forecast(&mut store, &result);
        if result.request.mode == ForecastMode::DayAhead && !weather_points.is_empty() {
            added += write_weather_forecast(&mut store, "Belgrade", result.issued_at, &weather_points);
        }
        std::fs::write(&resolved.store_file, store_to_snapshot(&store))
            .with_context(|| format!("cannot write snapshot {}", resolved.store_file.display()))?;
        eprintln!("wrote {added} triple(s) to {}", resolved.store_file.display());
    }
    Ok(ExitCode::SUCCESS)
}

/// Driver variable for the plant: irradiance for RES-FV, wind otherwise.
fn plant_driver(store: &TripleStore, plant: &str) -> DriverKind {
    let acronym = store
        .match_pattern(
            Some(&Term::iri(plant)),
            Some(&Term::iri(vocab::ARTEMIS_EIC_FUNCTION_ACRONYM)),
            None,
        )
        .next()
        .and_then(|t| t.object.as_literal().map(|l| l.lexical().to_owned()));
    match acronym {
        Some(acronym) => DriverKind::for_eic_acronym(&acronym),
        None => DriverKind::WindSpeed,
    }
}

fn read_weather_points(path: &Path) -> Result<Vec<WeatherPoint>> {
    use artemis_kg::connectors::{standard_sources_from, SourceLocation};
    let json = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    let sources = standard_sources_from(move |name| {
        SourceLocation::Inline(if name == "weather.json" { json.clone() } else { String::new() })
    });
    let weather = sources.into_iter().find(|s| s.id == "weather").expect("standard set has weather");
    let rows = weather.read()?;
    Ok(rows.rows.iter().filter_map(WeatherPoint::from_row).collect())
}

#[derive(Deserialize)]
struct OutageEntry {
    start: String,
    end: String,
}

fn read_outages(path: &Path) -> Result<Vec<OutageInterval>> {
    let json = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    let entries: Vec<OutageEntry> = serde_json::from_str(&json)?;
    entries
        .into_iter()
        .map(|entry| {
            let start = parse_timestamp(&entry.start)
                .ok_or_else(|| anyhow!("invalid outage start {:?}", entry.start))?;
            let end = parse_timestamp(&entry.end)
                .ok_or_else(|| anyhow!("invalid outage end {:?}", entry.end))?;
            if end <= start {
                bail!("outage interval ends before it starts");
            }
            Ok(OutageInterval { start, end })
        })
        .collect()
}
