//! Command-line front end.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use log::{error, info};
use serde::Serialize;
use serde_json::json;

use crate::certificates::{
    invariant_combinations, monitor_flex, rigidity_certificate, InvariantCombination, LengthsInput, RigidityCertificate,
};
use crate::complex::validate_complex;
use crate::flex::{trace_flex, TraceOptions};
use crate::geometry::{
    dihedral_angles, edge_lengths, monte_carlo_dihedral, MonteCarloOptions, NORMAL_CANCELLATION_TOL,
};
use crate::lengths::{q_basis, DecimalValue, RelationOptions};
use crate::models::{self, load_off, parse_off, save_report_json, save_series_csv, Model, ModelError, Report};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_FAILURE: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "rigiditylab",
    version,
    about = "Rigidity certificates and flex tracing for triangulated polyhedra"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the combinatorial conditions of a closed oriented surface.
    Validate(RunConfig),
    /// Rigidity certificate and conserved angle combinations.
    Analyze(RunConfig),
    /// Trace a flex and monitor the conserved quantities along it.
    Flex(RunConfig),
    /// Compare closed-form and Monte Carlo dihedral angles edge by edge.
    Oracle(RunConfig),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Lengths r·√d from rational coordinates or declared lengths.
    Exact,
    /// Decimal lengths and a bounded integer-relation search.
    Numeric,
}

#[derive(clap::Args, Clone, Debug)]
pub struct RunConfig {
    /// OFF file to read (same as --input).
    pub file: Option<PathBuf>,
    /// Built-in model: octahedron, cube, tetrahedron, bricard-default, distinct-radicands.
    #[arg(long, conflicts_with_all = ["input", "file"])]
    pub model: Option<String>,
    /// OFF file to read.
    #[arg(long, conflicts_with = "file")]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Mode::Exact)]
    pub mode: Mode,
    /// Accepted flex steps.
    #[arg(long, default_value_t = 200)]
    pub steps: usize,
    /// Largest step length in configuration space.
    #[arg(long, default_value_t = 0.01)]
    pub step: f64,
    /// Corrector tolerance on squared lengths, relative to the largest.
    #[arg(long, default_value_t = 1e-11)]
    pub tol: f64,
    /// Coefficient bound for the integer-relation search.
    #[arg(long, default_value_t = 1_000_000)]
    pub height: u64,
    /// Monte Carlo samples per edge.
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Monte Carlo worker threads; results do not depend on this.
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    pub out_json: Option<PathBuf>,
    /// Write the sampled flex as CSV here.
    #[arg(long)]
    pub out_csv: Option<PathBuf>,
}

/// A failure with its exit code.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn io(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_FAILURE,
            message: message.into(),
        }
    }
}

impl From<ModelError> for Failure {
    fn from(e: ModelError) -> Self {
        let code = match e {
            ModelError::Complex(_) => EXIT_INVALID,
            _ => EXIT_FAILURE,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

fn input_path(cfg: &RunConfig) -> Option<&Path> {
    cfg.input.as_deref().or(cfg.file.as_deref())
}

fn read_input(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::io(format!("{}: {e}", path.display())))
}

fn load_model(cfg: &RunConfig) -> Result<Model, Failure> {
    match (&cfg.model, input_path(cfg)) {
        (Some(name), _) => models::builtin(name).ok_or_else(|| {
            Failure::io(format!(
                "unknown model {name:?} (known: {})",
                models::BUILTIN_MODELS.join(", ")
            ))
        }),
        (None, Some(path)) => {
            let name = path
                .file_stem()
                .map_or("input".into(), |s| s.to_string_lossy().into_owned());
            Ok(load_off(&read_input(path)?, &name)?)
        }
        (None, None) => Err(Failure::io("give --model or an input file")),
    }
}

fn emit(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn validate(cfg: &RunConfig) -> Result<i32, Failure> {
    let faces = match (&cfg.model, input_path(cfg)) {
        (Some(_), _) => load_model(cfg)?.polyhedron.surface().faces().to_vec(),
        (None, Some(path)) => parse_off(&read_input(path)?)?.faces,
        (None, None) => return Err(Failure::io("give --model or an input file")),
    };
    let report = validate_complex(&faces);
    emit(cfg.out_json.as_deref(), &to_json(&report))?;
    Ok(if report.passed { EXIT_OK } else { EXIT_INVALID })
}

fn lengths_input(cfg: &RunConfig, model: &Model) -> Result<LengthsInput, Failure> {
    Ok(match cfg.mode {
        Mode::Exact => LengthsInput::Exact(model.exact_lengths()?),
        Mode::Numeric => {
            // decimals as the model can best supply them
            let values = match model.exact_lengths() {
                Ok(ls) => ls
                    .iter()
                    .map(|l| DecimalValue::parse(&l.to_decimal(30)).expect("rendered decimal"))
                    .collect(),
                Err(_) => edge_lengths(&model.polyhedron)
                    .into_iter()
                    .map(|l| DecimalValue::from_f64(l).expect("finite length"))
                    .collect(),
            };
            LengthsInput::Numeric {
                values,
                options: RelationOptions {
                    height: cfg.height,
                    ..Default::default()
                },
            }
        }
    })
}

/// Certificate and, in exact mode, the conserved combinations at `angles0`.
fn analysis(
    cfg: &RunConfig,
    model: &Model,
    angles0: &[f64],
) -> Result<(RigidityCertificate, Vec<InvariantCombination>), Failure> {
    let lengths = lengths_input(cfg, model)?;
    let cert = rigidity_certificate(&lengths).map_err(|e| Failure::io(e.to_string()))?;
    let combos = match &lengths {
        LengthsInput::Exact(ls) => invariant_combinations(&q_basis(ls), angles0),
        LengthsInput::Numeric { .. } => Vec::new(),
    };
    Ok((cert, combos))
}

fn start_angles(model: &Model) -> Result<Vec<f64>, Failure> {
    let angles = dihedral_angles(&model.polyhedron, NORMAL_CANCELLATION_TOL).map_err(|e| Failure::io(e.to_string()))?;
    Ok(angles.iter().map(|a| a.principal_value).collect())
}

fn analyze(cfg: &RunConfig) -> Result<i32, Failure> {
    let model = load_model(cfg)?;
    let (cert, combos) = analysis(cfg, &model, &start_angles(&model)?)?;
    let report = Report::new(&model.name, model.polyhedron.surface(), &cert, &combos, None);
    emit(cfg.out_json.as_deref(), &save_report_json(&report))?;
    Ok(EXIT_OK)
}

fn flex(cfg: &RunConfig) -> Result<i32, Failure> {
    let model = load_model(cfg)?;
    let opts = TraceOptions {
        n_steps: cfg.steps,
        step: cfg.step,
        tol: cfg.tol,
        ..Default::default()
    };
    let outcome = trace_flex(&model.polyhedron, None, &opts);
    let path = match &outcome {
        Ok(path) => Some(path),
        Err(e) => e.partial_path(),
    };
    let mut trace = json!({
        "status": if outcome.is_ok() { "complete" } else { "aborted" },
        "steps": path.map_or(0, |p| p.steps()),
    });
    if let Err(e) = &outcome {
        trace["error"] = json!(e.to_string());
    }
    let angles0 = match path.and_then(|p| p.samples.first()) {
        Some(s) => s.lifted.clone(),
        None => start_angles(&model)?,
    };
    let (cert, combos) = analysis(cfg, &model, &angles0)?;
    let monitoring = path.map(|p| monitor_flex(p, &combos));
    let mut report = Report::new(
        &model.name,
        model.polyhedron.surface(),
        &cert,
        &combos,
        monitoring.as_ref(),
    );
    if let Some(path) = path {
        trace["max_relative_length_drift"] = json!(path.max_relative_length_drift());
        if let Some(csv) = &cfg.out_csv {
            emit(Some(csv), &save_series_csv(path))?;
        }
    }
    report.extra.insert("trace".into(), trace);
    emit(cfg.out_json.as_deref(), &save_report_json(&report))?;
    match outcome {
        Ok(_) => Ok(EXIT_OK),
        Err(e) => {
            error!("flex aborted: {e}");
            Ok(EXIT_FAILURE)
        }
    }
}

#[derive(Serialize)]
struct OracleRow {
    edge: String,
    principal: f64,
    monte_carlo: f64,
    abs_diff: f64,
}

fn oracle(cfg: &RunConfig) -> Result<i32, Failure> {
    let model = load_model(cfg)?;
    let p = &model.polyhedron;
    let opts = MonteCarloOptions {
        samples: cfg.samples,
        seed: cfg.seed,
        workers: cfg.workers.max(1),
        ..Default::default()
    };
    let angles = dihedral_angles(p, NORMAL_CANCELLATION_TOL).map_err(|e| Failure::io(e.to_string()))?;
    let mut rows = Vec::with_capacity(angles.len());
    for a in &angles {
        let mc = monte_carlo_dihedral(p, a.edge, &opts).map_err(|e| Failure::io(e.to_string()))?;
        info!("edge {}: {} vs {mc}", a.edge, a.principal_value);
        rows.push(OracleRow {
            edge: p.surface().edges()[a.edge].to_string(),
            principal: a.principal_value,
            monte_carlo: mc,
            abs_diff: (a.principal_value - mc).abs(),
        });
    }
    let mut table = format!(
        "{:<8} {:>22} {:>22} {:>12}\n",
        "edge", "principal", "monte_carlo", "abs_diff"
    );
    for r in &rows {
        table.push_str(&format!(
            "{:<8} {:>22.16} {:>22.16} {:>12.3e}\n",
            r.edge, r.principal, r.monte_carlo, r.abs_diff
        ));
    }
    print!("{table}");
    if let Some(path) = &cfg.out_json {
        let doc = json!({
            "format_version": models::FORMAT_VERSION,
            "model": model.name,
            "samples": cfg.samples,
            "seed": cfg.seed,
            "edges": rows,
        });
        emit(Some(path), &to_json(&doc))?;
    }
    Ok(EXIT_OK)
}

/// Run a parsed command line; returns the process exit code.
pub fn run(cli: &Cli) -> i32 {
    let result = match &cli.command {
        Command::Validate(c) => validate(c),
        Command::Analyze(c) => analyze(c),
        Command::Flex(c) => flex(c),
        Command::Oracle(c) => oracle(c),
    };
    result.unwrap_or_else(|f| {
        eprintln!("rigiditylab: {}", f.message);
        f.code
    })
}
