//! Command-line front end. Every verb reads a JSON system file and writes a
//! JSON report; `simulate` additionally produces a CSV trace.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::analysis::{self, state_response, uniform_grid, InputSignal, StructureReport};
use crate::bimatrix::{Bimatrix, HermBimatrix};
use crate::design::{self, closed_loop, WeightPair};
use crate::error::{Error, Result};
use crate::io::{self, BimatrixJson, SystemFile};
use crate::linalg::CVector;
use crate::spectrum::SpectrumSet;
use crate::system::CxSystem;
use crate::DEFAULT_SEED;

/// Default tolerance for the spectrum checks reported by design verbs.
pub const DEFAULT_TOL: f64 = 1e-6;

#[derive(Debug, Parser)]
#[command(name = "bimatrix", version, about = "Analysis and design of complex-valued linear systems")]
pub struct CommandRequest {
    /// Seed for randomised placement
    #[arg(long, global = true, env = "BIMATRIX_SEED")]
    pub seed: Option<u64>,
    /// Output path (report for design verbs, CSV for simulate)
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Tolerance of the spectrum checks in reports
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[command(subcommand)]
    pub verb: Verb,
}

#[derive(Debug, Subcommand)]
pub enum Verb {
    /// Structural properties and spectrum
    Analyze { system: PathBuf },
    /// Eigenvalue assignment by full state feedback
    Place {
        system: PathBuf,
        /// JSON list of [re, im] pairs, or a file holding one
        #[arg(long)]
        spectrum: String,
    },
    /// Any stabilising full state feedback
    Stabilize { system: PathBuf },
    /// Optimal regulator; weights default to identity
    Lqr {
        system: PathBuf,
        /// Hermite bimatrix file for the state weight
        #[arg(long)]
        q: Option<PathBuf>,
        /// Hermite bimatrix file for the input weight
        #[arg(long)]
        r: Option<PathBuf>,
    },
    /// Full-order observer with the given error spectrum
    Observer {
        system: PathBuf,
        #[arg(long)]
        spectrum: String,
    },
    /// Time response on a uniform grid
    Simulate {
        system: PathBuf,
        /// Feedback gain bimatrix file
        #[arg(long)]
        gain: Option<PathBuf>,
        /// Observer gain bimatrix file; the observer state is appended to x
        #[arg(long)]
        observer: Option<PathBuf>,
        /// Initial state as a JSON list of [re, im] pairs
        #[arg(long)]
        x0: String,
        /// `zero`, or a file with one input vector (held) or one per grid point
        #[arg(long, default_value = "zero")]
        u: String,
        #[arg(long)]
        horizon: f64,
        /// Step of the continuous grid; ignored in discrete time
        #[arg(long, default_value_t = 0.01)]
        dt: f64,
    },
    /// Complex-valued form of an even-dimensional real system
    Convert { system: PathBuf },
}

impl Verb {
    pub fn name(&self) -> &'static str {
        match self {
            Verb::Analyze { .. } => "analyze",
            Verb::Place { .. } => "place",
            Verb::Stabilize { .. } => "stabilize",
            Verb::Lqr { .. } => "lqr",
            Verb::Observer { .. } => "observer",
            Verb::Simulate { .. } => "simulate",
            Verb::Convert { .. } => "convert",
        }
    }
}

/// Result of a command: the JSON report and, for `simulate`, the CSV trace.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub report: Value,
    pub csv: Option<String>,
}

pub fn parse_system_file(path: &Path) -> Result<CxSystem> {
    io::read_system(path)
}

/// Reads inline JSON or, when the argument is not JSON, a file.
fn inline_or_file(arg: &str) -> Result<String> {
    if arg.trim_start().starts_with('[') {
        Ok(arg.to_string())
    } else {
        Ok(fs::read_to_string(arg)?)
    }
}

fn spectrum_json(s: &SpectrumSet) -> Value {
    json!(io::complex_list_to_json(s.values()))
}

fn bimatrix_json(b: &Bimatrix) -> Value {
    serde_json::to_value(BimatrixJson::from_bimatrix(b)).expect("bimatrix serialises")
}

fn finite_or_null(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

fn fingerprint(sys: &CxSystem) -> Value {
    json!({ "n": sys.n(), "m": sys.m(), "p": sys.p(), "domain": sys.domain().to_string() })
}

fn structure_json(r: &StructureReport) -> Value {
    json!({
        "controllable": r.controllable,
        "observable": r.observable,
        "stabilizable": r.stabilizable,
        "detectable": r.detectable,
        "stable": r.stable,
        "spectrum": spectrum_json(&r.spectrum),
    })
}

fn margins_json(r: &StructureReport) -> Value {
    json!({
        "controllability": finite_or_null(r.margins.controllability),
        "observability": finite_or_null(r.margins.observability),
        "stabilizability": finite_or_null(r.margins.stabilizability),
        "detectability": finite_or_null(r.margins.detectability),
    })
}

fn closed_loop_check(sys: &CxSystem, gain: &Bimatrix) -> Result<(SpectrumSet, bool)> {
    let cl = closed_loop(sys, gain)?;
    Ok((cl.eigenvalues()?, analysis::is_asymptotically_stable(&cl)?))
}

fn read_weight(path: &Option<PathBuf>, order: usize) -> Result<HermBimatrix> {
    match path {
        Some(p) => HermBimatrix::from_bimatrix(io::read_bimatrix(p)?),
        None => Ok(HermBimatrix::identity(order)),
    }
}

fn read_input(arg: &str, m: usize) -> Result<InputSignal> {
    if arg == "zero" {
        return Ok(InputSignal::Zero);
    }
    let text = fs::read_to_string(arg)?;
    let value: Value = serde_json::from_str(&text)?;
    let is_sample_list = value.as_array().and_then(|a| a.first()).and_then(|v| v.as_array()).and_then(|v| v.first()).is_some_and(Value::is_array);
    if is_sample_list {
        let samples: Vec<Vec<[f64; 2]>> = serde_json::from_value(value)?;
        Ok(InputSignal::Samples(
            samples
                .into_iter()
                .map(|s| CVector::from_iterator(s.len(), s.into_iter().map(|[re, im]| Complex64::new(re, im))))
                .collect(),
        ))
    } else {
        let u = io::vector_from_str(&text)?;
        if u.len() != m {
            return Err(Error::dims("input vector", m, u.len()));
        }
        Ok(InputSignal::Constant(u))
    }
}

/// Executes a parsed request.
pub fn run(req: &CommandRequest) -> Result<Outcome> {
    let seed = req.seed.unwrap_or(DEFAULT_SEED);
    let tol = req.tol.unwrap_or(DEFAULT_TOL);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut csv = None;

    let (sys_fp, results, diagnostics) = match &req.verb {
        Verb::Analyze { system } => {
            let sys = parse_system_file(system)?;
            let r = analysis::analyze(&sys)?;
            (fingerprint(&sys), structure_json(&r), json!({ "margins": margins_json(&r) }))
        }
        Verb::Place { system, spectrum } => {
            let sys = parse_system_file(system)?;
            let gamma = io::spectrum_from_str(&inline_or_file(spectrum)?)?;
            let k = design::assign_eigenvalues(&sys, &gamma, &mut rng)?;
            let (achieved, _) = closed_loop_check(&sys, &k)?;
            let mismatch = achieved.max_mismatch(&gamma);
            (
                fingerprint(&sys),
                json!({ "gain": bimatrix_json(&k), "target": spectrum_json(&gamma), "achieved": spectrum_json(&achieved) }),
                json!({ "spectrum_mismatch": mismatch, "verified": mismatch <= tol }),
            )
        }
        Verb::Stabilize { system } => {
            let sys = parse_system_file(system)?;
            let k = design::stabilize(&sys)?;
            let (achieved, stable) = closed_loop_check(&sys, &k)?;
            (
                fingerprint(&sys),
                json!({ "gain": bimatrix_json(&k), "closed_loop_spectrum": spectrum_json(&achieved) }),
                json!({
                    "closed_loop_stable": stable,
                    "spectral_abscissa": achieved.spectral_abscissa(),
                    "spectral_radius": achieved.spectral_radius(),
                }),
            )
        }
        Verb::Lqr { system, q, r } => {
            let sys = parse_system_file(system)?;
            let w = WeightPair::new(read_weight(q, sys.n())?, read_weight(r, sys.m())?)?;
            let sol = design::lqr(&sys, &w)?;
            let (achieved, stable) = closed_loop_check(&sys, &sol.gain)?;
            (
                fingerprint(&sys),
                json!({
                    "P": bimatrix_json(sol.p.as_bimatrix()),
                    "gain": bimatrix_json(&sol.gain),
                    "closed_loop_spectrum": spectrum_json(&achieved),
                }),
                json!({
                    "are_residual": sol.residual,
                    "are_residual_lifted": sol.residual_lifted,
                    "iterations": sol.iterations,
                    "closed_loop_stable": stable,
                }),
            )
        }
        Verb::Observer { system, spectrum } => {
            let sys = parse_system_file(system)?;
            let gamma = io::spectrum_from_str(&inline_or_file(spectrum)?)?;
            let l = design::design_observer(&sys, &gamma, &mut rng)?;
            let achieved = design::observer_error(&sys, &l)?.eigenvalues()?;
            let mismatch = achieved.max_mismatch(&gamma);
            (
                fingerprint(&sys),
                json!({ "observer_gain": bimatrix_json(&l), "target": spectrum_json(&gamma), "achieved": spectrum_json(&achieved) }),
                json!({ "spectrum_mismatch": mismatch, "verified": mismatch <= tol }),
            )
        }
        Verb::Simulate { system, gain, observer, x0, u, horizon, dt } => {
            let sys = parse_system_file(system)?;
            let k = match gain {
                Some(p) => io::read_bimatrix(p)?,
                None => Bimatrix::zeros(sys.m(), sys.n()),
            };
            let mut x0 = io::vector_from_str(x0)?;
            if x0.len() != sys.n() {
                return Err(Error::dims("initial state", sys.n(), x0.len()));
            }
            let sim_sys = match observer {
                Some(p) => {
                    let l = io::read_bimatrix(p)?;
                    x0 = x0.clone().resize_vertically(2 * sys.n(), Complex64::default());
                    design::observer_feedback_loop(&sys, &k, &l)?
                }
                None => closed_loop(&sys, &k)?,
            };
            let grid = uniform_grid(sys.domain(), *horizon, *dt)?;
            let trace = state_response(&sim_sys, &x0, &read_input(u, sys.m())?, &grid)?;
            let initial = trace.states.first().map_or(0.0, |x| x.norm());
            let last = trace.final_state().map_or(0.0, |x| x.norm());
            csv = Some(io::trace_to_csv(&trace));
            (
                fingerprint(&sys),
                json!({
                    "samples": trace.len(),
                    "trace": req.out.as_ref().map(|p| p.display().to_string()),
                }),
                json!({
                    "initial_state_norm": initial,
                    "final_state_norm": last,
                    "closed_loop_stable": analysis::is_asymptotically_stable(&sim_sys)?,
                }),
            )
        }
        Verb::Convert { system } => {
            let file: SystemFile = serde_json::from_str(&fs::read_to_string(system)?)?;
            let real = file
                .real_system()?
                .ok_or_else(|| Error::InvalidInput("file has no \"real_system\"".into()))?;
            let residual = real.conversion_residual()?;
            let sys = real.to_complex()?;
            (
                fingerprint(&sys),
                json!({ "system": serde_json::to_value(SystemFile::from_system(&sys))? }),
                json!({ "conversion_residual": residual, "exact": residual <= 1e-12 }),
            )
        }
    };

    let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
    let report = json!({
        "tool": "bimatrix",
        "version": env!("CARGO_PKG_VERSION"),
        "timestamp": timestamp,
        "verb": req.verb.name(),
        "seed": seed,
        "system": sys_fp,
        "results": results,
        "diagnostics": diagnostics,
    });
    Ok(Outcome { report, csv })
}

/// Exit status for an error: 2 for structural infeasibility, 1 otherwise.
pub fn exit_code(err: &Error) -> i32 {
    if err.is_infeasible() {
        2
    } else {
        1
    }
}

fn emit(req: &CommandRequest, outcome: &Outcome) -> Result<()> {
    let report = serde_json::to_string_pretty(&outcome.report)? + "\n";
    match (&outcome.csv, &req.out) {
        (Some(csv), Some(path)) => {
            fs::write(path, csv)?;
            print!("{report}");
        }
        (Some(csv), None) => print!("{csv}"),
        (None, Some(path)) => fs::write(path, report)?,
        (None, None) => print!("{report}"),
    }
    Ok(())
}

/// Parses the process arguments, runs the command and returns the exit code.
pub fn main_entry() -> i32 {
    let req = CommandRequest::parse();
    match run(&req).and_then(|outcome| emit(&req, &outcome)) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("bimatrix {}: {e}", req.verb.name());
            exit_code(&e)
        }
    }
}
