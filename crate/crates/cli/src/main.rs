use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qgraph::graph_file::{self, GraphFile};
use qgraph::json::{self, F17};
use qgraph::report::{self, AnalysisError, ZetaRequest, SCHEMA};
use qgraph::verify;
use qgraph_core::spectrum_oracle::OracleError;
use qgraph_core::zeta::ZetaError;
use serde::Serialize;

const EXIT_INCONSISTENT: u8 = 1;
const EXIT_INPUT: u8 = 2;

/// Spectral determinants of quantum graphs and spanning-tree recovery.
#[derive(Parser)]
#[command(name = "qgraph", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Determinants, tree counts, threshold certificate and bounds for a graph file.
    Analyze {
        path: PathBuf,
        /// Length for edges listed without one.
        #[arg(long, default_value_t = 1.0)]
        length: f64,
        #[arg(long)]
        json: bool,
        /// Also tabulate the spectral zeta function at these s (equilateral only).
        #[arg(long, value_delimiter = ',')]
        s: Vec<f64>,
        /// Wavenumber cutoff for the direct zeta sum.
        #[arg(long)]
        cutoff: Option<f64>,
    },
    /// Spectral zeta function of an equilateral graph: Hurwitz formula against a direct sum.
    Zeta {
        path: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        s: Vec<f64>,
        #[arg(long)]
        cutoff: Option<f64>,
        #[arg(long, default_value_t = 1.0)]
        length: f64,
        #[arg(long)]
        json: bool,
    },
    /// Seeded randomized property suite.
    Verify {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long = "max-v", default_value_t = 7)]
        max_v: usize,
        #[arg(long)]
        json: bool,
    },
}

/// Writes to stdout; a closed pipe (`| head`) is not an error.
fn emit(text: &str) {
    let mut out = io::stdout().lock();
    if let Err(e) = out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        if e.kind() != io::ErrorKind::BrokenPipe {
            eprintln!("error: writing output: {e}");
        }
    }
}

fn fail(code: u8, message: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(code)
}

fn load(path: &Path, length: f64) -> Result<GraphFile, ExitCode> {
    if !(length > 0.0 && length.is_finite()) {
        return Err(fail(EXIT_INPUT, format!("--length must be positive, got {length}")));
    }
    graph_file::load(path, length).map_err(|e| fail(EXIT_INPUT, e))
}

fn zeta_exit(e: &ZetaError) -> u8 {
    match e {
        ZetaError::HalfLinePole | ZetaError::NonpositiveS(_) | ZetaError::SNotConvergent(_) => EXIT_INPUT,
        ZetaError::Oracle(o) if matches!(**o, OracleError::NonpositiveCutoff(_)) => EXIT_INPUT,
        _ => EXIT_INCONSISTENT,
    }
}

fn analyze(path: PathBuf, length: f64, as_json: bool, s: Vec<f64>, cutoff: Option<f64>) -> ExitCode {
    let file = match load(&path, length) {
        Ok(f) => f,
        Err(code) => return code,
    };
    let request = ZetaRequest { s_values: &s, cutoff };
    let mut report = match report::analyze(&file.metric, Some(request)) {
        Ok(r) => r,
        Err(AnalysisError::Zeta(e)) => return fail(zeta_exit(&e), e),
        Err(e @ AnalysisError::NotEquilateral) => return fail(EXIT_INPUT, e),
        Err(e) => return fail(EXIT_INCONSISTENT, e),
    };
    if file.defaulted_lengths > 0 {
        report.notes.push(format!("{} edge length(s) defaulted to {length}", file.defaulted_lengths));
    }
    if as_json {
        emit(&(json::to_string(&report) + "\n"));
    } else {
        emit(&report::render(&report));
    }
    if report.consistent { ExitCode::SUCCESS } else { ExitCode::from(EXIT_INCONSISTENT) }
}

#[derive(Serialize)]
struct ZetaOutput {
    schema: u32,
    length: F17,
    cutoff: F17,
    rows: Vec<report::ZetaRow>,
    all_within: bool,
}

fn zeta(path: PathBuf, s: Vec<f64>, cutoff: Option<f64>, length: f64, as_json: bool) -> ExitCode {
    let file = match load(&path, length) {
        Ok(f) => f,
        Err(code) => return code,
    };
    let mg = &file.metric;
    if !mg.is_equilateral() {
        return fail(EXIT_INPUT, "zeta needs an equilateral graph");
    }
    let l = mg.min_length();
    let cutoff = cutoff.unwrap_or_else(|| report::default_cutoff(l));
    let rows = match report::zeta_rows(mg.graph(), l, &s, cutoff) {
        Ok(rows) => rows,
        Err(e) => return fail(zeta_exit(&e), e),
    };
    let all_within = rows.iter().all(|r| r.within);
    if as_json {
        let out = ZetaOutput { schema: SCHEMA, length: F17(l), cutoff: F17(cutoff), rows, all_within };
        emit(&(json::to_string(&out) + "\n"));
    } else {
        emit(&format!("equilateral length {l}, cutoff {cutoff}\n"));
        emit(&report::render_zeta(&rows));
    }
    if all_within { ExitCode::SUCCESS } else { ExitCode::from(EXIT_INCONSISTENT) }
}

fn run_verify(seed: u64, trials: usize, max_v: usize, as_json: bool) -> ExitCode {
    let summary = match verify::run(seed, trials, max_v) {
        Ok(s) => s,
        Err(e) => return fail(EXIT_INPUT, e),
    };
    if as_json {
        emit(&(json::to_string(&summary) + "\n"));
    } else {
        emit(&verify::render(&summary));
    }
    if summary.all_passed { ExitCode::SUCCESS } else { ExitCode::from(EXIT_INCONSISTENT) }
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Analyze { path, length, json, s, cutoff } => analyze(path, length, json, s, cutoff),
        Command::Zeta { path, s, cutoff, length, json } => zeta(path, s, cutoff, length, json),
        Command::Verify { seed, trials, max_v, json } => run_verify(seed, trials, max_v, json),
    }
}
