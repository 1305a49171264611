//! The `covent` command line.
//!
//! Exit codes: 0 success, 1 runtime error, 2 input error (unreadable or
//! invalid files, bad arguments).

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::concurrence::concurrence_mixed;
use crate::ensembles::{EnsembleKind, EnsembleSpec};
use crate::error::Error;
use crate::figures::{ensemble_rows, purity_slice, scan_bounds};
use crate::gmeasure::{analyze, g_from_covariances, GReport};
use crate::observables::correlation_data;
use crate::sampler::{estimate_g_with, simulate_record, GEstimate, MeasurementRecord, DEFAULT_BOOTSTRAP};
use crate::states::{canonical, purity, rho_u, DensityMatrix, StateFile};

/// Seed used when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 20_070_101;

pub const EXIT_OK: i32 = 0;
pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "covent", version, about = "Covariance-based two-qubit entanglement measure G")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output file (stdout if omitted).
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// G, L₃, verdict and concurrence for a state file, or the G estimate
    /// for a measurement-record file.
    Analyze {
        input: PathBuf,
        #[command(flatten)]
        out: OutputArgs,
        /// Bootstrap resamples when the input is a measurement record.
        #[arg(long, default_value_t = DEFAULT_BOOTSTRAP)]
        bootstrap: usize,
    },
    /// Random mixed states against the boundary curves of the (C, G) region.
    ScanBounds {
        #[arg(long, default_value_t = 10_000)]
        count: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Ginibre ranks to cycle through.
        #[arg(long, value_delimiter = ',', default_values_t = [1usize, 2, 3, 4])]
        rank: Vec<usize>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Fixed-purity ensemble and its per-concurrence-bin spread of G.
    PuritySlice {
        #[arg(long)]
        purity: f64,
        #[arg(long, default_value_t = 0.005)]
        window: f64,
        #[arg(long, default_value_t = 5000)]
        count: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Where to write the bin summary as CSV (stderr table if omitted).
        #[arg(long)]
        summary: Option<PathBuf>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Simulate the nine-setting protocol on a state and estimate G.
    Sample {
        input: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        shots: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_BOOTSTRAP)]
        bootstrap: usize,
        /// Also write the simulated measurement record here.
        #[arg(long)]
        record: Option<PathBuf>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Analyze every member of a seeded ensemble.
    Ensemble {
        /// EnsembleSpec JSON; overrides the individual flags.
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = KindArg::Ginibre)]
        kind: KindArg,
        #[arg(long, default_value_t = 1000)]
        count: u64,
        #[arg(long)]
        rank: Option<usize>,
        #[arg(long)]
        purity: Option<f64>,
        #[arg(long)]
        window: Option<f64>,
        #[arg(long)]
        terms: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Write a reference state as density-matrix JSON.
    State {
        /// singlet, phi_plus, phi_minus, psi_plus, product00,
        /// maximally_mixed, classically_correlated, or rho_u.
        name: String,
        #[arg(long, default_value_t = 0.0)]
        gamma: f64,
        #[arg(long, default_value_t = 0.0)]
        theta: f64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    HaarPure,
    Ginibre,
    FixedPurity,
    SeparableMixture,
    RhoUSweep,
}

impl From<KindArg> for EnsembleKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::HaarPure => Self::HaarPure,
            KindArg::Ginibre => Self::Ginibre,
            KindArg::FixedPurity => Self::FixedPurity,
            KindArg::SeparableMixture => Self::SeparableMixture,
            KindArg::RhoUSweep => Self::RhoUSweep,
        }
    }
}

/// A failure mapped to an exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn input(msg: impl Into<String>) -> Self {
        Self {
            code: EXIT_INPUT,
            message: msg.into(),
        }
    }

    fn runtime(msg: impl Into<String>) -> Self {
        Self {
            code: EXIT_RUNTIME,
            message: msg.into(),
        }
    }
}

fn input_err(path: &Path, e: Error) -> CliError {
    match e {
        Error::Parse(_) => CliError::input(format!("{}: {e}", path.display())),
        other => CliError::input(format!("{}: invalid input: {other}", path.display())),
    }
}

fn read_input(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn read_state(path: &Path) -> Result<DensityMatrix, CliError> {
    let text = read_input(path)?;
    StateFile::parse(&text)
        .map(|s| s.density())
        .map_err(|e| input_err(path, e))
}

struct Sink<'a> {
    stdout: &'a mut dyn Write,
    path: Option<PathBuf>,
    buf: Vec<u8>,
}

impl<'a> Sink<'a> {
    fn new(stdout: &'a mut dyn Write, path: Option<PathBuf>) -> Self {
        Self {
            stdout,
            path,
            buf: Vec::new(),
        }
    }

    fn finish(self) -> Result<(), CliError> {
        let res = match &self.path {
            Some(p) => fs::write(p, &self.buf).map_err(|e| format!("{}: {e}", p.display())),
            None => self.stdout.write_all(&self.buf).map_err(|e| e.to_string()),
        };
        res.map_err(CliError::runtime)
    }
}

fn write_json<T: Serialize + ?Sized>(sink: &mut Sink<'_>, value: &T) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut sink.buf, value).map_err(|e| CliError::runtime(e.to_string()))?;
    sink.buf.push(b'\n');
    Ok(())
}

fn write_csv<T: Serialize>(buf: &mut Vec<u8>, rows: &[T]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(buf);
    for r in rows {
        w.serialize(r).map_err(|e| CliError::runtime(e.to_string()))?;
    }
    w.flush().map_err(|e| CliError::runtime(e.to_string()))
}

/// `GReport` plus the exact concurrence and purity of the analyzed state.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct AnalyzeOutput {
    #[serde(flatten)]
    pub report: GReport,
    pub concurrence: f64,
    pub purity: f64,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SampleOutput {
    #[serde(flatten)]
    pub estimate: GEstimate,
    pub g_exact: f64,
}

#[derive(Debug, Clone, Copy, Serialize)]
struct EstimateCsvRow {
    g_hat: f64,
    stderr: f64,
    ci_low: f64,
    ci_high: f64,
    shots_per_setting: u64,
    g_exact: Option<f64>,
}

impl EstimateCsvRow {
    fn new(e: &GEstimate, g_exact: Option<f64>) -> Self {
        Self {
            g_hat: e.g_hat,
            stderr: e.stderr,
            ci_low: e.ci_low,
            ci_high: e.ci_high,
            shots_per_setting: e.shots_per_setting,
            g_exact,
        }
    }
}

fn cmd_analyze(
    input: &Path,
    out: OutputArgs,
    bootstrap: usize,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), CliError> {
    let text = read_input(input)?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| input_err(input, e.into()))?;
    let mut sink = Sink::new(stdout, out.output);
    let format = out.format.unwrap_or(Format::Json);

    if value.get("counts").is_some() {
        let rec: MeasurementRecord =
            serde_json::from_value(value).map_err(|e| input_err(input, e.into()))?;
        let est = estimate_g_with(&rec, bootstrap).map_err(|e| input_err(input, e))?;
        match format {
            Format::Json => write_json(&mut sink, &est)?,
            Format::Csv => write_csv(&mut sink.buf, &[EstimateCsvRow::new(&est, None)])?,
        }
        return sink.finish();
    }

    let rho = StateFile::parse(&text)
        .map(|s| s.density())
        .map_err(|e| input_err(input, e))?;
    let report = analyze(&rho);
    let output = AnalyzeOutput {
        report,
        concurrence: concurrence_mixed(&rho),
        purity: purity(&rho),
    };
    if report.verdict == crate::Verdict::EntangledCertified {
        let _ = writeln!(
            stderr,
            "G = {:.6} > 1: entangled, concurrence in [{:.4}, {:.4}]",
            report.g, report.c_min, report.c_max
        );
    }
    match format {
        Format::Json => write_json(&mut sink, &output)?,
        Format::Csv => {
            #[derive(Serialize)]
            struct Row {
                g: f64,
                g_hs: f64,
                l3: f64,
                verdict: &'static str,
                c_min: f64,
                c_max: f64,
                concurrence: f64,
                purity: f64,
            }
            let r = Row {
                g: report.g,
                g_hs: report.g_hs,
                l3: report.l3,
                verdict: report.verdict.as_str(),
                c_min: report.c_min,
                c_max: report.c_max,
                concurrence: output.concurrence,
                purity: output.purity,
            };
            write_csv(&mut sink.buf, &[r])?;
        }
    }
    sink.finish()
}

fn runtime_or_input(e: Error) -> CliError {
    match e {
        Error::InvalidArgument(_) => CliError::input(e.to_string()),
        other => CliError::runtime(other.to_string()),
    }
}

fn run_command(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Analyze {
            input,
            out,
            bootstrap,
        } => cmd_analyze(&input, out, bootstrap, stdout, stderr),

        Command::ScanBounds {
            count,
            seed,
            rank,
            out,
        } => {
            let rows = scan_bounds(count, seed, &rank).map_err(runtime_or_input)?;
            let violations = rows.iter().filter(|r| r.violates == 1).count();
            let _ = writeln!(stderr, "{count} samples, {violations} outside the bounds");
            let mut sink = Sink::new(stdout, out.output);
            match out.format.unwrap_or(Format::Csv) {
                Format::Csv => write_csv(&mut sink.buf, &rows)?,
                Format::Json => write_json(&mut sink, &rows)?,
            }
            sink.finish()
        }

        Command::PuritySlice {
            purity,
            window,
            count,
            seed,
            summary,
            out,
        } => {
            let slice = purity_slice(purity, window, count, seed).map_err(runtime_or_input)?;
            let mut sink = Sink::new(stdout, out.output);
            match out.format.unwrap_or(Format::Csv) {
                Format::Csv => write_csv(&mut sink.buf, &slice.rows)?,
                Format::Json => write_json(&mut sink, &slice)?,
            }
            sink.finish()?;
            match summary {
                Some(path) => {
                    let mut buf = Vec::new();
                    write_csv(&mut buf, &slice.bins)?;
                    fs::write(&path, buf)
                        .map_err(|e| CliError::runtime(format!("{}: {e}", path.display())))?;
                }
                None => {
                    let _ = writeln!(stderr, "c_lo  c_hi     n  g_spread  residual_spread");
                    for b in &slice.bins {
                        let _ = writeln!(
                            stderr,
                            "{:.2}  {:.2}  {:4}  {:.6}  {:.6}",
                            b.c_lo, b.c_hi, b.n, b.g_spread, b.residual_spread
                        );
                    }
                }
            }
            Ok(())
        }

        Command::Sample {
            input,
            shots,
            seed,
            bootstrap,
            record,
            out,
        } => {
            let rho = read_state(&input)?;
            let rec = simulate_record(&rho, shots, seed).map_err(runtime_or_input)?;
            let est = estimate_g_with(&rec, bootstrap).map_err(runtime_or_input)?;
            let g_exact = g_from_covariances(&correlation_data(&rho));
            if let Some(path) = record {
                let text = serde_json::to_string_pretty(&rec).map_err(|e| CliError::runtime(e.to_string()))?;
                fs::write(&path, text + "\n")
                    .map_err(|e| CliError::runtime(format!("{}: {e}", path.display())))?;
            }
            let mut sink = Sink::new(stdout, out.output);
            match out.format.unwrap_or(Format::Json) {
                Format::Json => write_json(&mut sink, &SampleOutput { estimate: est, g_exact })?,
                Format::Csv => write_csv(&mut sink.buf, &[EstimateCsvRow::new(&est, Some(g_exact))])?,
            }
            sink.finish()
        }

        Command::Ensemble {
            spec,
            kind,
            count,
            rank,
            purity,
            window,
            terms,
            seed,
            out,
        } => {
            let spec = match spec {
                Some(path) => {
                    let text = read_input(&path)?;
                    serde_json::from_str::<EnsembleSpec>(&text)
                        .map_err(|e| input_err(&path, e.into()))?
                }
                None => EnsembleSpec {
                    kind: kind.into(),
                    count,
                    rank,
                    purity_target: purity,
                    purity_window: window,
                    mixture_terms: terms,
                    seed,
                },
            };
            let rows = ensemble_rows(&spec).map_err(runtime_or_input)?;
            let mut sink = Sink::new(stdout, out.output);
            match out.format.unwrap_or(Format::Csv) {
                Format::Csv => write_csv(&mut sink.buf, &rows)?,
                Format::Json => write_json(&mut sink, &rows)?,
            }
            sink.finish()
        }

        Command::State {
            name,
            gamma,
            theta,
            output,
        } => {
            let rho = if name == "rho_u" {
                rho_u(gamma, theta)
            } else {
                canonical(&name)
            }
            .map_err(|e| CliError::input(e.to_string()))?;
            let mut sink = Sink::new(stdout, output);
            write_json(&mut sink, &rho)?;
            sink.finish()
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    match run_command(cli, stdout, stderr) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message);
            e.code
        }
    }
}

/// Entry point used by the binary.
pub fn main() -> i32 {
    let stdout = io::stdout();
    let stderr = io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
