//! Command-line front end.
//!
//! Every subcommand prints a `key = value` summary on stdout. Runs that write
//! a CSV (`--out`) also write a [`RunManifest`] sidecar; `replay` re-runs one.

use std::f64::consts::PI;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use cohpbw_core::analysis::{self, AnalysisResult};
use cohpbw_core::elements::{bs_anticorrelation, d_block, mzi_phase_for};
use cohpbw_core::linalg::apply;
use cohpbw_core::noise::{rate_ci95, AnticorrelationProbe, DarkPort};
use cohpbw_core::{circuit, ChainConfig, FieldPair, JitterMode, NoiseConfig};

use crate::error::CliError;
use crate::manifest::RunManifest;
use crate::{parallel, trace_csv};

/// Coherence photonic de Broglie wave simulator.
#[derive(Debug, Parser)]
#[command(name = "cohpbw", version, about)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sweep an n-block chain and analyze its correlation fringe.
    Sweep(SweepArgs),
    /// Compile a circuit file, sweep it and analyze the fringe.
    Circuit(CircuitArgs),
    /// Analyze a trace CSV.
    Analyze(AnalyzeArgs),
    /// Monte Carlo phase-jitter study of an n-block chain.
    Noise(NoiseArgs),
    /// Compare the beam-splitter and MZI pictures of anticorrelation at one phase.
    Equiv(EquivArgs),
    /// Re-run the command recorded in a manifest.
    Replay(ReplayArgs),
}

#[derive(Debug, Args)]
struct Sampling {
    /// Samples across the window.
    #[arg(long, default_value_t = 4096, value_parser = clap::value_parser!(u64).range(2..))]
    samples: u64,
    /// Phase window, radians (`2pi`, `0.5pi` and plain numbers are accepted).
    #[arg(long, default_value = "2pi", value_parser = parse_phase, allow_hyphen_values = true)]
    window: f64,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// Number of cross-coupled double blocks.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    n: u32,
    /// Amplitude transmission of each block-to-block connection.
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    eta: f64,
    #[command(flatten)]
    sampling: Sampling,
    /// Carrier wavelength.
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    lambda0: f64,
    /// Input intensity.
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    i0: f64,
    /// Trace CSV to write.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CircuitArgs {
    /// Circuit description.
    #[arg(long)]
    file: PathBuf,
    #[command(flatten)]
    sampling: Sampling,
    /// Carrier wavelength.
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    lambda0: f64,
    /// Input intensity.
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    i0: f64,
    /// Trace CSV to write.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    /// Trace CSV to read.
    #[arg(long = "in")]
    input: PathBuf,
    /// Carrier wavelength.
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    lambda0: f64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Mode {
    /// One offset per block, shared by its two shifters.
    Correlated,
    /// An independent offset for every shifter.
    Independent,
}

impl Mode {
    fn name(self) -> &'static str {
        match self {
            Mode::Correlated => "correlated",
            Mode::Independent => "independent",
        }
    }
}

impl From<Mode> for JitterMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Correlated => JitterMode::CorrelatedPerBlock,
            Mode::Independent => JitterMode::IndependentPerShifter,
        }
    }
}

#[derive(Debug, Args)]
struct NoiseArgs {
    /// Number of cross-coupled double blocks.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    n: u32,
    /// Amplitude transmission of each block-to-block connection.
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    eta: f64,
    /// Standard deviation of the phase offsets, radians.
    #[arg(long, value_parser = parse_phase, allow_hyphen_values = true)]
    sigma: f64,
    /// Number of trials.
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
    /// Base seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Jitter correlation.
    #[arg(long, value_enum, default_value_t = Mode::Correlated)]
    mode: Mode,
    #[command(flatten)]
    sampling: Sampling,
    /// Phase of the anticorrelation basis, radians.
    #[arg(long, default_value = "0", value_parser = parse_phase, allow_hyphen_values = true)]
    basis_phi: f64,
    /// Dark-port fraction above which a trial counts as an anticorrelation error.
    #[arg(long, default_value_t = cohpbw_core::noise::DEFAULT_DARK_THRESHOLD, allow_hyphen_values = true)]
    threshold: f64,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    threads: Option<u64>,
    /// Trace CSV to write.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EquivArgs {
    /// Beam-splitter-picture phase, radians.
    #[arg(long, value_parser = parse_phase, allow_hyphen_values = true)]
    psi: f64,
    /// Input intensity.
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    i0: f64,
}

#[derive(Debug, Args)]
struct ReplayArgs {
    /// Manifest written by an earlier run.
    #[arg(long)]
    manifest: PathBuf,
    /// Write the CSV here instead of the recorded output path.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Parses a phase: a float, optionally followed by `pi` (`pi` alone is pi).
pub fn parse_phase(s: &str) -> Result<f64, String> {
    let t = s.trim();
    let value = match t.strip_suffix("pi") {
        Some(m) => {
            let m = m.trim_end_matches('*').trim();
            let scale = match m {
                "" | "+" => 1.0,
                "-" => -1.0,
                _ => m.parse::<f64>().map_err(|_| format!("bad phase '{s}'"))?,
            };
            scale * PI
        }
        None => t.parse::<f64>().map_err(|_| format!("bad phase '{s}'"))?,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(format!("phase '{s}' is not finite"))
    }
}

fn amplitude(i0: f64) -> Result<Complex64, CliError> {
    if !(i0 > 0.0 && i0.is_finite()) {
        return Err(CliError::Validation("i0 must be positive".into()));
    }
    Ok(Complex64::new(i0.sqrt(), 0.0))
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    Ok(BufWriter::new(File::create(path).map_err(|e| CliError::io(path, e))?))
}

/// Shortest round-trip form, switching to exponent notation for very small or large magnitudes.
struct Num(f64);

impl std::fmt::Display for Num {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let a = self.0.abs();
        if a == 0.0 || (1e-4..1e15).contains(&a) || !a.is_finite() {
            write!(f, "{}", self.0)
        } else {
            write!(f, "{:e}", self.0)
        }
    }
}

fn print_analysis(out: &mut impl Write, r: &AnalysisResult) -> std::io::Result<()> {
    writeln!(out, "period_phase = {}", Num(r.period_phase))?;
    writeln!(out, "visibility = {}", Num(r.visibility))?;
    writeln!(out, "lambda_ratio = {}", Num(r.lambda_ratio))?;
    writeln!(out, "lambda_cb = {}", Num(r.lambda_cb))?;
    writeln!(out, "inferred_n = {}", r.inferred_n)?;
    writeln!(out, "equivalent_photon_number = {}", r.equivalent_photon_number)
}

fn write_csv_and_manifest(
    out: Option<&Path>,
    manifest: RunManifest,
    write: impl FnOnce(&mut BufWriter<File>) -> Result<(), CliError>,
) -> Result<(), CliError> {
    let Some(path) = out else { return Ok(()) };
    let mut w = create(path)?;
    write(&mut w)?;
    w.flush().map_err(|e| CliError::io(path, e))?;
    let mut manifest = manifest;
    manifest.output = Some(path.to_owned());
    manifest.write_sidecar(path)
}

impl Sampling {
    fn record(&self, m: &mut RunManifest) {
        m.param("samples", self.samples).param("window", self.window);
    }

    fn samples(&self) -> usize {
        self.samples as usize
    }
}

fn sweep(a: &SweepArgs, stdout: &mut impl Write) -> Result<(), CliError> {
    let cfg = ChainConfig::new(a.n, a.eta, amplitude(a.i0)?, a.lambda0)?;
    let trace = analysis::g2_trace(&cfg, a.sampling.samples(), a.sampling.window)?;
    let result = analysis::analyze(&trace, a.lambda0)?;
    let mut m = RunManifest::new("sweep");
    m.param("n", a.n).param("eta", a.eta).param("lambda0", a.lambda0).param("i0", a.i0);
    a.sampling.record(&mut m);
    write_csv_and_manifest(a.out.as_deref(), m, |w| trace_csv::write_trace(w, &trace))?;
    print_analysis(stdout, &result)?;
    Ok(())
}

fn circuit_cmd(a: &CircuitArgs, stdout: &mut impl Write) -> Result<(), CliError> {
    let text = std::fs::read_to_string(&a.file).map_err(|e| CliError::io(&a.file, e))?;
    let parsed = circuit::parse(&text)?;
    let trace = analysis::circuit_trace(&parsed, amplitude(a.i0)?, a.sampling.samples(), a.sampling.window)?;
    let result = analysis::analyze(&trace, a.lambda0)?;
    let mut m = RunManifest::new("circuit");
    m.param("file", a.file.display()).param("lambda0", a.lambda0).param("i0", a.i0);
    a.sampling.record(&mut m);
    write_csv_and_manifest(a.out.as_deref(), m, |w| trace_csv::write_trace(w, &trace))?;
    print_analysis(stdout, &result)?;
    Ok(())
}

fn analyze_cmd(a: &AnalyzeArgs, stdout: &mut impl Write) -> Result<(), CliError> {
    let file = File::open(&a.input).map_err(|e| CliError::io(&a.input, e))?;
    let trace = trace_csv::read_trace(std::io::BufReader::new(file))?;
    let result = analysis::analyze(&trace, a.lambda0)?;
    print_analysis(stdout, &result)?;
    Ok(())
}

fn noise_cmd(a: &NoiseArgs, stdout: &mut impl Write) -> Result<(), CliError> {
    let chain = ChainConfig::new(a.n, a.eta, Complex64::new(1.0, 0.0), 1.0)?;
    let cfg = NoiseConfig::new(a.sigma, a.trials, a.seed, a.mode.into())?;
    let probe = AnticorrelationProbe::new(chain, cfg, a.basis_phi, a.threshold)?;
    let threads = a.threads.map(|t| t as usize);
    let samples = a.sampling.samples();
    let window = a.sampling.window;
    let (trace, rate) = parallel::with_threads(threads, || {
        let trace = parallel::run_noise_ensemble(&chain, &cfg, samples, window);
        (trace, parallel::error_rate(&probe, cfg.trials))
    });
    let trace = trace?;
    let mut m = RunManifest::new("noise");
    m.param("n", a.n)
        .param("eta", a.eta)
        .param("sigma", a.sigma)
        .param("trials", a.trials)
        .param("mode", a.mode.name())
        .param("basis-phi", a.basis_phi)
        .param("threshold", a.threshold);
    m.seed = Some(a.seed);
    a.sampling.record(&mut m);
    write_csv_and_manifest(a.out.as_deref(), m, |w| trace_csv::write_noisy_trace(w, &trace))?;
    writeln!(stdout, "visibility = {}", Num(trace.visibility))?;
    writeln!(stdout, "visibility_ci95 = {}", Num(trace.visibility_ci95()))?;
    let port = match probe.dark_port() {
        DarkPort::Upper => "a",
        DarkPort::Lower => "b",
    };
    writeln!(stdout, "dark_port = {port}")?;
    writeln!(stdout, "error_rate = {}", Num(rate))?;
    writeln!(stdout, "error_rate_ci95 = {}", Num(rate_ci95(rate, a.trials)))?;
    Ok(())
}

fn equiv(a: &EquivArgs, stdout: &mut impl Write) -> Result<(), CliError> {
    let e0 = amplitude(a.i0)?;
    let phi = mzi_phase_for(a.psi);
    let bs = bs_anticorrelation(a.psi, e0);
    let mzi = apply(&d_block(phi), &FieldPair::upper_only(e0));
    let ((bu, bl), (mu, ml)) = (bs.intensities(), mzi.intensities());
    writeln!(stdout, "psi = {}", Num(a.psi))?;
    writeln!(stdout, "bs_i_a = {}", Num(bu))?;
    writeln!(stdout, "bs_i_b = {}", Num(bl))?;
    writeln!(stdout, "phi = {}", Num(phi))?;
    writeln!(stdout, "mzi_i_a = {}", Num(mu))?;
    writeln!(stdout, "mzi_i_b = {}", Num(ml))?;
    writeln!(stdout, "max_abs_diff = {}", Num((bu - mu).abs().max((bl - ml).abs())))?;
    Ok(())
}

fn replay(a: &ReplayArgs, stdout: &mut impl Write) -> Result<(), CliError> {
    let text = std::fs::read_to_string(&a.manifest).map_err(|e| CliError::io(&a.manifest, e))?;
    let manifest = RunManifest::parse(&text)?;
    if manifest.subcommand == "replay" {
        return Err(CliError::Validation("a manifest cannot replay a replay".into()));
    }
    let mut args = vec!["cohpbw".to_owned()];
    args.extend(manifest.to_args(a.out.as_deref()));
    let cli = Cli::try_parse_from(&args)
        .map_err(|e| CliError::Validation(format!("manifest does not describe a valid run: {e}")))?;
    run(cli, stdout)
}

/// Runs a parsed command, writing the summary to `stdout`.
pub fn run(cli: Cli, stdout: &mut impl Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Sweep(a) => sweep(a, stdout),
        Command::Circuit(a) => circuit_cmd(a, stdout),
        Command::Analyze(a) => analyze_cmd(a, stdout),
        Command::Noise(a) => noise_cmd(a, stdout),
        Command::Equiv(a) => equiv(a, stdout),
        Command::Replay(a) => replay(a, stdout),
    }
}
