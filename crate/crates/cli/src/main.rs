//! `entwine`: verification suites, lattice evolution and monodromy invariants.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use entwine_core::lattice::{self, EvolveOptions, LatticeConfig, LatticeState, Trajectory};
use entwine_core::suites::{run_suites, Suite, SuiteOptions, SuiteReport};
use entwine_core::{Error, Rational};

const EXIT_FAILED: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_BITS: u8 = 3;

#[derive(Parser)]
#[command(name = "entwine", version, about = "Exact checks for entwining Yang-Baxter maps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Run randomized exact verification suites.
    Verify {
        /// refactor, maps, entwine, yb, poisson, lattice or all
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Report path; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Harness self-test with a deliberately corrupted closed form.
        #[arg(long, hide = true)]
        corrupt_fixture: bool,
    },
    /// Evolve a periodic lattice and log its spectral invariants.
    Evolve {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 1)]
        steps: usize,
        /// Output directory for the trajectory and `invariants.json`; the
        /// trajectory goes to stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Print trace and det coefficients of the monodromy.
    Monodromy {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

/// Failure carrying its exit status.
struct Exit {
    code: u8,
    message: String,
}

impl Exit {
    fn config(message: impl Into<String>) -> Self {
        Exit { code: EXIT_CONFIG, message: message.into() }
    }
}

impl From<Error> for Exit {
    fn from(e: Error) -> Self {
        let code = match e.root() {
            Error::Config(_) | Error::Parse(_) => EXIT_CONFIG,
            Error::BitLimit { .. } => EXIT_BITS,
            _ => EXIT_FAILED,
        };
        Exit { code, message: e.to_string() }
    }
}

impl From<io::Error> for Exit {
    fn from(e: io::Error) -> Self {
        Exit::config(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify { suite, samples, seed, out, corrupt_fixture } => {
            cmd_verify(&suite, SuiteOptions { samples, seed, corrupt: corrupt_fixture }, out.as_deref())
        }
        Command::Evolve { config, steps, out, format } => cmd_evolve(&config, steps, out.as_deref(), format),
        Command::Monodromy { config, out, format } => cmd_monodromy(&config, out.as_deref(), format),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("entwine: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Exit> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    text
}

#[derive(Serialize)]
struct VerifyReport {
    ok: bool,
    seed: u64,
    samples: usize,
    suites: Vec<SuiteReport>,
}

fn cmd_verify(selector: &str, opts: SuiteOptions, out: Option<&Path>) -> Result<u8, Exit> {
    let suites = Suite::parse_selector(selector)?;
    if opts.samples == 0 {
        return Err(Exit::config("--samples must be positive"));
    }
    let reports = run_suites(&suites, &opts)?;
    let ok = reports.iter().all(SuiteReport::ok);
    for r in reports.iter().filter(|r| !r.ok()) {
        eprintln!("{}: {} of {} failed; first counterexample: {}", r.suite, r.failed, r.samples, r.counterexample.as_deref().unwrap_or("-"));
    }
    let report = VerifyReport { ok, seed: opts.seed, samples: opts.samples, suites: reports };
    emit(out, &to_json(&report))?;
    Ok(if ok { 0 } else { EXIT_FAILED })
}

fn load_state(path: &Path) -> Result<LatticeState, Exit> {
    let text = fs::read_to_string(path).map_err(|e| Exit::config(format!("{}: {e}", path.display())))?;
    Ok(LatticeState::try_from(LatticeConfig::from_json(&text)?)?)
}

fn bit_limit() -> Result<Option<u64>, Exit> {
    match std::env::var("YB_MAX_BITS") {
        Ok(v) => v.parse().map(Some).map_err(|_| Exit::config(format!("YB_MAX_BITS={v:?} is not a bit count"))),
        Err(_) => Ok(None),
    }
}

/// Coefficients (ascending in `ζ`) of `tr Mₙ` and `det Mₙ`.
#[derive(Serialize)]
struct Invariants {
    trace: Vec<String>,
    det: Vec<String>,
}

impl Invariants {
    /// Splits a logged vector; `det Mₙ` has `4n + 1` coefficients.
    fn split(n: usize, v: &[Rational]) -> Self {
        let cut = v.len() - (4 * n + 1);
        let show = |s: &[Rational]| s.iter().map(ToString::to_string).collect();
        Invariants { trace: show(&v[..cut]), det: show(&v[cut..]) }
    }
}

#[derive(Serialize)]
struct LogRow {
    step: usize,
    #[serde(flatten)]
    invariants: Invariants,
}

#[derive(Serialize)]
struct TrajectoryRow {
    step: usize,
    i: usize,
    x1: String,
    x2: String,
    y1: String,
    y2: String,
}

#[derive(Serialize)]
struct StateRow {
    step: usize,
    state: LatticeConfig,
}

fn trajectory_text(traj: &Trajectory, format: Format) -> Result<String, Exit> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for (step, s) in traj.states.iter().enumerate() {
                for i in 0..s.n() {
                    w.serialize(TrajectoryRow {
                        step,
                        i: i + 1,
                        x1: s.x[i].x1.to_string(),
                        x2: s.x[i].x2.to_string(),
                        y1: s.y[i].x1.to_string(),
                        y2: s.y[i].x2.to_string(),
                    })
                    .map_err(|e| Exit::config(e.to_string()))?;
                }
            }
            let bytes = w.into_inner().map_err(|e| Exit::config(e.to_string()))?;
            Ok(String::from_utf8(bytes).expect("csv of utf-8 strings"))
        }
        Format::Json => {
            let rows: Vec<_> = traj
                .states
                .iter()
                .enumerate()
                .map(|(step, s)| StateRow { step, state: LatticeConfig::from(s) })
                .collect();
            Ok(to_json(&rows))
        }
    }
}

fn cmd_evolve(config: &Path, steps: usize, out: Option<&Path>, format: Format) -> Result<u8, Exit> {
    let state = load_state(config)?;
    let opts = EvolveOptions { bit_limit: bit_limit()?, check_conjugation: true };
    let traj = lattice::evolve(&state, steps, opts)?;
    let n = state.n();
    let log: Vec<_> = traj
        .invariant_log
        .iter()
        .enumerate()
        .map(|(step, v)| LogRow { step, invariants: Invariants::split(n, v) })
        .collect();
    let trajectory = trajectory_text(&traj, format)?;
    match out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            let name = match format {
                Format::Csv => "trajectory.csv",
                Format::Json => "trajectory.json",
            };
            fs::write(dir.join(name), trajectory)?;
            fs::write(dir.join("invariants.json"), to_json(&log))?;
        }
        None => emit(None, &trajectory)?,
    }
    let conserved = traj.invariants_constant();
    if !conserved {
        let step = traj.invariant_log.windows(2).position(|w| w[0] != w[1]).map_or(0, |k| k + 1);
        eprintln!("invariants changed at step {step}");
    }
    if let Some(step) = traj.conjugation_failures.first() {
        eprintln!("conjugation identity failed at step {step}");
    }
    eprintln!("steps: {steps}, peak coordinate size: {} bits", traj.peak_bits());
    Ok(if conserved && traj.conjugation_failures.is_empty() { 0 } else { EXIT_FAILED })
}

fn cmd_monodromy(config: &Path, out: Option<&Path>, format: Format) -> Result<u8, Exit> {
    let state = load_state(config)?;
    if let Some(limit) = bit_limit()? {
        let bits = state.max_bits();
        if bits > limit {
            return Err(Error::BitLimit { step: 0, bits, limit }.into());
        }
    }
    let inv = Invariants::split(state.n(), &lattice::spectral_invariants(&state)?);
    let text = match format {
        Format::Json => to_json(&inv),
        Format::Csv => {
            let mut text = String::from("kind,power,coefficient\n");
            for (kind, coeffs) in [("trace", &inv.trace), ("det", &inv.det)] {
                for (k, c) in coeffs.iter().enumerate() {
                    text.push_str(&format!("{kind},{k},{c}\n"));
                }
            }
            text
        }
    };
    emit(out, &text)?;
    Ok(0)
}
