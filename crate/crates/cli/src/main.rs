use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use opdyn::config::{self, Mode};
use opdyn::scalar::parse_rational;
use opdyn::{Error, Rational, Scalar};

mod commands;
mod csv_out;

#[derive(Parser, Debug)]
#[command(
    name = "opdyn",
    version,
    about = "Composition operators on weighted spaces over discrete metric spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Norm profile r_R of C_phi on the big space.
    Norm(Common),
    /// Admissibility (boundedness on the big space) with test-function lower bounds.
    BoundedBig(Common),
    /// Boundedness on the little space via the rule ladder.
    BoundedLittle(Common),
    /// Hypercyclicity verdict: obstructions plus the sequence search.
    HcCheck(Common),
    /// The exponent sequence n_k for injective symbols.
    HcSequence(Common),
    /// Approximant of a hypercyclic vector visiting the configured targets.
    HcVector(Common),
    /// Distances from the orbit of a function to the configured targets.
    Orbit(Common),
    /// Runs the seeded invariant suites.
    Selftest(SelftestArgs),
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Instance configuration (JSON).
    pub config: PathBuf,
    #[arg(long)]
    pub rmax: Option<u64>,
    #[arg(long)]
    pub nmax: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    /// Tolerance for limit checks, as p/q.
    #[arg(long, value_parser = parse_tol)]
    pub tol: Option<Rational>,
    /// Write the main table of the report here.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Print only the verdict line.
    #[arg(long)]
    pub quiet: bool,
}

#[derive(Args, Debug, Clone)]
struct SelftestArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    quiet: bool,
}

fn parse_tol(text: &str) -> Result<Rational, String> {
    match parse_rational(text) {
        Some(r) if r > Rational::from_integer(0.into()) => Ok(r),
        _ => Err(format!("expected a positive rational p/q, got {text:?}")),
    }
}

pub const EXIT_HOLDS: u8 = 0;
pub const EXIT_REFUTED: u8 = 1;
pub const EXIT_INCONCLUSIVE: u8 = 2;
pub const EXIT_USAGE: u8 = 3;

fn exit_for_error(e: &Error) -> u8 {
    match e {
        Error::HorizonExceeded { .. } | Error::UnresolvablePreimage { .. } => EXIT_INCONCLUSIVE,
        Error::TheoremInapplicable(_) => EXIT_REFUTED,
        _ => EXIT_USAGE,
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var("OPDYN_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
    {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global();
        }
    }
}

fn run_command(command: &Command) -> Result<u8, Error> {
    if let Command::Selftest(args) = command {
        return commands::selftest(args.seed, args.csv.as_deref(), args.quiet);
    }
    let common = match command {
        Command::Norm(c)
        | Command::BoundedBig(c)
        | Command::BoundedLittle(c)
        | Command::HcCheck(c)
        | Command::HcSequence(c)
        | Command::HcVector(c)
        | Command::Orbit(c) => c,
        Command::Selftest(_) => unreachable!(),
    };
    let text = std::fs::read_to_string(&common.config)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", common.config.display())))?;
    let doc = config::parse_json(&text)?;
    match config::mode_of(&doc)? {
        Mode::Exact => dispatch::<Rational>(command, common, &doc),
        Mode::Float => dispatch::<f64>(command, common, &doc),
    }
}

fn dispatch<S: Scalar>(
    command: &Command,
    common: &Common,
    doc: &serde_json::Value,
) -> Result<u8, Error> {
    let mut inst = config::parse_instance::<S>(doc)?;
    if let Some(r) = common.rmax {
        inst.horizons.r_max = r;
    }
    if let Some(n) = common.nmax {
        inst.horizons.n_max = n;
    }
    if let Some(k) = common.k {
        inst.horizons.k = k;
    }
    if let Some(t) = &common.tol {
        inst.tol = S::from_rational(t);
    }
    if inst.horizons.r_max == 0 || inst.horizons.n_max == 0 || inst.horizons.k == 0 {
        return Err(Error::Config("horizons must be positive".into()));
    }
    match command {
        Command::Norm(_) => commands::norm(&inst, common, false),
        Command::BoundedBig(_) => commands::norm(&inst, common, true),
        Command::BoundedLittle(_) => commands::bounded_little(&inst, common),
        Command::HcCheck(_) => commands::hc_check(&inst, common),
        Command::HcSequence(_) => commands::hc_sequence(&inst, common),
        Command::HcVector(_) => commands::hc_vector(&inst, common),
        Command::Orbit(_) => commands::orbit(&inst, common),
        Command::Selftest(_) => unreachable!(),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    configure_threads();
    match run_command(&cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            let code = exit_for_error(&e);
            match code {
                EXIT_INCONCLUSIVE => eprintln!("Inconclusive: {e}"),
                EXIT_REFUTED => println!("Refuted: {e}"),
                _ => eprintln!("error: {e}"),
            }
            ExitCode::from(code)
        }
    }
}
