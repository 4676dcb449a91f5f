//! Command-line front end: LCM checks, tau analyses, tables of constants,
//! asymptotic comparisons and factorial-root sequence scans.
//!
//! Exit codes: 0 success or PASS, 2 FAIL (a violation was found), 1 usage or
//! domain error.

mod commands;
mod presets;
mod render;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use presets::Preset;
pub use render::Format;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_FAIL: i32 = 2;

/// Caps the rayon worker count when set to a positive integer.
pub const THREADS_ENV: &str = "LCM_THREADS";

#[derive(Debug, Parser)]
#[command(name = "lcm", version, about = "Check logarithmic complete monotonicity of gamma-function families")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    pub format: Format,

    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Scan signed log-derivatives of a family on an interval.
    Check(CheckArgs),
    /// Maximize tau(s, .) for one s or a range of integer s.
    Tau(TauArgs),
    /// Reproduce a named table of constants.
    Table(TableArgs),
    /// Compare ln Gamma or digamma with a truncated asymptotic expansion.
    Asym(AsymArgs),
    /// Scan a factorial-root ratio sequence.
    Seq(SeqArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    RecipGammaRoot,
    Nu,
    XAlpha,
    Q,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BranchArg {
    Positive,
    Negative,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// Named configuration; explicit flags override its interval, orders and grid.
    #[arg(long, value_enum, conflicts_with = "family")]
    pub preset: Option<Preset>,

    #[arg(long, value_enum, required_unless_present = "preset")]
    pub family: Option<FamilyArg>,

    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub a: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub b: f64,
    /// Exponent applied to the q family.
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub c: f64,
    /// Check the reciprocal of the family.
    #[arg(long)]
    pub invert: bool,
    #[arg(long, value_enum, default_value_t = BranchArg::Positive)]
    pub branch: BranchArg,

    /// Replace f(x) by f(x) / f(x + SHIFT).
    #[arg(long, allow_hyphen_values = true, conflicts_with = "preset")]
    pub shift: Option<f64>,
    /// Replace f by f(h(x)): one-minus-exp, atan-sqrt, log-shift:A:B or power:A:ALPHA:B.
    #[arg(long, conflicts_with = "preset")]
    pub compose: Option<String>,

    /// Interval LO:HI.
    #[arg(long, allow_hyphen_values = true)]
    pub interval: Option<String>,
    /// Highest derivative order checked.
    #[arg(long)]
    pub orders: Option<usize>,
    /// Number of grid intervals (grid + 1 points).
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long, default_value_t = lcm_core::lcm_check::DEFAULT_TOLERANCE)]
    pub tolerance: f64,
    /// Distance kept from interval ends that coincide with the domain ends.
    #[arg(long, default_value_t = lcm_core::lcm_check::DEFAULT_MARGIN)]
    pub margin: f64,
}

#[derive(Debug, Args)]
pub struct TauArgs {
    #[arg(long, conflicts_with = "scan", required_unless_present = "scan")]
    pub s: Option<f64>,
    /// Integer range FROM:TO.
    #[arg(long)]
    pub scan: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableName {
    /// tau maxima at s = 2 and 3 against their published values.
    RemarkTau,
    /// 1/(1 + tau_max(s)) for s = 2, 3.
    Thresholds,
    /// [ln Gamma(1+x) - x psi(1+x)] / x^2 at x = 10^-k against -pi^2/12.
    NbxLimit,
    /// -gamma + sum (1/k - arctan(1/k)).
    Hirsch,
    /// Maximum of tau over integer s up to --s-max.
    Tau0,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(long, value_enum)]
    pub name: TableName,
    #[arg(long, default_value_t = 100)]
    pub s_max: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Lngamma,
    Digamma,
}

#[derive(Debug, Args)]
pub struct AsymArgs {
    #[arg(long, value_enum, default_value_t = KindArg::Lngamma)]
    pub kind: KindArg,
    #[arg(long, default_value_t = 1)]
    pub terms: usize,
    #[arg(long, default_value_t = 1.0)]
    pub from: f64,
    #[arg(long, default_value_t = 1000.0)]
    pub to: f64,
    /// Log-spaced sample count.
    #[arg(long, default_value_t = 10)]
    pub points: usize,
}

#[derive(Debug, Args)]
pub struct SeqArgs {
    #[arg(long, default_value_t = 1)]
    pub m: u64,
    /// 0 selects the two-factor ratio.
    #[arg(long, default_value_t = 0)]
    pub n: u64,
    #[arg(long, default_value_t = 300)]
    pub kmax: u64,
}

fn configure_threads() {
    if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        if n > 0 {
            // a second configuration in the same process keeps the first pool
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn open_output(path: Option<&PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Parses `args` (including the program name) and runs the command, returning the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
        }
    };
    configure_threads();
    let mut out = match open_output(cli.out.as_ref()) {
        Ok(w) => w,
        Err(e) => {
            eprintln!("error: cannot open output: {e}");
            return EXIT_ERROR;
        }
    };
    let result = commands::dispatch(&cli, &mut out).and_then(|code| {
        out.flush()?;
        Ok(code)
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_ERROR
        }
    }
}
