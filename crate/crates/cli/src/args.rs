use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Heat-exchange statistics of a thermal harmonic oscillator in contact
/// with a bath. Heat is final minus initial oscillator energy.
#[derive(Debug, Parser)]
#[command(name = "qheat", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Heat distribution on the lattice Q = k·ħω.
    Dist(DistArgs),
    /// Mean and variance of the heat over a grid of contact times.
    Cumulants(CumulantArgs),
    /// Characteristic function samples on a real μ grid.
    Charfn(CharfnArgs),
    /// Run the verification suite and emit a JSON report.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Oscillator inverse temperature times ħω.
    #[arg(long, allow_negative_numbers = true)]
    pub beta1: f64,
    /// Bath inverse temperature times ħω.
    #[arg(long, allow_negative_numbers = true)]
    pub beta2: f64,
    /// Energy quantum used to report Q.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub hbar_omega: f64,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DistArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Contact time γt, or "inf" for the stationary law.
    #[arg(long, allow_negative_numbers = true)]
    pub tau: Tau,
    /// Half-width K of the lattice window, or "auto".
    #[arg(long, default_value = "auto")]
    pub kmax: KMax,
    #[arg(long, value_enum, default_value_t = Mode::Exact)]
    pub mode: Mode,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CumulantArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// start:stop:step, ascending.
    #[arg(long, allow_hyphen_values = true)]
    pub tau_grid: GridSpec,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CharfnArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, allow_negative_numbers = true)]
    pub tau: Tau,
    /// start:stop:step in units of 1/ħω.
    #[arg(long, allow_hyphen_values = true)]
    pub mu_grid: GridSpec,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// "all" or a single check name.
    #[arg(long, default_value = "all")]
    pub suite: String,
    #[arg(long, value_enum, default_value_t = TolProfile::Default)]
    pub tol_profile: TolProfile,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exact,
    Asymptotic,
    Isothermal,
    Classical,
    Lowtemp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TolProfile {
    Default,
    Strict,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tau(pub f64);

impl FromStr for Tau {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s.eq_ignore_ascii_case("inf") {
            return Ok(Tau(f64::INFINITY));
        }
        match s.parse::<f64>() {
            Ok(t) if t.is_finite() && t >= 0.0 => Ok(Tau(t)),
            _ => Err(format!("expected a non-negative number or \"inf\", got {s:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KMax {
    Auto,
    Fixed(usize),
}

impl FromStr for KMax {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "auto" {
            return Ok(KMax::Auto);
        }
        s.parse()
            .map(KMax::Fixed)
            .map_err(|_| format!("expected a non-negative integer or \"auto\", got {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [start, stop, step] = parts.as_slice() else {
            return Err(format!("expected start:stop:step, got {s:?}"));
        };
        let num = |x: &str| {
            x.trim()
                .parse::<f64>()
                .map_err(|_| format!("bad number {x:?} in {s:?}"))
        };
        let spec = GridSpec {
            start: num(start)?,
            stop: num(stop)?,
            step: num(step)?,
        };
        if !(spec.start.is_finite() && spec.stop.is_finite() && spec.step.is_finite()) {
            return Err(format!("grid bounds must be finite in {s:?}"));
        }
        if spec.stop < spec.start {
            return Err(format!("grid must be ascending, got {s:?}"));
        }
        if spec.step <= 0.0 {
            return Err(format!("grid step must be positive, got {s:?}"));
        }
        Ok(spec)
    }
}
