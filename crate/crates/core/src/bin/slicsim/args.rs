use std::f64::consts::PI;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "slicsim", version, about = "SLIC, adSLIC and cSLIC spin-dynamics simulations")]
pub struct Cli {
    /// Worker threads for sweeps (0 = all cores)
    #[arg(long, global = true, env = "SLICSIM_THREADS", default_value_t = 0)]
    pub threads: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Transfer-amplitude map over resonance offset and rf error
    Map(MapArgs),
    /// Response curve against rf error, analytic or simulated
    Response(ResponseArgs),
    /// First-order average Hamiltonian of one cycle
    Effham(EffhamArgs),
    /// Expand a cycle string and print its timing
    Parse(ParseArgs),
    /// Heteronuclear transfer pipeline from a config file
    Pipeline(PipelineArgs),
}

/// `slic`, `adslic`, `cslic` or `cycle:<text>`.
#[derive(Debug, Clone, PartialEq)]
pub enum SequenceKind {
    Slic,
    Adslic,
    Cslic,
    Cycle(String),
}

impl FromStr for SequenceKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "slic" => Ok(Self::Slic),
            "adslic" => Ok(Self::Adslic),
            "cslic" => Ok(Self::Cslic),
            _ => match s.strip_prefix("cycle:") {
                Some(text) if !text.trim().is_empty() => Ok(Self::Cycle(text.to_string())),
                _ => Err(format!("expected slic, adslic, cslic or cycle:<text>, got '{s}'")),
            },
        }
    }
}

/// `start:stop` or `start:stop:points`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RangeArg {
    pub start: f64,
    pub stop: f64,
    pub points: Option<usize>,
}

impl FromStr for RangeArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        if !(2..=3).contains(&parts.len()) {
            return Err(format!("expected start:stop[:points], got '{s}'"));
        }
        let num = |p: &str| p.trim().parse::<f64>().map_err(|_| format!("'{p}' is not a number"));
        let start = num(parts[0])?;
        let stop = num(parts[1])?;
        if !start.is_finite() || !stop.is_finite() {
            return Err("range limits must be finite".into());
        }
        let points = match parts.get(2) {
            Some(p) => {
                let n: usize = p.trim().parse().map_err(|_| format!("'{p}' is not a point count"))?;
                if n == 0 {
                    return Err("a range needs at least one point".into());
                }
                Some(n)
            }
            None => None,
        };
        Ok(Self { start, stop, points })
    }
}

/// `+x`, `-x`, `+y`, `-y` or radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Phase(pub f64);

impl FromStr for Phase {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let v = match s {
            "x" | "+x" => 0.0,
            "y" | "+y" => PI / 2.0,
            "-x" => PI,
            "-y" => 3.0 * PI / 2.0,
            _ => s.parse::<f64>().map_err(|_| format!("expected ±x, ±y or radians, got '{s}'"))?,
        };
        Ok(Self(v))
    }
}

#[derive(Debug, Args)]
pub struct SequenceArgs {
    /// slic | adslic | cslic | cycle:<text>
    #[arg(long, default_value = "slic")]
    pub sequence: SequenceKind,
    /// J coupling (Hz); also the matching amplitude
    #[arg(long)]
    pub j: f64,
    /// Chemical shift difference (Hz)
    #[arg(long, allow_hyphen_values = true)]
    pub delta: f64,
    /// Duration of SLIC or adSLIC (s); default π/ω_μ = 1/(√2 Δ)
    #[arg(long)]
    pub t: Option<f64>,
    /// cSLIC elements or cycle repetitions; default from J/(√2 Δ)
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long, default_value_t = 0.99)]
    pub alpha: f64,
    /// Spin-lock phase
    #[arg(long, default_value = "+x", allow_hyphen_values = true)]
    pub phase: Phase,
    /// adSLIC sweep depth
    #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
    pub delta_max: f64,
    /// adSLIC shape parameter
    #[arg(long, default_value_t = 0.9)]
    pub xi: f64,
    /// adSLIC segments
    #[arg(long, default_value_t = slicsim::pulse::DEFAULT_ADSLIC_SAMPLES)]
    pub samples: usize,
}

#[derive(Debug, Args)]
pub struct MapArgs {
    #[command(flatten)]
    pub seq: SequenceArgs,
    /// Resonance offset range in Hz; default ±0.2 J
    #[arg(long, allow_hyphen_values = true)]
    pub offset_range: Option<RangeArg>,
    /// Fractional rf error range
    #[arg(long, allow_hyphen_values = true, default_value = "-0.5:0.5")]
    pub eps_range: RangeArg,
    /// Points per axis when a range gives none
    #[arg(long, default_value_t = 101)]
    pub res: usize,
    /// CSV output (stdout when absent)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write the map with metadata as JSON
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ResponseMode {
    AnalyticSlic,
    AnalyticCslic,
    Numeric,
}

#[derive(Debug, Args)]
pub struct ResponseArgs {
    #[arg(long, value_enum)]
    pub mode: ResponseMode,
    #[command(flatten)]
    pub seq: SequenceArgs,
    #[arg(long, allow_hyphen_values = true, default_value = "-0.5:0.5")]
    pub eps_range: RangeArg,
    #[arg(long, default_value_t = 101)]
    pub res: usize,
    /// Report simulated amplitudes without dividing by the ε = 0 value
    #[arg(long)]
    pub raw: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EffhamArgs {
    /// slic | cslic | cycle:<text>
    #[arg(long, default_value = "slic")]
    pub sequence: SequenceKind,
    #[arg(long, default_value_t = 15.0)]
    pub j: f64,
    #[arg(long, default_value_t = 1.9, allow_hyphen_values = true)]
    pub delta: f64,
    #[arg(long, default_value = "+x", allow_hyphen_values = true)]
    pub phase: Phase,
    #[arg(long, default_value_t = 0.99)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub eps: f64,
    #[arg(long, default_value_t = slicsim::propagator::DEFAULT_AHT_STEPS)]
    pub steps: usize,
}

#[derive(Debug, Args)]
pub struct ParseArgs {
    /// Cycle string over A, B, C1-C3, S1-S3
    pub text: String,
    /// Weak (matching) amplitude in Hz
    #[arg(long, default_value_t = 15.0)]
    pub j: f64,
    #[arg(long, default_value_t = 0.99)]
    pub alpha: f64,
    /// Print the segment list as JSON instead
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct PipelineArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Overrides the config's ε grid
    #[arg(long, allow_hyphen_values = true)]
    pub eps_range: Option<RangeArg>,
    #[arg(long, default_value_t = 51)]
    pub res: usize,
    /// Overrides the config's ensemble with a Gaussian of this σ
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
