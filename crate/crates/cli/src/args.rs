//! Command-line arguments. Every subcommand is also a serializable experiment
//! configuration, so `--dump-config` and `--config` round-trip exactly.

use std::fmt;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(name = "torus-spectra", version, about = "Spectral statistics of flat tori and related experiments")]
pub struct Cli {
    /// Read the experiment from a JSON file written by --dump-config.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<std::path::PathBuf>,

    /// Print the resolved experiment as JSON and exit without running it.
    #[arg(long, global = true)]
    pub dump_config: bool,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Smallest normalized eigenvalues of a flat torus.
    Spectrum(SpectrumArgs),
    /// Pair correlation T2(I; N).
    Paircorr(PairArgs),
    /// Triple correlation T3(I1, I2; N).
    Triplecorr(TripleArgs),
    /// Gap distribution, pointwise and summed gap inequalities.
    Gaps(GapsArgs),
    /// The bounded-gap semi-random sequence.
    Construct(ConstructArgs),
    /// Pair counts of the sequence split by point origin.
    Decompose(DecomposeArgs),
    /// Exact tuple count inside one dyadic box.
    DiophCount(DiophCountArgs),
    /// Sum of 1/(|Delta| + P) over admissible 8-tuples with entries in [-M, M].
    Prop4Sum(Prop4Args),
    /// Monte Carlo volume of the continuous analogue of the tuple region.
    Volume(VolumeArgs),
    /// Hyperbolic measure of a rectangle of shapes.
    Measure(MeasureArgs),
    /// Triple correlation averaged over random shapes in a rectangle.
    AvgTriple(AvgTripleArgs),
    /// Root of the long-gap equation and its crossover constant.
    SolveG(SolveGArgs),
    /// The endgame integrals and their slack.
    Endgame(EndgameArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Spectrum(_) => "spectrum",
            Self::Paircorr(_) => "paircorr",
            Self::Triplecorr(_) => "triplecorr",
            Self::Gaps(_) => "gaps",
            Self::Construct(_) => "construct",
            Self::Decompose(_) => "decompose",
            Self::DiophCount(_) => "dioph-count",
            Self::Prop4Sum(_) => "prop4-sum",
            Self::Volume(_) => "volume",
            Self::Measure(_) => "measure",
            Self::AvgTriple(_) => "avg-triple",
            Self::SolveG(_) => "solve-g",
            Self::Endgame(_) => "endgame",
        }
    }
}

/// Comma-separated list of exactly `K` numbers; a JSON array in configs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct List<T, const K: usize>(pub [T; K]);

impl<T: Serialize, const K: usize> Serialize for List<T, K> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.as_slice().serialize(s)
    }
}

impl<'de, T: Deserialize<'de>, const K: usize> Deserialize<'de> for List<T, K> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<T>::deserialize(d)?;
        let len = v.len();
        v.try_into().map(Self).map_err(|_| serde::de::Error::custom(format!("expected {K} values, got {len}")))
    }
}

impl<T: FromStr + Copy + Default, const K: usize> FromStr for List<T, K>
where
    T::Err: fmt::Display,
{
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != K {
            return Err(format!("expected {K} comma-separated values, got {}", parts.len()));
        }
        let mut out = [T::default(); K];
        for (slot, p) in out.iter_mut().zip(parts) {
            *slot = p.parse().map_err(|e| format!("{p:?}: {e}"))?;
        }
        Ok(Self(out))
    }
}

impl<T: fmt::Display, const K: usize> fmt::Display for List<T, K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

pub type Alpha = List<f64, 3>;
pub type Pair = List<f64, 2>;
pub type Quad = List<i64, 4>;

/// Three `lo,hi` ranges separated by colons: `a1lo,a1hi:a2lo,a2hi:a3lo,a3hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Rect(pub [[f64; 2]; 3]);

impl FromStr for Rect {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("expected three colon-separated ranges, got {}", parts.len()));
        }
        let mut out = [[0.0; 2]; 3];
        for (slot, p) in out.iter_mut().zip(parts) {
            *slot = p.parse::<Pair>()?.0;
        }
        Ok(Self(out))
    }
}

/// Which sequence a statistic is computed on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SequenceKind {
    /// Normalized torus spectrum for --alpha.
    Torus,
    /// The first N points of the bounded-gap sequence.
    SemiRandom,
    /// The same sequence without clusters.
    RandomOnly,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct Source {
    /// Sequence to analyse.
    #[arg(long, value_enum, default_value_t = SequenceKind::Torus)]
    pub sequence: SequenceKind,
    /// Quadratic form coefficients a1,a2,a3.
    #[arg(long, default_value = "1,0,1.4142135623730951", allow_hyphen_values = true)]
    pub alpha: Alpha,
    /// Index torus eigenvalues by x, y >= 0 (rectangular forms only).
    #[arg(long)]
    pub quadrant: bool,
    /// Seed for the semi-random sequences.
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct SpectrumArgs {
    /// Quadratic form coefficients a1,a2,a3.
    #[arg(long, default_value = "1,0,1.4142135623730951", allow_hyphen_values = true)]
    pub alpha: Alpha,
    /// Number of eigenvalues.
    #[arg(long, default_value_t = 1000)]
    pub count: usize,
    /// Index by x, y >= 0 (rectangular forms only).
    #[arg(long)]
    pub quadrant: bool,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct PairArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub source: Source,
    /// Sample size N.
    #[arg(long, default_value_t = 10_000)]
    pub n: usize,
    /// Interval lo,hi; (lo, hi], closed at lo = 0.
    #[arg(long, default_value = "0,1", allow_hyphen_values = true)]
    pub i1: Pair,
    /// Use the literal nested-loop count (N <= 5000).
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct TripleArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub source: Source,
    /// Sample size N.
    #[arg(long, default_value_t = 10_000)]
    pub n: usize,
    /// First interval lo,hi.
    #[arg(long, default_value = "0,1", allow_hyphen_values = true)]
    pub i1: Pair,
    /// Second interval lo,hi.
    #[arg(long, default_value = "0,1", allow_hyphen_values = true)]
    pub i2: Pair,
    /// Use the literal nested-loop count (N <= 5000).
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct GapsArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub source: Source,
    /// Sample size N.
    #[arg(long, default_value_t = 10_000)]
    pub n: usize,
    /// Window length b for the inequalities.
    #[arg(long, default_value_t = 1.0)]
    pub b: f64,
    /// Long-gap constant; defaults to the solved value.
    #[arg(long)]
    pub g: Option<f64>,
    /// Margin below G.
    #[arg(long, default_value_t = 0.01)]
    pub eps: f64,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct ConstructArgs {
    /// Index bound N: every point with index <= N.
    #[arg(long, default_value_t = 10_000)]
    pub n: u64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Omit the clusters.
    #[arg(long)]
    pub random_only: bool,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct DecomposeArgs {
    /// Number of leading points.
    #[arg(long, default_value_t = 100_000)]
    pub n: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Window length b.
    #[arg(long, default_value_t = 1.0)]
    pub b: f64,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct DiophCountArgs {
    /// Entry range M; every bound must be at most M/2.
    #[arg(long, default_value_t = 8)]
    pub m: i64,
    /// Dyadic bounds A1,A2,A3,A4 (0 pins the entry to zero).
    #[arg(long, default_value = "1,1,1,1")]
    pub a: Quad,
    /// Dyadic bounds B1,B2,B3,B4.
    #[arg(long, default_value = "1,1,1,1")]
    pub b: Quad,
    /// Dyadic bound D on |Delta|.
    #[arg(long, default_value_t = 1)]
    pub d: i64,
    /// Constant in |Delta1|, |Delta2| <= c (D + P0).
    #[arg(long, default_value_t = 1.0)]
    pub c_eps: f64,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct Prop4Args {
    #[arg(long, default_value_t = 8)]
    pub m: i64,
    /// Exponent loss: |Delta| <= M^(4 - delta).
    #[arg(long, default_value_t = 0.5)]
    pub delta: f64,
    /// Exponent in |Delta1|, |Delta2| <= (|Delta| + P)^(1 + eps').
    #[arg(long, default_value_t = 0.01)]
    pub eps_prime: f64,
    /// Also report the sum as an exact fraction (M <= 12).
    #[arg(long)]
    pub exact: bool,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct VolumeArgs {
    #[arg(long, default_value_t = 16.0)]
    pub m: f64,
    #[arg(long, default_value_t = 0.5)]
    pub delta: f64,
    #[arg(long, default_value_t = 0.01)]
    pub eps_prime: f64,
    #[arg(long, default_value_t = 1.0)]
    pub c_eps: f64,
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct MeasureArgs {
    /// Shape rectangle a1lo,a1hi:a2lo,a2hi:a3lo,a3hi.
    #[arg(long, default_value = "1,1.2:0.3,0.5:1.3,1.5")]
    pub rect: Rect,
    /// Relative tolerance of the quadrature.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct AvgTripleArgs {
    /// Shape rectangle a1lo,a1hi:a2lo,a2hi:a3lo,a3hi.
    #[arg(long, default_value = "1,1.2:0.3,0.5:1.3,1.5")]
    pub rect: Rect,
    #[arg(long, default_value = "0,1", allow_hyphen_values = true)]
    pub i1: Pair,
    #[arg(long, default_value = "0,1", allow_hyphen_values = true)]
    pub i2: Pair,
    /// Eigenvalues per shape.
    #[arg(long, default_value_t = 10_000)]
    pub n: usize,
    /// Number of random shapes.
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct SolveGArgs {
    /// Root tolerance.
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct EndgameArgs {
    /// Long-gap constant; defaults to the solved value.
    #[arg(long)]
    pub g: Option<f64>,
    /// Margin in (0, 0.1).
    #[arg(long, default_value_t = 0.01)]
    pub eps: f64,
}
