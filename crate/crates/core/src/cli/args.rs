use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::finite_eta::Family;
use crate::numerics::ComplexPoint;
use crate::weyl::{Generator, Phase, Side};

#[derive(Debug, Parser)]
#[command(name = "eta-forge", version, about = "Finite eta functions, Hasse series and Weyl-algebra checks")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Working precision in bits (53 = hardware doubles).
    #[arg(long, global = true, env = "ETA_FORGE_PRECISION_BITS")]
    pub precision_bits: Option<u32>,

    /// Target relative error.
    #[arg(long, global = true, env = "ETA_FORGE_TOL")]
    pub tol: Option<f64>,

    #[arg(long, global = true, env = "ETA_FORGE_FORMAT", value_enum)]
    pub format: Option<Format>,

    /// Worker threads for scans.
    #[arg(long, global = true, env = "ETA_FORGE_JOBS")]
    pub jobs: Option<usize>,

    /// Omit the runtime block from diagnostics.
    #[arg(
        long,
        global = true,
        env = "ETA_FORGE_NO_TIMING",
        num_args = 0..=1,
        require_equals = true,
        default_missing_value = "true",
        value_parser = clap::builder::BoolishValueParser::new()
    )]
    pub no_timing: Option<bool>,

    /// key=value file consulted for settings not given as flags or env.
    #[arg(long, global = true, env = "ETA_FORGE_CONFIG")]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Finite eta sums.
    #[command(subcommand)]
    Eta(EtaCmd),
    #[command(subcommand)]
    Integral(IntegralCmd),
    /// Integral identities and trivial zeros.
    #[command(subcommand)]
    Verify(VerifyCmd),
    #[command(subcommand)]
    Zeta(ZetaCmd),
    #[command(subcommand, name = "eta-global")]
    EtaGlobal(EtaGlobalCmd),
    #[command(subcommand)]
    Funceq(FunceqCmd),
    #[command(subcommand)]
    Zero(ZeroCmd),
    #[command(subcommand)]
    Proto(ProtoCmd),
    /// Local Planck constant of a prime.
    Planck {
        #[arg(long)]
        p: u64,
    },
    #[command(subcommand)]
    Weyl(WeylCmd),
    #[command(subcommand)]
    Apow(ApowCmd),
}

#[derive(Debug, Args)]
pub struct SpecArgs {
    #[arg(long, value_parser = parse_family)]
    pub family: Family,
    #[arg(long)]
    pub n: u32,
}

#[derive(Debug, Subcommand)]
pub enum EtaCmd {
    Eval {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        s: ComplexPoint,
        /// Derivative order in s.
        #[arg(long, default_value_t = 0)]
        derivative: u32,
    },
    /// Exact values at the trivial-zero arguments.
    Zeros {
        #[command(flatten)]
        spec: SpecArgs,
    },
}

#[derive(Debug, Subcommand)]
pub enum IntegralCmd {
    Compute {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        s: ComplexPoint,
    },
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub n: u32,
    /// Single point; without it a sweep over the convergence window runs.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub s: Option<ComplexPoint>,
    #[arg(long, default_value_t = 25)]
    pub samples: usize,
    /// Largest accepted residual.
    #[arg(long, default_value_t = 1e-8)]
    pub threshold: f64,
}

#[derive(Debug, Subcommand)]
pub enum VerifyCmd {
    /// The H* family.
    Thm1(VerifyArgs),
    /// The Hasse family.
    Thm2(VerifyArgs),
}

#[derive(Debug, Subcommand)]
pub enum ZetaCmd {
    Eval {
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        s: ComplexPoint,
    },
}

#[derive(Debug, Subcommand)]
pub enum EtaGlobalCmd {
    Eval {
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        s: ComplexPoint,
        /// Maximum number of series terms.
        #[arg(long)]
        cap: Option<usize>,
    },
}

#[derive(Debug, Subcommand)]
pub enum FunceqCmd {
    Check {
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        s: ComplexPoint,
    },
}

#[derive(Debug, Subcommand)]
pub enum ZeroCmd {
    Refine {
        #[arg(long, allow_hyphen_values = true)]
        t0: f64,
    },
}

#[derive(Debug, Subcommand)]
pub enum ProtoCmd {
    Scan {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
        sigma: f64,
        #[arg(long, allow_hyphen_values = true)]
        t_min: f64,
        #[arg(long, allow_hyphen_values = true)]
        t_max: f64,
        /// Grid step; defaults to a twentieth of the Planck resolution.
        #[arg(long)]
        step: Option<f64>,
    },
    Cloud {
        #[arg(long, value_parser = parse_family, default_value = "hasse")]
        family: Family,
        #[arg(long)]
        n_max: u32,
        #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
        sigma: f64,
        #[arg(long, allow_hyphen_values = true)]
        t_center: f64,
        #[arg(long)]
        half_width: f64,
        /// Also refine the zeta zero nearest t-center and compare.
        #[arg(long)]
        compare: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum WeylCmd {
    NormalOrder {
        /// Word in the letters A and B, e.g. BBAA.
        #[arg(long, conflicts_with = "expr", required_unless_present = "expr")]
        word: Option<String>,
        /// Polynomial in the canonical text form, e.g. "b^2 a^2 + u".
        #[arg(long, allow_hyphen_values = true)]
        expr: Option<String>,
        /// Substitute u = 1.
        #[arg(long)]
        u_one: bool,
    },
    Lemmas {
        #[arg(long, default_value_t = 10)]
        n_max: u32,
    },
    RestFrames {
        /// 1, -1, i, -i or turn:p/q.
        #[arg(long, default_value = "1", value_parser = parse_phase, allow_hyphen_values = true)]
        u: Phase,
    },
    Equilibrium,
    /// Σ_{k≤K} C(s,k)(g-1)^k with coefficients polynomial in s.
    Power {
        #[arg(long, value_parser = parse_generator)]
        base: Generator,
        #[arg(long)]
        order: u32,
    },
}

#[derive(Debug, Subcommand)]
pub enum ApowCmd {
    PiS {
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        s: ComplexPoint,
    },
    Clifford {
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, required_unless_present = "grid")]
        s: Option<ComplexPoint>,
        #[arg(long, value_parser = parse_side, default_value = "a")]
        side: Side,
        /// Evaluate an N×N grid over [0,1]×[0,1/2] instead of one point.
        #[arg(long, conflicts_with = "s")]
        grid: Option<u32>,
    },
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse().map_err(|e: crate::Error| e.to_string())
}

fn parse_phase(s: &str) -> Result<Phase, String> {
    s.parse().map_err(|e: crate::Error| e.to_string())
}

fn parse_side(s: &str) -> Result<Side, String> {
    s.parse().map_err(|e: crate::Error| e.to_string())
}

fn parse_generator(s: &str) -> Result<Generator, String> {
    s.parse().map_err(|e: crate::Error| e.to_string())
}

/// `x`, `yi`, `x+yi`, `x-yi`, with `i` alone meaning `1i`.
pub fn parse_complex(src: &str) -> Result<ComplexPoint, String> {
    let s: String = src.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("'{src}' is not a complex number");
    let real = |t: &str| t.parse::<f64>().map_err(|_| bad());
    let imag = |t: &str| match t {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        t => real(t),
    };
    let z = match s.strip_suffix('i') {
        None => ComplexPoint::new(real(&s)?, 0.0),
        Some(body) => {
            let bytes = body.as_bytes();
            let split = (1..bytes.len())
                .rev()
                .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
            match split {
                Some(k) => ComplexPoint::new(real(&body[..k])?, imag(&body[k..])?),
                None => ComplexPoint::new(0.0, imag(body)?),
            }
        }
    };
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(bad())
    }
}
