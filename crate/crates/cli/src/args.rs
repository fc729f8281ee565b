use clap::{Args, Parser, Subcommand, ValueEnum};
use gentrib::{BigInt, Preset, SequenceParams};

use crate::output::Format;
use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "gentrib", version, about = "Generalized Tribonacci sequences: terms, roots, identity checks and benchmarks")]
pub struct Cli {
    /// Emit the JSON output record.
    #[arg(long, global = true, conflicts_with = "csv")]
    pub json: bool,

    /// Emit CSV.
    #[arg(long, global = true)]
    pub csv: bool,

    #[command(subcommand)]
    pub command: Command,
}

impl Cli {
    pub fn format(&self) -> Format {
        if self.json {
            Format::Json
        } else if self.csv {
            Format::Csv
        } else {
            Format::Human
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute a single term V(n).
    Term(TermArgs),
    /// Show the discriminant, roots, Cardano intermediates and closed-form constants.
    Roots(RootsArgs),
    /// Run identity checks over a parameter pool.
    Verify(VerifyArgs),
    /// Time the evaluation paths after cross-checking their results.
    Bench(BenchArgs),
}

/// Sequence selection: a preset or explicit `(V0, V1, V2; r, s, t)`.
#[derive(Debug, Clone, Default, Args)]
pub struct ParamArgs {
    /// tribonacci, padovan or narayana:<k>
    #[arg(long, conflicts_with_all = ["v0", "v1", "v2", "r", "s", "t"])]
    pub preset: Option<String>,
    /// Initial term V0 (default 0).
    #[arg(long, allow_negative_numbers = true)]
    pub v0: Option<String>,
    /// Initial term V1 (default 0).
    #[arg(long, allow_negative_numbers = true)]
    pub v1: Option<String>,
    /// Initial term V2 (default 1).
    #[arg(long, allow_negative_numbers = true)]
    pub v2: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub r: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub s: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub t: Option<String>,
}

/// Parameters with possibly non-integer recurrence coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct RealParams {
    pub seeds: [f64; 3],
    pub r: f64,
    pub s: f64,
    pub t: f64,
    /// Set when all six values are integers.
    pub exact: Option<SequenceParams>,
}

fn parse_int(name: &str, raw: &str) -> Result<BigInt, CliError> {
    raw.trim()
        .parse::<BigInt>()
        .map_err(|_| CliError::Usage(format!("--{name} must be an integer for this command, got `{raw}`")))
}

fn parse_real(name: &str, raw: &str) -> Result<f64, CliError> {
    raw.trim()
        .parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| CliError::Usage(format!("--{name} must be a finite number, got `{raw}`")))
}

impl ParamArgs {
    pub fn is_empty(&self) -> bool {
        self.preset.is_none()
            && [&self.v0, &self.v1, &self.v2, &self.r, &self.s, &self.t]
                .iter()
                .all(|v| v.is_none())
    }

    fn coefficients(&self) -> Result<[&str; 3], CliError> {
        match (&self.r, &self.s, &self.t) {
            (Some(r), Some(s), Some(t)) => Ok([r, s, t]),
            _ => Err(CliError::Usage(
                "give --preset or all of --r, --s and --t".to_string(),
            )),
        }
    }

    fn seeds(&self) -> Result<[BigInt; 3], CliError> {
        let pick = |name: &str, v: &Option<String>, default: i64| match v {
            Some(raw) => parse_int(name, raw),
            None => Ok(BigInt::from(default)),
        };
        Ok([pick("v0", &self.v0, 0)?, pick("v1", &self.v1, 0)?, pick("v2", &self.v2, 1)?])
    }

    fn preset(&self) -> Result<Option<SequenceParams>, CliError> {
        self.preset
            .as_deref()
            .map(|name| name.parse::<Preset>().map(|p| p.params()).map_err(CliError::from))
            .transpose()
    }

    /// Integer parameters; `None` when no parameter flag was given.
    pub fn resolve_exact(&self) -> Result<Option<SequenceParams>, CliError> {
        if self.is_empty() {
            return Ok(None);
        }
        if let Some(p) = self.preset()? {
            return Ok(Some(p));
        }
        let [r, s, t] = self.coefficients()?;
        let [v0, v1, v2] = self.seeds()?;
        Ok(Some(SequenceParams {
            v0,
            v1,
            v2,
            r: parse_int("r", r)?,
            s: parse_int("s", s)?,
            t: parse_int("t", t)?,
        }))
    }

    pub fn require_exact(&self) -> Result<SequenceParams, CliError> {
        self.resolve_exact()?
            .ok_or_else(|| CliError::Usage("no sequence given; use --preset or --r/--s/--t".to_string()))
    }

    /// Parameters for the closed-form path, where `r, s, t` may be decimals.
    pub fn resolve_real(&self) -> Result<RealParams, CliError> {
        if self.is_empty() {
            return Err(CliError::Usage(
                "no sequence given; use --preset or --r/--s/--t".to_string(),
            ));
        }
        if let Some(p) = self.preset()? {
            return Ok(real_from_exact(p));
        }
        let [r_raw, s_raw, t_raw] = self.coefficients()?;
        let seeds = self.seeds()?;
        let coeffs = [("r", r_raw), ("s", s_raw), ("t", t_raw)];
        if let Ok([r, s, t]) = coeffs
            .iter()
            .map(|(n, raw)| parse_int(n, raw))
            .collect::<Result<Vec<_>, _>>()
            .map(|v| <[BigInt; 3]>::try_from(v).expect("three coefficients"))
        {
            let [v0, v1, v2] = seeds;
            return Ok(real_from_exact(SequenceParams { v0, v1, v2, r, s, t }));
        }
        Ok(RealParams {
            seeds: seeds.each_ref().map(big_f64),
            r: parse_real("r", r_raw)?,
            s: parse_real("s", s_raw)?,
            t: parse_real("t", t_raw)?,
            exact: None,
        })
    }
}

fn big_f64(x: &BigInt) -> f64 {
    x.to_string().parse().unwrap_or(f64::NAN)
}

fn real_from_exact(p: SequenceParams) -> RealParams {
    RealParams {
        seeds: [&p.v0, &p.v1, &p.v2].map(big_f64),
        r: big_f64(&p.r),
        s: big_f64(&p.s),
        t: big_f64(&p.t),
        exact: Some(p),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TermMethod {
    Iter,
    Matrix,
    Binet,
}

#[derive(Debug, Clone, Args)]
pub struct TermArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Index of the term.
    #[arg(short = 'n', long = "n")]
    pub n: u64,
    #[arg(long, value_enum, default_value = "iter")]
    pub method: TermMethod,
    /// Reduce modulo this value (matrix method only).
    #[arg(long = "mod")]
    pub modulus: Option<u64>,
}

#[derive(Debug, Clone, Args)]
pub struct RootsArgs {
    #[command(flatten)]
    pub params: ParamArgs,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Run every identity (the default when no --identity is given).
    #[arg(long, conflicts_with = "identities")]
    pub all: bool,
    /// Identity to run; repeatable. One of cassini_u, cassini_v,
    /// matrix_form_12, matrix_form_14, quad_approx, binet_v,
    /// binet_quaternion, lemma_9.
    #[arg(long = "identity")]
    pub identities: Vec<String>,
    #[arg(long, default_value_t = 0)]
    pub n_min: u64,
    #[arg(long, default_value_t = 40)]
    pub n_max: u64,
    /// Seed for the random parameter pool.
    #[arg(long, default_value_t = gentrib::identities::RandomPool::default().seed)]
    pub seed: u64,
    /// Size of the random pool used when no parameters are given.
    #[arg(long, default_value_t = gentrib::identities::RandomPool::default().count)]
    pub random_count: usize,
    #[arg(long, default_value_t = gentrib::identities::Tolerances::default().rel)]
    pub tol_rel: f64,
    #[arg(long, default_value_t = gentrib::identities::Tolerances::default().abs)]
    pub tol_abs: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, ValueEnum)]
pub enum BenchMethod {
    Iter,
    Matrix,
    Binet,
    #[value(name = "matrix-mod")]
    MatrixMod,
}

impl BenchMethod {
    pub fn name(&self) -> &'static str {
        match self {
            BenchMethod::Iter => "iter",
            BenchMethod::Matrix => "matrix",
            BenchMethod::Binet => "binet",
            BenchMethod::MatrixMod => "matrix-mod",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Comma-separated term indices.
    #[arg(short = 'n', long = "n", value_delimiter = ',', required = true)]
    pub ns: Vec<u64>,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "iter,matrix")]
    pub methods: Vec<BenchMethod>,
    /// Modulus for matrix-mod; defaults to the largest 64-bit prime.
    #[arg(long = "mod")]
    pub modulus: Option<u64>,
    #[arg(long, default_value_t = 5)]
    pub reps: usize,
    /// Relative tolerance for the closed-form cross-check.
    #[arg(long, default_value_t = 1e-8)]
    pub tol_rel: f64,
}
