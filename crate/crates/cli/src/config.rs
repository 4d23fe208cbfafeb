//! Run configuration shared by every subcommand.

use clap::{Args, ValueEnum};
use shadowsum::{OracleBudget, PhaseSign, Result, RootContext};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Human,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PhaseArg {
    Plus,
    Minus,
}

impl From<PhaseArg> for PhaseSign {
    fn from(p: PhaseArg) -> Self {
        match p {
            PhaseArg::Plus => PhaseSign::Plus,
            PhaseArg::Minus => PhaseSign::Minus,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Level r ≥ 3; A is a primitive 4r-th root of unity.
    #[arg(long, global = true, env = "SHADOWSUM_R", default_value_t = 5)]
    pub r: u32,
    /// Exponent k of A = exp(kπi/2r), coprime to 4r.
    #[arg(
        long = "root-exponent",
        global = true,
        env = "SHADOWSUM_ROOT_EXPONENT",
        default_value_t = 1,
        allow_hyphen_values = true
    )]
    pub k: i64,
    /// Sign of √A relative to exp(kπi/4r).
    #[arg(long, global = true, env = "SHADOWSUM_SQRT_A_SIGN", value_parser = parse_sign, allow_hyphen_values = true)]
    pub sqrt_a_sign: Option<i8>,
    /// Sign of √-1 relative to i.
    #[arg(long, global = true, env = "SHADOWSUM_SQRT_MINUS_ONE_SIGN", value_parser = parse_sign, allow_hyphen_values = true)]
    pub sqrt_minus_one_sign: Option<i8>,
    /// Absolute tolerance for numeric comparisons.
    #[arg(long, global = true, env = "SHADOWSUM_TOLERANCE", default_value_t = 1e-9)]
    pub tolerance: f64,
    /// Sign of the gleam in the region phase.
    #[arg(long, global = true, env = "SHADOWSUM_PHASE_SIGN", value_enum, default_value_t = PhaseArg::Plus)]
    pub phase_sign: PhaseArg,
    /// Largest number of elementary crossings the bracket oracle will expand
    /// [default: 24 for invariants, 64 for the self-test].
    #[arg(long, global = true, env = "SHADOWSUM_BUDGET")]
    pub budget: Option<usize>,
    #[arg(long, global = true, env = "SHADOWSUM_FORMAT", value_enum, default_value_t = Format::Human)]
    pub format: Format,
    /// Worker threads for state sums (default: all cores).
    #[arg(long, global = true, env = "SHADOWSUM_JOBS")]
    pub jobs: Option<usize>,
}

fn parse_sign(s: &str) -> std::result::Result<i8, String> {
    match s {
        "1" | "+1" | "+" => Ok(1),
        "-1" | "-" => Ok(-1),
        _ => Err(format!("expected +1 or -1, got {s:?}")),
    }
}

impl RunConfig {
    pub fn context(&self) -> Result<RootContext> {
        self.context_at(self.r)
    }

    /// The configured root at another level.
    pub fn context_at(&self, r: u32) -> Result<RootContext> {
        let ctx = RootContext::new(r, self.k)?;
        if self.sqrt_a_sign.is_none() && self.sqrt_minus_one_sign.is_none() {
            return Ok(ctx);
        }
        RootContext::with_choices(
            r,
            self.k,
            self.sqrt_a_sign.unwrap_or(ctx.sqrt_a_sign()),
            self.sqrt_minus_one_sign.unwrap_or(ctx.sqrt_minus_one_sign()),
        )
    }

    pub fn oracle_budget(&self, default: OracleBudget) -> OracleBudget {
        self.budget.map_or(default, |n| OracleBudget {
            max_crossings: n,
            ..default
        })
    }

    pub fn phase(&self) -> PhaseSign {
        self.phase_sign.into()
    }
}
