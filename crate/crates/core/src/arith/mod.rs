//! Exact scalars at a root of unity and the global normalization constants.

mod laurent;
mod qfrac;
mod root;

use num_complex::Complex64;

pub use laurent::LaurentScalar;
pub use qfrac::{quantum_integer, QFrac};
pub(crate) use qfrac::den_poly;
pub use root::{RootContext, RootKey};

/// Numeric value; always compared with a tolerance.
pub type ComplexValue = Complex64;

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

pub fn approx_eq(a: ComplexValue, b: ComplexValue, tol: f64) -> bool {
    (a - b).norm() <= tol
}

/// Loop value `δ = -A^2 - A^{-2}`.
pub fn quantum_loop(_ctx: &RootContext) -> LaurentScalar {
    LaurentScalar::from_terms([(4, -1), (-4, -1)])
}

/// `δ` without reference to a context; the polynomial does not depend on `r`.
pub(crate) fn loop_value() -> LaurentScalar {
    LaurentScalar::from_terms([(4, -1), (-4, -1)])
}

/// `Σ_{n=1}^{4r} A^{n^2}`.
pub fn gauss_sum(ctx: &RootContext) -> ComplexValue {
    let r = ctx.r() as i64;
    (1..=4 * r).map(|n| ctx.s_pow(2 * n * n)).sum()
}

/// `√-2`, on the branch that makes `η` positive.
///
/// Both `η` and `κ` contain a square root of a negative number; using the
/// same branch in both is what makes `κ = Ω U_+` hold for every `k`.
fn sqrt_minus_two(ctx: &RootContext) -> ComplexValue {
    let a2 = ctx.s_pow(4) - ctx.s_pow(-4);
    // A^2 - A^-2 = 2i sin(kπ/r)
    let sign = if a2.im >= 0.0 { 1.0 } else { -1.0 };
    Complex64::new(0.0, sign * 2f64.sqrt())
}

/// `η = (A^2 - A^{-2}) / √(-2r)`, normalized so `η^2 Σ Δ_n^2 = 1` with `η > 0`.
pub fn eta(ctx: &RootContext) -> ComplexValue {
    let a2 = ctx.s_pow(4) - ctx.s_pow(-4);
    a2 / (sqrt_minus_two(ctx) * (ctx.r() as f64).sqrt())
}

/// `κ = Ω U_+`, via the Gauss sum: `Σ A^{n^2} / (2 √r √-2 A^{3+r^2})`.
///
/// This is the unit-modulus value; see [`kappa_printed`] for the variant with
/// `2r` in place of `2√r`.
pub fn kappa(ctx: &RootContext) -> ComplexValue {
    kappa_printed(ctx) * (ctx.r() as f64).sqrt()
}

/// `Σ A^{n^2} / (2r √-2 A^{3+r^2})`, which differs from `Ω U_+` by a factor `√r`.
pub fn kappa_printed(ctx: &RootContext) -> ComplexValue {
    let r = ctx.r() as i64;
    let denom = 2.0 * r as f64 * sqrt_minus_two(ctx) * ctx.s_pow(2 * (3 + r * r));
    gauss_sum(ctx) / denom
}
