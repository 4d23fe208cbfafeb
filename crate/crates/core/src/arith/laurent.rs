use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_complex::Complex64;
use num_traits::{One, Zero};

use super::RootContext;

/// Exact Laurent polynomial `Σ c_m s^m` in the formal half-power `s = √A`.
///
/// Stored densely: `coeffs[i]` is the coefficient of `s^(low + i)`. The
/// representation is canonical: no leading or trailing zero coefficients,
/// and the zero polynomial has an empty coefficient vector with `low = 0`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentScalar {
    low: i32,
    coeffs: Vec<i128>,
}

impl LaurentScalar {
    pub fn monomial(coeff: i128, exponent: i32) -> Self {
        Self::from_dense(exponent, vec![coeff])
    }

    /// `A^n`, i.e. `s^(2n)`.
    pub fn a_pow(n: i32) -> Self {
        Self::monomial(1, 2 * n)
    }

    pub fn from_terms<I: IntoIterator<Item = (i32, i128)>>(terms: I) -> Self {
        let terms: Vec<(i32, i128)> = terms.into_iter().collect();
        let Some(lo) = terms.iter().map(|t| t.0).min() else {
            return Self::zero();
        };
        let hi = terms.iter().map(|t| t.0).max().unwrap();
        let mut coeffs = vec![0i128; (hi - lo + 1) as usize];
        for (e, c) in terms {
            coeffs[(e - lo) as usize] += c;
        }
        Self::from_dense(lo, coeffs)
    }

    fn from_dense(low: i32, mut coeffs: Vec<i128>) -> Self {
        let Some(first) = coeffs.iter().position(|&c| c != 0) else {
            return Self::zero();
        };
        let last = coeffs.iter().rposition(|&c| c != 0).unwrap();
        coeffs.truncate(last + 1);
        coeffs.drain(..first);
        Self {
            low: low + first as i32,
            coeffs,
        }
    }

    /// Nonzero terms as `(exponent, coefficient)` in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i32, i128)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(move |(i, &c)| (self.low + i as i32, c))
    }

    pub fn coeff(&self, exponent: i32) -> i128 {
        let i = exponent - self.low;
        if i < 0 || i as usize >= self.coeffs.len() {
            0
        } else {
            self.coeffs[i as usize]
        }
    }

    pub fn min_exponent(&self) -> Option<i32> {
        (!self.coeffs.is_empty()).then_some(self.low)
    }

    pub fn max_exponent(&self) -> Option<i32> {
        (!self.coeffs.is_empty()).then(|| self.low + self.coeffs.len() as i32 - 1)
    }

    /// Multiply by `s^shift`.
    pub fn shift(&self, shift: i32) -> Self {
        Self {
            low: if self.coeffs.is_empty() { 0 } else { self.low + shift },
            coeffs: self.coeffs.clone(),
        }
    }

    pub fn scale(&self, k: i128) -> Self {
        Self::from_dense(self.low, self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Substitute `s -> s^-1`.
    pub fn bar(&self) -> Self {
        Self::from_terms(self.terms().map(|(e, c)| (-e, c)))
    }

    /// Exact quotient `self / divisor` when the division leaves no
    /// remainder. Requires the divisor's extreme coefficients to be ±1.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let lead = *divisor.coeffs.last().unwrap();
        if lead.abs() != 1 {
            return None;
        }
        let dlen = divisor.coeffs.len();
        if self.coeffs.len() < dlen {
            return None;
        }
        let mut rem = self.coeffs.clone();
        let qlen = rem.len() - dlen + 1;
        let mut quot = vec![0i128; qlen];
        for qi in (0..qlen).rev() {
            let top = rem[qi + dlen - 1];
            if top == 0 {
                continue;
            }
            let q = top * lead;
            quot[qi] = q;
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                rem[qi + j] -= q * d;
            }
        }
        if rem.iter().any(|&c| c != 0) {
            return None;
        }
        Some(Self::from_dense(self.low - divisor.low, quot))
    }

    /// Numeric value at the context's `s`.
    pub fn eval(&self, ctx: &RootContext) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in self.terms() {
            acc += ctx.s_pow(e as i64) * c as f64;
        }
        acc
    }

    /// Canonical image in `Z[s]/Φ_{8r}(s)`. The context's `s` is a primitive
    /// `8r`-th root of unity and `Φ_{8r}` is its minimal polynomial, so two
    /// polynomials have equal images exactly when they take equal values.
    pub fn reduce_at_root(&self, ctx: &RootContext) -> Self {
        let order = 8 * ctx.r() as usize;
        let mut rem = vec![0i128; order];
        for (e, c) in self.terms() {
            rem[(e as i64).rem_euclid(order as i64) as usize] += c;
        }
        let phi = cyclotomic(order);
        let deg = phi.len() - 1;
        // phi is monic: plain long division
        for top in (deg..order).rev() {
            let q = rem[top];
            if q != 0 {
                for (j, &p) in phi.iter().enumerate() {
                    rem[top - deg + j] -= q * p;
                }
            }
        }
        rem.truncate(deg);
        Self::from_dense(0, rem)
    }

    /// True when both sides take the same value at the context's root.
    pub fn equal_at_root(&self, other: &Self, ctx: &RootContext) -> bool {
        (self - other).reduce_at_root(ctx).is_zero()
    }
}

/// Coefficients of the cyclotomic polynomial `Φ_n`, constant term first.
fn cyclotomic(n: usize) -> Vec<i128> {
    // x^n - 1 divided by Φ_d for every proper divisor d
    let mut p = vec![0i128; n + 1];
    p[0] = -1;
    p[n] = 1;
    for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
        let q = cyclotomic(d);
        p = monic_quotient(&p, &q);
    }
    p
}

fn monic_quotient(p: &[i128], q: &[i128]) -> Vec<i128> {
    let dq = q.len() - 1;
    let mut rem = p.to_vec();
    let mut out = vec![0i128; p.len() - dq];
    for top in (dq..p.len()).rev() {
        let c = rem[top];
        out[top - dq] = c;
        for (j, &x) in q.iter().enumerate() {
            rem[top - dq + j] -= c * x;
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    out
}

impl Zero for LaurentScalar {
    fn zero() -> Self {
        Self {
            low: 0,
            coeffs: Vec::new(),
        }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for LaurentScalar {
    fn one() -> Self {
        Self::monomial(1, 0)
    }
}

impl From<i128> for LaurentScalar {
    fn from(c: i128) -> Self {
        Self::monomial(c, 0)
    }
}

impl<'a> Add<&'a LaurentScalar> for &'a LaurentScalar {
    type Output = LaurentScalar;
    fn add(self, rhs: &LaurentScalar) -> LaurentScalar {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let lo = self.low.min(rhs.low);
        let hi = self.max_exponent().unwrap().max(rhs.max_exponent().unwrap());
        let mut v = vec![0i128; (hi - lo + 1) as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[(self.low - lo) as usize + i] += c;
        }
        for (i, c) in rhs.coeffs.iter().enumerate() {
            v[(rhs.low - lo) as usize + i] += c;
        }
        LaurentScalar::from_dense(lo, v)
    }
}

impl<'a> Mul<&'a LaurentScalar> for &'a LaurentScalar {
    type Output = LaurentScalar;
    fn mul(self, rhs: &LaurentScalar) -> LaurentScalar {
        if self.is_zero() || rhs.is_zero() {
            return LaurentScalar::zero();
        }
        let mut v = vec![0i128; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        LaurentScalar::from_dense(self.low + rhs.low, v)
    }
}

impl Neg for &LaurentScalar {
    type Output = LaurentScalar;
    fn neg(self) -> LaurentScalar {
        LaurentScalar {
            low: self.low,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for LaurentScalar {
    type Output = LaurentScalar;
    fn neg(self) -> LaurentScalar {
        -&self
    }
}

impl<'a> Sub<&'a LaurentScalar> for &'a LaurentScalar {
    type Output = LaurentScalar;
    fn sub(self, rhs: &LaurentScalar) -> LaurentScalar {
        self + &(-rhs)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for LaurentScalar {
            type Output = LaurentScalar;
            fn $m(self, rhs: LaurentScalar) -> LaurentScalar {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl AddAssign<&LaurentScalar> for LaurentScalar {
    fn add_assign(&mut self, rhs: &LaurentScalar) {
        *self = &*self + rhs;
    }
}

impl AddAssign for LaurentScalar {
    fn add_assign(&mut self, rhs: LaurentScalar) {
        *self = &*self + &rhs;
    }
}

impl SubAssign<&LaurentScalar> for LaurentScalar {
    fn sub_assign(&mut self, rhs: &LaurentScalar) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&LaurentScalar> for LaurentScalar {
    fn mul_assign(&mut self, rhs: &LaurentScalar) {
        *self = &*self * rhs;
    }
}

impl fmt::Debug for LaurentScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for LaurentScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms().collect::<Vec<_>>().into_iter().rev() {
            let sign = if c < 0 { "-" } else if first { "" } else { "+" };
            let mag = c.abs();
            if !first {
                write!(f, " ")?;
            }
            first = false;
            match (mag, e) {
                (m, 0) => write!(f, "{sign}{m}")?,
                (1, e) => write!(f, "{sign}s^{e}")?,
                (m, e) => write!(f, "{sign}{m}*s^{e}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::quantum_integer;
    use proptest::prelude::*;

    fn poly() -> impl Strategy<Value = LaurentScalar> {
        prop::collection::vec((-200i32..=200, -20i128..=20), 0..8)
            .prop_map(LaurentScalar::from_terms)
    }

    #[test]
    fn canonical_zero() {
        let p = LaurentScalar::from_terms([(3, 2), (3, -2)]);
        assert!(p.is_zero());
        assert_eq!(p, LaurentScalar::zero());
        assert_eq!(p.min_exponent(), None);
    }

    #[test]
    fn display() {
        let p = LaurentScalar::from_terms([(-4, -1), (4, -1)]);
        assert_eq!(p.to_string(), "-s^4 -s^-4");
    }

    #[test]
    fn exact_division() {
        let a = LaurentScalar::from_terms([(4, 1), (-4, 1)]);
        let b = LaurentScalar::from_terms([(3, 2), (0, -1), (-7, 5)]);
        let prod = &a * &b;
        assert_eq!(prod.div_exact(&a), Some(b.clone()));
        assert_eq!((&prod + &LaurentScalar::one()).div_exact(&a), None);
    }

    #[test]
    fn root_reduction() {
        let ctx = RootContext::new(3, 1).unwrap();
        assert_eq!(LaurentScalar::monomial(1, 12).reduce_at_root(&ctx), LaurentScalar::from(-1));
        assert_eq!(cyclotomic(1), vec![-1, 1]);
        assert_eq!(cyclotomic(8), vec![1, 0, 0, 0, 1]);
        assert_eq!(cyclotomic(24), vec![1, 0, 0, 0, -1, 0, 0, 0, 1]);
        // [r] vanishes at the root but is not a multiple of s^{4r}+1
        for r in 3..10 {
            let ctx = RootContext::new(r, 1).unwrap();
            assert!(quantum_integer(r).reduce_at_root(&ctx).is_zero());
            assert!(!quantum_integer(r - 1).reduce_at_root(&ctx).is_zero());
        }
    }

    proptest! {
        #[test]
        fn ring_laws(p in poly(), q in poly(), t in poly()) {
            prop_assert_eq!(&p + &q, &q + &p);
            prop_assert_eq!(&p * &q, &q * &p);
            prop_assert_eq!(&(&p + &q) + &t, &p + &(&q + &t));
            prop_assert_eq!(&(&p * &q) * &t, &p * &(&q * &t));
            prop_assert_eq!(&p * &(&q + &t), &(&p * &q) + &(&p * &t));
            prop_assert!((&p - &p).is_zero());
        }

        #[test]
        fn evaluation_is_a_homomorphism(p in poly(), q in poly(), r in 3u32..10) {
            let ctx = RootContext::new(r, 1).unwrap();
            let sum = (&p + &q).eval(&ctx) - (p.eval(&ctx) + q.eval(&ctx));
            let prod = (&p * &q).eval(&ctx) - p.eval(&ctx) * q.eval(&ctx);
            prop_assert!(sum.norm() < 1e-9);
            prop_assert!(prod.norm() < 1e-9 * (1.0 + p.eval(&ctx).norm() * q.eval(&ctx).norm()));
        }

        #[test]
        fn reduction_preserves_value(p in poly(), r in 3u32..10) {
            let ctx = RootContext::new(r, 1).unwrap();
            prop_assert!((p.reduce_at_root(&ctx).eval(&ctx) - p.eval(&ctx)).norm() < 1e-9);
            let zero = p.reduce_at_root(&ctx).eval(&ctx).norm() < 1e-9;
            prop_assert_eq!(p.reduce_at_root(&ctx).is_zero(), zero);
        }
    }
}
