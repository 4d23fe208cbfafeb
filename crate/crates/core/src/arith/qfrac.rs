use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};

use super::{LaurentScalar, RootContext};

/// Quantum integer `[m] = (A^{2m} - A^{-2m}) / (A^2 - A^{-2})`.
pub fn quantum_integer(m: u32) -> LaurentScalar {
    if m == 0 {
        return LaurentScalar::zero();
    }
    // s-exponents 4(m-1), 4(m-1)-8, ..., -4(m-1)
    LaurentScalar::from_terms((0..m as i32).map(|j| (4 * (m as i32 - 1) - 8 * j, 1)))
}

/// Exact fraction whose denominator is a product of quantum integers,
/// `num / Π [m]^{e_m}`.
///
/// Every coefficient of a Jones–Wenzl projector, and hence every closed
/// colored network, lives in this ring. Equality is decided by
/// cross-multiplication, so two different representations of the same
/// rational function compare equal.
#[derive(Clone, Default)]
pub struct QFrac {
    num: LaurentScalar,
    den: BTreeMap<u32, u32>,
}

impl QFrac {
    pub fn new(num: LaurentScalar) -> Self {
        Self {
            num,
            den: BTreeMap::new(),
        }
    }

    /// `1 / [m]`.
    pub fn inv_quantum(m: u32) -> Self {
        assert!(m > 0, "[0] = 0 is not invertible");
        let mut den = BTreeMap::new();
        den.insert(m, 1);
        Self {
            num: LaurentScalar::one(),
            den,
        }
    }

    pub fn numerator(&self) -> &LaurentScalar {
        &self.num
    }

    pub fn denominator_factors(&self) -> &BTreeMap<u32, u32> {
        &self.den
    }

    pub fn denominator(&self) -> LaurentScalar {
        den_poly(&self.den)
    }

    /// Value as an honest Laurent polynomial, when the denominator divides out.
    pub fn as_laurent(&self) -> Option<LaurentScalar> {
        let n = self.normalized();
        n.den.is_empty().then_some(n.num)
    }

    /// Cancel quantum-integer factors that divide the numerator.
    pub fn normalized(&self) -> Self {
        let mut num = self.num.clone();
        let mut den = BTreeMap::new();
        for (&m, &e) in &self.den {
            let q = quantum_integer(m);
            let mut left = e;
            while left > 0 {
                match num.div_exact(&q) {
                    Some(d) => {
                        num = d;
                        left -= 1;
                    }
                    None => break,
                }
            }
            if left > 0 {
                den.insert(m, left);
            }
        }
        Self { num, den }
    }

    /// Multiply numerator and denominator so the denominator becomes `target`
    /// (which must dominate the current one factorwise).
    fn lift_to(&self, target: &BTreeMap<u32, u32>) -> LaurentScalar {
        let mut num = self.num.clone();
        for (&m, &e) in target {
            let have = self.den.get(&m).copied().unwrap_or(0);
            debug_assert!(have <= e);
            for _ in have..e {
                num = &num * &quantum_integer(m);
            }
        }
        num
    }

    pub fn eval(&self, ctx: &RootContext) -> Complex64 {
        let mut v = self.num.eval(ctx);
        for (&m, &e) in &self.den {
            let d = quantum_integer(m).eval(ctx);
            v /= d.powi(e as i32);
        }
        v
    }

    /// Exact equality of values at the context's root; both denominators
    /// must be defined there.
    pub fn equal_at_root(&self, other: &Self, ctx: &RootContext) -> bool {
        debug_assert!(self.is_defined_at(ctx) && other.is_defined_at(ctx));
        let common = merge_max(&self.den, &other.den);
        self.lift_to(&common).equal_at_root(&other.lift_to(&common), ctx)
    }

    /// True when the denominator does not vanish at the root.
    pub fn is_defined_at(&self, ctx: &RootContext) -> bool {
        self.den.keys().all(|&m| m % ctx.r() != 0)
    }
}

pub(crate) fn den_poly(den: &BTreeMap<u32, u32>) -> LaurentScalar {
    den.iter().fold(LaurentScalar::one(), |acc, (&m, &e)| {
        &acc * &quantum_integer(m).pow(e)
    })
}

fn merge_max(a: &BTreeMap<u32, u32>, b: &BTreeMap<u32, u32>) -> BTreeMap<u32, u32> {
    let mut out = a.clone();
    for (&m, &e) in b {
        let slot = out.entry(m).or_insert(0);
        *slot = (*slot).max(e);
    }
    out
}

impl From<LaurentScalar> for QFrac {
    fn from(num: LaurentScalar) -> Self {
        Self::new(num)
    }
}

impl Zero for QFrac {
    fn zero() -> Self {
        Self::new(LaurentScalar::zero())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for QFrac {
    fn one() -> Self {
        Self::new(LaurentScalar::one())
    }
}

impl PartialEq for QFrac {
    fn eq(&self, other: &Self) -> bool {
        let common = merge_max(&self.den, &other.den);
        self.lift_to(&common) == other.lift_to(&common)
    }
}

impl<'a> Add<&'a QFrac> for &'a QFrac {
    type Output = QFrac;
    fn add(self, rhs: &QFrac) -> QFrac {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let den = merge_max(&self.den, &rhs.den);
        let num = &self.lift_to(&den) + &rhs.lift_to(&den);
        QFrac { num, den }.normalized()
    }
}

impl<'a> Mul<&'a QFrac> for &'a QFrac {
    type Output = QFrac;
    fn mul(self, rhs: &QFrac) -> QFrac {
        if self.is_zero() || rhs.is_zero() {
            return QFrac::zero();
        }
        let mut den = self.den.clone();
        for (&m, &e) in &rhs.den {
            *den.entry(m).or_insert(0) += e;
        }
        QFrac {
            num: &self.num * &rhs.num,
            den,
        }
        .normalized()
    }
}

impl Neg for &QFrac {
    type Output = QFrac;
    fn neg(self) -> QFrac {
        QFrac {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl<'a> Sub<&'a QFrac> for &'a QFrac {
    type Output = QFrac;
    fn sub(self, rhs: &QFrac) -> QFrac {
        self + &(-rhs)
    }
}

impl Add for QFrac {
    type Output = QFrac;
    fn add(self, rhs: QFrac) -> QFrac {
        &self + &rhs
    }
}

impl Mul for QFrac {
    type Output = QFrac;
    fn mul(self, rhs: QFrac) -> QFrac {
        &self * &rhs
    }
}

impl Sub for QFrac {
    type Output = QFrac;
    fn sub(self, rhs: QFrac) -> QFrac {
        &self - &rhs
    }
}

impl fmt::Debug for QFrac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for QFrac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() {
            return write!(f, "{}", self.num);
        }
        write!(f, "({})", self.num)?;
        for (m, e) in &self.den {
            write!(f, " / [{m}]^{e}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantum_integers() {
        assert_eq!(quantum_integer(1), LaurentScalar::one());
        // [2] = A^2 + A^-2
        assert_eq!(quantum_integer(2), LaurentScalar::from_terms([(4, 1), (-4, 1)]));
        let ctx = RootContext::new(5, 1).unwrap();
        for m in 1..12 {
            let expect = (m as f64 * std::f64::consts::PI / 5.0).sin() / (std::f64::consts::PI / 5.0).sin();
            assert!((quantum_integer(m).eval(&ctx) - expect).norm() < 1e-12);
        }
    }

    #[test]
    fn cancels_and_compares() {
        let q2 = QFrac::new(quantum_integer(2));
        let inv = QFrac::inv_quantum(2);
        assert_eq!(&q2 * &inv, QFrac::one());
        assert!((&q2 * &inv).denominator_factors().is_empty());
        // [4] = [2](A^4 + A^-4): 1/[2] == (A^4 + A^-4)/[4]
        let other = &QFrac::new(LaurentScalar::from_terms([(8, 1), (-8, 1)])) * &QFrac::inv_quantum(4);
        assert_eq!(inv, other);
    }

    #[test]
    fn addition_uses_common_denominator() {
        let a = QFrac::inv_quantum(2);
        let b = QFrac::inv_quantum(3);
        let sum = &a + &b;
        let expect = &(&QFrac::new(&quantum_integer(2) + &quantum_integer(3)) * &a) * &b;
        assert_eq!(sum, expect);
        let ctx = RootContext::new(7, 1).unwrap();
        assert!((sum.eval(&ctx) - (a.eval(&ctx) + b.eval(&ctx))).norm() < 1e-12);
    }
}
