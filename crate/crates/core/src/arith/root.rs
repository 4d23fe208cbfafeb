use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Level `r` together with the chosen primitive `4r`-th root of unity
/// `A = exp(k π i / 2r)` and fixed square roots of `A` and `-1`.
///
/// `√A` is the formal generator `s` of [`LaurentScalar`](super::LaurentScalar);
/// numerically `s = ±exp(k π i / 4r)`. `√-1` is realized as `±A^r`.
#[derive(Clone)]
pub struct RootContext {
    r: u32,
    k: u32,
    sqrt_a_sign: i8,
    sqrt_minus_one_sign: i8,
    // s^m for m in 0..8r
    powers: Arc<[Complex64]>,
}

/// Hashable identity of a context, used as a memo key.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootKey {
    pub r: u32,
    pub k: u32,
    pub sqrt_a_sign: i8,
    pub sqrt_minus_one_sign: i8,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl RootContext {
    /// Context with the default square-root choices: `√A = exp(k π i / 4r)`
    /// and `√-1 = i`.
    pub fn new(r: u32, k: i64) -> Result<Self> {
        let modulus = 4 * r as i64;
        let k_red = k.rem_euclid(modulus.max(1)) as u32;
        // A^r = i^k; pick the sign making √-1 = i
        let sigma = if k_red % 4 == 1 { 1 } else { -1 };
        Self::with_choices(r, k, 1, sigma)
    }

    pub fn with_choices(r: u32, k: i64, sqrt_a_sign: i8, sqrt_minus_one_sign: i8) -> Result<Self> {
        if r < 3 {
            return Err(Error::InvalidRoot(format!("level r = {r} must be at least 3")));
        }
        let modulus = 4 * r as i64;
        let k_red = k.rem_euclid(modulus) as u32;
        if gcd(k_red as u64, modulus as u64) != 1 {
            return Err(Error::InvalidRoot(format!(
                "exponent k = {k} is not coprime to 4r = {modulus}"
            )));
        }
        if sqrt_a_sign.abs() != 1 || sqrt_minus_one_sign.abs() != 1 {
            return Err(Error::InvalidRoot("square-root choices must be ±1".into()));
        }
        let n = 8 * r as usize;
        let mut powers = Vec::with_capacity(n);
        // direct polar form per entry keeps rounding independent of m
        for m in 0..n {
            let base = Complex64::from_polar(1.0, (k_red as f64) * (m as f64) * PI / (4.0 * r as f64));
            let sign = if sqrt_a_sign < 0 && m % 2 == 1 { -1.0 } else { 1.0 };
            powers.push(base * sign);
        }
        Ok(Self {
            r,
            k: k_red,
            sqrt_a_sign,
            sqrt_minus_one_sign,
            powers: powers.into(),
        })
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn sqrt_a_sign(&self) -> i8 {
        self.sqrt_a_sign
    }

    /// σ in `√-1 = σ A^r`.
    pub fn sqrt_minus_one_sign(&self) -> i8 {
        self.sqrt_minus_one_sign
    }

    /// Largest usable color, `r - 2`.
    pub fn max_color(&self) -> u32 {
        self.r - 2
    }

    pub fn key(&self) -> RootKey {
        RootKey {
            r: self.r,
            k: self.k,
            sqrt_a_sign: self.sqrt_a_sign,
            sqrt_minus_one_sign: self.sqrt_minus_one_sign,
        }
    }

    /// Numeric `s^m`.
    pub fn s_pow(&self, m: i64) -> Complex64 {
        let n = self.powers.len() as i64;
        self.powers[m.rem_euclid(n) as usize]
    }

    pub fn a_value(&self) -> Complex64 {
        self.s_pow(2)
    }

    pub fn sqrt_a_value(&self) -> Complex64 {
        self.s_pow(1)
    }

    pub fn sqrt_minus_one_value(&self) -> Complex64 {
        self.s_pow(2 * self.r as i64) * self.sqrt_minus_one_sign as f64
    }
}

impl fmt::Debug for RootContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RootContext")
            .field("r", &self.r)
            .field("k", &self.k)
            .field("sqrt_a_sign", &self.sqrt_a_sign)
            .field("sqrt_minus_one_sign", &self.sqrt_minus_one_sign)
            .finish()
    }
}

impl PartialEq for RootContext {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}
