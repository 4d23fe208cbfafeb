use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::TLDiagram;
use crate::arith::{loop_value, LaurentScalar, QFrac};
use crate::error::{Error, Result};

/// Linear combination of Temperley–Lieb diagrams with exact coefficients.
#[derive(Clone)]
pub struct TLElement {
    n: usize,
    terms: BTreeMap<TLDiagram, QFrac>,
}

impl TLElement {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_diagram(TLDiagram::identity(n))
    }

    pub fn generator(n: usize, i: usize) -> Self {
        Self::from_diagram(TLDiagram::generator(n, i))
    }

    pub fn from_diagram(d: TLDiagram) -> Self {
        let mut e = Self::zero(d.n());
        e.terms.insert(d, QFrac::one());
        e
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TLDiagram, &QFrac)> {
        self.terms.iter()
    }

    pub fn coeff(&self, d: &TLDiagram) -> QFrac {
        self.terms.get(d).cloned().unwrap_or_else(QFrac::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, d: TLDiagram, c: &QFrac) {
        assert_eq!(d.n(), self.n);
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(d).or_insert_with(QFrac::zero);
        *slot = &*slot + c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn scale(&self, c: &QFrac) -> Self {
        let mut out = Self::zero(self.n);
        for (d, v) in &self.terms {
            out.add_term(d.clone(), &(v * c));
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (d, v) in &other.terms {
            out.add_term(d.clone(), v);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-&QFrac::one()))
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::StrandMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    /// `self · below`: `self` stacked on top of `below`, loops replaced by `δ`.
    pub fn compose(&self, below: &Self) -> Result<Self> {
        self.check(below)?;
        let delta = QFrac::from(loop_value());
        let mut powers = vec![QFrac::one()];
        let mut out = Self::zero(self.n);
        for (x, cx) in &self.terms {
            for (y, cy) in &below.terms {
                let (d, loops) = x.compose_unchecked(y);
                while powers.len() <= loops {
                    let next = powers.last().unwrap() * &delta;
                    powers.push(next);
                }
                out.add_term(d, &(&(cx * cy) * &powers[loops]));
            }
        }
        Ok(out)
    }

    /// Markov closure.
    pub fn trace(&self) -> QFrac {
        let delta = QFrac::from(loop_value());
        self.terms.iter().fold(QFrac::zero(), |acc, (d, c)| {
            let mut v = c.clone();
            for _ in 0..d.closure_loops() {
                v = &v * &delta;
            }
            &acc + &v
        })
    }

    pub fn mirror(&self) -> Self {
        let mut out = Self::zero(self.n);
        for (d, c) in &self.terms {
            out.add_term(d.mirror(), c);
        }
        out
    }

    pub fn embed(&self, m: usize) -> Self {
        let mut out = Self::zero(m);
        for (d, c) in &self.terms {
            out.add_term(d.embed(m), c);
        }
        out
    }

    /// Coefficients over a common quantum-integer denominator:
    /// `self = (1 / denominator) Σ numerator_d · d`.
    pub fn common_denominator(&self) -> (BTreeMap<u32, u32>, Vec<(TLDiagram, LaurentScalar)>) {
        let mut den = BTreeMap::new();
        for c in self.terms.values() {
            for (&m, &e) in c.denominator_factors() {
                let slot = den.entry(m).or_insert(0);
                *slot = (*slot).max(e);
            }
        }
        let lifted = self
            .terms
            .iter()
            .map(|(d, c)| {
                let scaled = c * &QFrac::new(crate::arith::den_poly(&den));
                let num = scaled.as_laurent().expect("common denominator clears every coefficient");
                (d.clone(), num)
            })
            .collect();
        (den, lifted)
    }
}

impl PartialEq for TLElement {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.terms.len() == other.terms.len()
            && self.terms.iter().all(|(d, c)| other.terms.get(d) == Some(c))
    }
}

impl fmt::Debug for TLElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (d, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c}) {d:?}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn delta() -> QFrac {
        QFrac::from(loop_value())
    }

    #[test]
    fn e1_squared() {
        let e1 = TLElement::generator(2, 1);
        assert_eq!(e1.compose(&e1).unwrap(), e1.scale(&delta()));
    }

    #[test]
    fn e1_e2_e1_is_e1() {
        let e1 = TLElement::generator(3, 1);
        let e2 = TLElement::generator(3, 2);
        assert_eq!(e1.compose(&e2).unwrap().compose(&e1).unwrap(), e1);
    }

    #[test]
    fn traces() {
        let d = loop_value();
        assert_eq!(TLElement::identity(2).trace(), QFrac::from(&d * &d));
        assert_eq!(TLElement::generator(2, 1).trace(), QFrac::from(d));
    }

    #[test]
    fn mismatch_is_an_error() {
        assert!(TLElement::identity(2).compose(&TLElement::identity(3)).is_err());
    }

    fn arb_element(n: usize) -> impl Strategy<Value = TLElement> {
        let diagrams = TLDiagram::enumerate(n);
        let k = diagrams.len();
        proptest::collection::vec((0..k, -3i128..=3, -6i32..=6), 0..5).prop_map(move |v| {
            let mut e = TLElement::zero(n);
            for (i, c, x) in v {
                e.add_term(diagrams[i].clone(), &QFrac::from(LaurentScalar::monomial(c, x)));
            }
            e
        })
    }

    proptest! {
        #[test]
        fn identity_law(x in arb_element(3)) {
            let one = TLElement::identity(3);
            prop_assert_eq!(one.compose(&x).unwrap(), x.clone());
            prop_assert_eq!(x.compose(&one).unwrap(), x);
        }

        #[test]
        fn associativity(x in arb_element(3), y in arb_element(3), z in arb_element(3)) {
            let l = x.compose(&y).unwrap().compose(&z).unwrap();
            let r = x.compose(&y.compose(&z).unwrap()).unwrap();
            prop_assert_eq!(l, r);
        }

        #[test]
        fn trace_is_cyclic(x in arb_element(3), y in arb_element(3)) {
            prop_assert_eq!(x.compose(&y).unwrap().trace(), y.compose(&x).unwrap().trace());
        }
    }
}
