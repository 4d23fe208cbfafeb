//! Closed quantities of colored networks: `Δ`, `θ`, tetrahedra, 6j-symbols,
//! twist and fusion coefficients.
//!
//! `θ` and the tetrahedron use the Kauffman–Lins factorial formulas as a fast
//! path; the skein evaluator in [`crate::skein`] is the reference they are
//! tested against.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::arith::{eta, quantum_integer, ComplexValue, LaurentScalar, QFrac, RootContext, RootKey};
use crate::error::{Error, Result};
use crate::skein::{self, standard, OracleBudget};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColorTriple {
    pub a: u32,
    pub b: u32,
    pub c: u32,
}

impl ColorTriple {
    pub fn new(a: u32, b: u32, c: u32) -> Self {
        Self { a, b, c }
    }

    /// Number of bands between each pair of legs: `(ab, bc, ca)`.
    pub fn bands(&self) -> (u32, u32, u32) {
        let (a, b, c) = (self.a, self.b, self.c);
        ((a + b - c) / 2, (b + c - a) / 2, (c + a - b) / 2)
    }
}

pub fn is_admissible(t: ColorTriple) -> bool {
    let ColorTriple { a, b, c } = t;
    a <= b + c && b <= a + c && c <= a + b && (a + b + c) % 2 == 0
}

pub fn is_q_admissible(ctx: &RootContext, t: ColorTriple) -> bool {
    is_admissible(t) && t.a + t.b + t.c <= 2 * ctx.max_color()
}

/// Edge labels of the tetrahedral graph with vertex triples
/// `(a,b,c)`, `(a,e,f)`, `(b,f,d)`, `(c,e,d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TetLabels {
    pub a: u32,
    pub b: u32,
    pub c: u32,
    pub d: u32,
    pub e: u32,
    pub f: u32,
}

impl TetLabels {
    pub fn new(a: u32, b: u32, c: u32, d: u32, e: u32, f: u32) -> Self {
        Self { a, b, c, d, e, f }
    }

    pub fn from_array(l: [u32; 6]) -> Self {
        Self::new(l[0], l[1], l[2], l[3], l[4], l[5])
    }

    pub fn to_array(&self) -> [u32; 6] {
        [self.a, self.b, self.c, self.d, self.e, self.f]
    }

    pub fn triples(&self) -> [ColorTriple; 4] {
        let Self { a, b, c, d, e, f } = *self;
        [
            ColorTriple::new(a, b, c),
            ColorTriple::new(a, e, f),
            ColorTriple::new(b, f, d),
            ColorTriple::new(c, e, d),
        ]
    }

    /// The 24 relabelings induced by permuting the four vertices.
    pub fn symmetries(&self) -> Vec<TetLabels> {
        // vertices 0..4; edge between vertices (i, j)
        let l = self.to_array();
        // vertex triples in label-index form
        let tri = [[0, 1, 2], [0, 4, 5], [1, 5, 3], [2, 4, 3]];
        let mut edge = [[usize::MAX; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    let shared = tri[i].iter().find(|x| tri[j].contains(x)).unwrap();
                    edge[i][j] = *shared;
                }
            }
        }
        let mut out = Vec::with_capacity(24);
        let mut perm = [0usize, 1, 2, 3];
        permutations(&mut perm, 0, &mut |p| {
            let mut m = [0u32; 6];
            for i in 0..4 {
                for j in 0..4 {
                    if i != j {
                        m[edge[i][j]] = l[edge[p[i]][p[j]]];
                    }
                }
            }
            out.push(TetLabels::from_array(m));
        });
        out
    }
}

fn permutations(p: &mut [usize; 4], k: usize, f: &mut dyn FnMut(&[usize; 4])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permutations(p, k + 1, f);
        p.swap(k, i);
    }
}

/// `Δ_n = (-1)^n [n+1]`, the closure of the `n`-th projector.
pub fn delta(ctx: &RootContext, n: u32) -> Result<LaurentScalar> {
    if n + 1 > ctx.r() {
        return Err(Error::ColorOutOfRange {
            color: n,
            max: ctx.r() - 1,
        });
    }
    Ok(delta_poly(n))
}

fn delta_poly(n: u32) -> LaurentScalar {
    quantum_integer(n + 1).scale(if n.is_multiple_of(2) { 1 } else { -1 })
}

/// Numeric `Δ_n`; `n` is not range-checked.
pub fn delta_value(ctx: &RootContext, n: u32) -> ComplexValue {
    delta_poly(n).eval(ctx)
}

// [n]! as a fraction numerator or denominator
fn fact_num(n: u32) -> QFrac {
    (1..=n).fold(QFrac::one(), |acc, k| &acc * &QFrac::new(quantum_integer(k)))
}

fn fact_inv(n: u32) -> QFrac {
    (1..=n).fold(QFrac::one(), |acc, k| &acc * &QFrac::inv_quantum(k))
}

fn signed(q: QFrac, odd: bool) -> QFrac {
    if odd {
        -&q
    } else {
        q
    }
}

type Memo<K, V> = OnceLock<RwLock<HashMap<K, V>>>;

fn memo<K: std::hash::Hash + Eq + Clone, V: Clone>(cell: &'static Memo<K, V>, key: K, f: impl FnOnce() -> V) -> V {
    let map = cell.get_or_init(Default::default);
    if let Some(v) = map.read().unwrap().get(&key) {
        return v.clone();
    }
    let v = f();
    // concurrent writers store the same value
    map.write().unwrap().entry(key).or_insert(v).clone()
}

fn theta_formula(t: ColorTriple) -> QFrac {
    let (m, n, p) = t.bands();
    let num = &(&(&fact_num(m + n + p + 1) * &fact_num(m)) * &fact_num(n)) * &fact_num(p);
    let den = &(&fact_inv(m + n) * &fact_inv(n + p)) * &fact_inv(m + p);
    signed(&num * &den, (m + n + p) % 2 == 1)
}

/// `θ(a,b,c)`; zero unless the triple is q-admissible.
pub fn theta(ctx: &RootContext, t: ColorTriple) -> QFrac {
    static CACHE: Memo<(RootKey, ColorTriple), QFrac> = OnceLock::new();
    if !is_q_admissible(ctx, t) {
        return QFrac::zero();
    }
    memo(&CACHE, (ctx.key(), t), || theta_formula(t))
}

fn tet_formula(l: TetLabels) -> QFrac {
    let TetLabels { a, b, c, d, e, f } = l;
    let av = [(a + b + c) / 2, (a + e + f) / 2, (b + f + d) / 2, (c + e + d) / 2];
    let bv = [(a + d + b + e) / 2, (a + d + c + f) / 2, (b + e + c + f) / 2];
    let lo = *av.iter().max().unwrap();
    let hi = *bv.iter().min().unwrap();
    let mut prefactor = QFrac::one();
    for &bj in &bv {
        for &ai in &av {
            prefactor = &prefactor * &fact_num(bj - ai);
        }
    }
    for x in [a, b, c, d, e, f] {
        prefactor = &prefactor * &fact_inv(x);
    }
    let mut sum = QFrac::zero();
    for s in lo..=hi {
        let mut term = fact_num(s + 1);
        for &ai in &av {
            term = &term * &fact_inv(s - ai);
        }
        for &bj in &bv {
            term = &term * &fact_inv(bj - s);
        }
        sum = &sum + &signed(term, s % 2 == 1);
    }
    &prefactor * &sum
}

/// Tetrahedral network value; zero unless every vertex is q-admissible.
pub fn tet(ctx: &RootContext, l: TetLabels) -> QFrac {
    static CACHE: Memo<(RootKey, TetLabels), QFrac> = OnceLock::new();
    if !l.triples().iter().all(|&t| is_q_admissible(ctx, t)) {
        return QFrac::zero();
    }
    memo(&CACHE, (ctx.key(), l), || tet_formula(l))
}

/// Numeric `θ`, memoized per root.
pub fn theta_value(ctx: &RootContext, t: ColorTriple) -> ComplexValue {
    static CACHE: Memo<(RootKey, ColorTriple), ComplexValue> = OnceLock::new();
    memo(&CACHE, (ctx.key(), t), || theta(ctx, t).eval(ctx))
}

/// Numeric tetrahedron, memoized per root.
pub fn tet_value(ctx: &RootContext, l: TetLabels) -> ComplexValue {
    static CACHE: Memo<(RootKey, TetLabels), ComplexValue> = OnceLock::new();
    memo(&CACHE, (ctx.key(), l), || tet(ctx, l).eval(ctx))
}

/// `θ` evaluated from scratch by the skein evaluator.
pub fn theta_oracle(ctx: &RootContext, t: ColorTriple) -> Result<QFrac> {
    if !is_q_admissible(ctx, t) {
        return Ok(QFrac::zero());
    }
    skein::bracket_with_budget(ctx, &standard::theta_graph(t.a, t.b, t.c), &OracleBudget::default())
}

/// Tetrahedron evaluated from scratch by the skein evaluator.
pub fn tet_oracle(ctx: &RootContext, l: TetLabels) -> Result<QFrac> {
    if !l.triples().iter().all(|&t| is_q_admissible(ctx, t)) {
        return Ok(QFrac::zero());
    }
    skein::bracket_with_budget(ctx, &standard::tet_graph(l.to_array()), &OracleBudget::default())
}

/// 6j-symbol `{a b i; c d j} = Δ_i · tet / (θ(a,d,i) θ(c,b,i))`.
///
/// Zero when one of the four triples is not q-admissible.
pub fn sixj(ctx: &RootContext, a: u32, b: u32, c: u32, d: u32, i: u32, j: u32) -> Result<ComplexValue> {
    let l = sixj_labels(a, b, c, d, i, j);
    if !l.triples().iter().all(|&t| is_q_admissible(ctx, t)) {
        return Ok(Complex64::zero());
    }
    let t1 = theta_value(ctx, ColorTriple::new(a, d, i));
    let t2 = theta_value(ctx, ColorTriple::new(c, b, i));
    let den = t1 * t2;
    if den.norm() < 1e-300 {
        return Err(Error::Indeterminate(format!("6j symbol {{{a} {b} {i}; {c} {d} {j}}} has a vanishing θ")));
    }
    Ok(delta_value(ctx, i) * tet_value(ctx, l) / den)
}

/// Tetrahedron labels appearing in the 6j-symbol `{a b i; c d j}`.
pub fn sixj_labels(a: u32, b: u32, c: u32, d: u32, i: u32, j: u32) -> TetLabels {
    TetLabels::new(a, b, j, c, d, i)
}

/// Coefficient for `k2` positive half twists on a color-`n` edge:
/// `((√-1)^n A^{(n^2+2n)/2})^{k2}`.
pub fn half_twist_coeff(ctx: &RootContext, n: u32, k2: i32) -> Result<LaurentScalar> {
    if n > ctx.max_color() {
        return Err(Error::ColorOutOfRange {
            color: n,
            max: ctx.max_color(),
        });
    }
    Ok(skein::half_twist_factor(ctx, n, k2))
}

/// Ω-colored unknot with integer framing.
pub fn omega_unknot(ctx: &RootContext, framing: i32) -> ComplexValue {
    let sum: ComplexValue = (0..=ctx.max_color())
        .map(|n| {
            let d = delta_value(ctx, n);
            d * d * skein::half_twist_factor(ctx, n, 2 * framing).eval(ctx)
        })
        .sum();
    eta(ctx) * sum
}

/// Two-strand fusion coefficient: `η^{-1}/Δ_a` if `a = b`, else 0.
pub fn fusion2_coeff(ctx: &RootContext, a: u32, b: u32) -> Result<ComplexValue> {
    if a != b {
        return Ok(Complex64::zero());
    }
    let d = delta_value(ctx, a);
    if d.norm() < 1e-12 {
        return Err(Error::DivisionByZero(format!("Δ_{a} vanishes")));
    }
    Ok(1.0 / (eta(ctx) * d))
}

/// Three-strand fusion coefficient: `η^{-1}/θ(a,b,c)` if q-admissible, else 0.
pub fn fusion3_coeff(ctx: &RootContext, t: ColorTriple) -> Result<ComplexValue> {
    if !is_q_admissible(ctx, t) {
        return Ok(Complex64::zero());
    }
    let th = theta_value(ctx, t);
    if th.norm() < 1e-12 {
        return Err(Error::DivisionByZero(format!("θ{:?} vanishes", (t.a, t.b, t.c))));
    }
    Ok(1.0 / (eta(ctx) * th))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{approx_eq, kappa, loop_value};
    use crate::tl::{jones_wenzl, tl_trace};

    fn ctx(r: u32) -> RootContext {
        RootContext::new(r, 1).unwrap()
    }

    #[test]
    fn admissibility() {
        let c = ctx(4);
        assert!(is_q_admissible(&ctx(3), ColorTriple::new(0, 0, 0)));
        assert!(!is_admissible(ColorTriple::new(1, 1, 1)));
        assert!(is_admissible(ColorTriple::new(2, 2, 2)));
        assert!(!is_q_admissible(&c, ColorTriple::new(2, 2, 2)));
        assert!(!is_admissible(ColorTriple::new(1, 1, 4)));
    }

    #[test]
    fn delta_values() {
        let c = ctx(5);
        assert_eq!(delta(&c, 0).unwrap(), LaurentScalar::one());
        assert_eq!(delta(&c, 1).unwrap(), loop_value());
        assert!(delta_value(&c, 4).norm() < 1e-12);
        assert!(delta(&c, 5).is_err());
        // the closed form with the shifted sine
        for n in 0..4u32 {
            let pi = std::f64::consts::PI;
            let expect = (if n % 2 == 0 { 1.0 } else { -1.0 }) * ((n + 1) as f64 * pi / 5.0).sin() / (pi / 5.0).sin();
            assert!(approx_eq(delta_value(&c, n), Complex64::new(expect, 0.0), 1e-12));
        }
    }

    #[test]
    fn delta_is_trace_of_projector() {
        for r in 3..=9u32 {
            let c = ctx(r);
            for n in 0..=(r - 1).min(6) {
                let t = tl_trace(&jones_wenzl(&c, n as usize).unwrap());
                assert_eq!(t, QFrac::new(delta(&c, n).unwrap()), "r={r} n={n}");
            }
        }
    }

    #[test]
    fn theta_matches_oracle() {
        let c = ctx(7);
        for a in 0..=5 {
            for b in 0..=5 {
                for cc in 0..=5 {
                    let t = ColorTriple::new(a, b, cc);
                    if a + b + cc > 10 {
                        continue;
                    }
                    assert_eq!(theta(&c, t), theta_oracle(&c, t).unwrap(), "{t:?}");
                }
            }
        }
        assert_eq!(theta(&c, ColorTriple::new(0, 0, 0)), QFrac::one());
    }

    #[test]
    fn tet_matches_oracle_small() {
        let c = ctx(5);
        let mut checked = 0;
        for l in all_labels(3) {
            let l = TetLabels::from_array(l);
            if l.triples().iter().all(|&t| is_q_admissible(&c, t)) {
                assert_eq!(tet(&c, l), tet_oracle(&c, l).unwrap(), "{l:?}");
                checked += 1;
            }
        }
        assert!(checked > 20);
    }

    fn all_labels(max: u32) -> impl Iterator<Item = [u32; 6]> {
        let n = max + 1;
        (0..n.pow(6)).map(move |mut i| {
            let mut l = [0u32; 6];
            for x in l.iter_mut() {
                *x = i % n;
                i /= n;
            }
            l
        })
    }

    #[test]
    fn tet_degenerates_to_theta() {
        let c = ctx(7);
        for (a, b, cc) in [(1, 1, 2), (2, 2, 2), (2, 3, 1), (3, 3, 2)] {
            let l = TetLabels::new(a, b, cc, b, a, 0);
            assert_eq!(tet(&c, l), theta(&c, ColorTriple::new(a, b, cc)));
        }
    }

    #[test]
    fn tet_symmetries() {
        let c = ctx(7);
        let l = TetLabels::new(2, 2, 2, 2, 2, 2);
        assert_eq!(l.symmetries().len(), 24);
        let l = TetLabels::new(1, 2, 3, 2, 1, 2);
        let v = tet(&c, l);
        assert!(!v.is_zero());
        for s in l.symmetries() {
            assert_eq!(tet(&c, s), v, "{s:?}");
        }
    }

    #[test]
    fn sixj_trivial_recoupling() {
        let c = ctx(7);
        for (a, cc, d) in [(1, 1, 2), (2, 1, 1), (2, 2, 2), (3, 2, 1)] {
            let v = sixj(&c, a, 0, cc, d, cc, a).unwrap();
            assert!(approx_eq(v, Complex64::one(), 1e-9), "{a} {cc} {d}: {v}");
        }
        assert_eq!(sixj(&c, 1, 1, 1, 1, 1, 1).unwrap(), Complex64::zero());
    }

    #[test]
    fn twist_coefficients() {
        let c = ctx(7);
        let i = c.sqrt_minus_one_value();
        let h = half_twist_coeff(&c, 1, 1).unwrap().eval(&c);
        assert!(approx_eq(h, i * c.s_pow(3), 1e-12));
        assert_eq!(half_twist_coeff(&c, 3, 0).unwrap(), LaurentScalar::one());
        assert_eq!(half_twist_coeff(&c, 2, 2).unwrap(), LaurentScalar::a_pow(8));
        assert!(half_twist_coeff(&c, 6, 1).is_err());
    }

    #[test]
    fn omega_unknots() {
        for r in 3..=9 {
            let c = ctx(r);
            let e = eta(&c);
            assert!(approx_eq(omega_unknot(&c, 0), 1.0 / e, 1e-9));
            assert!(approx_eq(omega_unknot(&c, 1), kappa(&c), 1e-9));
            assert!(approx_eq(omega_unknot(&c, -1), 1.0 / kappa(&c), 1e-9));
        }
    }

    #[test]
    fn fusion_coefficients() {
        let c = ctx(5);
        assert!(approx_eq(fusion2_coeff(&c, 0, 0).unwrap(), 1.0 / eta(&c), 1e-12));
        assert_eq!(fusion2_coeff(&c, 1, 2).unwrap(), Complex64::zero());
        assert_eq!(fusion3_coeff(&c, ColorTriple::new(3, 3, 2)).unwrap(), Complex64::zero());
        assert_eq!(fusion3_coeff(&c, ColorTriple::new(1, 1, 1)).unwrap(), Complex64::zero());
    }
}
