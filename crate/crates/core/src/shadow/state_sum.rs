//! Admissible colorings and the state sum.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::{homology, PhaseSign, Region, Shadow};
use crate::arith::{eta, kappa, ComplexValue, RootContext};
use crate::error::{Error, Result};
use crate::recoupling::{delta_value, is_q_admissible, tet_value, theta_value, ColorTriple, TetLabels};
use crate::skein::half_twist_factor;

/// A color for every region, keyed by region id.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Coloring(pub BTreeMap<String, u32>);

impl Coloring {
    pub fn get(&self, region: &str) -> Option<u32> {
        self.0.get(region).copied()
    }
}

// Search plan: regions in id order, with the edge constraints that become
// checkable once each position is assigned.
#[derive(Debug, Clone)]
struct Plan {
    order: Vec<usize>,
    ids: Vec<String>,
    allowed: Vec<Vec<u32>>,
    checks: Vec<Vec<[usize; 3]>>,
    max: u32,
}

fn plan(ctx: &RootContext, s: &Shadow) -> Result<Plan> {
    s.check()?;
    let max = ctx.max_color();
    let order = s.region_order();
    let mut pos = vec![0usize; order.len()];
    for (p, &i) in order.iter().enumerate() {
        pos[i] = p;
    }
    let index = s.region_index();
    let mut allowed = Vec::with_capacity(order.len());
    for &i in &order {
        let r = &s.regions[i];
        allowed.push(match r.color {
            Some(c) if c > max => return Err(Error::ColorOutOfRange { color: c, max }),
            Some(c) => vec![c],
            None => (0..=max).collect(),
        });
    }
    let mut checks = vec![Vec::new(); order.len()];
    for e in &s.edges {
        let t = e.regions.clone().map(|id| pos[index[id.as_str()]]);
        let last = *t.iter().max().unwrap();
        checks[last].push(t);
    }
    let bcolor: BTreeMap<&str, u32> = s.boundary_edges.iter().map(|e| (e.id.as_str(), e.color)).collect();
    for v in &s.boundary_vertices {
        let c = v.edges.clone().map(|id| bcolor[id.as_str()]);
        if !is_q_admissible(ctx, ColorTriple::new(c[0], c[1], c[2])) {
            return Err(Error::InvalidShadow(vec![format!(
                "boundary vertex {:?} colors {c:?} are not q-admissible at r = {}",
                v.id,
                ctx.r()
            )]));
        }
    }
    let ids = order.iter().map(|&i| s.regions[i].id.clone()).collect();
    Ok(Plan {
        order,
        ids,
        allowed,
        checks,
        max,
    })
}

impl Plan {
    fn ok(&self, depth: usize, colors: &[u32]) -> bool {
        self.checks[depth].iter().all(|t| {
            let (a, b, c) = (colors[t[0]], colors[t[1]], colors[t[2]]);
            (a + b + c) % 2 == 0 && a <= b + c && b <= a + c && c <= a + b && a + b + c <= 2 * self.max
        })
    }

    // colors by region index
    fn by_index(&self, colors: &[u32]) -> Vec<u32> {
        let mut out = vec![0; colors.len()];
        for (p, &i) in self.order.iter().enumerate() {
            out[i] = colors[p];
        }
        out
    }

    fn coloring(&self, colors: &[u32]) -> Coloring {
        Coloring(self.ids.iter().cloned().zip(colors.iter().copied()).collect())
    }
}

/// Backtracking over regions in id order, pruning at each edge as soon as
/// its three regions are colored.
struct Raw<'p> {
    plan: &'p Plan,
    choice: Vec<usize>,
    colors: Vec<u32>,
    depth: usize,
    yielded: bool,
    done: bool,
}

impl<'p> Raw<'p> {
    fn new(plan: &'p Plan) -> Self {
        let n = plan.order.len();
        Raw {
            plan,
            choice: vec![0; n],
            colors: vec![0; n],
            depth: 0,
            yielded: false,
            done: false,
        }
    }
}

impl Iterator for Raw<'_> {
    // colors by enumeration position
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        if self.done {
            return None;
        }
        let n = self.plan.order.len();
        if self.yielded {
            self.yielded = false;
            if n == 0 {
                self.done = true;
                return None;
            }
            self.depth -= 1;
            self.choice[self.depth] += 1;
        }
        loop {
            if self.depth == n {
                self.yielded = true;
                return Some(self.colors.clone());
            }
            let d = self.depth;
            if self.choice[d] >= self.plan.allowed[d].len() {
                if d == 0 {
                    self.done = true;
                    return None;
                }
                self.choice[d] = 0;
                self.depth -= 1;
                self.choice[self.depth] += 1;
                continue;
            }
            self.colors[d] = self.plan.allowed[d][self.choice[d]];
            if self.plan.ok(d, &self.colors) {
                self.depth += 1;
            } else {
                self.choice[d] += 1;
            }
        }
    }
}

/// Iterator over the q-admissible colorings of a shadow.
pub struct Colorings {
    plan: Plan,
    raw: Vec<Vec<u32>>,
    next: usize,
}

impl Iterator for Colorings {
    type Item = Coloring;
    fn next(&mut self) -> Option<Coloring> {
        let c = self.raw.get(self.next)?;
        self.next += 1;
        Some(self.plan.coloring(c))
    }
}

/// All q-admissible colorings extending the fixed colors, in lexicographic
/// order of region ids.
pub fn enumerate_colorings(ctx: &RootContext, s: &Shadow) -> Result<Colorings> {
    let plan = plan(ctx, s)?;
    let raw = Raw::new(&plan).collect();
    Ok(Colorings { plan, raw, next: 0 })
}

/// Every assignment of colors `0..=r-2`, filtered afterwards: the reference
/// the pruned enumeration is tested against.
pub fn naive_colorings(ctx: &RootContext, s: &Shadow) -> Result<Vec<Coloring>> {
    s.check()?;
    let max = ctx.max_color();
    let order = s.region_order();
    let n = order.len();
    let total = (max as usize + 1).pow(n as u32);
    let mut out = Vec::new();
    for mut code in 0..total {
        let mut colors = vec![0u32; n];
        for p in (0..n).rev() {
            colors[p] = (code % (max as usize + 1)) as u32;
            code /= max as usize + 1;
        }
        let by_id: BTreeMap<String, u32> = order
            .iter()
            .enumerate()
            .map(|(p, &i)| (s.regions[i].id.clone(), colors[p]))
            .collect();
        let fixed_ok = s.regions.iter().all(|r| r.color.is_none_or(|c| by_id[&r.id] == c));
        let edges_ok = s.edges.iter().all(|e| {
            let c = e.regions.clone().map(|id| by_id[&id]);
            is_q_admissible(ctx, ColorTriple::new(c[0], c[1], c[2]))
        });
        if fixed_ok && edges_ok {
            out.push(Coloring(by_id));
        }
    }
    Ok(out)
}

/// Region phase for color `c`: the twist coefficient of `±gleam2` half twists.
pub fn phase(ctx: &RootContext, region: &Region, color: u32, sign: PhaseSign) -> ComplexValue {
    half_twist_factor(ctx, color, sign.factor() * region.gleam2 as i32).eval(ctx)
}

fn nonzero(v: Complex64, what: impl FnOnce() -> String) -> Result<Complex64> {
    if v.norm() < 1e-300 {
        Err(Error::DivisionByZero(what()))
    } else {
        Ok(v)
    }
}

// term with colors indexed like `s.regions`
fn term_by_index(ctx: &RootContext, s: &Shadow, colors: &[u32], sign: PhaseSign) -> Result<Complex64> {
    let index = s.region_index();
    let col = |id: &str| colors[index[id]];
    let mut v = Complex64::one();
    for (r, &c) in s.regions.iter().zip(colors) {
        v *= delta_value(ctx, c).powi(r.chi as i32) * phase(ctx, r, c, sign);
    }
    for vx in &s.vertices {
        let l = vx.tet.clone().map(|id| col(&id));
        v *= tet_value(ctx, TetLabels::from_array(l));
    }
    let bcolor: BTreeMap<&str, u32> = s.boundary_edges.iter().map(|e| (e.id.as_str(), e.color)).collect();
    for bv in &s.boundary_vertices {
        let c = bv.edges.clone().map(|id| bcolor[id.as_str()]);
        v *= theta_value(ctx, ColorTriple::new(c[0], c[1], c[2]));
    }
    for e in &s.edges {
        if e.chi != 0 {
            let c = e.regions.clone().map(|id| col(&id));
            let th = nonzero(theta_value(ctx, ColorTriple::new(c[0], c[1], c[2])), || {
                format!("θ{c:?} at edge {:?}", e.id)
            })?;
            v /= th.powi(e.chi as i32);
        }
    }
    for e in &s.boundary_edges {
        if e.chi != 0 {
            let d = nonzero(delta_value(ctx, e.color), || format!("Δ_{} at boundary edge {:?}", e.color, e.id))?;
            v /= d.powi(e.chi as i32);
        }
    }
    Ok(v)
}

/// `|X|_ξ`: the weight of one coloring.
pub fn state_sum_term(ctx: &RootContext, s: &Shadow, xi: &Coloring, sign: PhaseSign) -> Result<ComplexValue> {
    let colors = coloring_by_index(s, xi)?;
    term_by_index(ctx, s, &colors, sign)
}

fn coloring_by_index(s: &Shadow, xi: &Coloring) -> Result<Vec<u32>> {
    s.regions
        .iter()
        .map(|r| {
            xi.get(&r.id)
                .ok_or_else(|| Error::MissingData(format!("coloring has no color for region {:?}", r.id)))
        })
        .collect()
}

/// `|X|^r` and the number of colorings summed.
///
/// Colorings are split by the color of the first region; each part is summed
/// in enumeration order and the parts are combined in color order, so the
/// result does not depend on scheduling.
pub fn state_sum_stats(ctx: &RootContext, s: &Shadow, sign: PhaseSign) -> Result<(ComplexValue, usize)> {
    let plan = plan(ctx, s)?;
    if plan.order.is_empty() {
        return Ok((term_by_index(ctx, s, &[], sign)?, 1));
    }
    let parts: Vec<Result<(Complex64, usize)>> = plan.allowed[0]
        .par_iter()
        .map(|&c| {
            let mut sub = plan.clone();
            sub.allowed[0] = vec![c];
            let mut sum = Complex64::zero();
            let mut count = 0usize;
            for colors in Raw::new(&sub) {
                sum += term_by_index(ctx, s, &sub.by_index(&colors), sign)?;
                count += 1;
            }
            Ok((sum, count))
        })
        .collect();
    let mut total = Complex64::zero();
    let mut count = 0;
    for p in parts {
        let (v, n) = p?;
        total += v;
        count += n;
    }
    Ok((total, count))
}

/// `|X|^r = Σ_ξ |X|_ξ`.
pub fn state_sum(ctx: &RootContext, s: &Shadow, sign: PhaseSign) -> Result<ComplexValue> {
    Ok(state_sum_stats(ctx, s, sign)?.0)
}

/// `κ^{−σ} η^{χ(X)} |X|^r`.
///
/// `sigma` falls back to the shadow's stored value, then to the signature of
/// its intersection form.
pub fn invariant_from_shadow(ctx: &RootContext, s: &Shadow, sigma: Option<i64>, sign: PhaseSign) -> Result<ComplexValue> {
    Ok(evaluate_shadow(ctx, s, sigma, sign)?.value)
}

/// The invariant together with the data that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShadowEvaluation {
    pub value: ComplexValue,
    pub colorings: usize,
    pub sigma: i64,
}

/// [`invariant_from_shadow`] with its coloring count and the `σ` used.
pub fn evaluate_shadow(ctx: &RootContext, s: &Shadow, sigma: Option<i64>, sign: PhaseSign) -> Result<ShadowEvaluation> {
    let sigma = match sigma.or(s.sigma) {
        Some(x) => x,
        None => homology::signature(s)?,
    };
    let (sum, colorings) = state_sum_stats(ctx, s, sign)?;
    Ok(ShadowEvaluation {
        value: kappa(ctx).powi(-sigma as i32) * eta(ctx).powi(s.euler_characteristic() as i32) * sum,
        colorings,
        sigma,
    })
}

/// A state-sum term as a formal product: phase `s^phase` times powers of
/// `Δ`, `θ` and tetrahedra in canonical label form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TermSymbol {
    /// Exponent of `√A`, modulo `8r`.
    pub phase: u32,
    pub delta: BTreeMap<u32, i64>,
    pub theta: BTreeMap<[u32; 3], i64>,
    pub tet: BTreeMap<[u32; 6], i64>,
}

impl TermSymbol {
    pub fn eval(&self, ctx: &RootContext) -> ComplexValue {
        let mut v = ctx.s_pow(self.phase as i64);
        for (&c, &e) in &self.delta {
            v *= delta_value(ctx, c).powi(e as i32);
        }
        for (t, &e) in &self.theta {
            v *= theta_value(ctx, ColorTriple::new(t[0], t[1], t[2])).powi(e as i32);
        }
        for (l, &e) in &self.tet {
            v *= tet_value(ctx, TetLabels::from_array(*l)).powi(e as i32);
        }
        v
    }
}

fn bump<K: Ord>(m: &mut BTreeMap<K, i64>, k: K, e: i64) {
    if e == 0 {
        return;
    }
    let x = m.entry(k).or_insert(0);
    *x += e;
    if *x == 0 {
        m.retain(|_, v| *v != 0);
    }
}

fn canonical_tet(l: [u32; 6]) -> [u32; 6] {
    TetLabels::from_array(l)
        .symmetries()
        .into_iter()
        .map(|t| t.to_array())
        .min()
        .unwrap()
}

/// The formal product behind [`state_sum_term`].
pub fn term_symbol(ctx: &RootContext, s: &Shadow, xi: &Coloring, sign: PhaseSign) -> Result<TermSymbol> {
    let colors = coloring_by_index(s, xi)?;
    let index = s.region_index();
    let col = |id: &str| colors[index[id]];
    let order = 8 * ctx.r() as i64;
    let mut phase = 0i64;
    let mut sym = TermSymbol {
        phase: 0,
        delta: BTreeMap::new(),
        theta: BTreeMap::new(),
        tet: BTreeMap::new(),
    };
    for (r, &c) in s.regions.iter().zip(&colors) {
        bump(&mut sym.delta, c, r.chi);
        let p = half_twist_factor(ctx, c, sign.factor() * r.gleam2 as i32);
        let (e, k) = p.terms().next().expect("twist factor is a monomial");
        phase += e as i64 + if k < 0 { order / 2 } else { 0 };
    }
    sym.phase = phase.rem_euclid(order) as u32;
    for v in &s.vertices {
        bump(&mut sym.tet, canonical_tet(v.tet.clone().map(|id| col(&id))), 1);
    }
    let sorted = |mut t: [u32; 3]| {
        t.sort();
        t
    };
    let bcolor: BTreeMap<&str, u32> = s.boundary_edges.iter().map(|e| (e.id.as_str(), e.color)).collect();
    for v in &s.boundary_vertices {
        bump(&mut sym.theta, sorted(v.edges.clone().map(|id| bcolor[id.as_str()])), 1);
    }
    for e in &s.edges {
        bump(&mut sym.theta, sorted(e.regions.clone().map(|id| col(&id))), -e.chi);
    }
    for e in &s.boundary_edges {
        bump(&mut sym.delta, e.color, -e.chi);
    }
    Ok(sym)
}

/// Sorted multiset of all term symbols.
pub fn term_symbols(ctx: &RootContext, s: &Shadow, sign: PhaseSign) -> Result<Vec<TermSymbol>> {
    let mut out = enumerate_colorings(ctx, s)?
        .map(|xi| term_symbol(ctx, s, &xi, sign))
        .collect::<Result<Vec<_>>>()?;
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::{BoundaryEdge, InternalEdge, InternalVertex};
    use super::*;
    use crate::arith::approx_eq;
    use crate::recoupling::theta;
    use proptest::prelude::*;

    fn ctx(r: u32) -> RootContext {
        RootContext::new(r, 1).unwrap()
    }

    fn region(id: &str, gleam2: i64, chi: i64) -> Region {
        Region {
            id: id.into(),
            gleam2,
            chi,
            external: false,
            color: None,
            orientable: None,
        }
    }

    fn edge(id: &str, chi: i64, r: [&str; 3]) -> InternalEdge {
        InternalEdge {
            id: id.into(),
            chi,
            regions: r.map(String::from),
            signs: None,
            nonorientable: None,
        }
    }

    #[test]
    fn sphere_colorings() {
        let c = ctx(5);
        let all: Vec<_> = enumerate_colorings(&c, &Shadow::sphere(0)).unwrap().collect();
        assert_eq!(all.len(), 4);
        assert_eq!(all.iter().map(|x| x.get("R").unwrap()).collect::<Vec<_>>(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn self_adjacent_edge_colorings() {
        for r in 3..=8 {
            let c = ctx(r);
            let mut s = Shadow::surface(0, 0);
            s.edges.push(edge("e", 0, ["R", "R", "R"]));
            let got: Vec<u32> = enumerate_colorings(&c, &s).unwrap().map(|x| x.get("R").unwrap()).collect();
            let expect: Vec<u32> = (0..=c.max_color())
                .filter(|&x| is_q_admissible(&c, ColorTriple::new(x, x, x)))
                .collect();
            assert_eq!(got, expect);
        }
    }

    #[test]
    fn external_region_keeps_its_color() {
        let c = ctx(6);
        let mut s = Shadow::default();
        s.regions.push(Region {
            external: true,
            color: Some(2),
            ..region("X", 0, 1)
        });
        s.regions.push(region("Y", 0, 1));
        s.regions.push(region("Z", 0, 1));
        s.edges.push(edge("e", 0, ["X", "Y", "Z"]));
        s.boundary_edges.push(BoundaryEdge {
            id: "b".into(),
            chi: 0,
            region: "X".into(),
            color: 2,
        });
        let all: Vec<_> = enumerate_colorings(&c, &s).unwrap().collect();
        assert!(!all.is_empty());
        assert!(all.iter().all(|x| x.get("X") == Some(2)));
        assert_eq!(all, naive_colorings(&c, &s).unwrap());
    }

    #[test]
    fn empty_shadow_sums_to_one() {
        let c = ctx(5);
        let s = Shadow::default();
        assert_eq!(enumerate_colorings(&c, &s).unwrap().count(), 1);
        assert!(approx_eq(state_sum(&c, &s, PhaseSign::Plus).unwrap(), Complex64::one(), 1e-12));
    }

    #[test]
    fn sphere_terms() {
        for r in 3..=8 {
            let c = ctx(r);
            for n in -3..=3i64 {
                let s = Shadow::sphere(n);
                for a in 0..=c.max_color() {
                    let xi = Coloring([("R".to_string(), a)].into());
                    let sign = if (n * a as i64).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                    let expect = delta_value(&c, a).powi(2) * sign * c.s_pow(-2 * n * (a as i64) * (a as i64 + 2));
                    let got = state_sum_term(&c, &s, &xi, PhaseSign::Minus).unwrap();
                    assert!(approx_eq(got, expect, 1e-9), "r={r} n={n} a={a}");
                    let conj = delta_value(&c, a).powi(2) * sign * c.s_pow(2 * n * (a as i64) * (a as i64 + 2));
                    let got = state_sum_term(&c, &s, &xi, PhaseSign::Plus).unwrap();
                    assert!(approx_eq(got, conj, 1e-9), "r={r} n={n} a={a}");
                }
            }
        }
    }

    #[test]
    fn genus_terms() {
        let c = ctx(6);
        for g in 0..=3i64 {
            let s = Shadow::genus(g, 0);
            let sum = state_sum(&c, &s, PhaseSign::Plus).unwrap();
            let expect: Complex64 = (0..=c.max_color()).map(|a| delta_value(&c, a).powi(2 - 2 * g as i32)).sum();
            assert!(approx_eq(sum, expect, 1e-9));
        }
        // torus: each of the r-1 colorings contributes 1
        assert!(approx_eq(
            state_sum(&c, &Shadow::genus(1, 0), PhaseSign::Plus).unwrap(),
            Complex64::new(5.0, 0.0),
            1e-9
        ));
    }

    #[test]
    fn phase_examples() {
        let c = ctx(7);
        let r0 = region("R", 0, 2);
        let r1 = region("R", 2, 2);
        let rh = region("R", 1, 2);
        for col in 0..=5 {
            assert!(approx_eq(phase(&c, &r0, col, PhaseSign::Minus), Complex64::one(), 1e-12));
            let sign = if col % 2 == 0 { 1.0 } else { -1.0 };
            let e = -2 * (col as i64) * (col as i64 + 2);
            assert!(approx_eq(phase(&c, &r1, col, PhaseSign::Minus), sign * c.s_pow(e), 1e-12));
        }
        let expect = 1.0 / (c.sqrt_minus_one_value() * c.s_pow(3));
        assert!(approx_eq(phase(&c, &rh, 1, PhaseSign::Minus), expect, 1e-12));
    }

    #[test]
    fn all_zero_coloring_weighs_one() {
        let c = ctx(5);
        let s = random_shadow_fixture();
        let zero = Coloring(s.regions.iter().map(|r| (r.id.clone(), 0)).collect());
        assert!(approx_eq(state_sum_term(&c, &s, &zero, PhaseSign::Plus).unwrap(), Complex64::one(), 1e-12));
    }

    #[test]
    fn boundary_factors() {
        // a disk of color a contributes Δ_a; its boundary segment divides it out
        let c = ctx(6);
        for a in 0..=4u32 {
            let mut s = Shadow::surface(1, 0);
            s.regions[0].external = true;
            s.regions[0].color = Some(a);
            s.boundary_edges.push(BoundaryEdge {
                id: "b".into(),
                chi: 1,
                region: "R".into(),
                color: a,
            });
            let v = state_sum(&c, &s, PhaseSign::Plus).unwrap();
            assert!(approx_eq(v, Complex64::one(), 1e-9), "a={a}");
        }
    }

    #[test]
    fn symbols_evaluate_to_terms() {
        let c = ctx(5);
        let s = random_shadow_fixture();
        for sign in [PhaseSign::Plus, PhaseSign::Minus] {
            for xi in enumerate_colorings(&c, &s).unwrap() {
                let sym = term_symbol(&c, &s, &xi, sign).unwrap();
                let v = state_sum_term(&c, &s, &xi, sign).unwrap();
                assert!(approx_eq(sym.eval(&c), v, 1e-9 * v.norm().max(1.0)));
            }
        }
        // a tetrahedral vertex contributes tet / θ's of its edges
        assert!(!theta(&c, ColorTriple::new(1, 1, 2)).is_zero());
    }

    // one vertex, four edges, six regions
    fn random_shadow_fixture() -> Shadow {
        let mut s = Shadow::default();
        for (i, id) in ["a", "b", "c", "d", "e", "f"].iter().enumerate() {
            s.regions.push(region(id, 2 * (i as i64 % 3) - 2, 1));
        }
        s.vertices.push(InternalVertex {
            id: "v".into(),
            tet: ["a", "b", "c", "d", "e", "f"].map(String::from),
        });
        for (i, t) in [["a", "b", "c"], ["a", "e", "f"], ["b", "f", "d"], ["c", "e", "d"]].iter().enumerate() {
            s.edges.push(edge(&format!("e{i}"), 1, *t));
        }
        s
    }

    proptest! {
        #[test]
        fn partitioned_sum_matches_sequential(r in 3u32..=6, g in -2i64..=2) {
            let c = ctx(r);
            let mut s = random_shadow_fixture();
            s.regions[0].gleam2 = 2 * g;
            let seq: Complex64 = enumerate_colorings(&c, &s)
                .unwrap()
                .map(|xi| state_sum_term(&c, &s, &xi, PhaseSign::Plus).unwrap())
                .sum();
            let par = state_sum(&c, &s, PhaseSign::Plus).unwrap();
            prop_assert!(approx_eq(seq, par, 1e-9));
        }
    }
}
