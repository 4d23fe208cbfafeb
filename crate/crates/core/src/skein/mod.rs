//! Kauffman-bracket evaluation of colored framed diagrams: the brute-force
//! ground truth every closed-form quantity is checked against.

mod cable;
mod diagram;
mod network;
pub mod standard;

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::{One, Zero};
use rayon::prelude::*;

pub use diagram::{Boundary, Crossing, FramedGraphDiagram, Role, Strand, Vertex};

use crate::arith::{eta, loop_value, LaurentScalar, QFrac, RootContext};
use crate::error::{Error, Result};
use crate::tl::{TLDiagram, TLElement};
use cable::{cabled_crossings, compile, Exact, Numeric};
use diagram::Layout;

/// Size limits for brute-force evaluation; exceeding them is an error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleBudget {
    /// Elementary crossings after cabling.
    pub max_crossings: usize,
    /// Largest projector, and largest number of boundary points per side.
    pub max_strands: usize,
}

impl Default for OracleBudget {
    fn default() -> Self {
        Self {
            max_crossings: 24,
            max_strands: 14,
        }
    }
}

impl OracleBudget {
    pub fn with_crossings(max_crossings: usize) -> Self {
        Self {
            max_crossings,
            ..Self::default()
        }
    }
}

/// A tangle value: coefficients indexed by how the boundary points are joined.
///
/// Boundary points are numbered bottom west→east, then top west→east;
/// each key lists the partner of every point.
#[derive(Debug, Clone, PartialEq)]
pub struct Tangle<C> {
    pub bottom: usize,
    pub top: usize,
    pub terms: BTreeMap<Vec<u16>, C>,
}

impl Tangle<QFrac> {
    /// As an element of `TL_n` when both sides carry `n` points.
    pub fn to_tl(&self) -> Option<TLElement> {
        if self.bottom != self.top {
            return None;
        }
        let mut e = TLElement::zero(self.bottom);
        for (k, c) in &self.terms {
            let d = TLDiagram::new(self.bottom, k.clone()).ok()?;
            e.add_term(d, c);
        }
        Some(e)
    }

    pub fn eval(&self, ctx: &RootContext) -> Tangle<Complex64> {
        Tangle {
            bottom: self.bottom,
            top: self.top,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v.eval(ctx))).collect(),
        }
    }

    pub fn scale(&self, c: &QFrac) -> Self {
        Tangle {
            bottom: self.bottom,
            top: self.top,
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.clone(), v * c))
                .filter(|(_, v)| !v.is_zero())
                .collect(),
        }
    }

    /// The value of a closed diagram.
    pub fn scalar(&self) -> QFrac {
        self.terms.get(&Vec::new()).cloned().unwrap_or_else(QFrac::zero)
    }
}

impl Tangle<Complex64> {
    pub fn scale(&self, c: Complex64) -> Self {
        Tangle {
            bottom: self.bottom,
            top: self.top,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    pub fn scalar(&self) -> Complex64 {
        self.terms.get(&Vec::new()).copied().unwrap_or_default()
    }

    /// Largest coefficient difference over the union of keys.
    pub fn distance(&self, other: &Self) -> f64 {
        let mut worst = 0f64;
        for (k, v) in &self.terms {
            let w = other.terms.get(k).copied().unwrap_or_default();
            worst = worst.max((v - w).norm());
        }
        for (k, w) in &other.terms {
            if !self.terms.contains_key(k) {
                worst = worst.max(w.norm());
            }
        }
        worst
    }
}

/// Coefficient picked up by `framing2` positive half twists on a color-`c`
/// strand: `((√-1)^c A^{(c^2+2c)/2})^{framing2}`.
pub fn half_twist_factor(ctx: &RootContext, c: u32, framing2: i32) -> LaurentScalar {
    let c = c as i64;
    let f = framing2 as i64;
    let e = f * (c * c + 2 * c);
    // (√-1)^{c f}: an integer power of -1 times at most one √-1 = σ s^{2r}
    let cf = c * f;
    let mut out = LaurentScalar::monomial(if cf.div_euclid(2) % 2 == 0 { 1 } else { -1 }, e as i32);
    if cf.rem_euclid(2) == 1 {
        out = out.shift(2 * ctx.r() as i32).scale(ctx.sqrt_minus_one_sign() as i128);
    }
    out
}

fn check_colors(ctx: &RootContext, d: &FramedGraphDiagram, layout: &Layout, budget: &OracleBudget) -> Result<Vec<u32>> {
    let max = ctx.max_color();
    let mut colors = Vec::with_capacity(d.strands.len());
    for s in &d.strands {
        let c = match s.role {
            Role::Color => s.color.unwrap_or(0),
            Role::Omega => max,
        };
        if c > max {
            return Err(Error::ColorOutOfRange { color: c, max });
        }
        if c as usize > budget.max_strands {
            return Err(Error::BudgetExceeded(format!(
                "strand {} needs a {}-strand projector (limit {})",
                s.id, c, budget.max_strands
            )));
        }
        colors.push(c);
    }
    for v in &d.vertices {
        let cs: Vec<u32> = v.arcs.iter().map(|a| colors[layout.arc_strand[layout.arc_index[a]]]).collect();
        let t = crate::recoupling::ColorTriple::new(cs[0], cs[1], cs[2]);
        if !crate::recoupling::is_admissible(t) {
            return Err(Error::InvalidDiagram(format!("vertex {} is not admissible", v.id)));
        }
    }
    let cabled = cabled_crossings(d, layout, &colors);
    if cabled > budget.max_crossings {
        return Err(Error::BudgetExceeded(format!(
            "{cabled} cabled crossings exceed the limit of {}",
            budget.max_crossings
        )));
    }
    if let Some(b) = &d.boundary {
        for side in [&b.bottom, &b.top] {
            let n: usize = side.iter().map(|a| colors[layout.arc_strand[layout.arc_index[a]]] as usize).sum();
            if n > budget.max_strands {
                return Err(Error::BudgetExceeded(format!(
                    "{n} boundary points on one side exceed the limit of {}",
                    budget.max_strands
                )));
            }
        }
    }
    Ok(colors)
}

fn framing_factor(ctx: &RootContext, d: &FramedGraphDiagram, colors: &[u32]) -> LaurentScalar {
    d.strands
        .iter()
        .zip(colors)
        .fold(LaurentScalar::one(), |acc, (s, &c)| &acc * &half_twist_factor(ctx, c, s.framing2))
}

fn require_colored(d: &FramedGraphDiagram) -> Result<()> {
    if let Some(s) = d.strands.iter().find(|s| s.role == Role::Omega) {
        return Err(Error::InvalidDiagram(format!(
            "strand {} is Ω-colored; use the numeric evaluation",
            s.id
        )));
    }
    Ok(())
}

/// Exact tangle value of a diagram whose strands all carry colors.
pub fn evaluate_tangle(ctx: &RootContext, d: &FramedGraphDiagram, budget: &OracleBudget) -> Result<Tangle<QFrac>> {
    require_colored(d)?;
    let layout = d.layout()?;
    let colors = check_colors(ctx, d, &layout, budget)?;
    let compiled = compile(d, &layout, &colors, &Exact);
    let raw = compiled.net.contract(&loop_value());
    let frame = framing_factor(ctx, d, &colors);
    let mut terms = BTreeMap::new();
    for (k, v) in raw {
        let mut q = QFrac::new(&v * &frame);
        for (&m, &e) in &compiled.den {
            for _ in 0..e {
                q = &q * &QFrac::inv_quantum(m);
            }
        }
        if !q.is_zero() {
            terms.insert(k, q);
        }
    }
    Ok(Tangle {
        bottom: compiled.bottom,
        top: compiled.top,
        terms,
    })
}

/// Exact Kauffman bracket of a closed colored diagram, framing corrections included.
pub fn bracket(ctx: &RootContext, d: &FramedGraphDiagram) -> Result<QFrac> {
    bracket_with_budget(ctx, d, &OracleBudget::default())
}

pub fn bracket_with_budget(ctx: &RootContext, d: &FramedGraphDiagram, budget: &OracleBudget) -> Result<QFrac> {
    if d.boundary.as_ref().is_some_and(|b| !b.bottom.is_empty() || !b.top.is_empty()) {
        return Err(Error::InvalidDiagram("bracket needs a closed diagram".into()));
    }
    Ok(evaluate_tangle(ctx, d, budget)?.scalar())
}

fn numeric_colored(ctx: &RootContext, d: &FramedGraphDiagram, layout: &Layout, colors: &[u32]) -> Tangle<Complex64> {
    let compiled = compile(d, layout, colors, &Numeric(ctx));
    let raw = compiled.net.contract(&loop_value().eval(ctx));
    let frame = framing_factor(ctx, d, colors).eval(ctx);
    Tangle {
        bottom: compiled.bottom,
        top: compiled.top,
        terms: raw.into_iter().map(|(k, v)| (k, v * frame)).collect(),
    }
}

/// Numeric tangle value; each Ω strand is expanded as `η Σ_n Δ_n ·`(color `n`).
pub fn evaluate_tangle_numeric(
    ctx: &RootContext,
    d: &FramedGraphDiagram,
    budget: &OracleBudget,
) -> Result<Tangle<Complex64>> {
    let layout = d.layout()?;
    // budget is checked against the largest Ω color
    let base = check_colors(ctx, d, &layout, budget)?;
    let omega: Vec<usize> = d
        .strands
        .iter()
        .enumerate()
        .filter(|(_, s)| s.role == Role::Omega)
        .map(|(i, _)| i)
        .collect();
    let ncol = ctx.max_color() as usize + 1;
    let total = ncol.pow(omega.len() as u32);
    let e = eta(ctx);
    let deltas: Vec<Complex64> = (0..ncol as u32).map(|n| crate::recoupling::delta_value(ctx, n)).collect();
    let parts: Vec<Tangle<Complex64>> = (0..total)
        .into_par_iter()
        .map(|idx| {
            let mut colors = base.clone();
            let mut weight = Complex64::one();
            let mut rest = idx;
            for &si in &omega {
                let n = rest % ncol;
                rest /= ncol;
                colors[si] = n as u32;
                weight *= e * deltas[n];
            }
            numeric_colored(ctx, d, &layout, &colors).scale(weight)
        })
        .collect();
    let mut out = Tangle {
        bottom: parts.first().map_or(0, |t| t.bottom),
        top: parts.first().map_or(0, |t| t.top),
        terms: BTreeMap::new(),
    };
    for p in parts {
        for (k, v) in p.terms {
            *out.terms.entry(k).or_default() += v;
        }
    }
    Ok(out)
}

/// Numeric bracket of a closed diagram, with Ω strands expanded.
pub fn bracket_numeric(ctx: &RootContext, d: &FramedGraphDiagram, budget: &OracleBudget) -> Result<Complex64> {
    Ok(evaluate_tangle_numeric(ctx, d, budget)?.scalar())
}
