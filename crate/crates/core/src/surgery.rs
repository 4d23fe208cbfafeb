//! Invariants from framed-link surgery presentations: `I_r(M) = η κ^{−σ(L)} Ω L`.
//!
//! Links are either closed-form families or diagrams; in a diagram the
//! Ω-role strands form the surgery link and colored strands (with any
//! trivalent vertices) form the embedded graph.

use num_complex::Complex64;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::arith::{eta, kappa, ComplexValue, QFrac, RootContext};
use crate::error::{Error, Result};
use crate::linalg;
use crate::recoupling::{is_q_admissible, omega_unknot, ColorTriple};
use crate::skein::{bracket_numeric, bracket_with_budget, half_twist_factor, FramedGraphDiagram, OracleBudget, Role};

pub use crate::linalg::signature;

#[derive(Debug, Clone, PartialEq)]
pub enum FramedLink {
    /// No components: `S³`.
    Empty,
    /// Split unknots with the given integer framings.
    Unlink(Vec<i64>),
    /// One unknot with framing `n`: the lens space `L(n, 1)`.
    Unknot(i64),
    Diagram(FramedGraphDiagram),
}

// on-disk form: either a `family` with its parameters or a `diagram`
#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LinkFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    family: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    g: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    framings: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    diagram: Option<FramedGraphDiagram>,
}

impl FramedLink {
    pub fn from_json(text: &str) -> Result<Self> {
        let f: LinkFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let extra = |what: &str| Error::Parse(format!("unexpected key `{what}` for this link"));
        match (f.family.as_deref(), f.diagram) {
            (None, Some(d)) => {
                if f.n.is_some() {
                    return Err(extra("n"));
                }
                if f.g.is_some() {
                    return Err(extra("g"));
                }
                if f.framings.is_some() {
                    return Err(extra("framings"));
                }
                Ok(FramedLink::Diagram(d))
            }
            (Some(_), Some(_)) => Err(Error::Parse("give either `family` or `diagram`, not both".into())),
            (None, None) => Err(Error::Parse("missing `family` or `diagram`".into())),
            (Some("empty"), None) => {
                if f.n.is_some() {
                    return Err(extra("n"));
                }
                if f.g.is_some() {
                    return Err(extra("g"));
                }
                if f.framings.is_some() {
                    return Err(extra("framings"));
                }
                Ok(FramedLink::Empty)
            }
            (Some("unknot"), None) => {
                if f.g.is_some() {
                    return Err(extra("g"));
                }
                if f.framings.is_some() {
                    return Err(extra("framings"));
                }
                Ok(FramedLink::Unknot(
                    f.n.ok_or_else(|| Error::Parse("unknot needs `n`".into()))?,
                ))
            }
            (Some("unlink"), None) => {
                if f.n.is_some() {
                    return Err(extra("n"));
                }
                let framings = match (f.g, f.framings) {
                    (Some(g), None) => vec![0; g],
                    (None, Some(fr)) => fr,
                    (Some(g), Some(fr)) if fr.len() == g => fr,
                    (Some(g), Some(fr)) => {
                        return Err(Error::Parse(format!("unlink has g = {g} but {} framings", fr.len())))
                    }
                    (None, None) => return Err(Error::Parse("unlink needs `g` or `framings`".into())),
                };
                Ok(FramedLink::Unlink(framings))
            }
            (Some(other), None) => Err(Error::Parse(format!(
                "unknown family {other:?} (expected empty, unknot or unlink)"
            ))),
        }
    }

    pub fn to_json(&self) -> String {
        let f = match self {
            FramedLink::Empty => LinkFile {
                family: Some("empty".into()),
                ..Default::default()
            },
            FramedLink::Unlink(fr) => LinkFile {
                family: Some("unlink".into()),
                framings: Some(fr.clone()),
                ..Default::default()
            },
            FramedLink::Unknot(n) => LinkFile {
                family: Some("unknot".into()),
                n: Some(*n),
                ..Default::default()
            },
            FramedLink::Diagram(d) => LinkFile {
                diagram: Some(d.clone()),
                ..Default::default()
            },
        };
        serde_json::to_string_pretty(&f).expect("link serializes")
    }

    /// Ids of the surgery components of a diagram.
    fn surgery_strands(d: &FramedGraphDiagram) -> Vec<&str> {
        d.strands
            .iter()
            .filter(|s| s.role == Role::Omega)
            .map(|s| s.id.as_str())
            .collect()
    }
}

/// Framings on the diagonal, linking numbers off it.
pub fn linking_matrix(l: &FramedLink) -> Result<Vec<Vec<i64>>> {
    match l {
        FramedLink::Empty => Ok(Vec::new()),
        FramedLink::Unknot(n) => Ok(vec![vec![*n]]),
        FramedLink::Unlink(fr) => Ok((0..fr.len())
            .map(|i| (0..fr.len()).map(|j| if i == j { fr[i] } else { 0 }).collect())
            .collect()),
        FramedLink::Diagram(d) => {
            d.layout()?;
            let ids = FramedLink::surgery_strands(d);
            let mut m = vec![vec![0i64; ids.len()]; ids.len()];
            for (i, a) in ids.iter().enumerate() {
                let s = d.strand(a).expect("strand exists");
                if s.framing2 % 2 != 0 {
                    return Err(Error::InvalidDiagram(format!(
                        "surgery component {a} has a half-integer framing"
                    )));
                }
                m[i][i] = d.self_writhe(a)? + s.framing2 as i64 / 2;
                for (j, b) in ids.iter().enumerate().skip(i + 1) {
                    let lk = d.linking_number(a, b)?;
                    m[i][j] = lk;
                    m[j][i] = lk;
                }
            }
            Ok(m)
        }
    }
}

/// `σ(L)`; for diagrams the result is checked against every single
/// component reversal, which must leave it unchanged.
pub fn link_signature(l: &FramedLink) -> Result<i64> {
    let sigma = linalg::signature(&linking_matrix(l)?);
    if let FramedLink::Diagram(d) = l {
        for id in FramedLink::surgery_strands(d) {
            let flipped = FramedLink::Diagram(d.reversed(id)?);
            let other = linalg::signature(&linking_matrix(&flipped)?);
            if other != sigma {
                return Err(Error::Indeterminate(format!(
                    "signature changed from {sigma} to {other} after reversing {id}"
                )));
            }
        }
    }
    Ok(sigma)
}

/// `Ω L`: every surgery component carries Ω.
pub fn omega_evaluation(ctx: &RootContext, l: &FramedLink, budget: &OracleBudget) -> Result<ComplexValue> {
    match l {
        FramedLink::Empty => Ok(Complex64::one()),
        FramedLink::Unknot(n) => Ok(omega_unknot(ctx, framing_i32(*n)?)),
        FramedLink::Unlink(fr) => fr
            .iter()
            .try_fold(Complex64::one(), |acc, &f| Ok(acc * omega_unknot(ctx, framing_i32(f)?))),
        FramedLink::Diagram(d) => bracket_numeric(ctx, d, budget),
    }
}

fn framing_i32(n: i64) -> Result<i32> {
    i32::try_from(n)
        .ok()
        .filter(|x| x.unsigned_abs() < 1 << 20)
        .ok_or_else(|| Error::InvalidDiagram(format!("framing {n} is out of range")))
}

/// `I_r(M) = η κ^{−σ(L)} Ω L`.
pub fn invariant_from_surgery(ctx: &RootContext, l: &FramedLink, budget: &OracleBudget) -> Result<ComplexValue> {
    let sigma = link_signature(l)?;
    let omega = omega_evaluation(ctx, l, budget)?;
    Ok(eta(ctx) * kappa(ctx).powi(-sigma as i32) * omega)
}

/// `I_r(M, G) = η κ^{−σ(L)} Ω(L, G′)` for a diagram whose colored strands
/// and vertices form `G′`.
pub fn invariant_with_graph(ctx: &RootContext, d: &FramedGraphDiagram, budget: &OracleBudget) -> Result<ComplexValue> {
    let layout_colors = |arc: &str| -> Option<u32> {
        d.strands
            .iter()
            .find(|s| s.arcs.iter().any(|a| a == arc))
            .map(|s| match s.role {
                Role::Color => s.color.unwrap_or(0),
                Role::Omega => 0,
            })
    };
    d.layout()?;
    for s in &d.strands {
        if s.role == Role::Color && s.color.unwrap_or(0) > ctx.max_color() {
            return Err(Error::ColorOutOfRange {
                color: s.color.unwrap_or(0),
                max: ctx.max_color(),
            });
        }
    }
    for v in &d.vertices {
        let c: Vec<u32> = v.arcs.iter().map(|a| layout_colors(a).unwrap_or(0)).collect();
        if !is_q_admissible(ctx, ColorTriple::new(c[0], c[1], c[2])) {
            return Err(Error::InvalidDiagram(format!(
                "vertex {} colors {c:?} are not q-admissible at r = {}",
                v.id,
                ctx.r()
            )));
        }
    }
    invariant_from_surgery(ctx, &FramedLink::Diagram(d.clone()), budget)
}

/// The bracket of a single-colored link in `S³` corrected by
/// `((−1)^c A^{c²+2c})^{−w}`, `w` the total framing: an invariant of the
/// unframed link.
pub fn writhe_normalized_bracket_exact(
    ctx: &RootContext,
    d: &FramedGraphDiagram,
    budget: &OracleBudget,
) -> Result<QFrac> {
    if d.strands.iter().any(|s| s.role == Role::Omega) {
        return Err(Error::InvalidDiagram(
            "writhe normalization is for links in S³; the diagram has surgery components".into(),
        ));
    }
    if !d.vertices.is_empty() {
        return Err(Error::InvalidDiagram("writhe normalization needs a link, not a graph".into()));
    }
    let mut colors = d.strands.iter().map(|s| s.color.unwrap_or(0));
    let c = colors.next().unwrap_or(0);
    if colors.any(|x| x != c) {
        return Err(Error::InvalidDiagram("writhe normalization needs a single color".into()));
    }
    let w2 = 2 * d.writhe() + d.strands.iter().map(|s| s.framing2 as i64).sum::<i64>();
    let framed = bracket_with_budget(ctx, d, budget)?;
    Ok(&framed * &QFrac::new(half_twist_factor(ctx, c, -(w2 as i32))))
}

pub fn writhe_normalized_bracket(ctx: &RootContext, d: &FramedGraphDiagram, budget: &OracleBudget) -> Result<ComplexValue> {
    Ok(writhe_normalized_bracket_exact(ctx, d, budget)?.eval(ctx))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::approx_eq;
    use crate::recoupling::{delta_value, theta_value};
    use crate::skein::standard;

    fn ctx(r: u32) -> RootContext {
        RootContext::new(r, 1).unwrap()
    }

    fn budget() -> OracleBudget {
        OracleBudget::default()
    }

    #[test]
    fn linking_matrices() {
        assert_eq!(linking_matrix(&FramedLink::Unknot(-3)).unwrap(), vec![vec![-3]]);
        assert_eq!(linking_matrix(&FramedLink::Unlink(vec![0; 3])).unwrap(), vec![vec![0; 3]; 3]);
        let h = FramedLink::Diagram(standard::omega_hopf(0, 0));
        assert_eq!(linking_matrix(&h).unwrap(), vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(link_signature(&h).unwrap(), 0);
        let h = FramedLink::Diagram(standard::omega_hopf(2, 2));
        assert_eq!(linking_matrix(&h).unwrap(), vec![vec![1, 1], vec![1, 1]]);
        assert_eq!(link_signature(&h).unwrap(), 1);
        let odd = FramedLink::Diagram(standard::omega_unknot_diagram(1));
        assert!(matches!(linking_matrix(&odd), Err(Error::InvalidDiagram(_))));
    }

    #[test]
    fn signatures() {
        for n in -3..=3i64 {
            assert_eq!(signature(&[vec![n]]), n.signum());
        }
        assert_eq!(signature(&[vec![0, 1], vec![1, 0]]), 0);
        assert_eq!(signature(&vec![vec![0; 4]; 4]), 0);
    }

    #[test]
    fn family_values() {
        for r in 3..=9 {
            let c = ctx(r);
            let e = eta(&c);
            assert!(approx_eq(omega_evaluation(&c, &FramedLink::Empty, &budget()).unwrap(), Complex64::one(), 1e-12));
            assert!(approx_eq(omega_evaluation(&c, &FramedLink::Unknot(0), &budget()).unwrap(), 1.0 / e, 1e-9));
            assert!(approx_eq(omega_evaluation(&c, &FramedLink::Unknot(1), &budget()).unwrap(), kappa(&c), 1e-9));
            assert!(approx_eq(invariant_from_surgery(&c, &FramedLink::Empty, &budget()).unwrap(), e, 1e-12));
            for g in 0..=5 {
                let v = invariant_from_surgery(&c, &FramedLink::Unlink(vec![0; g]), &budget()).unwrap();
                assert!(approx_eq(v, e.powi(1 - g as i32), 1e-9), "r={r} g={g}");
            }
        }
    }

    #[test]
    fn lens_formula() {
        for r in 3..=8 {
            let c = ctx(r);
            for n in -4..=4i64 {
                let sum: Complex64 = (0..=c.max_color())
                    .map(|a| {
                        let a = a as i64;
                        let sign = if (a * n).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                        delta_value(&c, a as u32).powi(2) * sign * c.s_pow(2 * a * n * (a + 2))
                    })
                    .sum();
                let expect = eta(&c).powi(2) * kappa(&c).powi(-n.signum() as i32) * sum;
                let got = invariant_from_surgery(&c, &FramedLink::Unknot(n), &budget()).unwrap();
                assert!(approx_eq(got, expect, 1e-9), "r={r} n={n}");
            }
        }
    }

    #[test]
    fn first_kirby_move() {
        for r in 3..=8 {
            let c = ctx(r);
            for base in [vec![], vec![0], vec![2, -1], vec![0, 0, 3]] {
                let v = invariant_from_surgery(&c, &FramedLink::Unlink(base.clone()), &budget()).unwrap();
                for extra in [1, -1] {
                    let mut more = base.clone();
                    more.push(extra);
                    let w = invariant_from_surgery(&c, &FramedLink::Unlink(more), &budget()).unwrap();
                    assert!(approx_eq(v, w, 1e-9), "r={r} {base:?} + {extra}");
                }
            }
        }
    }

    #[test]
    fn diagrams_match_families() {
        for r in 3..=5 {
            let c = ctx(r);
            let unlink = FramedLink::Diagram(standard::omega_unlink(&[0, 0]));
            let fam = invariant_from_surgery(&c, &FramedLink::Unlink(vec![0, 0]), &budget()).unwrap();
            assert!(approx_eq(invariant_from_surgery(&c, &unlink, &budget()).unwrap(), fam, 1e-9));
            // 0-framed Hopf link presents S³
            let hopf = FramedLink::Diagram(standard::omega_hopf(0, 0));
            assert!(approx_eq(invariant_from_surgery(&c, &hopf, &budget()).unwrap(), eta(&c), 1e-9));
        }
    }

    #[test]
    fn graph_invariants() {
        let c = ctx(6);
        for n in 0..=4 {
            let v = invariant_with_graph(&c, &standard::unknot(n, 0), &budget()).unwrap();
            assert!(approx_eq(v, eta(&c) * delta_value(&c, n), 1e-9));
        }
        for (a, b, cc) in [(1, 1, 2), (2, 2, 2), (2, 3, 1)] {
            let v = invariant_with_graph(&c, &standard::theta_graph(a, b, cc), &budget()).unwrap();
            assert!(approx_eq(v, eta(&c) * theta_value(&c, ColorTriple::new(a, b, cc)), 1e-9));
        }
        let empty = FramedGraphDiagram::default();
        assert!(approx_eq(invariant_with_graph(&c, &empty, &budget()).unwrap(), eta(&c), 1e-12));
        // 4 + 4 + 2 > 2(r-2)
        assert!(invariant_with_graph(&c, &standard::theta_graph(4, 4, 2), &budget()).is_err());
    }

    #[test]
    fn writhe_normalization() {
        let c = ctx(4);
        for col in 1..=2 {
            let flat = writhe_normalized_bracket_exact(&c, &standard::unknot(col, 0), &budget()).unwrap();
            for sign in [1, -1] {
                let kinked = writhe_normalized_bracket_exact(&c, &standard::kinked_unknot(col, sign), &budget()).unwrap();
                assert_eq!(kinked, flat);
            }
            // odd half twists bring in √-1 = ±s^{2r}: equal at the root only
            let twisted = writhe_normalized_bracket(&c, &standard::unknot(col, 3), &budget()).unwrap();
            assert!(approx_eq(twisted, flat.eval(&c), 1e-12));
        }
        let c = ctx(5);
        let big = OracleBudget::with_crossings(27);
        let w = writhe_normalized_bracket_exact(&c, &standard::trefoil(3, 0), &big).unwrap();
        // the same trefoil with framing 0 needs no correction
        let zero = bracket_with_budget(&c, &standard::trefoil(3, -6), &big).unwrap();
        assert_eq!(w, zero);
        let other = writhe_normalized_bracket_exact(&c, &standard::trefoil(3, 4), &big).unwrap();
        assert_eq!(w, other);
        assert!(writhe_normalized_bracket(&c, &standard::omega_unlink(&[0]), &budget()).is_err());
    }

    #[test]
    fn link_files() {
        for l in [
            FramedLink::Empty,
            FramedLink::Unknot(-2),
            FramedLink::Unlink(vec![0, 1]),
            FramedLink::Diagram(standard::omega_hopf(0, 2)),
        ] {
            assert_eq!(FramedLink::from_json(&l.to_json()).unwrap(), l);
        }
        assert_eq!(
            FramedLink::from_json(r#"{"family": "unlink", "g": 3}"#).unwrap(),
            FramedLink::Unlink(vec![0; 3])
        );
        let err = FramedLink::from_json(r#"{"family": "unknot", "n": 1, "framing": 2}"#).unwrap_err();
        assert!(err.to_string().contains("framing"), "{err}");
        assert!(FramedLink::from_json(r#"{"family": "torus"}"#).is_err());
        assert!(FramedLink::from_json(r#"{"family": "empty", "n": 1}"#).is_err());
    }
}
