//! Gleamed shadows: data model, validation, coloring enumeration, the state
//! sum `|X|^r`, and the intersection form on `H₂`.
//!
//! Gleams are stored doubled (`gleam2`) so half-integer gleams stay integral.

mod homology;
mod state_sum;

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::recoupling::{is_admissible, ColorTriple};

pub use homology::{bilinear_form, homology_h2, signature};
pub use state_sum::{
    enumerate_colorings, evaluate_shadow, invariant_from_shadow, naive_colorings, phase, state_sum, state_sum_stats, state_sum_term,
    term_symbol, term_symbols, Coloring, Colorings, ShadowEvaluation, TermSymbol,
};

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Region {
    pub id: String,
    /// Twice the gleam.
    pub gleam2: i64,
    /// Euler characteristic of the region's closure.
    pub chi: i64,
    #[serde(default, skip_serializing_if = "is_false")]
    pub external: bool,
    /// Fixed color; required on external regions.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub color: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orientable: Option<bool>,
}

/// A triple line of the shadow: three region germs meet along it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InternalEdge {
    pub id: String,
    /// 1 for a segment between two different vertices, 0 otherwise.
    pub chi: i64,
    pub regions: [String; 3],
    /// Incidence signs for the boundary map, one per slot.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signs: Option<[i64; 3]>,
    /// Whether the interval bundle of each slot is non-orientable.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nonorientable: Option<[bool; 3]>,
}

/// A vertex with its six region germs in tetrahedron order `a..f`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InternalVertex {
    pub id: String,
    pub tet: [String; 6],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundaryEdge {
    pub id: String,
    pub chi: i64,
    pub region: String,
    pub color: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundaryVertex {
    pub id: String,
    pub edges: [String; 3],
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Shadow {
    pub regions: Vec<Region>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub edges: Vec<InternalEdge>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub vertices: Vec<InternalVertex>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub boundary_edges: Vec<BoundaryEdge>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub boundary_vertices: Vec<BoundaryVertex>,
    /// Signature of the 4-manifold, when it cannot be computed from the data.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<i64>,
}

/// Which sign of the gleam enters the region phase.
///
/// `Plus` uses `((√-1)^c A^{(c²+2c)/2})^{gleam2}`, the same twist coefficient
/// the surgery side picks up from framing; `Minus` is its inverse, the form
/// `(−1)^{gc} A^{−gc(c+2)}` read literally.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PhaseSign {
    #[default]
    Plus,
    Minus,
}

impl PhaseSign {
    pub fn factor(self) -> i32 {
        match self {
            PhaseSign::Plus => 1,
            PhaseSign::Minus => -1,
        }
    }
}

impl fmt::Display for PhaseSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PhaseSign::Plus => "plus",
            PhaseSign::Minus => "minus",
        })
    }
}

impl FromStr for PhaseSign {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plus" => Ok(PhaseSign::Plus),
            "minus" => Ok(PhaseSign::Minus),
            _ => Err(Error::Parse(format!("phase sign must be plus or minus, got {s:?}"))),
        }
    }
}

impl Shadow {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("shadow serializes")
    }

    /// A single closed region: a surface of Euler characteristic `chi`.
    pub fn surface(chi: i64, gleam2: i64) -> Self {
        Shadow {
            regions: vec![Region {
                id: "R".into(),
                gleam2,
                chi,
                external: false,
                color: None,
                orientable: Some(true),
            }],
            ..Default::default()
        }
    }

    /// The sphere with integer gleam `n`: the shadow of the disk bundle of Euler number `n`.
    pub fn sphere(n: i64) -> Self {
        Self::surface(2, 2 * n)
    }

    /// Closed surface of genus `g` with integer gleam `n`.
    pub fn genus(g: i64, n: i64) -> Self {
        Self::surface(2 - 2 * g, 2 * n)
    }

    pub fn region(&self, id: &str) -> Option<&Region> {
        self.regions.iter().find(|r| r.id == id)
    }

    pub fn is_closed(&self) -> bool {
        self.boundary_edges.is_empty() && self.boundary_vertices.is_empty() && !self.regions.iter().any(|r| r.external)
    }

    /// Every violated invariant; empty means valid.
    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut seen = |kind: &str, ids: &mut dyn Iterator<Item = &String>| {
            let mut set = HashSet::new();
            for id in ids {
                if !set.insert(id.clone()) {
                    out.push(format!("duplicate {kind} id {id:?}"));
                }
            }
        };
        seen("region", &mut self.regions.iter().map(|r| &r.id));
        seen("edge", &mut self.edges.iter().map(|e| &e.id));
        seen("vertex", &mut self.vertices.iter().map(|v| &v.id));
        seen("boundary edge", &mut self.boundary_edges.iter().map(|e| &e.id));
        seen("boundary vertex", &mut self.boundary_vertices.iter().map(|v| &v.id));

        let regions: HashMap<&str, &Region> = self.regions.iter().map(|r| (r.id.as_str(), r)).collect();
        for r in &self.regions {
            if r.external && r.color.is_none() {
                out.push(format!("external region {:?} has no color", r.id));
            }
        }
        for e in &self.edges {
            if !(0..=1).contains(&e.chi) {
                out.push(format!("edge {:?} has chi {} (must be 0 or 1)", e.id, e.chi));
            }
            for id in &e.regions {
                if !regions.contains_key(id.as_str()) {
                    out.push(format!("edge {:?} references missing region {id:?}", e.id));
                }
            }
        }

        let edge_triples: HashSet<[&str; 3]> = self.edges.iter().map(|e| sorted3(&e.regions)).collect();
        for v in &self.vertices {
            for id in &v.tet {
                if !regions.contains_key(id.as_str()) {
                    out.push(format!("vertex {:?} references missing region {id:?}", v.id));
                }
            }
            let t = &v.tet;
            let triples = [
                [&t[0], &t[1], &t[2]],
                [&t[0], &t[4], &t[5]],
                [&t[1], &t[5], &t[3]],
                [&t[2], &t[4], &t[3]],
            ];
            for tr in triples {
                let owned = [tr[0].clone(), tr[1].clone(), tr[2].clone()];
                let key = sorted3(&owned);
                if !edge_triples.contains(&key) {
                    out.push(format!("vertex {:?}: germ triple {:?} matches no edge", v.id, key));
                }
            }
        }

        let bedges: HashMap<&str, &BoundaryEdge> = self.boundary_edges.iter().map(|e| (e.id.as_str(), e)).collect();
        for e in &self.boundary_edges {
            if !(0..=1).contains(&e.chi) {
                out.push(format!("boundary edge {:?} has chi {} (must be 0 or 1)", e.id, e.chi));
            }
            match regions.get(e.region.as_str()) {
                None => out.push(format!("boundary edge {:?} references missing region {:?}", e.id, e.region)),
                Some(r) if !r.external => {
                    out.push(format!("boundary edge {:?} bounds non-external region {:?}", e.id, r.id))
                }
                Some(r) if r.color.is_some_and(|c| c != e.color) => out.push(format!(
                    "boundary edge {:?} has color {} but region {:?} has {:?}",
                    e.id, e.color, r.id, r.color
                )),
                _ => {}
            }
        }
        for v in &self.boundary_vertices {
            let mut colors = Vec::new();
            for id in &v.edges {
                match bedges.get(id.as_str()) {
                    Some(e) => colors.push(e.color),
                    None => out.push(format!("boundary vertex {:?} references missing boundary edge {id:?}", v.id)),
                }
            }
            if colors.len() == 3 && !is_admissible(ColorTriple::new(colors[0], colors[1], colors[2])) {
                out.push(format!("boundary vertex {:?} has inadmissible colors {colors:?}", v.id));
            }
        }

        for r in &self.regions {
            if let Some(count) = self.nonorientable_bundles(&r.id) {
                if (r.gleam2.rem_euclid(2) == 1) != (count % 2 == 1) {
                    out.push(format!(
                        "region {:?}: gleam2 {} has the wrong parity for {} non-orientable bundle(s)",
                        r.id, r.gleam2, count
                    ));
                }
            }
        }
        out
    }

    /// Conditions that could not be checked for lack of data.
    pub fn warnings(&self) -> Vec<String> {
        self.regions
            .iter()
            .filter(|r| self.nonorientable_bundles(&r.id).is_none())
            .map(|r| format!("region {:?}: gleam parity not checked (missing bundle data)", r.id))
            .collect()
    }

    pub fn check(&self) -> Result<()> {
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidShadow(v))
        }
    }

    // None when some incident edge lacks bundle flags
    fn nonorientable_bundles(&self, region: &str) -> Option<usize> {
        let mut count = 0;
        for e in &self.edges {
            if !e.regions.iter().any(|x| x == region) {
                continue;
            }
            let flags = e.nonorientable?;
            count += e.regions.iter().zip(flags).filter(|(x, f)| *x == region && *f).count();
        }
        Some(count)
    }

    /// `χ(X) = #vertices − Σ_e χ(e) + Σ_f χ(f)` over internal strata.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edges.iter().map(|e| e.chi).sum::<i64>()
            + self.regions.iter().map(|r| r.chi).sum::<i64>()
    }

    /// Renames every id through `f`; the shadow is unchanged up to isomorphism.
    pub fn relabeled(&self, f: &dyn Fn(&str) -> String) -> Self {
        let mut s = self.clone();
        for r in &mut s.regions {
            r.id = f(&r.id);
        }
        for e in &mut s.edges {
            e.id = f(&e.id);
            for x in &mut e.regions {
                *x = f(x);
            }
        }
        for v in &mut s.vertices {
            v.id = f(&v.id);
            for x in &mut v.tet {
                *x = f(x);
            }
        }
        for e in &mut s.boundary_edges {
            e.id = f(&e.id);
            e.region = f(&e.region);
        }
        for v in &mut s.boundary_vertices {
            v.id = f(&v.id);
            for x in &mut v.edges {
                *x = f(x);
            }
        }
        s
    }

    /// Regions sorted by id: the enumeration order.
    pub(crate) fn region_order(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.regions.len()).collect();
        idx.sort_by(|&a, &b| self.regions[a].id.cmp(&self.regions[b].id));
        idx
    }

    pub(crate) fn region_index(&self) -> BTreeMap<&str, usize> {
        self.regions.iter().enumerate().map(|(i, r)| (r.id.as_str(), i)).collect()
    }
}

fn sorted3(ids: &[String; 3]) -> [&str; 3] {
    let mut v = [ids[0].as_str(), ids[1].as_str(), ids[2].as_str()];
    v.sort();
    v
}

#[cfg(test)]
mod tests {
    use super::*;

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
    fn sphere_is_valid() {
        for n in -3..=3 {
            let s = Shadow::sphere(n);
            assert!(s.validate().is_empty());
            assert_eq!(s.euler_characteristic(), 2);
        }
        assert_eq!(Shadow::genus(3, 0).euler_characteristic(), -4);
        assert_eq!(Shadow::genus(1, 0).euler_characteristic(), 0);
    }

    #[test]
    fn missing_region_is_reported() {
        let mut s = Shadow::sphere(0);
        s.edges.push(edge("e", 0, ["R", "R", "Q"]));
        let v = s.validate();
        assert_eq!(v.len(), 1, "{v:?}");
        assert!(v[0].contains("missing region"));
    }

    #[test]
    fn gleam_parity() {
        let mut s = Shadow::sphere(0);
        s.regions[0].gleam2 = 1;
        assert_eq!(s.validate().len(), 1);

        // one region bounding a circle edge three times
        let mut s = Shadow::surface(0, 1);
        s.edges.push(edge("e", 0, ["R", "R", "R"]));
        assert!(s.validate().is_empty());
        assert_eq!(s.warnings().len(), 1);
        s.edges[0].nonorientable = Some([false; 3]);
        assert_eq!(s.validate().len(), 1);
        s.edges[0].nonorientable = Some([true, false, false]);
        assert!(s.validate().is_empty());
        assert!(s.warnings().is_empty());
    }

    #[test]
    fn vertex_triples_must_match_edges() {
        let mut s = Shadow::default();
        for id in ["a", "b", "c", "d", "e", "f"] {
            s.regions.push(Region {
                id: id.into(),
                gleam2: 0,
                chi: 1,
                external: false,
                color: None,
                orientable: None,
            });
        }
        s.vertices.push(InternalVertex {
            id: "v".into(),
            tet: ["a", "b", "c", "d", "e", "f"].map(String::from),
        });
        for (i, t) in [["a", "b", "c"], ["a", "e", "f"], ["b", "f", "d"]].iter().enumerate() {
            s.edges.push(edge(&format!("e{i}"), 0, *t));
        }
        let v = s.validate();
        assert_eq!(v.len(), 1, "{v:?}");
        s.edges.push(edge("e3", 0, ["d", "e", "c"]));
        assert!(s.validate().is_empty());
    }

    #[test]
    fn boundary_checks() {
        let mut s = Shadow::surface(1, 0);
        s.regions[0].external = true;
        assert_eq!(s.validate().len(), 1);
        s.regions[0].color = Some(2);
        s.boundary_edges.push(BoundaryEdge {
            id: "b".into(),
            chi: 0,
            region: "R".into(),
            color: 1,
        });
        assert_eq!(s.validate().len(), 1);
        s.boundary_edges[0].color = 2;
        assert!(s.validate().is_empty());
        assert!(!s.is_closed());
    }

    #[test]
    fn json_round_trip_and_strictness() {
        let mut s = Shadow::sphere(2);
        s.edges.push(InternalEdge {
            signs: Some([1, -1, 0]),
            ..edge("e", 1, ["R", "R", "R"])
        });
        let back = Shadow::from_json(&s.to_json()).unwrap();
        assert_eq!(back, s);
        let bad = r#"{"regions": [{"id": "R", "gleam2": 0, "chi": 2, "colour": 1}]}"#;
        let err = Shadow::from_json(bad).unwrap_err().to_string();
        assert!(err.contains("colour"), "{err}");
    }

    #[test]
    fn phase_sign_parsing() {
        assert_eq!("plus".parse::<PhaseSign>().unwrap(), PhaseSign::Plus);
        assert_eq!("minus".parse::<PhaseSign>().unwrap(), PhaseSign::Minus);
        assert!("up".parse::<PhaseSign>().is_err());
        assert_eq!(PhaseSign::default().to_string(), "plus");
    }
}
