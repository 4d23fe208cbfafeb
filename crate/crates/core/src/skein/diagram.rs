use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A crossing; each strand is given as `[incoming arc, outgoing arc]`.
///
/// `sign` is `+1` when the under strand passes from right to left as seen
/// travelling along the over strand. Together with the arc directions this
/// fixes the planar embedding: counterclockwise, the four arcs are
/// `over_out, under_out, over_in, under_in` for a positive crossing and
/// `over_out, under_in, over_in, under_out` for a negative one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Crossing {
    pub id: String,
    pub over: [String; 2],
    pub under: [String; 2],
    pub sign: i8,
}

impl Crossing {
    /// Arcs in counterclockwise order, starting from the outgoing over arc.
    pub fn ccw_arcs(&self) -> [&str; 4] {
        let [oi, oo] = &self.over;
        let [ui, uo] = &self.under;
        if self.sign > 0 {
            [oo, uo, oi, ui]
        } else {
            [oo, ui, oi, uo]
        }
    }
}

/// Trivalent vertex; arcs listed counterclockwise.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Vertex {
    pub id: String,
    pub arcs: [String; 3],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    #[default]
    Color,
    Omega,
}

/// A link component or a graph edge: arcs in order of travel.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Strand {
    pub id: String,
    pub arcs: Vec<String>,
    /// Twice the framing relative to the blackboard framing.
    #[serde(default)]
    pub framing2: i32,
    #[serde(default)]
    pub role: Role,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub color: Option<u32>,
}

/// Arc ends on the boundary of a tangle, each side listed west to east.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Boundary {
    #[serde(default)]
    pub bottom: Vec<String>,
    #[serde(default)]
    pub top: Vec<String>,
}

/// Planar diagram of a framed link or knotted trivalent graph with
/// blackboard framing plus per-strand corrections.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FramedGraphDiagram {
    #[serde(default)]
    pub crossings: Vec<Crossing>,
    #[serde(default)]
    pub vertices: Vec<Vertex>,
    pub strands: Vec<Strand>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary: Option<Boundary>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) enum Node {
    Crossing(usize),
    Vertex(usize),
    Boundary,
}

/// One end of an arc: a node and the slot (counterclockwise index) there.
pub(crate) type End = (Node, usize);

/// Resolved incidence structure of a validated diagram.
#[derive(Debug, Clone)]
pub(crate) struct Layout {
    pub arc_index: HashMap<String, usize>,
    /// Both ends of each arc, or `None` for a free loop.
    pub arc_ends: Vec<Option<[End; 2]>>,
    pub arc_strand: Vec<usize>,
    /// Arc ids at each slot of the boundary node, in its rotation order.
    pub boundary_slots: Vec<usize>,
}

impl FramedGraphDiagram {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("diagram serializes")
    }

    pub fn strand(&self, id: &str) -> Option<&Strand> {
        self.strands.iter().find(|s| s.id == id)
    }

    /// Reverse the direction of travel of one strand.
    pub fn reversed(&self, strand: &str) -> Result<Self> {
        let layout = self.layout()?;
        let si = self
            .strands
            .iter()
            .position(|s| s.id == strand)
            .ok_or_else(|| Error::InvalidDiagram(format!("no strand {strand}")))?;
        let mut out = self.clone();
        out.strands[si].arcs.reverse();
        let on = |a: &str| layout.arc_strand[layout.arc_index[a]] == si;
        for c in &mut out.crossings {
            let over = on(&c.over[0]);
            let under = on(&c.under[0]);
            if over {
                c.over.swap(0, 1);
            }
            if under {
                c.under.swap(0, 1);
            }
            if over != under {
                c.sign = -c.sign;
            }
        }
        Ok(out)
    }

    /// Strand index per arc, signed crossings between strands, and so on.
    pub(crate) fn layout(&self) -> Result<Layout> {
        let v = self.violations();
        if !v.is_empty() {
            return Err(Error::InvalidDiagram(v.join("; ")));
        }
        Ok(self.layout_unchecked())
    }

    fn layout_unchecked(&self) -> Layout {
        let mut arc_index = HashMap::new();
        let mut arc_strand = Vec::new();
        for (si, s) in self.strands.iter().enumerate() {
            for a in &s.arcs {
                arc_index.insert(a.clone(), arc_strand.len());
                arc_strand.push(si);
            }
        }
        let mut ends: Vec<Vec<End>> = vec![Vec::new(); arc_strand.len()];
        for (ci, c) in self.crossings.iter().enumerate() {
            for (slot, a) in c.ccw_arcs().into_iter().enumerate() {
                if let Some(&i) = arc_index.get(a) {
                    ends[i].push((Node::Crossing(ci), slot));
                }
            }
        }
        for (vi, v) in self.vertices.iter().enumerate() {
            for (slot, a) in v.arcs.iter().enumerate() {
                if let Some(&i) = arc_index.get(a) {
                    ends[i].push((Node::Vertex(vi), slot));
                }
            }
        }
        let mut boundary_slots = Vec::new();
        if let Some(b) = &self.boundary {
            // rotation at the point at infinity: top west→east, then bottom east→west
            for a in b.top.iter().chain(b.bottom.iter().rev()) {
                if let Some(&i) = arc_index.get(a) {
                    ends[i].push((Node::Boundary, boundary_slots.len()));
                    boundary_slots.push(i);
                }
            }
        }
        let arc_ends = ends
            .into_iter()
            .map(|e| (e.len() == 2).then(|| [e[0], e[1]]))
            .collect();
        Layout {
            arc_index,
            arc_ends,
            arc_strand,
            boundary_slots,
        }
    }

    // arc x continues as arc y straight through some crossing
    fn passes(&self, x: &str, y: &str) -> bool {
        self.crossings
            .iter()
            .any(|c| (c.over[0] == x && c.over[1] == y) || (c.under[0] == x && c.under[1] == y))
    }

    /// Every structural problem with the diagram; empty means valid.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut ids = HashMap::new();
        for id in self
            .crossings
            .iter()
            .map(|c| &c.id)
            .chain(self.vertices.iter().map(|v| &v.id))
            .chain(self.strands.iter().map(|s| &s.id))
        {
            if ids.insert(id.clone(), ()).is_some() {
                out.push(format!("duplicate id {id}"));
            }
        }
        let mut owner: HashMap<&str, &str> = HashMap::new();
        for s in &self.strands {
            if s.arcs.is_empty() {
                out.push(format!("strand {} has no arcs", s.id));
            }
            for a in &s.arcs {
                if let Some(prev) = owner.insert(a, &s.id) {
                    out.push(format!("arc {a} belongs to both {prev} and {}", s.id));
                }
            }
            match (s.role, s.color) {
                (Role::Color, None) => out.push(format!("strand {} needs a color", s.id)),
                (Role::Omega, Some(_)) => out.push(format!("omega strand {} must not carry a color", s.id)),
                _ => {}
            }
        }
        for c in &self.crossings {
            if c.sign.abs() != 1 {
                out.push(format!("crossing {} has sign {}, expected ±1", c.id, c.sign));
            }
        }
        let mut count: BTreeMap<&str, usize> = BTreeMap::new();
        let mut touch = |a: &'_ str, out: &mut Vec<String>| {
            if let Some((&k, _)) = owner.get_key_value(a) {
                *count.entry(k).or_default() += 1;
            } else {
                out.push(format!("arc {a} is not part of any strand"));
            }
        };
        for c in &self.crossings {
            for a in c.over.iter().chain(c.under.iter()) {
                touch(a, &mut out);
            }
        }
        for v in &self.vertices {
            for a in &v.arcs {
                touch(a, &mut out);
            }
        }
        if let Some(b) = &self.boundary {
            for a in b.bottom.iter().chain(b.top.iter()) {
                touch(a, &mut out);
            }
        }
        for s in &self.strands {
            for a in &s.arcs {
                let k = count.get(a.as_str()).copied().unwrap_or(0);
                if k != 0 && k != 2 {
                    out.push(format!("arc {a} has {k} ends, expected 2"));
                } else if k == 0 && s.arcs.len() != 1 {
                    out.push(format!("arc {a} has no ends"));
                }
            }
        }
        if !out.is_empty() {
            return out;
        }
        // continuity of each strand through crossings
        let at_vertex_or_boundary = |a: &str| {
            self.vertices.iter().any(|v| v.arcs.iter().any(|x| x == a))
                || self
                    .boundary
                    .iter()
                    .any(|b| b.bottom.iter().chain(b.top.iter()).any(|x| x == a))
        };
        let mut used_passes = 0usize;
        for s in &self.strands {
            for w in s.arcs.windows(2) {
                if self.passes(&w[0], &w[1]) {
                    used_passes += 1;
                } else {
                    out.push(format!("strand {}: arc {} does not continue into {}", s.id, w[0], w[1]));
                }
            }
            let first = &s.arcs[0];
            let last = s.arcs.last().unwrap();
            let free = s.arcs.len() == 1 && !count.contains_key(first.as_str());
            if free {
                continue;
            }
            if self.passes(last, first) {
                used_passes += 1;
            } else if !(at_vertex_or_boundary(first) && at_vertex_or_boundary(last)) {
                out.push(format!("strand {} is neither closed nor ends at vertices", s.id));
            }
            if s.role == Role::Omega {
                if !self.passes(last, first) && !free {
                    out.push(format!("omega strand {} must be a closed component", s.id));
                }
                if s.arcs.iter().any(|a| at_vertex_or_boundary(a)) {
                    out.push(format!("omega strand {} touches a vertex or the boundary", s.id));
                }
            }
        }
        if used_passes != 2 * self.crossings.len() && out.is_empty() {
            out.push("some crossing strands are not traversed by their strand".into());
        }
        for v in &self.vertices {
            let colors: Vec<Option<u32>> = v
                .arcs
                .iter()
                .map(|a| self.strands.iter().find(|s| s.arcs.contains(a)).and_then(|s| s.color))
                .collect();
            if let [Some(a), Some(b), Some(c)] = colors[..] {
                if !crate::recoupling::is_admissible(crate::recoupling::ColorTriple::new(a, b, c)) {
                    out.push(format!("vertex {} has non-admissible colors ({a},{b},{c})", v.id));
                }
            }
        }
        if out.is_empty() {
            if let Some(msg) = self.planarity_violation() {
                out.push(msg);
            }
        }
        out
    }

    // Euler count on the rotation system: V - E + F = 2 per connected component
    fn planarity_violation(&self) -> Option<String> {
        let layout = self.layout_unchecked();
        let mut nodes: Vec<Node> = (0..self.crossings.len())
            .map(Node::Crossing)
            .chain((0..self.vertices.len()).map(Node::Vertex))
            .collect();
        if !layout.boundary_slots.is_empty() {
            nodes.push(Node::Boundary);
        }
        let degree = |n: Node| match n {
            Node::Crossing(_) => 4,
            Node::Vertex(_) => 3,
            Node::Boundary => layout.boundary_slots.len(),
        };
        let node_idx: HashMap<Node, usize> = nodes.iter().enumerate().map(|(i, &n)| (n, i)).collect();
        // dart (node, slot) -> arc
        let mut other: HashMap<End, End> = HashMap::new();
        let mut edges = 0usize;
        let mut parent: Vec<usize> = (0..nodes.len()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut x = x;
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for e in layout.arc_ends.iter().flatten() {
            other.insert(e[0], e[1]);
            other.insert(e[1], e[0]);
            edges += 1;
            let (a, b) = (find(&mut parent, node_idx[&e[0].0]), find(&mut parent, node_idx[&e[1].0]));
            parent[a] = b;
        }
        let components = (0..nodes.len()).filter(|&i| find(&mut parent, i) == i).count();
        let mut seen: HashMap<End, bool> = HashMap::new();
        let mut faces = 0usize;
        for &n in &nodes {
            for slot in 0..degree(n) {
                if seen.contains_key(&(n, slot)) {
                    continue;
                }
                faces += 1;
                let mut d = (n, slot);
                while !seen.contains_key(&d) {
                    seen.insert(d, true);
                    let (m, j) = other[&d];
                    d = (m, (j + 1) % degree(m));
                }
            }
        }
        let chi = nodes.len() as i64 - edges as i64 + faces as i64;
        (chi != 2 * components as i64).then(|| {
            format!(
                "diagram is not planar: V - E + F = {chi} with {components} connected piece(s)"
            )
        })
    }

    /// Signed crossing count between two strands, halved.
    pub fn linking_number(&self, a: &str, b: &str) -> Result<i64> {
        let layout = self.layout()?;
        let find = |id: &str| {
            self.strands
                .iter()
                .position(|s| s.id == id)
                .ok_or_else(|| Error::InvalidDiagram(format!("no strand {id}")))
        };
        let (ia, ib) = (find(a)?, find(b)?);
        let mut total = 0i64;
        for c in &self.crossings {
            let so = layout.arc_strand[layout.arc_index[&c.over[0]]];
            let su = layout.arc_strand[layout.arc_index[&c.under[0]]];
            if (so == ia && su == ib) || (so == ib && su == ia) {
                total += c.sign as i64;
            }
        }
        Ok(total / 2)
    }

    /// Sum of crossing signs where a strand crosses itself.
    pub fn self_writhe(&self, strand: &str) -> Result<i64> {
        let layout = self.layout()?;
        let si = self
            .strands
            .iter()
            .position(|s| s.id == strand)
            .ok_or_else(|| Error::InvalidDiagram(format!("no strand {strand}")))?;
        Ok(self
            .crossings
            .iter()
            .filter(|c| {
                layout.arc_strand[layout.arc_index[&c.over[0]]] == si
                    && layout.arc_strand[layout.arc_index[&c.under[0]]] == si
            })
            .map(|c| c.sign as i64)
            .sum())
    }

    /// Total writhe of the diagram.
    pub fn writhe(&self) -> i64 {
        self.crossings.iter().map(|c| c.sign as i64).sum()
    }
}
