//! Cabling: each color-`c` strand becomes `c` parallel strands with one
//! projector per strand, crossings become `a × b` grids, and each trivalent
//! vertex becomes its band connector.
//!
//! Parallel strands at a slot are indexed left to right as seen looking
//! outward from the node, so along an arc position `i` at one end meets
//! position `c - 1 - i` at the other.

use std::collections::{BTreeMap, HashMap};

use num_complex::Complex64;

use super::diagram::{End, FramedGraphDiagram, Layout, Node};
use super::network::{Coeff, Network};
use crate::arith::{LaurentScalar, RootContext};
use crate::tl::{projector, TLDiagram};

// a cabled projector box: (matching, coefficient) terms and its slot map
type BoxExpansion<C> = (Vec<(Vec<u8>, C)>, BTreeMap<u32, u32>);

/// How exact data becomes network coefficients.
pub(crate) trait Lift<C> {
    fn scalar(&self, x: &LaurentScalar) -> C;
    /// Projector terms and the quantum-integer denominator they were scaled by.
    fn projector(&self, n: usize) -> (Vec<(TLDiagram, C)>, BTreeMap<u32, u32>);
}

pub(crate) struct Exact;

impl Lift<LaurentScalar> for Exact {
    fn scalar(&self, x: &LaurentScalar) -> LaurentScalar {
        x.clone()
    }
    fn projector(&self, n: usize) -> (Vec<(TLDiagram, LaurentScalar)>, BTreeMap<u32, u32>) {
        let (den, terms) = projector(n).common_denominator();
        (terms, den)
    }
}

pub(crate) struct Numeric<'a>(pub &'a RootContext);

impl Lift<Complex64> for Numeric<'_> {
    fn scalar(&self, x: &LaurentScalar) -> Complex64 {
        x.eval(self.0)
    }
    fn projector(&self, n: usize) -> (Vec<(TLDiagram, Complex64)>, BTreeMap<u32, u32>) {
        let f = projector(n);
        let terms = f.terms().map(|(d, c)| (d.clone(), c.eval(self.0))).collect();
        (terms, BTreeMap::new())
    }
}

pub(crate) struct Compiled<C> {
    pub net: Network<C>,
    pub den: BTreeMap<u32, u32>,
    pub bottom: usize,
    pub top: usize,
}

/// Number of elementary crossings after cabling.
pub(crate) fn cabled_crossings(d: &FramedGraphDiagram, layout: &Layout, colors: &[u32]) -> usize {
    d.crossings
        .iter()
        .map(|c| {
            let a = colors[layout.arc_strand[layout.arc_index[&c.over[0]]]] as usize;
            let b = colors[layout.arc_strand[layout.arc_index[&c.under[0]]]] as usize;
            a * b
        })
        .sum()
}

pub(crate) fn compile<C: Coeff, L: Lift<C>>(
    d: &FramedGraphDiagram,
    layout: &Layout,
    colors: &[u32],
    lift: &L,
) -> Compiled<C> {
    let mut net = Network::new();
    let mut den: BTreeMap<u32, u32> = BTreeMap::new();
    let mut slot_ports: HashMap<End, Vec<u32>> = HashMap::new();
    let arc_color = |a: &str| colors[layout.arc_strand[layout.arc_index[a]]] as usize;

    // terminals first so their numbering is the boundary numbering
    let (mut bottom, mut top) = (0usize, 0usize);
    if let Some(b) = &d.boundary {
        let bottom_colors: Vec<usize> = b.bottom.iter().map(|a| arc_color(a)).collect();
        let top_colors: Vec<usize> = b.top.iter().map(|a| arc_color(a)).collect();
        bottom = bottom_colors.iter().sum();
        top = top_colors.iter().sum();
        let terminals: Vec<u32> = (0..bottom + top).map(|_| net.add_terminal()).collect();
        // boundary slot numbering follows Layout: top west→east, then bottom east→west
        let mut slot = 0usize;
        let mut offset = 0usize;
        let mut top_ports = Vec::new();
        for &c in &top_colors {
            top_ports.push((0..c).map(|i| terminals[bottom + offset + c - 1 - i]).collect::<Vec<_>>());
            offset += c;
        }
        for ports in top_ports {
            slot_ports.insert((Node::Boundary, slot), ports);
            slot += 1;
        }
        let mut offsets = Vec::new();
        let mut o = 0usize;
        for &c in &bottom_colors {
            offsets.push(o);
            o += c;
        }
        for (k, &c) in bottom_colors.iter().enumerate().rev() {
            let ports = (0..c).map(|i| terminals[offsets[k] + i]).collect();
            slot_ports.insert((Node::Boundary, slot), ports);
            slot += 1;
        }
    }

    let a_plus = lift.scalar(&LaurentScalar::a_pow(1));
    let a_minus = lift.scalar(&LaurentScalar::a_pow(-1));
    for (ci, c) in d.crossings.iter().enumerate() {
        let a = arc_color(&c.over[0]);
        let b = arc_color(&c.under[0]);
        let node = Node::Crossing(ci);
        let (mut east, mut north, mut west, mut south) =
            (vec![0u32; a], vec![0u32; b], vec![0u32; a], vec![0u32; b]);
        if a == 0 || b == 0 {
            // nothing crosses; the nonzero strand passes straight through
            for t in 0..a {
                let p = net.add_piece(2, vec![(vec![1, 0], C::one())]);
                east[t] = p[0];
                west[a - 1 - t] = p[1];
            }
            for u in 0..b {
                let p = net.add_piece(2, vec![(vec![1, 0], C::one())]);
                north[u] = p[0];
                south[b - 1 - u] = p[1];
            }
        } else {
            let mut grid = vec![vec![Vec::new(); b]; a];
            for row in grid.iter_mut() {
                for cell in row.iter_mut() {
                    // ports E N W S; over strand runs E–W
                    *cell = net.add_piece(
                        4,
                        vec![(vec![3, 2, 1, 0], a_plus.clone()), (vec![1, 0, 3, 2], a_minus.clone())],
                    );
                }
            }
            for t in 0..a {
                for u in 0..b {
                    if u + 1 < b {
                        net.connect(grid[t][u][0], grid[t][u + 1][2]);
                    }
                    if t + 1 < a {
                        net.connect(grid[t][u][3], grid[t + 1][u][1]);
                    }
                }
            }
            for t in 0..a {
                east[t] = grid[t][b - 1][0];
                west[a - 1 - t] = grid[t][0][2];
            }
            for u in 0..b {
                north[u] = grid[0][u][1];
                south[b - 1 - u] = grid[a - 1][u][3];
            }
        }
        slot_ports.insert((node, 0), east);
        slot_ports.insert((node, 1), north);
        slot_ports.insert((node, 2), west);
        slot_ports.insert((node, 3), south);
    }

    for (vi, v) in d.vertices.iter().enumerate() {
        let c: Vec<usize> = v.arcs.iter().map(|a| arc_color(a)).collect();
        let total = c[0] + c[1] + c[2];
        let x01 = (c[0] + c[1] - c[2]) / 2;
        let x12 = (c[1] + c[2] - c[0]) / 2;
        let x20 = (c[2] + c[0] - c[1]) / 2;
        let off = [0, c[0], c[0] + c[1]];
        let mut m = vec![0u8; total];
        let mut join = |s: usize, i: usize, t: usize, j: usize| {
            let (p, q) = (off[s] + i, off[t] + j);
            m[p] = q as u8;
            m[q] = p as u8;
        };
        for t in 0..x01 {
            join(0, t, 1, c[1] - 1 - t);
        }
        for t in 0..x12 {
            join(1, t, 2, c[2] - 1 - t);
        }
        for t in 0..x20 {
            join(2, t, 0, c[0] - 1 - t);
        }
        let ports = if total > 0 {
            net.add_piece(total, vec![(m, C::one())])
        } else {
            Vec::new()
        };
        for s in 0..3 {
            slot_ports.insert((Node::Vertex(vi), s), ports[off[s]..off[s] + c[s]].to_vec());
        }
    }

    let mut box_cache: HashMap<usize, BoxExpansion<C>> = HashMap::new();
    for (si, s) in d.strands.iter().enumerate() {
        let c = colors[si] as usize;
        if c == 0 {
            continue;
        }
        for (k, arc) in s.arcs.iter().enumerate() {
            let ai = layout.arc_index[arc];
            let ends = layout.arc_ends[ai];
            let box_ports = if k == 0 {
                let (terms, dn) = box_cache.entry(c).or_insert_with(|| {
                    let (terms, dn) = lift.projector(c);
                    let terms = terms
                        .into_iter()
                        .map(|(d, w)| (d.matching().iter().map(|&x| x as u8).collect(), w))
                        .collect();
                    (terms, dn)
                });
                for (&m, &e) in dn.iter() {
                    *den.entry(m).or_insert(0) += e;
                }
                Some(net.add_piece(2 * c, terms.clone()))
            } else {
                None
            };
            match (ends, box_ports) {
                (None, Some(p)) => {
                    for i in 0..c {
                        net.connect(p[c + i], p[i]);
                    }
                }
                (None, None) => unreachable!("free loops have a single arc"),
                (Some([x, y]), Some(p)) => {
                    let (px, py) = (&slot_ports[&x], &slot_ports[&y]);
                    for i in 0..c {
                        net.connect(px[i], p[i]);
                        net.connect(p[c + i], py[c - 1 - i]);
                    }
                }
                (Some([x, y]), None) => {
                    let (px, py) = (&slot_ports[&x], &slot_ports[&y]);
                    for i in 0..c {
                        net.connect(px[i], py[c - 1 - i]);
                    }
                }
            }
        }
    }
    Compiled { net, den, bottom, top }
}
