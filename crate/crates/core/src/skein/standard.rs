//! Diagrams used by the closed-form checks.

use super::diagram::{Boundary, Crossing, FramedGraphDiagram, Role, Strand, Vertex};

fn s(x: &str) -> String {
    x.to_string()
}

fn strand(id: &str, arcs: &[&str], color: u32, framing2: i32) -> Strand {
    Strand {
        id: s(id),
        arcs: arcs.iter().map(|a| s(a)).collect(),
        framing2,
        role: Role::Color,
        color: Some(color),
    }
}

fn omega(id: &str, arcs: &[&str], framing2: i32) -> Strand {
    Strand {
        id: s(id),
        arcs: arcs.iter().map(|a| s(a)).collect(),
        framing2,
        role: Role::Omega,
        color: None,
    }
}

fn crossing(id: &str, over: [&str; 2], under: [&str; 2], sign: i8) -> Crossing {
    Crossing {
        id: s(id),
        over: [s(over[0]), s(over[1])],
        under: [s(under[0]), s(under[1])],
        sign,
    }
}

fn vertex(id: &str, arcs: [&str; 3]) -> Vertex {
    Vertex {
        id: s(id),
        arcs: [s(arcs[0]), s(arcs[1]), s(arcs[2])],
    }
}

fn boundary(bottom: &[&str], top: &[&str]) -> Option<Boundary> {
    Some(Boundary {
        bottom: bottom.iter().map(|a| s(a)).collect(),
        top: top.iter().map(|a| s(a)).collect(),
    })
}

/// Crossingless unknot.
pub fn unknot(color: u32, framing2: i32) -> FramedGraphDiagram {
    FramedGraphDiagram {
        strands: vec![strand("K", &["k"], color, framing2)],
        ..Default::default()
    }
}

/// Unknot drawn with one curl of the given sign, blackboard framed.
pub fn kinked_unknot(color: u32, sign: i8) -> FramedGraphDiagram {
    FramedGraphDiagram {
        crossings: vec![crossing("x", ["b", "a"], ["a", "b"], sign)],
        strands: vec![strand("K", &["a", "b"], color, 0)],
        ..Default::default()
    }
}

/// Ω-colored unknot.
pub fn omega_unknot_diagram(framing2: i32) -> FramedGraphDiagram {
    FramedGraphDiagram {
        strands: vec![omega("K", &["k"], framing2)],
        ..Default::default()
    }
}

/// Positive Hopf link, components `K1`, `K2`.
pub fn hopf(c1: u32, c2: u32, framing2_1: i32, framing2_2: i32) -> FramedGraphDiagram {
    FramedGraphDiagram {
        crossings: vec![
            crossing("x1", ["p", "q"], ["s", "t"], 1),
            crossing("x2", ["t", "s"], ["q", "p"], 1),
        ],
        strands: vec![
            strand("K1", &["p", "q"], c1, framing2_1),
            strand("K2", &["s", "t"], c2, framing2_2),
        ],
        ..Default::default()
    }
}

/// Hopf link with both components Ω-colored.
pub fn omega_hopf(framing2_1: i32, framing2_2: i32) -> FramedGraphDiagram {
    let mut d = hopf(0, 0, framing2_1, framing2_2);
    for st in &mut d.strands {
        st.role = Role::Omega;
        st.color = None;
    }
    d
}

/// Three-crossing trefoil with all crossings positive (writhe 3).
pub fn trefoil(color: u32, framing2: i32) -> FramedGraphDiagram {
    FramedGraphDiagram {
        crossings: vec![
            crossing("x1", ["4", "5"], ["1", "2"], 1),
            crossing("x2", ["6", "1"], ["3", "4"], 1),
            crossing("x3", ["2", "3"], ["5", "6"], 1),
        ],
        strands: vec![strand("K", &["1", "2", "3", "4", "5", "6"], color, framing2)],
        ..Default::default()
    }
}

/// Two-component unlink, Ω-colored, with the given framings (doubled).
pub fn omega_unlink(framings2: &[i32]) -> FramedGraphDiagram {
    FramedGraphDiagram {
        strands: framings2
            .iter()
            .enumerate()
            .map(|(i, &f)| {
                let id = format!("K{}", i + 1);
                let arc = format!("k{}", i + 1);
                omega(&id, &[&arc], f)
            })
            .collect(),
        ..Default::default()
    }
}

/// The 0-framed 2-component unlink after sliding `K1` over `K2`: the slid
/// component runs over `K2` twice with opposite signs.
pub fn omega_handleslid_unlink() -> FramedGraphDiagram {
    FramedGraphDiagram {
        crossings: vec![
            crossing("x1", ["m", "n"], ["s", "t"], 1),
            crossing("x2", ["n", "m"], ["t", "s"], -1),
        ],
        strands: vec![omega("K1", &["m", "n"], 0), omega("K2", &["s", "t"], 0)],
        ..Default::default()
    }
}

/// Planar θ-graph with edge colors `a`, `b`, `c`.
pub fn theta_graph(a: u32, b: u32, c: u32) -> FramedGraphDiagram {
    FramedGraphDiagram {
        vertices: vec![vertex("v1", ["a", "c", "b"]), vertex("v2", ["a", "b", "c"])],
        strands: vec![
            strand("ea", &["a"], a, 0),
            strand("eb", &["b"], b, 0),
            strand("ec", &["c"], c, 0),
        ],
        ..Default::default()
    }
}

/// Planar tetrahedral graph; labels in `a, b, c, d, e, f` order, vertex
/// triples `(a,b,c)`, `(a,e,f)`, `(b,f,d)`, `(c,e,d)`.
pub fn tet_graph(l: [u32; 6]) -> FramedGraphDiagram {
    let names = ["a", "b", "c", "d", "e", "f"];
    FramedGraphDiagram {
        vertices: vec![
            vertex("v1", ["a", "b", "c"]),
            vertex("v2", ["f", "a", "e"]),
            vertex("v3", ["d", "b", "f"]),
            vertex("v4", ["e", "c", "d"]),
        ],
        strands: names
            .iter()
            .zip(l)
            .map(|(n, c)| strand(&format!("e{n}"), &[n], c, 0))
            .collect(),
        ..Default::default()
    }
}

/// Vertical strands of the given colors, west to east, encircled by a
/// 0-framed Ω-colored unknot.
pub fn omega_ring(colors: &[u32]) -> FramedGraphDiagram {
    ring(Role::Omega, None, colors)
}

/// Vertical strands of the given colors encircled by a 0-framed unknot of
/// color `n`.
pub fn colored_ring(n: u32, colors: &[u32]) -> FramedGraphDiagram {
    ring(Role::Color, Some(n), colors)
}

fn ring(role: Role, color: Option<u32>, colors: &[u32]) -> FramedGraphDiagram {
    let k = colors.len();
    assert!(k >= 1);
    let mut crossings = Vec::new();
    let mut strands = Vec::new();
    let lower = |i: usize| if i + 1 == k { s("e") } else { format!("l{}", i + 1) };
    let upper_in = |i: usize| if i + 1 == k { s("e") } else { format!("u{}", i + 1) };
    let upper_out = |i: usize| if i == 0 { s("w") } else { format!("u{i}") };
    for i in 0..k {
        let (b, m, t) = (format!("b{i}"), format!("m{i}"), format!("t{i}"));
        let ring_in = if i == 0 { s("w") } else { format!("l{i}") };
        crossings.push(Crossing {
            id: format!("L{i}"),
            over: [ring_in, lower(i)],
            under: [b.clone(), m.clone()],
            sign: 1,
        });
        crossings.push(Crossing {
            id: format!("U{i}"),
            over: [m.clone(), t.clone()],
            under: [upper_in(i), upper_out(i)],
            sign: 1,
        });
        strands.push(Strand {
            id: format!("S{i}"),
            arcs: vec![b, m, t],
            framing2: 0,
            role: Role::Color,
            color: Some(colors[i]),
        });
    }
    let mut ring: Vec<String> = (1..k).map(|i| format!("l{i}")).collect();
    ring.push(s("e"));
    ring.extend((1..k).rev().map(|i| format!("u{i}")));
    ring.push(s("w"));
    strands.push(Strand {
        id: s("ring"),
        arcs: ring,
        framing2: 0,
        role,
        color,
    });
    FramedGraphDiagram {
        crossings,
        vertices: Vec::new(),
        strands,
        boundary: Some(Boundary {
            bottom: (0..k).map(|i| format!("b{i}")).collect(),
            top: (0..k).map(|i| format!("t{i}")).collect(),
        }),
    }
}

/// Vertical strands of the given colors, west to east.
pub fn parallel(colors: &[u32]) -> FramedGraphDiagram {
    let arcs: Vec<String> = (0..colors.len()).map(|i| format!("p{i}")).collect();
    let refs: Vec<&str> = arcs.iter().map(String::as_str).collect();
    FramedGraphDiagram {
        strands: colors
            .iter()
            .zip(&arcs)
            .map(|(&c, a)| strand(&format!("S{a}"), &[a], c, 0))
            .collect(),
        boundary: boundary(&refs, &refs),
        ..Default::default()
    }
}

/// A vertical strand of color `a` with one curl of the given sign.
pub fn curl(a: u32, sign: i8) -> FramedGraphDiagram {
    FramedGraphDiagram {
        crossings: vec![crossing("x", ["a", "k"], ["k", "b"], sign)],
        strands: vec![strand("S", &["a", "k", "b"], a, 0)],
        boundary: boundary(&["a"], &["b"]),
        ..Default::default()
    }
}

/// Braid on `n` upward strands of color 1. Generator `±i` (1-based) crosses
/// the strands at positions `i`, `i+1`; for `+i` the western strand passes
/// over, giving a positive crossing.
pub fn braid(n: usize, word: &[i32]) -> FramedGraphDiagram {
    let mut arcs: Vec<Vec<String>> = (0..n).map(|p| vec![format!("s{p}_0")]).collect();
    // strand occupying each position
    let mut at: Vec<usize> = (0..n).collect();
    let mut crossings = Vec::new();
    for (k, &g) in word.iter().enumerate() {
        let i = g.unsigned_abs() as usize - 1;
        assert!(g != 0 && i + 1 < n, "generator {g} out of range");
        let (w, e) = (at[i], at[i + 1]);
        let w_in = arcs[w].last().unwrap().clone();
        let e_in = arcs[e].last().unwrap().clone();
        let w_out = format!("s{w}_{}", arcs[w].len());
        let e_out = format!("s{e}_{}", arcs[e].len());
        let (over, under) = if g > 0 {
            ([w_in, w_out.clone()], [e_in, e_out.clone()])
        } else {
            ([e_in, e_out.clone()], [w_in, w_out.clone()])
        };
        crossings.push(Crossing {
            id: format!("c{k}"),
            over,
            under,
            sign: if g > 0 { 1 } else { -1 },
        });
        arcs[w].push(w_out);
        arcs[e].push(e_out);
        at.swap(i, i + 1);
    }
    let bottom: Vec<String> = (0..n).map(|p| arcs[p][0].clone()).collect();
    let top: Vec<String> = at.iter().map(|&st| arcs[st].last().unwrap().clone()).collect();
    FramedGraphDiagram {
        crossings,
        vertices: Vec::new(),
        strands: arcs
            .iter()
            .enumerate()
            .map(|(p, a)| Strand {
                id: format!("S{p}"),
                arcs: a.clone(),
                framing2: 0,
                role: Role::Color,
                color: Some(1),
            })
            .collect(),
        boundary: Some(Boundary { bottom, top }),
    }
}

/// Positive braid word for the half twist on `n` strands.
pub fn half_twist_word(n: usize) -> Vec<i32> {
    (1..n as i32).flat_map(|k| (1..=k).rev()).collect()
}

/// Right side of the two-strand fusion: the strands cut and rejoined as a
/// cap below and a cup above.
pub fn cap_cup(a: u32) -> FramedGraphDiagram {
    FramedGraphDiagram {
        strands: vec![strand("low", &["x"], a, 0), strand("high", &["y"], a, 0)],
        boundary: boundary(&["x", "x"], &["y", "y"]),
        ..Default::default()
    }
}

/// Right side of the three-strand fusion: a vertex below and one above.
pub fn vertex_pair(a: u32, b: u32, c: u32) -> FramedGraphDiagram {
    FramedGraphDiagram {
        vertices: vec![vertex("vb", ["x1", "x2", "x3"]), vertex("vt", ["y3", "y2", "y1"])],
        strands: vec![
            strand("x1s", &["x1"], a, 0),
            strand("x2s", &["x2"], b, 0),
            strand("x3s", &["x3"], c, 0),
            strand("y1s", &["y1"], a, 0),
            strand("y2s", &["y2"], b, 0),
            strand("y3s", &["y3"], c, 0),
        ],
        boundary: boundary(&["x1", "x2", "x3"], &["y1", "y2", "y3"]),
        ..Default::default()
    }
}

/// Vertical strand of color `a`.
pub fn straight(a: u32) -> FramedGraphDiagram {
    FramedGraphDiagram {
        strands: vec![strand("S", &["x"], a, 0)],
        boundary: boundary(&["x"], &["x"]),
        ..Default::default()
    }
}

/// A strand of color `a` entering from below, splitting into a `b`,`c`
/// bubble and leaving above with color `a2`.
pub fn bubble(a: u32, b: u32, c: u32, a2: u32) -> FramedGraphDiagram {
    FramedGraphDiagram {
        vertices: vec![vertex("low", ["ec", "eb", "ea"]), vertex("high", ["ea2", "eb", "ec"])],
        strands: vec![
            strand("A", &["ea"], a, 0),
            strand("B", &["eb"], b, 0),
            strand("C", &["ec"], c, 0),
            strand("A2", &["ea2"], a2, 0),
        ],
        boundary: boundary(&["ea"], &["ea2"]),
        ..Default::default()
    }
}

/// Triangle with legs `e`, `b`, `c` running down to the boundary and inner
/// edges `x` (between the `e` and `b` corners), `y` (`b`–`c`), `z` (`c`–`e`).
pub fn triangle(e: u32, b: u32, c: u32, x: u32, y: u32, z: u32) -> FramedGraphDiagram {
    FramedGraphDiagram {
        vertices: vec![
            vertex("P", ["z", "le", "x"]),
            vertex("Q", ["y", "x", "lb"]),
            vertex("R", ["z", "y", "lc"]),
        ],
        strands: vec![
            strand("E", &["le"], e, 0),
            strand("B", &["lb"], b, 0),
            strand("C", &["lc"], c, 0),
            strand("X", &["x"], x, 0),
            strand("Y", &["y"], y, 0),
            strand("Z", &["z"], z, 0),
        ],
        boundary: boundary(&["le", "lb", "lc"], &[]),
        ..Default::default()
    }
}

/// Single vertex with legs `e`, `b`, `c` running down to the boundary.
pub fn tripod(e: u32, b: u32, c: u32) -> FramedGraphDiagram {
    FramedGraphDiagram {
        vertices: vec![vertex("V", ["le", "lb", "lc"])],
        strands: vec![strand("E", &["le"], e, 0), strand("B", &["lb"], b, 0), strand("C", &["lc"], c, 0)],
        boundary: boundary(&["le", "lb", "lc"], &[]),
        ..Default::default()
    }
}

/// `H`-shaped network: top legs `a`, `b` meet in a vertical edge `j`, which
/// splits into bottom legs `d`, `c`.
pub fn h_network(a: u32, b: u32, c: u32, d: u32, j: u32) -> FramedGraphDiagram {
    FramedGraphDiagram {
        vertices: vec![vertex("T", ["lb", "la", "j"]), vertex("B", ["j", "ld", "lc"])],
        strands: vec![
            strand("A", &["la"], a, 0),
            strand("Bs", &["lb"], b, 0),
            strand("C", &["lc"], c, 0),
            strand("D", &["ld"], d, 0),
            strand("J", &["j"], j, 0),
        ],
        boundary: boundary(&["ld", "lc"], &["la", "lb"]),
        ..Default::default()
    }
}

/// `I`-shaped network: left legs `a` (top), `d` (bottom) and right legs `b`,
/// `c` joined by a horizontal edge `i`.
pub fn i_network(a: u32, b: u32, c: u32, d: u32, i: u32) -> FramedGraphDiagram {
    FramedGraphDiagram {
        vertices: vec![vertex("Lv", ["i", "la", "ld"]), vertex("Rv", ["lb", "i", "lc"])],
        strands: vec![
            strand("A", &["la"], a, 0),
            strand("Bs", &["lb"], b, 0),
            strand("C", &["lc"], c, 0),
            strand("D", &["ld"], d, 0),
            strand("I", &["i"], i, 0),
        ],
        boundary: boundary(&["ld", "lc"], &["la", "lb"]),
        ..Default::default()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_builders_are_planar() {
        let ds = [
            unknot(2, 1),
            kinked_unknot(1, 1),
            kinked_unknot(1, -1),
            hopf(1, 2, 0, 0),
            trefoil(1, 0),
            omega_unlink(&[0, 0]),
            omega_handleslid_unlink(),
            theta_graph(2, 2, 2),
            tet_graph([2, 2, 2, 2, 2, 2]),
            omega_ring(&[1]),
            omega_ring(&[1, 1]),
            omega_ring(&[1, 1, 2]),
            colored_ring(2, &[1, 3]),
            parallel(&[1, 2, 0]),
            curl(2, 1),
            curl(2, -1),
            braid(4, &half_twist_word(4)),
            braid(3, &[1, -2, 1, 2]),
            cap_cup(2),
            vertex_pair(1, 1, 2),
            straight(3),
            bubble(2, 1, 1, 2),
            triangle(2, 2, 2, 1, 1, 1),
            tripod(2, 2, 2),
            h_network(1, 1, 1, 1, 2),
            i_network(1, 1, 1, 1, 2),
        ];
        for (i, d) in ds.iter().enumerate() {
            assert!(d.violations().is_empty(), "#{i}: {:?}", d.violations());
        }
    }
}
