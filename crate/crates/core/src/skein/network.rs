//! Planar tensor-network contraction for Kauffman-bracket evaluation.
//!
//! A network is a set of pieces (resolved crossings, projector boxes, fixed
//! connectors), each a weighted sum of planar matchings of its ports, plus
//! wires pairing ports. Contracting piece by piece keeps a table from the
//! connectivity pattern of the open ends to the accumulated coefficient;
//! identical patterns merge, which is what keeps cabled diagrams tractable.

use std::collections::HashMap;
use std::ops::{Add, Mul};

use num_traits::{One, Zero};

pub(crate) trait Coeff:
    Clone + Zero + One + Add<Output = Self> + Mul<Output = Self> + Send + Sync
{
}

impl<T> Coeff for T where T: Clone + Zero + One + Add<Output = T> + Mul<Output = T> + Send + Sync {}

const NONE: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Owner {
    Piece(u32, u8),
    Terminal(u32),
}

pub(crate) struct Piece<C> {
    ports: Vec<u32>,
    // local matching (partner index per local port) with its weight
    terms: Vec<(Vec<u8>, C)>,
}

pub(crate) struct Network<C> {
    owner: Vec<Owner>,
    wire: Vec<u32>,
    pieces: Vec<Piece<C>>,
    terminals: Vec<u32>,
}

impl<C: Coeff> Network<C> {
    pub fn new() -> Self {
        Self {
            owner: Vec::new(),
            wire: Vec::new(),
            pieces: Vec::new(),
            terminals: Vec::new(),
        }
    }

    /// Add a piece with `arity` ports; returns the global port ids.
    pub fn add_piece(&mut self, arity: usize, terms: Vec<(Vec<u8>, C)>) -> Vec<u32> {
        debug_assert!(terms.iter().all(|(m, _)| m.len() == arity));
        let idx = self.pieces.len() as u32;
        let ports: Vec<u32> = (0..arity)
            .map(|i| {
                self.owner.push(Owner::Piece(idx, i as u8));
                self.wire.push(NONE);
                (self.owner.len() - 1) as u32
            })
            .collect();
        self.pieces.push(Piece {
            ports: ports.clone(),
            terms,
        });
        ports
    }

    /// Add an open boundary point; terminals are numbered in creation order.
    pub fn add_terminal(&mut self) -> u32 {
        let t = self.terminals.len() as u32;
        self.owner.push(Owner::Terminal(t));
        self.wire.push(NONE);
        let port = (self.owner.len() - 1) as u32;
        self.terminals.push(port);
        port
    }

    pub fn connect(&mut self, a: u32, b: u32) {
        assert!(self.wire[a as usize] == NONE && self.wire[b as usize] == NONE && a != b);
        self.wire[a as usize] = b;
        self.wire[b as usize] = a;
    }

    fn order(&self) -> Vec<usize> {
        let n = self.pieces.len();
        let mut done = vec![false; n];
        let mut processed_port = vec![false; self.owner.len()];
        for &t in &self.terminals {
            processed_port[t as usize] = true;
        }
        let mut order = Vec::with_capacity(n);
        for _ in 0..n {
            let mut best: Option<(i64, usize)> = None;
            for (i, p) in self.pieces.iter().enumerate() {
                if done[i] {
                    continue;
                }
                let mut closed = 0i64;
                let mut opened = 0i64;
                for &port in &p.ports {
                    let q = self.wire[port as usize] as usize;
                    let own = matches!(self.owner[q], Owner::Piece(j, _) if j as usize == i);
                    if processed_port[q] || own {
                        closed += 1;
                    } else {
                        opened += 1;
                    }
                }
                let score = closed - opened;
                if best.is_none_or(|(s, _)| score > s) {
                    best = Some((score, i));
                }
            }
            let (_, i) = best.unwrap();
            done[i] = true;
            for &port in &self.pieces[i].ports {
                processed_port[port as usize] = true;
            }
            order.push(i);
        }
        order
    }

    /// Contract everything. Returns a map from the matching of the terminals
    /// (partner terminal index per terminal) to its coefficient.
    pub fn contract(&self, delta: &C) -> HashMap<Vec<u16>, C> {
        for (p, &w) in self.wire.iter().enumerate() {
            assert!(w != NONE, "port {p} is not wired");
        }
        let b = self.terminals.len();
        let mut powers = vec![C::one()];

        // slots: terminals first, then frontier ports (sorted by id)
        let mut frontier: Vec<u32> = Vec::new();
        let mut init = vec![0u16; b];
        for (i, &t) in self.terminals.iter().enumerate() {
            let q = self.wire[t as usize];
            match self.owner[q as usize] {
                Owner::Terminal(j) => init[i] = j as u16,
                Owner::Piece(..) => frontier.push(t),
            }
        }
        frontier.sort_unstable();
        // terminal i whose wire leads into a piece is paired with its own port as a frontier slot
        for (i, &t) in self.terminals.iter().enumerate() {
            if let Ok(pos) = frontier.binary_search(&t) {
                init[i] = (b + pos) as u16;
            }
        }
        let mut key = init.clone();
        for pos in 0..frontier.len() {
            let t = frontier[pos];
            let Owner::Terminal(j) = self.owner[t as usize] else { unreachable!() };
            key.push(j as u16);
        }
        let mut states: HashMap<Vec<u16>, C> = HashMap::new();
        states.insert(key, C::one());
        let mut processed = vec![false; self.owner.len()];
        for &t in &self.terminals {
            processed[t as usize] = true;
        }

        for pi in self.order() {
            let piece = &self.pieces[pi];
            let d = piece.ports.len();
            let s_old = b + frontier.len();
            // wire partner of each local port in the step graph
            let mut wire_node = vec![NONE; s_old + d];
            let mut consumed = vec![false; frontier.len()];
            let mut new_front: Vec<u32> = Vec::new();
            for (i, &port) in piece.ports.iter().enumerate() {
                let q = self.wire[port as usize];
                if let Ok(pos) = frontier.binary_search(&q) {
                    consumed[pos] = true;
                    wire_node[s_old + i] = (b + pos) as u32;
                    wire_node[b + pos] = (s_old + i) as u32;
                } else if let Owner::Piece(j, l) = self.owner[q as usize] {
                    if j as usize == pi {
                        wire_node[s_old + i] = (s_old + l as usize) as u32;
                    } else {
                        debug_assert!(!processed[q as usize]);
                        new_front.push(port);
                    }
                } else {
                    unreachable!("terminal wires are in the initial frontier");
                }
            }
            let mut next_front: Vec<u32> = frontier
                .iter()
                .zip(&consumed)
                .filter(|(_, &c)| !c)
                .map(|(&p, _)| p)
                .chain(new_front.iter().copied())
                .collect();
            next_front.sort_unstable();
            // new slot of each endpoint node in the step graph
            let mut slot_of = vec![NONE; s_old + d];
            for i in 0..b {
                slot_of[i] = i as u32;
            }
            for (pos, &p) in frontier.iter().enumerate() {
                if !consumed[pos] {
                    slot_of[b + pos] = (b + next_front.binary_search(&p).unwrap()) as u32;
                }
            }
            for (i, &port) in piece.ports.iter().enumerate() {
                if let Ok(pos) = next_front.binary_search(&port) {
                    slot_of[s_old + i] = (b + pos) as u32;
                }
            }
            let s_new = b + next_front.len();

            let mut next: HashMap<Vec<u16>, C> = HashMap::with_capacity(states.len());
            let mut inner = vec![0u32; s_old + d];
            let mut seen = vec![false; s_old + d];
            for (state, coeff) in &states {
                for (term, w) in &piece.terms {
                    for j in 0..s_old {
                        inner[j] = state[j] as u32;
                    }
                    for i in 0..d {
                        inner[s_old + i] = (s_old + term[i] as usize) as u32;
                    }
                    seen.iter_mut().for_each(|x| *x = false);
                    let mut out = vec![0u16; s_new];
                    for start in 0..s_old + d {
                        if slot_of[start] == NONE || seen[start] {
                            continue;
                        }
                        let mut v = start;
                        let end = loop {
                            seen[v] = true;
                            let u = inner[v] as usize;
                            seen[u] = true;
                            let x = wire_node[u];
                            if x == NONE {
                                break u;
                            }
                            v = x as usize;
                        };
                        out[slot_of[start] as usize] = slot_of[end] as u16;
                        out[slot_of[end] as usize] = slot_of[start] as u16;
                    }
                    let mut loops = 0usize;
                    for start in 0..s_old + d {
                        if seen[start] {
                            continue;
                        }
                        loops += 1;
                        let mut v = start;
                        while !seen[v] {
                            seen[v] = true;
                            let u = inner[v] as usize;
                            seen[u] = true;
                            v = wire_node[u] as usize;
                        }
                    }
                    while powers.len() <= loops {
                        let p = powers.last().unwrap().clone() * delta.clone();
                        powers.push(p);
                    }
                    let add = coeff.clone() * w.clone() * powers[loops].clone();
                    match next.get_mut(&out) {
                        Some(slot) => {
                            let old = std::mem::replace(slot, C::zero());
                            *slot = old + add;
                        }
                        None => {
                            next.insert(out, add);
                        }
                    }
                }
            }
            next.retain(|_, v| !v.is_zero());
            states = next;
            frontier = next_front;
            for &port in &piece.ports {
                processed[port as usize] = true;
            }
        }
        debug_assert!(frontier.is_empty());
        states
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{loop_value, LaurentScalar};

    fn crossing_terms() -> Vec<(Vec<u8>, LaurentScalar)> {
        // ports E N W S
        vec![
            (vec![3, 2, 1, 0], LaurentScalar::a_pow(1)),
            (vec![1, 0, 3, 2], LaurentScalar::a_pow(-1)),
        ]
    }

    #[test]
    fn single_loop() {
        let mut net: Network<LaurentScalar> = Network::new();
        let p = net.add_piece(2, vec![(vec![1, 0], LaurentScalar::one())]);
        net.connect(p[0], p[1]);
        let out = net.contract(&loop_value());
        assert_eq!(out.get(&vec![]).cloned(), Some(loop_value()));
    }

    #[test]
    fn kinked_unknot() {
        // E-S joined by a wire, W-N joined: a curl
        let mut net: Network<LaurentScalar> = Network::new();
        let p = net.add_piece(4, crossing_terms());
        net.connect(p[0], p[3]);
        net.connect(p[1], p[2]);
        let out = net.contract(&loop_value());
        let d = loop_value();
        // A·δ² + A^{-1}·δ for this curl
        let expect = &(&LaurentScalar::a_pow(1) * &(&d * &d)) + &(&LaurentScalar::a_pow(-1) * &d);
        assert_eq!(out[&vec![]], expect);
    }

    #[test]
    fn terminals_pass_through() {
        let mut net: Network<LaurentScalar> = Network::new();
        let t0 = net.add_terminal();
        let t1 = net.add_terminal();
        net.connect(t0, t1);
        let out = net.contract(&loop_value());
        assert_eq!(out[&vec![1, 0]], LaurentScalar::one());
    }
}
