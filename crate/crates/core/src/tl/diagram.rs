use std::fmt;

use crate::error::{Error, Result};

/// Planar matching of `2n` boundary points.
///
/// Points `0..n` lie on the bottom edge and `n..2n` on the top edge, both
/// numbered left to right. `matching[p]` is the partner of `p`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TLDiagram {
    n: usize,
    matching: Vec<u16>,
}

impl TLDiagram {
    pub fn new(n: usize, matching: Vec<u16>) -> Result<Self> {
        if matching.len() != 2 * n {
            return Err(Error::InvalidDiagram(format!(
                "matching has {} entries, expected {}",
                matching.len(),
                2 * n
            )));
        }
        for (p, &q) in matching.iter().enumerate() {
            let q = q as usize;
            if q >= 2 * n || q == p || matching[q] as usize != p {
                return Err(Error::InvalidDiagram(format!("point {p} is not properly paired")));
            }
        }
        let d = Self { n, matching };
        if !d.is_planar() {
            return Err(Error::InvalidDiagram("matching is not planar".into()));
        }
        Ok(d)
    }

    pub fn identity(n: usize) -> Self {
        let mut m = vec![0u16; 2 * n];
        for i in 0..n {
            m[i] = (n + i) as u16;
            m[n + i] = i as u16;
        }
        Self { n, matching: m }
    }

    /// Cup-cap generator `e_i`, `1 ≤ i < n`.
    pub fn generator(n: usize, i: usize) -> Self {
        assert!(i >= 1 && i < n, "e_{i} is not a generator of TL_{n}");
        let mut d = Self::identity(n);
        let (a, b) = (i - 1, i);
        d.matching[a] = b as u16;
        d.matching[b] = a as u16;
        d.matching[n + a] = (n + b) as u16;
        d.matching[n + b] = (n + a) as u16;
        d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matching(&self) -> &[u16] {
        &self.matching
    }

    pub fn partner(&self, p: usize) -> usize {
        self.matching[p] as usize
    }

    // position of a point when walking the boundary: bottom left→right, then top right→left
    fn cyclic(&self, p: usize) -> usize {
        if p < self.n {
            p
        } else {
            3 * self.n - 1 - p
        }
    }

    fn is_planar(&self) -> bool {
        let mut pairs: Vec<(usize, usize)> = (0..2 * self.n)
            .filter_map(|p| {
                let q = self.partner(p);
                let (a, b) = (self.cyclic(p), self.cyclic(q));
                (a < b).then_some((a, b))
            })
            .collect();
        pairs.sort_unstable();
        // a non-crossing matching is a balanced bracket sequence around the circle
        let mut stack = Vec::new();
        let mut close = vec![usize::MAX; 2 * self.n];
        for &(a, b) in &pairs {
            close[a] = b;
        }
        for pos in 0..2 * self.n {
            if close[pos] != usize::MAX {
                stack.push(close[pos]);
            } else if stack.pop() != Some(pos) {
                return false;
            }
        }
        stack.is_empty()
    }

    /// Left-right reflection.
    pub fn mirror(&self) -> Self {
        let n = self.n;
        let flip = |p: usize| if p < n { n - 1 - p } else { n + (2 * n - 1 - p) };
        let mut m = vec![0u16; 2 * n];
        for p in 0..2 * n {
            m[flip(p)] = flip(self.partner(p)) as u16;
        }
        Self { n, matching: m }
    }

    /// Top-bottom reflection.
    pub fn flip(&self) -> Self {
        let n = self.n;
        let f = |p: usize| if p < n { p + n } else { p - n };
        let mut m = vec![0u16; 2 * n];
        for p in 0..2 * n {
            m[f(p)] = f(self.partner(p)) as u16;
        }
        Self { n, matching: m }
    }

    /// Embed into `TL_m` by adding straight strands on the right.
    pub fn embed(&self, m: usize) -> Self {
        assert!(m >= self.n);
        let n = self.n;
        let map = |p: usize| if p < n { p } else { m + (p - n) };
        let mut out = Self::identity(m).matching;
        for p in 0..2 * n {
            out[map(p)] = map(self.partner(p)) as u16;
        }
        Self { n: m, matching: out }
    }

    /// Stack `self` on top of `below`; returns the product and the number of
    /// closed loops created in the middle.
    pub fn compose(&self, below: &Self) -> Result<(Self, usize)> {
        if self.n != below.n {
            return Err(Error::StrandMismatch {
                left: self.n,
                right: below.n,
            });
        }
        Ok(self.compose_unchecked(below))
    }

    pub(crate) fn compose_unchecked(&self, below: &Self) -> (Self, usize) {
        let n = self.n;
        // nodes: below 0..2n, self 2n..4n; below's top n+i is glued to self's bottom 2n+i
        let inner = |v: usize| -> usize {
            if v < 2 * n {
                below.partner(v)
            } else {
                2 * n + self.partner(v - 2 * n)
            }
        };
        let glue = |v: usize| -> Option<usize> {
            if (n..2 * n).contains(&v) {
                Some(v + n)
            } else if (2 * n..3 * n).contains(&v) {
                Some(v - n)
            } else {
                None
            }
        };
        let outer = |v: usize| -> Option<usize> {
            if v < n {
                Some(v)
            } else if v >= 3 * n {
                Some(v - 2 * n)
            } else {
                None
            }
        };
        let mut result = vec![u16::MAX; 2 * n];
        let mut seen = vec![false; 4 * n];
        for start in (0..n).chain(3 * n..4 * n) {
            if seen[start] {
                continue;
            }
            let mut v = start;
            loop {
                seen[v] = true;
                let w = inner(v);
                seen[w] = true;
                match glue(w) {
                    Some(x) => v = x,
                    None => {
                        let (a, b) = (outer(start).unwrap(), outer(w).unwrap());
                        result[a] = b as u16;
                        result[b] = a as u16;
                        break;
                    }
                }
            }
        }
        let mut loops = 0;
        for start in n..2 * n {
            if seen[start] {
                continue;
            }
            loops += 1;
            let mut v = start;
            while !seen[v] {
                seen[v] = true;
                let w = inner(v);
                seen[w] = true;
                v = glue(w).unwrap();
            }
        }
        (Self { n, matching: result }, loops)
    }

    /// Number of circles in the standard closure (top `i` joined to bottom `i`).
    pub fn closure_loops(&self) -> usize {
        let n = self.n;
        let mut seen = vec![false; 2 * n];
        let mut loops = 0;
        for start in 0..2 * n {
            if seen[start] {
                continue;
            }
            loops += 1;
            let mut v = start;
            while !seen[v] {
                seen[v] = true;
                let w = self.partner(v);
                seen[w] = true;
                v = if w < n { w + n } else { w - n };
            }
        }
        loops
    }

    /// Every planar matching of `2n` points (Catalan many).
    pub fn enumerate(n: usize) -> Vec<Self> {
        let mut out = Vec::new();
        let mut cyc = vec![u16::MAX; 2 * n];
        fill(&mut cyc, 0, &mut |cyc| {
            // translate circle positions back to bottom/top numbering
            let from_cyc = |c: usize| if c < n { c } else { 3 * n - 1 - c };
            let mut m = vec![0u16; 2 * n];
            for c in 0..2 * n {
                m[from_cyc(c)] = from_cyc(cyc[c] as usize) as u16;
            }
            out.push(Self { n, matching: m });
        });
        out.sort();
        out
    }
}

fn fill(cyc: &mut [u16], from: usize, emit: &mut dyn FnMut(&[u16])) {
    let Some(p) = (from..cyc.len()).find(|&i| cyc[i] == u16::MAX) else {
        emit(cyc);
        return;
    };
    // partner at odd distance keeps the inside even
    let mut q = p + 1;
    while q < cyc.len() {
        if cyc[q] == u16::MAX && (p + 1..q).all(|i| cyc[i] == u16::MAX) {
            cyc[p] = q as u16;
            cyc[q] = p as u16;
            fill(cyc, p + 1, emit);
            cyc[p] = u16::MAX;
            cyc[q] = u16::MAX;
        }
        q += 2;
    }
}

impl fmt::Debug for TLDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TL{}[", self.n)?;
        let mut first = true;
        for p in 0..2 * self.n {
            let q = self.partner(p);
            if p < q {
                if !first {
                    write!(f, " ")?;
                }
                first = false;
                let name = |x: usize| {
                    if x < self.n {
                        format!("b{x}")
                    } else {
                        format!("t{}", x - self.n)
                    }
                };
                write!(f, "{}-{}", name(p), name(q))?;
            }
        }
        write!(f, "]")
    }
}
