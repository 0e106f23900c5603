use std::fmt;

use serde::Serialize;

/// Symmetric `g x g` matrix of edge weights. The diagonal is unused and kept
/// at zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct WeightMatrix {
    g: usize,
    w: Vec<u32>,
}

impl WeightMatrix {
    pub fn new(g: usize) -> Self {
        Self { g, w: vec![0; g * g] }
    }

    pub fn from_fn(g: usize, f: impl Fn(usize, usize) -> u32) -> Self {
        let mut out = Self::new(g);
        for i in 0..g {
            for j in i + 1..g {
                out.set(i, j, f(i, j));
            }
        }
        out
    }

    /// Build from the upper triangle listed row by row: `l_01, l_02, ..., l_12, ...`.
    pub fn from_upper(g: usize, upper: &[u32]) -> Option<Self> {
        if upper.len() != g * g.saturating_sub(1) / 2 {
            return None;
        }
        let mut out = Self::new(g);
        let mut it = upper.iter();
        for i in 0..g {
            for j in i + 1..g {
                out.set(i, j, *it.next()?);
            }
        }
        Some(out)
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.w[i * self.g + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: u32) {
        self.w[i * self.g + j] = value;
        self.w[j * self.g + i] = value;
    }

    pub fn upper(&self) -> Vec<u32> {
        self.pairs().map(|(i, j)| self.get(i, j)).collect()
    }

    /// Vertex pairs `i < j` in lexicographic order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.g).flat_map(move |i| (i + 1..self.g).map(move |j| (i, j)))
    }

    pub fn distinct_weights(&self) -> Vec<u32> {
        let mut ws = self.upper();
        ws.sort_unstable();
        ws.dedup();
        ws
    }

    pub fn max_weight(&self) -> Option<u32> {
        self.upper().into_iter().max()
    }

    /// Ultrametric condition on every triple: the two smallest of the three
    /// weights are equal.
    pub fn is_ultrametric(&self) -> bool {
        let g = self.g;
        for a in 0..g {
            for b in a + 1..g {
                for c in b + 1..g {
                    let mut t = [self.get(a, b), self.get(a, c), self.get(b, c)];
                    t.sort_unstable();
                    if t[0] != t[1] {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Relabel vertices: the result has `out[perm[i]][perm[j]] = self[i][j]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut out = Self::new(self.g);
        for (i, j) in self.pairs() {
            out.set(perm[i], perm[j], self.get(i, j));
        }
        out
    }
}

impl fmt::Display for WeightMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.upper().iter().map(u32::to_string).collect();
        write!(f, "{}", parts.join(" "))
    }
}
