//! Isomorphism classes of valuation graphs with the concrete weights erased.
//!
//! A class is a laminar hierarchy on `g` unlabelled leaves whose internal
//! nodes carry ranks `1..=r`, strictly increasing from the root down and using
//! every rank. Instantiating the ranks with any strictly increasing weights
//! gives a valuation graph.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::valuation::{Hierarchy, ValuationGraph, WeightMatrix};

/// Practical limit for [`enumerate_graph_classes`].
pub const MAX_CLASS_VERTICES: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GraphClass {
    g: usize,
    ranks: u32,
    canon: String,
    #[serde(skip)]
    shape: Hierarchy,
}

impl GraphClass {
    pub fn g(&self) -> usize {
        self.g
    }

    /// Number of distinct weights `r`.
    pub fn rank_count(&self) -> u32 {
        self.ranks
    }

    pub fn canonical(&self) -> &str {
        &self.canon
    }

    /// Hierarchy with ranks as node weights and leaves numbered in preorder.
    pub fn shape(&self) -> &Hierarchy {
        &self.shape
    }

    /// Weight matrix obtained by giving rank `i` the weight `weights[i - 1]`.
    pub fn instantiate_weights(&self, weights: &[u32]) -> Result<WeightMatrix> {
        if weights.len() != self.ranks as usize {
            return Err(Error::InvalidType(format!(
                "class has {} ranks, {} weights given",
                self.ranks,
                weights.len()
            )));
        }
        if weights.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidType("rank weights must be strictly increasing".into()));
        }
        Ok(self.shape.map_weights(&|r| weights[r as usize - 1]).to_weights(self.g))
    }

    pub fn instantiate(&self, weights: &[u32]) -> Result<ValuationGraph> {
        ValuationGraph::from_weights(self.instantiate_weights(weights)?)
    }
}

fn star(_: usize) -> String {
    "*".to_string()
}

/// All classes on `g` vertices, sorted by rank count then canonical encoding.
/// `a_g` is the length of the result.
pub fn enumerate_graph_classes(g: usize) -> Vec<GraphClass> {
    if g == 0 {
        return Vec::new();
    }
    let max_rank = (g as u32 - 1).max(1);
    let mut memo = HashMap::new();
    let raw = subtrees(g, 1, max_rank, &mut memo);
    let mut by_canon: BTreeMap<(u32, String), Hierarchy> = BTreeMap::new();
    for h in raw {
        let (dense, r) = densify(&h);
        let sorted = dense.sorted(&star).relabel_preorder();
        let canon = sorted.canonical(&star);
        by_canon.entry((r, canon)).or_insert(sorted);
    }
    by_canon
        .into_iter()
        .map(|((ranks, canon), shape)| GraphClass { g, ranks, canon, shape })
        .collect()
}

fn densify(h: &Hierarchy) -> (Hierarchy, u32) {
    let mut used: Vec<u32> = h.internal_nodes().into_iter().map(|(w, _)| w).collect();
    used.sort_unstable();
    used.dedup();
    let dense = h.map_weights(&|w| used.binary_search(&w).expect("rank present") as u32 + 1);
    (dense, used.len() as u32)
}

/// Ranked subtrees with `size` leaves whose root rank is at least `min_rank`.
fn subtrees(
    size: usize,
    min_rank: u32,
    max_rank: u32,
    memo: &mut HashMap<(usize, u32), Vec<Hierarchy>>,
) -> Vec<Hierarchy> {
    if size == 1 {
        return vec![Hierarchy::Leaf(0)];
    }
    if let Some(hit) = memo.get(&(size, min_rank)) {
        return hit.clone();
    }
    let mut out = Vec::new();
    for rank in min_rank..=max_rank {
        for parts in partitions(size, size) {
            if parts.len() < 2 {
                continue;
            }
            // group equal part sizes so each group picks a multiset of subtrees
            let mut groups: Vec<(usize, usize)> = Vec::new();
            for &s in &parts {
                match groups.last_mut() {
                    Some((sz, c)) if *sz == s => *c += 1,
                    _ => groups.push((s, 1)),
                }
            }
            let options: Vec<Vec<Vec<Hierarchy>>> = groups
                .iter()
                .map(|&(s, c)| {
                    let pool = subtrees(s, rank + 1, max_rank, memo);
                    multisets(pool.len(), c)
                        .into_iter()
                        .map(|idx| idx.into_iter().map(|i| pool[i].clone()).collect())
                        .collect()
                })
                .collect();
            if options.iter().any(Vec::is_empty) {
                continue;
            }
            let mut pick = vec![0usize; options.len()];
            loop {
                let children: Vec<Hierarchy> = pick
                    .iter()
                    .enumerate()
                    .flat_map(|(gi, &oi)| options[gi][oi].iter().cloned())
                    .collect();
                out.push(Hierarchy::Node { weight: rank, children });
                let mut pos = 0;
                while pos < pick.len() {
                    pick[pos] += 1;
                    if pick[pos] < options[pos].len() {
                        break;
                    }
                    pick[pos] = 0;
                    pos += 1;
                }
                if pos == pick.len() {
                    break;
                }
            }
        }
    }
    memo.insert((size, min_rank), out.clone());
    out
}

/// Integer partitions of `n` into parts of size at most `max`, non-increasing.
fn partitions(n: usize, max: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in (1..=max.min(n)).rev() {
        for mut rest in partitions(n - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Non-decreasing index tuples of length `c` drawn from `0..pool`.
fn multisets(pool: usize, c: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, pool: usize, c: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == c {
            out.push(cur.clone());
            return;
        }
        for i in start..pool {
            cur.push(i);
            go(i, pool, c, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, pool, c, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_class_counts() {
        let counts: Vec<usize> = (1..=5).map(|g| enumerate_graph_classes(g).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 6, 20]);
    }

    #[test]
    fn instantiations_are_valid() {
        for g in 2..=5 {
            for class in enumerate_graph_classes(g) {
                let weights: Vec<u32> = (0..class.rank_count()).map(|r| 2 * r + 1).collect();
                let graph = class.instantiate(&weights).unwrap();
                assert!(graph.check_triangle());
                assert_eq!(graph.distinct_weights(), weights.as_slice());
            }
        }
    }

    #[test]
    fn rejects_bad_weights() {
        let class = &enumerate_graph_classes(3)[1];
        assert_eq!(class.rank_count(), 2);
        assert!(class.instantiate(&[1, 1]).is_err());
        assert!(class.instantiate(&[0]).is_err());
    }

    #[test]
    fn partition_helper() {
        assert_eq!(partitions(4, 4).len(), 5);
        assert_eq!(multisets(3, 2).len(), 6);
    }
}
