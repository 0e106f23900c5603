//! Permissible spanning trees and their linked cells.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::valuation::{ValuationGraph, WeightMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct TreeEdge {
    pub u: usize,
    pub v: usize,
    pub weight: u32,
}

/// Maximal set of equal-weight tree edges joined through tree edges of at
/// least that weight. `edges` index into [`PermissibleTree::edges`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinkedCell {
    pub weight: u32,
    pub edges: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PermissibleTree {
    g: usize,
    edges: Vec<TreeEdge>,
    cells: Vec<LinkedCell>,
}

impl PermissibleTree {
    /// Wrap an edge list and derive its linked cells. The edges must form a
    /// spanning tree on `g` vertices.
    pub fn new(g: usize, edges: Vec<TreeEdge>) -> Result<Self> {
        check_spanning_tree(g, &edges)?;
        let cells = linked_cells(g, &edges);
        Ok(Self { g, edges, cells })
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn edges(&self) -> &[TreeEdge] {
        &self.edges
    }

    pub fn cells(&self) -> &[LinkedCell] {
        &self.cells
    }

    /// Sorted multiset `{(weight, |cell|)}`; identical for every permissible
    /// tree of one graph.
    pub fn cell_profile(&self) -> Vec<(u32, usize)> {
        let mut out: Vec<(u32, usize)> = self.cells.iter().map(|c| (c.weight, c.edges.len())).collect();
        out.sort_unstable();
        out
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        Self((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    /// Returns false if already joined.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.0[hi] = lo;
        true
    }
}

fn check_spanning_tree(g: usize, edges: &[TreeEdge]) -> Result<()> {
    if g == 0 {
        return Err(Error::Reconstruction("no vertices".into()));
    }
    if edges.len() != g - 1 {
        return Err(Error::Reconstruction(format!(
            "{} edges cannot span {g} vertices as a tree",
            edges.len()
        )));
    }
    let mut uf = UnionFind::new(g);
    for e in edges {
        if e.u >= g || e.v >= g || e.u == e.v {
            return Err(Error::Reconstruction(format!("bad edge {}-{}", e.u, e.v)));
        }
        if !uf.union(e.u, e.v) {
            return Err(Error::Reconstruction(format!("edge {}-{} closes a cycle", e.u, e.v)));
        }
    }
    Ok(())
}

fn linked_cells(g: usize, edges: &[TreeEdge]) -> Vec<LinkedCell> {
    let mut weights: Vec<u32> = edges.iter().map(|e| e.weight).collect();
    weights.sort_unstable();
    weights.dedup();
    let mut cells = Vec::new();
    for &a in &weights {
        let mut uf = UnionFind::new(g);
        for e in edges.iter().filter(|e| e.weight >= a) {
            uf.union(e.u, e.v);
        }
        let mut by_root: Vec<(usize, Vec<usize>)> = Vec::new();
        for (idx, e) in edges.iter().enumerate().filter(|(_, e)| e.weight == a) {
            let root = uf.find(e.u);
            match by_root.iter_mut().find(|(r, _)| *r == root) {
                Some((_, list)) => list.push(idx),
                None => by_root.push((root, vec![idx])),
            }
        }
        cells.extend(by_root.into_iter().map(|(_, edges)| LinkedCell { weight: a, edges }));
    }
    cells
}

/// Permissible spanning tree with lexicographic tie-breaking on vertex pairs.
pub fn permissible_tree(graph: &ValuationGraph) -> Result<PermissibleTree> {
    let order: Vec<(usize, usize)> = graph.weights().pairs().collect();
    permissible_tree_with_priority(graph, &order)
}

/// Permissible spanning tree built by descending-weight nested spanning
/// forests: the heaviest edges first, ties broken by position in `priority`
/// (pairs absent from `priority` go last, lexicographically).
pub fn permissible_tree_with_priority(graph: &ValuationGraph, priority: &[(usize, usize)]) -> Result<PermissibleTree> {
    let g = graph.g();
    let rank = |i: usize, j: usize| {
        let key = (i.min(j), i.max(j));
        priority
            .iter()
            .position(|&(a, b)| (a.min(b), a.max(b)) == key)
            .unwrap_or(priority.len())
    };
    let mut candidates: Vec<(u32, usize, usize, usize)> = graph
        .weights()
        .pairs()
        .map(|(i, j)| (graph.weight(i, j), rank(i, j), i, j))
        .collect();
    candidates.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)).then((a.2, a.3).cmp(&(b.2, b.3))));
    let mut uf = UnionFind::new(g);
    let mut edges = Vec::with_capacity(g.saturating_sub(1));
    for (weight, _, u, v) in candidates {
        if uf.union(u, v) {
            edges.push(TreeEdge { u, v, weight });
        }
    }
    PermissibleTree::new(g, edges)
}

/// Recover the full valuation graph from a permissible tree: the weight of a
/// pair is the smallest weight on the tree path joining it.
pub fn reconstruct(tree: &PermissibleTree, g: usize) -> Result<ValuationGraph> {
    if tree.g() != g {
        return Err(Error::Reconstruction(format!(
            "tree has {} vertices, expected {g}",
            tree.g()
        )));
    }
    check_spanning_tree(g, tree.edges())?;
    if linked_cells(g, tree.edges()) != tree.cells {
        return Err(Error::Reconstruction("linked cells do not match the tree edges".into()));
    }
    let mut adj: Vec<Vec<(usize, u32)>> = vec![Vec::new(); g];
    for e in tree.edges() {
        adj[e.u].push((e.v, e.weight));
        adj[e.v].push((e.u, e.weight));
    }
    let mut w = WeightMatrix::new(g);
    for src in 0..g {
        let mut best: Vec<Option<u32>> = vec![None; g];
        let mut stack = vec![(src, u32::MAX)];
        let mut seen = vec![false; g];
        seen[src] = true;
        while let Some((x, path_min)) = stack.pop() {
            for &(y, wt) in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    let m = path_min.min(wt);
                    best[y] = Some(m);
                    stack.push((y, m));
                }
            }
        }
        for (dst, b) in best.iter().enumerate().skip(src + 1) {
            w.set(src, dst, b.expect("tree is connected"));
        }
    }
    ValuationGraph::from_weights(w).map_err(|e| Error::Reconstruction(e.to_string()))
}
