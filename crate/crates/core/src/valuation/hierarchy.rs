//! Laminar hierarchies of ultrametric weight matrices.
//!
//! An ultrametric weight matrix on `g` vertices is the same thing as a rooted
//! tree whose leaves are the vertices and whose internal nodes carry weights
//! strictly increasing from the root downwards: the weight of a pair is the
//! weight at their lowest common ancestor. Every internal node has at least
//! two children.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::valuation::weights::WeightMatrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Hierarchy {
    Leaf(usize),
    Node { weight: u32, children: Vec<Hierarchy> },
}

impl Hierarchy {
    pub fn from_weights(w: &WeightMatrix) -> Result<Hierarchy> {
        if w.g() == 0 {
            return Err(Error::InvalidType("a graph needs at least one vertex".into()));
        }
        if !w.is_ultrametric() {
            return Err(Error::InvalidType(format!(
                "weights {w} violate the triangle inequality"
            )));
        }
        Ok(build((0..w.g()).collect(), w))
    }

    pub fn leaves(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<usize>) {
        match self {
            Hierarchy::Leaf(v) => out.push(*v),
            Hierarchy::Node { children, .. } => children.iter().for_each(|c| c.collect_leaves(out)),
        }
    }

    /// `(weight, number of children)` for every internal node, preorder.
    pub fn internal_nodes(&self) -> Vec<(u32, usize)> {
        let mut out = Vec::new();
        self.walk(&mut |h| {
            if let Hierarchy::Node { weight, children } = h {
                out.push((*weight, children.len()));
            }
        });
        out
    }

    fn walk<'a>(&'a self, f: &mut impl FnMut(&'a Hierarchy)) {
        f(self);
        if let Hierarchy::Node { children, .. } = self {
            for c in children {
                c.walk(f);
            }
        }
    }

    /// Weight matrix on `g` vertices; leaf indices must be `0..g`.
    pub fn to_weights(&self, g: usize) -> WeightMatrix {
        let mut w = WeightMatrix::new(g);
        self.fill(&mut w);
        w
    }

    fn fill(&self, w: &mut WeightMatrix) {
        if let Hierarchy::Node { weight, children } = self {
            let groups: Vec<Vec<usize>> = children.iter().map(Hierarchy::leaves).collect();
            for (a, ga) in groups.iter().enumerate() {
                for gb in &groups[a + 1..] {
                    for &x in ga {
                        for &y in gb {
                            w.set(x, y, *weight);
                        }
                    }
                }
            }
            children.iter().for_each(|c| c.fill(w));
        }
    }

    /// Canonical string: children sorted by their own encodings, leaves
    /// rendered with `leaf`.
    pub fn canonical(&self, leaf: &impl Fn(usize) -> String) -> String {
        match self {
            Hierarchy::Leaf(v) => leaf(*v),
            Hierarchy::Node { weight, children } => {
                let mut parts: Vec<String> = children.iter().map(|c| c.canonical(leaf)).collect();
                parts.sort();
                format!("{weight}({})", parts.join(","))
            }
        }
    }

    /// Sort children by canonical encoding, recursively.
    pub fn sorted(&self, leaf: &impl Fn(usize) -> String) -> Hierarchy {
        match self {
            Hierarchy::Leaf(v) => Hierarchy::Leaf(*v),
            Hierarchy::Node { weight, children } => {
                let mut kids: Vec<(String, Hierarchy)> =
                    children.iter().map(|c| (c.canonical(leaf), c.sorted(leaf))).collect();
                kids.sort_by(|a, b| a.0.cmp(&b.0));
                Hierarchy::Node {
                    weight: *weight,
                    children: kids.into_iter().map(|(_, h)| h).collect(),
                }
            }
        }
    }

    /// Renumber leaves `0..g` in preorder.
    pub fn relabel_preorder(&self) -> Hierarchy {
        let mut next = 0;
        self.relabel(&mut next)
    }

    fn relabel(&self, next: &mut usize) -> Hierarchy {
        match self {
            Hierarchy::Leaf(_) => {
                *next += 1;
                Hierarchy::Leaf(*next - 1)
            }
            Hierarchy::Node { weight, children } => Hierarchy::Node {
                weight: *weight,
                children: children.iter().map(|c| c.relabel(next)).collect(),
            },
        }
    }

    pub fn map_weights(&self, f: &impl Fn(u32) -> u32) -> Hierarchy {
        match self {
            Hierarchy::Leaf(v) => Hierarchy::Leaf(*v),
            Hierarchy::Node { weight, children } => Hierarchy::Node {
                weight: f(*weight),
                children: children.iter().map(|c| c.map_weights(f)).collect(),
            },
        }
    }

    /// Order of the symmetry group of the labelled tree: at each node, children
    /// with identical encodings may be permuted freely.
    pub fn symmetry_order(&self, leaf: &impl Fn(usize) -> String) -> u128 {
        match self {
            Hierarchy::Leaf(_) => 1,
            Hierarchy::Node { children, .. } => {
                let mut groups: BTreeMap<String, u128> = BTreeMap::new();
                let mut acc = 1u128;
                for c in children {
                    *groups.entry(c.canonical(leaf)).or_default() += 1;
                    acc *= c.symmetry_order(leaf);
                }
                groups.values().fold(acc, |a, &cnt| a * (1..=cnt).product::<u128>())
            }
        }
    }
}

fn build(vertices: Vec<usize>, w: &WeightMatrix) -> Hierarchy {
    if vertices.len() == 1 {
        return Hierarchy::Leaf(vertices[0]);
    }
    let floor = vertices
        .iter()
        .enumerate()
        .flat_map(|(a, &x)| vertices[a + 1..].iter().map(move |&y| (x, y)))
        .map(|(x, y)| w.get(x, y))
        .min()
        .expect("at least two vertices");
    // "weight above the floor" is an equivalence relation on an ultrametric
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for v in vertices {
        match classes.iter_mut().find(|c| w.get(c[0], v) > floor) {
            Some(c) => c.push(v),
            None => classes.push(vec![v]),
        }
    }
    Hierarchy::Node {
        weight: floor,
        children: classes.into_iter().map(|c| build(c, w)).collect(),
    }
}
