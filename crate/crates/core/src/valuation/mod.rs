//! Valuation graphs of diagonal matrices.
//!
//! The valuation graph of a set of distinct residues `λ_1 < ... < λ_g` of
//! `Z/p^k` is the complete graph on them with edge weight
//! `val_p(λ_i - λ_j)`. Its weights form an ultrametric, which is what makes
//! permissible spanning trees, linked cells and the class-count product work.

mod classes;
mod dot;
mod hierarchy;
mod tree;
mod weights;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::residue::{big_pow, linked_cell_product, Modulus, Valuation};

pub use classes::{enumerate_graph_classes, GraphClass, MAX_CLASS_VERTICES};
pub use dot::{graph_to_dot, tree_to_dot};
pub use hierarchy::Hierarchy;
pub use tree::{permissible_tree, permissible_tree_with_priority, reconstruct, LinkedCell, PermissibleTree, TreeEdge};
pub use weights::WeightMatrix;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValuationGraph {
    labels: Option<Vec<u64>>,
    weights: WeightMatrix,
    distinct_weights: Vec<u32>,
}

impl ValuationGraph {
    /// Valuation graph of distinct residues; vertices are the sorted entries.
    pub fn build(entries: &[u64], modulus: Modulus) -> Result<Self> {
        modulus.parts()?;
        let m = modulus.m();
        let mut labels: Vec<u64> = entries.iter().map(|e| e % m).collect();
        labels.sort_unstable();
        if let Some(w) = labels.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateEntries(w[0]));
        }
        if labels.is_empty() {
            return Err(Error::InvalidType("a graph needs at least one vertex".into()));
        }
        let g = labels.len();
        let mut weights = WeightMatrix::new(g);
        for i in 0..g {
            for j in i + 1..g {
                match modulus.valuation(modulus.sub(labels[j], labels[i]))? {
                    Valuation::Finite(l) => weights.set(i, j, l),
                    Valuation::Infinite => unreachable!("entries are distinct"),
                }
            }
        }
        let graph = Self::assemble(Some(labels), weights);
        if !graph.check_triangle() {
            return Err(Error::Inconsistent(
                "valuation graph violates the triangle inequality".into(),
            ));
        }
        Ok(graph)
    }

    /// Unlabelled graph from a weight matrix; the triangle inequality is
    /// enforced.
    pub fn from_weights(weights: WeightMatrix) -> Result<Self> {
        if weights.g() == 0 {
            return Err(Error::InvalidType("a graph needs at least one vertex".into()));
        }
        if !weights.is_ultrametric() {
            return Err(Error::InvalidType(format!(
                "weights {weights} violate the triangle inequality"
            )));
        }
        Ok(Self::assemble(None, weights))
    }

    /// Unlabelled graph without validation, for probing `check_triangle`.
    pub fn from_weights_unchecked(weights: WeightMatrix) -> Self {
        Self::assemble(None, weights)
    }

    fn assemble(labels: Option<Vec<u64>>, weights: WeightMatrix) -> Self {
        let distinct_weights = weights.distinct_weights();
        Self {
            labels,
            weights,
            distinct_weights,
        }
    }

    pub fn g(&self) -> usize {
        self.weights.g()
    }

    pub fn labels(&self) -> Option<&[u64]> {
        self.labels.as_deref()
    }

    pub fn weights(&self) -> &WeightMatrix {
        &self.weights
    }

    pub fn weight(&self, i: usize, j: usize) -> u32 {
        self.weights.get(i, j)
    }

    pub fn distinct_weights(&self) -> &[u32] {
        &self.distinct_weights
    }

    /// `l_bc >= min(l_ab, l_ac)` on every triple, with equality whenever
    /// `l_ab != l_ac`.
    pub fn check_triangle(&self) -> bool {
        self.weights.is_ultrametric()
    }

    pub fn hierarchy(&self) -> Result<Hierarchy> {
        Hierarchy::from_weights(&self.weights)
    }

    /// Number of vertex permutations preserving every weight and, when given,
    /// every multiplicity. Brute-force scan over all `g!` permutations.
    pub fn aut_order(&self, mults: Option<&[u32]>) -> Result<BigUint> {
        let g = self.g();
        if let Some(ms) = mults {
            if ms.len() != g {
                return Err(Error::ShapeMismatch(format!(
                    "{} multiplicities for {g} vertices",
                    ms.len()
                )));
            }
        }
        let mut count = 0u64;
        for_each_permutation(g, |perm| {
            let mults_ok = mults.is_none_or(|ms| (0..g).all(|i| ms[perm[i]] == ms[i]));
            if mults_ok
                && self
                    .weights
                    .pairs()
                    .all(|(i, j)| self.weights.get(perm[i], perm[j]) == self.weights.get(i, j))
            {
                count += 1;
            }
        });
        Ok(BigUint::from(count))
    }

    /// Number of similarity classes of diagonal matrices over `Z/p^k` with
    /// distinct diagonal entries whose valuation graph is isomorphic to this
    /// one: `p^k / |Aut| * prod over linked cells of phi_1 ... phi_|cell|`
    /// evaluated at `p^(k - weight)`.
    pub fn count_classes(&self, p: u64, k: u32) -> Result<BigUint> {
        if let Some(max) = self.weights.max_weight() {
            if max >= k {
                return Err(Error::InvalidType(format!("weight {max} exceeds k - 1 = {}", k - 1)));
            }
        }
        let tree = permissible_tree(self)?;
        let labelled = labelled_count(&tree, p, k)?;
        let aut = self.aut_order(None)?;
        exact_div(&labelled, &aut, "class count")
    }
}

/// `p^k * prod_cells prod_i phi_i(p^(k - a))`: the number of ordered tuples of
/// distinct residues realising the weights.
pub(crate) fn labelled_count(tree: &PermissibleTree, p: u64, k: u32) -> Result<BigUint> {
    let mut acc = big_pow(p, k as u64);
    for cell in tree.cells() {
        if acc.is_zero() {
            break;
        }
        acc *= linked_cell_product(p, k - cell.weight, cell.edges.len() as u64)?;
    }
    Ok(acc)
}

pub(crate) fn exact_div(num: &BigUint, den: &BigUint, what: &str) -> Result<BigUint> {
    if den.is_zero() {
        return Err(Error::Inconsistent(format!("{what}: division by zero")));
    }
    let (q, r) = num.div_rem(den);
    if !r.is_zero() {
        return Err(Error::Inconsistent(format!("{what}: {den} does not divide {num}")));
    }
    Ok(q)
}

/// Visit every permutation of `0..g` (Heap's algorithm).
pub(crate) fn for_each_permutation(g: usize, mut f: impl FnMut(&[usize])) {
    let mut perm: Vec<usize> = (0..g).collect();
    let mut c = vec![0usize; g];
    f(&perm);
    let mut i = 0;
    while i < g {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            f(&perm);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}
