//! Group orders: `|GL_n(Z/p^k)|`, centralizers of diagonal matrices, and
//! similarity-class sizes by orbit-stabilizer.

use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::residue::big_pow;
use crate::valuation::{exact_div, Hierarchy, ValuationGraph, WeightMatrix};

/// `|GL_n(Z/p^k)| = p^(n^2 (k-1)) * prod_{l=1..n} (p^n - p^(l-1))`.
pub fn gl_order(n: usize, p: u64, k: u32) -> BigUint {
    let n64 = n as u64;
    let pn = big_pow(p, n64);
    (1..=n64).fold(big_pow(p, n64 * n64 * (k as u64 - 1)), |acc, l| {
        acc * (&pn - big_pow(p, l - 1))
    })
}

/// The type of a diagonal matrix: multiplicities of its distinct values plus
/// the valuations of their pairwise differences.
///
/// Equality and hashing go through the canonical encoding, so two types that
/// differ by a simultaneous relabelling of `(mults, weights)` compare equal.
#[derive(Clone, Debug, Serialize)]
pub struct MatrixType {
    mults: Vec<u32>,
    weights: WeightMatrix,
    canon: String,
}

impl MatrixType {
    pub fn new(mults: Vec<u32>, weights: WeightMatrix) -> Result<Self> {
        if mults.is_empty() || mults.contains(&0) {
            return Err(Error::InvalidType("multiplicities must be positive".into()));
        }
        if mults.len() != weights.g() {
            return Err(Error::InvalidType(format!(
                "{} multiplicities for {} distinct values",
                mults.len(),
                weights.g()
            )));
        }
        let hierarchy = Hierarchy::from_weights(&weights)?;
        let canon = hierarchy.canonical(&|v| format!("m{}", mults[v]));
        Ok(Self { mults, weights, canon })
    }

    /// Scalar type: one value with multiplicity `n`.
    pub fn scalar(n: u32) -> Self {
        Self::new(vec![n], WeightMatrix::new(1)).expect("scalar type is valid")
    }

    pub fn g(&self) -> usize {
        self.mults.len()
    }

    pub fn n(&self) -> u32 {
        self.mults.iter().sum()
    }

    pub fn mults(&self) -> &[u32] {
        &self.mults
    }

    pub fn weights(&self) -> &WeightMatrix {
        &self.weights
    }

    pub fn canonical(&self) -> &str {
        &self.canon
    }

    pub fn is_distinct(&self) -> bool {
        self.mults.iter().all(|&m| m == 1)
    }

    /// The valuation graph on the distinct values.
    pub fn graph(&self) -> ValuationGraph {
        ValuationGraph::from_weights(self.weights.clone()).expect("validated at construction")
    }

    /// Partition of `n` as `"2+1+1"`, parts in decreasing order.
    pub fn partition(&self) -> String {
        let mut parts = self.mults.clone();
        parts.sort_unstable_by(|a, b| b.cmp(a));
        parts.iter().map(u32::to_string).collect::<Vec<_>>().join("+")
    }

    /// The same type with vertices renumbered in canonical preorder, so equal
    /// types get identical `mults` and `weights`.
    pub fn canonical_order(&self) -> MatrixType {
        let leaf = |v: usize| format!("m{}", self.mults[v]);
        let order = Hierarchy::from_weights(&self.weights)
            .expect("validated at construction")
            .sorted(&leaf)
            .leaves();
        let mut perm = vec![0; order.len()];
        for (new, &old) in order.iter().enumerate() {
            perm[old] = new;
        }
        let mults = order.iter().map(|&old| self.mults[old]).collect();
        MatrixType {
            mults,
            weights: self.weights.permuted(&perm),
            canon: self.canon.clone(),
        }
    }

    pub(crate) fn check_exponent(&self, k: u32) -> Result<()> {
        match self.weights.max_weight() {
            Some(w) if w >= k => Err(Error::InvalidType(format!("weight {w} is not below k = {k}"))),
            _ => Ok(()),
        }
    }
}

impl PartialEq for MatrixType {
    fn eq(&self, other: &Self) -> bool {
        self.canon == other.canon
    }
}

impl Eq for MatrixType {}

impl Hash for MatrixType {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.canon.hash(state);
    }
}

impl fmt::Display for MatrixType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}]", self.partition(), self.canon)
    }
}

/// `|C(D)| = prod_i |GL_{m_i}| * prod_{i<j} p^(2 m_i m_j l_ij)` for any
/// diagonal `D` of type `t`.
pub fn centralizer_order(t: &MatrixType, p: u64, k: u32) -> Result<BigUint> {
    t.check_exponent(k)?;
    let blocks = t
        .mults
        .iter()
        .fold(BigUint::one(), |acc, &m| acc * gl_order(m as usize, p, k));
    let exponent: u64 = t
        .weights
        .pairs()
        .map(|(i, j)| 2 * t.mults[i] as u64 * t.mults[j] as u64 * t.weights.get(i, j) as u64)
        .sum();
    let c = blocks * big_pow(p, exponent);
    let gl = gl_order(t.n() as usize, p, k);
    if &gl % &c != BigUint::ZERO {
        return Err(Error::Inconsistent(format!(
            "centralizer order {c} does not divide |GL| = {gl}"
        )));
    }
    Ok(c)
}

/// `|S(D)| = |GL_n| / |C(D)|`, with exact division enforced.
pub fn class_size(t: &MatrixType, p: u64, k: u32) -> Result<BigUint> {
    let c = centralizer_order(t, p, k)?;
    exact_div(&gl_order(t.n() as usize, p, k), &c, "class size")
}
