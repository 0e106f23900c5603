//! Diagonal types and the type-sum count of diagonalizable matrices.

use std::cmp::Reverse;
use std::collections::{BTreeMap, HashMap};
use std::io::Write;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{centralizer_order, class_size, gl_order, MatrixType};
use crate::matrix::DiagonalSpec;
use crate::ratio::ExactRatio;
use crate::residue::{big_pow, Modulus, Valuation};
use crate::valuation::{enumerate_graph_classes, exact_div, labelled_count, permissible_tree, WeightMatrix};

#[derive(Clone, Debug, Serialize)]
pub struct TypeReport {
    #[serde(rename = "type")]
    pub matrix_type: MatrixType,
    #[serde(serialize_with = "as_decimal")]
    pub t: BigUint,
    #[serde(serialize_with = "as_decimal")]
    pub c: BigUint,
    #[serde(serialize_with = "as_decimal")]
    pub s: BigUint,
    #[serde(serialize_with = "as_decimal")]
    pub contribution: BigUint,
    /// `g! / prod n_m! * t(T')`, where `n_m` counts values of multiplicity
    /// `m` and `T'` drops the multiplicities. Kept for comparison with `t`.
    #[serde(serialize_with = "as_decimal")]
    pub arrangement_t: BigUint,
}

fn as_decimal<S: serde::Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

pub(crate) fn check_params(n: usize, p: u64, k: u32) -> Result<Modulus> {
    if n == 0 {
        return Err(Error::ShapeMismatch("dimension must be at least 1".into()));
    }
    Modulus::prime_power(p, k)
}

/// Type of a diagonal matrix. Vertices are the distinct entries in increasing
/// order.
pub fn classify_diagonal(spec: &DiagonalSpec) -> Result<MatrixType> {
    let modulus = spec.modulus();
    modulus.parts()?;
    let mut values: Vec<u64> = Vec::new();
    let mut mults: Vec<u32> = Vec::new();
    for &e in spec.entries() {
        if values.last() == Some(&e) {
            *mults.last_mut().expect("nonempty") += 1;
        } else {
            values.push(e);
            mults.push(1);
        }
    }
    let mut weights = WeightMatrix::new(values.len());
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            match modulus.valuation(modulus.sub(values[j], values[i]))? {
                Valuation::Finite(l) => weights.set(i, j, l),
                Valuation::Infinite => unreachable!("values are distinct"),
            }
        }
    }
    MatrixType::new(mults, weights)
}

/// Number of similarity classes of diagonal matrices of type `t`:
/// `p^k / |Aut_m| * prod phi_i`, with `Aut_m` the weight- and
/// multiplicity-preserving vertex permutations.
pub fn t_of_type(t: &MatrixType, p: u64, k: u32) -> Result<BigUint> {
    Modulus::prime_power(p, k)?;
    t.check_exponent(k)?;
    let graph = t.graph();
    let labelled = labelled_count(&permissible_tree(&graph)?, p, k)?;
    let aut = graph.aut_order(Some(t.mults()))?;
    exact_div(&labelled, &aut, "type count")
}

/// `g! / prod_m n_m! * t(T')`.
pub fn arrangement_t(t: &MatrixType, p: u64, k: u32) -> Result<BigUint> {
    t.check_exponent(k)?;
    let mut by_mult: BTreeMap<u32, u64> = BTreeMap::new();
    for &m in t.mults() {
        *by_mult.entry(m).or_default() += 1;
    }
    let fact = |n: u64| (1..=n).fold(BigUint::one(), |a, i| a * i);
    let den = by_mult.values().fold(BigUint::one(), |a, &c| a * fact(c));
    let arrangements = exact_div(&fact(t.g() as u64), &den, "arrangements")?;
    Ok(arrangements * t.graph().count_classes(p, k)?)
}

/// Number of sorted `n`-multisets of `Z/p^k` whose type is `t`.
pub fn scan_type_count(t: &MatrixType, p: u64, k: u32, budget: u64) -> Result<BigUint> {
    let modulus = check_params(t.n() as usize, p, k)?;
    let required = DiagonalSpec::count(t.n() as usize, modulus);
    if required > BigUint::from(budget) {
        return Err(Error::BudgetExceeded { required, budget });
    }
    let mut count = 0u64;
    for spec in DiagonalSpec::all(t.n() as usize, modulus) {
        if classify_diagonal(&spec)? == *t {
            count += 1;
        }
    }
    Ok(BigUint::from(count))
}

/// [`t_of_type`] confirmed against [`scan_type_count`].
pub fn t_of_type_checked(t: &MatrixType, p: u64, k: u32, budget: u64) -> Result<BigUint> {
    let formula = t_of_type(t, p, k)?;
    let scanned = scan_type_count(t, p, k, budget)?;
    if formula != scanned {
        return Err(Error::TypeCountMismatch { formula, scanned });
    }
    Ok(formula)
}

pub fn type_report(t: &MatrixType, p: u64, k: u32) -> Result<TypeReport> {
    let tc = t_of_type(t, p, k)?;
    let c = centralizer_order(t, p, k)?;
    let s = class_size(t, p, k)?;
    if &s * &c != gl_order(t.n() as usize, p, k) {
        return Err(Error::Inconsistent(format!("s * c != |GL| for type {t}")));
    }
    Ok(TypeReport {
        matrix_type: t.clone(),
        contribution: &tc * &s,
        t: tc,
        c,
        s,
        arrangement_t: arrangement_t(t, p, k)?,
    })
}

/// Every type of `n x n` diagonal matrix over `Z/p^k` with weights below `k`,
/// in canonical vertex order.
pub fn enumerate_type_shapes(n: usize, k: u32) -> Vec<MatrixType> {
    // sorted by value count, partition (larger parts first), weights, encoding
    type Key = (usize, Reverse<Vec<u32>>, Vec<u32>, String);
    let mut found: BTreeMap<Key, MatrixType> = BTreeMap::new();
    for g in 1..=n {
        let comps = compositions(n as u32, g);
        for class in enumerate_graph_classes(g) {
            for ws in combinations(k, class.rank_count() as usize) {
                let weights = class.instantiate_weights(&ws).expect("strictly increasing weights");
                for mults in &comps {
                    let t = MatrixType::new(mults.clone(), weights.clone())
                        .expect("instantiated classes are ultrametric")
                        .canonical_order();
                    let mut part = t.mults().to_vec();
                    part.sort_unstable_by(|a, b| b.cmp(a));
                    let key = (g, Reverse(part), t.weights().upper(), t.canonical().to_string());
                    found.entry(key).or_insert(t);
                }
            }
        }
    }
    found.into_values().collect()
}

/// Type table for `n x n` diagonal matrices over `Z/p^k`. Types whose count
/// vanishes are kept with zero contribution.
pub fn enumerate_types(n: usize, p: u64, k: u32) -> Result<Vec<TypeReport>> {
    check_params(n, p, k)?;
    enumerate_type_shapes(n, k)
        .par_iter()
        .map(|t| type_report(t, p, k))
        .collect()
}

/// `|Diag_n(Z/p^k)| = sum_T t(T) |GL_n| / c(T)`.
pub fn diag_count_engine(n: usize, p: u64, k: u32) -> Result<BigUint> {
    Ok(enumerate_types(n, p, k)?
        .into_iter()
        .fold(BigUint::zero(), |acc, r| acc + r.contribution))
}

/// `sum over sorted diagonals D of |GL_n| / |C(D)|`.
pub fn diag_count_semidirect(n: usize, p: u64, k: u32, budget: u64) -> Result<BigUint> {
    let modulus = check_params(n, p, k)?;
    let required = DiagonalSpec::count(n, modulus);
    if required > BigUint::from(budget) {
        return Err(Error::BudgetExceeded { required, budget });
    }
    let mut sizes: HashMap<String, BigUint> = HashMap::new();
    let mut total = BigUint::zero();
    for spec in DiagonalSpec::all(n, modulus) {
        let t = classify_diagonal(&spec)?;
        if !sizes.contains_key(t.canonical()) {
            sizes.insert(t.canonical().to_string(), class_size(&t, p, k)?);
        }
        total += &sizes[t.canonical()];
    }
    Ok(total)
}

/// `|Diag_n(Z/p^k)| / p^(k n^2)` in lowest terms.
pub fn proportion(n: usize, p: u64, k: u32) -> Result<ExactRatio> {
    let count = diag_count_engine(n, p, k)?;
    ExactRatio::new(count, big_pow(p, k as u64 * (n * n) as u64))
}

/// Ordered `g`-tuples of positive integers summing to `n`.
fn compositions(n: u32, g: usize) -> Vec<Vec<u32>> {
    if g == 0 {
        return if n == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 1..=n.saturating_sub(g as u32 - 1) {
        for mut rest in compositions(n - first, g - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Strictly increasing `r`-tuples from `0..k`.
fn combinations(k: u32, r: usize) -> Vec<Vec<u32>> {
    fn go(start: u32, k: u32, r: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for w in start..k {
            cur.push(w);
            go(w + 1, k, r, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, k, r, &mut Vec::new(), &mut out);
    out
}

const CSV_HEADER: [&str; 7] = ["partition", "weights", "t", "c", "s", "contribution", "canonical"];

/// One CSV row per type. `weights` is the upper triangle of the weight matrix
/// in canonical vertex order; `canonical` pins down which value carries which
/// multiplicity.
pub fn write_types_csv<W: Write>(reports: &[TypeReport], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Inconsistent(format!("csv output failed: {e}"));
    w.write_record(CSV_HEADER).map_err(io)?;
    for r in reports {
        w.write_record([
            r.matrix_type.partition(),
            r.matrix_type.weights().to_string(),
            r.t.to_string(),
            r.c.to_string(),
            r.s.to_string(),
            r.contribution.to_string(),
            r.matrix_type.canonical().to_string(),
        ])
        .map_err(io)?;
    }
    w.flush()
        .map_err(|e| Error::Inconsistent(format!("csv output failed: {e}")))?;
    Ok(())
}

pub fn types_to_json(reports: &[TypeReport]) -> serde_json::Value {
    serde_json::Value::Array(
        reports
            .iter()
            .map(|r| {
                serde_json::json!({
                    "partition": r.matrix_type.partition(),
                    "mults": r.matrix_type.mults(),
                    "weights": r.matrix_type.weights().upper(),
                    "canonical": r.matrix_type.canonical(),
                    "t": r.t.to_string(),
                    "c": r.c.to_string(),
                    "s": r.s.to_string(),
                    "contribution": r.contribution.to_string(),
                    "arrangement_t": r.arrangement_t.to_string(),
                })
            })
            .collect(),
    )
}
