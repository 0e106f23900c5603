//! Brute-force ground truth: explicit conjugation orbits of diagonal matrices.
//!
//! Matrices are keyed by their row-major base-`m` index, and orbit unions live
//! in a bitset over all `m^(n^2)` matrices, so only desk-scale parameters are
//! reachable: `n = 2` with `m <= 9`, `n = 3` with `m <= 4`, `n = 4` with
//! `m <= 3`.

use std::collections::VecDeque;

use num_bigint::BigUint;
use num_traits::{Pow, ToPrimitive};
use rayon::prelude::*;
use rustc_hash::FxHashSet;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::gl_order;
use crate::matrix::{binomial, enumerate_gl, DiagonalSpec, RingMatrix};
use crate::residue::Modulus;

/// How an orbit is generated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum OrbitStrategy {
    /// Conjugate by every element of `GL_n`.
    FullGroup,
    /// Breadth-first closure under conjugation by the transvections
    /// `I + E_(i,i+1)`, `I + E_(i+1,i)` and by `diag(u, 1, ..., 1)` for units `u`.
    GeneratorClosure,
    /// Full group when `|GL_n|` is at most `2^20`, closure otherwise.
    Auto,
}

const AUTO_FULL_LIMIT: u64 = 1 << 20;

#[derive(Clone, Debug, Serialize)]
pub struct OrbitRecord {
    pub representative: DiagonalSpec,
    #[serde(serialize_with = "as_decimal")]
    pub orbit_size: BigUint,
    /// Sorted matrix indices, see [`RingMatrix::index`].
    #[serde(skip)]
    pub members: Option<Vec<u64>>,
}

fn as_decimal<S: serde::Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

fn check_space(n: usize, modulus: Modulus, budget: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::ShapeMismatch("dimension must be at least 1".into()));
    }
    let required: BigUint = Pow::pow(modulus.order(), (n * n) as u64);
    match required.to_u64() {
        Some(r) if r <= budget => Ok(r),
        _ => Err(Error::BudgetExceeded { required, budget }),
    }
}

fn encode(entries: &[u64], m: u64) -> u64 {
    entries.iter().fold(0, |acc, &e| acc * m + e)
}

/// `GL_n(Z/m)` with inverses, for full-group conjugation.
struct GroupTable {
    pairs: Vec<(Vec<u64>, Vec<u64>)>,
}

impl GroupTable {
    fn build(n: usize, modulus: Modulus, budget: u64) -> Result<Self> {
        let pairs = enumerate_gl(n, modulus, budget)?
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|g| {
                let inv = g.inverse().expect("GL element is invertible");
                (g.entries().to_vec(), inv.entries().to_vec())
            })
            .collect();
        Ok(Self { pairs })
    }
}

fn resolve(strategy: OrbitStrategy, n: usize, modulus: Modulus) -> OrbitStrategy {
    match strategy {
        OrbitStrategy::Auto => {
            let small = modulus
                .parts()
                .map(|(p, k)| gl_order(n, p, k) <= BigUint::from(AUTO_FULL_LIMIT))
                .unwrap_or(true);
            if small {
                OrbitStrategy::FullGroup
            } else {
                OrbitStrategy::GeneratorClosure
            }
        }
        s => s,
    }
}

/// `P A P^{-1}` on raw row-major entries.
fn conj_raw(n: usize, m: u64, p: &[u64], a: &[u64], q: &[u64]) -> Vec<u64> {
    let mut pa = vec![0u64; n * n];
    for i in 0..n {
        for l in 0..n {
            let x = p[i * n + l];
            if x == 0 {
                continue;
            }
            for j in 0..n {
                pa[i * n + j] = (pa[i * n + j] + x * a[l * n + j]) % m;
            }
        }
    }
    let mut out = vec![0u64; n * n];
    for i in 0..n {
        for l in 0..n {
            let x = pa[i * n + l];
            if x == 0 {
                continue;
            }
            for j in 0..n {
                out[i * n + j] = (out[i * n + j] + x * q[l * n + j]) % m;
            }
        }
    }
    out
}

fn orbit_full(a: &[u64], n: usize, m: u64, table: &GroupTable) -> Vec<u64> {
    let mut members: Vec<u64> = table
        .pairs
        .iter()
        .map(|(p, q)| encode(&conj_raw(n, m, p, a, q), m))
        .collect();
    members.sort_unstable();
    members.dedup();
    members
}

/// Call `f` on the conjugate of `a` by each generator. Conjugating by
/// `I + E_ij` adds row `j` to row `i`, then subtracts column `i` from column `j`.
fn for_each_generator_image(
    a: &[u64],
    n: usize,
    m: u64,
    units: &[(u64, u64)],
    b: &mut Vec<u64>,
    mut f: impl FnMut(&[u64]),
) {
    for (i, j) in adjacent_pairs(n) {
        b.clear();
        b.extend_from_slice(a);
        for c in 0..n {
            b[i * n + c] = (b[i * n + c] + b[j * n + c]) % m;
        }
        for r in 0..n {
            b[r * n + j] = (b[r * n + j] + m - b[r * n + i]) % m;
        }
        f(b);
    }
    for &(u, ui) in units {
        b.clear();
        b.extend_from_slice(a);
        for x in &mut b[..n] {
            *x = *x * u % m;
        }
        for r in 0..n {
            b[r * n] = b[r * n] * ui % m;
        }
        f(b);
    }
}

/// `(i, i+1)` and `(i+1, i)`: the transvections `I + E_ij` for these pairs
/// generate `SL_n` over a local ring.
fn adjacent_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n.saturating_sub(1)).flat_map(|i| [(i, i + 1), (i + 1, i)])
}

fn unit_pairs(modulus: Modulus) -> Vec<(u64, u64)> {
    modulus
        .units()
        .into_iter()
        .filter(|&u| u != 1)
        .map(|u| (u, modulus.inv(u).expect("unit")))
        .collect()
}

fn decode_into(mut code: u64, m: u64, out: &mut [u64]) {
    for e in out.iter_mut().rev() {
        *e = code % m;
        code /= m;
    }
}

fn orbit_closure(a: &[u64], n: usize, modulus: Modulus, limit: u64) -> Result<Vec<u64>> {
    let m = modulus.m();
    let units = unit_pairs(modulus);
    let start = encode(a, m);
    let mut seen: FxHashSet<u64> = FxHashSet::default();
    seen.insert(start);
    let mut queue = VecDeque::from([start]);
    let mut x = vec![0u64; n * n];
    let mut scratch = Vec::with_capacity(n * n);
    while let Some(code) = queue.pop_front() {
        if seen.len() as u64 > limit {
            return Err(Error::BudgetExceeded {
                required: BigUint::from(seen.len()),
                budget: limit,
            });
        }
        decode_into(code, m, &mut x);
        for_each_generator_image(&x, n, m, &units, &mut scratch, |y| {
            let c = encode(y, m);
            if seen.insert(c) {
                queue.push_back(c);
            }
        });
    }
    let mut members: Vec<u64> = seen.into_iter().collect();
    members.sort_unstable();
    Ok(members)
}

/// Size of the group generated by the closure generators, found by
/// breadth-first search from the identity. Equals `|GL_n(Z/m)|` when the
/// generators suffice.
pub fn generated_group_order(n: usize, modulus: Modulus, budget: u64) -> Result<u64> {
    let m = modulus.m();
    check_space(n, modulus, budget)?;
    let units = unit_pairs(modulus);
    let ident = RingMatrix::identity(n, modulus).entries().to_vec();
    let mut seen: FxHashSet<u64> = FxHashSet::default();
    seen.insert(encode(&ident, m));
    let mut queue = VecDeque::from([ident]);
    while let Some(x) = queue.pop_front() {
        let mut next = Vec::new();
        // left multiplication: I + E_ij adds row j to row i
        for (i, j) in adjacent_pairs(n) {
            let mut b = x.clone();
            for c in 0..n {
                b[i * n + c] = (b[i * n + c] + x[j * n + c]) % m;
            }
            next.push(b);
        }
        for &(u, _) in &units {
            let mut b = x.clone();
            for x in &mut b[..n] {
                *x = *x * u % m;
            }
            next.push(b);
        }
        for b in next {
            if seen.insert(encode(&b, m)) {
                queue.push_back(b);
            }
        }
    }
    Ok(seen.len() as u64)
}

fn orbits(
    specs: &[DiagonalSpec],
    n: usize,
    modulus: Modulus,
    strategy: OrbitStrategy,
    budget: u64,
) -> Result<Vec<OrbitRecord>> {
    check_space(n, modulus, budget)?;
    orbits_unchecked(specs, n, modulus, resolve(strategy, n, modulus), budget)
}

fn orbits_unchecked(
    specs: &[DiagonalSpec],
    n: usize,
    modulus: Modulus,
    strategy: OrbitStrategy,
    budget: u64,
) -> Result<Vec<OrbitRecord>> {
    let m = modulus.m();
    let table = match strategy {
        OrbitStrategy::FullGroup => Some(GroupTable::build(n, modulus, budget)?),
        _ => None,
    };
    specs
        .par_iter()
        .map(|spec| {
            let a = spec.to_matrix().entries().to_vec();
            let members = match &table {
                Some(t) => orbit_full(&a, n, m, t),
                None => orbit_closure(&a, n, modulus, budget)?,
            };
            Ok(OrbitRecord {
                representative: spec.clone(),
                orbit_size: BigUint::from(members.len()),
                members: Some(members),
            })
        })
        .collect()
}

/// Explicit conjugacy class of a diagonal matrix.
pub fn orbit_of(spec: &DiagonalSpec, strategy: OrbitStrategy, budget: u64) -> Result<OrbitRecord> {
    let n = spec.n();
    let mut out = orbits(std::slice::from_ref(spec), n, spec.modulus(), strategy, budget)?;
    Ok(out.pop().expect("one orbit"))
}

#[derive(Clone, Debug, Serialize)]
pub struct BruteCount {
    /// Number of distinct matrices in the union of all orbits.
    #[serde(serialize_with = "as_decimal")]
    pub count: BigUint,
    /// Sum of the orbit sizes; equals `count` exactly when orbits are disjoint.
    #[serde(serialize_with = "as_decimal")]
    pub orbit_sum: BigUint,
    pub representatives: usize,
    pub strategy: OrbitStrategy,
}

struct Bitset(Vec<u64>);

impl Bitset {
    fn new(size: u64) -> Self {
        Self(vec![0; size.div_ceil(64) as usize])
    }

    /// Returns true if the bit was newly set.
    fn insert(&mut self, i: u64) -> bool {
        let (w, b) = ((i / 64) as usize, i % 64);
        let fresh = self.0[w] >> b & 1 == 0;
        self.0[w] |= 1 << b;
        fresh
    }
}

/// `|Diag_n(Z/m)|` as the size of the union of the orbits of every sorted
/// diagonal matrix.
pub fn diag_count_brute(n: usize, modulus: Modulus, strategy: OrbitStrategy, budget: u64) -> Result<BruteCount> {
    let space = check_space(n, modulus, budget)?;
    let specs: Vec<DiagonalSpec> = DiagonalSpec::all(n, modulus).collect();
    let records = orbits(&specs, n, modulus, strategy, budget)?;
    let mut seen = Bitset::new(space);
    let mut count = 0u64;
    let mut orbit_sum = 0u64;
    for r in &records {
        let members = r.members.as_ref().expect("members recorded");
        orbit_sum += members.len() as u64;
        count += members.iter().filter(|&&i| seen.insert(i)).count() as u64;
    }
    Ok(BruteCount {
        count: count.into(),
        orbit_sum: orbit_sum.into(),
        representatives: specs.len(),
        strategy: resolve(strategy, n, modulus),
    })
}

/// [`diag_count_brute`] for matrix spaces too large for a bitset: orbits come
/// from generator closure and are merged by sorting. `budget` caps the size of
/// each orbit.
pub fn diag_count_brute_sparse(n: usize, modulus: Modulus, budget: u64) -> Result<BruteCount> {
    if n == 0 {
        return Err(Error::ShapeMismatch("dimension must be at least 1".into()));
    }
    let space: BigUint = Pow::pow(modulus.order(), (n * n) as u64);
    if space.to_u64().is_none() {
        return Err(Error::BudgetExceeded {
            required: space,
            budget,
        });
    }
    let specs: Vec<DiagonalSpec> = DiagonalSpec::all(n, modulus).collect();
    let records = orbits_unchecked(&specs, n, modulus, OrbitStrategy::GeneratorClosure, budget)?;
    let orbit_sum: u64 = records
        .iter()
        .map(|r| r.members.as_ref().map_or(0, Vec::len) as u64)
        .sum();
    let mut all: Vec<u64> = records
        .into_iter()
        .flat_map(|r| r.members.unwrap_or_default())
        .collect();
    all.par_sort_unstable();
    all.dedup();
    Ok(BruteCount {
        count: BigUint::from(all.len()),
        orbit_sum: orbit_sum.into(),
        representatives: specs.len(),
        strategy: OrbitStrategy::GeneratorClosure,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct UniquenessReport {
    pub n: usize,
    pub modulus: u64,
    pub representatives: usize,
    /// Unordered pairs of representatives whose orbits were compared.
    #[serde(serialize_with = "as_decimal")]
    pub pairs_checked: BigUint,
    /// Pairs of sorted diagonals that are similar although they are not
    /// reorderings of each other.
    pub violations: Vec<(DiagonalSpec, DiagonalSpec)>,
}

impl UniquenessReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check that no orbit of a sorted diagonal contains a diagonal matrix with a
/// different multiset of entries. Orbits are classes, so this is the same as
/// pairwise disjointness of the orbits.
pub fn verify_unique_diagonalization(
    n: usize,
    modulus: Modulus,
    strategy: OrbitStrategy,
    budget: u64,
) -> Result<UniquenessReport> {
    let specs: Vec<DiagonalSpec> = DiagonalSpec::all(n, modulus).collect();
    let records = orbits(&specs, n, modulus, strategy, budget)?;
    let mut violations = Vec::new();
    for r in &records {
        for &i in r.members.as_ref().expect("members recorded") {
            let mat = RingMatrix::from_index(n, modulus, i);
            if mat.is_diagonal() {
                let other = DiagonalSpec::new(modulus, &mat.diagonal_entries());
                if other > r.representative {
                    violations.push((r.representative.clone(), other));
                }
            }
        }
    }
    violations.sort();
    violations.dedup();
    Ok(UniquenessReport {
        n,
        modulus: modulus.m(),
        representatives: specs.len(),
        pairs_checked: binomial(specs.len() as u64, 2),
        violations,
    })
}

/// `|C(D)|` by scanning `GL_n` for matrices commuting with `D`.
pub fn centralizer_brute(spec: &DiagonalSpec, budget: u64) -> Result<BigUint> {
    let d = spec.to_matrix();
    let mut count = 0u64;
    for g in enumerate_gl(spec.n(), spec.modulus(), budget)? {
        if g.mat_mul(&d)? == d.mat_mul(&g)? {
            count += 1;
        }
    }
    Ok(count.into())
}

/// Count matrices `A` in `M_n(Z/m)` for which some `P` in `GL_n` makes
/// `P A P^{-1}` diagonal. Independent of the orbit machinery.
pub fn diagonalizable_scan(n: usize, modulus: Modulus, budget: u64) -> Result<BigUint> {
    let space = check_space(n, modulus, budget)?;
    let table = GroupTable::build(n, modulus, budget)?;
    let m = modulus.m();
    let count = (0..space)
        .into_par_iter()
        .filter(|&i| {
            let a = RingMatrix::from_index(n, modulus, i);
            table.pairs.iter().any(|(p, q)| {
                let b = conj_raw(n, m, p, a.entries(), q);
                (0..n * n).all(|x| x / n == x % n || b[x] == 0)
            })
        })
        .count();
    Ok(BigUint::from(count))
}

#[derive(Clone, Debug, Serialize)]
pub struct Z6Report {
    pub first_conjugate: Vec<u64>,
    pub second_conjugate: Vec<u64>,
    pub target: Vec<u64>,
    pub permutation_equivalent: bool,
    pub holds: bool,
}

/// Over `Z/6`, `diag(2, 3)` and `diag(5, 0)` are both similar to
/// `[[2, 3], [4, 3]]` but are not reorderings of each other.
pub fn z6_counterexample_check() -> Result<Z6Report> {
    let z6 = Modulus::from_value(6)?;
    let p1 = RingMatrix::from_rows(z6, &[&[1, 3], &[2, 1]])?;
    let p2 = RingMatrix::from_rows(z6, &[&[1, 3], &[5, 2]])?;
    let target = RingMatrix::from_rows(z6, &[&[2, 3], &[4, 3]])?;
    let a = p1.conjugate(&RingMatrix::diagonal(z6, &[2, 3]))?;
    let b = p2.conjugate(&RingMatrix::diagonal(z6, &[5, 0]))?;
    let permutation_equivalent = DiagonalSpec::new(z6, &[2, 3]) == DiagonalSpec::new(z6, &[5, 0]);
    Ok(Z6Report {
        holds: a == target && b == target && !permutation_equivalent,
        first_conjugate: a.entries().to_vec(),
        second_conjugate: b.entries().to_vec(),
        target: target.entries().to_vec(),
        permutation_equivalent,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct JordanCase {
    pub lambda: u64,
    pub conjugates_scanned: usize,
    pub jordan_form_found: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct JordanReport {
    /// `[[0,1],[0,0]] = P [[2,1],[0,2]] P^{-1}` over `Z/4`, `P = [[1,0],[2,1]]`.
    pub identity_holds: bool,
    /// `[[0,1],[0,0]]` found in the orbit of `[[2,1],[0,2]]` by scanning.
    pub two_jordan_forms: bool,
    /// `[[l,2],[0,l]]` over `Z/4` for each `l`: no conjugate is diagonal or a
    /// single Jordan block `[[mu,1],[0,mu]]`.
    pub cases: Vec<JordanCase>,
}

impl JordanReport {
    pub fn holds(&self) -> bool {
        self.identity_holds && self.two_jordan_forms && self.cases.iter().all(|c| !c.jordan_form_found)
    }
}

fn is_jordan_2x2(b: &RingMatrix) -> bool {
    let e = b.entries();
    e[2] == 0 && (e[1] == 0 || (e[1] == 1 && e[0] == e[3]))
}

pub fn jordan_demo_checks() -> Result<JordanReport> {
    let z4 = Modulus::prime_power(2, 2)?;
    let p = RingMatrix::from_rows(z4, &[&[1, 0], &[2, 1]])?;
    let block = RingMatrix::from_rows(z4, &[&[2, 1], &[0, 2]])?;
    let nil = RingMatrix::from_rows(z4, &[&[0, 1], &[0, 0]])?;
    let identity_holds = p.conjugate(&block)? == nil;
    let gl: Vec<RingMatrix> = enumerate_gl(2, z4, 1 << 20)?.collect();
    let mut two_jordan_forms = false;
    for g in &gl {
        two_jordan_forms |= g.conjugate(&block)? == nil;
    }
    let mut cases = Vec::new();
    for lambda in 0..4 {
        let a = RingMatrix::from_rows(z4, &[&[lambda, 2], &[0, lambda]])?;
        let mut found = false;
        for g in &gl {
            found |= is_jordan_2x2(&g.conjugate(&a)?);
        }
        cases.push(JordanCase {
            lambda,
            conjugates_scanned: gl.len(),
            jordan_form_found: found,
        });
    }
    Ok(JordanReport {
        identity_holds,
        two_jordan_forms,
        cases,
    })
}
