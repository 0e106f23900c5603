//! Dense square matrices over `Z/m`.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{Pow, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::residue::{Modulus, Residue};

/// Default cap on the number of candidate matrices an enumeration may touch.
pub const DEFAULT_BUDGET: u64 = 1 << 28;

/// An `n x n` matrix over `Z/m`, row-major, entries reduced into `[0, m)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingMatrix {
    n: usize,
    modulus: Modulus,
    entries: Vec<u64>,
}

impl RingMatrix {
    pub fn new(n: usize, modulus: Modulus, entries: Vec<u64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::ShapeMismatch("dimension must be at least 1".into()));
        }
        if entries.len() != n * n {
            return Err(Error::ShapeMismatch(format!(
                "{} entries supplied for a {n}x{n} matrix",
                entries.len()
            )));
        }
        let m = modulus.m();
        let entries = entries.into_iter().map(|e| e % m).collect();
        Ok(Self { n, modulus, entries })
    }

    pub fn from_rows(modulus: Modulus, rows: &[&[u64]]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::ShapeMismatch("rows must form a square".into()));
        }
        Self::new(n, modulus, rows.concat())
    }

    pub fn identity(n: usize, modulus: Modulus) -> Self {
        Self::diagonal(modulus, &vec![1; n])
    }

    pub fn diagonal(modulus: Modulus, diag: &[u64]) -> Self {
        let n = diag.len();
        let mut entries = vec![0; n * n];
        for (i, &d) in diag.iter().enumerate() {
            entries[i * n + i] = d % modulus.m();
        }
        Self { n, modulus, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> u64 {
        self.entries[row * self.n + col]
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| i == j || self.get(i, j) == 0))
    }

    pub fn diagonal_entries(&self) -> Vec<u64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    fn check_compatible(&self, other: &RingMatrix) -> Result<()> {
        if self.n != other.n || self.modulus != other.modulus {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} over {} vs {}x{} over {}",
                self.n, self.n, self.modulus, other.n, other.n, other.modulus
            )));
        }
        Ok(())
    }

    pub fn mat_mul(&self, other: &RingMatrix) -> Result<RingMatrix> {
        self.check_compatible(other)?;
        let n = self.n;
        let m = self.modulus.m() as u128;
        let mut entries = vec![0u64; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0u128;
                for l in 0..n {
                    acc = (acc + self.entries[i * n + l] as u128 * other.entries[l * n + j] as u128) % m;
                }
                entries[i * n + j] = acc as u64;
            }
        }
        Ok(RingMatrix {
            n,
            modulus: self.modulus,
            entries,
        })
    }

    /// Determinant over the integers of the lifted entries.
    fn integer_det(&self) -> BigInt {
        let small = self.modulus.m() < (1 << 16) && self.n <= 6;
        if small {
            let rows: Vec<Vec<i128>> = (0..self.n)
                .map(|i| (0..self.n).map(|j| self.get(i, j) as i128).collect())
                .collect();
            BigInt::from(bareiss_i128(rows))
        } else {
            let rows: Vec<Vec<BigInt>> = (0..self.n)
                .map(|i| (0..self.n).map(|j| BigInt::from(self.get(i, j))).collect())
                .collect();
            bareiss_big(rows)
        }
    }

    /// Exact determinant, reduced mod `m`. Fraction-free elimination runs over
    /// the integers, so zero divisors of `Z/m` never enter a pivot choice.
    pub fn det(&self) -> Residue {
        let d = self.integer_det().mod_floor(&BigInt::from(self.modulus.m()));
        self.modulus
            .residue(d.to_u64().expect("reduced determinant fits in u64"))
    }

    pub fn is_invertible(&self) -> bool {
        self.det().is_unit()
    }

    fn minor(&self, skip_row: usize, skip_col: usize) -> RingMatrix {
        let n = self.n - 1;
        let entries = (0..self.n)
            .filter(|&i| i != skip_row)
            .flat_map(|i| (0..self.n).filter(move |&j| j != skip_col).map(move |j| (i, j)))
            .map(|(i, j)| self.get(i, j))
            .collect();
        RingMatrix {
            n,
            modulus: self.modulus,
            entries,
        }
    }

    pub fn adjugate(&self) -> RingMatrix {
        let n = self.n;
        let modulus = self.modulus;
        if n == 1 {
            return RingMatrix::identity(1, modulus);
        }
        let mut entries = vec![0u64; n * n];
        for i in 0..n {
            for j in 0..n {
                let cof = self.minor(j, i).integer_det();
                let cof = if (i + j) % 2 == 0 { cof } else { -cof };
                let reduced = cof.mod_floor(&BigInt::from(modulus.m()));
                entries[i * n + j] = reduced.to_u64().expect("reduced cofactor fits in u64");
            }
        }
        RingMatrix { n, modulus, entries }
    }

    /// `det^{-1} * adj`.
    pub fn inverse(&self) -> Result<RingMatrix> {
        let det_inv = self.det().inv()?;
        let adj = self.adjugate();
        let entries = adj
            .entries
            .iter()
            .map(|&e| self.modulus.mul(e, det_inv.value()))
            .collect();
        Ok(RingMatrix {
            n: self.n,
            modulus: self.modulus,
            entries,
        })
    }

    /// `P * A * P^{-1}` with `self` as `P`.
    pub fn conjugate(&self, a: &RingMatrix) -> Result<RingMatrix> {
        self.check_compatible(a)?;
        self.mat_mul(a)?.mat_mul(&self.inverse()?)
    }

    /// Row-major base-`m` encoding; an injective key for matrices of one shape.
    pub fn index(&self) -> Option<u64> {
        let m = self.modulus.m();
        self.entries
            .iter()
            .try_fold(0u64, |acc, &e| acc.checked_mul(m)?.checked_add(e))
    }

    pub fn from_index(n: usize, modulus: Modulus, mut index: u64) -> RingMatrix {
        let m = modulus.m();
        let mut entries = vec![0u64; n * n];
        for e in entries.iter_mut().rev() {
            *e = index % m;
            index /= m;
        }
        RingMatrix { n, modulus, entries }
    }
}

impl fmt::Display for RingMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.n {
            if i > 0 {
                f.write_str(", ")?;
            }
            let row: Vec<String> = (0..self.n).map(|j| self.get(i, j).to_string()).collect();
            write!(f, "[{}]", row.join(", "))?;
        }
        f.write_str("]")
    }
}

fn bareiss_i128(mut a: Vec<Vec<i128>>) -> i128 {
    let n = a.len();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

fn bareiss_big(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut negate = false;
    let mut prev = BigInt::from(1);
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = num / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// The canonical representative of a similarity class of diagonal matrices:
/// the diagonal multiset, sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DiagonalSpec {
    modulus: Modulus,
    entries: Vec<u64>,
}

impl DiagonalSpec {
    pub fn new(modulus: Modulus, entries: &[u64]) -> Self {
        let mut entries: Vec<u64> = entries.iter().map(|e| e % modulus.m()).collect();
        entries.sort_unstable();
        Self { modulus, entries }
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    pub fn to_matrix(&self) -> RingMatrix {
        RingMatrix::diagonal(self.modulus, &self.entries)
    }

    /// Every sorted `n`-multiset of `Z/m`, in lexicographic order.
    pub fn all(n: usize, modulus: Modulus) -> MultisetIter {
        MultisetIter {
            m: modulus.m(),
            modulus,
            current: if n == 0 { None } else { Some(vec![0; n]) },
        }
    }

    /// Number of sorted `n`-multisets of `Z/m`: `C(m + n - 1, n)`.
    pub fn count(n: usize, modulus: Modulus) -> BigUint {
        binomial(modulus.m() + n as u64 - 1, n as u64)
    }
}

impl serde::Serialize for DiagonalSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serde::Serialize::serialize(self.entries(), s)
    }
}

pub struct MultisetIter {
    m: u64,
    modulus: Modulus,
    current: Option<Vec<u64>>,
}

impl Iterator for MultisetIter {
    type Item = DiagonalSpec;

    fn next(&mut self) -> Option<DiagonalSpec> {
        let cur = self.current.take()?;
        let out = DiagonalSpec {
            modulus: self.modulus,
            entries: cur.clone(),
        };
        // advance: bump the rightmost position that can grow, reset the tail
        let mut nxt = cur;
        if let Some(pos) = (0..nxt.len()).rev().find(|&i| nxt[i] + 1 < self.m) {
            let v = nxt[pos] + 1;
            for e in &mut nxt[pos..] {
                *e = v;
            }
            self.current = Some(nxt);
        }
        Some(out)
    }
}

/// Binomial coefficient as a big integer.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

fn check_budget(n: usize, modulus: Modulus, budget: u64) -> Result<()> {
    let required: BigUint = Pow::pow(modulus.order(), (n * n) as u64);
    if required > BigUint::from(budget) {
        return Err(Error::BudgetExceeded { required, budget });
    }
    Ok(())
}

/// Stream `GL_n(Z/m)` in lexicographic order of the row-major entries.
///
/// For a prime-power modulus, rows are chosen one at a time and a prefix is
/// abandoned as soon as its rows become dependent mod `p`, which is exactly
/// when no completion can have a unit determinant.
pub fn enumerate_gl(n: usize, modulus: Modulus, budget: u64) -> Result<GlIter> {
    if n == 0 {
        return Err(Error::ShapeMismatch("dimension must be at least 1".into()));
    }
    check_budget(n, modulus, budget)?;
    let m = modulus.m();
    let vectors: Vec<Vec<u64>> = (0..m.pow(n as u32))
        .map(|mut v| {
            let mut row = vec![0u64; n];
            for e in row.iter_mut().rev() {
                *e = v % m;
                v /= m;
            }
            row
        })
        .collect();
    Ok(GlIter {
        n,
        modulus,
        p: modulus.parts().ok().map(|(p, _)| p),
        vectors,
        idx: vec![0; n],
        bases: vec![Vec::new(); n + 1],
        level: 0,
        started: false,
        done: false,
    })
}

pub struct GlIter {
    n: usize,
    modulus: Modulus,
    p: Option<u64>,
    vectors: Vec<Vec<u64>>,
    idx: Vec<usize>,
    /// `bases[l]`: echelon basis mod p of the first `l` chosen rows.
    bases: Vec<Vec<(usize, Vec<u64>)>>,
    level: usize,
    started: bool,
    done: bool,
}

impl GlIter {
    fn row_ok(&self, level: usize, row: &[u64]) -> Option<Vec<(usize, Vec<u64>)>> {
        match self.p {
            Some(p) => extend_basis_mod_p(&self.bases[level], row, p),
            // composite modulus: no early rejection, final determinant decides
            None => Some(Vec::new()),
        }
    }

    fn current(&self) -> RingMatrix {
        let entries = self.idx.iter().flat_map(|&i| self.vectors[i].iter().copied()).collect();
        RingMatrix {
            n: self.n,
            modulus: self.modulus,
            entries,
        }
    }

    fn advance(&mut self) -> bool {
        let nv = self.vectors.len();
        loop {
            if self.idx[self.level] >= nv {
                if self.level == 0 {
                    return false;
                }
                self.level -= 1;
                self.idx[self.level] += 1;
                continue;
            }
            let level = self.level;
            match self.row_ok(level, &self.vectors[self.idx[level]]) {
                Some(basis) => {
                    self.bases[level + 1] = basis;
                    if level + 1 == self.n {
                        if self.p.is_some() || self.current().is_invertible() {
                            return true;
                        }
                        self.idx[level] += 1;
                    } else {
                        self.level += 1;
                        self.idx[self.level] = 0;
                    }
                }
                None => self.idx[level] += 1,
            }
        }
    }
}

impl Iterator for GlIter {
    type Item = RingMatrix;

    fn next(&mut self) -> Option<RingMatrix> {
        if self.done {
            return None;
        }
        if self.started {
            self.idx[self.n - 1] += 1;
        }
        self.started = true;
        if self.advance() {
            Some(self.current())
        } else {
            self.done = true;
            None
        }
    }
}

/// Add `row` (reduced mod p) to an echelon basis; `None` if it is dependent.
fn extend_basis_mod_p(basis: &[(usize, Vec<u64>)], row: &[u64], p: u64) -> Option<Vec<(usize, Vec<u64>)>> {
    let mut v: Vec<u64> = row.iter().map(|&e| e % p).collect();
    for (pivot, b) in basis {
        let c = v[*pivot];
        if c != 0 {
            for (x, &y) in v.iter_mut().zip(b) {
                *x = (*x + p * p - c * y % p) % p;
            }
        }
    }
    let pivot = v.iter().position(|&x| x != 0)?;
    let inv = mod_inverse_prime(v[pivot], p);
    for x in &mut v {
        *x = *x * inv % p;
    }
    let mut out = basis.to_vec();
    out.push((pivot, v));
    Some(out)
}

fn mod_inverse_prime(a: u64, p: u64) -> u64 {
    let mut result = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(m: u64) -> Modulus {
        Modulus::from_value(m).unwrap()
    }

    fn mat(m: u64, rows: &[&[u64]]) -> RingMatrix {
        RingMatrix::from_rows(z(m), rows).unwrap()
    }

    #[test]
    fn products() {
        let a = mat(6, &[&[2, 3], &[4, 3]]);
        assert_eq!(RingMatrix::identity(2, z(6)).mat_mul(&a).unwrap(), a);
        assert_eq!(a.mat_mul(&RingMatrix::identity(2, z(6))).unwrap(), a);
        let p = mat(6, &[&[1, 3], &[2, 1]]);
        let d = RingMatrix::diagonal(z(6), &[2, 3]);
        assert_eq!(p.mat_mul(&d).unwrap(), a);
    }

    #[test]
    fn mismatched_shapes() {
        let a = RingMatrix::identity(2, z(4));
        assert!(matches!(
            a.mat_mul(&RingMatrix::identity(3, z(4))),
            Err(Error::ShapeMismatch(_))
        ));
        assert!(matches!(
            a.mat_mul(&RingMatrix::identity(2, z(8))),
            Err(Error::ShapeMismatch(_))
        ));
        assert!(RingMatrix::new(2, z(4), vec![1, 2, 3]).is_err());
        assert!(RingMatrix::new(0, z(4), vec![]).is_err());
    }

    #[test]
    fn determinants() {
        for n in 1..=5 {
            assert_eq!(RingMatrix::identity(n, z(9)).det().value(), 1);
        }
        assert_eq!(mat(4, &[&[2, 1], &[0, 2]]).det().value(), 0);
        assert_eq!(mat(6, &[&[1, 3], &[2, 1]]).det().value(), 1);
        // zero pivot forces a row swap
        assert_eq!(mat(7, &[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]]).det().value(), 6);
    }

    #[test]
    fn big_modulus_determinant() {
        let m = Modulus::prime_power(1_000_003, 3).unwrap();
        let a = RingMatrix::from_rows(m, &[&[2, 0], &[0, 3]]).unwrap();
        assert_eq!(a.det().value(), 6);
        let b = RingMatrix::from_rows(m, &[&[0, 1], &[1, 0]]).unwrap();
        assert_eq!(b.det().value(), m.m() - 1);
    }

    #[test]
    fn invertibility() {
        assert!(RingMatrix::identity(3, z(4)).is_invertible());
        assert!(!mat(4, &[&[1, 1], &[1, 1]]).is_invertible());
        assert!(mat(4, &[&[1, 0], &[2, 1]]).is_invertible());
        assert!(!mat(6, &[&[2, 0], &[0, 1]]).is_invertible());
    }

    #[test]
    fn inverses() {
        let i3 = RingMatrix::identity(3, z(8));
        assert_eq!(i3.inverse().unwrap(), i3);
        let a = mat(4, &[&[1, 0], &[2, 1]]);
        assert_eq!(a.inverse().unwrap(), a);
        assert_eq!(a.mat_mul(&a).unwrap(), RingMatrix::identity(2, z(4)));
        let b = mat(6, &[&[1, 3], &[2, 1]]);
        assert_eq!(b.inverse().unwrap(), mat(6, &[&[1, 3], &[4, 1]]));
        assert!(matches!(
            mat(4, &[&[2, 1], &[0, 2]]).inverse(),
            Err(Error::NotInvertible { .. })
        ));
    }

    #[test]
    fn conjugation() {
        let p = mat(4, &[&[1, 0], &[2, 1]]);
        let d = RingMatrix::diagonal(z(4), &[2, 1]);
        assert_eq!(p.conjugate(&d).unwrap(), mat(4, &[&[2, 0], &[2, 1]]));
        let j = mat(4, &[&[2, 1], &[0, 2]]);
        assert_eq!(p.conjugate(&j).unwrap(), mat(4, &[&[0, 1], &[0, 0]]));
        assert_eq!(RingMatrix::identity(2, z(4)).conjugate(&j).unwrap(), j);
    }

    #[test]
    fn gl_small_cases() {
        // oracle: filter every matrix by determinant
        let brute = |n: usize, m: u64| {
            let modulus = z(m);
            (0..m.pow((n * n) as u32))
                .filter(|&i| RingMatrix::from_index(n, modulus, i).is_invertible())
                .count()
        };
        assert_eq!(brute(2, 2), 6);
        assert_eq!(brute(2, 4), 96);
        assert_eq!(enumerate_gl(2, z(2), DEFAULT_BUDGET).unwrap().count(), 6);
        assert_eq!(enumerate_gl(2, z(4), DEFAULT_BUDGET).unwrap().count(), 96);
        let units: Vec<_> = enumerate_gl(1, z(4), DEFAULT_BUDGET)
            .unwrap()
            .map(|a| a.get(0, 0))
            .collect();
        assert_eq!(units, vec![1, 3]);
        assert_eq!(enumerate_gl(2, z(6), DEFAULT_BUDGET).unwrap().count(), brute(2, 6));
    }

    #[test]
    fn gl_order_is_lexicographic_and_invertible() {
        let all: Vec<RingMatrix> = enumerate_gl(2, z(9), DEFAULT_BUDGET).unwrap().collect();
        let keys: Vec<u64> = all.iter().map(|a| a.index().unwrap()).collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
        assert!(all.iter().all(|a| a.is_invertible()));
    }

    #[test]
    fn gl_budget() {
        let err = enumerate_gl(4, z(9), DEFAULT_BUDGET).err().unwrap();
        match err {
            Error::BudgetExceeded { required, budget } => {
                assert_eq!(required, BigUint::from(9u64).pow(16u32));
                assert_eq!(budget, DEFAULT_BUDGET);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn multisets() {
        let all: Vec<_> = DiagonalSpec::all(2, z(4)).collect();
        assert_eq!(all.len(), 10);
        assert_eq!(all[0].entries(), &[0, 0]);
        assert_eq!(all[9].entries(), &[3, 3]);
        assert_eq!(DiagonalSpec::count(2, z(4)), BigUint::from(10u32));
        assert_eq!(DiagonalSpec::all(4, z(3)).count(), 15);
        assert_eq!(DiagonalSpec::new(z(8), &[7, 5, 7]).entries(), &[5, 7, 7]);
    }

    #[test]
    fn index_roundtrip() {
        let a = mat(9, &[&[8, 0, 3], &[1, 2, 7], &[4, 4, 0]]);
        let idx = a.index().unwrap();
        assert_eq!(RingMatrix::from_index(3, z(9), idx), a);
    }
}
