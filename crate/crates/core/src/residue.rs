//! Arithmetic in `Z/m`, p-adic valuations, and the Euler-phi counting family.
//!
//! Every counting function here returns a [`BigUint`]: for `n = 4` and
//! `k >= 3` the quantities downstream no longer fit in a machine word.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Pow, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Deterministic trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) || n.is_multiple_of(3) {
        return false;
    }
    let mut d = 5u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) || n.is_multiple_of(d + 2) {
            return false;
        }
        d += 6;
    }
    true
}

/// The ring of scalars `Z/m`.
///
/// A prime-power modulus carries its base `p` and exponent `k`; a composite
/// modulus (such as 6) is admitted for matrix arithmetic only and is rejected
/// by every valuation or counting routine.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Modulus {
    m: u64,
    prime_power: Option<(u64, u32)>,
}

impl Modulus {
    /// `Z/p^k` with `p` prime and `k >= 1`.
    pub fn prime_power(p: u64, k: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k == 0 {
            return Err(Error::InvalidModulus("exponent k must be at least 1".into()));
        }
        let m = p
            .checked_pow(k)
            .ok_or_else(|| Error::InvalidModulus(format!("{p}^{k} overflows 64 bits")))?;
        Ok(Self {
            m,
            prime_power: Some((p, k)),
        })
    }

    /// Any modulus `m >= 2`, recognising prime powers.
    pub fn from_value(m: u64) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidModulus(format!("modulus must be at least 2 (got {m})")));
        }
        let p = smallest_prime_factor(m);
        let mut rest = m;
        let mut k = 0u32;
        while rest.is_multiple_of(p) {
            rest /= p;
            k += 1;
        }
        Ok(Self {
            m,
            prime_power: (rest == 1).then_some((p, k)),
        })
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn is_prime_power(&self) -> bool {
        self.prime_power.is_some()
    }

    /// `(p, k)` for a prime-power modulus.
    pub fn parts(&self) -> Result<(u64, u32)> {
        self.prime_power.ok_or(Error::UnsupportedModulus(self.m))
    }

    /// `m` as an arbitrary-precision integer.
    pub fn order(&self) -> BigUint {
        BigUint::from(self.m)
    }

    pub fn residue(&self, value: u64) -> Residue {
        Residue {
            value: value % self.m,
            modulus: *self,
        }
    }

    /// Reduce a signed integer into `[0, m)`.
    pub fn reduce_signed(&self, value: i128) -> u64 {
        value.rem_euclid(self.m as i128) as u64
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        ((a as u128 + b as u128) % self.m as u128) as u64
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        ((a as u128 + self.m as u128 - (b % self.m) as u128) % self.m as u128) as u64
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.m as u128) as u64
    }

    /// A value is a unit iff it is coprime to `m`.
    pub fn is_unit(&self, value: u64) -> bool {
        gcd(value % self.m, self.m) == 1
    }

    /// Multiplicative inverse by the extended Euclidean algorithm.
    pub fn inv(&self, value: u64) -> Option<u64> {
        let (g, x) = ext_gcd(value % self.m, self.m);
        (g == 1).then(|| x.rem_euclid(self.m as i128) as u64)
    }

    /// All units of `Z/m` in increasing order.
    pub fn units(&self) -> Vec<u64> {
        (1..self.m).filter(|&v| self.is_unit(v)).collect()
    }

    /// p-adic valuation of `value` (reduced mod `m`).
    pub fn valuation(&self, value: u64) -> Result<Valuation> {
        let (p, _) = self.parts()?;
        let mut v = value % self.m;
        if v == 0 {
            return Ok(Valuation::Infinite);
        }
        let mut l = 0;
        while v.is_multiple_of(p) {
            v /= p;
            l += 1;
        }
        Ok(Valuation::Finite(l))
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.prime_power {
            Some((p, k)) if k > 1 => write!(f, "Z/{p}^{k}"),
            _ => write!(f, "Z/{}", self.m),
        }
    }
}

fn smallest_prime_factor(m: u64) -> u64 {
    if m.is_multiple_of(2) {
        return 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= m {
        if m.is_multiple_of(d) {
            return d;
        }
        d += 2;
    }
    m
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Returns `(gcd(a, m), x)` with `a*x ≡ gcd (mod m)`.
fn ext_gcd(a: u64, m: u64) -> (u64, i128) {
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    (old_r as u64, old_s)
}

/// p-adic valuation. Zero has infinite valuation; every nonzero residue of
/// `Z/p^k` has a finite valuation in `[0, k-1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(u32),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<u32> {
        match self {
            Valuation::Finite(l) => Some(l),
            Valuation::Infinite => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(l) => write!(f, "{l}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Valuation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// An element of `Z/m`, always stored reduced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Residue {
    value: u64,
    modulus: Modulus,
}

impl Residue {
    pub fn new(value: u64, modulus: Modulus) -> Self {
        modulus.residue(value)
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn is_unit(&self) -> bool {
        self.modulus.is_unit(self.value)
    }

    pub fn val_p(&self) -> Result<Valuation> {
        self.modulus.valuation(self.value)
    }

    pub fn inv(&self) -> Result<Residue> {
        match self.modulus.inv(self.value) {
            Some(v) => Ok(self.modulus.residue(v)),
            None => Err(Error::NotInvertible {
                valuation: self.val_p().unwrap_or(Valuation::Infinite),
            }),
        }
    }

    pub fn add(&self, other: &Residue) -> Residue {
        self.with(self.modulus.add(self.value, other.value))
    }

    pub fn sub(&self, other: &Residue) -> Residue {
        self.with(self.modulus.sub(self.value, other.value))
    }

    pub fn mul(&self, other: &Residue) -> Residue {
        self.with(self.modulus.mul(self.value, other.value))
    }

    fn with(&self, value: u64) -> Residue {
        Residue {
            value,
            modulus: self.modulus,
        }
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// `p^e` as a big integer.
pub fn big_pow(p: u64, e: u64) -> BigUint {
    Pow::pow(BigUint::from(p), e)
}

/// Euler's phi at a prime power: `phi(p^l) = p^(l-1) (p-1)`, with `phi(1) = 1`.
pub fn phi_pow(p: u64, l: u32) -> BigUint {
    if l == 0 {
        BigUint::one()
    } else {
        big_pow(p, (l - 1) as u64) * (p - 1)
    }
}

/// `phi_i(p^j) = p^j - i p^(j-1)`: the number of admissible values for the
/// i-th edge difference of a linked cell at valuation `k - j`.
pub fn phi_i(p: u64, j: u32, i: u64) -> Result<BigUint> {
    if j == 0 || i == 0 {
        return Err(Error::InvalidType(format!(
            "phi_i needs j >= 1 and i >= 1 (j = {j}, i = {i})"
        )));
    }
    if i > p {
        return Err(Error::NegativeCount { p, i });
    }
    Ok(big_pow(p, (j - 1) as u64) * (p - i))
}

/// Product `phi_1(p^j) * ... * phi_len(p^j)` for one linked cell. A cell longer
/// than `p` yields zero: the factor `phi_p` already vanishes.
pub fn linked_cell_product(p: u64, j: u32, len: u64) -> Result<BigUint> {
    let mut acc = BigUint::one();
    for i in 1..=len {
        if i > p {
            break;
        }
        acc *= phi_i(p, j, i)?;
        if acc.is_zero() {
            break;
        }
    }
    Ok(acc)
}
