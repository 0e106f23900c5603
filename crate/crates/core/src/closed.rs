//! Closed forms for `|Diag_n(Z/p^k)|`, `n = 2, 3, 4`.
//!
//! Every fraction is evaluated as an exact integer division; a nonzero
//! remainder is reported as an internal inconsistency.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Pow, Zero};

use crate::error::{Error, Result};
use crate::group::gl_order;
use crate::residue::Modulus;

fn pw(p: u64, e: u64) -> BigInt {
    Pow::pow(BigInt::from(p), e)
}

fn div(num: BigInt, den: BigInt, what: &str) -> Result<BigInt> {
    let (q, r) = num.div_rem(&den);
    if !r.is_zero() {
        return Err(Error::Inconsistent(format!("{what}: {den} does not divide {num}")));
    }
    Ok(q)
}

fn to_count(v: BigInt) -> Result<BigUint> {
    match v.sign() {
        Sign::Minus => Err(Error::Inconsistent(format!("closed form is negative: {v}"))),
        _ => Ok(v.magnitude().clone()),
    }
}

/// `p^k + p^(k+1) (p^2 - 1) (p^(3k) - 1) / (2 (p^3 - 1))`.
pub fn diag2_closed(p: u64, k: u32) -> Result<BigUint> {
    Modulus::prime_power(p, k)?;
    let k = k as u64;
    let num = pw(p, k + 1) * (pw(p, 2) - 1) * (pw(p, 3 * k) - 1);
    let den = BigInt::from(2) * (pw(p, 3) - 1);
    to_count(pw(p, k) + div(num, den, "n = 2 closed form")?)
}

/// The four-term `n = 3` closed form.
pub fn diag3_closed(p: u64, k: u32) -> Result<BigUint> {
    Modulus::prime_power(p, k)?;
    let k = k as u64;
    let pi = BigInt::from(p);
    let two = div(
        pw(p, k + 2) * (pw(p, 3) - 1) * (pw(p, 5 * k) - 1),
        pw(p, 5) - 1,
        "n = 3, two values",
    )?;
    let distinct_flat = div(
        pw(p, k + 3) * (pw(p, 3) - 1) * (&pi - 2) * (&pi + 1) * (pw(p, 8 * k) - 1),
        BigInt::from(6) * (pw(p, 8) - 1),
        "n = 3, uniform triangle",
    )?;
    let inner = (pw(p, 8 * k) - pw(p, 8)) * (pw(p, 5) - 1) - (pw(p, 5 * k) - pw(p, 5)) * (pw(p, 8) - 1);
    let distinct_split = div(
        pw(p, k + 3) * (pw(p, 2) - 1) * inner,
        BigInt::from(2) * (pw(p, 8) - 1) * (pw(p, 5) - 1),
        "n = 3, split triangle",
    )?;
    to_count(pw(p, k) + two + distinct_flat + distinct_split)
}

/// Which `t` values to use for the two asymmetric `2+1+1` rows of the `n = 4`
/// table (a triangle with weights `(i, i, j)`, `i < j`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Diag4Rows {
    /// Multiplicity-aware counts: `p^k phi phi` when the doubled value sits at
    /// an end of the heavy edge, `p^k phi phi / 2` when it sits at the apex.
    Corrected,
    /// `3 p^k phi phi / 2` for both rows, as obtained from the arrangement
    /// factor `g! / prod n_m!`.
    Arrangement,
}

/// `n = 4` closed form: the sum over every `4 x 4` type row and weight range
/// of `t |GL_4| / c`, with the corrected `2+1+1` rows.
pub fn diag4_closed(p: u64, k: u32) -> Result<BigUint> {
    diag4_closed_with(p, k, Diag4Rows::Corrected)
}

pub fn diag4_closed_with(p: u64, k: u32, rows: Diag4Rows) -> Result<BigUint> {
    Modulus::prime_power(p, k)?;
    let pk = pw(p, k as u64);
    // phi_s(p^(k - i)) = p^(k-i-1) (p - s), taken literally even when negative
    let f = |s: i64, i: u32| pw(p, (k - i - 1) as u64) * (BigInt::from(p) - s);
    let gl = |n: usize| BigInt::from(gl_order(n, p, k));
    let unit = gl(1);
    let gl4 = gl(4);
    let pe = |e: u64| pw(p, e);

    // (t numerator, t denominator, centralizer)
    let mut terms: Vec<(BigInt, BigInt, BigInt)> = vec![(pk.clone(), BigInt::one(), gl4.clone())];
    for i in 0..k {
        let e = i as u64;
        terms.push((&pk * f(1, i), 1.into(), pe(6 * e) * &unit * gl(3)));
        terms.push((&pk * f(1, i), 2.into(), pe(8 * e) * gl(2) * gl(2)));
        terms.push((&pk * f(1, i) * f(2, i), 2.into(), pe(10 * e) * &unit * &unit * gl(2)));
        terms.push((
            &pk * f(1, i) * f(2, i) * f(3, i),
            24.into(),
            pe(12 * e) * Pow::pow(&unit, 4u32),
        ));
        for j in i + 1..k {
            let (e, ej) = (i as u64, j as u64);
            let pair = &pk * f(1, i) * f(1, j);
            let c3 = &unit * &unit * gl(2);
            match rows {
                Diag4Rows::Corrected => {
                    terms.push((pair.clone(), 1.into(), pe(6 * e + 4 * ej) * &c3));
                    terms.push((pair.clone(), 2.into(), pe(8 * e + 2 * ej) * &c3));
                }
                Diag4Rows::Arrangement => {
                    terms.push((BigInt::from(3) * &pair, 2.into(), pe(6 * e + 4 * ej) * &c3));
                    terms.push((BigInt::from(3) * &pair, 2.into(), pe(8 * e + 2 * ej) * &c3));
                }
            }
            let c4 = Pow::pow(&unit, 4u32);
            terms.push((
                BigInt::from(4) * &pk * f(1, i) * f(1, j) * f(2, j),
                24.into(),
                pe(6 * e + 6 * ej) * &c4,
            ));
            terms.push((
                BigInt::from(3) * &pk * f(1, i) * f(1, j) * f(1, j),
                24.into(),
                pe(8 * e + 4 * ej) * &c4,
            ));
            terms.push((
                BigInt::from(6) * &pk * f(1, i) * f(2, i) * f(1, j),
                24.into(),
                pe(10 * e + 2 * ej) * &c4,
            ));
            for m in j + 1..k {
                let em = m as u64;
                let triple = &pk * f(1, i) * f(1, j) * f(1, m);
                terms.push((BigInt::from(12) * &triple, 24.into(), pe(6 * e + 4 * ej + 2 * em) * &c4));
                terms.push((BigInt::from(6) * &triple, 24.into(), pe(8 * e + 2 * ej + 2 * em) * &c4));
            }
        }
    }
    let mut total = BigInt::zero();
    for (t_num, t_den, c) in terms {
        total += div(t_num * &gl4, t_den * c, "n = 4 closed form")?;
    }
    to_count(total)
}
