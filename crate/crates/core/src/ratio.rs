use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A nonnegative rational in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactRatio {
    numerator: BigUint,
    denominator: BigUint,
}

impl ExactRatio {
    pub fn new(numerator: BigUint, denominator: BigUint) -> Result<Self> {
        if denominator.is_zero() {
            return Err(Error::Inconsistent("ratio with zero denominator".into()));
        }
        let g = numerator.gcd(&denominator);
        let g = if g.is_zero() { BigUint::one() } else { g };
        Ok(Self {
            numerator: numerator / &g,
            denominator: denominator / g,
        })
    }

    pub fn numerator(&self) -> &BigUint {
        &self.numerator
    }

    pub fn denominator(&self) -> &BigUint {
        &self.denominator
    }

    /// Nearest `f64`; exact ratios of huge integers are scaled first.
    pub fn to_f64(&self) -> f64 {
        let shift = self.numerator.bits().max(self.denominator.bits()).saturating_sub(1000);
        let n = (&self.numerator >> shift).to_f64().unwrap_or(f64::INFINITY);
        let d = (&self.denominator >> shift).to_f64().unwrap_or(f64::INFINITY);
        n / d
    }
}

impl fmt::Display for ExactRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denominator.is_one() {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "{}/{}", self.numerator, self.denominator)
        }
    }
}

impl Serialize for ExactRatio {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
