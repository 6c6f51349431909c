//! Exact Diophantine approximation of α.
//!
//! Every membership decision in this module is made in big-integer
//! arithmetic; floating point never decides whether a fraction belongs to a
//! set.

mod alpha;
mod arcs;
mod cf;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use alpha::{realize_alpha, realize_alpha_floor, AlphaSource, AlphaSpec, FLOOR_CAP_BITS};
pub use arcs::{
    admissible_window, approx_quality, band_approximations, bezout_partner, major_arcs,
    mediant_family, mediant_family_with, squarefree_major_arcs, AdmissibleWindow, ApproxQuality,
    MajorArcSet, NumeratorBand, MEDIANT_C, SQUAREFREE_QLO_CAP,
};
pub use cf::{continued_fraction, convergent_stream, quotient_stream, Convergent, ConvergentSeq};

/// A reduced fraction `a/q` with `q >= 1`. Ordered by `(q, a)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Fraction {
    a: i64,
    q: u64,
}

impl Fraction {
    /// Builds `a/q`, rejecting `q = 0` and non-reduced pairs.
    pub fn new(a: i64, q: u64) -> Result<Self> {
        if q == 0 {
            return Err(Error::Precondition("denominator must be positive".into()));
        }
        if (a.unsigned_abs()).gcd(&q) != 1 {
            return Err(Error::NotCoprime { a, q });
        }
        Ok(Fraction { a, q })
    }

    /// Builds `a/q` after dividing out the gcd.
    pub fn reduced(a: i64, q: u64) -> Result<Self> {
        if q == 0 {
            return Err(Error::Precondition("denominator must be positive".into()));
        }
        let g = a.unsigned_abs().gcd(&q);
        Ok(Fraction {
            a: a / g as i64,
            q: q / g,
        })
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn to_ratio(&self) -> BigRational {
        BigRational::new_raw(BigInt::from(self.a), BigInt::from(self.q))
    }

    pub fn to_f64(&self) -> f64 {
        self.a as f64 / self.q as f64
    }

    /// Numerator reduced into `[0, q)`.
    pub fn residue(&self) -> u64 {
        self.a.rem_euclid(self.q as i64) as u64
    }
}

impl Ord for Fraction {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.q, self.a).cmp(&(other.q, other.a))
    }
}

impl PartialOrd for Fraction {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.a, self.q)
    }
}

impl FromStr for Fraction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("expected a/q, got `{s}`"));
        let (a, q) = match s.split_once('/') {
            Some((a, q)) => (a.trim(), q.trim()),
            None => (s.trim(), "1"),
        };
        Fraction::new(a.parse().map_err(|_| bad())?, q.parse().map_err(|_| bad())?)
    }
}

/// Parses `p/q`, an integer, or a plain decimal into an exact rational.
pub fn parse_ratio(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: `{s}`"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q == BigInt::from(0) {
            return Err(bad());
        }
        return Ok(BigRational::new(p, q));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    let digits = format!("{int}{frac}");
    if !digits.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let mut num: BigInt = digits.parse().map_err(|_| bad())?;
    if neg {
        num = -num;
    }
    let den = num_traits::pow(BigInt::from(10), frac.len());
    Ok(BigRational::new(num, den))
}
