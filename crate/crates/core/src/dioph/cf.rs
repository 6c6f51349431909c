use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::alpha::{AlphaSource, AlphaSpec};
use crate::constants::PI_DIGITS;
use crate::error::{Error, Result};

/// One convergent `p/q` of a continued fraction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Convergent {
    pub p: BigInt,
    pub q: BigInt,
}

impl Convergent {
    pub fn to_ratio(&self) -> BigRational {
        BigRational::new(self.p.clone(), self.q.clone())
    }
}

/// Partial quotients and convergents, index-aligned.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvergentSeq {
    pub partial_quotients: Vec<BigInt>,
    pub convergents: Vec<Convergent>,
}

impl ConvergentSeq {
    fn from_quotients(quotients: impl IntoIterator<Item = BigInt>) -> Self {
        let mut seq = ConvergentSeq {
            partial_quotients: Vec::new(),
            convergents: Vec::new(),
        };
        for (a, c) in Convergents::new(quotients.into_iter()) {
            seq.partial_quotients.push(a);
            seq.convergents.push(c);
        }
        seq
    }

    /// `p_k q_{k-1} - p_{k-1} q_k = (-1)^(k-1)` for every k >= 1.
    pub fn determinants_hold(&self) -> bool {
        self.convergents.windows(2).enumerate().all(|(i, w)| {
            let k = i + 1;
            let det = &w[1].p * &w[0].q - &w[0].p * &w[1].q;
            let expected = if (k - 1) % 2 == 0 {
                BigInt::one()
            } else {
                -BigInt::one()
            };
            det == expected
        })
    }
}

/// Runs the convergent recurrence over a stream of partial quotients.
pub(crate) struct Convergents<I> {
    quotients: I,
    prev: (BigInt, BigInt),
    cur: (BigInt, BigInt),
}

impl<I: Iterator<Item = BigInt>> Convergents<I> {
    pub(crate) fn new(quotients: I) -> Self {
        Convergents {
            quotients,
            prev: (BigInt::zero(), BigInt::one()),
            cur: (BigInt::one(), BigInt::zero()),
        }
    }
}

impl<I: Iterator<Item = BigInt>> Iterator for Convergents<I> {
    type Item = (BigInt, Convergent);

    fn next(&mut self) -> Option<Self::Item> {
        let a = self.quotients.next()?;
        let p = &a * &self.cur.0 + &self.prev.0;
        let q = &a * &self.cur.1 + &self.prev.1;
        self.prev = std::mem::replace(&mut self.cur, (p.clone(), q.clone()));
        Some((a, Convergent { p, q }))
    }
}

/// Partial quotients of a rational number by the Euclidean algorithm
/// (floor division, so a negative value gets a negative leading quotient).
pub(crate) fn rational_quotients(r: &BigRational) -> Vec<BigInt> {
    let mut out = Vec::new();
    let (mut num, mut den) = (r.numer().clone(), r.denom().clone());
    while !den.is_zero() {
        let (a, rem) = num.div_mod_floor(&den);
        out.push(a);
        num = std::mem::replace(&mut den, rem);
    }
    out
}

/// The regular continued fraction of the true value behind an irrational
/// source. Infinite for quadratic irrationals, φ and e; finite for π, where
/// only the quotients certified by the shipped digits are produced.
pub fn quotient_stream(source: &AlphaSource) -> Result<Box<dyn Iterator<Item = BigInt>>> {
    Ok(match source {
        AlphaSource::Rational(r) => Box::new(rational_quotients(r).into_iter()),
        AlphaSource::GoldenRatio => Box::new(std::iter::repeat_with(BigInt::one)),
        AlphaSource::EulerE => Box::new((0u64..).map(|k| {
            if k == 0 {
                BigInt::from(2)
            } else if k % 3 == 2 {
                BigInt::from(2 * (k + 1) / 3)
            } else {
                BigInt::one()
            }
        })),
        AlphaSource::Sqrt(d) => Box::new(sqrt_quotients(*d)?),
        AlphaSource::Pi => Box::new(pi_quotients().into_iter()),
    })
}

fn sqrt_quotients(d: u64) -> Result<impl Iterator<Item = BigInt>> {
    let a0 = u128::from(d.sqrt());
    if a0 * a0 == u128::from(d) {
        return Err(Error::SquareRadicand(d));
    }
    let d = u128::from(d);
    let (mut m, mut den, mut a) = (0u128, 1u128, a0);
    let mut first = true;
    Ok(std::iter::from_fn(move || {
        if first {
            first = false;
            return Some(BigInt::from(a0));
        }
        m = den * a - m;
        den = (d - m * m) / den;
        a = (a0 + m) / den;
        Some(BigInt::from(a))
    }))
}

/// Quotients shared by the continued fractions of the two decimal
/// truncations bracketing π, minus the last shared one.
fn pi_quotients() -> Vec<BigInt> {
    let digits: String = PI_DIGITS.chars().filter(|c| c.is_ascii_digit()).collect();
    let scale = num_traits::pow(BigInt::from(10), digits.len() - 1);
    let lower: BigInt = digits.parse().expect("digits");
    let lo = rational_quotients(&BigRational::new(lower.clone(), scale.clone()));
    let hi = rational_quotients(&BigRational::new(lower + 1, scale));
    let mut common: Vec<BigInt> = lo
        .into_iter()
        .zip(hi)
        .take_while(|(a, b)| a == b)
        .map(|(a, _)| a)
        .collect();
    common.pop();
    common
}

/// First `k` partial quotients and convergents of α.
///
/// For an exact rational this is its finite expansion, truncated at `k`.
/// For an irrational source the quotients are those of the true value, so
/// the sequence is not limited by the realization's denominator.
pub fn continued_fraction(alpha: &AlphaSpec, k: usize) -> Result<ConvergentSeq> {
    if k == 0 {
        return Err(Error::Precondition("need at least one quotient".into()));
    }
    let stream = quotient_stream(alpha.source())?;
    Ok(ConvergentSeq::from_quotients(stream.take(k)))
}

/// Convergents of the true value behind `source`.
pub fn convergent_stream(source: &AlphaSource) -> Result<Box<dyn Iterator<Item = Convergent>>> {
    Ok(Box::new(
        Convergents::new(quotient_stream(source)?).map(|(_, c)| c),
    ))
}
