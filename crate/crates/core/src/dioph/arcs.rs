use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::alpha::AlphaSpec;
use super::cf::convergent_stream;
use super::Fraction;
use crate::arith::{FnKind, SieveConfig};
use crate::error::{Error, Result};

/// Default absolute constant for [`mediant_family`]: requires `Q >= 8 s`.
pub const MEDIANT_C: u64 = 8;

/// Largest `Qlo` for the exhaustive squarefree scan.
pub const SQUAREFREE_QLO_CAP: u64 = 1_000_000;

/// The integer numerators `a` with `|α - a/q| <= r`, for any `q`, decided
/// exactly: `a` ranges over `[ceil(q(α - r)), floor(q(α + r))]`.
#[derive(Debug, Clone)]
pub struct NumeratorBand {
    lo_num: BigInt,
    hi_num: BigInt,
    den: BigInt,
}

impl NumeratorBand {
    pub fn new(alpha: &BigRational, radius: &BigRational) -> Self {
        assert!(!radius.is_negative(), "radius must be nonnegative");
        let lo = alpha - radius;
        let hi = alpha + radius;
        let den = lo.denom().lcm(hi.denom());
        NumeratorBand {
            lo_num: lo.numer() * (&den / lo.denom()),
            hi_num: hi.numer() * (&den / hi.denom()),
            den,
        }
    }

    /// Inclusive numerator range for denominator `q`, or `None` when empty.
    pub fn range(&self, q: u64) -> Option<(i64, i64)> {
        let q = BigInt::from(q);
        let lo = -((-(&q * &self.lo_num)).div_floor(&self.den));
        let hi = (&q * &self.hi_num).div_floor(&self.den);
        if lo > hi {
            return None;
        }
        Some((lo.to_i64()?, hi.to_i64()?))
    }

    /// Reduced fractions `a/q` in the band, sorted by `a`.
    pub fn reduced(&self, q: u64) -> impl Iterator<Item = Fraction> {
        let (lo, hi) = self.range(q).unwrap_or((1, 0));
        (lo..=hi).filter_map(move |a| Fraction::new(a, q).ok())
    }
}

/// `R(x, α)` and the fraction attaining it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApproxQuality {
    pub r: BigRational,
    pub witness: Fraction,
}

/// The least `R` such that some reduced `a/q` with `q <= R` has
/// `|α - a/q| <= R/(q x)`.
///
/// For a fixed `q` the best numerator is the one nearest `αq`, giving
/// `R_q = max(q, x |qα - a|)`. Since the minimum is at most `sqrt(x)` it is
/// attained with `q <= sqrt(x)`, and the scan stops as soon as `q` alone
/// exceeds the best value found.
pub fn approx_quality(alpha: &AlphaSpec, x: u64) -> Result<ApproxQuality> {
    if x < 2 {
        return Err(Error::Precondition(format!("x = {x} must be at least 2")));
    }
    let (p, d) = (alpha.numer(), alpha.denom());
    let xb = BigInt::from(x);
    // candidates are compared as numerators over the common denominator d
    let mut best: Option<(BigInt, Fraction)> = None;
    for q in 1..=num_integer::Roots::sqrt(&x) {
        let qb = BigInt::from(q);
        let q_scaled = &qb * d;
        if let Some((b, _)) = &best {
            if q_scaled >= *b {
                break;
            }
        }
        let qp = &qb * p;
        let a_floor = qp.div_floor(d);
        for a in [a_floor.clone(), a_floor + 1] {
            let Some(a64) = a.to_i64() else { continue };
            let Ok(frac) = Fraction::new(a64, q) else {
                continue;
            };
            let dist = (&qp - &a * d).abs();
            let cand = std::cmp::max(q_scaled.clone(), &xb * dist);
            if best.as_ref().is_none_or(|(b, _)| cand < *b) {
                best = Some((cand, frac));
            }
        }
    }
    let (num, witness) = best.expect("q = 1 always yields a candidate");
    Ok(ApproxQuality {
        r: BigRational::new(num, d.clone()),
        witness,
    })
}

/// The set of reduced `a/q` with `q <= Q` and `|α - a/q| <= 1/(6y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MajorArcSet {
    pub alpha: AlphaSpec,
    pub q_max: u64,
    pub y: u64,
    pub fractions: Vec<Fraction>,
}

impl MajorArcSet {
    pub fn len(&self) -> usize {
        self.fractions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fractions.is_empty()
    }

    pub fn contains(&self, f: &Fraction) -> bool {
        self.fractions.binary_search(f).is_ok()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain integers serialize")
    }
}

impl Serialize for MajorArcSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("MajorArcSet", 3)?;
        st.serialize_field("Q", &self.q_max)?;
        st.serialize_field("y", &self.y)?;
        st.serialize_field("fractions", &self.fractions)?;
        st.end()
    }
}

pub fn major_arcs(alpha: &AlphaSpec, q_max: u64, y: u64) -> Result<MajorArcSet> {
    if q_max == 0 || y == 0 {
        return Err(Error::Precondition("Q and y must be positive".into()));
    }
    let band = NumeratorBand::new(
        alpha.value(),
        &BigRational::new(BigInt::one(), BigInt::from(6 * y)),
    );
    let fractions = (1..=q_max).flat_map(|q| band.reduced(q)).collect();
    Ok(MajorArcSet {
        alpha: alpha.clone(),
        q_max,
        y,
        fractions,
    })
}

/// Reduced `a/q` with `q_lo < q <= q_hi` and `|α - a/q| <= radius`, sorted
/// by `(q, a)`.
pub fn band_approximations(
    alpha: &BigRational,
    q_lo: u64,
    q_hi: u64,
    radius: &BigRational,
) -> Vec<Fraction> {
    let band = NumeratorBand::new(alpha, radius);
    (q_lo + 1..=q_hi).flat_map(|q| band.reduced(q)).collect()
}

/// `(t, v)` with `v s - t u = 1` and `s <= t < 2s`.
pub fn bezout_partner(us: Fraction) -> (u64, i64) {
    let (u, s) = (i128::from(us.a()), i128::from(us.q()));
    // t = -u^{-1} mod s, shifted into [s, 2s)
    let inv = if s == 1 {
        0
    } else {
        let g = u.rem_euclid(s).extended_gcd(&s);
        debug_assert_eq!(g.gcd, 1);
        g.x.rem_euclid(s)
    };
    let t = (-inv).rem_euclid(s) + s;
    let v = (1 + t * u) / s;
    debug_assert_eq!(v * s - t * u, 1);
    (t as u64, v as i64)
}

pub fn mediant_family(us: Fraction, q: u64) -> Result<Vec<Fraction>> {
    mediant_family_with(us, q, MEDIANT_C)
}

/// The fractions `(a u + b v)/(a s + b t)` over coprime pairs
/// `Q/(s+t) < a, b <= 2Q/(s+t)`, where `v/t` is the Bézout partner of `u/s`.
/// Each lies between `u/s` and `v/t` with denominator in `(Q, 2Q]`.
pub fn mediant_family_with(us: Fraction, q: u64, c: u64) -> Result<Vec<Fraction>> {
    let s = us.q();
    if q < c.saturating_mul(s) {
        return Err(Error::QTooSmall {
            q,
            c,
            min: c.saturating_mul(s),
        });
    }
    let (t, v) = bezout_partner(us);
    let st = s + t;
    let lo = q / st + 1;
    let hi = 2 * q / st;
    let mut out = Vec::new();
    for a in lo..=hi {
        for b in lo..=hi {
            if a.gcd(&b) != 1 {
                continue;
            }
            let num = a as i64 * us.a() + b as i64 * v;
            let den = a * s + b * t;
            out.push(Fraction::new(num, den)?);
        }
    }
    out.sort();
    Ok(out)
}

/// Exhaustive scan for reduced `a/q` with `Qlo < q <= 2 Qlo`, `q`
/// squarefree and `|α - a/q| <= 2/s^2`. Returns the count and the fractions.
pub fn squarefree_major_arcs(
    alpha: &AlphaSpec,
    q_lo: u64,
    s: u64,
) -> Result<(usize, Vec<Fraction>)> {
    if q_lo == 0 || s == 0 {
        return Err(Error::Precondition("Qlo and s must be positive".into()));
    }
    if q_lo > SQUAREFREE_QLO_CAP {
        return Err(Error::RangeTooLarge {
            lo: q_lo,
            hi: 2 * q_lo,
            cap: SQUAREFREE_QLO_CAP,
        });
    }
    let mu = SieveConfig::default().sieve(FnKind::Moebius, q_lo + 1, 2 * q_lo)?;
    let radius = BigRational::new(BigInt::from(2), BigInt::from(s) * BigInt::from(s));
    let band = NumeratorBand::new(alpha.value(), &radius);
    let fractions: Vec<Fraction> = (q_lo + 1..=2 * q_lo)
        .filter(|&q| mu.get(q) != Some(0.0))
        .flat_map(|q| band.reduced(q))
        .collect();
    Ok((fractions.len(), fractions))
}

/// A convergent `u/s` of α and the admissible window lengths
/// `ceil(ε' s^2) <= y <= floor(s^2/12)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmissibleWindow {
    pub s: u64,
    pub u: i64,
    pub y_lo: u64,
    pub y_hi: u64,
}

pub fn admissible_window(
    alpha: &AlphaSpec,
    eps_prime: &BigRational,
    s_min: u64,
) -> Result<AdmissibleWindow> {
    if alpha.is_rational() {
        return Err(Error::RationalAlpha);
    }
    let twelfth = BigRational::new(BigInt::one(), BigInt::from(12));
    if !eps_prime.is_positive() || *eps_prime > twelfth {
        return Err(Error::InvalidEpsilon(eps_prime.to_string()));
    }
    let want = BigInt::from(s_min.max(1));
    let c = convergent_stream(alpha.source())?
        .find(|c| c.q >= want)
        .ok_or_else(|| Error::Precondition("continued fraction exhausted".into()))?;
    let s2 = BigRational::from_integer(&c.q * &c.q);
    let y_lo = (&s2 * eps_prime).ceil().to_integer();
    let y_hi = (&s2 * &twelfth).floor().to_integer();
    if y_lo > y_hi {
        return Err(Error::EmptyWindow {
            s: c.q.to_string(),
            lo: y_lo.to_string(),
            hi: y_hi.to_string(),
        });
    }
    let overflow = || Error::Precondition("convergent too large for machine words".into());
    Ok(AdmissibleWindow {
        s: c.q.to_u64().ok_or_else(overflow)?,
        u: c.p.to_i64().ok_or_else(overflow)?,
        y_lo: y_lo.to_u64().ok_or_else(overflow)?,
        y_hi: y_hi.to_u64().ok_or_else(overflow)?,
    })
}
