use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::cf::{quotient_stream, Convergents};
use crate::error::{Error, Result};

/// Realization floors above 2^256 are rejected.
pub const FLOOR_CAP_BITS: u64 = 256;

/// Where α comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlphaSource {
    Rational(BigRational),
    /// √d for a non-square d.
    Sqrt(u64),
    GoldenRatio,
    EulerE,
    Pi,
}

impl AlphaSource {
    pub fn is_rational(&self) -> bool {
        matches!(self, AlphaSource::Rational(_))
    }
}

impl fmt::Display for AlphaSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlphaSource::Rational(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            AlphaSource::Sqrt(d) => write!(f, "sqrt:{d}"),
            AlphaSource::GoldenRatio => f.write_str("golden"),
            AlphaSource::EulerE => f.write_str("e"),
            AlphaSource::Pi => f.write_str("pi"),
        }
    }
}

impl FromStr for AlphaSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        let sqrt_arg = t
            .strip_prefix("sqrt:")
            .or_else(|| t.strip_prefix("sqrt(").and_then(|r| r.strip_suffix(')')))
            .or_else(|| t.strip_prefix("sqrt"));
        if let Some(d) = sqrt_arg {
            return d
                .trim()
                .parse()
                .map(AlphaSource::Sqrt)
                .map_err(|_| Error::Parse(format!("bad radicand in `{s}`")));
        }
        match t.as_str() {
            "golden" | "golden-ratio" | "phi" => Ok(AlphaSource::GoldenRatio),
            "e" | "euler-e" => Ok(AlphaSource::EulerE),
            "pi" => Ok(AlphaSource::Pi),
            _ => {
                let body = t.strip_prefix("rational:").unwrap_or(&t);
                super::parse_ratio(body)
                    .map(AlphaSource::Rational)
                    .map_err(|_| Error::Unknown {
                        kind: "alpha source",
                        name: s.to_string(),
                    })
            }
        }
    }
}

impl Serialize for AlphaSource {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for AlphaSource {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

/// α realized as an exact rational `P/Q`.
///
/// For an irrational source `P/Q` is a continued-fraction convergent of the
/// true value with `Q >= floor`, so `|α - P/Q| <= 1/Q^2`. For a rational
/// source `P/Q` is α itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaSpec {
    source: AlphaSource,
    value: BigRational,
    floor: BigUint,
}

impl AlphaSpec {
    pub fn source(&self) -> &AlphaSource {
        &self.source
    }

    pub fn value(&self) -> &BigRational {
        &self.value
    }

    pub fn numer(&self) -> &BigInt {
        self.value.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.value.denom()
    }

    pub fn floor(&self) -> &BigUint {
        &self.floor
    }

    pub fn is_rational(&self) -> bool {
        self.source.is_rational()
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64().unwrap_or(f64::NAN)
    }

    /// An exact rational α.
    pub fn exact(value: BigRational) -> Self {
        AlphaSpec {
            source: AlphaSource::Rational(value.clone()),
            value,
            floor: BigUint::one(),
        }
    }

    pub fn from_fraction(a: i64, q: u64) -> Self {
        Self::exact(BigRational::new(a.into(), q.into()))
    }

    /// `-α`, as an exact rational.
    pub fn negated(&self) -> Self {
        Self::exact(-self.value.clone())
    }

    /// `α + k` for an integer shift; phases are unchanged.
    pub fn shifted(&self, k: i64) -> Self {
        Self::exact(&self.value + BigRational::from_integer(k.into()))
    }

    /// `α + β`, as an exact rational.
    pub fn offset(&self, beta: &BigRational) -> Self {
        Self::exact(&self.value + beta)
    }
}

impl fmt::Display for AlphaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ~ {}/{}", self.source, self.numer(), self.denom())
    }
}

/// Realizes `source` with denominator at least `floor`.
pub fn realize_alpha(source: AlphaSource, floor: u64) -> Result<AlphaSpec> {
    realize_alpha_floor(source, &BigUint::from(floor))
}

pub fn realize_alpha_floor(source: AlphaSource, floor: &BigUint) -> Result<AlphaSpec> {
    let cap = BigUint::one() << FLOOR_CAP_BITS;
    if *floor > cap {
        return Err(Error::FloorTooLarge);
    }
    if let AlphaSource::Rational(r) = &source {
        let value = r.clone();
        return Ok(AlphaSpec {
            source,
            value,
            floor: floor.clone(),
        });
    }
    let want = BigInt::from(floor.clone());
    let convergent = Convergents::new(quotient_stream(&source)?)
        .map(|(_, c)| c)
        .find(|c| c.q >= want && !c.q.is_zero())
        .ok_or(Error::FloorTooLarge)?;
    Ok(AlphaSpec {
        value: BigRational::new(convergent.p, convergent.q),
        source,
        floor: floor.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pq(a: &AlphaSpec) -> (String, String) {
        (a.numer().to_string(), a.denom().to_string())
    }

    #[test]
    fn examples() {
        let g = realize_alpha(AlphaSource::GoldenRatio, 10).unwrap();
        assert_eq!(pq(&g), ("21".into(), "13".into()));
        let third = AlphaSource::Rational(BigRational::new(1.into(), 3.into()));
        assert_eq!(
            pq(&realize_alpha(third, 1_000_000).unwrap()),
            ("1".into(), "3".into())
        );
        let r2 = realize_alpha(AlphaSource::Sqrt(2), 100).unwrap();
        assert_eq!(pq(&r2), ("239".into(), "169".into()));
    }

    #[test]
    fn errors() {
        assert!(matches!(
            realize_alpha(AlphaSource::Sqrt(16), 5),
            Err(Error::SquareRadicand(16))
        ));
        let too_big = (BigUint::one() << 256u32) + 1u32;
        assert!(matches!(
            realize_alpha_floor(AlphaSource::GoldenRatio, &too_big),
            Err(Error::FloorTooLarge)
        ));
        let cap = BigUint::one() << 256u32;
        let pi = realize_alpha_floor(AlphaSource::Pi, &cap).unwrap();
        assert!(pi.denom() >= &BigInt::from(cap));
    }

    #[test]
    fn realization_is_a_good_approximation() {
        // |α - P/Q| <= 1/Q^2 against a high-precision float for α
        for (src, val) in [
            (AlphaSource::GoldenRatio, (1.0 + 5f64.sqrt()) / 2.0),
            (AlphaSource::EulerE, std::f64::consts::E),
            (AlphaSource::Pi, std::f64::consts::PI),
            (AlphaSource::Sqrt(3), 3f64.sqrt()),
        ] {
            let a = realize_alpha(src, 1000).unwrap();
            let q = a.denom().to_f64().unwrap();
            assert!(q >= 1000.0);
            assert!((a.to_f64() - val).abs() <= 1.0 / (q * q) + 1e-15);
        }
    }

    #[test]
    fn source_parsing() {
        for (s, src) in [
            ("golden", AlphaSource::GoldenRatio),
            ("sqrt:2", AlphaSource::Sqrt(2)),
            ("sqrt(5)", AlphaSource::Sqrt(5)),
            ("sqrt3", AlphaSource::Sqrt(3)),
            ("pi", AlphaSource::Pi),
            ("e", AlphaSource::EulerE),
            (
                "1/3",
                AlphaSource::Rational(BigRational::new(1.into(), 3.into())),
            ),
            ("0", AlphaSource::Rational(BigRational::zero())),
        ] {
            assert_eq!(s.parse::<AlphaSource>().unwrap(), src, "{s}");
            assert_eq!(src.to_string().parse::<AlphaSource>().unwrap(), src);
        }
        assert!("tau".parse::<AlphaSource>().is_err());
    }
}
