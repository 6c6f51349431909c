//! Segmented sieving of the arithmetic functions the exponential sums are
//! built from.

pub mod cache;
mod factor;

use std::fmt;
use std::str::FromStr;

use num_integer::Roots;
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub use factor::{
    divisor_count, euler_phi, factorize, is_prime, is_squarefree, moebius, omega, prime_divisors,
    von_mangoldt, FACTORIZE_CAP,
};

/// Which arithmetic function a table holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FnKind {
    /// Λ(n) = log p when n = p^k, else 0.
    VonMangoldt,
    /// τ(n), the number of divisors.
    Divisor,
    /// μ(n).
    Moebius,
    /// φ(n).
    EulerPhi,
    /// ω(n), the number of distinct prime factors.
    OmegaDistinct,
    /// 1 on primes, 0 elsewhere.
    PrimeIndicator,
    /// The constant function 1.
    One,
}

impl FnKind {
    pub const ALL: [FnKind; 7] = [
        FnKind::VonMangoldt,
        FnKind::Divisor,
        FnKind::Moebius,
        FnKind::EulerPhi,
        FnKind::OmegaDistinct,
        FnKind::PrimeIndicator,
        FnKind::One,
    ];

    pub fn tag(self) -> u8 {
        self as u8
    }

    pub fn from_tag(tag: u8) -> Option<Self> {
        Self::ALL.get(usize::from(tag)).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            FnKind::VonMangoldt => "von-mangoldt",
            FnKind::Divisor => "divisor",
            FnKind::Moebius => "moebius",
            FnKind::EulerPhi => "euler-phi",
            FnKind::OmegaDistinct => "omega",
            FnKind::PrimeIndicator => "prime",
            FnKind::One => "one",
        }
    }
}

impl fmt::Display for FnKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FnKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "von-mangoldt" | "vonmangoldt" | "lambda" => FnKind::VonMangoldt,
            "divisor" | "tau" => FnKind::Divisor,
            "moebius" | "mobius" | "mu" => FnKind::Moebius,
            "euler-phi" | "phi" => FnKind::EulerPhi,
            "omega" => FnKind::OmegaDistinct,
            "prime" | "primes" => FnKind::PrimeIndicator,
            "one" | "1" => FnKind::One,
            _ => {
                return Err(Error::Unknown {
                    kind: "function",
                    name: s.to_string(),
                })
            }
        })
    }
}

impl Serialize for FnKind {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for FnKind {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Values of one arithmetic function on `[lo, hi]`. Integer-valued kinds are
/// stored exactly (all values are far below 2^53).
#[derive(Debug, Clone, PartialEq)]
pub struct ArithTable {
    kind: FnKind,
    lo: u64,
    hi: u64,
    values: Vec<f64>,
}

impl ArithTable {
    pub(crate) fn from_parts(kind: FnKind, lo: u64, values: Vec<f64>) -> Self {
        assert!(lo >= 1 && !values.is_empty());
        let hi = lo + values.len() as u64 - 1;
        ArithTable {
            kind,
            lo,
            hi,
            values,
        }
    }

    pub fn kind(&self) -> FnKind {
        self.kind
    }

    pub fn lo(&self) -> u64 {
        self.lo
    }

    pub fn hi(&self) -> u64 {
        self.hi
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, n: u64) -> Option<f64> {
        if n < self.lo || n > self.hi {
            None
        } else {
            Some(self.values[(n - self.lo) as usize])
        }
    }

    /// Value at `n`, taken as 0 outside the table. Callers that need the
    /// table to cover a range use [`ArithTable::ensure_covers`] first.
    #[inline]
    pub fn at(&self, n: i64) -> f64 {
        if n < self.lo as i64 || n > self.hi as i64 {
            0.0
        } else {
            self.values[(n as u64 - self.lo) as usize]
        }
    }

    pub fn covers(&self, lo: u64, hi: u64) -> bool {
        self.lo <= lo && hi <= self.hi
    }

    pub fn ensure_covers(&self, lo: u64, hi: u64) -> Result<()> {
        if self.covers(lo, hi) {
            Ok(())
        } else {
            Err(Error::TableGap {
                have_lo: self.lo,
                have_hi: self.hi,
                need_lo: lo,
                need_hi: hi,
            })
        }
    }

    /// Values on `[lo, hi]`, which must be covered.
    pub fn slice(&self, lo: u64, hi: u64) -> &[f64] {
        &self.values[(lo - self.lo) as usize..=(hi - self.lo) as usize]
    }

    /// `(n, f(n))` for every `n` in `[lo, hi]` with `f(n) != 0`.
    pub fn nonzero(&self, lo: u64, hi: u64) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.slice(lo, hi)
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != 0.0)
            .map(move |(i, v)| (lo + i as u64, *v))
    }

    /// Restriction to a sub-range.
    pub fn restrict(&self, lo: u64, hi: u64) -> Result<ArithTable> {
        self.ensure_covers(lo, hi)?;
        Ok(ArithTable::from_parts(
            self.kind,
            lo,
            self.slice(lo, hi).to_vec(),
        ))
    }
}

/// Sieve limits. The defaults cap tables at 10^8 and use 2^20-entry segments.
#[derive(Debug, Clone)]
pub struct SieveConfig {
    pub max_hi: u64,
    pub segment_len: usize,
}

impl Default for SieveConfig {
    fn default() -> Self {
        SieveConfig {
            max_hi: 100_000_000,
            segment_len: 1 << 20,
        }
    }
}

/// Sieves `kind` on `[lo, hi]` with the default configuration.
pub fn sieve_table(kind: FnKind, lo: u64, hi: u64) -> Result<ArithTable> {
    SieveConfig::default().sieve(kind, lo, hi)
}

impl SieveConfig {
    pub fn sieve(&self, kind: FnKind, lo: u64, hi: u64) -> Result<ArithTable> {
        if lo < 1 || lo > hi {
            return Err(Error::InvalidRange { lo, hi });
        }
        if hi > self.max_hi {
            return Err(Error::RangeTooLarge {
                lo,
                hi,
                cap: self.max_hi,
            });
        }
        if kind == FnKind::One {
            return Ok(ArithTable::from_parts(
                kind,
                lo,
                vec![1.0; (hi - lo + 1) as usize],
            ));
        }
        let base = base_primes(hi.sqrt());
        let seg = self.segment_len.max(1) as u64;
        let starts: Vec<u64> = (lo..=hi).step_by(seg as usize).collect();
        let parts: Vec<Vec<f64>> = starts
            .par_iter()
            .map(|&s| {
                let e = (s + seg - 1).min(hi);
                Segment::factor(s, e, &base).values(kind)
            })
            .collect();
        Ok(ArithTable::from_parts(kind, lo, parts.concat()))
    }
}

/// Primes up to `limit` by a plain sieve of Eratosthenes.
pub fn base_primes(limit: u64) -> Vec<u64> {
    let limit = limit as usize;
    let mut composite = vec![false; limit + 1];
    let mut out = Vec::new();
    for i in 2..=limit {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= limit {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Multiplicative data for every n in one segment, gathered by dividing out
/// each base prime from its multiples. Whatever is left after all base
/// primes is a single prime above sqrt(hi).
struct Segment {
    rem: Vec<u64>,
    tau: Vec<u32>,
    mu: Vec<i8>,
    phi: Vec<u64>,
    omega: Vec<u8>,
    /// Largest prime factor seen; the unique one when omega == 1.
    prime: Vec<u64>,
}

impl Segment {
    fn factor(start: u64, end: u64, base: &[u64]) -> Segment {
        let len = (end - start + 1) as usize;
        let mut s = Segment {
            rem: (start..=end).collect(),
            tau: vec![1; len],
            mu: vec![1; len],
            phi: vec![1; len],
            omega: vec![0; len],
            prime: vec![0; len],
        };
        for &p in base {
            if p * p > end {
                break;
            }
            let mut m = start.div_ceil(p) * p;
            while m <= end {
                let i = (m - start) as usize;
                let mut e = 0u32;
                let mut pk = 1u64;
                while s.rem[i].is_multiple_of(p) {
                    s.rem[i] /= p;
                    e += 1;
                    pk *= p;
                }
                s.record(i, p, e, pk);
                m += p;
            }
        }
        for i in 0..len {
            let r = s.rem[i];
            if r > 1 {
                s.record(i, r, 1, r);
            }
        }
        s
    }

    fn record(&mut self, i: usize, p: u64, e: u32, pk: u64) {
        self.tau[i] *= e + 1;
        self.mu[i] = if e > 1 { 0 } else { -self.mu[i] };
        self.phi[i] *= pk / p * (p - 1);
        self.omega[i] += 1;
        self.prime[i] = p;
    }

    fn values(&self, kind: FnKind) -> Vec<f64> {
        let n = self.tau.len();
        (0..n)
            .map(|i| match kind {
                FnKind::VonMangoldt => {
                    if self.omega[i] == 1 {
                        (self.prime[i] as f64).ln()
                    } else {
                        0.0
                    }
                }
                FnKind::Divisor => f64::from(self.tau[i]),
                FnKind::Moebius => f64::from(self.mu[i]),
                FnKind::EulerPhi => self.phi[i] as f64,
                FnKind::OmegaDistinct => f64::from(self.omega[i]),
                FnKind::PrimeIndicator => {
                    if self.tau[i] == 2 {
                        1.0
                    } else {
                        0.0
                    }
                }
                FnKind::One => 1.0,
            })
            .collect()
    }
}
