use std::f64::consts::TAU;

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::dioph::AlphaSpec;

/// Rational phases with denominators up to this size get a twiddle table.
const TWIDDLE_CACHE_MAX: u64 = 1 << 16;

/// `e(r/den)` with `r` taken in `[-den/2, den/2)` before rounding, so the
/// angle passed to `sin_cos` never exceeds π in magnitude.
#[inline]
pub fn unit_of_residue(r: u64, den: u64) -> Complex64 {
    let centered = if r.saturating_mul(2) >= den {
        -((den - r) as f64)
    } else {
        r as f64
    };
    let (s, c) = (TAU * (centered / den as f64)).sin_cos();
    Complex64::new(c, s)
}

/// `e(k/q)` for `k = 0..q`.
pub fn twiddles(q: u64) -> Vec<Complex64> {
    (0..q).map(|k| unit_of_residue(k, q)).collect()
}

#[inline]
fn unit_of_fraction(frac: f64) -> Complex64 {
    let centered = if frac >= 0.5 { frac - 1.0 } else { frac };
    let (s, c) = (TAU * centered).sin_cos();
    Complex64::new(c, s)
}

#[derive(Debug, Clone)]
enum Modulus {
    /// Denominator below 2^64: residues fit a word and products fit u128.
    Word {
        num: u64,
        den: u64,
    },
    Big {
        num: BigUint,
        den: BigUint,
    },
}

/// Exact evaluation of `e(αm)` for the realization `α = P/Q`.
///
/// The phase `frac(αm)` is computed as `(P m mod Q)/Q` in integer
/// arithmetic and rounded to double precision only once.
#[derive(Debug, Clone)]
pub struct PhaseContext {
    alpha: AlphaSpec,
    modulus: Modulus,
    cache: Option<Vec<Complex64>>,
}

impl PhaseContext {
    pub fn new(alpha: &AlphaSpec) -> Self {
        let den = alpha.denom().to_biguint().expect("positive denominator");
        let num = mod_floor_big(alpha.numer(), &den);
        let modulus = match (num.to_u64(), den.to_u64()) {
            (Some(num), Some(den)) => Modulus::Word { num, den },
            _ => Modulus::Big { num, den },
        };
        let cache = match modulus {
            Modulus::Word { den, .. } if den <= TWIDDLE_CACHE_MAX => Some(twiddles(den)),
            _ => None,
        };
        PhaseContext {
            alpha: alpha.clone(),
            modulus,
            cache,
        }
    }

    pub fn alpha(&self) -> &AlphaSpec {
        &self.alpha
    }

    /// `frac(α m)` in `[0, 1)`.
    pub fn phase(&self, m: i64) -> f64 {
        match &self.modulus {
            Modulus::Word { num, den } => word_residue(*num, *den, m) as f64 / *den as f64,
            Modulus::Big { num, den } => big_fraction(&big_residue(num, den, m), den),
        }
    }

    /// `e(α m)`.
    #[inline]
    pub fn unit(&self, m: i64) -> Complex64 {
        match &self.modulus {
            Modulus::Word { num, den } => {
                let r = word_residue(*num, *den, m);
                match &self.cache {
                    Some(t) => t[r as usize],
                    None => unit_of_residue(r, *den),
                }
            }
            Modulus::Big { num, den } => {
                unit_of_fraction(big_fraction(&big_residue(num, den, m), den))
            }
        }
    }

    /// Sequential evaluation of `e(α m)` for `m = start, start + 1, ...`.
    pub fn stepper(&self, start: i64) -> PhaseStepper<'_> {
        let state = match &self.modulus {
            Modulus::Word { num, den } => StepState::Word(word_residue(*num, *den, start)),
            Modulus::Big { num, den } => StepState::Big(big_residue(num, den, start)),
        };
        PhaseStepper { ctx: self, state }
    }
}

#[inline]
fn word_residue(num: u64, den: u64, m: i64) -> u64 {
    let m = i128::from(m).rem_euclid(i128::from(den)) as u128;
    ((u128::from(num) * m) % u128::from(den)) as u64
}

fn mod_floor_big(n: &BigInt, den: &BigUint) -> BigUint {
    let r = n.mod_floor(&BigInt::from(den.clone()));
    r.to_biguint().expect("mod_floor is nonnegative")
}

fn big_residue(num: &BigUint, den: &BigUint, m: i64) -> BigUint {
    let m = mod_floor_big(&BigInt::from(m), den);
    (num * m) % den
}

/// `r/den` to double precision via the top 64 bits of the quotient.
fn big_fraction(r: &BigUint, den: &BigUint) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let top = (r << 64u32) / den;
    top.to_u64().expect("quotient below 2^64") as f64 / 2f64.powi(64)
}

enum StepState {
    Word(u64),
    Big(BigUint),
}

pub struct PhaseStepper<'a> {
    ctx: &'a PhaseContext,
    state: StepState,
}

impl PhaseStepper<'_> {
    /// `e(α m)` for the current `m`, then advances to `m + 1`.
    #[inline]
    pub fn next_unit(&mut self) -> Complex64 {
        match (&mut self.state, &self.ctx.modulus) {
            (StepState::Word(r), Modulus::Word { num, den }) => {
                let z = match &self.ctx.cache {
                    Some(t) => t[*r as usize],
                    None => unit_of_residue(*r, *den),
                };
                *r = add_mod(*r, *num, *den);
                z
            }
            (StepState::Big(r), Modulus::Big { num, den }) => {
                let z = unit_of_fraction(big_fraction(r, den));
                *r += num;
                if &*r >= den {
                    *r -= den;
                }
                z
            }
            _ => unreachable!("stepper state matches its modulus"),
        }
    }

    /// Advances without evaluating.
    #[inline]
    pub fn skip(&mut self) {
        match (&mut self.state, &self.ctx.modulus) {
            (StepState::Word(r), Modulus::Word { num, den }) => *r = add_mod(*r, *num, *den),
            (StepState::Big(r), Modulus::Big { num, den }) => {
                *r += num;
                if &*r >= den {
                    *r -= den;
                }
            }
            _ => unreachable!("stepper state matches its modulus"),
        }
    }
}

#[inline]
fn add_mod(r: u64, num: u64, den: u64) -> u64 {
    let s = u128::from(r) + u128::from(num);
    let d = u128::from(den);
    (if s >= d { s - d } else { s }) as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dioph::{realize_alpha, realize_alpha_floor, AlphaSource};
    use num_traits::One;

    #[test]
    fn phase_is_exact_mod_one() {
        let ctx = PhaseContext::new(&AlphaSpec::from_fraction(7, 3));
        assert_eq!(ctx.phase(1), 1.0 / 3.0);
        assert_eq!(ctx.phase(3), 0.0);
        assert_eq!(ctx.phase(-1), 2.0 / 3.0);
        let z = ctx.unit(3);
        assert_eq!(z, Complex64::new(1.0, 0.0));
    }

    #[test]
    fn shift_by_integer_changes_nothing() {
        let a = realize_alpha(AlphaSource::GoldenRatio, 1_000_000_000_000).unwrap();
        let c1 = PhaseContext::new(&a);
        let c2 = PhaseContext::new(&a.shifted(5));
        for m in [-17i64, 0, 1, 99_991, 1_000_000_007] {
            assert_eq!(c1.unit(m), c2.unit(m));
        }
    }

    #[test]
    fn stepper_matches_random_access() {
        for alpha in [
            realize_alpha(AlphaSource::Sqrt(2), 1 << 40).unwrap(),
            AlphaSpec::from_fraction(-5, 12),
            realize_alpha_floor(AlphaSource::Pi, &(BigUint::one() << 100u32)).unwrap(),
        ] {
            let ctx = PhaseContext::new(&alpha);
            let mut st = ctx.stepper(-50);
            for m in -50..500 {
                let z = st.next_unit();
                assert!((z - ctx.unit(m)).norm() < 1e-15, "{alpha} m={m}");
            }
        }
    }

    #[test]
    fn big_modulus_agrees_with_float_phase() {
        let a = realize_alpha_floor(AlphaSource::Pi, &(BigUint::one() << 100u32)).unwrap();
        let ctx = PhaseContext::new(&a);
        for m in [1i64, 2, 3, 1000] {
            let expect = (std::f64::consts::PI * m as f64).fract();
            assert!((ctx.phase(m) - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn quarter_turns() {
        let t = twiddles(4);
        assert!((t[1] - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        assert!((t[3] - Complex64::new(0.0, -1.0)).norm() < 1e-15);
    }
}
