use std::collections::BTreeMap;

use num_complex::Complex64;
use num_integer::Integer;

use super::acc::{ComplexAcc, RealAcc};
use super::phase::twiddles;
use crate::arith::ArithTable;
use crate::dioph::Fraction;
use crate::error::{Error, Result};

/// Residue-class sums `S_b = Σ_{m<=x, m ≡ b (q)} f(m)`, from which every
/// `F(x; a/q) = Σ_b e(ab/q) S_b` follows in `O(q)`.
#[derive(Debug, Clone)]
pub struct ResidueSums {
    q: u64,
    sums: Vec<f64>,
    twiddles: Vec<Complex64>,
}

impl ResidueSums {
    pub fn new(table: &ArithTable, q: u64, x: u64) -> Result<Self> {
        if q == 0 {
            return Err(Error::Precondition("q must be positive".into()));
        }
        if q > x {
            return Err(Error::QExceedsX { q, x });
        }
        table.ensure_covers(1, x)?;
        Ok(Self::from_terms(table.nonzero(1, x), q))
    }

    /// Builds from an explicit list of `(m, f(m))`.
    pub fn from_terms(terms: impl IntoIterator<Item = (u64, f64)>, q: u64) -> Self {
        let mut accs = vec![RealAcc::new(); q as usize];
        for (m, v) in terms {
            accs[(m % q) as usize].add(v);
        }
        ResidueSums {
            q,
            sums: accs.iter().map(RealAcc::value).collect(),
            twiddles: twiddles(q),
        }
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn sums(&self) -> &[f64] {
        &self.sums
    }

    /// `F(x; a/q)`.
    pub fn evaluate(&self, a: i64) -> Complex64 {
        let q = self.q;
        let a = a.rem_euclid(q as i64) as u64;
        let mut acc = ComplexAcc::new();
        let mut idx = 0u64;
        for &s in &self.sums {
            if s != 0.0 {
                acc.add(self.twiddles[idx as usize] * s);
            }
            idx += a;
            if idx >= q {
                idx -= q;
            }
        }
        acc.value()
    }

    /// `F(x; a/q)` for every `0 <= a < q` coprime to `q`.
    pub fn evaluate_coprime(&self) -> BTreeMap<u64, Complex64> {
        (0..self.q)
            .filter(|a| a.gcd(&self.q) == 1)
            .map(|a| (a, self.evaluate(a as i64)))
            .collect()
    }
}

/// `F(x; a/q)` through residue-class aggregation.
pub fn expsum_at_rational(table: &ArithTable, frac: Fraction, x: u64) -> Result<Complex64> {
    Ok(ResidueSums::new(table, frac.q(), x)?.evaluate(frac.a()))
}

/// All `F(x; a/q)` with `0 <= a < q`, `(a, q) = 1`, from one residue pass.
pub fn batch_rational(table: &ArithTable, q: u64, x: u64) -> Result<BTreeMap<u64, Complex64>> {
    Ok(ResidueSums::new(table, q, x)?.evaluate_coprime())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{sieve_table, FnKind};
    use crate::dioph::AlphaSpec;
    use crate::expsum::{expsum_full, PhaseContext};

    #[test]
    fn q_one_is_the_plain_sum() {
        let t = sieve_table(FnKind::Divisor, 1, 500).unwrap();
        let z = expsum_at_rational(&t, Fraction::new(0, 1).unwrap(), 500).unwrap();
        let total: f64 = t.values().iter().sum();
        assert_eq!(z, Complex64::new(total, 0.0));
    }

    #[test]
    fn one_half_matches_direct() {
        let l = sieve_table(FnKind::VonMangoldt, 1, 10).unwrap();
        let z = expsum_at_rational(&l, Fraction::new(1, 2).unwrap(), 10).unwrap();
        let w = expsum_full(&l, &PhaseContext::new(&AlphaSpec::from_fraction(1, 2)), 10).unwrap();
        assert!((z - w).norm() < 1e-12);
    }

    #[test]
    fn batch_entries() {
        let one = sieve_table(FnKind::One, 1, 6).unwrap();
        let b2 = batch_rational(&one, 2, 6).unwrap();
        assert_eq!(b2.keys().copied().collect::<Vec<_>>(), vec![1]);
        let b6 = batch_rational(&one, 6, 6).unwrap();
        assert_eq!(b6.keys().copied().collect::<Vec<_>>(), vec![1, 5]);
        for (a, z) in b6 {
            // six terms of a full period sum to zero
            let direct: Complex64 = (1..=6)
                .map(|m| Complex64::from_polar(1.0, std::f64::consts::TAU * (a * m) as f64 / 6.0))
                .sum();
            assert!((z - direct).norm() < 1e-12);
            assert!(z.norm() < 1e-12);
        }
    }

    #[test]
    fn errors() {
        let one = sieve_table(FnKind::One, 1, 6).unwrap();
        assert!(matches!(
            batch_rational(&one, 7, 6),
            Err(Error::QExceedsX { .. })
        ));
        assert!(matches!(
            batch_rational(&one, 3, 7),
            Err(Error::TableGap { .. })
        ));
    }
}
