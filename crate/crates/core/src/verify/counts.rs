use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{CheckReport, COPRIME_C_MAX, GOAL_G_FLOOR, TAU_CEILING};
use crate::arith::{euler_phi, moebius, omega, sieve_table, ArithTable, FnKind};
use crate::constants::EULER_GAMMA;
use crate::dioph::{AlphaSpec, NumeratorBand};
use crate::error::{Error, Result};
use crate::expsum::{RealAcc, ResidueSums};

/// Desk-scale cap on `x` for [`bv_average`].
pub const BV_X_CAP: u64 = 10_000_000;
/// Above this `q`, [`check_tau_rational`] samples numerators instead of
/// scanning all of them.
pub const TAU_FULL_SCAN_Q: u64 = 100;
const TAU_SAMPLES: usize = 64;

/// `#{a ∈ ℤ : (a,q) = 1, |α - a/q| <= 1/(6y)}` against `φ(q)/(3y)`, with the
/// discrepancy measured in units of `2^{ω(q)}`.
pub fn check_coprime_count(q: u64, y: u64, alpha: &AlphaSpec) -> Result<CheckReport> {
    if q == 0 || y == 0 {
        return Err(Error::Precondition("q and y must be positive".into()));
    }
    let band = NumeratorBand::new(
        alpha.value(),
        &BigRational::new(BigInt::one(), BigInt::from(6 * y)),
    );
    let count = match band.range(q) {
        Some((lo, hi)) => (lo..=hi)
            .filter(|a| (a.rem_euclid(q as i64) as u64).gcd(&q) == 1)
            .count(),
        None => 0,
    };
    let expected = euler_phi(q) as f64 / (3 * y) as f64;
    let units = 2f64.powi(omega(q) as i32);
    let c = (count as f64 - expected).abs() / units;
    Ok(CheckReport::new(
        "coprime-count",
        count as f64,
        expected,
        c <= COPRIME_C_MAX,
        COPRIME_C_MAX,
    )
    .param("q", q)
    .param("y", y)
    .param("alpha", alpha.to_string())
    .param_f64("C", c))
}

/// `Σ_{q<=Q} μ²(q)/φ(q)`.
pub fn squarefree_phi_sum(q_max: u64) -> Result<f64> {
    range_phi_sum(0, q_max)
}

fn range_phi_sum(q_lo: u64, q_max: u64) -> Result<f64> {
    if q_lo >= q_max {
        return Ok(0.0);
    }
    let mu = sieve_table(FnKind::Moebius, q_lo + 1, q_max)?;
    let phi = sieve_table(FnKind::EulerPhi, q_lo + 1, q_max)?;
    Ok(mu
        .values()
        .iter()
        .zip(phi.values())
        .filter(|(m, _)| **m != 0.0)
        .map(|(_, p)| 1.0 / p)
        .sum::<RealAcc>()
        .value())
}

/// `Σ_{Q^{1-ε}<q<=Q} μ²(q)/φ(q)` against `ε log Q`.
pub fn check_goal_g(q_max: u64, eps: f64) -> Result<CheckReport> {
    if q_max < 16 {
        return Err(Error::Precondition(format!(
            "Q must be at least 16, got {q_max}"
        )));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidEpsilon(eps.to_string()));
    }
    let q_lo = (q_max as f64).powf(1.0 - eps).floor() as u64;
    let sum = range_phi_sum(q_lo, q_max)?;
    let scale = eps * (q_max as f64).ln();
    let ratio = sum / scale;
    Ok(
        CheckReport::new("goal-g", sum, scale, ratio >= GOAL_G_FLOOR, GOAL_G_FLOOR)
            .param("Q", q_max)
            .param_f64("epsilon", eps)
            .param("q_lo_exclusive", q_lo),
    )
}

/// The Barban–Davenport–Halberstam type average at frequency 0:
/// `B = Σ_{q<=Q} max_{(a,q)=1} |ψ(x; a/q) - (μ(q)/φ(q)) ⌊x⌋|`. Data only.
pub fn bv_average_table(lambda: &ArithTable, x: u64, q_max: u64) -> Result<CheckReport> {
    if x > BV_X_CAP {
        return Err(Error::RangeTooLarge {
            lo: 1,
            hi: x,
            cap: BV_X_CAP,
        });
    }
    if q_max == 0 || (q_max as u128).pow(3) > x as u128 {
        return Err(Error::Precondition(format!(
            "need 1 <= Q <= x^(1/3), got Q = {q_max}, x = {x}"
        )));
    }
    lambda.ensure_covers(1, x)?;
    let terms: Vec<(u64, f64)> = lambda.nonzero(1, x).collect();
    let per_q: Vec<f64> = (1..=q_max)
        .into_par_iter()
        .map(|q| {
            let rs = ResidueSums::from_terms(terms.iter().copied(), q);
            let main = moebius(q) as f64 / euler_phi(q) as f64 * x as f64;
            rs.evaluate_coprime()
                .values()
                .map(|z| (z - main).norm())
                .fold(0.0, f64::max)
        })
        .collect();
    let b = per_q.iter().copied().sum::<RealAcc>().value();
    let log_x = (x as f64).ln();
    let mut report = CheckReport::new("bv-average", b, x as f64, true, 0.0)
        .param("x", x)
        .param("Q", q_max)
        .param("data_only", true);
    for a in 1..=3 {
        report = report.param_f64(&format!("B_log{a}_over_x"), b * log_x.powi(a) / x as f64);
    }
    Ok(report)
}

pub fn bv_average(x: u64, q_max: u64) -> Result<CheckReport> {
    let lambda = sieve_table(FnKind::VonMangoldt, 1, x)?;
    bv_average_table(&lambda, x, q_max)
}

/// For each `q` in the grid, the worst `|Σ_{n<=x} τ(n) e(an/q) - (x/q)(log(x/q²) + 2γ - 1)|`
/// over numerators `a` coprime to `q`, normalized by `√x (1 + log q)`.
/// Numerators are scanned exhaustively for `q <= 100` and sampled with
/// `seed` above.
pub fn check_tau_rational(
    tau: &ArithTable,
    x: u64,
    q_grid: &[u64],
    seed: u64,
) -> Result<Vec<CheckReport>> {
    if let Some(&q) = q_grid.iter().find(|&&q| q == 0 || q.saturating_mul(q) > x) {
        return Err(Error::QExceedsSqrtX { q, x });
    }
    tau.ensure_covers(1, x)?;
    let terms: Vec<(u64, f64)> = tau.nonzero(1, x).collect();
    let xf = x as f64;
    q_grid
        .par_iter()
        .map(|&q| {
            let rs = ResidueSums::from_terms(terms.iter().copied(), q);
            let mut numerators: Vec<u64> = (0..q).filter(|a| a.gcd(&q) == 1).collect();
            if q > TAU_FULL_SCAN_Q {
                let mut rng =
                    ChaCha8Rng::seed_from_u64(seed ^ q.wrapping_mul(0x9E37_79B9_7F4A_7C15));
                numerators.shuffle(&mut rng);
                numerators.truncate(TAU_SAMPLES);
                numerators.sort_unstable();
            }
            let qf = q as f64;
            let main = xf / qf * ((xf / (qf * qf)).ln() + 2.0 * EULER_GAMMA - 1.0);
            let (worst_a, err) = numerators
                .iter()
                .map(|&a| (a, (rs.evaluate(a as i64) - main).norm()))
                .fold((0, -1.0), |b, c| if c.1 > b.1 { c } else { b });
            let normalized = err / (xf.sqrt() * (1.0 + qf.ln()));
            Ok(CheckReport::new(
                "tau-rational",
                normalized,
                TAU_CEILING,
                normalized <= TAU_CEILING,
                TAU_CEILING,
            )
            .param("x", x)
            .param("q", q)
            .param("worst_a", worst_a)
            .param("numerators_checked", numerators.len())
            .param_f64("main_term", main)
            .param_f64("error", err))
        })
        .collect()
}
