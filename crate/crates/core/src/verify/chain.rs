use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;

use super::{CheckReport, PI_PSI_CEILING, THEOREM_SLACK};
use crate::arith::ArithTable;
use crate::dioph::{AlphaSpec, NumeratorBand};
use crate::error::{Error, Result};
use crate::expsum::{
    geometric_kernel_exact, pi_window, prefix_sups, window_l2_average, window_sum, ComplexAcc,
    PhaseContext, RealAcc, ResidueSums,
};

fn frac_part(r: &BigRational) -> BigRational {
    r - r.floor()
}

/// Smallest distance mod 1 between two of the points, or `None` for fewer
/// than two points.
fn min_separation(points: &[BigRational]) -> Option<BigRational> {
    if points.len() < 2 {
        return None;
    }
    let mut fr: Vec<BigRational> = points.iter().map(frac_part).collect();
    fr.sort();
    let wrap = BigRational::one() - &fr[fr.len() - 1] + &fr[0];
    Some(
        fr.windows(2)
            .map(|w| &w[1] - &w[0])
            .fold(wrap, |m, g| if g < m { g } else { m }),
    )
}

/// `Σ_{β∈B} |Σ_{n=M+1}^{M+N} f(n) e(βn)|² <= (N + 1/δ) Σ |f(n)|²` for
/// coefficients `f(M+1), ..., f(M+N)` given as a slice.
pub fn check_large_sieve(
    coeffs: &[f64],
    offset: u64,
    points: &[BigRational],
    delta: f64,
) -> Result<CheckReport> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::Precondition(format!(
            "delta must be positive, got {delta}"
        )));
    }
    // the exact minimum is rounded once, so δ = 1/k passes for points spaced 1/k
    let sep = min_separation(points).map(|f| f.to_f64().unwrap_or(0.0));
    if let Some(found) = sep {
        if found < delta {
            return Err(Error::SeparationViolated { delta, found });
        }
    }
    let start = offset as i64 + 1;
    let sums: Vec<f64> = points
        .par_iter()
        .map(|beta| {
            let ctx = PhaseContext::new(&AlphaSpec::exact(beta.clone()));
            let mut st = ctx.stepper(start);
            let mut acc = ComplexAcc::new();
            for &v in coeffs {
                if v == 0.0 {
                    st.skip();
                } else {
                    acc.add(st.next_unit() * v);
                }
            }
            acc.value().norm_sqr()
        })
        .collect();
    let lhs: f64 = sums.iter().copied().sum::<RealAcc>().value();
    let n = coeffs.len() as f64;
    let l2: f64 = coeffs.iter().map(|v| v * v).sum::<RealAcc>().value();
    let rhs = (n + 1.0 / delta) * l2;
    let passed = lhs <= rhs * (1.0 + THEOREM_SLACK);
    Ok(
        CheckReport::new("large-sieve", lhs, rhs, passed, THEOREM_SLACK)
            .param("N", coeffs.len())
            .param("M", offset)
            .param("points", points.len())
            .param_f64("delta", delta)
            .param_f64("min_separation", sep.unwrap_or(f64::NAN)),
    )
}

/// [`check_large_sieve`] with the coefficients of a table on `[lo, hi]`.
pub fn check_large_sieve_table(
    table: &ArithTable,
    points: &[BigRational],
    delta: f64,
) -> Result<CheckReport> {
    Ok(
        check_large_sieve(table.values(), table.lo() - 1, points, delta)?
            .param("kind", table.kind().name()),
    )
}

/// The three sides of the initial chain `L >= M >= A`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainQuantities {
    /// `Σ_{-y<n<=x} |F(n, n+y; α)|²`.
    pub l: f64,
    /// `(x+y+Q²)^{-1} Σ_{q<=Q} Σ_{(a,q)=1} |F(x; a/q)|² |E_y(α - a/q)|²`.
    pub m: f64,
    /// `(y/2)² (x+y+Q²)^{-1} Σ_{𝒜(Q,y)} |F(x; a/q)|²`.
    pub a: f64,
    /// `Σ_{𝒜(Q,y)} |F(x; a/q)|²`.
    pub major_sum: f64,
    pub major_count: usize,
}

pub fn initial_chain_quantities(
    table: &ArithTable,
    ctx: &PhaseContext,
    x: u64,
    y: u64,
    q_max: u64,
    resync: u64,
) -> Result<ChainQuantities> {
    if y > x {
        return Err(Error::YExceedsX { y, x });
    }
    if q_max == 0 || q_max.saturating_mul(q_max) > x {
        return Err(Error::QExceedsSqrtX { q: q_max, x });
    }
    let l = window_l2_average(table, ctx, x, y, resync)?.sum_sq;
    let terms: Vec<(u64, f64)> = table.nonzero(1, x).collect();
    let alpha = frac_part(ctx.alpha().value());
    let band = NumeratorBand::new(
        &alpha,
        &BigRational::new(BigInt::one(), BigInt::from(6 * y)),
    );
    let per_q: Vec<(f64, f64, usize)> = (1..=q_max)
        .into_par_iter()
        .map(|q| {
            let rs = ResidueSums::from_terms(terms.iter().copied(), q);
            let mut weighted = RealAcc::new();
            for (a, z) in rs.evaluate_coprime() {
                let beta = &alpha - BigRational::new(BigInt::from(a), BigInt::from(q));
                weighted.add(z.norm_sqr() * geometric_kernel_exact(y, &beta).norm_sqr());
            }
            let mut major = RealAcc::new();
            let mut count = 0;
            for f in band.reduced(q) {
                major.add(rs.evaluate(f.a()).norm_sqr());
                count += 1;
            }
            (weighted.value(), major.value(), count)
        })
        .collect();
    let denom = (x + y) as f64 + (q_max * q_max) as f64;
    let weighted: f64 = per_q.iter().map(|p| p.0).sum::<RealAcc>().value();
    let major_sum: f64 = per_q.iter().map(|p| p.1).sum::<RealAcc>().value();
    let major_count = per_q.iter().map(|p| p.2).sum();
    let half_y = y as f64 / 2.0;
    Ok(ChainQuantities {
        l,
        m: weighted / denom,
        a: half_y * half_y * major_sum / denom,
        major_sum,
        major_count,
    })
}

/// `L >= M >= A` for the initial chain, with the implied constant
/// `L / ((y²/x) Σ_𝒜 |F(x; a/q)|²)` reported.
pub fn check_initial_chain(
    table: &ArithTable,
    ctx: &PhaseContext,
    x: u64,
    y: u64,
    q_max: u64,
    resync: u64,
) -> Result<CheckReport> {
    let c = initial_chain_quantities(table, ctx, x, y, q_max, resync)?;
    let keep = 1.0 - THEOREM_SLACK;
    let passed = c.l >= c.m * keep && c.m >= c.a * keep;
    let scale = (y * y) as f64 / x as f64 * c.major_sum;
    let constant = if scale > 0.0 { c.l / scale } else { f64::NAN };
    Ok(
        CheckReport::new("initial-chain", c.l, c.m, passed, THEOREM_SLACK)
            .param("kind", table.kind().name())
            .param("alpha", ctx.alpha().to_string())
            .param("x", x)
            .param("y", y)
            .param("Q", q_max)
            .param_f64("L", c.l)
            .param_f64("M", c.m)
            .param_f64("A", c.a)
            .param("major_arcs", c.major_count)
            .param_f64("measured_constant", constant),
    )
}

/// Every window modulus is at most `2 sup_{n<=x} |F(n; α)|`, and
/// `sup >= √S / 2`.
pub fn check_sup_lower_bound(
    table: &ArithTable,
    ctx: &PhaseContext,
    x: u64,
    y: u64,
    resync: u64,
) -> Result<CheckReport> {
    let (sup, argmax) = prefix_sups(table, ctx, x)?;
    let w = window_l2_average(table, ctx, x, y, resync)?;
    let half_root = 0.5 * w.s.sqrt();
    let windows_ok = w.max_window <= 2.0 * sup * (1.0 + THEOREM_SLACK);
    let sup_ok = sup >= half_root * (1.0 - THEOREM_SLACK);
    Ok(CheckReport::new(
        "sup-lower-bound",
        sup,
        half_root,
        windows_ok && sup_ok,
        THEOREM_SLACK,
    )
    .param("kind", table.kind().name())
    .param("alpha", ctx.alpha().to_string())
    .param("x", x)
    .param("y", y)
    .param("argmax", argmax)
    .param_f64("S", w.s)
    .param_f64("max_window", w.max_window)
    .param("windows_within_twice_sup", windows_ok))
}

/// `max_n |Λ-window(n) - log n · π-window(n)| / (log n)²` over a grid of
/// `n >= y²`.
pub fn check_pi_psi_window(
    lambda: &ArithTable,
    primes: &ArithTable,
    ctx: &PhaseContext,
    x: u64,
    y: u64,
    n_grid: &[u64],
) -> Result<CheckReport> {
    if let Some(&bad) = n_grid
        .iter()
        .find(|&&n| n < y.saturating_mul(y) || n > x || n < 2)
    {
        return Err(Error::Precondition(format!(
            "grid point {bad} outside [max(2, y^2), x] = [{}, {x}]",
            (y * y).max(2)
        )));
    }
    let rows: Vec<(u64, f64)> = n_grid
        .par_iter()
        .map(|&n| {
            let psi = window_sum(lambda, ctx, n as i64, y, x)?;
            let pi = pi_window(primes, ctx, n as i64, y, x)?;
            let log_n = (n as f64).ln();
            let d: Complex64 = psi - pi * log_n;
            Ok((n, d.norm() / (log_n * log_n)))
        })
        .collect::<Result<_>>()?;
    let (arg, worst) = rows
        .iter()
        .copied()
        .fold((0, 0.0f64), |best, r| if r.1 > best.1 { r } else { best });
    Ok(CheckReport::new(
        "pi-psi-window",
        worst,
        PI_PSI_CEILING,
        worst <= PI_PSI_CEILING,
        PI_PSI_CEILING,
    )
    .param("alpha", ctx.alpha().to_string())
    .param("x", x)
    .param("y", y)
    .param("grid_points", n_grid.len())
    .param("argmax", arg))
}
