//! The exponential-sum engine.
//!
//! Notation: `F(x; α) = Σ_{n<=x} f(n) e(αn)` and the window sum
//! `F(n, n+y; α) = Σ_{n<m<=n+y, 1<=m<=x} f(m) e(αm)`.

mod acc;
mod kernel;
mod phase;
mod rational;
mod window;

use num_complex::Complex64;

use crate::arith::{ArithTable, FnKind};
use crate::error::{Error, Result};

pub use acc::{ComplexAcc, RealAcc};
pub use kernel::{geometric_kernel, geometric_kernel_exact};
pub use phase::{twiddles, unit_of_residue, PhaseContext, PhaseStepper};
pub use rational::{batch_rational, expsum_at_rational, ResidueSums};
pub use window::{visit_windows, window_l2_average, WindowAverage, DEFAULT_RESYNC};

/// `F(x; α)`.
pub fn expsum_full(table: &ArithTable, ctx: &PhaseContext, x: u64) -> Result<Complex64> {
    table.ensure_covers(1, x)?;
    let mut acc = ComplexAcc::new();
    let mut st = ctx.stepper(1);
    for &v in table.slice(1, x) {
        if v == 0.0 {
            st.skip();
        } else {
            acc.add(st.next_unit() * v);
        }
    }
    Ok(acc.value())
}

/// `max_{0<=n<=x} |F(n; α)|` and the largest `n` attaining it, in one pass.
pub fn prefix_sups(table: &ArithTable, ctx: &PhaseContext, x: u64) -> Result<(f64, u64)> {
    table.ensure_covers(1, x)?;
    let mut acc = ComplexAcc::new();
    let mut st = ctx.stepper(1);
    let (mut sup, mut argmax) = (0.0f64, 0u64);
    for (i, &v) in table.slice(1, x).iter().enumerate() {
        if v == 0.0 {
            st.skip();
        } else {
            acc.add(st.next_unit() * v);
        }
        let m = acc.value().norm();
        if m >= sup {
            sup = m;
            argmax = i as u64 + 1;
        }
    }
    Ok((sup, argmax))
}

/// Direct evaluation of `F(n, n+y; α)` with the window clipped to `[1, x]`.
pub fn window_sum(
    table: &ArithTable,
    ctx: &PhaseContext,
    n: i64,
    y: u64,
    x: u64,
) -> Result<Complex64> {
    let lo = (n + 1).max(1);
    let hi = (n + y as i64).min(x as i64);
    if lo > hi {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let (lo, hi) = (lo as u64, hi as u64);
    table.ensure_covers(lo, hi)?;
    let mut acc = ComplexAcc::new();
    let mut st = ctx.stepper(lo as i64);
    for &v in table.slice(lo, hi) {
        if v == 0.0 {
            st.skip();
        } else {
            acc.add(st.next_unit() * v);
        }
    }
    Ok(acc.value())
}

/// `Σ e(αp)` over primes `p` in `(n, n+y] ∩ [1, x]`.
pub fn pi_window(
    table_primes: &ArithTable,
    ctx: &PhaseContext,
    n: i64,
    y: u64,
    x: u64,
) -> Result<Complex64> {
    if table_primes.kind() != FnKind::PrimeIndicator {
        return Err(Error::Precondition(format!(
            "pi_window needs a prime-indicator table, got {}",
            table_primes.kind()
        )));
    }
    if n < 0 || n as u64 > x {
        return Err(Error::Precondition(format!(
            "need 0 <= n <= x, got n = {n}"
        )));
    }
    window_sum(table_primes, ctx, n, y, x)
}
