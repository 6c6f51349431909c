use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::acc::{ComplexAcc, RealAcc};
use super::phase::PhaseContext;
use crate::arith::{ArithTable, FnKind};
use crate::dioph::AlphaSpec;
use crate::error::{Error, Result};

/// Steps between full recomputations of the sliding window.
pub const DEFAULT_RESYNC: u64 = 1 << 16;

/// `S = (1/x) Σ_{-y<n<=x} |F(n, n+y; α)|^2` with windows clipped to `[1, x]`.
#[derive(Debug, Clone, Serialize)]
pub struct WindowAverage {
    pub x: u64,
    pub y: u64,
    #[serde(serialize_with = "alpha_str")]
    pub alpha: AlphaSpec,
    pub kind: FnKind,
    /// The average `S`.
    pub s: f64,
    /// `Σ |F(n, n+y; α)|^2`, i.e. `x S`.
    pub sum_sq: f64,
    /// `max_n |F(n, n+y; α)|`.
    pub max_window: f64,
    /// Number of windows, `x + y`.
    pub n_count: u64,
}

fn alpha_str<S: serde::Serializer>(a: &AlphaSpec, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(a)
}

/// Sliding-window evaluation of the L² window average.
///
/// The range `-y < n <= x` is cut into chunks of `resync` windows. Each
/// chunk computes its first window directly and then slides with
/// `F(n+1, n+1+y) = F(n, n+y) - f(n+1) e(α(n+1)) + f(n+1+y) e(α(n+1+y))`.
/// Chunk partials are merged in index order, so the result depends on
/// `resync` but not on the number of threads.
pub fn window_l2_average(
    table: &ArithTable,
    ctx: &PhaseContext,
    x: u64,
    y: u64,
    resync: u64,
) -> Result<WindowAverage> {
    if y == 0 || resync == 0 {
        return Err(Error::Precondition("y and resync must be positive".into()));
    }
    if y > x {
        return Err(Error::YExceedsX { y, x });
    }
    table.ensure_covers(1, x)?;
    let first = 1 - y as i64;
    let last = x as i64;
    let starts: Vec<i64> = (first..=last).step_by(resync as usize).collect();
    let parts: Vec<(RealAcc, f64)> = starts
        .par_iter()
        .map(|&n0| {
            let n1 = (n0 + resync as i64 - 1).min(last);
            chunk(table, ctx, x, y, n0, n1)
        })
        .collect();
    let mut total = RealAcc::new();
    let mut max_window = 0.0f64;
    for (acc, m) in &parts {
        total.merge(acc);
        max_window = max_window.max(*m);
    }
    let sum_sq = total.value();
    Ok(WindowAverage {
        x,
        y,
        alpha: ctx.alpha().clone(),
        kind: table.kind(),
        s: sum_sq / x as f64,
        sum_sq,
        max_window,
        n_count: x + y,
    })
}

fn chunk(
    table: &ArithTable,
    ctx: &PhaseContext,
    x: u64,
    y: u64,
    n0: i64,
    n1: i64,
) -> (RealAcc, f64) {
    let mut sq = RealAcc::new();
    let mut max = 0.0f64;
    slide(table, ctx, x, y, n0, n1, |_, z| {
        sq.add(z.norm_sqr());
        max = max.max(z.norm());
    });
    (sq, max)
}

/// Calls `visit(n, F(n, n+y; α))` for `-y < n <= x` in increasing order,
/// recomputing the window from scratch every `resync` steps.
pub fn visit_windows(
    table: &ArithTable,
    ctx: &PhaseContext,
    x: u64,
    y: u64,
    resync: u64,
    mut visit: impl FnMut(i64, Complex64),
) -> Result<()> {
    if y == 0 || resync == 0 {
        return Err(Error::Precondition("y and resync must be positive".into()));
    }
    table.ensure_covers(1, x)?;
    let last = x as i64;
    let mut n0 = 1 - y as i64;
    while n0 <= last {
        let n1 = (n0 + resync as i64 - 1).min(last);
        slide(table, ctx, x, y, n0, n1, &mut visit);
        n0 = n1 + 1;
    }
    Ok(())
}

fn slide(
    table: &ArithTable,
    ctx: &PhaseContext,
    x: u64,
    y: u64,
    n0: i64,
    n1: i64,
    mut visit: impl FnMut(i64, Complex64),
) {
    let xi = x as i64;
    let yi = y as i64;
    let f = |m: i64| if m >= 1 && m <= xi { table.at(m) } else { 0.0 };

    let mut w = ComplexAcc::new();
    let mut st = ctx.stepper(n0 + 1);
    for m in n0 + 1..=n0 + yi {
        let v = f(m);
        if v == 0.0 {
            st.skip();
        } else {
            w.add(st.next_unit() * v);
        }
    }

    let mut leave = ctx.stepper(n0 + 1);
    let mut enter = ctx.stepper(n0 + 1 + yi);
    for n in n0..=n1 {
        visit(n, w.value());
        if n == n1 {
            break;
        }
        let out = f(n + 1);
        if out == 0.0 {
            leave.skip();
        } else {
            w.sub(leave.next_unit() * out);
        }
        let inn = f(n + 1 + yi);
        if inn == 0.0 {
            enter.skip();
        } else {
            w.add(enter.next_unit() * inn);
        }
    }
}
