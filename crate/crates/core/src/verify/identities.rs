use num_complex::Complex64;
use num_integer::{Integer, Roots};
use num_rational::BigRational;

use super::{complex_json, rel_diff, CheckReport, HYPERBOLA_TOL, IDENTITY_TOL};
use crate::arith::{sieve_table, ArithTable, FnKind};
use crate::characters::{psi_chi_all, CharacterTable};
use crate::dioph::{AlphaSpec, Fraction};
use crate::error::{Error, Result};
use crate::expsum::{
    expsum_at_rational, expsum_full, geometric_kernel_exact, twiddles, visit_windows, ComplexAcc,
    PhaseContext, DEFAULT_RESYNC,
};

pub const GRH_Q_CAP: u64 = 10_000;

/// `Σ_{-y<n<x} F(n, n+y; α) e(βn) = F(x; α+β) E_y(-β)`.
pub fn check_window_transform(
    table: &ArithTable,
    ctx: &PhaseContext,
    x: u64,
    y: u64,
    beta: &BigRational,
) -> Result<CheckReport> {
    let beta_ctx = PhaseContext::new(&AlphaSpec::exact(beta.clone()));
    let mut twist = beta_ctx.stepper(1 - y as i64);
    let mut lhs = ComplexAcc::new();
    visit_windows(table, ctx, x, y, DEFAULT_RESYNC, |n, w| {
        let e = twist.next_unit();
        if n < x as i64 {
            lhs.add(w * e);
        }
    })?;
    let lhs = lhs.value();
    let shifted = PhaseContext::new(&ctx.alpha().offset(beta));
    let rhs = expsum_full(table, &shifted, x)? * geometric_kernel_exact(y, &-beta);
    let mass = y as f64 * table.slice(1, x).iter().map(|v| v.abs()).sum::<f64>();
    let err = rel_diff(lhs, rhs, mass);
    Ok(CheckReport::new(
        "window-transform",
        lhs.norm(),
        rhs.norm(),
        err <= IDENTITY_TOL,
        IDENTITY_TOL,
    )
    .param("kind", table.kind().name())
    .param("alpha", ctx.alpha().to_string())
    .param("beta", beta.to_string())
    .param("x", x)
    .param("y", y)
    .param("lhs_complex", complex_json(lhs))
    .param("rhs_complex", complex_json(rhs))
    .param_f64("relative_error", err))
}

/// `T = Σ_{m<=√x} Σ_{m<n<=x/m} e(amn/q)` and `E = Σ_{m<=√x} e(am²/q)`.
pub fn hyperbola_terms(x: u64, frac: Fraction) -> (Complex64, Complex64) {
    let q = frac.q();
    let a = frac.residue();
    let tw = twiddles(q);
    let r = x.sqrt();
    let mut t = ComplexAcc::new();
    let mut e = ComplexAcc::new();
    for m in 1..=r {
        let step = (a as u128 * m as u128 % q as u128) as u64;
        e.add(tw[(step as u128 * m as u128 % q as u128) as usize]);
        let mut k = (step as u128 * (m + 1) as u128 % q as u128) as u64;
        for _ in m + 1..=x / m {
            t.add(tw[k as usize]);
            k += step;
            if k >= q {
                k -= q;
            }
        }
    }
    (t.value(), e.value())
}

/// `Σ_{n<=x} τ(n) e(an/q) = 2T + E` with both sides computed independently.
pub fn check_hyperbola(x: u64, frac: Fraction) -> Result<CheckReport> {
    let q = frac.q();
    if q.saturating_mul(q) > x {
        return Err(Error::QExceedsSqrtX { q, x });
    }
    let tau = sieve_table(FnKind::Divisor, 1, x)?;
    let lhs = expsum_at_rational(&tau, frac, x)?;
    let (t, e) = hyperbola_terms(x, frac);
    let rhs = t * 2.0 + e;
    let mass: f64 = tau.values().iter().sum();
    let err = rel_diff(lhs, rhs, mass);
    Ok(CheckReport::new(
        "hyperbola",
        lhs.norm(),
        rhs.norm(),
        err <= HYPERBOLA_TOL,
        HYPERBOLA_TOL,
    )
    .param("x", x)
    .param("fraction", frac.to_string())
    .param("lhs_complex", complex_json(lhs))
    .param("T", complex_json(t))
    .param("E", complex_json(e))
    .param_f64("relative_error", err))
}

/// `F(x; a/q) = (1/φ(q)) Σ_χ χ(a) G(χ̄) ψ(x, χ) + Corr`, where `Corr` collects
/// the terms with `(n, q) > 1` exactly.
pub fn check_grh_decomposition(table: &ArithTable, q: u64, a: i64, x: u64) -> Result<CheckReport> {
    if q > GRH_Q_CAP {
        return Err(Error::QTooLarge { q, cap: GRH_Q_CAP });
    }
    let frac = Fraction::new(a, q).map_err(|_| Error::NotCoprime { a, q })?;
    let lhs = expsum_at_rational(table, frac, x)?;
    let tab = CharacterTable::new(q)?;
    let psi = psi_chi_all(table, &tab, x)?;
    let mut main = ComplexAcc::new();
    for (idx, p) in psi.iter().enumerate() {
        main.add(tab.chi(idx, a) * tab.gauss_sum(tab.conj_index(idx)) * p);
    }
    let main = main.value() / tab.len() as f64;
    let tw = twiddles(q);
    let mut corr = ComplexAcc::new();
    for (n, v) in table.nonzero(1, x) {
        if q > 1 && n.gcd(&q) > 1 {
            let k = (frac.residue() as u128 * n as u128 % q as u128) as usize;
            corr.add(tw[k] * v);
        }
    }
    let corr = corr.value();
    let rhs = main + corr;
    let mass: f64 = table.slice(1, x).iter().map(|v| v.abs()).sum();
    let err = rel_diff(lhs, rhs, mass);
    Ok(CheckReport::new(
        "grh-decomposition",
        lhs.norm(),
        rhs.norm(),
        err <= IDENTITY_TOL,
        IDENTITY_TOL,
    )
    .param("kind", table.kind().name())
    .param("q", q)
    .param("a", a)
    .param("x", x)
    .param("lhs_complex", complex_json(lhs))
    .param("character_side", complex_json(main))
    .param("correction", complex_json(corr))
    .param_f64(
        "max_abs_psi_chi_nonprincipal",
        psi.iter().skip(1).map(|z| z.norm()).fold(0.0, f64::max),
    )
    .param_f64("relative_error", err))
}
