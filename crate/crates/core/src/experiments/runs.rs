use std::collections::BTreeMap;
use std::time::Instant;

use num_traits::ToPrimitive;

use super::{floor_pow, ExperimentConfig, ResultRow, YRule};
use crate::arith::{sieve_table, ArithTable, FnKind};
use crate::dioph::{
    admissible_window, approx_quality, convergent_stream, realize_alpha, AlphaSpec,
};
use crate::error::{Error, Result};
use crate::expsum::{expsum_full, prefix_sups, window_l2_average, PhaseContext};

fn require_kind(cfg: &ExperimentConfig, kind: FnKind) -> Result<()> {
    if cfg.fn_kind != kind {
        return Err(Error::Config(format!(
            "fn_kind must be {kind}, got {}",
            cfg.fn_kind
        )));
    }
    Ok(())
}

fn grid_table(cfg: &ExperimentConfig) -> Result<Option<ArithTable>> {
    match cfg.x_grid.last() {
        Some(&x_max) => Ok(Some(sieve_table(cfg.fn_kind, 1, x_max)?)),
        None => Ok(None),
    }
}

/// α realized with denominator at least `x²`.
fn alpha_at(cfg: &ExperimentConfig, x: u64) -> Result<AlphaSpec> {
    realize_alpha(cfg.alpha.clone(), x.saturating_mul(x))
}

fn r_of(alpha: &AlphaSpec, x: u64) -> Result<f64> {
    Ok(approx_quality(alpha, x)?.r.to_f64().unwrap_or(f64::NAN))
}

struct Measured {
    s: f64,
    sup: f64,
    r: f64,
}

fn measure(table: &ArithTable, alpha: &AlphaSpec, x: u64, y: u64, resync: u64) -> Result<Measured> {
    let ctx = PhaseContext::new(alpha);
    let s = window_l2_average(table, &ctx, x, y, resync)?.s;
    let (sup, _) = prefix_sups(table, &ctx, x)?;
    Ok(Measured {
        s,
        sup,
        r: r_of(alpha, x)?,
    })
}

fn row(x: u64, y: u64, q: u64, m: &Measured, normalizer: f64, started: Instant) -> ResultRow {
    ResultRow {
        x,
        y,
        q,
        s: m.s,
        normalizer,
        ratio: m.s / normalizer,
        sup_prefix: m.sup,
        r: m.r,
        wall_time_seconds: started.elapsed().as_secs_f64(),
        extras: BTreeMap::new(),
    }
}

/// `S / (y log x)` with `y = floor(x^θ)`, `θ <= 1/3`, for `f = Λ`.
pub fn run_scaling_lambda(cfg: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    require_kind(cfg, FnKind::VonMangoldt)?;
    let theta = match cfg.y_rule {
        Some(YRule::PowerOfX(t)) if t <= 1.0 / 3.0 => t,
        None => 1.0 / 3.0 - cfg.epsilon,
        _ => {
            return Err(Error::Config(
                "scaling-lambda needs y_rule = { power_of_x = θ } with θ <= 1/3".into(),
            ))
        }
    };
    let Some(table) = grid_table(cfg)? else {
        return Ok(Vec::new());
    };
    let mut rows = Vec::new();
    for &x in &cfg.x_grid {
        let started = Instant::now();
        let y = floor_pow(x, theta);
        let alpha = alpha_at(cfg, x)?;
        let m = measure(&table, &alpha, x, y, cfg.resync)?;
        rows.push(row(
            x,
            y,
            cfg.q_for(x),
            &m,
            y as f64 * (x as f64).ln(),
            started,
        ));
        log::info!(
            "scaling-lambda x={x} y={y} ratio={}",
            rows.last().map_or(0.0, |r| r.ratio)
        );
    }
    Ok(rows)
}

/// `Y = x (log log x / (C log x))²`.
pub fn theorem_y(x: u64, c: f64) -> f64 {
    let l = (x as f64).ln();
    x as f64 * (l.ln() / (c * l)).powi(2)
}

/// `S / (y log²(x/y) log(Y/y))` for `f = τ` on convergent windows.
///
/// With `s_min` set, the first convergent `s >= s_min` is used; otherwise
/// the largest convergent whose window `y = floor(s²/12)` stays below `Y`.
/// Rows without an admissible window, or with `y > Y`, are skipped.
pub fn run_scaling_tau(cfg: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    require_kind(cfg, FnKind::Divisor)?;
    let eps = cfg.eps_prime()?;
    let Some(table) = grid_table(cfg)? else {
        return Ok(Vec::new());
    };
    let mut rows = Vec::new();
    for &x in &cfg.x_grid {
        let started = Instant::now();
        let big_y = theorem_y(x, cfg.c_constant);
        let alpha = alpha_at(cfg, x)?;
        let s_min = match cfg.s_min {
            Some(s) => s,
            None => {
                match largest_convergent_below(&alpha, big_y)? {
                    Some(s) => s,
                    None => {
                        log::warn!("scaling-tau: skipping x={x}: no convergent window fits below Y={big_y:.3}");
                        continue;
                    }
                }
            }
        };
        let w = match admissible_window(&alpha, &eps, s_min) {
            Ok(w) => w,
            Err(e) => {
                log::warn!("scaling-tau: skipping x={x}: {e}");
                continue;
            }
        };
        let y = w.y_hi;
        if y as f64 > big_y || y > x {
            log::warn!("scaling-tau: skipping x={x}: y={y} exceeds Y={big_y:.3}");
            continue;
        }
        let m = measure(&table, &alpha, x, y, cfg.resync)?;
        let (xf, yf) = (x as f64, y as f64);
        let normalizer = yf * (xf / yf).ln().powi(2) * (big_y / yf).ln();
        let mut r = row(x, y, cfg.q_for(x), &m, normalizer, started);
        r.extras.insert("s".into(), w.s as f64);
        r.extras.insert("Y".into(), big_y);
        rows.push(r);
    }
    Ok(rows)
}

fn largest_convergent_below(alpha: &AlphaSpec, big_y: f64) -> Result<Option<u64>> {
    let mut best = None;
    for c in convergent_stream(alpha.source())? {
        let Some(s) = c.q.to_u64() else { break };
        if ((s as u128 * s as u128) / 12) as f64 > big_y {
            break;
        }
        if s >= 12 {
            best = Some(s);
        }
    }
    Ok(best)
}

/// Growth of `sup_{n<=x} |ψ(n;α)|`. Rows carry the window average for
/// `y = floor(x^(1/3-ε))` in `S`; the extras hold `sup / x^(1/6-ε)` and,
/// for the last convergent point `x_s = ceil(y_s^(9/5+ε))` with
/// `y_s = floor(s²/12)` below `x`, `sup_{n<=x_s} / x_s^(5/18-ε)`.
pub fn run_sup_growth(cfg: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    require_kind(cfg, FnKind::VonMangoldt)?;
    let eps = cfg.epsilon;
    let theta = match cfg.y_rule {
        Some(YRule::PowerOfX(t)) => t,
        None => 1.0 / 3.0 - eps,
        _ => {
            return Err(Error::Config(
                "sup-growth needs y_rule = { power_of_x = θ } or none".into(),
            ))
        }
    };
    let Some(table) = grid_table(cfg)? else {
        return Ok(Vec::new());
    };
    let mut rows = Vec::new();
    for &x in &cfg.x_grid {
        let started = Instant::now();
        let y = floor_pow(x, theta);
        let alpha = alpha_at(cfg, x)?;
        let m = measure(&table, &alpha, x, y, cfg.resync)?;
        let mut r = row(x, y, cfg.q_for(x), &m, y as f64 * (x as f64).ln(), started);
        r.extras.insert(
            "sup_over_x_pow".into(),
            m.sup / (x as f64).powf(1.0 / 6.0 - eps),
        );
        if let Some((s, xs)) = convergent_point(&alpha, x, eps)? {
            let (sup_s, _) = prefix_sups(&table, &PhaseContext::new(&alpha), xs)?;
            r.extras.insert("conv_s".into(), s as f64);
            r.extras.insert("conv_x".into(), xs as f64);
            r.extras.insert("conv_sup".into(), sup_s);
            r.extras.insert(
                "conv_ratio".into(),
                sup_s / (xs as f64).powf(5.0 / 18.0 - eps),
            );
        }
        r.wall_time_seconds = started.elapsed().as_secs_f64();
        rows.push(r);
    }
    Ok(rows)
}

/// The last convergent `s` of α with `x_s = ceil(floor(s²/12)^(9/5+ε)) <= x`.
fn convergent_point(alpha: &AlphaSpec, x: u64, eps: f64) -> Result<Option<(u64, u64)>> {
    if alpha.is_rational() {
        return Ok(None);
    }
    let mut best = None;
    for c in convergent_stream(alpha.source())? {
        let Some(s) = c.q.to_u64() else { break };
        let ys = (s as u128 * s as u128 / 12) as f64;
        if ys < 1.0 {
            continue;
        }
        let xs = ys.powf(9.0 / 5.0 + eps).ceil();
        if xs > x as f64 {
            break;
        }
        best = Some((s, xs as u64));
    }
    Ok(best)
}

/// `|ψ(x;α)|` against `x^(1+ε) R(x,α)^(-1/2) + x^(4/5+ε)`. Rows carry
/// `S = |ψ(x;α)|` and `y = 0`.
pub fn run_vinogradov_envelope(cfg: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    require_kind(cfg, FnKind::VonMangoldt)?;
    let eps = cfg.epsilon;
    let Some(table) = grid_table(cfg)? else {
        return Ok(Vec::new());
    };
    let mut rows = Vec::new();
    for &x in &cfg.x_grid {
        let started = Instant::now();
        let alpha = alpha_at(cfg, x)?;
        let ctx = PhaseContext::new(&alpha);
        let psi = expsum_full(&table, &ctx, x)?.norm();
        let (sup, _) = prefix_sups(&table, &ctx, x)?;
        let r = r_of(&alpha, x)?;
        let xf = x as f64;
        let envelope = xf.powf(1.0 + eps) / r.sqrt() + xf.powf(0.8 + eps);
        let m = Measured { s: psi, sup, r };
        rows.push(row(x, 0, cfg.q_for(x), &m, envelope, started));
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dioph::AlphaSource;
    use crate::expsum::window_sum;

    #[test]
    fn lambda_row_matches_oracle() {
        let mut cfg =
            ExperimentConfig::new(AlphaSource::GoldenRatio, FnKind::VonMangoldt, vec![10_000]);
        cfg.y_rule = Some(YRule::PowerOfX(0.28));
        let rows = run_scaling_lambda(&cfg).unwrap();
        assert_eq!(rows.len(), 1);
        let r = &rows[0];
        assert_eq!(r.y, 13);
        let table = sieve_table(FnKind::VonMangoldt, 1, 10_000).unwrap();
        let ctx = PhaseContext::new(&alpha_at(&cfg, 10_000).unwrap());
        let direct: f64 = (1 - 13..=10_000i64)
            .map(|n| window_sum(&table, &ctx, n, 13, 10_000).unwrap().norm_sqr())
            .sum::<f64>()
            / 10_000.0;
        assert!((r.s - direct).abs() <= 1e-9 * direct);
        assert!((r.ratio - r.s / r.normalizer).abs() < 1e-15);
    }

    #[test]
    fn tau_with_s_min() {
        let mut cfg =
            ExperimentConfig::new(AlphaSource::GoldenRatio, FnKind::Divisor, vec![100_000]);
        cfg.y_rule = Some(YRule::FromConvergent("1/24".into()));
        cfg.s_min = Some(13);
        let rows = run_scaling_tau(&cfg).unwrap();
        assert_eq!((rows[0].y, rows[0].extras["s"]), (14, 13.0));
        assert!(rows[0].ratio > 0.0);
        // Y(10^5) is about 45, so s = 34 (y = 96) is rejected
        cfg.s_min = Some(34);
        assert!(run_scaling_tau(&cfg).unwrap().is_empty());
    }

    #[test]
    fn wrong_kind_is_a_config_error() {
        let cfg = ExperimentConfig::new(AlphaSource::GoldenRatio, FnKind::Divisor, vec![100]);
        assert!(matches!(run_scaling_lambda(&cfg), Err(Error::Config(_))));
        assert!(matches!(
            run_vinogradov_envelope(&cfg),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn rational_alpha_has_large_sup() {
        let cfg = ExperimentConfig::new(
            AlphaSource::Rational(crate::dioph::parse_ratio("1/3").unwrap()),
            FnKind::VonMangoldt,
            vec![10_000],
        );
        let rows = run_sup_growth(&cfg).unwrap();
        let golden = ExperimentConfig {
            alpha: AlphaSource::GoldenRatio,
            ..cfg
        };
        let g = run_sup_growth(&golden).unwrap();
        assert!(rows[0].sup_prefix > 10.0 * g[0].sup_prefix);
    }

    #[test]
    fn envelope_periodic() {
        let cfg = ExperimentConfig::new(
            AlphaSource::Rational(crate::dioph::parse_ratio("2/7").unwrap()),
            FnKind::VonMangoldt,
            vec![5000],
        );
        let shifted = ExperimentConfig {
            alpha: AlphaSource::Rational(crate::dioph::parse_ratio("9/7").unwrap()),
            ..cfg.clone()
        };
        let (a, b) = (
            run_vinogradov_envelope(&cfg).unwrap(),
            run_vinogradov_envelope(&shifted).unwrap(),
        );
        assert_eq!((a[0].s, a[0].ratio), (b[0].s, b[0].ratio));
    }
}
