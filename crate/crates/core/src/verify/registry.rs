//! Checks addressable by name, each with desk-scale defaults that can be
//! overridden through string parameters.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::arith::{sieve_table, ArithTable, FnKind};
use crate::dioph::{parse_ratio, realize_alpha, AlphaSource, AlphaSpec, Fraction};
use crate::error::{Error, Result};
use crate::expsum::{PhaseContext, DEFAULT_RESYNC};

/// Seed and `key=value` overrides for a check run.
#[derive(Debug, Clone, Default)]
pub struct CheckParams {
    pub seed: u64,
    pub values: BTreeMap<String, String>,
}

impl CheckParams {
    pub fn new(seed: u64) -> Self {
        CheckParams {
            seed,
            values: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.values.insert(key.to_string(), value.to_string());
        self
    }

    /// Parses `key=value`.
    pub fn set(&mut self, assignment: &str) -> Result<()> {
        let (k, v) = assignment
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("expected key=value, got {assignment:?}")))?;
        self.values
            .insert(k.trim().to_string(), v.trim().to_string());
        Ok(())
    }

    fn get<T: FromStr>(&self, key: &str, default: T) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        match self.values.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|e| Error::Config(format!("parameter {key}={v:?}: {e}"))),
        }
    }

    pub fn u64(&self, key: &str, default: u64) -> Result<u64> {
        self.get(key, default)
    }

    pub fn f64(&self, key: &str, default: f64) -> Result<f64> {
        self.get(key, default)
    }

    pub fn kind(&self, default: FnKind) -> Result<FnKind> {
        self.get("kind", default)
    }

    pub fn alpha_source(&self, default: AlphaSource) -> Result<AlphaSource> {
        self.get("alpha", default)
    }

    pub fn ratio(&self, key: &str) -> Result<Option<BigRational>> {
        self.values
            .get(key)
            .map(|v| parse_ratio(v).map_err(|e| Error::Config(format!("parameter {key}: {e}"))))
            .transpose()
    }

    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

pub trait Check: Send + Sync {
    fn name(&self) -> &'static str;
    fn summary(&self) -> &'static str;
    fn run(&self, params: &CheckParams) -> Result<Vec<CheckReport>>;
}

/// α realized with denominator at least `x²`.
fn alpha_for(p: &CheckParams, default: AlphaSource, x: u64) -> Result<AlphaSpec> {
    realize_alpha(p.alpha_source(default)?, x.saturating_mul(x))
}

fn random_fraction(rng: &mut impl Rng, q_max: u64) -> Fraction {
    let q = rng.gen_range(2..=q_max);
    loop {
        let a = rng.gen_range(1..q) as i64;
        if let Ok(f) = Fraction::new(a, q) {
            return f;
        }
    }
}

fn farey_points(order: u64) -> Vec<BigRational> {
    (1..=order)
        .flat_map(|q| {
            (0..q)
                .filter(move |a| a.gcd(&q) == 1)
                .map(move |a| BigRational::new(BigInt::from(a), BigInt::from(q)))
        })
        .collect()
}

struct LargeSieve;
impl Check for LargeSieve {
    fn name(&self) -> &'static str {
        "large-sieve"
    }
    fn summary(&self) -> &'static str {
        "Σ_β |F(β)|² <= (N + 1/δ) Σ |f|² over Farey points (coeffs=random|<kind>)"
    }
    fn run(&self, p: &CheckParams) -> Result<Vec<CheckReport>> {
        let n = p.u64("n", 1024)?;
        let order = p.u64("farey", 10)?;
        let delta = p.f64("delta", 1.0 / (order * order) as f64)?;
        let points = farey_points(order);
        let coeffs = p.values.get("coeffs").map_or("random", String::as_str);
        let report = if coeffs == "random" {
            let mut rng = p.rng();
            let f: Vec<f64> = (0..n)
                .map(|_| if rng.gen::<bool>() { 1.0 } else { -1.0 })
                .collect();
            check_large_sieve(&f, 0, &points, delta)?.param("coeffs", "random")
        } else {
            let kind: FnKind = coeffs.parse()?;
            check_large_sieve_table(&sieve_table(kind, 1, n)?, &points, delta)?
        };
        Ok(vec![report.param("farey_order", order)])
    }
}

struct WindowTransform;
impl Check for WindowTransform {
    fn name(&self) -> &'static str {
        "window-transform"
    }
    fn summary(&self) -> &'static str {
        "Σ_{-y<n<x} F(n,n+y;α) e(βn) = F(x;α+β) E_y(-β)"
    }
    fn run(&self, p: &CheckParams) -> Result<Vec<CheckReport>> {
        let x = p.u64("x", 10_000)?;
        let y = p.u64("y", 50)?;
        let table = sieve_table(p.kind(FnKind::VonMangoldt)?, 1, x)?;
        let alpha = alpha_for(p, AlphaSource::Sqrt(2), x)?;
        let beta = match p.ratio("beta")? {
            Some(b) => b,
            None => random_fraction(&mut p.rng(), 1000).to_ratio(),
        };
        Ok(vec![check_window_transform(
            &table,
            &PhaseContext::new(&alpha),
            x,
            y,
            &beta,
        )?])
    }
}

struct InitialChain;
impl Check for InitialChain {
    fn name(&self) -> &'static str {
        "initial-chain"
    }
    fn summary(&self) -> &'static str {
        "L >= M >= A for the window average, large-sieve side and major-arc side"
    }
    fn run(&self, p: &CheckParams) -> Result<Vec<CheckReport>> {
        let x = p.u64("x", 100_000)?;
        let y = p.u64("y", 21)?;
        let q = p.u64("Q", 300)?;
        let table = sieve_table(p.kind(FnKind::VonMangoldt)?, 1, x)?;
        let alpha = alpha_for(p, AlphaSource::GoldenRatio, x)?;
        let resync = p.u64("resync", DEFAULT_RESYNC)?;
        Ok(vec![check_initial_chain(
            &table,
            &PhaseContext::new(&alpha),
            x,
            y,
            q,
            resync,
        )?])
    }
}

struct CoprimeCount;
impl Check for CoprimeCount {
    fn name(&self) -> &'static str {
        "coprime-count"
    }
    fn summary(&self) -> &'static str {
        "#{a : (a,q)=1, |α - a/q| <= 1/(6y)} = φ(q)/(3y) + O(2^ω(q))"
    }
    fn run(&self, p: &CheckParams) -> Result<Vec<CheckReport>> {
        let q = p.u64("q", 210)?;
        let y = p.u64("y", 10)?;
        let alpha = alpha_for(p, AlphaSource::Sqrt(2), q.max(y))?;
        Ok(vec![check_coprime_count(q, y, &alpha)?])
    }
}

struct GoalG;
impl Check for GoalG {
    fn name(&self) -> &'static str {
        "goal-g"
    }
    fn summary(&self) -> &'static str {
        "Σ_{Q^(1-ε)<q<=Q} μ²(q)/φ(q) against ε log Q"
    }
    fn run(&self, p: &CheckParams) -> Result<Vec<CheckReport>> {
        Ok(vec![check_goal_g(
            p.u64("Q", 1000)?,
            p.f64("epsilon", 0.5)?,
        )?])
    }
}

struct BvAverage;
impl Check for BvAverage {
    fn name(&self) -> &'static str {
        "bv-average"
    }
    fn summary(&self) -> &'static str {
        "Σ_{q<=Q} max_a |ψ(x;a/q) - μ(q)/φ(q) x| (data only)"
    }
    fn run(&self, p: &CheckParams) -> Result<Vec<CheckReport>> {
        Ok(vec![bv_average(p.u64("x", 100_000)?, p.u64("Q", 40)?)?])
    }
}

struct GrhDecomposition;
impl Check for GrhDecomposition {
    fn name(&self) -> &'static str {
        "grh-decomposition"
    }
    fn summary(&self) -> &'static str {
        "ψ(x;a/q) = φ(q)^-1 Σ_χ χ(a) G(χ̄) ψ(x,χ) + exact correction"
    }
    fn run(&self, p: &CheckParams) -> Result<Vec<CheckReport>> {
        let x = p.u64("x", 100_000)?;
        let q = p.u64("q", 105)?;
        let a = p.get("a", 2i64)?;
        let table = sieve_table(p.kind(FnKind::VonMangoldt)?, 1, x)?;
        Ok(vec![check_grh_decomposition(&table, q, a, x)?])
    }
}

struct TauRational;
impl Check for TauRational {
    fn name(&self) -> &'static str {
        "tau-rational"
    }
    fn summary(&self) -> &'static str {
        "|Σ τ(n) e(an/q) - (x/q)(log(x/q²) + 2γ - 1)| / (√x (1 + log q)) for q <= q_max"
    }
    fn run(&self, p: &CheckParams) -> Result<Vec<CheckReport>> {
        let x = p.u64("x", 1_000_000)?;
        let q_max = p.u64("q_max", 100)?.min(x.sqrt());
        let tau = sieve_table(FnKind::Divisor, 1, x)?;
        let grid: Vec<u64> = (1..=q_max).collect();
        check_tau_rational(&tau, x, &grid, p.seed)
    }
}

struct Hyperbola;
impl Check for Hyperbola {
    fn name(&self) -> &'static str {
        "hyperbola"
    }
    fn summary(&self) -> &'static str {
        "Σ τ(n) e(an/q) = 2T + E by the hyperbola method"
    }
    fn run(&self, p: &CheckParams) -> Result<Vec<CheckReport>> {
        let x = p.u64("x", 10_000)?;
        let frac = Fraction::new(p.get("a", 1i64)?, p.u64("q", 3)?)?;
        Ok(vec![check_hyperbola(x, frac)?])
    }
}

struct SupLowerBound;
impl Check for SupLowerBound {
    fn name(&self) -> &'static str {
        "sup-lower-bound"
    }
    fn summary(&self) -> &'static str {
        "window moduli <= 2 sup |F(n;α)| and sup >= √S/2"
    }
    fn run(&self, p: &CheckParams) -> Result<Vec<CheckReport>> {
        let x = p.u64("x", 100_000)?;
        let y = p.u64("y", 46)?;
        let table = sieve_table(p.kind(FnKind::VonMangoldt)?, 1, x)?;
        let alpha = alpha_for(p, AlphaSource::GoldenRatio, x)?;
        let resync = p.u64("resync", DEFAULT_RESYNC)?;
        Ok(vec![check_sup_lower_bound(
            &table,
            &PhaseContext::new(&alpha),
            x,
            y,
            resync,
        )?])
    }
}

struct PiPsiWindow;
impl Check for PiPsiWindow {
    fn name(&self) -> &'static str {
        "pi-psi-window"
    }
    fn summary(&self) -> &'static str {
        "max_n |Λ-window - log n · π-window| / (log n)² over an evenly spaced grid of n >= y²"
    }
    fn run(&self, p: &CheckParams) -> Result<Vec<CheckReport>> {
        let x = p.u64("x", 1_000_000)?;
        let y = p.u64("y", 100)?;
        let points = p.u64("points", 100)?.max(1);
        let lo = y * y;
        if lo > x {
            return Err(Error::Config(format!("y^2 = {lo} exceeds x = {x}")));
        }
        let grid: Vec<u64> = (0..points).map(|i| lo + (x - lo) * i / points).collect();
        let lambda: ArithTable = sieve_table(FnKind::VonMangoldt, 1, x)?;
        let primes = sieve_table(FnKind::PrimeIndicator, 1, x)?;
        let alpha = alpha_for(p, AlphaSource::Sqrt(2), x)?;
        Ok(vec![check_pi_psi_window(
            &lambda,
            &primes,
            &PhaseContext::new(&alpha),
            x,
            y,
            &grid,
        )?])
    }
}

/// All registered checks, in a fixed order.
pub fn registry() -> Vec<Box<dyn Check>> {
    vec![
        Box::new(LargeSieve),
        Box::new(WindowTransform),
        Box::new(InitialChain),
        Box::new(CoprimeCount),
        Box::new(GoalG),
        Box::new(BvAverage),
        Box::new(GrhDecomposition),
        Box::new(TauRational),
        Box::new(Hyperbola),
        Box::new(SupLowerBound),
        Box::new(PiPsiWindow),
    ]
}

pub fn find_check(name: &str) -> Result<Box<dyn Check>> {
    registry()
        .into_iter()
        .find(|c| c.name() == name)
        .ok_or_else(|| Error::Unknown {
            kind: "check",
            name: name.to_string(),
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_are_unique() {
        let mut names: Vec<_> = registry().iter().map(|c| c.name()).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), registry().len());
        assert!(find_check("nope").is_err());
    }

    #[test]
    fn cheap_defaults_pass() {
        for name in [
            "large-sieve",
            "window-transform",
            "coprime-count",
            "goal-g",
            "hyperbola",
        ] {
            for r in find_check(name).unwrap().run(&CheckParams::new(7)).unwrap() {
                assert!(r.passed, "{name}: {r:?}");
            }
        }
    }

    #[test]
    fn overrides() {
        let mut p = CheckParams::new(1);
        p.set("x=100").unwrap();
        assert_eq!(p.u64("x", 5).unwrap(), 100);
        assert!(p.set("novalue").is_err());
        let p = CheckParams::new(1).with("y", "abc");
        assert!(matches!(p.u64("y", 1), Err(Error::Config(_))));
    }
}
