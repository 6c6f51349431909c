//! Scaling sweeps driven by a TOML configuration, written as CSV.
//!
//! ```toml
//! alpha = "golden"
//! fn_kind = "von-mangoldt"
//! x_grid = [10000, 100000, 1000000]
//! y_rule = { power_of_x = 0.28 }
//! q_rule = { fixed = 10 }
//! out_path = "lambda.csv"
//! ```

mod runs;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::arith::FnKind;
use crate::dioph::{parse_ratio, realize_alpha, AlphaSource};
use crate::error::{Error, Result};
use crate::expsum::DEFAULT_RESYNC;

pub use runs::{
    run_scaling_lambda, run_scaling_tau, run_sup_growth, run_vinogradov_envelope, theorem_y,
};

pub const CSV_HEADER: [&str; 9] = [
    "x",
    "y",
    "Q",
    "S",
    "normalizer",
    "ratio",
    "sup_prefix",
    "R",
    "wall_time_seconds",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum YRule {
    /// `y = floor(x^θ)`.
    PowerOfX(f64),
    /// `y` from a convergent window with `ε' s² <= y <= s²/12`; holds `ε'`.
    FromConvergent(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QRule {
    PowerOfX(f64),
    Fixed(u64),
}

fn default_q_rule() -> QRule {
    QRule::PowerOfX(0.4)
}

fn default_resync() -> u64 {
    DEFAULT_RESYNC
}

fn default_out() -> PathBuf {
    PathBuf::from("results.csv")
}

fn default_epsilon() -> f64 {
    0.05
}

fn default_c() -> f64 {
    10.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub alpha: AlphaSource,
    pub fn_kind: FnKind,
    pub x_grid: Vec<u64>,
    pub y_rule: Option<YRule>,
    #[serde(default = "default_q_rule")]
    pub q_rule: QRule,
    #[serde(default = "default_resync")]
    pub resync: u64,
    #[serde(default)]
    pub threads: Option<usize>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_out")]
    pub out_path: PathBuf,
    /// The ε in exponents such as `1/3 - ε` and `1 + ε`.
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    /// `C` in `Y = x (log log x / (C log x))²`.
    #[serde(default = "default_c")]
    pub c_constant: f64,
    /// Smallest convergent denominator for convergent windows.
    #[serde(default)]
    pub s_min: Option<u64>,
}

impl ExperimentConfig {
    pub fn new(alpha: AlphaSource, fn_kind: FnKind, x_grid: Vec<u64>) -> Self {
        ExperimentConfig {
            alpha,
            fn_kind,
            x_grid,
            y_rule: None,
            q_rule: default_q_rule(),
            resync: DEFAULT_RESYNC,
            threads: None,
            seed: 0,
            out_path: default_out(),
            epsilon: default_epsilon(),
            c_constant: default_c(),
            s_min: None,
        }
    }

    pub fn from_toml_str(s: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(s).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.x_grid.windows(2).any(|w| w[0] >= w[1]) {
            return bad("x_grid must be strictly increasing".into());
        }
        if self.x_grid.first().is_some_and(|&x| x < 2) {
            return bad("x_grid entries must be at least 2".into());
        }
        if let Err(e) = realize_alpha(self.alpha.clone(), 1) {
            return bad(format!("alpha: {e}"));
        }
        if self.resync == 0 {
            return bad("resync must be positive".into());
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0 / 6.0) {
            return bad(format!(
                "epsilon must lie in (0, 1/6), got {}",
                self.epsilon
            ));
        }
        if !(self.c_constant > 0.0 && self.c_constant.is_finite()) {
            return bad(format!(
                "c_constant must be positive, got {}",
                self.c_constant
            ));
        }
        if self.threads == Some(0) {
            return bad("threads must be positive".into());
        }
        match &self.y_rule {
            Some(YRule::PowerOfX(t)) if !(*t > 0.0 && *t < 1.0) => {
                return bad(format!("y_rule theta must lie in (0, 1), got {t}"))
            }
            Some(YRule::FromConvergent(_)) => {
                self.eps_prime()?;
            }
            _ => {}
        }
        if let QRule::PowerOfX(t) = self.q_rule {
            if !(t > 0.0 && t < 1.0) {
                return bad(format!("q_rule theta must lie in (0, 1), got {t}"));
            }
        }
        for &x in &self.x_grid {
            let q = self.q_for(x);
            if q == 0 || q.saturating_mul(q) > x {
                return bad(format!("Q = {q} violates 1 <= Q <= sqrt(x) at x = {x}"));
            }
            if let Some(YRule::PowerOfX(t)) = self.y_rule {
                let y = floor_pow(x, t);
                if y == 0 || y > x {
                    return bad(format!("y = {y} violates 1 <= y <= x at x = {x}"));
                }
            }
        }
        Ok(())
    }

    /// `ε'` of a convergent window rule.
    pub fn eps_prime(&self) -> Result<BigRational> {
        match &self.y_rule {
            Some(YRule::FromConvergent(e)) => {
                let r = parse_ratio(e).map_err(|err| Error::Config(format!("eps_prime: {err}")))?;
                let twelfth = BigRational::new(1.into(), 12.into());
                if r <= BigRational::from_integer(0.into()) || r > twelfth {
                    return Err(Error::Config(format!(
                        "eps_prime must lie in (0, 1/12], got {e}"
                    )));
                }
                Ok(r)
            }
            _ => Err(Error::Config("y_rule must be from_convergent".into())),
        }
    }

    pub fn q_for(&self, x: u64) -> u64 {
        match self.q_rule {
            QRule::Fixed(q) => q,
            QRule::PowerOfX(t) => floor_pow(x, t),
        }
    }
}

/// `floor(x^t)`, corrected for rounding in the floating-point power.
pub fn floor_pow(x: u64, t: f64) -> u64 {
    let target = t * (x as f64).ln();
    let mut y = (x as f64).powf(t).floor() as u64;
    while y > 0 && (y as f64).ln() > target + 1e-12 {
        y -= 1;
    }
    while ((y + 1) as f64).ln() <= target + 1e-12 {
        y += 1;
    }
    y
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRow {
    pub x: u64,
    pub y: u64,
    #[serde(rename = "Q")]
    pub q: u64,
    #[serde(rename = "S")]
    pub s: f64,
    pub normalizer: f64,
    pub ratio: f64,
    pub sup_prefix: f64,
    #[serde(rename = "R")]
    pub r: f64,
    pub wall_time_seconds: f64,
    /// Experiment-specific measurements written to the JSON-lines sidecar.
    #[serde(skip)]
    pub extras: BTreeMap<String, f64>,
}

/// Writes the rows as CSV with the fixed header, even when there are none.
pub fn write_csv(path: &Path, rows: &[ResultRow]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_path(path)?;
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Path of the JSON-lines sidecar holding per-row extras.
pub fn sidecar_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("jsonl")
}

pub fn write_sidecar(path: &Path, rows: &[ResultRow]) -> Result<()> {
    let mut out = String::new();
    for r in rows {
        let mut obj = serde_json::Map::new();
        obj.insert("x".into(), r.x.into());
        for (k, v) in &r.extras {
            let v = serde_json::Number::from_f64(*v).map_or(serde_json::Value::Null, Into::into);
            obj.insert(k.clone(), v);
        }
        out.push_str(&serde_json::to_string(&obj)?);
        out.push('\n');
    }
    fs::write(path, out)?;
    Ok(())
}

pub trait Experiment: Send + Sync {
    fn name(&self) -> &'static str;
    fn summary(&self) -> &'static str;
    fn run(&self, cfg: &ExperimentConfig) -> Result<Vec<ResultRow>>;
}

macro_rules! experiment {
    ($ty:ident, $name:literal, $summary:literal, $f:path) => {
        struct $ty;
        impl Experiment for $ty {
            fn name(&self) -> &'static str {
                $name
            }
            fn summary(&self) -> &'static str {
                $summary
            }
            fn run(&self, cfg: &ExperimentConfig) -> Result<Vec<ResultRow>> {
                $f(cfg)
            }
        }
    };
}

experiment!(
    ScalingLambda,
    "scaling-lambda",
    "S / (y log x) for f = Λ, y = x^θ",
    run_scaling_lambda
);
experiment!(
    ScalingTau,
    "scaling-tau",
    "S / (y log²(x/y) log(Y/y)) for f = τ on convergent windows",
    run_scaling_tau
);
experiment!(
    SupGrowth,
    "sup-growth",
    "sup |ψ(n;α)| against x^(1/6-ε), and x^(5/18-ε) along convergents",
    run_sup_growth
);
experiment!(
    VinogradovEnvelope,
    "vinogradov-envelope",
    "|ψ(x;α)| / (x^(1+ε) R^(-1/2) + x^(4/5+ε))",
    run_vinogradov_envelope
);

pub fn registry() -> Vec<Box<dyn Experiment>> {
    vec![
        Box::new(ScalingLambda),
        Box::new(ScalingTau),
        Box::new(SupGrowth),
        Box::new(VinogradovEnvelope),
    ]
}

pub fn find_experiment(name: &str) -> Result<Box<dyn Experiment>> {
    registry()
        .into_iter()
        .find(|e| e.name() == name)
        .ok_or_else(|| Error::Unknown {
            kind: "experiment",
            name: name.to_string(),
        })
}

/// Runs an experiment (inside a pool of `cfg.threads` workers if set) and
/// writes the CSV, plus the sidecar when any row carries extras.
pub fn run_and_write(name: &str, cfg: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    let exp = find_experiment(name)?;
    cfg.validate()?;
    let rows = match cfg.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Config(e.to_string()))?
            .install(|| exp.run(cfg))?,
        None => exp.run(cfg)?,
    };
    write_csv(&cfg.out_path, &rows)?;
    if rows.iter().any(|r| !r.extras.is_empty()) {
        write_sidecar(&sidecar_path(&cfg.out_path), &rows)?;
    }
    Ok(rows)
}
