//! Executable versions of the inequalities and identities behind the lower
//! bounds. Every check returns a [`CheckReport`]; the [`registry`] exposes
//! them by name with desk-scale default parameters.

mod chain;
mod counts;
mod identities;
pub mod registry;

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use chain::{
    check_initial_chain, check_large_sieve, check_large_sieve_table, check_pi_psi_window,
    check_sup_lower_bound, initial_chain_quantities, ChainQuantities,
};
pub use counts::{
    bv_average, bv_average_table, check_coprime_count, check_goal_g, check_tau_rational,
    squarefree_phi_sum,
};
pub use identities::{
    check_grh_decomposition, check_hyperbola, check_window_transform, hyperbola_terms,
};
pub use registry::{find_check, registry, Check, CheckParams};

/// Relative tolerance for checks that encode exact identities.
pub const IDENTITY_TOL: f64 = 1e-6;
/// Relative slack allowed on inequalities that are theorems.
pub const THEOREM_SLACK: f64 = 1e-6;
/// Relative tolerance of the hyperbola identity.
pub const HYPERBOLA_TOL: f64 = 1e-8;
pub const COPRIME_C_MAX: f64 = 4.0;
pub const GOAL_G_FLOOR: f64 = 0.5;
pub const TAU_CEILING: f64 = 10.0;
pub const PI_PSI_CEILING: f64 = 3.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check_name: String,
    pub parameters: BTreeMap<String, serde_json::Value>,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub passed: bool,
    pub tolerance_used: f64,
}

impl CheckReport {
    pub fn new(name: &str, lhs: f64, rhs: f64, passed: bool, tolerance: f64) -> Self {
        CheckReport {
            check_name: name.to_string(),
            parameters: BTreeMap::new(),
            lhs,
            rhs,
            ratio: ratio(lhs, rhs),
            passed,
            tolerance_used: tolerance,
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<serde_json::Value>) -> Self {
        self.parameters.insert(key.to_string(), value.into());
        self
    }

    /// Adds a real value; non-finite values become `null`.
    pub fn param_f64(self, key: &str, value: f64) -> Self {
        let v = serde_json::Number::from_f64(value).map_or(serde_json::Value::Null, Into::into);
        self.param(key, v)
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("reports serialize")
    }
}

/// `lhs/rhs`, with `0/0 = 1`.
pub(crate) fn ratio(lhs: f64, rhs: f64) -> f64 {
    if rhs != 0.0 {
        lhs / rhs
    } else if lhs == 0.0 {
        1.0
    } else {
        f64::INFINITY
    }
}

/// `|a - b|` measured against `max(|a|, |b|, mass)`, where `mass` is the
/// natural absolute scale of the computation (e.g. `Σ |f(n)|`).
pub(crate) fn rel_diff(a: Complex64, b: Complex64, mass: f64) -> f64 {
    let scale = a.norm().max(b.norm()).max(mass).max(f64::MIN_POSITIVE);
    (a - b).norm() / scale
}

pub(crate) fn complex_json(z: Complex64) -> serde_json::Value {
    serde_json::json!([z.re, z.im])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let r = CheckReport::new("demo", 1.0, 2.0, true, 1e-6)
            .param("x", 10)
            .param_f64("nan", f64::NAN);
        let line = r.to_json_line();
        assert!(!line.contains('\n'));
        let back: CheckReport = serde_json::from_str(&line).unwrap();
        assert_eq!(back.ratio, 0.5);
        assert_eq!(back.parameters["nan"], serde_json::Value::Null);
    }

    #[test]
    fn ratios() {
        assert_eq!(ratio(0.0, 0.0), 1.0);
        assert_eq!(ratio(1.0, 0.0), f64::INFINITY);
        let z = Complex64::new(1.0, 0.0);
        assert_eq!(rel_diff(z, z, 0.0), 0.0);
        assert_eq!(
            rel_diff(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), 0.0),
            0.0
        );
    }
}
