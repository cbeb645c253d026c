//! Check batteries over the whole library. Each check reports the worst
//! error seen against its tolerance, labelled by suite, check id and the
//! name of the identity it exercises.

mod exterior;
mod norms;
mod operators;
mod spectral;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::dyadic_grid;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Exterior,
    Operators,
    #[serde(rename = "fan-eigen")]
    Fan,
    Decomposition,
    Multiplier,
    MhNorms,
}

impl Suite {
    pub const ALL: [Suite; 6] = [Suite::Exterior, Suite::Operators, Suite::Fan, Suite::Decomposition, Suite::Multiplier, Suite::MhNorms];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Exterior => "exterior",
            Suite::Operators => "operators",
            Suite::Fan => "fan-eigen",
            Suite::Decomposition => "decomposition",
            Suite::Multiplier => "multiplier",
            Suite::MhNorms => "mh-norms",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown suite '{s}' (expected one of: {})", Suite::ALL.map(Suite::name).join(", "))))
    }
}

/// Whether `max_error` must stay below the tolerance or reach it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Bound {
    AtMost,
    AtLeast,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub suite: Suite,
    pub check: String,
    /// Name of the identity or estimate being exercised.
    pub anchor: String,
    pub max_error: f64,
    pub tolerance: f64,
    pub bound: Bound,
    pub passed: bool,
}

impl Check {
    pub fn at_most(suite: Suite, check: &str, anchor: &str, max_error: f64, tolerance: f64) -> Self {
        let max_error = clean(max_error);
        Self {
            suite,
            check: check.to_string(),
            anchor: anchor.to_string(),
            max_error,
            tolerance,
            bound: Bound::AtMost,
            passed: max_error.is_finite() && max_error <= tolerance,
        }
    }

    pub fn at_least(suite: Suite, check: &str, anchor: &str, value: f64, threshold: f64) -> Self {
        let value = clean(value);
        Self {
            suite,
            check: check.to_string(),
            anchor: anchor.to_string(),
            max_error: value,
            tolerance: threshold,
            bound: Bound::AtLeast,
            passed: value.is_finite() && value >= threshold,
        }
    }
}

/// Parameters shared by all batteries.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyConfig {
    pub n_values: Vec<usize>,
    pub lambdas: Vec<f64>,
    pub fock_max: usize,
    /// Tolerance for the operator identities on the model.
    pub tol: f64,
    /// Largest `n` for the exterior-algebra battery.
    pub exterior_n_max: usize,
    pub fan_lambdas: Vec<f64>,
    pub fan_m_max: usize,
    /// Random inputs per configuration.
    pub random_inputs: usize,
    pub tau: f64,
    pub j_max: i32,
    pub resolution: usize,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            n_values: vec![1, 2],
            lambdas: dyadic_grid(-2, 3),
            fock_max: 8,
            tol: 1e-10,
            exterior_n_max: 4,
            fan_lambdas: dyadic_grid(-4, 4),
            fan_m_max: 32,
            random_inputs: 3,
            tau: 1.5,
            j_max: 8,
            resolution: 128,
            seed: 1,
        }
    }
}

impl VerifyConfig {
    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        if self.n_values.is_empty() || self.n_values.contains(&0) {
            problems.push("n values must be positive and non-empty".to_string());
        }
        if self.lambdas.is_empty() || self.lambdas.iter().any(|l| *l == 0.0 || !l.is_finite()) {
            problems.push("lambda grid must be non-empty, finite and avoid 0".to_string());
        }
        if self.fan_lambdas.is_empty() || self.fan_lambdas.iter().any(|l| *l == 0.0 || !l.is_finite()) {
            problems.push("fan lambda range must be non-empty, finite and avoid 0".to_string());
        }
        if self.fock_max < 4 {
            problems.push(format!("Fock truncation M must be at least 4, got {}", self.fock_max));
        }
        if !(self.tol > 0.0) {
            problems.push(format!("tolerance must be positive, got {}", self.tol));
        }
        if self.random_inputs == 0 {
            problems.push("need at least one random input".to_string());
        }
        if self.j_max < crate::mh::sloc::MIN_J {
            problems.push(format!("J must be at least {}, got {}", crate::mh::sloc::MIN_J, self.j_max));
        }
        if !(self.tau >= 0.0) {
            problems.push(format!("tau must be nonnegative, got {}", self.tau));
        }
        if self.resolution < crate::mh::sampled::MIN_SAMPLES {
            problems.push(format!("resolution must be at least {}", crate::mh::sampled::MIN_SAMPLES));
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(problems.join("; ")))
        }
    }
}

pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Result<Vec<Check>> {
    cfg.validate()?;
    let mut out = match suite {
        Suite::Exterior => exterior::run(cfg)?,
        Suite::Operators => operators::run(cfg)?,
        Suite::Fan => spectral::run_fan(cfg)?,
        Suite::Decomposition => spectral::run_decomposition(cfg)?,
        Suite::Multiplier => spectral::run_multiplier(cfg)?,
        Suite::MhNorms => norms::run(cfg)?,
    };
    out.sort_by(|a, b| a.check.cmp(&b.check));
    Ok(out)
}

/// Run several suites; the result is sorted by suite, then check id.
pub fn run_suites(suites: &[Suite], cfg: &VerifyConfig) -> Result<Vec<Check>> {
    use rayon::prelude::*;
    let mut sorted = suites.to_vec();
    sorted.sort();
    sorted.dedup();
    let parts = sorted.par_iter().map(|s| run_suite(*s, cfg)).collect::<Result<Vec<_>>>()?;
    Ok(parts.into_iter().flatten().collect())
}

pub use exterior::{lefschetz_checks, LefschetzSummary};
pub use norms::{imaginary_power_fit, jump_growth, nu_stability};
pub use operators::{hodge_block_matrix, operator_identity_errors};
pub use spectral::{
    coclosed_n1_error, decomposition_summary, fan_summary, hand_point_error, intertwining_errors, isometry_summary, multiplier_error,
    standard_multipliers, DecompositionSummary, FanSummary, IsometrySummary, MULTIPLIER_TOL,
};

/// Reports print `0` rather than `-0`.
fn clean(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x
    }
}

/// `‖a - b‖ / max(‖a‖, ‖b‖, scale)`.
pub(crate) fn relative(diff: f64, a: f64, b: f64, scale: f64) -> f64 {
    let d = a.max(b).max(scale);
    if d == 0.0 {
        diff
    } else {
        diff / d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn config_problems_are_aggregated() {
        let cfg = VerifyConfig { fock_max: 1, j_max: 2, ..VerifyConfig::default() };
        let msg = cfg.validate().unwrap_err().to_string();
        assert!(msg.contains("Fock") && msg.contains("J must"), "{msg}");
    }

    #[test]
    fn bounds() {
        assert!(Check::at_most(Suite::Fan, "x", "y", 1e-13, 1e-12).passed);
        assert!(!Check::at_most(Suite::Fan, "x", "y", f64::NAN, 1e-12).passed);
        assert!(Check::at_least(Suite::Fan, "x", "y", 3.0, 2.0).passed);
    }
}
