use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Parameters of the oscillator model: the dimension `n`, the sampled
/// `λ` values with their quadrature weights, and the Fock truncation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelConfig {
    pub n: usize,
    pub lambdas: Vec<f64>,
    pub weights: Vec<f64>,
    /// Largest Fock level `|α|` kept in every slice.
    pub fock_max: usize,
    pub tol: f64,
}

/// `±2^k` for `k` in `lo..=hi`, negative values first.
pub fn dyadic_grid(lo: i32, hi: i32) -> Vec<f64> {
    let pos: Vec<f64> = (lo..=hi).map(|k| 2f64.powi(k)).collect();
    pos.iter().rev().map(|x| -x).chain(pos.iter().copied()).collect()
}

/// Trapezoid weights computed separately on each sign branch, in the order
/// of `lambdas`. A branch with a single point gets weight 1.
pub fn trapezoid_weights(lambdas: &[f64]) -> Vec<f64> {
    let mut w = vec![0.0; lambdas.len()];
    for positive in [false, true] {
        let mut idx: Vec<usize> = (0..lambdas.len()).filter(|&i| (lambdas[i] > 0.0) == positive).collect();
        idx.sort_by(|&a, &b| lambdas[a].abs().total_cmp(&lambdas[b].abs()));
        match idx.len() {
            0 => {}
            1 => w[idx[0]] = 1.0,
            len => {
                for (pos, &i) in idx.iter().enumerate() {
                    let left = if pos > 0 { lambdas[i].abs() - lambdas[idx[pos - 1]].abs() } else { 0.0 };
                    let right = if pos + 1 < len { lambdas[idx[pos + 1]].abs() - lambdas[i].abs() } else { 0.0 };
                    w[i] = 0.5 * (left + right);
                }
            }
        }
    }
    w
}

impl Default for ModelConfig {
    fn default() -> Self {
        Self::new(1, dyadic_grid(-2, 3), 8, 1e-10).expect("default configuration is valid")
    }
}

impl ModelConfig {
    /// Configuration with trapezoid weights.
    pub fn new(n: usize, lambdas: Vec<f64>, fock_max: usize, tol: f64) -> Result<Self> {
        let weights = trapezoid_weights(&lambdas);
        Self::with_weights(n, lambdas, weights, fock_max, tol)
    }

    pub fn with_weights(n: usize, lambdas: Vec<f64>, weights: Vec<f64>, fock_max: usize, tol: f64) -> Result<Self> {
        let cfg = Self { n, lambdas, weights, fock_max, tol };
        cfg.validate()?;
        Ok(cfg)
    }

    /// All violations, joined into one error.
    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        if self.n == 0 || self.n > crate::exterior::MAX_N {
            problems.push(format!("n = {} outside 1..={}", self.n, crate::exterior::MAX_N));
        }
        if self.lambdas.is_empty() {
            problems.push("empty lambda grid".to_string());
        }
        if self.lambdas.iter().any(|&l| l == 0.0 || !l.is_finite()) {
            problems.push("lambda grid must contain finite nonzero values only".to_string());
        }
        let mut sorted = self.lambdas.clone();
        sorted.sort_by(f64::total_cmp);
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            problems.push("lambda grid has repeated values".to_string());
        }
        if self.weights.len() != self.lambdas.len() {
            problems.push(format!("{} weights for {} lambda values", self.weights.len(), self.lambdas.len()));
        } else if self.weights.iter().any(|&w| !(w > 0.0 && w.is_finite())) {
            problems.push("quadrature weights must be positive".to_string());
        }
        if self.fock_max < 4 {
            problems.push(format!("fock_max = {} (need M >= 4)", self.fock_max));
        }
        if !(self.tol > 0.0) {
            problems.push(format!("tol = {} must be positive", self.tol));
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(problems.join("; ")))
        }
    }
}
