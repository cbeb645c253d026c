//! Extension of fan multipliers `m(ξ + λ² − αλ)` to smooth functions on the
//! half-plane `ξ > 0`, by cutting off to an angle around the fan.

use crate::error::{Error, Result};
use crate::linalg::{C64, ZERO};
use crate::multiplier::{smooth_step, MultiplierSpec};

/// `ψ(λ, ξ) = S((ξ/|λ| − (n − δ))/δ)`: homogeneous of degree 0, equal to 1 on
/// `ξ ≥ n|λ|` and vanishing on `ξ ≤ (n − δ)|λ|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleCutoff {
    delta: f64,
    n: usize,
}

impl AngleCutoff {
    pub fn new(delta: f64, n: usize) -> Result<Self> {
        if n == 0 || !(delta > 0.0 && delta < n as f64) {
            return Err(Error::Precondition(format!("angle cutoff needs 0 < delta < n, got delta={delta}, n={n}")));
        }
        Ok(Self { delta, n })
    }

    pub fn eval(&self, lambda: f64, xi: f64) -> f64 {
        if lambda == 0.0 {
            return if xi > 0.0 { 1.0 } else { 0.0 };
        }
        smooth_step((xi / lambda.abs() - (self.n as f64 - self.delta)) / self.delta)
    }
}

/// `μ₃(λ, ξ) = m(λ² + ξ − αλ) ψ(λ, ξ)`.
#[derive(Debug, Clone)]
pub struct FanMultiplier {
    pub m: MultiplierSpec,
    pub alpha: f64,
    pub cutoff: AngleCutoff,
}

impl FanMultiplier {
    pub fn eval(&self, lambda: f64, xi: f64) -> Result<C64> {
        let psi = self.cutoff.eval(lambda, xi);
        if psi == 0.0 {
            return Ok(ZERO);
        }
        Ok(self.m.eval(lambda * lambda + xi - self.alpha * lambda)? * psi)
    }
}

pub fn build_fan_multiplier(m: &MultiplierSpec, alpha: f64, delta: f64, n: usize) -> Result<FanMultiplier> {
    let nf = n as f64;
    if !(alpha.abs() < nf) {
        return Err(Error::Precondition(format!("need |alpha| < n, got alpha={alpha}, n={n}")));
    }
    if !(delta > 0.0 && delta < nf - alpha.abs()) {
        return Err(Error::Precondition(format!("need 0 < delta < n - |alpha|, got delta={delta}")));
    }
    Ok(FanMultiplier { m: m.clone(), alpha, cutoff: AngleCutoff::new(delta, n)? })
}
