//! Scale-invariant derivative audits of the factors
//! `ν₀ = (q_δ^ε)^{1/2} a^{-1/2}`, `ν₊ = (q_δ^ε)^{1/2} (a + n/2)^{-1/2}`,
//! `ν₋ = (q_δ^-)^{1/2} (a - n/2)^{-1/2}` of the eigenvector symbols, away
//! from the Szegő rays.

use serde::Serialize;

use super::jet::{Jet, MAX_I, MAX_J};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum NuId {
    Nu0 { eps: i8, delta: i8 },
    NuPlus { eps: i8, delta: i8 },
    NuMinus { delta: i8 },
}

impl NuId {
    /// Every factor with every sign choice.
    pub fn all() -> Vec<NuId> {
        let mut out = Vec::new();
        for eps in [1, -1] {
            for delta in [1, -1] {
                out.push(NuId::Nu0 { eps, delta });
                out.push(NuId::NuPlus { eps, delta });
            }
        }
        out.push(NuId::NuMinus { delta: 1 });
        out.push(NuId::NuMinus { delta: -1 });
        out
    }

    pub fn label(&self) -> String {
        let s = |x: i8| if x > 0 { '+' } else { '-' };
        match *self {
            NuId::Nu0 { eps, delta } => format!("nu0(eps{},delta{})", s(eps), s(delta)),
            NuId::NuPlus { eps, delta } => format!("nu+(eps{},delta{})", s(eps), s(delta)),
            NuId::NuMinus { delta } => format!("nu-(delta{})", s(delta)),
        }
    }
}

/// `q_δ^ε` as a jet, with the cancellation-free form when `εn/2 + δλ < 0`.
fn q_jet(n: f64, eps: i8, delta: i8, l: Jet, x: Jet, a: Jet) -> Jet {
    let c = l * f64::from(delta) + f64::from(eps) * 0.5 * n;
    if c.value() >= 0.0 {
        a + c
    } else {
        (x - l * (f64::from(eps * delta) * n)) / (a - c)
    }
}

/// `ν` as a jet at `(λ, ξ)`.
pub fn nu_jet(id: NuId, n: usize, lambda: f64, xi: f64) -> Jet {
    let nf = n as f64;
    let l = Jet::lambda(lambda);
    let x = Jet::xi(xi);
    let d = x + l * l;
    let a = (d + 0.25 * nf * nf).sqrt();
    match id {
        NuId::Nu0 { eps, delta } => (q_jet(nf, eps, delta, l, x, a) / a).sqrt(),
        NuId::NuPlus { eps, delta } => (q_jet(nf, eps, delta, l, x, a) / (a + 0.5 * nf)).sqrt(),
        NuId::NuMinus { delta } => {
            let a_minus = d / (a + 0.5 * nf);
            (q_jet(nf, -1, delta, l, x, a) / a_minus).sqrt()
        }
    }
}

/// `∂_λ ν₀ = ½(δξ + δn²/4 - εnλ/2) (q_δ^ε)^{-1/2} a^{-5/2}`.
pub fn d_lambda_nu0_closed(n: usize, eps: i8, delta: i8, lambda: f64, xi: f64) -> f64 {
    let nf = n as f64;
    let a = (xi + lambda * lambda + 0.25 * nf * nf).sqrt();
    let q = crate::fan::q_value(n, lambda, xi, eps, delta);
    let (d, e) = (f64::from(delta), f64::from(eps));
    0.5 * (d * xi + d * nf * nf / 4.0 - e * nf * lambda / 2.0) * q.powf(-0.5) * a.powf(-2.5)
}

/// Sampling of the region `ξ > c|λ|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NuGrid {
    /// Region factor `c`.
    pub c: f64,
    /// Range of `ξ`.
    pub xi_min: f64,
    pub xi_max: f64,
    /// Largest ratio `ξ/|λ|` sampled.
    pub ratio_max: f64,
    /// Points per decade along each log axis.
    pub per_decade: usize,
}

impl NuGrid {
    pub fn new(c: f64) -> Self {
        Self { c, xi_min: 1e-3, xi_max: 1e6, ratio_max: 1e6, per_decade: 8 }
    }

    pub fn refined(&self) -> Self {
        Self { per_decade: 2 * self.per_decade, ..*self }
    }

    fn log_points(lo: f64, hi: f64, per_decade: usize) -> Vec<f64> {
        let decades = (hi / lo).log10();
        let count = (decades * per_decade as f64).ceil().max(1.0) as usize;
        (0..=count).map(|k| lo * 10f64.powf(decades * k as f64 / count as f64)).collect()
    }

    /// `(λ, ξ)` pairs with both signs of `λ`; the ratio axis starts just
    /// inside the open region.
    pub fn points(&self) -> Vec<(f64, f64)> {
        let xis = Self::log_points(self.xi_min, self.xi_max, self.per_decade);
        let ratios = Self::log_points(self.c * (1.0 + 1e-9), self.ratio_max, self.per_decade);
        let mut out = Vec::with_capacity(2 * xis.len() * ratios.len());
        for &x in &xis {
            for &t in &ratios {
                let l = x / t;
                out.push((l, x));
                out.push((-l, x));
            }
        }
        out
    }
}

/// `sup |∂_λ^i ∂_ξ^j ν| |λ|^i ξ^j` over the grid.
pub fn nu_estimate_audit(id: NuId, n: usize, i: usize, j: usize, grid: &NuGrid) -> Result<f64> {
    if i > MAX_I || j > MAX_J {
        return Err(Error::Unsupported(format!("derivative order ({i}, {j}) beyond ({MAX_I}, {MAX_J})")));
    }
    if grid.c <= n as f64 {
        return Err(Error::Precondition(format!("region factor c = {} must exceed n = {n}", grid.c)));
    }
    let mut sup = 0.0f64;
    for (l, x) in grid.points() {
        let v = nu_jet(id, n, l, x).derivative(i, j) * l.abs().powi(i as i32) * x.powi(j as i32);
        if !v.is_finite() {
            return Err(Error::Sampling(format!("{} not finite at ({l}, {x})", id.label())));
        }
        sup = sup.max(v.abs());
    }
    Ok(sup)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jets_match_the_closed_lambda_derivative() {
        for n in [1, 2] {
            for (eps, delta) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                for (l, x) in [(0.3, 5.0), (-2.0, 40.0), (1e-3, 1.0), (50.0, 1e4)] {
                    let jet = nu_jet(NuId::Nu0 { eps, delta }, n, l, x).derivative(1, 0);
                    let closed = d_lambda_nu0_closed(n, eps, delta, l, x);
                    assert!((jet - closed).abs() < 1e-12 * closed.abs().max(1e-3), "{jet} vs {closed}");
                }
            }
        }
    }

    #[test]
    fn jets_match_finite_differences() {
        let (l, x) = (0.8, 6.0);
        let f = |l: f64, x: f64| nu_jet(NuId::NuMinus { delta: 1 }, 2, l, x).value();
        let h = 1e-4;
        let fd = (f(l, x + h) - f(l, x - h)) / (2.0 * h);
        assert!((fd - nu_jet(NuId::NuMinus { delta: 1 }, 2, l, x).derivative(0, 1)).abs() < 1e-8);
        let fd = (f(l + h, x) - f(l - h, x)) / (2.0 * h);
        assert!((fd - nu_jet(NuId::NuMinus { delta: 1 }, 2, l, x).derivative(1, 0)).abs() < 1e-8);
    }

    #[test]
    fn nu0_envelope() {
        let s = nu_estimate_audit(NuId::Nu0 { eps: 1, delta: 1 }, 1, 0, 0, &NuGrid::new(2.0)).unwrap();
        assert!(s <= 3f64.sqrt());
    }

    #[test]
    fn region_must_avoid_the_rays() {
        assert!(nu_estimate_audit(NuId::Nu0 { eps: 1, delta: 1 }, 2, 0, 0, &NuGrid::new(2.0)).is_err());
    }
}
