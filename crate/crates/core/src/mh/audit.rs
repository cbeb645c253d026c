//! Norm-transform audits: `norm(after)/norm(before)` for the changes of
//! variables used to pass between multiplier classes, measured at two
//! resolutions. Only finiteness and stability (within 2×) are asserted.

use serde::Serialize;

use super::fan_ext::{build_fan_multiplier, AngleCutoff};
use super::sloc::{mh_sloc_norm, mixed_sloc_norm, sloc_norm_fn, Bump, MixedSlocParams, SlocParams};
use crate::error::{Error, Result};
use crate::linalg::{C64, ZERO};
use crate::multiplier::MultiplierSpec;

pub const STABILITY_LIMIT: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum TransformKind {
    /// `μ(λ, ξ) ↦ μ(λ², ξ)`.
    Square,
    /// `μ ↦ μ(λ, ξ − αλ)ψ`.
    Shear,
    /// `m ↦ m(· + a)`.
    Translate,
    /// `m ↦ m ∘ φ±`, `φ±(s) = s + n/2 ± √(s + n²/4)`.
    ComposePhi,
    /// Canonical bump against the plateau bump.
    BumpSwap,
    /// `μ(λ, ξ) = m(ξ)` measured in the mixed norm against `m` in `L²_{ρ+σ}`.
    Separable,
    /// `μ₃` in the mixed norm against `m` in `L²_{ρ+σ}`.
    FanExtension,
}

impl TransformKind {
    pub const ALL: [TransformKind; 7] = [
        TransformKind::Square,
        TransformKind::Shear,
        TransformKind::Translate,
        TransformKind::ComposePhi,
        TransformKind::BumpSwap,
        TransformKind::Separable,
        TransformKind::FanExtension,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TransformKind::Square => "square",
            TransformKind::Shear => "shear",
            TransformKind::Translate => "translate",
            TransformKind::ComposePhi => "compose_phi",
            TransformKind::BumpSwap => "bump_swap",
            TransformKind::Separable => "separable",
            TransformKind::FanExtension => "fan_extension",
        }
    }
}

/// One audit case. Which fields are read depends on `kind`.
#[derive(Debug, Clone)]
pub struct AuditCase {
    pub kind: TransformKind,
    pub m: MultiplierSpec,
    pub n: usize,
    /// `τ` for 1-D audits.
    pub tau: f64,
    pub rho: f64,
    pub sigma: f64,
    pub alpha: f64,
    pub delta: f64,
    /// Translation `a`.
    pub shift: f64,
    /// Sign of the root in `φ±`.
    pub plus: bool,
    /// Samples per axis at the coarse resolution (1-D audits use 4× this).
    pub resolution: usize,
}

impl AuditCase {
    pub fn new(kind: TransformKind, m: MultiplierSpec) -> Self {
        Self { kind, m, n: 1, tau: 1.5, rho: 1.0, sigma: 1.0, alpha: 0.5, delta: 0.25, shift: 1.0, plus: true, resolution: 24 }
    }

    pub fn label(&self) -> String {
        match self.kind {
            TransformKind::ComposePhi => format!("{}{}({})", self.kind.name(), if self.plus { "+" } else { "-" }, self.m.label()),
            _ => format!("{}({})", self.kind.name(), self.m.label()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditReport {
    pub kind: TransformKind,
    pub label: String,
    pub ratio_coarse: f64,
    pub ratio_fine: f64,
    /// `max/min` of the two ratios.
    pub stability: f64,
    pub finite: bool,
    pub stable: bool,
}

/// `φ±(s) = s + n/2 ± √(s + n²/4)`; the minus branch as `s²/(s + n/2 + √(s + n²/4))`.
pub fn phi_pm(n: usize, s: f64, plus: bool) -> f64 {
    let h = n as f64 / 2.0;
    let root = (s + h * h).sqrt();
    if plus {
        s + h + root
    } else {
        s * s / (s + h + root)
    }
}

fn abs_bump(b: &MultiplierSpec, x: f64) -> Result<C64> {
    if x == 0.0 {
        Ok(ZERO)
    } else {
        b.eval(x.abs())
    }
}

fn ratio_at(case: &AuditCase, resolution: usize) -> Result<f64> {
    let one_d = |tau: f64, bump: Bump| SlocParams { resolution: 4 * resolution, bump, ..SlocParams::new(tau) };
    let mixed = |both: bool| MixedSlocParams { resolution, both_signs: both, ..MixedSlocParams::new(case.rho, case.sigma) };
    let m = &case.m;
    match case.kind {
        TransformKind::Square => {
            let b = m;
            let before = mixed_sloc_norm(&|l, x| Ok(abs_bump(b, l)? * abs_bump(b, x)?), &mixed(true))?;
            let after = mixed_sloc_norm(&|l, x| Ok(abs_bump(b, l * l)? * abs_bump(b, x)?), &mixed(true))?;
            Ok(after.sup / before.sup)
        }
        TransformKind::Shear => {
            let psi = AngleCutoff::new(case.delta, case.n)?;
            if !(case.alpha.abs() < case.n as f64 - case.delta) {
                return Err(Error::Precondition(format!("shear leaves the half-plane: |alpha|={} >= n - delta", case.alpha.abs())));
            }
            let before = mixed_sloc_norm(&|_, x| m.eval(x), &mixed(true))?;
            let after = mixed_sloc_norm(
                &|l, x| {
                    let c = psi.eval(l, x);
                    if c == 0.0 {
                        Ok(ZERO)
                    } else {
                        Ok(m.eval(x - case.alpha * l)? * c)
                    }
                },
                &mixed(true),
            )?;
            Ok(after.sup / before.sup)
        }
        TransformKind::Translate => {
            let p = one_d(case.tau, Bump::Canonical);
            let before = mh_sloc_norm(m, &p)?;
            let after = sloc_norm_fn(&|s| m.eval(s + case.shift), &p)?;
            Ok(after.sup / before.sup)
        }
        TransformKind::ComposePhi => {
            let p = one_d(case.tau, Bump::Canonical);
            let before = mh_sloc_norm(m, &p)?;
            let after = sloc_norm_fn(&|s| m.eval(phi_pm(case.n, s, case.plus)), &p)?;
            Ok(after.sup / before.sup)
        }
        TransformKind::BumpSwap => {
            let before = mh_sloc_norm(m, &one_d(case.tau, Bump::Canonical))?;
            let after = mh_sloc_norm(m, &one_d(case.tau, Bump::Plateau))?;
            Ok(after.sup / before.sup)
        }
        TransformKind::Separable => {
            let before = mh_sloc_norm(m, &one_d(case.rho + case.sigma, Bump::Canonical))?;
            let after = mixed_sloc_norm(&|_, x| m.eval(x), &mixed(true))?;
            Ok(after.sup / before.sup)
        }
        TransformKind::FanExtension => {
            let mu = build_fan_multiplier(m, case.alpha, case.delta, case.n)?;
            let before = mh_sloc_norm(m, &one_d(case.rho + case.sigma, Bump::Canonical))?;
            let after = mixed_sloc_norm(&|l, x| mu.eval(l, x), &mixed(true))?;
            Ok(after.sup / before.sup)
        }
    }
}

pub fn norm_transform_audit(case: &AuditCase) -> Result<AuditReport> {
    let ratio_coarse = ratio_at(case, case.resolution)?;
    let ratio_fine = ratio_at(case, 2 * case.resolution)?;
    let finite = ratio_coarse.is_finite() && ratio_fine.is_finite() && ratio_coarse > 0.0 && ratio_fine > 0.0;
    let stability = if finite { ratio_coarse.max(ratio_fine) / ratio_coarse.min(ratio_fine) } else { f64::INFINITY };
    Ok(AuditReport {
        kind: case.kind,
        label: case.label(),
        ratio_coarse,
        ratio_fine,
        stability,
        finite,
        stable: finite && stability <= STABILITY_LIMIT,
    })
}

/// The built-in audit corpus.
pub fn builtin_corpus() -> Vec<AuditCase> {
    let heat = MultiplierSpec::heat(1.0).expect("valid heat parameter");
    let bump = MultiplierSpec::dyadic_bump(0);
    let riesz = MultiplierSpec::riesz_ratio(1.0).expect("valid Riesz parameter");
    let mut out = vec![
        AuditCase::new(TransformKind::Square, bump.clone()),
        AuditCase::new(TransformKind::Shear, heat.clone()),
        AuditCase::new(TransformKind::Translate, bump.clone()),
        AuditCase::new(TransformKind::Translate, heat.clone()),
        AuditCase::new(TransformKind::ComposePhi, heat.clone()),
        AuditCase { plus: false, ..AuditCase::new(TransformKind::ComposePhi, heat.clone()) },
        AuditCase::new(TransformKind::ComposePhi, riesz.clone()),
        AuditCase::new(TransformKind::BumpSwap, heat.clone()),
        AuditCase::new(TransformKind::BumpSwap, riesz),
        AuditCase::new(TransformKind::Separable, heat.clone()),
        AuditCase { rho: 1.5, sigma: 1.0, ..AuditCase::new(TransformKind::FanExtension, heat) },
    ];
    out.sort_by_key(|c| c.kind);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_branches() {
        for s in [1e-6, 0.3, 2.0, 1e4] {
            let (p, m) = (phi_pm(1, s, true), phi_pm(1, s, false));
            // φ₊φ₋ = s² and φ₊ + φ₋ = 2s + n
            assert!((p * m / (s * s) - 1.0).abs() < 1e-12);
            assert!(((p + m) / (2.0 * s + 1.0) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn translate_and_compose_examples() {
        let r = norm_transform_audit(&AuditCase::new(TransformKind::Translate, MultiplierSpec::dyadic_bump(0))).unwrap();
        assert!(r.stable, "{r:?}");
        let r = norm_transform_audit(&AuditCase::new(TransformKind::ComposePhi, MultiplierSpec::heat(1.0).unwrap())).unwrap();
        assert!(r.finite && r.stable, "{r:?}");
    }

    #[test]
    fn square_ratio_bounded() {
        let r = norm_transform_audit(&AuditCase::new(TransformKind::Square, MultiplierSpec::dyadic_bump(0))).unwrap();
        assert!(r.stable, "{r:?}");
        assert!(r.ratio_coarse > 0.25 && r.ratio_coarse < 4.0, "{r:?}");
    }

    #[test]
    fn shear_precondition() {
        let case = AuditCase { alpha: 0.9, ..AuditCase::new(TransformKind::Shear, MultiplierSpec::heat(1.0).unwrap()) };
        assert!(norm_transform_audit(&case).is_err());
    }
}
