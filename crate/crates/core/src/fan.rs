//! Closed-form symbols on the Heisenberg fan `ξ = (n + 2m)|λ|`: the 3×3
//! matrix `d₁(λ, ξ)` acting on `(u, v, h)`, its eigenvalues, unit
//! eigenvectors and spectral projections, and the Szegő ray indicators.

use nalgebra::{Matrix3, Vector3};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{C64, I, ZERO};
use crate::multiplier::MultiplierSpec;

/// Radicands in `[-RADICAND_SLACK, 0)` are rounding noise and clamp to 0.
pub const RADICAND_SLACK: f64 = 1e-12;

pub(crate) fn sqrt_nonneg(x: f64, what: &str) -> Result<f64> {
    if x < -RADICAND_SLACK || x.is_nan() {
        return Err(Error::Domain(format!("negative radicand {x:e} in {what}")));
    }
    Ok(x.max(0.0).sqrt())
}

/// `q_δ^ε = a + εn/2 + δλ` at any `(λ, ξ)`, evaluated without cancellation.
pub fn q_value(n: usize, lambda: f64, xi: f64, eps: i8, delta: i8) -> f64 {
    let nf = n as f64;
    let a = (xi + lambda * lambda + 0.25 * nf * nf).sqrt();
    let c = f64::from(eps) * 0.5 * nf + f64::from(delta) * lambda;
    if c >= 0.0 {
        a + c
    } else {
        // (a² - c²)/(a - c), with a² - c² = ξ - εδnλ
        (xi - f64::from(eps * delta) * nf * lambda) / (a - c)
    }
}

/// A point of the fan on the ray `ℓ_m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FanPoint {
    pub lambda: f64,
    pub m: usize,
    pub xi: f64,
    pub n: usize,
}

impl FanPoint {
    pub fn new(n: usize, lambda: f64, m: usize) -> Result<Self> {
        if lambda == 0.0 || !lambda.is_finite() {
            return Err(Error::Domain(format!("fan point needs finite nonzero lambda, got {lambda}")));
        }
        if n == 0 {
            return Err(Error::Config("n must be positive".to_string()));
        }
        Ok(Self { lambda, m, xi: lambda.abs() * (n + 2 * m) as f64, n })
    }

    fn nf(&self) -> f64 {
        self.n as f64
    }

    /// `ξ + λ²`, the symbol of `Δ₀`.
    pub fn delta0(&self) -> f64 {
        self.xi + self.lambda * self.lambda
    }

    /// `a = √(ξ + λ² + n²/4)`.
    pub fn a(&self) -> f64 {
        (self.delta0() + 0.25 * self.nf() * self.nf()).sqrt()
    }

    /// `q_δ^ε = a + εn/2 + δλ`.
    pub fn q(&self, eps: i8, delta: i8) -> f64 {
        q_value(self.n, self.lambda, self.xi, eps, delta)
    }

    /// `a - n/2 = (ξ + λ²)/(a + n/2)`.
    pub fn a_minus_half_n(&self) -> f64 {
        self.delta0() / (self.a() + 0.5 * self.nf())
    }

    /// `½(ξ - nλ)`, the symbol of `□` on functions.
    pub fn box_symbol(&self) -> f64 {
        0.5 * (self.xi - self.nf() * self.lambda)
    }

    /// `½(ξ + nλ)`, the symbol of `□̄` on functions.
    pub fn box_bar_symbol(&self) -> f64 {
        0.5 * (self.xi + self.nf() * self.lambda)
    }
}

/// All `(λ, m)` with `λ` from `lambdas` and `m ≤ m_max`, ordered by `λ`
/// then `m`.
pub fn fan_grid(n: usize, lambdas: &[f64], m_max: usize) -> Result<Vec<FanPoint>> {
    if lambdas.is_empty() {
        return Err(Error::Domain("empty lambda range".to_string()));
    }
    let mut out = Vec::with_capacity(lambdas.len() * (m_max + 1));
    for &l in lambdas {
        for m in 0..=m_max {
            out.push(FanPoint::new(n, l, m)?);
        }
    }
    Ok(out)
}

/// The matrix `d₁(λ, ξ)` on `(u, v, h)`.
pub fn d1_at(pt: &FanPoint) -> Result<Matrix3<C64>> {
    let s_minus = sqrt_nonneg(pt.box_symbol(), "½(ξ - nλ)")?;
    let s_plus = sqrt_nonneg(pt.box_bar_symbol(), "½(ξ + nλ)")?;
    let d = pt.delta0();
    let l = pt.lambda;
    Ok(Matrix3::new(
        C64::from(d - l),
        ZERO,
        -I * s_minus,
        ZERO,
        C64::from(d + l),
        I * s_plus,
        I * s_minus,
        -I * s_plus,
        C64::from(d + pt.nf()),
    ))
}

/// The four quantities `q_δ^ε`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QValues {
    /// `q_+^+` (ε = +, δ = +).
    pub pp: f64,
    /// `q_-^+` (ε = +, δ = -).
    pub pm: f64,
    /// `q_+^-` (ε = -, δ = +).
    pub mp: f64,
    /// `q_-^-` (ε = -, δ = -).
    pub mm: f64,
}

/// Eigenvalues, unit eigenvectors and projections of `d₁`, in the order
/// `0`, `+`, `-` (eigenvalues `ξ+λ²`, `ξ+λ²+μ₊`, `ξ+λ²+μ₋`).
#[derive(Debug, Clone, PartialEq)]
pub struct FanEigensystem {
    pub point: FanPoint,
    pub a: f64,
    pub q: QValues,
    pub eigenvalues: [f64; 3],
    pub vectors: [Vector3<C64>; 3],
    pub projections: [Matrix3<C64>; 3],
}

pub fn fan_eigensystem(pt: &FanPoint) -> Result<FanEigensystem> {
    let n = pt.nf();
    let a = pt.a();
    let q = QValues { pp: pt.q(1, 1), pm: pt.q(1, -1), mp: pt.q(-1, 1), mm: pt.q(-1, -1) };
    let d = pt.delta0();
    let a_minus = pt.a_minus_half_n();
    let eigenvalues = [d, d + 0.5 * n + a, d - d / (0.5 * n + a)];

    let r = |x: f64, what: &str| sqrt_nonneg(x, what);
    let norm0 = d.sqrt();
    let v0 = Vector3::new(
        C64::from(r(pt.box_symbol(), "½(ξ - nλ)")? / norm0),
        C64::from(r(pt.box_bar_symbol(), "½(ξ + nλ)")? / norm0),
        I * (pt.lambda / norm0),
    );
    let np = (2.0 * a * (a + 0.5 * n)).sqrt();
    let vp = Vector3::new(
        -I * (r(0.5 * q.pm * q.mm, "½q₋⁺q₋⁻")? / np),
        I * (r(0.5 * q.pp * q.mp, "½q₊⁺q₊⁻")? / np),
        C64::from(r(q.pp * q.pm, "q₊⁺q₋⁺")? / np),
    );
    let nm = (2.0 * a * a_minus).sqrt();
    let vm = Vector3::new(
        I * (r(0.5 * q.pp * q.mp, "½q₊⁺q₊⁻")? / nm),
        -I * (r(0.5 * q.pm * q.mm, "½q₋⁺q₋⁻")? / nm),
        C64::from(r(q.mp * q.mm, "q₊⁻q₋⁻")? / nm),
    );
    let vectors = [v0, vp, vm];
    let projections = vectors.map(|v| v * v.adjoint());
    Ok(FanEigensystem { point: *pt, a, q, eigenvalues, vectors, projections })
}

/// `Σ_• m(eig_•) p_•`.
pub fn synth_matrix_multiplier(m: &MultiplierSpec, pt: &FanPoint) -> Result<Matrix3<C64>> {
    let es = fan_eigensystem(pt)?;
    let mut out = Matrix3::zeros();
    for (eig, p) in es.eigenvalues.iter().zip(&es.projections) {
        out += p * m.eval(*eig)?;
    }
    Ok(out)
}

/// Cauchy–Szegő projections as fan multipliers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RayKind {
    /// Projection onto `ker ∂̄_b`: the ray `ξ = -nλ`, `λ < 0`.
    C,
    /// Projection onto `ker ∂_b`: the ray `ξ = nλ`, `λ > 0`.
    CBar,
}

pub fn ray_projection_symbol(kind: RayKind, pt: &FanPoint) -> u8 {
    let on = match kind {
        RayKind::C => pt.m == 0 && pt.lambda < 0.0,
        RayKind::CBar => pt.m == 0 && pt.lambda > 0.0,
    };
    u8::from(on)
}

/// Bounded fan symbols whose suprema are audited.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FanSymbol {
    /// `ξ^r / (ξ + λ² - αλ)^r`.
    Mu1 { alpha: f64, r: f64 },
    /// `λ^{2r} / (ξ + λ² - αλ)^r`.
    Mu2 { alpha: f64, r: f64 },
    /// `ξ^r / (ξ - nλ)^r`, off the `C̄` ray.
    SzegoBar { r: f64 },
    /// `ξ^r / (ξ + nλ)^r`, off the `C` ray.
    Szego { r: f64 },
}

impl FanSymbol {
    /// Value at `pt`; `None` where the symbol is not defined (the excluded
    /// ray).
    pub fn eval(&self, pt: &FanPoint) -> Option<f64> {
        let (xi, l, n) = (pt.xi, pt.lambda, pt.nf());
        match *self {
            FanSymbol::Mu1 { alpha, r } => Some((xi / (xi + l * l - alpha * l)).powf(r)),
            FanSymbol::Mu2 { alpha, r } => Some((l * l).powf(r) / (xi + l * l - alpha * l).powf(r)),
            FanSymbol::SzegoBar { r } => (ray_projection_symbol(RayKind::CBar, pt) == 0).then(|| (xi / (xi - n * l)).powf(r)),
            FanSymbol::Szego { r } => (ray_projection_symbol(RayKind::C, pt) == 0).then(|| (xi / (xi + n * l)).powf(r)),
        }
    }
}

/// Largest `|symbol|` over the points where it is defined.
pub fn symbol_sup_audit(symbol: FanSymbol, points: &[FanPoint]) -> Result<f64> {
    if points.is_empty() {
        return Err(Error::Precondition("empty region".to_string()));
    }
    if let FanSymbol::Mu1 { alpha, .. } | FanSymbol::Mu2 { alpha, .. } = symbol {
        if points.iter().any(|p| alpha.abs() >= p.nf()) {
            return Err(Error::Precondition(format!("|alpha| = {} must be below n", alpha.abs())));
        }
    }
    Ok(points.iter().filter_map(|p| symbol.eval(p)).map(f64::abs).fold(0.0, f64::max))
}

/// Residuals of the closed forms at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FanResiduals {
    /// `max_• ‖d₁v_• - eig_• v_•‖`.
    pub eigen: f64,
    /// `‖p₀ + p₊ + p₋ - I‖` (max entry).
    pub resolution: f64,
    /// Worst of `‖p² - p‖`, `‖p* - p‖`.
    pub projector: f64,
    /// Worst relative error among the seven `q` identities.
    pub q_identities: f64,
}

fn max_entry<const R: usize, const C: usize>(m: &nalgebra::SMatrix<C64, R, C>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Relative residuals `|lhs - rhs| / max(1, |rhs|)` of the `q` identities.
pub fn q_identity_residuals(pt: &FanPoint) -> [f64; 7] {
    let (a, l, xi, n) = (pt.a(), pt.lambda, pt.xi, pt.nf());
    let q = |e, d| pt.q(e, d);
    let rel = |lhs: f64, rhs: f64| (lhs - rhs).abs() / rhs.abs().max(1.0);
    [
        rel(q(1, 1) * q(-1, -1), xi - n * l),
        rel(q(1, -1) * q(-1, 1), xi + n * l),
        rel(q(1, 1) + q(-1, -1), 2.0 * a).max(rel(q(1, -1) + q(-1, 1), 2.0 * a)),
        rel(q(1, 1) * q(-1, 1), (a + l).powi(2) - 0.25 * n * n),
        rel(q(1, -1) * q(-1, -1), (a - l).powi(2) - 0.25 * n * n),
        rel(q(1, 1) * q(1, -1), (a + 0.5 * n).powi(2) - l * l),
        rel(q(-1, 1) * q(-1, -1), (a - 0.5 * n).powi(2) - l * l),
    ]
}

pub fn fan_residuals(pt: &FanPoint) -> Result<FanResiduals> {
    let d1 = d1_at(pt)?;
    let es = fan_eigensystem(pt)?;
    let eigen = es
        .vectors
        .iter()
        .zip(es.eigenvalues)
        .map(|(v, e)| (d1 * v - v * C64::from(e)).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .fold(0.0, f64::max);
    let sum = es.projections[0] + es.projections[1] + es.projections[2];
    let resolution = max_entry(&(sum - Matrix3::identity()));
    let projector = es.projections.iter().map(|p| max_entry(&(p * p - p)).max(max_entry(&(p.adjoint() - p)))).fold(0.0, f64::max);
    let q_identities = q_identity_residuals(pt).into_iter().fold(0.0, f64::max);
    Ok(FanResiduals { eigen, resolution, projector, q_identities })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{hermitian_eigen, ONE};
    use nalgebra::DMatrix;

    fn close(a: C64, b: C64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn grid_examples() {
        assert_eq!(FanPoint::new(1, 1.0, 0).unwrap().xi, 1.0);
        assert_eq!(FanPoint::new(2, -0.5, 3).unwrap().xi, 4.0);
        assert_eq!(fan_grid(1, &[-1.0, 1.0], 0).unwrap().len(), 2);
        assert!(fan_grid(1, &[], 3).is_err());
        assert!(FanPoint::new(1, 0.0, 0).is_err());
    }

    #[test]
    fn d1_examples() {
        let d = d1_at(&FanPoint::new(1, 1.0, 0).unwrap()).unwrap();
        let expect = Matrix3::new(ONE, ZERO, ZERO, ZERO, C64::from(3.0), I, ZERO, -I, C64::from(3.0));
        assert!(max_entry(&(d - expect)) < 1e-15);
        let d = d1_at(&FanPoint::new(1, -1.0, 0).unwrap()).unwrap();
        assert_eq!(d[(0, 0)], C64::from(3.0));
        let pt = FanPoint::new(2, 0.3, 4).unwrap();
        let tr = (d1_at(&pt).unwrap() - Matrix3::identity() * C64::from(pt.delta0())).trace();
        assert!(close(tr, C64::from(2.0)));
    }

    #[test]
    fn hand_checked_point() {
        let es = fan_eigensystem(&FanPoint::new(1, 1.0, 0).unwrap()).unwrap();
        assert_eq!(es.eigenvalues, [2.0, 4.0, 1.0]);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let v0 = Vector3::new(ZERO, C64::from(h), I * h);
        let vp = Vector3::new(ZERO, I * h, C64::from(h));
        let vm = Vector3::new(I, ZERO, ZERO);
        for (got, want) in es.vectors.iter().zip([v0, vp, vm]) {
            assert!((got - want).iter().all(|z| z.norm() < 1e-12), "{got:?} vs {want:?}");
        }
        assert_eq!((es.q.pp, es.q.pm, es.q.mp, es.q.mm), (3.0, 1.0, 2.0, 0.0));
    }

    #[test]
    fn closed_forms_match_dense_eigensolver() {
        let pt = FanPoint::new(1, -1.0, 1).unwrap();
        assert_eq!(pt.xi, 3.0);
        let es = fan_eigensystem(&pt).unwrap();
        let d1 = d1_at(&pt).unwrap();
        let dense = DMatrix::from_fn(3, 3, |i, j| d1[(i, j)]);
        let eig = hermitian_eigen(&dense);
        let mut ours = es.eigenvalues.to_vec();
        ours.sort_by(f64::total_cmp);
        for (x, y) in ours.iter().zip(&eig.values) {
            assert!((x - y).abs() < 1e-12);
        }
        // projections agree with rank-one projectors from the dense vectors
        for (k, e) in eig.values.iter().enumerate() {
            let idx = es.eigenvalues.iter().position(|x| (x - e).abs() < 1e-9).unwrap();
            let v = eig.vectors.column(k);
            let p = v * v.adjoint();
            let ours = &es.projections[idx];
            for i in 0..3 {
                for j in 0..3 {
                    assert!((p[(i, j)] - ours[(i, j)]).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn cbar_ray_special_values() {
        for n in 1..=3 {
            for &l in &[0.1, 1.0, 7.5] {
                let pt = FanPoint::new(n, l, 0).unwrap();
                let es = fan_eigensystem(&pt).unwrap();
                assert_eq!(es.q.mm, 0.0);
                assert!((es.vectors[2] - Vector3::new(I, ZERO, ZERO)).norm() < 1e-12);
                let nf = n as f64;
                let vp = Vector3::new(ZERO, I * (l / (l + nf)).sqrt(), C64::from((nf / (l + nf)).sqrt()));
                assert!((es.vectors[1] - vp).norm() < 1e-12);
                let d1 = d1_at(&pt).unwrap();
                assert_eq!(d1[(0, 2)], ZERO);
                assert_eq!(d1[(0, 0)].re, pt.delta0() - l);
            }
        }
    }

    #[test]
    fn c_ray_special_values() {
        let pt = FanPoint::new(2, -0.7, 0).unwrap();
        let es = fan_eigensystem(&pt).unwrap();
        assert!((es.vectors[2] - Vector3::new(ZERO, -I, ZERO)).norm() < 1e-12);
    }

    #[test]
    fn ray_indicators() {
        let p = |l, m| FanPoint::new(1, l, m).unwrap();
        assert_eq!(ray_projection_symbol(RayKind::C, &p(-1.0, 0)), 1);
        assert_eq!(ray_projection_symbol(RayKind::C, &p(-1.0, 1)), 0);
        assert_eq!(ray_projection_symbol(RayKind::CBar, &p(2.0, 0)), 1);
        assert_eq!(ray_projection_symbol(RayKind::CBar, &p(-2.0, 0)), 0);
    }

    #[test]
    fn symbol_sups() {
        let lambdas: Vec<f64> = (-8..=8).filter(|&k| k != 0).map(|k| k as f64 * 0.5).collect();
        let pts = fan_grid(1, &lambdas, 30).unwrap();
        let s = symbol_sup_audit(FanSymbol::Mu1 { alpha: 0.0, r: 1.0 }, &pts).unwrap();
        assert!(s <= 1.0 && s > 0.9);
        let s = symbol_sup_audit(FanSymbol::SzegoBar { r: 1.0 }, &pts).unwrap();
        assert!((s - 1.5).abs() < 1e-12);
        let s = symbol_sup_audit(FanSymbol::Mu2 { alpha: 0.5, r: 2.0 }, &pts).unwrap();
        assert!(s.is_finite() && s <= 4.0);
        assert!(matches!(symbol_sup_audit(FanSymbol::Mu1 { alpha: 1.0, r: 1.0 }, &pts), Err(Error::Precondition(_))));
    }
}
