//! Intertwiners and the five-way orthogonal splitting of 1-form fields:
//! exact forms `V₁ = ran R`, co-closed `(1,0)`/`(0,1)` forms `V₂±`, and the
//! two eigen-branches `V₃± = ran ΓS±` of the remainder.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exterior::BasisWord;
use crate::fan::{fan_eigensystem, FanEigensystem, FanPoint};
use crate::linalg::{C64, I, ONE, ZERO};
use crate::model::{CrOp, FormField, Model, ScalarField};

/// Tolerance for the Szegő-ray coefficients of W-triples and `L²₀` inputs.
pub const RAY_TOL: f64 = 1e-10;

/// Per-slice, per-level table of diagonal symbol values.
pub(crate) type SymbolTable = Vec<Vec<C64>>;

pub(crate) fn symbol_table(model: &Model, symbol: impl Fn(f64, usize) -> Result<C64>) -> Result<SymbolTable> {
    model.lambdas().iter().map(|&l| (0..=model.fock_max()).map(|m| symbol(l, m)).collect()).collect()
}

pub(crate) fn apply_table(model: &Model, f: &ScalarField, table: &SymbolTable) -> ScalarField {
    let levels = model.fock().levels();
    ScalarField::from_fn(model, |s, _| f.slices[s].coeffs.iter().zip(levels).map(|(c, &m)| c * table[s][m]).collect())
}

pub(crate) fn apply_table_form(model: &Model, omega: &FormField, table: &SymbolTable) -> FormField {
    let levels = model.fock().levels();
    omega
        .map_slices(model, |s, _, sf| sf.iter().map(|(w, v)| (*w, v.iter().zip(levels).map(|(c, &m)| c * table[s][m]).collect())).collect())
}

fn fan_point(model: &Model, lambda: f64, m: usize) -> FanPoint {
    FanPoint::new(model.n(), lambda, m).expect("model grid excludes lambda = 0")
}

fn delta0(model: &Model, lambda: f64, m: usize) -> f64 {
    model.xi(lambda, m) + lambda * lambda
}

fn on_cbar_ray(lambda: f64, m: usize) -> bool {
    lambda > 0.0 && m == 0
}

fn on_c_ray(lambda: f64, m: usize) -> bool {
    lambda < 0.0 && m == 0
}

/// Largest coefficient of `f` on the selected ray slices.
fn ray_mass(model: &Model, f: &ScalarField, on_ray: fn(f64, usize) -> bool) -> f64 {
    let levels = model.fock().levels();
    f.slices
        .iter()
        .flat_map(|sl| sl.coeffs.iter().zip(levels).filter(move |(_, &m)| on_ray(sl.lambda, m)).map(|(c, _)| c.norm()))
        .fold(0.0, f64::max)
}

/// `Cf`, the projection onto the `C` ray.
pub fn szego_c(model: &Model, f: &ScalarField) -> ScalarField {
    f.map_diagonal(model, |l, m| if on_c_ray(l, m) { ONE } else { ZERO })
}

/// `C̄f`, the projection onto the `C̄` ray.
pub fn szego_cbar(model: &Model, f: &ScalarField) -> ScalarField {
    f.map_diagonal(model, |l, m| if on_cbar_ray(l, m) { ONE } else { ZERO })
}

/// `f - Cf - C̄f`.
pub fn project_l2_0(model: &Model, f: &ScalarField) -> ScalarField {
    f.map_diagonal(model, |l, m| if on_c_ray(l, m) || on_cbar_ray(l, m) { ZERO } else { ONE })
}

/// `Rf = dΔ₀^{-1/2}f`.
pub fn apply_r(model: &Model, f: &ScalarField) -> Result<FormField> {
    f.check(model)?;
    let g = f.map_diagonal(model, |l, m| C64::from(delta0(model, l, m).sqrt().recip()));
    model.apply_d(&model.zero_form(g), 0)
}

/// `R*ω = Δ₀^{-1/2}d*ω`.
pub fn apply_r_adjoint(model: &Model, omega: &FormField) -> Result<ScalarField> {
    model.expect_degree(omega, 1)?;
    let s = model.scalar_part(&model.apply_d_star(omega, 1)?);
    Ok(s.map_diagonal(model, |l, m| C64::from(delta0(model, l, m).sqrt().recip())))
}

/// Which of the two Riesz-type intertwiners.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Holomorphy {
    /// `𝓡 = ∂_b □^{-1/2}(I - C̄)`, landing in `(1,0)`-forms.
    Hol,
    /// `𝓡̄ = ∂̄_b □̄^{-1/2}(I - C)`, landing in `(0,1)`-forms.
    Antihol,
}

impl Holomorphy {
    /// `□^{-1/2}(I - C̄)` (resp. `□̄^{-1/2}(I - C)`) at `(λ, m)`.
    fn inv_sqrt_symbol(self, model: &Model, lambda: f64, m: usize) -> C64 {
        let n = model.n() as f64;
        let xi = model.xi(lambda, m);
        let (on_ray, b) = match self {
            Holomorphy::Hol => (on_cbar_ray(lambda, m), 0.5 * (xi - n * lambda)),
            Holomorphy::Antihol => (on_c_ray(lambda, m), 0.5 * (xi + n * lambda)),
        };
        if on_ray {
            ZERO
        } else {
            C64::from(b.sqrt().recip())
        }
    }

    fn bidegree(self) -> (usize, usize) {
        match self {
            Holomorphy::Hol => (1, 0),
            Holomorphy::Antihol => (0, 1),
        }
    }
}

pub fn apply_cal_r(model: &Model, kind: Holomorphy, u: &ScalarField) -> Result<FormField> {
    u.check(model)?;
    let g = u.map_diagonal(model, |l, m| kind.inv_sqrt_symbol(model, l, m));
    let op = match kind {
        Holomorphy::Hol => CrOp::DelB,
        Holomorphy::Antihol => CrOp::DelBarB,
    };
    model.apply_cr_op(op, &model.zero_form(g))
}

/// `𝓡*ω` (resp. `𝓡̄*ω`); only the matching type component of `ω` enters.
pub fn apply_cal_r_adjoint(model: &Model, kind: Holomorphy, omega: &FormField) -> Result<ScalarField> {
    model.expect_degree(omega, 1)?;
    let bideg = kind.bidegree();
    let part = omega.filter_words(|w| !w.has_theta() && w.bidegree() == bideg);
    let op = match kind {
        Holomorphy::Hol => CrOp::DelBStar,
        Holomorphy::Antihol => CrOp::DelBarBStar,
    };
    let s = model.scalar_part(&model.apply_cr_op(op, &part)?);
    Ok(s.map_diagonal(model, |l, m| kind.inv_sqrt_symbol(model, l, m)))
}

/// An element `(u, v, h)` of `W`: `C̄u = 0` and `Cv = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct WTriple {
    pub u: ScalarField,
    pub v: ScalarField,
    pub h: ScalarField,
}

impl WTriple {
    pub fn zeros(model: &Model) -> Self {
        let z = ScalarField::zeros(model);
        Self { u: z.clone(), v: z.clone(), h: z }
    }

    pub fn norm(&self, model: &Model) -> f64 {
        (self.u.norm(model).powi(2) + self.v.norm(model).powi(2) + self.h.norm(model).powi(2)).sqrt()
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self { u: self.u.sub(&other.u), v: self.v.sub(&other.v), h: self.h.sub(&other.h) }
    }

    pub fn inner(&self, model: &Model, other: &Self) -> C64 {
        self.u.inner(model, &other.u) + self.v.inner(model, &other.v) + self.h.inner(model, &other.h)
    }

    /// Largest Szegő-ray coefficient that W forbids.
    pub fn w_defect(&self, model: &Model) -> f64 {
        ray_mass(model, &self.u, on_cbar_ray).max(ray_mass(model, &self.v, on_c_ray))
    }

    /// Force W-membership by dropping the forbidden ray coefficients.
    pub fn project_to_w(&self, model: &Model) -> Self {
        Self { u: self.u.sub(&szego_cbar(model, &self.u)), v: self.v.sub(&szego_c(model, &self.v)), h: self.h.clone() }
    }

    fn check(&self, model: &Model) -> Result<()> {
        self.u.check(model)?;
        self.v.check(model)?;
        self.h.check(model)?;
        let defect = self.w_defect(model);
        if defect > RAY_TOL * self.norm(model).max(f64::MIN_POSITIVE) {
            return Err(Error::Domain(format!("triple is not in W: ray coefficient {defect:e}")));
        }
        Ok(())
    }
}

/// `Γ(u, v, h) = 𝓡u + 𝓡̄v + hθ`.
pub fn apply_gamma(model: &Model, t: &WTriple) -> Result<FormField> {
    t.check(model)?;
    let a = apply_cal_r(model, Holomorphy::Hol, &t.u)?;
    let b = apply_cal_r(model, Holomorphy::Antihol, &t.v)?;
    a.add(model, &b)?.add(model, &model.theta_form(t.h.clone()))
}

/// `Γ*ω = (𝓡*ω₊, 𝓡̄*ω₋, h)`.
pub fn apply_gamma_adjoint(model: &Model, omega: &FormField) -> Result<WTriple> {
    model.expect_degree(omega, 1)?;
    Ok(WTriple {
        u: apply_cal_r_adjoint(model, Holomorphy::Hol, omega)?,
        v: apply_cal_r_adjoint(model, Holomorphy::Antihol, omega)?,
        h: omega.coefficient(model, &BasisWord::theta(model.n())),
    })
}

/// Eigen-branch of `d₁`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Branch {
    Zero,
    Plus,
    Minus,
}

impl Branch {
    pub fn index(self) -> usize {
        match self {
            Branch::Zero => 0,
            Branch::Plus => 1,
            Branch::Minus => 2,
        }
    }
}

/// Closed-form eigensystems at `(λ_s, m)` for every slice and level.
pub fn eigensystem_table(model: &Model) -> Result<Vec<Vec<FanEigensystem>>> {
    model.lambdas().iter().map(|&l| (0..=model.fock_max()).map(|m| fan_eigensystem(&fan_point(model, l, m))).collect()).collect()
}

fn component_table(table: &[Vec<FanEigensystem>], branch: Branch, c: usize, conj: bool) -> SymbolTable {
    table
        .iter()
        .map(|row| {
            row.iter()
                .map(|es| {
                    let z = es.vectors[branch.index()][c];
                    if conj {
                        z.conj()
                    } else {
                        z
                    }
                })
                .collect()
        })
        .collect()
}

/// `S_• f`: the components of `v_•` applied as fan multipliers.
pub fn apply_s(model: &Model, branch: Branch, f: &ScalarField) -> Result<WTriple> {
    f.check(model)?;
    if branch == Branch::Minus {
        let mass = ray_mass(model, f, on_c_ray).max(ray_mass(model, f, on_cbar_ray));
        if mass > RAY_TOL * f.norm(model).max(f64::MIN_POSITIVE) {
            return Err(Error::Domain(format!("S- needs Cf = C̄f = 0, found ray coefficient {mass:e}")));
        }
    }
    let es = eigensystem_table(model)?;
    let comp = |c| apply_table(model, f, &component_table(&es, branch, c, false));
    let mut t = WTriple { u: comp(0), v: comp(1), h: comp(2) };
    if branch == Branch::Minus {
        // rounding leaves nothing on the rays, but make it exact
        t = t.project_to_w(model);
    }
    Ok(t)
}

/// `S_•*(u, v, h) = v̄₁u + v̄₂v + v̄₃h`.
pub fn apply_s_adjoint(model: &Model, branch: Branch, t: &WTriple) -> Result<ScalarField> {
    let es = eigensystem_table(model)?;
    let a = apply_table(model, &t.u, &component_table(&es, branch, 0, true));
    let b = apply_table(model, &t.v, &component_table(&es, branch, 1, true));
    let c = apply_table(model, &t.h, &component_table(&es, branch, 2, true));
    Ok(a.add(&b).add(&c))
}

/// Targets of [`project`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Space {
    P1,
    P2Plus,
    P2Minus,
    PiPlus,
    PiMinus,
    P3,
}

fn p2(model: &Model, kind: Holomorphy, omega: &FormField) -> Result<FormField> {
    let bideg = kind.bidegree();
    let q = omega.filter_words(|w| !w.has_theta() && w.bidegree() == bideg);
    let back = apply_cal_r(model, kind, &apply_cal_r_adjoint(model, kind, &q)?)?;
    q.sub(model, &back)
}

fn pi(model: &Model, branch: Branch, omega: &FormField) -> Result<FormField> {
    let t = apply_gamma_adjoint(model, omega)?;
    let f = apply_s_adjoint(model, branch, &t)?;
    let f = if branch == Branch::Minus { project_l2_0(model, &f) } else { f };
    apply_gamma(model, &apply_s(model, branch, &f)?)
}

pub fn project(model: &Model, space: Space, omega: &FormField) -> Result<FormField> {
    model.expect_degree(omega, 1)?;
    match space {
        Space::P1 => apply_r(model, &apply_r_adjoint(model, omega)?),
        Space::P2Plus => p2(model, Holomorphy::Hol, omega),
        Space::P2Minus => p2(model, Holomorphy::Antihol, omega),
        Space::PiPlus => pi(model, Branch::Plus, omega),
        Space::PiMinus => pi(model, Branch::Minus, omega),
        Space::P3 => {
            let a = project(model, Space::P1, omega)?;
            let b = project(model, Space::P2Plus, omega)?;
            let c = project(model, Space::P2Minus, omega)?;
            omega.sub(model, &a)?.sub(model, &b)?.sub(model, &c)
        }
    }
}

/// The five parts of a 1-form field.
#[derive(Debug, Clone)]
pub struct DecompositionResult {
    pub exact: FormField,
    pub coclosed10: FormField,
    pub coclosed01: FormField,
    pub v3plus: FormField,
    pub v3minus: FormField,
    /// `‖ω - Σ parts‖ / ‖ω‖`.
    pub residual: f64,
    /// `max |⟨a, b⟩| / ‖ω‖²` over distinct parts.
    pub orthogonality: f64,
}

impl DecompositionResult {
    pub fn parts(&self) -> [&FormField; 5] {
        [&self.exact, &self.coclosed10, &self.coclosed01, &self.v3plus, &self.v3minus]
    }

    pub const NAMES: [&'static str; 5] = ["exact", "coclosed10", "coclosed01", "v3plus", "v3minus"];
}

pub fn decompose_1form(model: &Model, omega: &FormField) -> Result<DecompositionResult> {
    model.expect_degree(omega, 1)?;
    let exact = project(model, Space::P1, omega)?;
    let coclosed10 = project(model, Space::P2Plus, omega)?;
    let coclosed01 = project(model, Space::P2Minus, omega)?;
    let rest = omega.sub(model, &exact)?.sub(model, &coclosed10)?.sub(model, &coclosed01)?;
    let v3plus = pi(model, Branch::Plus, &rest)?;
    let v3minus = pi(model, Branch::Minus, &rest)?;
    let norm = omega.norm(model);
    let mut result = DecompositionResult { exact, coclosed10, coclosed01, v3plus, v3minus, residual: 0.0, orthogonality: 0.0 };
    if norm == 0.0 {
        return Ok(result);
    }
    let mut sum = FormField::zero(model.n());
    for p in result.parts() {
        sum = sum.add(model, p)?;
    }
    result.residual = omega.sub(model, &sum)?.norm(model) / norm;
    let parts = result.parts();
    let mut worst = 0.0f64;
    for i in 0..5 {
        for j in (i + 1)..5 {
            worst = worst.max(parts[i].inner(model, parts[j]).norm());
        }
    }
    result.orthogonality = worst / (norm * norm);
    Ok(result)
}

/// `Δ₀`-symbol of `Φ± = Δ₀ + n/2 ± √(Δ₀ + n²/4)`, i.e. the `±` eigenvalue
/// of `d₁`.
pub fn phi_symbol(n: usize, lambda: f64, xi: f64, plus: bool) -> f64 {
    let d = xi + lambda * lambda;
    let nf = n as f64;
    let a = (d + 0.25 * nf * nf).sqrt();
    if plus {
        d + 0.5 * nf + a
    } else {
        // d + n/2 - a without cancellation
        d - d / (0.5 * nf + a)
    }
}

/// `Δ₁` against the advertised action on each part of `decompose_1form`,
/// as `‖Δ₁x - expected‖ / (‖ω‖ · scale)` where `scale` is the largest
/// `Δ₁` eigenvalue bound on the grid.
pub fn part_symbol_errors(model: &Model, omega: &FormField, parts: &DecompositionResult) -> Result<[f64; 5]> {
    let scale = spectral_scale(model) * omega.norm(model).max(f64::MIN_POSITIVE);
    let err =
        |x: &FormField, expected: FormField| -> Result<f64> { Ok(model.apply_hodge(1, x)?.sub(model, &expected)?.norm(model) / scale) };
    let r = apply_r(model, &apply_r_adjoint(model, &parts.exact)?.map_diagonal(model, |l, m| C64::from(delta0(model, l, m))))?;
    let t10 = symbol_table(model, |l, m| Ok(C64::from(delta0(model, l, m) + l)))?;
    let t01 = symbol_table(model, |l, m| Ok(C64::from(delta0(model, l, m) - l)))?;
    let branch = |b: Branch, x: &FormField| -> Result<FormField> {
        let plus = b == Branch::Plus;
        let table = symbol_table(model, |l, m| Ok(C64::from(phi_symbol(model.n(), l, model.xi(l, m), plus))))?;
        let f = apply_s_adjoint(model, b, &apply_gamma_adjoint(model, x)?)?;
        let f = apply_table(model, &f, &table);
        let f = if b == Branch::Minus { project_l2_0(model, &f) } else { f };
        apply_gamma(model, &apply_s(model, b, &f)?)
    };
    Ok([
        err(&parts.exact, r)?,
        err(&parts.coclosed10, coefficientwise(model, &parts.coclosed10, &t10))?,
        err(&parts.coclosed01, coefficientwise(model, &parts.coclosed01, &t01))?,
        err(&parts.v3plus, branch(Branch::Plus, &parts.v3plus)?)?,
        err(&parts.v3minus, branch(Branch::Minus, &parts.v3minus)?)?,
    ])
}

/// Level-diagonal scalar symbol applied to each coefficient of a form.
/// For `(1,0)` forms with `Δ₀ - iT ↦ ξ + λ² + λ` this is `(Δ₀ - iT)ω`.
pub fn coefficientwise(model: &Model, omega: &FormField, table: &SymbolTable) -> FormField {
    apply_table_form(model, omega, table)
}

/// Upper bound for the `Δ₁` spectrum on the model grid.
pub fn spectral_scale(model: &Model) -> f64 {
    let m = model.fock_max();
    model.lambdas().iter().map(|&l| phi_symbol(model.n(), l, model.xi(l, m), true)).fold(1.0, f64::max)
}

/// `Δ₀⁻¹d*ω`.
pub fn exact_potential(model: &Model, omega: &FormField) -> Result<ScalarField> {
    model.expect_degree(omega, 1)?;
    let s = model.scalar_part(&model.apply_d_star(omega, 1)?);
    Ok(s.map_diagonal(model, |l, m| C64::from(delta0(model, l, m).recip())))
}

/// Result of the injectivity audit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InjectivityReport {
    /// Worst relative mismatch of `(d²-λ²)(d+n) = d² - λ²(d+n) + d²(d+n-1)`.
    pub identity_error: f64,
    /// `min d²(d+n-1)` over the points.
    pub min_factor: f64,
}

pub fn injectivity_audit(points: &[FanPoint]) -> Result<InjectivityReport> {
    if points.is_empty() {
        return Err(Error::Precondition("no fan points".to_string()));
    }
    let mut identity_error = 0.0f64;
    let mut min_factor = f64::INFINITY;
    for p in points {
        let d = p.delta0();
        let l2 = p.lambda * p.lambda;
        let n = p.n as f64;
        let lhs = (d * d - l2) * (d + n);
        let rhs = d * d - l2 * (d + n) + d * d * (d + n - 1.0);
        identity_error = identity_error.max((lhs - rhs).abs() / lhs.abs().max(1.0));
        min_factor = min_factor.min(d * d * (d + n - 1.0));
    }
    Ok(InjectivityReport { identity_error, min_factor })
}

/// The relations satisfied by `S₀f`, `S₊f` and `S₋f₀` (with `f₀` the
/// `L²₀` part of `f`), as six residual norms relative to `‖f‖`:
/// `Tu - □^{1/2}h`, `Tv - □̄^{1/2}h` on `W₀`;
/// `Q₊⁺u + i□^{1/2}h`, `Q₋⁺v - i□̄^{1/2}h` on `W₊`;
/// `Q₋⁻u - i□^{1/2}h`, `Q₊⁻v + i□̄^{1/2}h` on `W₋`.
pub fn branch_relation_residuals(model: &Model, f: &ScalarField) -> Result<[f64; 6]> {
    let n = model.n() as f64;
    let norm = f.norm(model).max(f64::MIN_POSITIVE);
    let sq_box = symbol_table(model, |l, m| Ok(C64::from((0.5 * (model.xi(l, m) - n * l)).max(0.0).sqrt())))?;
    let sq_box_bar = symbol_table(model, |l, m| Ok(C64::from((0.5 * (model.xi(l, m) + n * l)).max(0.0).sqrt())))?;
    let q = |eps: i8, delta: i8| symbol_table(model, |l, m| Ok(C64::from(fan_point(model, l, m).q(eps, delta))));
    let t = symbol_table(model, |l, _| Ok(I * l))?;
    let res = |a: ScalarField, b: ScalarField| a.sub(&b).norm(model) / norm;

    let w0 = apply_s(model, Branch::Zero, f)?;
    let wp = apply_s(model, Branch::Plus, f)?;
    let wm = apply_s(model, Branch::Minus, &project_l2_0(model, f))?;
    let bh = |w: &WTriple, tab: &SymbolTable, c: C64| apply_table(model, &w.h, tab).scale(c);
    Ok([
        res(apply_table(model, &w0.u, &t), bh(&w0, &sq_box, ONE)),
        res(apply_table(model, &w0.v, &t), bh(&w0, &sq_box_bar, ONE)),
        res(apply_table(model, &wp.u, &q(1, 1)?), bh(&wp, &sq_box, -I)),
        res(apply_table(model, &wp.v, &q(1, -1)?), bh(&wp, &sq_box_bar, I)),
        res(apply_table(model, &wm.u, &q(-1, -1)?), bh(&wm, &sq_box, I)),
        res(apply_table(model, &wm.v, &q(-1, 1)?), bh(&wm, &sq_box_bar, -I)),
    ])
}

/// `max |q₊⁺q₋⁻ - 2□|`, `|q₊⁻q₋⁺ - 2□̄|` relative, over the model's fan points.
pub fn q_product_residual(model: &Model) -> f64 {
    let n = model.n() as f64;
    let mut worst = 0.0f64;
    for &l in model.lambdas() {
        for m in 0..=model.fock_max() {
            let p = fan_point(model, l, m);
            let a = (p.q(1, 1) * p.q(-1, -1) - (p.xi - n * l)).abs() / p.xi.max(1.0);
            let b = (p.q(-1, 1) * p.q(1, -1) - (p.xi + n * l)).abs() / p.xi.max(1.0);
            worst = worst.max(a).max(b);
        }
    }
    worst
}

/// Random W-triple with all three fields on levels `≤ M - 1`, where
/// `Γ` and `Δ₁` are exact.
pub fn random_w_triple(model: &Model, rng: &mut crate::model::Rng) -> WTriple {
    let top = model.fock_max() - 1;
    let u = crate::model::random_scalar(model, rng, top);
    let v = crate::model::random_scalar(model, rng, top);
    let h = crate::model::random_scalar(model, rng, top);
    WTriple { u, v, h }.project_to_w(model)
}

/// Apply `Γ*Δ₁Γ` to a W-triple and compare with `d₁(λ, ξ)` applied per
/// level; returns the relative error.
pub fn conjugation_residual(model: &Model, t: &WTriple) -> Result<f64> {
    let lhs = apply_gamma_adjoint(model, &model.apply_hodge(1, &apply_gamma(model, t)?)?)?;
    let d1: Vec<Vec<nalgebra::Matrix3<C64>>> = model
        .lambdas()
        .iter()
        .map(|&l| (0..=model.fock_max()).map(|m| crate::fan::d1_at(&fan_point(model, l, m))).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let levels = model.fock().levels();
    let mut rhs = WTriple::zeros(model);
    for (s, d1s) in d1.iter().enumerate() {
        for (k, &m) in levels.iter().enumerate() {
            let x = nalgebra::Vector3::new(t.u.slices[s].coeffs[k], t.v.slices[s].coeffs[k], t.h.slices[s].coeffs[k]);
            let y = d1s[m] * x;
            rhs.u.slices[s].coeffs[k] = y[0];
            rhs.v.slices[s].coeffs[k] = y[1];
            rhs.h.slices[s].coeffs[k] = y[2];
        }
    }
    Ok(lhs.sub(&rhs).norm(model) / (spectral_scale(model) * t.norm(model).max(f64::MIN_POSITIVE)))
}
