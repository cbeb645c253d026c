use rayon::prelude::*;

use super::{Check, Suite, VerifyConfig};
use crate::decomposition::{
    apply_cal_r, apply_cal_r_adjoint, apply_gamma, apply_gamma_adjoint, apply_r, apply_r_adjoint, apply_s, apply_s_adjoint,
    decompose_1form, exact_potential, injectivity_audit, part_symbol_errors, phi_symbol, project, project_l2_0, random_w_triple, szego_c,
    szego_cbar, Branch, Holomorphy, Space,
};
use crate::error::Result;
use crate::exterior::BasisWord;
use crate::fan::{fan_eigensystem, fan_grid, fan_residuals, symbol_sup_audit, FanPoint, FanSymbol};
use crate::linalg::{C64, I, ONE, ZERO};
use crate::model::{random_form, random_scalar, seeded, FormField, Model, ModelConfig, ScalarField, ScalarOp};
use crate::multiplier::{m_delta1_assembled, m_delta1_oracle, MultiplierSpec};

fn model_for(cfg: &VerifyConfig, n: usize) -> Result<Model> {
    Model::new(ModelConfig::new(n, cfg.lambdas.clone(), cfg.fock_max, cfg.tol)?)
}

/// Worst residuals over the fan grid for each `n`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct FanSummary {
    pub points: usize,
    pub eigen: f64,
    pub resolution: f64,
    pub projector: f64,
    pub q_identities: f64,
}

pub fn fan_summary(n_values: &[usize], lambdas: &[f64], m_max: usize) -> Result<FanSummary> {
    let mut s = FanSummary::default();
    for &n in n_values {
        let pts = fan_grid(n, lambdas, m_max)?;
        let res = pts.par_iter().map(fan_residuals).collect::<Result<Vec<_>>>()?;
        s.points += pts.len();
        for r in res {
            s.eigen = s.eigen.max(r.eigen);
            s.resolution = s.resolution.max(r.resolution);
            s.projector = s.projector.max(r.projector);
            s.q_identities = s.q_identities.max(r.q_identities);
        }
    }
    Ok(s)
}

/// Distance of the `n = 1, λ = 1, ξ = 1` eigensystem from eigenvalues
/// `{1, 2, 4}` and `v₋ = (i, 0, 0)`.
pub fn hand_point_error() -> Result<f64> {
    let es = fan_eigensystem(&FanPoint::new(1, 1.0, 0)?)?;
    let mut ev = es.eigenvalues;
    ev.sort_by(f64::total_cmp);
    let e1 = ev.iter().zip([1.0, 2.0, 4.0]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let v = es.vectors[2];
    let e2 = (v[0] - I).norm().max(v[1].norm()).max(v[2].norm());
    Ok(e1.max(e2))
}

pub(super) fn run_fan(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let su = Suite::Fan;
    let s = fan_summary(&cfg.n_values, &cfg.fan_lambdas, cfg.fan_m_max)?;
    let mut out = vec![
        Check::at_most(su, "eigenpairs", "fan-eigensystem", s.eigen, 1e-10),
        Check::at_most(su, "projector-resolution", "fan-eigenprojections", s.resolution, 1e-12),
        Check::at_most(su, "projector-idempotent", "fan-eigenprojections", s.projector, 1e-12),
        Check::at_most(su, "q-identities", "q-quantity-identities", s.q_identities, 1e-12),
        Check::at_most(su, "hand-point", "fan-eigensystem", hand_point_error()?, 1e-12),
    ];
    let mut inj = (0.0f64, f64::INFINITY);
    let mut sups = 0.0f64;
    for &n in &cfg.n_values {
        let pts = fan_grid(n, &cfg.fan_lambdas, cfg.fan_m_max)?;
        let r = injectivity_audit(&pts)?;
        inj = (inj.0.max(r.identity_error), inj.1.min(r.min_factor));
        let alpha = 0.5 * n as f64;
        // |μ₁| ≤ 2 since ξ - (n/2)|λ| ≥ ξ/2; |μ₂| ≤ 1; the Szegő ratios peak at
        // (n + 2)/2 on the first ray off the excluded one
        let bound = f64::max(2.0, 0.5 * (n as f64 + 2.0));
        for sym in [
            FanSymbol::Mu1 { alpha, r: 1.0 },
            FanSymbol::Mu2 { alpha, r: 1.0 },
            FanSymbol::SzegoBar { r: 1.0 },
            FanSymbol::Szego { r: 1.0 },
        ] {
            sups = sups.max(symbol_sup_audit(sym, &pts)? / bound);
        }
    }
    out.push(Check::at_most(su, "injectivity-identity", "injectivity-cancellation", inj.0, 1e-12));
    out.push(Check::at_least(su, "injectivity-factor-positive", "injectivity-cancellation", inj.1, f64::MIN_POSITIVE));
    out.push(Check::at_most(su, "symbol-sups-bounded", "fan-symbol-boundedness", sups, 1.0));
    Ok(out)
}

/// Worst isometry defects over `inputs` random inputs.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct IsometrySummary {
    pub r: f64,
    pub gamma: f64,
    pub s: [f64; 3],
    pub cal_r: f64,
    pub cal_r_bar: f64,
}

fn rel_s(model: &Model, a: &ScalarField, b: &ScalarField) -> f64 {
    a.sub(b).norm(model) / b.norm(model).max(f64::MIN_POSITIVE)
}

fn rel_f(model: &Model, a: &FormField, b: &FormField) -> Result<f64> {
    Ok(a.sub(model, b)?.norm(model) / b.norm(model).max(f64::MIN_POSITIVE))
}

pub fn isometry_summary(model: &Model, seed: u64, inputs: usize) -> Result<IsometrySummary> {
    let mut s = IsometrySummary::default();
    let mut rng = seeded(seed);
    for _ in 0..inputs {
        let f = random_scalar(model, &mut rng, model.fock_max() - 1);
        s.r = s.r.max(rel_s(model, &apply_r_adjoint(model, &apply_r(model, &f)?)?, &f));
        let t = random_w_triple(model, &mut rng);
        let back = apply_gamma_adjoint(model, &apply_gamma(model, &t)?)?;
        s.gamma = s.gamma.max(back.sub(&t).norm(model) / t.norm(model));
        for (k, b) in [Branch::Zero, Branch::Plus, Branch::Minus].into_iter().enumerate() {
            let g = if b == Branch::Minus { project_l2_0(model, &f) } else { f.clone() };
            s.s[k] = s.s[k].max(rel_s(model, &apply_s_adjoint(model, b, &apply_s(model, b, &g)?)?, &g));
        }
        let hol = apply_cal_r_adjoint(model, Holomorphy::Hol, &apply_cal_r(model, Holomorphy::Hol, &f)?)?;
        s.cal_r = s.cal_r.max(hol.sub(&f.sub(&szego_cbar(model, &f))).norm(model) / f.norm(model));
        let anti = apply_cal_r_adjoint(model, Holomorphy::Antihol, &apply_cal_r(model, Holomorphy::Antihol, &f)?)?;
        s.cal_r_bar = s.cal_r_bar.max(anti.sub(&f.sub(&szego_c(model, &f))).norm(model) / f.norm(model));
    }
    Ok(s)
}

/// Worst errors of the five-way decomposition over random 1-forms.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DecompositionSummary {
    pub residual: f64,
    pub orthogonality: f64,
    /// Per part: exact, co-closed (1,0), co-closed (0,1), `V₃⁺`, `V₃⁻`.
    pub symbols: [f64; 5],
    pub idempotence: f64,
    pub exact_potential: f64,
}

pub fn decomposition_summary(model: &Model, seed: u64, inputs: usize) -> Result<DecompositionSummary> {
    let mut s = DecompositionSummary::default();
    let mut rng = seeded(seed);
    for _ in 0..inputs {
        let omega = random_form(model, &mut rng, 1, model.exact_grade_limit(&[1]));
        let d = decompose_1form(model, &omega)?;
        s.residual = s.residual.max(d.residual);
        s.orthogonality = s.orthogonality.max(d.orthogonality);
        for (slot, e) in s.symbols.iter_mut().zip(part_symbol_errors(model, &omega, &d)?) {
            *slot = slot.max(e);
        }
        for sp in [Space::P1, Space::P2Plus, Space::P2Minus, Space::PiPlus, Space::PiMinus] {
            let p = project(model, sp, &omega)?;
            s.idempotence = s.idempotence.max(rel_f(model, &project(model, sp, &p)?, &p).unwrap_or(0.0));
        }
        let v = exact_potential(model, &omega)?;
        let dv = model.apply_d(&model.zero_form(v), 0)?;
        s.exact_potential = s.exact_potential.max(dv.sub(model, &d.exact)?.norm(model) / omega.norm(model));
    }
    Ok(s)
}

/// `Δ₁ΓS±f = ΓS±Φ±f` and `Δ₁Rf = RΔ₀f`, relative errors.
pub fn intertwining_errors(model: &Model, seed: u64, inputs: usize) -> Result<[f64; 3]> {
    let mut out = [0.0f64; 3];
    let mut rng = seeded(seed);
    let n = model.n();
    for _ in 0..inputs {
        let f = random_scalar(model, &mut rng, model.fock_max() - 1);
        let rf = apply_r(model, &f)?;
        let d0f = model.apply_invariant_scalar_op(ScalarOp::Delta0, &f)?;
        out[0] = out[0].max(rel_f(model, &model.apply_hodge(1, &rf)?, &apply_r(model, &d0f)?)?);
        for (k, (b, plus)) in [(Branch::Plus, true), (Branch::Minus, false)].into_iter().enumerate() {
            let g = if plus { f.clone() } else { project_l2_0(model, &f) };
            let x = apply_gamma(model, &apply_s(model, b, &g)?)?;
            let phi = g.map_diagonal(model, |l, m| C64::from(phi_symbol(n, l, model.xi(l, m), plus)));
            let y = apply_gamma(model, &apply_s(model, b, &phi)?)?;
            out[k + 1] = out[k + 1].max(rel_f(model, &model.apply_hodge(1, &x)?, &y)?);
        }
    }
    Ok(out)
}

/// `Δ₁(fβ₁) = -T²(fβ₁)` for `n = 1` and `f` supported on `(λ < 0, m = 0)`.
pub fn coclosed_n1_error(lambdas: &[f64], fock_max: usize) -> Result<f64> {
    let model = Model::new(ModelConfig::new(1, lambdas.to_vec(), fock_max, 1e-10)?)?;
    let f = ScalarField::from_fn(&model, |_, l| {
        let mut v = vec![ZERO; model.fock().dim()];
        if l < 0.0 {
            v[0] = ONE;
        }
        v
    });
    let omega = FormField::from_scalar(BasisWord::beta(1, 1), f);
    let d1 = model.apply_hodge(1, &omega)?;
    let t2 = model.apply_t(&model.apply_t(&omega)).scale(C64::from(-1.0));
    let p2 = project(&model, Space::P2Plus, &omega)?;
    Ok(rel_f(&model, &d1, &t2)?.max(rel_f(&model, &p2, &omega)?))
}

pub(super) fn run_decomposition(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let su = Suite::Decomposition;
    let mut iso = IsometrySummary::default();
    let mut dec = DecompositionSummary::default();
    let mut inter = [0.0f64; 3];
    for &n in &cfg.n_values {
        let model = model_for(cfg, n)?;
        let seed = cfg.seed.wrapping_add(100 + n as u64);
        let a = isometry_summary(&model, seed, cfg.random_inputs)?;
        iso.r = iso.r.max(a.r);
        iso.gamma = iso.gamma.max(a.gamma);
        iso.cal_r = iso.cal_r.max(a.cal_r);
        iso.cal_r_bar = iso.cal_r_bar.max(a.cal_r_bar);
        for k in 0..3 {
            iso.s[k] = iso.s[k].max(a.s[k]);
        }
        let b = decomposition_summary(&model, seed + 1, cfg.random_inputs)?;
        dec.residual = dec.residual.max(b.residual);
        dec.orthogonality = dec.orthogonality.max(b.orthogonality);
        dec.idempotence = dec.idempotence.max(b.idempotence);
        dec.exact_potential = dec.exact_potential.max(b.exact_potential);
        for k in 0..5 {
            dec.symbols[k] = dec.symbols[k].max(b.symbols[k]);
        }
        for (slot, e) in inter.iter_mut().zip(intertwining_errors(&model, seed + 2, cfg.random_inputs)?) {
            *slot = slot.max(e);
        }
    }
    let t = cfg.tol;
    let mut out = vec![
        Check::at_most(su, "r-isometry", "exact-part-intertwiner", iso.r, t),
        Check::at_most(su, "gamma-unitary", "w-space-unitary", iso.gamma, t),
        Check::at_most(su, "s0-isometry", "w-branch-isometries", iso.s[0], t),
        Check::at_most(su, "s-plus-isometry", "w-branch-isometries", iso.s[1], t),
        Check::at_most(su, "s-minus-isometry", "w-branch-isometries", iso.s[2], t),
        Check::at_most(su, "cal-r-partial-isometry", "coclosed-intertwiners", iso.cal_r, t),
        Check::at_most(su, "cal-r-bar-partial-isometry", "coclosed-intertwiners", iso.cal_r_bar, t),
        Check::at_most(su, "parts-sum", "five-way-decomposition", dec.residual, t),
        Check::at_most(su, "parts-orthogonal", "five-way-decomposition", dec.orthogonality, t),
        Check::at_most(su, "projections-idempotent", "five-way-decomposition", dec.idempotence, t),
        Check::at_most(su, "exact-potential", "exact-potential-recovery", dec.exact_potential, t),
        Check::at_most(su, "intertwining-r", "exact-part-intertwiner", inter[0], t),
        Check::at_most(su, "intertwining-gamma-s-plus", "branch-intertwiners", inter[1], t),
        Check::at_most(su, "intertwining-gamma-s-minus", "branch-intertwiners", inter[2], t),
        Check::at_most(su, "coclosed-n1-minus-t-squared", "coclosed-hol-symbol", coclosed_n1_error(&cfg.lambdas, cfg.fock_max)?, t),
    ];
    for (name, e) in crate::decomposition::DecompositionResult::NAMES.iter().zip(dec.symbols) {
        out.push(Check::at_most(su, &format!("symbol-{name}"), "five-way-decomposition-symbols", e, t));
    }
    Ok(out)
}

pub const MULTIPLIER_TOL: f64 = 1e-8;

/// Relative error of the five-term assembly against the dense oracle.
pub fn multiplier_error(model: &Model, m: &MultiplierSpec, seed: u64) -> Result<f64> {
    let omega = random_form(model, &mut seeded(seed), 1, model.exact_grade_limit(&[1]));
    let a = m_delta1_assembled(model, m, &omega)?;
    let b = m_delta1_oracle(model, m, &omega)?;
    Ok(a.sub(model, &b)?.norm(model) / b.norm(model).max(f64::MIN_POSITIVE))
}

pub fn standard_multipliers() -> Vec<MultiplierSpec> {
    vec![
        MultiplierSpec::heat(0.1).expect("valid heat parameter"),
        MultiplierSpec::heat(1.0).expect("valid heat parameter"),
        MultiplierSpec::imaginary_power(1.0).expect("valid exponent"),
    ]
}

pub(super) fn run_multiplier(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for m in standard_multipliers() {
        let mut worst = 0.0f64;
        for &n in &cfg.n_values {
            let model = model_for(cfg, n)?;
            worst = worst.max(multiplier_error(&model, &m, cfg.seed.wrapping_add(200 + n as u64))?);
        }
        out.push(Check::at_most(
            Suite::Multiplier,
            &format!("assembly-vs-oracle-{}", m.label()),
            "five-term-calculus",
            worst,
            MULTIPLIER_TOL,
        ));
    }
    Ok(out)
}
