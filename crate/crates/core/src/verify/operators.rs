use std::collections::BTreeMap;

use super::{relative, Check, Suite, VerifyConfig};
use crate::error::Result;
use crate::exterior::BasisWord;
use crate::linalg::{C64, I};
use crate::model::{random_form, random_scalar, seeded, CrOp, FormField, Model, ModelConfig, Rng, ScalarField, ScalarOp};

/// `θ`-coefficient `ω₂` of `ω = ω₁ + θ∧ω₂`, as a horizontal form.
fn theta_part(model: &Model, omega: &FormField) -> Result<FormField> {
    let mut comps = BTreeMap::new();
    for (w, f) in omega.components().iter().filter(|(w, _)| w.has_theta()) {
        comps.insert(BasisWord::new(model.n(), &w.hol_indices(), &w.antihol_indices(), false)?, f.clone());
    }
    FormField::from_components(model, comps)
}

/// `θ∧ω₂` for a horizontal `ω₂`.
fn with_theta(model: &Model, omega2: &FormField) -> Result<FormField> {
    let mut comps = BTreeMap::new();
    for (w, f) in omega2.components() {
        comps.insert(BasisWord::new(model.n(), &w.hol_indices(), &w.antihol_indices(), true)?, f.clone());
    }
    FormField::from_components(model, comps)
}

struct Ops<'a> {
    m: &'a Model,
}

impl Ops<'_> {
    fn cr(&self, op: CrOp, x: &FormField) -> Result<FormField> {
        self.m.apply_cr_op(op, x)
    }
    fn add(&self, a: &FormField, b: &FormField) -> Result<FormField> {
        a.add(self.m, b)
    }
    fn sub(&self, a: &FormField, b: &FormField) -> Result<FormField> {
        a.sub(self.m, b)
    }
    fn e(&self, x: &FormField) -> FormField {
        self.m.apply_e_dtheta(x)
    }
    fn i(&self, x: &FormField) -> FormField {
        self.m.apply_i_dtheta(x)
    }
    fn t(&self, x: &FormField) -> FormField {
        self.m.apply_t(x)
    }
    /// `A B + B A` for CR operators.
    fn anti(&self, a: CrOp, b: CrOp, x: &FormField) -> Result<FormField> {
        self.add(&self.cr(a, &self.cr(b, x)?)?, &self.cr(b, &self.cr(a, x)?)?)
    }
    /// `d_H d_H* + d_H* d_H`.
    fn delta_h(&self, x: &FormField) -> Result<FormField> {
        self.anti(CrOp::DH, CrOp::DHStar, x)
    }
}

/// `Δ_k` from the block matrix in terms of `d_H`, `T`, `e(dθ)`, `i(dθ)` on
/// `ω = ω₁ + θ∧ω₂`:
/// `(Δ_H - T² + e i) ω₁ + [d_H*, e] ω₂` and `[i, d_H] ω₁ + (Δ_H - T² + i e) ω₂`.
pub fn hodge_block_matrix(model: &Model, omega: &FormField) -> Result<FormField> {
    let o = Ops { m: model };
    let w1 = omega.filter_words(|w| !w.has_theta());
    let w2 = theta_part(model, omega)?;
    let diag = |x: &FormField, ei_first: bool| -> Result<FormField> {
        let lap = o.sub(&o.delta_h(x)?, &o.t(&o.t(x)))?;
        let ei = if ei_first { o.e(&o.i(x)) } else { o.i(&o.e(x)) };
        o.add(&lap, &ei)
    };
    let top = o.add(&diag(&w1, true)?, &o.sub(&o.cr(CrOp::DHStar, &o.e(&w2))?, &o.e(&o.cr(CrOp::DHStar, &w2)?))?)?;
    let bottom = o.add(&o.sub(&o.i(&o.cr(CrOp::DH, &w1)?), &o.cr(CrOp::DH, &o.i(&w1))?)?, &diag(&w2, false)?)?;
    top.add(model, &with_theta(model, &bottom)?)
}

type Identity = fn(&Ops<'_>, &FormField, usize) -> Result<(FormField, FormField)>;

fn zero(o: &Ops<'_>) -> FormField {
    FormField::zero(o.m.n())
}

fn scaled(x: &FormField, c: C64) -> FormField {
    x.scale(c)
}

/// Identities on horizontal `k`-form fields: `(check id, identity name, lhs, rhs)`.
const HORIZONTAL: [(&str, &str, Identity); 19] = [
    ("del-b-squared", "cr-complex-identities", |o, x, _| Ok((o.cr(CrOp::DelB, &o.cr(CrOp::DelB, x)?)?, zero(o)))),
    ("del-bar-b-squared", "cr-complex-identities", |o, x, _| Ok((o.cr(CrOp::DelBarB, &o.cr(CrOp::DelBarB, x)?)?, zero(o)))),
    ("mixed-anticommutator-hol", "cr-complex-identities", |o, x, _| Ok((o.anti(CrOp::DelB, CrOp::DelBarBStar, x)?, zero(o)))),
    ("mixed-anticommutator-antihol", "cr-complex-identities", |o, x, _| Ok((o.anti(CrOp::DelBarB, CrOp::DelBStar, x)?, zero(o)))),
    ("horizontal-differential-split", "horizontal-differential", |o, x, _| {
        Ok((o.cr(CrOp::DH, x)?, o.add(&o.cr(CrOp::DelB, x)?, &o.cr(CrOp::DelBarB, x)?)?))
    }),
    ("horizontal-differential-square", "horizontal-differential-square", |o, x, _| {
        Ok((o.cr(CrOp::DH, &o.cr(CrOp::DH, x)?)?, scaled(&o.t(&o.e(x)), C64::from(-1.0))))
    }),
    ("box-scalar-action", "kohn-laplacian-conjugate-scalar-action", |o, x, _| {
        Ok((o.anti(CrOp::DelB, CrOp::DelBStar, x)?, o.cr(CrOp::Box, x)?))
    }),
    ("box-bar-scalar-action", "kohn-laplacian-scalar-action", |o, x, _| {
        Ok((o.anti(CrOp::DelBarB, CrOp::DelBarBStar, x)?, o.cr(CrOp::BoxBar, x)?))
    }),
    ("horizontal-laplacian-split", "horizontal-laplacian-kohn-sum", |o, x, _| {
        Ok((o.delta_h(x)?, o.add(&o.anti(CrOp::DelB, CrOp::DelBStar, x)?, &o.anti(CrOp::DelBarB, CrOp::DelBarBStar, x)?)?))
    }),
    ("horizontal-laplacian-scalar-action", "horizontal-laplacian-scalar-action", |o, x, _| Ok((o.delta_h(x)?, o.cr(CrOp::DeltaH, x)?))),
    ("lefschetz-commutator-fields", "interior-exterior-commutator", |o, x, k| {
        let n = o.m.n() as f64;
        Ok((o.sub(&o.i(&o.e(x)), &o.e(&o.i(x)))?, scaled(x, C64::from(n - k as f64))))
    }),
    ("commutator-i-del-b", "contraction-commutators", |o, x, _| {
        let l = o.sub(&o.i(&o.cr(CrOp::DelB, x)?), &o.cr(CrOp::DelB, &o.i(x))?)?;
        Ok((l, scaled(&o.cr(CrOp::DelBarBStar, x)?, -I)))
    }),
    ("commutator-i-del-bar-b", "contraction-commutators", |o, x, _| {
        let l = o.sub(&o.i(&o.cr(CrOp::DelBarB, x)?), &o.cr(CrOp::DelBarB, &o.i(x))?)?;
        Ok((l, scaled(&o.cr(CrOp::DelBStar, x)?, I)))
    }),
    ("commutator-del-b-star-e", "contraction-commutators", |o, x, _| {
        let l = o.sub(&o.cr(CrOp::DelBStar, &o.e(x))?, &o.e(&o.cr(CrOp::DelBStar, x)?))?;
        Ok((l, scaled(&o.cr(CrOp::DelBarB, x)?, I)))
    }),
    ("commutator-del-bar-b-star-e", "contraction-commutators", |o, x, _| {
        let l = o.sub(&o.cr(CrOp::DelBarBStar, &o.e(x))?, &o.e(&o.cr(CrOp::DelBarBStar, x)?))?;
        Ok((l, scaled(&o.cr(CrOp::DelB, x)?, -I)))
    }),
    ("box-del-bar-b", "kohn-laplacian-commutation", |o, x, _| {
        let y = o.cr(CrOp::DelBarB, x)?;
        Ok((o.cr(CrOp::Box, &y)?, o.sub(&o.cr(CrOp::DelBarB, &o.cr(CrOp::Box, x)?)?, &scaled(&o.t(&y), I))?))
    }),
    ("box-bar-del-b", "kohn-laplacian-commutation", |o, x, _| {
        let y = o.cr(CrOp::DelB, x)?;
        Ok((o.cr(CrOp::BoxBar, &y)?, o.add(&o.cr(CrOp::DelB, &o.cr(CrOp::BoxBar, x)?)?, &scaled(&o.t(&y), I))?))
    }),
    ("del-bar-b-star-box", "kohn-laplacian-commutation", |o, x, _| {
        let lhs = o.cr(CrOp::DelBarBStar, &o.cr(CrOp::Box, x)?)?;
        let y = o.cr(CrOp::DelBarBStar, x)?;
        Ok((lhs, o.sub(&o.cr(CrOp::Box, &y)?, &scaled(&o.t(&y), I))?))
    }),
    ("del-b-star-box-bar", "kohn-laplacian-commutation", |o, x, _| {
        let lhs = o.cr(CrOp::DelBStar, &o.cr(CrOp::BoxBar, x)?)?;
        let y = o.cr(CrOp::DelBStar, x)?;
        Ok((lhs, o.add(&o.cr(CrOp::BoxBar, &y)?, &scaled(&o.t(&y), I))?))
    }),
];

fn check_into(out: &mut BTreeMap<(String, String), f64>, id: &str, anchor: &str, err: f64) {
    let e = out.entry((id.to_string(), anchor.to_string())).or_insert(0.0);
    *e = e.max(err);
}

fn form_rel(model: &Model, a: &FormField, b: &FormField, input: &FormField) -> Result<f64> {
    let diff = a.sub(model, b)?.norm(model);
    Ok(relative(diff, a.norm(model), b.norm(model), input.norm(model)))
}

fn random_horizontal(model: &Model, rng: &mut Rng, k: usize, limit: i64) -> FormField {
    random_form(model, rng, k, limit).filter_words(|w| !w.has_theta())
}

/// Worst relative error of every operator identity on one model, keyed by
/// `(check id, identity name)`.
pub fn operator_identity_errors(model: &Model, seed: u64, inputs: usize) -> Result<BTreeMap<(String, String), f64>> {
    let n = model.n();
    let o = Ops { m: model };
    let mut rng = seeded(seed);
    let mut out = BTreeMap::new();
    for _ in 0..inputs {
        for k in 0..=2 * n {
            let limit = model.exact_grade_limit(&[k + 2]);
            let x = random_horizontal(model, &mut rng, k, limit);
            for (id, anchor, f) in HORIZONTAL.iter() {
                let (lhs, rhs) = f(&o, &x, k)?;
                check_into(&mut out, id, anchor, form_rel(model, &lhs, &rhs, &x)?);
            }

            let w = random_form(model, &mut rng, k, limit);
            if k < 2 * n {
                let dd = model.apply_d(&model.apply_d(&w, k)?, k + 1)?;
                check_into(&mut out, "d-squared", "exterior-derivative-complex", dd.norm(model) / w.norm(model));
            }
            let sigma = random_form(model, &mut rng, k + 1, limit);
            let lhs = model.apply_d(&w, k)?.inner(model, &sigma);
            let rhs = w.inner(model, &model.apply_d_star(&sigma, k + 1)?);
            let scale = model.apply_d(&w, k)?.norm(model) * sigma.norm(model);
            check_into(&mut out, "d-star-adjoint", "codifferential-adjoint", (lhs - rhs).norm() / scale.max(f64::MIN_POSITIVE));

            let composed = model.hodge_by_composition(&w, k)?;
            let block = hodge_block_matrix(model, &w)?;
            check_into(&mut out, "hodge-block-matrix", "hodge-laplacian-block-matrix", form_rel(model, &block, &composed, &w)?);
            if k <= 1 {
                let closed = model.apply_hodge(k, &w)?;
                let (id, anchor) = if k == 0 {
                    ("hodge-zero-closed-form", "scalar-hodge-laplacian")
                } else {
                    ("hodge-one-closed-form", "one-form-hodge-laplacian")
                };
                check_into(&mut out, id, anchor, form_rel(model, &closed, &composed, &w)?);
            }
        }

        // [B_j, B̄_k] = δ_jk iT and [B_j, B_k] = 0 on levels ≤ M - 2
        let f = random_scalar(model, &mut rng, model.fock_max() - 2);
        let mut worst = 0.0f64;
        for (s, &l) in model.lambdas().iter().enumerate() {
            let v = &f.slices[s].coeffs;
            let vn = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt() * l.abs().max(1.0);
            for j in 1..=n {
                for k in 1..=n {
                    let a = model.apply_b(j, l, &model.apply_bbar(k, l, v));
                    let b = model.apply_bbar(k, l, &model.apply_b(j, l, v));
                    let c = model.apply_b(j, l, &model.apply_b(k, l, v));
                    let d = model.apply_b(k, l, &model.apply_b(j, l, v));
                    let it = if j == k { C64::from(-l) } else { C64::from(0.0) };
                    for t in 0..v.len() {
                        worst = worst.max(((a[t] - b[t]) - it * v[t]).norm() / vn);
                        worst = worst.max((c[t] - d[t]).norm() / vn);
                    }
                }
            }
        }
        check_into(&mut out, "generator-commutators", "heisenberg-commutation", worst);

        // Δ₀ = d*d on scalars against the L - T² symbol
        let f0 = random_scalar(model, &mut rng, model.fock_max() - 1);
        let a = model.apply_invariant_scalar_op(ScalarOp::Delta0, &f0)?;
        let dd = model.scalar_part(&model.apply_d_star(&model.apply_d(&model.zero_form(f0.clone()), 0)?, 1)?);
        let l = model.apply_invariant_scalar_op(ScalarOp::L, &f0)?;
        let tt = model.apply_invariant_scalar_op(ScalarOp::T, &model.apply_invariant_scalar_op(ScalarOp::T, &f0)?)?;
        let sym = l.sub(&tt);
        let rel_s = |x: &ScalarField, y: &ScalarField| relative(x.sub(y).norm(model), x.norm(model), y.norm(model), f0.norm(model));
        check_into(&mut out, "scalar-laplacian", "scalar-hodge-laplacian", rel_s(&a, &dd).max(rel_s(&a, &sym)));
    }
    Ok(out)
}

pub(super) fn run(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let mut worst: BTreeMap<(String, String), f64> = BTreeMap::new();
    for &n in &cfg.n_values {
        let model = Model::new(ModelConfig::new(n, cfg.lambdas.clone(), cfg.fock_max, cfg.tol)?)?;
        for (key, e) in operator_identity_errors(&model, cfg.seed.wrapping_add(n as u64), cfg.random_inputs)? {
            let slot = worst.entry(key).or_insert(0.0);
            *slot = slot.max(e);
        }
    }
    Ok(worst.into_iter().map(|((id, anchor), e)| Check::at_most(Suite::Operators, &id, &anchor, e, cfg.tol)).collect())
}
