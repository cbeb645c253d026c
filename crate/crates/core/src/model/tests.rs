use super::*;
use crate::exterior::BasisWord;
use crate::linalg::{C64, I, ONE, ZERO};

fn model(n: usize, lambdas: Vec<f64>) -> Model {
    Model::new(ModelConfig::new(n, lambdas, 8, 1e-10).unwrap()).unwrap()
}

fn unit(model: &Model, alpha: &[u16]) -> ScalarField {
    let k = model.fock().index_of(alpha).unwrap();
    ScalarField::from_fn(model, |_, _| {
        let mut v = vec![ZERO; model.fock().dim()];
        v[k] = ONE;
        v
    })
}

fn coeff(f: &ScalarField, model: &Model, alpha: &[u16]) -> C64 {
    f.slices[0].coeffs[model.fock().index_of(alpha).unwrap()]
}

fn rel_err(model: &Model, a: &FormField, b: &FormField) -> f64 {
    let d = a.sub(model, b).unwrap().norm(model);
    d / a.norm(model).max(b.norm(model)).max(1e-300)
}

#[test]
fn generator_examples() {
    let m = model(1, vec![2.0]);
    let e0 = unit(&m, &[0]);
    let b = m.apply_invariant_scalar_op(ScalarOp::B(1), &e0).unwrap();
    assert_eq!(b.max_abs(), 0.0);
    let bb = m.apply_invariant_scalar_op(ScalarOp::BBar(1), &e0).unwrap();
    assert!((coeff(&bb, &m, &[1]) + C64::from(2f64.sqrt())).norm() < 1e-15);

    let m = model(1, vec![-3.0]);
    for level in 0..8u16 {
        let e = unit(&m, &[level]);
        let v = &e.slices[0].coeffs;
        let bbv = m.apply_b(1, -3.0, &m.apply_bbar(1, -3.0, v));
        let bbv2 = m.apply_bbar(1, -3.0, &m.apply_b(1, -3.0, v));
        let k = m.fock().index_of(&[level]).unwrap();
        assert!((bbv[k] - bbv2[k] - C64::from(3.0)).norm() < 1e-12);
    }
}

#[test]
fn diagonal_examples() {
    let m = model(1, vec![2.0]);
    let lf = m.apply_invariant_scalar_op(ScalarOp::L, &unit(&m, &[1])).unwrap();
    assert_eq!(coeff(&lf, &m, &[1]), C64::from(6.0));
    let m = model(1, vec![1.0]);
    let d0 = m.apply_invariant_scalar_op(ScalarOp::Delta0, &unit(&m, &[0])).unwrap();
    assert_eq!(coeff(&d0, &m, &[0]), C64::from(2.0));
    let m = model(1, vec![-1.0]);
    let bb = m.apply_invariant_scalar_op(ScalarOp::BoxBar, &unit(&m, &[0])).unwrap();
    assert_eq!(bb.max_abs(), 0.0);
}

#[test]
fn sublaplacian_from_generators_below_top_level() {
    let m = model(2, vec![-0.5, 1.5]);
    for (s, &lambda) in m.lambdas().iter().enumerate() {
        let mut rng = seeded(3 + s as u64);
        let f = random_scalar(&m, &mut rng, 7);
        let v = &f.slices[s].coeffs;
        let mut lv = vec![ZERO; v.len()];
        for j in 1..=2 {
            let a = m.apply_b(j, lambda, &m.apply_bbar(j, lambda, v));
            let b = m.apply_bbar(j, lambda, &m.apply_b(j, lambda, v));
            for k in 0..v.len() {
                lv[k] -= a[k] + b[k];
            }
        }
        for k in 0..v.len() {
            let expect = v[k] * m.xi(lambda, m.fock().level(k));
            assert!((lv[k] - expect).norm() < 1e-12);
        }
    }
}

#[test]
fn d_examples() {
    let m = model(1, vec![2.0]);
    let df = m.apply_d(&m.zero_form(unit(&m, &[0])), 0).unwrap();
    let bb = df.component(&BasisWord::beta_bar(1, 1)).unwrap();
    assert!((coeff(bb, &m, &[1]) + C64::from(2f64.sqrt())).norm() < 1e-15);
    let th = df.component(&BasisWord::theta(1)).unwrap();
    assert_eq!(coeff(th, &m, &[0]), C64::new(0.0, 2.0));
    assert!(df.component(&BasisWord::beta(1, 1)).is_none());

    // d of the constant θ (slice-wise: a vacuum coefficient) is dθ
    let omega = m.theta_form(unit(&m, &[0]));
    let dth = m.apply_d(&omega, 1).unwrap();
    let w = BasisWord::new(1, &[1], &[1], false).unwrap();
    assert_eq!(coeff(dth.component(&w).unwrap(), &m, &[0]), -I);
    assert!(dth.component(&BasisWord::new(1, &[], &[1], true).unwrap()).is_some());
}

#[test]
fn hodge_block_formula_matches_composition() {
    for n in [1, 2] {
        let m = model(n, vec![-2.0, -0.25, 0.5, 3.0]);
        let mut rng = seeded(11);
        let limit = m.exact_grade_limit(&[0, 1, 2]);
        let omega = random_form(&m, &mut rng, 1, limit);
        let a = m.apply_hodge(1, &omega).unwrap();
        let b = m.hodge_by_composition(&omega, 1).unwrap();
        assert!(rel_err(&m, &a, &b) < 1e-12, "n = {n}: {}", rel_err(&m, &a, &b));
    }
}

#[test]
fn d_squared_vanishes_and_d_star_is_adjoint() {
    let m = model(2, vec![-1.0, 0.75]);
    let mut rng = seeded(5);
    for k in 0..=3 {
        let limit = m.exact_grade_limit(&[k, k + 1, k + 2]);
        let omega = random_form(&m, &mut rng, k, limit);
        let dd = m.apply_d(&m.apply_d(&omega, k).unwrap(), k + 1).unwrap();
        assert!(dd.max_abs() < 1e-12, "k = {k}");
        let sigma = random_form(&m, &mut rng, k + 1, m.fock_max() as i64);
        let lhs = m.apply_d(&omega, k).unwrap().inner(&m, &sigma);
        let rhs = omega.inner(&m, &m.apply_d_star(&sigma, k + 1).unwrap());
        assert!((lhs - rhs).norm() < 1e-12 * (1.0 + lhs.norm()));
    }
}

#[test]
fn degree_errors() {
    let m = model(1, vec![1.0]);
    let mut rng = seeded(1);
    let omega = random_form(&m, &mut rng, 1, 4);
    assert!(matches!(m.apply_d(&omega, 2), Err(crate::Error::Degree(_))));
    assert!(matches!(m.apply_hodge(2, &random_form(&m, &mut rng, 2, 4)), Err(crate::Error::Unsupported(_))));
    assert!(matches!(m.apply_cr_op(CrOp::DelB, &omega), Err(crate::Error::Degree(_))));
    assert!(Model::new(ModelConfig { lambdas: vec![0.0], ..ModelConfig::default() }).is_err());
}
