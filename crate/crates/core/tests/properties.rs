use heisenberg_hodge::decomposition::{project, Space};
use heisenberg_hodge::exterior::{e_dtheta, hermitian_inner, i_dtheta, lefschetz_decompose, words_of_bidegree, Form};
use heisenberg_hodge::fan::{fan_residuals, FanPoint};
use heisenberg_hodge::linalg::C64;
use heisenberg_hodge::mh::{mh_sloc_norm, AngleCutoff, SlocParams};
use heisenberg_hodge::model::{dyadic_grid, random_form, seeded};
use heisenberg_hodge::multiplier::smooth_step;
use heisenberg_hodge::{Model, ModelConfig, MultiplierSpec};
use proptest::prelude::*;

fn form_from(n: usize, p: usize, q: usize, coeffs: &[(f64, f64)]) -> Form {
    let words = words_of_bidegree(n, p, q);
    Form::from_terms(n, words.into_iter().zip(coeffs.iter().cycle()).map(|(w, &(re, im))| (w, C64::new(re, im)))).unwrap()
}

fn bidegree() -> impl Strategy<Value = (usize, usize, usize)> {
    (1usize..=3).prop_flat_map(|n| (Just(n), 0..=n, 0..=n))
}

fn coeffs() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..24)
}

proptest! {
    #[test]
    fn e_and_i_of_dtheta_are_adjoint((n, p, q) in bidegree(), a in coeffs(), b in coeffs()) {
        prop_assume!(p < n && q < n);
        let x = form_from(n, p, q, &a);
        let y = form_from(n, p + 1, q + 1, &b);
        let lhs = hermitian_inner(&e_dtheta(&x), &y).unwrap();
        let rhs = hermitian_inner(&x, &i_dtheta(&y)).unwrap();
        prop_assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn lefschetz_commutator_is_n_minus_k((n, p, q) in bidegree(), a in coeffs()) {
        let x = form_from(n, p, q, &a);
        let comm = i_dtheta(&e_dtheta(&x)).sub(&e_dtheta(&i_dtheta(&x))).unwrap();
        let want = x.scale(C64::from(n as f64 - (p + q) as f64));
        prop_assert!(comm.sub(&want).unwrap().norm() < 1e-12);
    }

    #[test]
    fn lefschetz_components_rebuild_and_are_primitive((n, p, q) in bidegree(), a in coeffs()) {
        let x = form_from(n, p, q, &a);
        let parts = lefschetz_decompose(&x, p, q).unwrap();
        let mut sum = Form::zero(n);
        for c in &parts {
            prop_assert!(i_dtheta(&c.form).norm() < 1e-12);
            sum = sum.add(&c.embedded()).unwrap();
        }
        prop_assert!(sum.sub(&x).unwrap().norm() < 1e-12 * x.norm().max(1.0));
    }

    #[test]
    fn fan_closed_forms_hold(n in 1usize..=3, k in -6i32..=6, neg in any::<bool>(), m in 0usize..200) {
        let lambda = if neg { -(2f64.powi(k)) } else { 2f64.powi(k) };
        let pt = FanPoint::new(n, lambda, m).unwrap();
        let r = fan_residuals(&pt).unwrap();
        let scale = 1.0 + pt.xi + lambda * lambda;
        prop_assert!(r.eigen < 1e-12 * scale, "eigen {}", r.eigen);
        prop_assert!(r.resolution < 1e-12);
        prop_assert!(r.projector < 1e-12);
        prop_assert!(r.q_identities < 1e-12);
    }

    #[test]
    fn angle_cutoff_is_homogeneous_of_degree_zero(
        n in 1usize..=3, lambda in 0.01f64..10.0, ratio in 0.0f64..4.0, s in 0.1f64..10.0,
    ) {
        let psi = AngleCutoff::new(0.5, n).unwrap();
        let xi = ratio * lambda;
        prop_assert!((psi.eval(lambda, xi) - psi.eval(s * lambda, s * xi)).abs() < 1e-12);
    }

    #[test]
    fn smooth_step_is_monotone_in_unit_interval(a in -2.0f64..2.0, b in -2.0f64..2.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let (x, y) = (smooth_step(lo), smooth_step(hi));
        prop_assert!((0.0..=1.0).contains(&x) && (0.0..=1.0).contains(&y));
        prop_assert!(x <= y);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn projections_are_idempotent_and_self_adjoint(n in 1usize..=2, seed in any::<u64>(), k in 0usize..5) {
        let space = [Space::P1, Space::P2Plus, Space::P2Minus, Space::PiPlus, Space::PiMinus][k];
        let model = Model::new(ModelConfig::new(n, dyadic_grid(-1, 1), 5, 1e-10).unwrap()).unwrap();
        let g = model.exact_grade_limit(&[1]);
        let x = random_form(&model, &mut seeded(seed), 1, g);
        let y = random_form(&model, &mut seeded(seed ^ 0x5eed), 1, g);
        let px = project(&model, space, &x).unwrap();
        let ppx = project(&model, space, &px).unwrap();
        let scale = x.norm(&model) * y.norm(&model);
        prop_assert!(ppx.sub(&model, &px).unwrap().norm(&model) < 1e-10 * x.norm(&model));
        let lhs = px.inner(&model, &y);
        let rhs = x.inner(&model, &project(&model, space, &y).unwrap());
        prop_assert!((lhs - rhs).norm() < 1e-10 * scale);
    }

    #[test]
    fn mh_norm_is_monotone_in_tau(t in 0.05f64..2.0, tau in 0.0f64..1.5, dt in 0.0f64..1.0) {
        let m = MultiplierSpec::heat(t).unwrap();
        let p = SlocParams { j_max: 4, resolution: 32, ..SlocParams::new(tau) };
        let a = mh_sloc_norm(&m, &p).unwrap().sup;
        let b = mh_sloc_norm(&m, &SlocParams { tau: tau + dt, ..p }).unwrap().sup;
        prop_assert!(a <= b * (1.0 + 1e-12));
    }
}
