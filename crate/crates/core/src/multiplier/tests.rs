use super::*;
use crate::fan::{fan_eigensystem, FanPoint};
use crate::model::{dyadic_grid, random_form, random_scalar, seeded, ModelConfig, ScalarOp};

fn model(n: usize, lambdas: Vec<f64>, m: usize) -> Model {
    Model::new(ModelConfig::new(n, lambdas, m, 1e-10).unwrap()).unwrap()
}

fn rel(model: &Model, a: &FormField, b: &FormField) -> f64 {
    a.sub(model, b).unwrap().norm(model) / b.norm(model).max(1e-300)
}

fn random_one_form(model: &Model, seed: u64) -> FormField {
    random_form(model, &mut seeded(seed), 1, model.exact_grade_limit(&[1]))
}

#[test]
fn scalar_calculus_examples() {
    let md = model(1, vec![-1.0, 1.0], 4);
    let f = random_scalar(&md, &mut seeded(1), 4);
    let a = scalar_calculus(&md, &MultiplierSpec::identity(), ScalarCalcOp::Delta0, &f).unwrap();
    let b = md.apply_invariant_scalar_op(ScalarOp::Delta0, &f).unwrap();
    assert_eq!(a, b);
    let h = MultiplierSpec::heat(1.0).unwrap();
    let g = scalar_calculus(&md, &h, ScalarCalcOp::PhiPlus, &f).unwrap();
    assert!((g.slices[1].coeffs[0] - f.slices[1].coeffs[0] * (-4.0f64).exp()).norm() < 1e-15);
    // Δ₀ - iT on (λ < 0, m = 0) is λ² = -T²
    assert_eq!(ScalarCalcOp::Delta0MinusIT.symbol(1, -1.0, 1.0), 1.0);
    assert_eq!(ScalarCalcOp::Delta0MinusIT.symbol(1, -3.0, 3.0), 9.0);
}

#[test]
fn trivial_multipliers() {
    for n in [1, 2] {
        let md = model(n, dyadic_grid(-1, 1), 6);
        let omega = random_one_form(&md, 3);
        let one = MultiplierSpec::constant(ONE);
        assert!(rel(&md, &m_delta1_assembled(&md, &one, &omega).unwrap(), &omega) < 1e-12);
        assert!(rel(&md, &m_delta1_oracle(&md, &one, &omega).unwrap(), &omega) < 1e-12);
        let id = MultiplierSpec::identity();
        let d1 = md.apply_hodge(1, &omega).unwrap();
        assert!(rel(&md, &m_delta1_assembled(&md, &id, &omega).unwrap(), &d1) < 1e-12);
        assert!(rel(&md, &m_delta1_oracle(&md, &id, &omega).unwrap(), &d1) < 1e-12);
    }
}

#[test]
fn assembly_matches_oracle() {
    for n in [1, 2] {
        let md = model(n, dyadic_grid(-2, 2), 6);
        let omega = random_one_form(&md, 17);
        for m in [MultiplierSpec::heat(0.5).unwrap(), MultiplierSpec::imaginary_power(1.0).unwrap()] {
            let a = m_delta1_assembled(&md, &m, &omega).unwrap();
            let b = m_delta1_oracle(&md, &m, &omega).unwrap();
            assert!(a.sub(&md, &b).unwrap().norm(&md) < 1e-10 * omega.norm(&md), "{}", m.label());
        }
    }
}

#[test]
fn block_spectra_come_from_the_fan() {
    let n = 2;
    let md = model(n, vec![-0.5, 1.0], 5);
    for s in 0..2 {
        let l = md.lambdas()[s];
        for block in delta1_blocks(&md, s).unwrap() {
            let w = block.grade;
            let mut cands = Vec::new();
            if w >= 0 {
                let es = fan_eigensystem(&FanPoint::new(n, l, w as usize).unwrap()).unwrap();
                cands.extend(es.eigenvalues);
            }
            let sgn = if l > 0.0 { 1 } else { -1 };
            // (1,0) coefficients sit at level w - sgn, (0,1) at w + sgn
            for (lev, shift) in [(w - sgn, l), (w + sgn, -l)] {
                if lev >= 0 {
                    cands.push(md.xi(l, lev as usize) + l * l + shift);
                }
            }
            let eig = crate::linalg::hermitian_eigen(&block.matrix);
            for e in eig.values {
                assert!(cands.iter().any(|c| (c - e).abs() < 1e-10), "grade {w}: {e} not in {cands:?}");
            }
        }
    }
}

#[test]
fn hand_point_block() {
    // n = 1, λ = 1: the grade-0 block holds β̄ at level 1 and θ at level 0;
    // the third eigenvector (i, 0, 0) would need u on the C̄ ray
    let md = model(1, vec![-1.0, 1.0], 4);
    let blocks = delta1_blocks(&md, 1).unwrap();
    let b0 = blocks.iter().find(|b| b.grade == 0).unwrap();
    assert!(b0.entries.len() <= 3);
    let e = crate::linalg::hermitian_eigen(&b0.matrix).values;
    assert_eq!(e.len(), 2);
    assert!((e[0] - 2.0).abs() < 1e-12 && (e[1] - 4.0).abs() < 1e-12, "{e:?}");
}

#[test]
fn algebraic_properties() {
    let md = model(2, dyadic_grid(-1, 1), 5);
    let omega = random_one_form(&md, 30);
    let sigma = random_one_form(&md, 31);
    let h1 = MultiplierSpec::heat(0.3).unwrap();
    let h2 = MultiplierSpec::imaginary_power(0.7).unwrap();
    let ab = m_delta1_assembled(&md, &h1, &m_delta1_assembled(&md, &h2, &omega).unwrap()).unwrap();
    let prod = m_delta1_assembled(&md, &MultiplierSpec::product(&h1, &h2), &omega).unwrap();
    assert!(rel(&md, &ab, &prod) < 1e-12);
    let a = m_delta1_assembled(&md, &h1, &omega).unwrap().inner(&md, &sigma);
    let b = omega.inner(&md, &m_delta1_assembled(&md, &h1, &sigma).unwrap());
    assert!((a - b).norm() < 1e-12 * omega.norm(&md) * sigma.norm(&md));
    assert!(m_delta1_assembled(&md, &h1, &omega).unwrap().norm(&md) <= omega.norm(&md));
}
