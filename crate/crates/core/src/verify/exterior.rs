use nalgebra::DMatrix;
use serde::Serialize;

use super::{Check, Suite};
use crate::error::Result;
use crate::exterior::{
    e_dtheta, hermitian_inner, i_dtheta, lefschetz_decompose, lefschetz_dimensions, operator_matrix, words_of_bidegree, words_of_degree,
    BasisWord, Form,
};
use crate::linalg::{C64, ONE};
use crate::model::{seeded, uniform_unit, Rng};

/// Worst errors of the Lefschetz battery over `n ≤ n_max` and all `(p, q)`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct LefschetzSummary {
    pub reconstruction: f64,
    pub eigenvalues: f64,
    pub orthogonality: f64,
    pub primitivity: f64,
    /// `(n, p, q, j)` entries whose dimension disagrees with the binomial count.
    pub dimension_mismatches: usize,
    /// `(n, p, q)` whose dimensions do not add up to `C(n,p)C(n,q)`.
    pub total_mismatches: usize,
    /// Components found outside `max(0, k-n) ≤ j ≤ min(p, q)`.
    pub range_violations: usize,
}

fn binom(n: usize, k: i64) -> i64 {
    if k < 0 || k as usize > n {
        return 0;
    }
    let k = k as usize;
    (0..k).fold(1i64, |acc, t| acc * (n - t) as i64 / (t + 1) as i64)
}

/// Expected `dim V_j^{p,q}`: the primitive forms of bidegree `(p-j, q-j)`,
/// counted as `dim Λ^{p-j,q-j} - dim Λ^{p-j-1,q-j-1}`, when `j ≥ k - n`.
fn expected_dim(n: usize, p: usize, q: usize, j: usize) -> usize {
    let k = (p + q) as i64;
    if (j as i64) < (k - n as i64).max(0) || j > p.min(q) {
        return 0;
    }
    let (a, b) = ((p - j) as i64, (q - j) as i64);
    (binom(n, a) * binom(n, b) - binom(n, a - 1) * binom(n, b - 1)) as usize
}

fn random_pq(rng: &mut Rng, n: usize, p: usize, q: usize) -> Result<Form> {
    let terms: Vec<(BasisWord, C64)> = words_of_bidegree(n, p, q)
        .into_iter()
        .map(|w| {
            let re = uniform_unit(rng);
            (w, C64::new(re, uniform_unit(rng)))
        })
        .collect();
    Form::from_terms(n, terms)
}

pub fn lefschetz_checks(n_max: usize, seed: u64) -> Result<LefschetzSummary> {
    let mut s = LefschetzSummary::default();
    let mut rng = seeded(seed);
    for n in 1..=n_max {
        for p in 0..=n {
            for q in 0..=n {
                let k = p + q;
                let omega = random_pq(&mut rng, n, p, q)?;
                let comps = lefschetz_decompose(&omega, p, q)?;
                let scale = omega.norm();
                let embedded: Vec<Form> = comps.iter().map(|c| c.embedded()).collect();
                let mut sum = Form::zero(n);
                for x in &embedded {
                    sum = sum.add(x)?;
                }
                s.reconstruction = s.reconstruction.max(sum.sub(&omega)?.norm() / scale);
                let lo = k.saturating_sub(n);
                for (c, x) in comps.iter().zip(&embedded) {
                    let j = c.j as f64;
                    let (nf, kf) = (n as f64, k as f64);
                    let ei = e_dtheta(&i_dtheta(x)).sub(&x.scale(C64::from(j * (j + 1.0 + nf - kf))))?;
                    let ie = i_dtheta(&e_dtheta(x)).sub(&x.scale(C64::from((j + 1.0) * (j + nf - kf))))?;
                    s.eigenvalues = s.eigenvalues.max(ei.norm().max(ie.norm()) / scale);
                    s.primitivity = s.primitivity.max(i_dtheta(&c.form).norm() / scale);
                    if c.j < lo || c.j > p.min(q) {
                        s.range_violations += 1;
                    }
                }
                for a in 0..embedded.len() {
                    for b in (a + 1)..embedded.len() {
                        let ip = hermitian_inner(&embedded[a], &embedded[b])?.norm();
                        s.orthogonality = s.orthogonality.max(ip / (scale * scale));
                    }
                }
                let dims = lefschetz_dimensions(n, p, q);
                for &(j, d) in &dims {
                    if d != expected_dim(n, p, q, j) {
                        s.dimension_mismatches += 1;
                    }
                }
                let total: usize = dims.iter().map(|d| d.1).sum();
                if total as i64 != binom(n, p as i64) * binom(n, q as i64) {
                    s.total_mismatches += 1;
                }
            }
        }
    }
    Ok(s)
}

fn horizontal_words(n: usize, k: usize) -> Vec<BasisWord> {
    words_of_degree(n, k).into_iter().filter(|w| !w.has_theta()).collect()
}

fn max_entry(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub(super) fn run(cfg: &super::VerifyConfig) -> Result<Vec<Check>> {
    let s = lefschetz_checks(cfg.exterior_n_max, cfg.seed)?;
    let su = Suite::Exterior;
    let mut out = vec![
        Check::at_most(su, "lefschetz-reconstruction", "lefschetz-decomposition", s.reconstruction, 1e-12),
        Check::at_most(su, "lefschetz-eigenvalues", "lefschetz-eigenvalues", s.eigenvalues, 1e-12),
        Check::at_most(su, "lefschetz-orthogonality", "lefschetz-decomposition", s.orthogonality, 1e-12),
        Check::at_most(su, "lefschetz-primitivity", "lefschetz-decomposition", s.primitivity, 1e-12),
        Check::at_most(su, "lefschetz-dimensions", "lefschetz-nontriviality-range", s.dimension_mismatches as f64, 0.0),
        Check::at_most(su, "lefschetz-total-dimension", "lefschetz-decomposition", s.total_mismatches as f64, 0.0),
        Check::at_most(su, "lefschetz-range", "lefschetz-nontriviality-range", s.range_violations as f64, 0.0),
    ];

    let (mut comm, mut adj, mut dth) = (0.0f64, 0.0f64, 0.0f64);
    for n in 1..=cfg.exterior_n_max {
        for k in 0..=2 * n {
            let basis = horizontal_words(n, k);
            let c = operator_matrix(n, &basis, &basis, |f| i_dtheta(&e_dtheta(f)).sub(&e_dtheta(&i_dtheta(f))).expect("same n"));
            let target = DMatrix::<C64>::identity(basis.len(), basis.len()) * C64::from(n as f64 - k as f64);
            comm = comm.max(max_entry(&(c - target)));
            let up = horizontal_words(n, k + 2);
            let e = operator_matrix(n, &basis, &up, e_dtheta);
            let i = operator_matrix(n, &up, &basis, i_dtheta);
            adj = adj.max(max_entry(&(e.adjoint() - i)));
        }
        // ⟨dθ, dθ⟩ = n
        let d = Form::dtheta(n);
        dth = dth.max((hermitian_inner(&d, &d)? - C64::from(n as f64)).norm());
        dth = dth.max((e_dtheta(&Form::scalar(n, ONE)).sub(&d)?).norm());
    }
    out.push(Check::at_most(su, "lefschetz-commutator", "interior-exterior-commutator", comm, 1e-12));
    out.push(Check::at_most(su, "e-i-adjointness", "interior-multiplication-adjoint", adj, 1e-12));
    out.push(Check::at_most(su, "dtheta-normalisation", "contact-form-differential", dth, 1e-12));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expected_dimensions() {
        assert_eq!(expected_dim(2, 1, 1, 0), 3);
        assert_eq!(expected_dim(2, 1, 1, 1), 1);
        assert_eq!(expected_dim(2, 2, 2, 1), 0);
        assert_eq!(expected_dim(2, 2, 2, 2), 1);
        assert_eq!(binom(4, 2), 6);
    }

    #[test]
    fn small_battery() {
        let s = lefschetz_checks(2, 3).unwrap();
        assert!(s.reconstruction < 1e-12 && s.eigenvalues < 1e-12);
        assert_eq!(s.dimension_mismatches + s.total_mismatches + s.range_violations, 0);
        assert_eq!(e_dtheta(&e_dtheta(&Form::scalar(1, ONE))).norm(), 0.0);
    }
}
