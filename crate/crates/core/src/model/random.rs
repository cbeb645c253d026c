//! Seeded random inputs. The generator is SplitMix64; a coefficient is
//! `re + i·im` with each part `2·(next_u64() >> 11)·2⁻⁵³ - 1`, drawn in
//! slice order, then word order, then Fock order.

use rand_xoshiro::rand_core::Rng as _;

use super::field::{FormField, ScalarField, SliceForm};
use super::Model;
use crate::exterior::words_of_degree;
use crate::linalg::{C64, ZERO};

pub type Rng = rand_xoshiro::SplitMix64;

pub fn seeded(seed: u64) -> Rng {
    use rand_xoshiro::rand_core::SeedableRng;
    Rng::seed_from_u64(seed)
}

/// Uniform on `[-1, 1)`.
pub fn uniform_unit(rng: &mut Rng) -> f64 {
    ((rng.next_u64() >> 11) as f64) * (1.0 / (1u64 << 53) as f64) * 2.0 - 1.0
}

fn uniform_c64(rng: &mut Rng) -> C64 {
    let re = uniform_unit(rng);
    C64::new(re, uniform_unit(rng))
}

/// Random scalar field supported on Fock levels `≤ max_level`.
pub fn random_scalar(model: &Model, rng: &mut Rng, max_level: usize) -> ScalarField {
    let levels = model.fock().levels().to_vec();
    let data: Vec<Vec<C64>> =
        model.lambdas().iter().map(|_| levels.iter().map(|&m| if m <= max_level { uniform_c64(rng) } else { ZERO }).collect()).collect();
    ScalarField::from_fn(model, |s, _| data[s].clone())
}

/// Random `degree`-form field supported on grades `≤ max_grade`.
pub fn random_form(model: &Model, rng: &mut Rng, degree: usize, max_grade: i64) -> FormField {
    let words = words_of_degree(model.n(), degree);
    let fock = model.fock();
    let slices: Vec<SliceForm> = model
        .lambdas()
        .iter()
        .map(|&lambda| {
            words
                .iter()
                .map(|w| {
                    let v = (0..fock.dim())
                        .map(|k| if model.grade(w, fock.level(k), lambda) <= max_grade { uniform_c64(rng) } else { ZERO })
                        .collect();
                    (*w, v)
                })
                .collect()
        })
        .collect();
    FormField::from_slice_forms(model, slices)
}
