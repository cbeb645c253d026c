//! Truncated oscillator model of the group: for every sampled `λ` the
//! left-invariant fields act on Fock coefficient vectors, and forms carry
//! one such vector per basis word.
//!
//! For `λ > 0`, `B_j = √λ a_j` and `B̄_j = -√λ a_j†`; for `λ < 0`,
//! `B_j = -√|λ| a_j†` and `B̄_j = √|λ| a_j`. `T` acts as `iλ`. Creation
//! out of the top level `M` is dropped, so identities hold exactly on the
//! grade blocks that never reach past `M` (see [`Model::grade`]).

mod band;
mod config;
mod field;
mod fock;
mod ops;
mod random;

pub use band::{safe_band, ChainOp};
pub use config::{dyadic_grid, trapezoid_weights, ModelConfig};
pub use field::{FormField, FormFieldJson, ScalarField, Slice, SliceForm};
pub use fock::{fock_dim, FockBasis};
pub use ops::{CrOp, ScalarOp};
pub use random::{random_form, random_scalar, seeded, uniform_unit, Rng};

use crate::error::{Error, Result};
use crate::exterior::BasisWord;

/// The generator set of the model: configuration plus Fock tables.
#[derive(Debug, Clone)]
pub struct Model {
    cfg: ModelConfig,
    fock: FockBasis,
}

impl Model {
    pub fn new(cfg: ModelConfig) -> Result<Self> {
        cfg.validate()?;
        let fock = FockBasis::new(cfg.n, cfg.fock_max);
        Ok(Self { cfg, fock })
    }

    pub fn config(&self) -> &ModelConfig {
        &self.cfg
    }

    pub fn n(&self) -> usize {
        self.cfg.n
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.cfg.lambdas
    }

    pub fn weights(&self) -> &[f64] {
        &self.cfg.weights
    }

    pub fn fock(&self) -> &FockBasis {
        &self.fock
    }

    pub fn fock_max(&self) -> usize {
        self.cfg.fock_max
    }

    pub fn tol(&self) -> f64 {
        self.cfg.tol
    }

    /// Eigenvalue `ξ = |λ|(2m + n)` of `L` on level `m`.
    pub fn xi(&self, lambda: f64, level: usize) -> f64 {
        lambda.abs() * (2 * level + self.cfg.n) as f64
    }

    /// Weight grade of a (word, level) pair on the `λ` slice: the Fock
    /// level plus `±(|I| - |I'|)`, with the sign of `λ`. Every operator of
    /// the model preserves it.
    pub fn grade(&self, word: &BasisWord, level: usize, lambda: f64) -> i64 {
        let s = if lambda > 0.0 { 1 } else { -1 };
        level as i64 + s * word.type_offset()
    }

    /// Fock level carrying grade `w` for `word`, if representable.
    pub fn level_for_grade(&self, word: &BasisWord, grade: i64, lambda: f64) -> Option<usize> {
        let s = if lambda > 0.0 { 1 } else { -1 };
        let level = grade - s * word.type_offset();
        (0..=self.cfg.fock_max as i64).contains(&level).then_some(level as usize)
    }

    /// Largest grade whose block stays below the truncation for every
    /// form degree in `degrees` (a word of degree `k` sits at most
    /// `min(k, n)` levels above its grade).
    pub fn exact_grade_limit(&self, degrees: &[usize]) -> i64 {
        let reach = degrees.iter().map(|&k| k.min(self.cfg.n)).max().unwrap_or(0);
        self.cfg.fock_max as i64 - reach as i64
    }

    /// Zero every coefficient whose grade exceeds `max_grade`.
    pub fn restrict_grades(&self, omega: &FormField, max_grade: i64) -> FormField {
        omega.map_slices(self, |_, lambda, sf| {
            sf.iter()
                .map(|(w, v)| {
                    let v2 = v
                        .iter()
                        .enumerate()
                        .map(|(k, c)| if self.grade(w, self.fock.level(k), lambda) <= max_grade { *c } else { crate::linalg::ZERO })
                        .collect();
                    (*w, v2)
                })
                .collect()
        })
    }

    pub(crate) fn check_form(&self, omega: &FormField) -> Result<()> {
        omega.check(self)
    }

    pub(crate) fn expect_degree(&self, omega: &FormField, k: usize) -> Result<()> {
        self.check_form(omega)?;
        match omega.degree() {
            None if omega.components().is_empty() => Ok(()),
            None => Err(Error::Degree("form field of mixed degree".to_string())),
            Some(d) if d == k => Ok(()),
            Some(d) => Err(Error::Degree(format!("expected a {k}-form, got degree {d}"))),
        }
    }
}

#[cfg(test)]
mod tests;
