//! Functional calculus of `Δ₁`: the five-term assembly over the orthogonal
//! splitting, a dense per-block eigendecomposition used as an independent
//! oracle, and the scalar calculi it is built from.

mod spec;

pub use spec::{smooth_step, MultiplierSpec};

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use crate::decomposition::{
    apply_gamma, apply_gamma_adjoint, apply_r, apply_r_adjoint, apply_s, apply_s_adjoint, apply_table, apply_table_form, phi_symbol,
    project, project_l2_0, symbol_table, Branch, Space,
};
use crate::error::{Error, Result};
use crate::exterior::{words_of_degree, BasisWord};
use crate::linalg::{hermitian_defect, hermitian_eigen, C64, ONE, ZERO};
use crate::model::{FormField, Model, ScalarField, SliceForm};

/// Scalar operators with a diagonal fan symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ScalarCalcOp {
    /// `ξ + λ²`.
    Delta0,
    /// `Δ₀ - iT ↦ ξ + λ² + λ`.
    Delta0MinusIT,
    /// `Δ₀ + iT ↦ ξ + λ² - λ`.
    Delta0PlusIT,
    /// `Φ₊ ↦ ξ + λ² + n/2 + √(ξ + λ² + n²/4)`.
    PhiPlus,
    /// `Φ₋ ↦ ξ + λ² + n/2 - √(ξ + λ² + n²/4)`.
    PhiMinus,
}

impl ScalarCalcOp {
    pub fn symbol(self, n: usize, lambda: f64, xi: f64) -> f64 {
        let d = xi + lambda * lambda;
        match self {
            ScalarCalcOp::Delta0 => d,
            ScalarCalcOp::Delta0MinusIT => d + lambda,
            ScalarCalcOp::Delta0PlusIT => d - lambda,
            ScalarCalcOp::PhiPlus => phi_symbol(n, lambda, xi, true),
            ScalarCalcOp::PhiMinus => phi_symbol(n, lambda, xi, false),
        }
    }
}

fn multiplier_table(model: &Model, m: &MultiplierSpec, op: ScalarCalcOp) -> Result<Vec<Vec<C64>>> {
    symbol_table(model, |l, lev| m.eval(op.symbol(model.n(), l, model.xi(l, lev))))
}

/// `m(op) f`.
pub fn scalar_calculus(model: &Model, m: &MultiplierSpec, op: ScalarCalcOp, f: &ScalarField) -> Result<ScalarField> {
    f.check(model)?;
    Ok(apply_table(model, f, &multiplier_table(model, m, op)?))
}

/// `m(Δ₁)ω` assembled as
/// `R m(Δ₀) R*ω + m(Δ₀-iT)P₂⁺ω + m(Δ₀+iT)P₂⁻ω + Σ± ΓS± m(Φ±) S±*Γ*P₃ω`.
pub fn m_delta1_assembled(model: &Model, m: &MultiplierSpec, omega: &FormField) -> Result<FormField> {
    model.expect_degree(omega, 1)?;
    let exact = apply_r(model, &scalar_calculus(model, m, ScalarCalcOp::Delta0, &apply_r_adjoint(model, omega)?)?)?;
    let p2p = apply_table_form(model, &project(model, Space::P2Plus, omega)?, &multiplier_table(model, m, ScalarCalcOp::Delta0MinusIT)?);
    let p2m = apply_table_form(model, &project(model, Space::P2Minus, omega)?, &multiplier_table(model, m, ScalarCalcOp::Delta0PlusIT)?);
    let p3 = omega
        .sub(model, &project(model, Space::P1, omega)?)?
        .sub(model, &project(model, Space::P2Plus, omega)?)?
        .sub(model, &project(model, Space::P2Minus, omega)?)?;
    let t = apply_gamma_adjoint(model, &p3)?;
    let mut out = exact.add(model, &p2p)?.add(model, &p2m)?;
    for (branch, op) in [(Branch::Plus, ScalarCalcOp::PhiPlus), (Branch::Minus, ScalarCalcOp::PhiMinus)] {
        let f = scalar_calculus(model, m, op, &apply_s_adjoint(model, branch, &t)?)?;
        let f = if branch == Branch::Minus { project_l2_0(model, &f) } else { f };
        out = out.add(model, &apply_gamma(model, &apply_s(model, branch, &f)?)?)?;
    }
    Ok(out)
}

/// The dense matrix of `Δ₁` on one grade block of one slice.
#[derive(Debug, Clone)]
pub struct Delta1Block {
    pub slice: usize,
    pub lambda: f64,
    pub grade: i64,
    /// `(word, Fock index)` of each row/column.
    pub entries: Vec<(BasisWord, usize)>,
    pub matrix: DMatrix<C64>,
}

/// Hermitian defect above which a block is reported as inconsistent.
pub const BLOCK_HERMITIAN_TOL: f64 = 1e-10;

/// All grade blocks of 1-forms on slice `s` with grade `≤ M - 1`.
pub fn delta1_blocks(model: &Model, s: usize) -> Result<Vec<Delta1Block>> {
    let lambda = *model.lambdas().get(s).ok_or_else(|| Error::Precondition(format!("slice {s} out of range")))?;
    let words = words_of_degree(model.n(), 1);
    let fock = model.fock();
    let top = model.exact_grade_limit(&[1]);
    let mut by_grade: std::collections::BTreeMap<i64, Vec<(BasisWord, usize)>> = Default::default();
    for w in &words {
        for k in 0..fock.dim() {
            let g = model.grade(w, fock.level(k), lambda);
            if g <= top {
                by_grade.entry(g).or_default().push((*w, k));
            }
        }
    }
    let mut blocks = Vec::with_capacity(by_grade.len());
    for (grade, entries) in by_grade {
        let dim = entries.len();
        let mut matrix = DMatrix::<C64>::zeros(dim, dim);
        for (j, (w, k)) in entries.iter().enumerate() {
            let mut unit = vec![ZERO; fock.dim()];
            unit[*k] = ONE;
            let mut sf = SliceForm::new();
            sf.insert(*w, unit);
            let image = model.sf_hodge1(lambda, &sf);
            let mut captured = 0.0;
            for (i, (w2, k2)) in entries.iter().enumerate() {
                if let Some(v) = image.get(w2) {
                    matrix[(i, j)] = v[*k2];
                    captured += v[*k2].norm_sqr();
                }
            }
            let total: f64 = image.values().flat_map(|v| v.iter()).map(|c| c.norm_sqr()).sum();
            if (total - captured).abs() > BLOCK_HERMITIAN_TOL * total.max(1.0) {
                return Err(Error::Consistency(format!("Δ₁ leaks out of grade block {grade} at λ = {lambda}")));
            }
        }
        let defect = hermitian_defect(&matrix);
        let scale = matrix.iter().map(|z| z.norm()).fold(1.0, f64::max);
        if defect > BLOCK_HERMITIAN_TOL * scale {
            return Err(Error::Consistency(format!("grade block {grade} at λ = {lambda} not hermitian: defect {defect:e}")));
        }
        blocks.push(Delta1Block { slice: s, lambda, grade, entries, matrix });
    }
    Ok(blocks)
}

/// `m(Δ₁)ω` by dense eigendecomposition of each grade block. Entries with
/// grade `≥ M` are not represented exactly and come back as zero.
pub fn m_delta1_oracle(model: &Model, m: &MultiplierSpec, omega: &FormField) -> Result<FormField> {
    model.expect_degree(omega, 1)?;
    let dim = model.fock().dim();
    let slices: Vec<SliceForm> = (0..model.lambdas().len())
        .into_par_iter()
        .map(|s| -> Result<SliceForm> {
            let input = omega.slice_form(s);
            let mut out: SliceForm = words_of_degree(model.n(), 1).into_iter().map(|w| (w, vec![ZERO; dim])).collect();
            for block in delta1_blocks(model, s)? {
                let x =
                    DVector::from_iterator(block.entries.len(), block.entries.iter().map(|(w, k)| input.get(w).map_or(ZERO, |v| v[*k])));
                if x.iter().all(|c| *c == ZERO) {
                    continue;
                }
                let eig = hermitian_eigen(&block.matrix);
                let values = eig.values.iter().map(|&e| m.eval(e)).collect::<Result<Vec<_>>>()?;
                let coeffs = eig.vectors.adjoint() * &x;
                let y = &eig.vectors * DVector::from_iterator(values.len(), values.iter().zip(coeffs.iter()).map(|(a, b)| a * b));
                for ((w, k), c) in block.entries.iter().zip(y.iter()) {
                    out.get_mut(w).expect("1-form word")[*k] = *c;
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    Ok(FormField::from_slice_forms(model, slices))
}

#[cfg(test)]
mod tests;
