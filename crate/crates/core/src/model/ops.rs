use std::collections::BTreeMap;

use super::field::{axpy, FormField, ScalarField, SliceForm};
use super::Model;
use crate::error::{Error, Result};
use crate::exterior::{self, BasisWord, Form, Generator};
use crate::linalg::{C64, I, ONE, ZERO};

/// Left-invariant operators on scalar fields. Indices `j` are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalarOp {
    B(usize),
    BBar(usize),
    T,
    X(usize),
    Y(usize),
    /// Sub-Laplacian.
    L,
    Delta0,
    /// `□ = ½(L + inT)` on functions.
    Box,
    /// `□̄ = ½(L - inT)` on functions.
    BoxBar,
}

/// CR operators on horizontal form fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrOp {
    DelB,
    DelBarB,
    DelBStar,
    DelBarBStar,
    DH,
    DHStar,
    /// Scalar action `½L + i(n/2 - p)T` on `(p,q)` components.
    Box,
    /// Scalar action `½L - i(n/2 - q)T` on `(p,q)` components.
    BoxBar,
    /// `L + i(q - p)T` on `(p,q)` components.
    DeltaH,
}

fn add_into(out: &mut SliceForm, w: BasisWord, a: C64, v: &[C64]) {
    let dim = v.len();
    let slot = out.entry(w).or_insert_with(|| vec![ZERO; dim]);
    axpy(slot, a, v);
}

pub(crate) fn sf_add(a: &SliceForm, b: &SliceForm, sb: C64) -> SliceForm {
    let mut out = a.clone();
    for (w, v) in b {
        add_into(&mut out, *w, sb, v);
    }
    out
}

impl Model {
    fn check_j(&self, j: usize) -> Result<()> {
        if j == 0 || j > self.n() {
            return Err(Error::Precondition(format!("generator index {j} outside 1..={}", self.n())));
        }
        Ok(())
    }

    /// `B_j v` on the `λ` slice (1-based `j`).
    pub fn apply_b(&self, j: usize, lambda: f64, v: &[C64]) -> Vec<C64> {
        let mut out = vec![ZERO; v.len()];
        let r = lambda.abs().sqrt();
        if lambda > 0.0 {
            self.fock().annihilate(j - 1, v, r, &mut out);
        } else {
            self.fock().create(j - 1, v, -r, &mut out);
        }
        out
    }

    /// `B̄_j v` on the `λ` slice (1-based `j`).
    pub fn apply_bbar(&self, j: usize, lambda: f64, v: &[C64]) -> Vec<C64> {
        let mut out = vec![ZERO; v.len()];
        let r = lambda.abs().sqrt();
        if lambda > 0.0 {
            self.fock().create(j - 1, v, -r, &mut out);
        } else {
            self.fock().annihilate(j - 1, v, r, &mut out);
        }
        out
    }

    fn scalar_symbol(&self, op: ScalarOp, lambda: f64, level: usize) -> C64 {
        let xi = self.xi(lambda, level);
        let n = self.n() as f64;
        match op {
            ScalarOp::T => C64::new(0.0, lambda),
            ScalarOp::L => C64::from(xi),
            ScalarOp::Delta0 => C64::from(xi + lambda * lambda),
            ScalarOp::Box => C64::from(0.5 * (xi - n * lambda)),
            ScalarOp::BoxBar => C64::from(0.5 * (xi + n * lambda)),
            _ => unreachable!("not a diagonal operator"),
        }
    }

    pub fn apply_invariant_scalar_op(&self, op: ScalarOp, f: &ScalarField) -> Result<ScalarField> {
        f.check(self)?;
        let per_slice =
            |g: &(dyn Fn(f64, &[C64]) -> Vec<C64> + Sync)| ScalarField::from_fn(self, |s, lambda| g(lambda, &f.slices[s].coeffs));
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Ok(match op {
            ScalarOp::B(j) => {
                self.check_j(j)?;
                per_slice(&|l, v| self.apply_b(j, l, v))
            }
            ScalarOp::BBar(j) => {
                self.check_j(j)?;
                per_slice(&|l, v| self.apply_bbar(j, l, v))
            }
            ScalarOp::X(j) => {
                self.check_j(j)?;
                per_slice(&|l, v| {
                    let mut out = self.apply_b(j, l, v);
                    axpy(&mut out, ONE, &self.apply_bbar(j, l, v));
                    out.iter().map(|c| c * h).collect()
                })
            }
            ScalarOp::Y(j) => {
                self.check_j(j)?;
                per_slice(&|l, v| {
                    let mut out = self.apply_b(j, l, v);
                    axpy(&mut out, -ONE, &self.apply_bbar(j, l, v));
                    out.iter().map(|c| c * I * h).collect()
                })
            }
            diag => f.map_diagonal(self, |l, m| self.scalar_symbol(diag, l, m)),
        })
    }

    /// `Σ_j G_j(coeff) · (g_j ∧ word)` for the odd operators `∂_b`, `∂̄_b`.
    fn sf_wedge_op(&self, lambda: f64, sf: &SliceForm, holo: bool) -> SliceForm {
        let mut out = SliceForm::new();
        for (w, v) in sf {
            for j in 1..=self.n() {
                let g = if holo { Generator::Beta(j) } else { Generator::BetaBar(j) };
                if let Some((s, w2)) = w.left_mult(g) {
                    let bv = if holo { self.apply_b(j, lambda, v) } else { self.apply_bbar(j, lambda, v) };
                    add_into(&mut out, w2, C64::from(s), &bv);
                }
            }
        }
        out
    }

    /// Adjoints: `∂_b* = -Σ B̄_j i(β_j)`, `∂̄_b* = -Σ B_j i(β̄_j)`.
    fn sf_interior_op(&self, lambda: f64, sf: &SliceForm, holo: bool) -> SliceForm {
        let mut out = SliceForm::new();
        for (w, v) in sf {
            for j in 1..=self.n() {
                let g = if holo { Generator::Beta(j) } else { Generator::BetaBar(j) };
                if let Some((s, w2)) = w.interior(g) {
                    let bv = if holo { self.apply_bbar(j, lambda, v) } else { self.apply_b(j, lambda, v) };
                    add_into(&mut out, w2, C64::from(-s), &bv);
                }
            }
        }
        out
    }

    pub(crate) fn sf_del_b(&self, lambda: f64, sf: &SliceForm) -> SliceForm {
        self.sf_wedge_op(lambda, sf, true)
    }

    pub(crate) fn sf_del_bar(&self, lambda: f64, sf: &SliceForm) -> SliceForm {
        self.sf_wedge_op(lambda, sf, false)
    }

    pub(crate) fn sf_del_b_star(&self, lambda: f64, sf: &SliceForm) -> SliceForm {
        self.sf_interior_op(lambda, sf, true)
    }

    pub(crate) fn sf_del_bar_star(&self, lambda: f64, sf: &SliceForm) -> SliceForm {
        self.sf_interior_op(lambda, sf, false)
    }

    fn sf_dh(&self, lambda: f64, sf: &SliceForm) -> SliceForm {
        sf_add(&self.sf_del_b(lambda, sf), &self.sf_del_bar(lambda, sf), ONE)
    }

    fn sf_dh_star(&self, lambda: f64, sf: &SliceForm) -> SliceForm {
        sf_add(&self.sf_del_b_star(lambda, sf), &self.sf_del_bar_star(lambda, sf), ONE)
    }

    /// Multiply each component by `symbol(word, λ, level)`.
    pub(crate) fn sf_diag(&self, lambda: f64, sf: &SliceForm, symbol: impl Fn(&BasisWord, f64, usize) -> C64) -> SliceForm {
        let levels = self.fock().levels();
        sf.iter().map(|(w, v)| (*w, v.iter().zip(levels).map(|(c, &m)| c * symbol(w, lambda, m)).collect())).collect()
    }

    /// Apply a constant-coefficient map of the exterior algebra.
    pub(crate) fn sf_const(&self, sf: &SliceForm, op: impl Fn(&Form) -> Form) -> SliceForm {
        let mut out = SliceForm::new();
        for (w, v) in sf {
            for (w2, c) in op(&Form::from_word(*w, ONE)).terms() {
                add_into(&mut out, *w2, *c, v);
            }
        }
        out
    }

    /// `(ω₁, ω₂)` with `ω = ω₁ + θ ∧ ω₂`.
    fn split_theta(sf: &SliceForm) -> (SliceForm, SliceForm) {
        let mut h = SliceForm::new();
        let mut t = SliceForm::new();
        for (w, v) in sf {
            match w.interior(Generator::Theta) {
                Some((_, w2)) => {
                    t.insert(w2, v.clone());
                }
                None => {
                    h.insert(*w, v.clone());
                }
            }
        }
        (h, t)
    }

    fn theta_wedge(sf: &SliceForm) -> SliceForm {
        sf.iter().map(|(w, v)| (w.left_mult(Generator::Theta).expect("horizontal word").1, v.clone())).collect()
    }

    fn sf_t(lambda: f64, sf: &SliceForm) -> SliceForm {
        let t = C64::new(0.0, lambda);
        sf.iter().map(|(w, v)| (*w, v.iter().map(|c| c * t).collect())).collect()
    }

    /// `d(ω₁ + θ∧ω₂) = (d_Hω₁ + e(dθ)ω₂) + θ∧(Tω₁ - d_Hω₂)`.
    pub(crate) fn sf_d(&self, lambda: f64, sf: &SliceForm) -> SliceForm {
        let (w1, w2) = Self::split_theta(sf);
        let horizontal = sf_add(&self.sf_dh(lambda, &w1), &self.sf_const(&w2, exterior::e_dtheta), ONE);
        let vertical = sf_add(&Self::sf_t(lambda, &w1), &self.sf_dh(lambda, &w2), -ONE);
        sf_add(&horizontal, &Self::theta_wedge(&vertical), ONE)
    }

    /// `d*(ω₁ + θ∧ω₂) = (d_H*ω₁ - Tω₂) + θ∧(i(dθ)ω₁ - d_H*ω₂)`.
    pub(crate) fn sf_d_star(&self, lambda: f64, sf: &SliceForm) -> SliceForm {
        let (w1, w2) = Self::split_theta(sf);
        let horizontal = sf_add(&self.sf_dh_star(lambda, &w1), &Self::sf_t(lambda, &w2), -ONE);
        let vertical = sf_add(&self.sf_const(&w1, exterior::i_dtheta), &self.sf_dh_star(lambda, &w2), -ONE);
        sf_add(&horizontal, &Self::theta_wedge(&vertical), ONE)
    }

    /// `Δ₁` on `ω₊ + ω₋ + hθ` by the block matrix with rows
    /// `(Δ₀-iT)ω₊ - i∂_b h`, `(Δ₀+iT)ω₋ + i∂̄_b h`,
    /// `i∂_b*ω₊ - i∂̄_b*ω₋ + (Δ₀+n)h`.
    pub(crate) fn sf_hodge1(&self, lambda: f64, sf: &SliceForm) -> SliceForm {
        let n = self.n();
        let theta = BasisWord::theta(n);
        let plus: SliceForm = sf.iter().filter(|(w, _)| !w.has_theta() && w.bidegree() == (1, 0)).map(|(w, v)| (*w, v.clone())).collect();
        let minus: SliceForm = sf.iter().filter(|(w, _)| !w.has_theta() && w.bidegree() == (0, 1)).map(|(w, v)| (*w, v.clone())).collect();
        let mut h = SliceForm::new();
        if let Some(v) = sf.get(&theta) {
            h.insert(BasisWord::scalar(n), v.clone());
        }
        let d0 = |w: &BasisWord, l: f64, m: usize| {
            let base = self.xi(l, m) + l * l;
            // iT ↦ -λ
            match w.bidegree() {
                (1, 0) => C64::from(base + l),
                (0, 1) => C64::from(base - l),
                _ => C64::from(base + n as f64),
            }
        };
        let mut out = self.sf_diag(lambda, &plus, d0);
        out = sf_add(&out, &self.sf_diag(lambda, &minus, d0), ONE);
        out = sf_add(&out, &self.sf_del_b(lambda, &h), -I);
        out = sf_add(&out, &self.sf_del_bar(lambda, &h), I);
        let mut hh = self.sf_diag(lambda, &h, d0);
        hh = sf_add(&hh, &self.sf_del_b_star(lambda, &plus), I);
        hh = sf_add(&hh, &self.sf_del_bar_star(lambda, &minus), -I);
        if let Some(v) = hh.remove(&BasisWord::scalar(n)) {
            add_into(&mut out, theta, ONE, &v);
        }
        out
    }

    fn require_horizontal(&self, omega: &FormField) -> Result<()> {
        self.check_form(omega)?;
        if omega.components().keys().any(BasisWord::has_theta) {
            return Err(Error::Degree("CR operators act on horizontal forms only".to_string()));
        }
        if omega.degree().is_none() && !omega.components().is_empty() {
            return Err(Error::Degree("form field of mixed degree".to_string()));
        }
        Ok(())
    }

    pub fn apply_cr_op(&self, op: CrOp, omega: &FormField) -> Result<FormField> {
        self.require_horizontal(omega)?;
        let n = self.n() as f64;
        Ok(omega.map_slices(self, |_, lambda, sf| match op {
            CrOp::DelB => self.sf_del_b(lambda, sf),
            CrOp::DelBarB => self.sf_del_bar(lambda, sf),
            CrOp::DelBStar => self.sf_del_b_star(lambda, sf),
            CrOp::DelBarBStar => self.sf_del_bar_star(lambda, sf),
            CrOp::DH => self.sf_dh(lambda, sf),
            CrOp::DHStar => self.sf_dh_star(lambda, sf),
            CrOp::Box => self.sf_diag(lambda, sf, |w, l, m| {
                let p = w.bidegree().0 as f64;
                C64::from(0.5 * self.xi(l, m) - (0.5 * n - p) * l)
            }),
            CrOp::BoxBar => self.sf_diag(lambda, sf, |w, l, m| {
                let q = w.bidegree().1 as f64;
                C64::from(0.5 * self.xi(l, m) + (0.5 * n - q) * l)
            }),
            CrOp::DeltaH => self.sf_diag(lambda, sf, |w, l, m| {
                let (p, q) = w.bidegree();
                C64::from(self.xi(l, m) - (q as f64 - p as f64) * l)
            }),
        }))
    }

    /// Exterior derivative of a `k`-form field.
    pub fn apply_d(&self, omega: &FormField, k: usize) -> Result<FormField> {
        self.expect_degree(omega, k)?;
        if k > 2 * self.n() {
            return Err(Error::Degree(format!("degree {k} exceeds 2n = {}", 2 * self.n())));
        }
        Ok(omega.map_slices(self, |_, lambda, sf| self.sf_d(lambda, sf)))
    }

    /// Formal adjoint of [`Model::apply_d`] on `k`-form fields.
    pub fn apply_d_star(&self, omega: &FormField, k: usize) -> Result<FormField> {
        self.expect_degree(omega, k)?;
        if k == 0 || k > 2 * self.n() + 1 {
            return Err(Error::Degree(format!("d* needs 1 <= k <= {}, got {k}", 2 * self.n() + 1)));
        }
        Ok(omega.map_slices(self, |_, lambda, sf| self.sf_d_star(lambda, sf)))
    }

    /// `Δ₀` (k = 0, diagonal) or `Δ₁` (k = 1, block formula).
    pub fn apply_hodge(&self, k: usize, omega: &FormField) -> Result<FormField> {
        self.expect_degree(omega, k)?;
        match k {
            0 => Ok(omega.map_slices(self, |_, lambda, sf| self.sf_diag(lambda, sf, |_, l, m| C64::from(self.xi(l, m) + l * l)))),
            1 => Ok(omega.map_slices(self, |_, lambda, sf| self.sf_hodge1(lambda, sf))),
            _ => Err(Error::Unsupported(format!("closed form of Δ_{k}; use hodge_by_composition"))),
        }
    }

    /// `dd* + d*d` on `k`-form fields.
    pub fn hodge_by_composition(&self, omega: &FormField, k: usize) -> Result<FormField> {
        self.expect_degree(omega, k)?;
        Ok(omega.map_slices(self, |_, lambda, sf| {
            let a = if k > 0 { self.sf_d(lambda, &self.sf_d_star(lambda, sf)) } else { SliceForm::new() };
            let b = self.sf_d_star(lambda, &self.sf_d(lambda, sf));
            sf_add(&a, &b, ONE)
        }))
    }

    /// `T` acting componentwise.
    pub fn apply_t(&self, omega: &FormField) -> FormField {
        omega.map_slices(self, |_, lambda, sf| Self::sf_t(lambda, sf))
    }

    /// `e(dθ)` acting on the exterior factor.
    pub fn apply_e_dtheta(&self, omega: &FormField) -> FormField {
        omega.map_slices(self, |_, _, sf| self.sf_const(sf, exterior::e_dtheta))
    }

    /// `i(dθ)` acting on the exterior factor.
    pub fn apply_i_dtheta(&self, omega: &FormField) -> FormField {
        omega.map_slices(self, |_, _, sf| self.sf_const(sf, exterior::i_dtheta))
    }

    /// Scalar field as a 0-form.
    pub fn zero_form(&self, f: ScalarField) -> FormField {
        FormField::from_scalar(BasisWord::scalar(self.n()), f)
    }

    /// Coefficient of the empty word.
    pub fn scalar_part(&self, omega: &FormField) -> ScalarField {
        omega.coefficient(self, &BasisWord::scalar(self.n()))
    }

    /// `(ω₊, ω₋, h)` of a 1-form field.
    pub fn split_one_form(&self, omega: &FormField) -> (FormField, FormField, ScalarField) {
        let plus = omega.filter_words(|w| !w.has_theta() && w.bidegree() == (1, 0));
        let minus = omega.filter_words(|w| !w.has_theta() && w.bidegree() == (0, 1));
        let h = omega.coefficient(self, &BasisWord::theta(self.n()));
        (plus, minus, h)
    }

    /// `hθ` as a 1-form field.
    pub fn theta_form(&self, h: ScalarField) -> FormField {
        FormField::from_scalar(BasisWord::theta(self.n()), h)
    }

    /// Build a form field slice by slice from raw per-word vectors.
    pub fn form_from_slices(&self, slices: Vec<BTreeMap<BasisWord, Vec<C64>>>) -> FormField {
        FormField::from_slice_forms(self, slices)
    }
}
