use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::Model;
use crate::error::{Error, Result};
use crate::exterior::BasisWord;
use crate::linalg::{C64, ZERO};

/// One `λ`-slice of a scalar field: coefficients over the Fock basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Slice {
    pub lambda: f64,
    pub coeffs: Vec<C64>,
}

/// A scalar function on the group, one [`Slice`] per grid value of `λ`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    pub slices: Vec<Slice>,
}

/// Coefficient vectors of a form field on a single slice.
pub type SliceForm = BTreeMap<BasisWord, Vec<C64>>;

/// A form whose coefficients are scalar fields. Absent words are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct FormField {
    n: usize,
    components: BTreeMap<BasisWord, ScalarField>,
}

pub(crate) fn axpy(out: &mut [C64], a: C64, x: &[C64]) {
    for (o, v) in out.iter_mut().zip(x) {
        *o += a * v;
    }
}

impl ScalarField {
    pub fn zeros(model: &Model) -> Self {
        let dim = model.fock().dim();
        Self { slices: model.lambdas().iter().map(|&lambda| Slice { lambda, coeffs: vec![ZERO; dim] }).collect() }
    }

    /// Build slice by slice from `f(slice index, λ) -> coefficients`.
    pub fn from_fn<F: Fn(usize, f64) -> Vec<C64> + Sync>(model: &Model, f: F) -> Self {
        let slices = model.lambdas().par_iter().enumerate().map(|(s, &lambda)| Slice { lambda, coeffs: f(s, lambda) }).collect();
        Self { slices }
    }

    /// Multiply each Fock coefficient by `symbol(λ, level)`.
    pub fn map_diagonal<F: Fn(f64, usize) -> C64 + Sync>(&self, model: &Model, symbol: F) -> Self {
        let levels = model.fock().levels();
        let slices = self
            .slices
            .par_iter()
            .map(|sl| Slice { lambda: sl.lambda, coeffs: sl.coeffs.iter().zip(levels).map(|(c, &m)| c * symbol(sl.lambda, m)).collect() })
            .collect();
        Self { slices }
    }

    pub fn check(&self, model: &Model) -> Result<()> {
        let grid = model.lambdas();
        if self.slices.len() != grid.len() {
            return Err(Error::Shape(format!("{} slices for a grid of {}", self.slices.len(), grid.len())));
        }
        for (sl, &l) in self.slices.iter().zip(grid) {
            if sl.lambda != l {
                return Err(Error::Shape(format!("slice lambda {} does not match grid value {}", sl.lambda, l)));
            }
            if sl.coeffs.len() != model.fock().dim() {
                return Err(Error::Shape(format!("slice of length {} (expected {})", sl.coeffs.len(), model.fock().dim())));
            }
        }
        Ok(())
    }

    fn zip_with(&self, other: &Self, f: impl Fn(C64, C64) -> C64) -> Self {
        let slices = self
            .slices
            .iter()
            .zip(&other.slices)
            .map(|(a, b)| Slice { lambda: a.lambda, coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| f(*x, *y)).collect() })
            .collect();
        Self { slices }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |x, y| x + y)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |x, y| x - y)
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            slices: self.slices.iter().map(|sl| Slice { lambda: sl.lambda, coeffs: sl.coeffs.iter().map(|c| c * s).collect() }).collect(),
        }
    }

    /// `Σ_λ w(λ) Σ_α f_α conj(g_α)`.
    pub fn inner(&self, model: &Model, other: &Self) -> C64 {
        self.slices
            .iter()
            .zip(&other.slices)
            .zip(model.weights())
            .map(|((a, b), w)| a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x * y.conj()).sum::<C64>() * *w)
            .sum()
    }

    pub fn norm(&self, model: &Model) -> f64 {
        self.inner(model, self).re.max(0.0).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.slices.iter().flat_map(|s| s.coeffs.iter()).map(|c| c.norm()).fold(0.0, f64::max)
    }
}

impl FormField {
    pub fn zero(n: usize) -> Self {
        Self { n, components: BTreeMap::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn from_components(model: &Model, components: BTreeMap<BasisWord, ScalarField>) -> Result<Self> {
        for (w, f) in &components {
            if w.n() != model.n() {
                return Err(Error::Dimension { expected: model.n(), found: w.n() });
            }
            f.check(model)?;
        }
        Ok(Self { n: model.n(), components })
    }

    /// `f · word`.
    pub fn from_scalar(word: BasisWord, f: ScalarField) -> Self {
        let mut components = BTreeMap::new();
        components.insert(word, f);
        Self { n: word.n(), components }
    }

    pub fn components(&self) -> &BTreeMap<BasisWord, ScalarField> {
        &self.components
    }

    pub fn component(&self, w: &BasisWord) -> Option<&ScalarField> {
        self.components.get(w)
    }

    /// Coefficient field of `w`, zero when absent.
    pub fn coefficient(&self, model: &Model, w: &BasisWord) -> ScalarField {
        self.components.get(w).cloned().unwrap_or_else(|| ScalarField::zeros(model))
    }

    pub fn check(&self, model: &Model) -> Result<()> {
        if self.n != model.n() {
            return Err(Error::Dimension { expected: model.n(), found: self.n });
        }
        self.components.values().try_for_each(|f| f.check(model))
    }

    /// Common degree of the components; `None` for zero or mixed fields.
    pub fn degree(&self) -> Option<usize> {
        let mut it = self.components.keys().map(BasisWord::degree);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn slice_form(&self, s: usize) -> SliceForm {
        self.components.iter().map(|(w, f)| (*w, f.slices[s].coeffs.clone())).collect()
    }

    /// Reassemble from per-slice forms; components identically zero are dropped.
    pub fn from_slice_forms(model: &Model, slices: Vec<SliceForm>) -> Self {
        let dim = model.fock().dim();
        let mut components: BTreeMap<BasisWord, ScalarField> = BTreeMap::new();
        for w in slices.iter().flat_map(|sf| sf.keys()) {
            components.entry(*w).or_insert_with(|| ScalarField::zeros(model));
        }
        for (w, field) in components.iter_mut() {
            for (s, sf) in slices.iter().enumerate() {
                field.slices[s].coeffs = sf.get(w).cloned().unwrap_or_else(|| vec![ZERO; dim]);
            }
        }
        components.retain(|_, f| f.max_abs() > 0.0);
        Self { n: model.n(), components }
    }

    /// Apply `op` to every slice in parallel.
    pub fn map_slices<F>(&self, model: &Model, op: F) -> Self
    where
        F: Fn(usize, f64, &SliceForm) -> SliceForm + Sync,
    {
        let out: Vec<SliceForm> = model.lambdas().par_iter().enumerate().map(|(s, &lambda)| op(s, lambda, &self.slice_form(s))).collect();
        Self::from_slice_forms(model, out)
    }

    fn merge(&self, other: &Self, f: impl Fn(&ScalarField, &ScalarField) -> ScalarField, model: &Model) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::Dimension { expected: self.n, found: other.n });
        }
        let zero = ScalarField::zeros(model);
        let mut components = BTreeMap::new();
        for w in self.components.keys().chain(other.components.keys()) {
            if components.contains_key(w) {
                continue;
            }
            let a = self.components.get(w).unwrap_or(&zero);
            let b = other.components.get(w).unwrap_or(&zero);
            components.insert(*w, f(a, b));
        }
        Ok(Self { n: self.n, components })
    }

    pub fn add(&self, model: &Model, other: &Self) -> Result<Self> {
        self.merge(other, ScalarField::add, model)
    }

    pub fn sub(&self, model: &Model, other: &Self) -> Result<Self> {
        self.merge(other, ScalarField::sub, model)
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { n: self.n, components: self.components.iter().map(|(w, f)| (*w, f.scale(s))).collect() }
    }

    /// Keep only the components whose word satisfies `keep`.
    pub fn filter_words(&self, keep: impl Fn(&BasisWord) -> bool) -> Self {
        Self { n: self.n, components: self.components.iter().filter(|(w, _)| keep(w)).map(|(w, f)| (*w, f.clone())).collect() }
    }

    pub fn inner(&self, model: &Model, other: &Self) -> C64 {
        self.components.iter().filter_map(|(w, f)| other.components.get(w).map(|g| f.inner(model, g))).sum()
    }

    pub fn norm(&self, model: &Model) -> f64 {
        self.inner(model, self).re.max(0.0).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.components.values().map(ScalarField::max_abs).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct SliceJson {
    lambda: f64,
    re: Vec<f64>,
    im: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ComponentJson {
    word: (Vec<usize>, Vec<usize>, bool),
    slices: Vec<SliceJson>,
}

/// On-disk layout of a [`FormField`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FormFieldJson {
    pub n: usize,
    pub lambdas: Vec<f64>,
    pub fock_max: usize,
    components: Vec<ComponentJson>,
}

impl FormField {
    pub fn to_json(&self, model: &Model) -> FormFieldJson {
        let components = self
            .components
            .iter()
            .map(|(w, f)| ComponentJson {
                word: w.to_triple(),
                slices: f
                    .slices
                    .iter()
                    .map(|s| SliceJson {
                        lambda: s.lambda,
                        re: s.coeffs.iter().map(|c| c.re).collect(),
                        im: s.coeffs.iter().map(|c| c.im).collect(),
                    })
                    .collect(),
            })
            .collect();
        FormFieldJson { n: self.n, lambdas: model.lambdas().to_vec(), fock_max: model.fock().max_level(), components }
    }

    pub fn from_json(model: &Model, json: &FormFieldJson) -> Result<Self> {
        if json.n != model.n() {
            return Err(Error::Dimension { expected: model.n(), found: json.n });
        }
        if json.lambdas != model.lambdas() || json.fock_max != model.fock().max_level() {
            return Err(Error::Shape("lambda grid or Fock truncation differs from the model".to_string()));
        }
        let mut components = BTreeMap::new();
        for c in &json.components {
            let w = BasisWord::from_triple(model.n(), &c.word)?;
            let slices = c
                .slices
                .iter()
                .map(|s| {
                    if s.re.len() != s.im.len() {
                        return Err(Error::Shape("re/im arrays differ in length".to_string()));
                    }
                    Ok(Slice { lambda: s.lambda, coeffs: s.re.iter().zip(&s.im).map(|(r, i)| C64::new(*r, *i)).collect() })
                })
                .collect::<Result<Vec<_>>>()?;
            let field = ScalarField { slices };
            field.check(model)?;
            components.insert(w, field);
        }
        Ok(Self { n: model.n(), components })
    }
}
