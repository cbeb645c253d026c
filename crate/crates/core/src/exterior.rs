//! Constant-coefficient exterior algebra over the complexified coframe
//! `θ, β_1..β_n, β̄_1..β̄_n` of the Heisenberg Lie algebra.
//!
//! Basis words are kept in canonical order: `θ` first (when present), then
//! holomorphic factors `β_j` ascending, then antiholomorphic factors `β̄_j`
//! ascending. The words form an orthonormal basis for the hermitian inner
//! product.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{C64, I, ZERO};

/// Coefficients smaller than this are dropped from a [`Form`].
pub const PRUNE_TOL: f64 = 1e-12;

/// Largest supported `n` (subsets are stored as 16-bit masks).
pub const MAX_N: usize = 15;

/// One factor of a basis word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Generator {
    Theta,
    Beta(usize),
    BetaBar(usize),
}

impl Generator {
    /// Position in the canonical ordering `θ < β_1 < .. < β_n < β̄_1 < .. < β̄_n`.
    fn rank(self, n: usize) -> usize {
        match self {
            Generator::Theta => 0,
            Generator::Beta(j) => j,
            Generator::BetaBar(j) => n + j,
        }
    }
}

/// A basis word `[θ ∧] β^I ∧ β̄^I'`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BasisWord {
    n: u8,
    theta: bool,
    hol: u16,
    antihol: u16,
}

fn mask_from(n: usize, idx: &[usize]) -> Result<u16> {
    let mut mask = 0u16;
    let mut prev = 0usize;
    for &j in idx {
        if j == 0 || j > n {
            return Err(Error::Degree(format!("index {j} outside 1..={n}")));
        }
        if j <= prev {
            return Err(Error::Degree(format!("indices {idx:?} are not strictly increasing")));
        }
        prev = j;
        mask |= 1 << (j - 1);
    }
    Ok(mask)
}

fn mask_indices(mask: u16) -> Vec<usize> {
    (0..16).filter(|b| mask & (1 << b) != 0).map(|b| b + 1).collect()
}

impl BasisWord {
    pub fn new(n: usize, hol: &[usize], antihol: &[usize], theta: bool) -> Result<Self> {
        if n == 0 || n > MAX_N {
            return Err(Error::Config(format!("n = {n} outside 1..={MAX_N}")));
        }
        Ok(Self { n: n as u8, theta, hol: mask_from(n, hol)?, antihol: mask_from(n, antihol)? })
    }

    pub fn scalar(n: usize) -> Self {
        Self { n: n as u8, theta: false, hol: 0, antihol: 0 }
    }

    pub fn theta(n: usize) -> Self {
        Self { n: n as u8, theta: true, hol: 0, antihol: 0 }
    }

    pub fn beta(n: usize, j: usize) -> Self {
        assert!(j >= 1 && j <= n);
        Self { n: n as u8, theta: false, hol: 1 << (j - 1), antihol: 0 }
    }

    pub fn beta_bar(n: usize, j: usize) -> Self {
        assert!(j >= 1 && j <= n);
        Self { n: n as u8, theta: false, hol: 0, antihol: 1 << (j - 1) }
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn has_theta(&self) -> bool {
        self.theta
    }

    pub fn hol_indices(&self) -> Vec<usize> {
        mask_indices(self.hol)
    }

    pub fn antihol_indices(&self) -> Vec<usize> {
        mask_indices(self.antihol)
    }

    /// `(|I|, |I'|)`, ignoring any `θ` factor.
    pub fn bidegree(&self) -> (usize, usize) {
        (self.hol.count_ones() as usize, self.antihol.count_ones() as usize)
    }

    pub fn degree(&self) -> usize {
        let (p, q) = self.bidegree();
        p + q + usize::from(self.theta)
    }

    /// Holomorphic minus antiholomorphic degree; enters the weight grade
    /// of the oscillator model.
    pub fn type_offset(&self) -> i64 {
        let (p, q) = self.bidegree();
        p as i64 - q as i64
    }

    pub fn contains(&self, g: Generator) -> bool {
        match g {
            Generator::Theta => self.theta,
            Generator::Beta(j) => self.hol & (1 << (j - 1)) != 0,
            Generator::BetaBar(j) => self.antihol & (1 << (j - 1)) != 0,
        }
    }

    /// Factors in canonical order.
    pub fn generators(&self) -> Vec<Generator> {
        let mut out = Vec::with_capacity(self.degree());
        if self.theta {
            out.push(Generator::Theta);
        }
        out.extend(self.hol_indices().into_iter().map(Generator::Beta));
        out.extend(self.antihol_indices().into_iter().map(Generator::BetaBar));
        out
    }

    fn count_before(&self, g: Generator) -> usize {
        let n = self.n();
        let r = g.rank(n);
        self.generators().iter().filter(|h| h.rank(n) < r).count()
    }

    fn toggled(&self, g: Generator) -> Self {
        let mut w = *self;
        match g {
            Generator::Theta => w.theta = !w.theta,
            Generator::Beta(j) => w.hol ^= 1 << (j - 1),
            Generator::BetaBar(j) => w.antihol ^= 1 << (j - 1),
        }
        w
    }

    /// `g ∧ word`, normalised to canonical order: `(sign, word)` or `None`
    /// when `g` already occurs.
    pub fn left_mult(&self, g: Generator) -> Option<(f64, BasisWord)> {
        if self.contains(g) {
            return None;
        }
        let sign = if self.count_before(g).is_multiple_of(2) { 1.0 } else { -1.0 };
        Some((sign, self.toggled(g)))
    }

    /// Interior product `g ⌟ word`, the adjoint of `left_mult(g)`.
    pub fn interior(&self, g: Generator) -> Option<(f64, BasisWord)> {
        if !self.contains(g) {
            return None;
        }
        let sign = if self.count_before(g).is_multiple_of(2) { 1.0 } else { -1.0 };
        Some((sign, self.toggled(g)))
    }

    /// `(I, I', hasTheta)` as used in the JSON dumps.
    pub fn to_triple(&self) -> (Vec<usize>, Vec<usize>, bool) {
        (self.hol_indices(), self.antihol_indices(), self.theta)
    }

    pub fn from_triple(n: usize, t: &(Vec<usize>, Vec<usize>, bool)) -> Result<Self> {
        Self::new(n, &t.0, &t.1, t.2)
    }

    fn sort_key(&self) -> (usize, bool, Vec<usize>, Vec<usize>) {
        (self.degree(), self.theta, self.hol_indices(), self.antihol_indices())
    }
}

impl PartialOrd for BasisWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BasisWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n.cmp(&other.n).then_with(|| self.sort_key().cmp(&other.sort_key()))
    }
}

impl std::fmt::Display for BasisWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let gens = self.generators();
        if gens.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = gens
            .iter()
            .map(|g| match g {
                Generator::Theta => "θ".to_string(),
                Generator::Beta(j) => format!("β{j}"),
                Generator::BetaBar(j) => format!("β̄{j}"),
            })
            .collect();
        write!(f, "{}", parts.join("∧"))
    }
}

/// All horizontal words of bidegree `(p, q)`.
pub fn words_of_bidegree(n: usize, p: usize, q: usize) -> Vec<BasisWord> {
    let mut out = Vec::new();
    if p > n || q > n {
        return out;
    }
    for hol in subsets(n, p) {
        for anti in subsets(n, q) {
            out.push(BasisWord { n: n as u8, theta: false, hol, antihol: anti });
        }
    }
    out.sort();
    out
}

/// All words of total degree `k` (horizontal and `θ`-words).
pub fn words_of_degree(n: usize, k: usize) -> Vec<BasisWord> {
    let mut out = Vec::new();
    for p in 0..=n.min(k) {
        if k - p <= n {
            out.extend(words_of_bidegree(n, p, k - p));
        }
    }
    if k >= 1 {
        for p in 0..=n.min(k - 1) {
            if k - 1 - p <= n {
                out.extend(words_of_bidegree(n, p, k - 1 - p).into_iter().map(|w| w.toggled(Generator::Theta)));
            }
        }
    }
    out.sort();
    out
}

fn subsets(n: usize, size: usize) -> Vec<u16> {
    (0u32..(1 << n)).filter(|m| m.count_ones() as usize == size).map(|m| m as u16).collect()
}

/// Sign of moving `j` from the left of the increasing set `I` into its
/// place in `J`: zero unless `j ∉ I` and `{j} ∪ I = J`, otherwise
/// `∏_{i∈I} sgn(i - j)`.
pub fn epsilon_sign(j: usize, i_set: &[usize], j_set: &[usize]) -> i32 {
    if i_set.contains(&j) {
        return 0;
    }
    let mut union: Vec<usize> = i_set.to_vec();
    union.push(j);
    union.sort_unstable();
    let mut target = j_set.to_vec();
    target.sort_unstable();
    if union != target {
        return 0;
    }
    i_set.iter().map(|&i| if i < j { -1 } else { 1 }).product()
}

/// Constant-coefficient exterior form.
#[derive(Debug, Clone, PartialEq)]
pub struct Form {
    n: usize,
    coeffs: BTreeMap<BasisWord, C64>,
}

/// One entry of the JSON dump of a [`Form`].
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct FormTerm {
    pub word: (Vec<usize>, Vec<usize>, bool),
    pub re: f64,
    pub im: f64,
}

impl Form {
    pub fn zero(n: usize) -> Self {
        Self { n, coeffs: BTreeMap::new() }
    }

    pub fn scalar(n: usize, c: C64) -> Self {
        Self::from_word(BasisWord::scalar(n), c)
    }

    pub fn from_word(word: BasisWord, c: C64) -> Self {
        let mut f = Self::zero(word.n());
        f.add_term(word, c);
        f
    }

    pub fn from_terms<It: IntoIterator<Item = (BasisWord, C64)>>(n: usize, terms: It) -> Result<Self> {
        let mut f = Self::zero(n);
        for (w, c) in terms {
            if w.n() != n {
                return Err(Error::Dimension { expected: n, found: w.n() });
            }
            f.add_term(w, c);
        }
        Ok(f)
    }

    /// `dθ = -i Σ_j β_j ∧ β̄_j`.
    pub fn dtheta(n: usize) -> Self {
        let mut f = Self::zero(n);
        for j in 1..=n {
            let w = BasisWord::beta(n, j).toggled(Generator::BetaBar(j));
            f.add_term(w, -I);
        }
        f
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BasisWord, &C64)> {
        self.coeffs.iter()
    }

    pub fn coeff(&self, w: &BasisWord) -> C64 {
        self.coeffs.get(w).copied().unwrap_or(ZERO)
    }

    pub fn add_term(&mut self, w: BasisWord, c: C64) {
        let entry = self.coeffs.entry(w).or_insert(ZERO);
        *entry += c;
        if entry.norm() < PRUNE_TOL {
            self.coeffs.remove(&w);
        }
    }

    fn check_n(&self, other: &Form) -> Result<()> {
        if self.n != other.n {
            return Err(Error::Dimension { expected: self.n, found: other.n });
        }
        Ok(())
    }

    pub fn add(&self, other: &Form) -> Result<Form> {
        self.check_n(other)?;
        let mut out = self.clone();
        for (w, c) in &other.coeffs {
            out.add_term(*w, *c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Form) -> Result<Form> {
        self.add(&other.scale(-crate::linalg::ONE))
    }

    pub fn scale(&self, s: C64) -> Form {
        let mut out = Form::zero(self.n);
        for (w, c) in &self.coeffs {
            out.add_term(*w, c * s);
        }
        out
    }

    /// Degree of a homogeneous form, `None` for zero or mixed forms.
    pub fn degree(&self) -> Option<usize> {
        let mut degs = self.coeffs.keys().map(BasisWord::degree);
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    /// Pure bidegree of a horizontal form.
    pub fn bidegree(&self) -> Option<(usize, usize)> {
        let mut it = self.coeffs.keys();
        let first = it.next()?;
        if first.has_theta() {
            return None;
        }
        let bd = first.bidegree();
        it.all(|w| !w.has_theta() && w.bidegree() == bd).then_some(bd)
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `g ∧ self`.
    pub fn left_mult(&self, g: Generator) -> Form {
        let mut out = Form::zero(self.n);
        for (w, c) in &self.coeffs {
            if let Some((s, w2)) = w.left_mult(g) {
                out.add_term(w2, c * s);
            }
        }
        out
    }

    /// `g ⌟ self`.
    pub fn interior(&self, g: Generator) -> Form {
        let mut out = Form::zero(self.n);
        for (w, c) in &self.coeffs {
            if let Some((s, w2)) = w.interior(g) {
                out.add_term(w2, c * s);
            }
        }
        out
    }

    pub fn to_terms(&self) -> Vec<FormTerm> {
        self.coeffs.iter().map(|(w, c)| FormTerm { word: w.to_triple(), re: c.re, im: c.im }).collect()
    }

    pub fn from_json_terms(n: usize, terms: &[FormTerm]) -> Result<Form> {
        let mut f = Form::zero(n);
        for t in terms {
            f.add_term(BasisWord::from_triple(n, &t.word)?, C64::new(t.re, t.im));
        }
        Ok(f)
    }
}

/// `a ∧ b`.
pub fn wedge(a: &Form, b: &Form) -> Result<Form> {
    a.check_n(b)?;
    let mut out = Form::zero(a.n);
    for (wa, ca) in &a.coeffs {
        let gens = wa.generators();
        for (wb, cb) in &b.coeffs {
            // g_1 ∧ .. ∧ g_k ∧ wb, inserting from the right
            let mut cur = Some((1.0, *wb));
            for g in gens.iter().rev() {
                cur = cur.and_then(|(s, w)| w.left_mult(*g).map(|(s2, w2)| (s * s2, w2)));
            }
            if let Some((s, w)) = cur {
                out.add_term(w, ca * cb * s);
            }
        }
    }
    Ok(out)
}

/// `e(dθ)ω = dθ ∧ ω`.
pub fn e_dtheta(omega: &Form) -> Form {
    let n = omega.n;
    let mut out = Form::zero(n);
    for j in 1..=n {
        let t = omega.left_mult(Generator::BetaBar(j)).left_mult(Generator::Beta(j));
        for (w, c) in t.coeffs {
            out.add_term(w, -I * c);
        }
    }
    out
}

/// `i(dθ)ω = i Σ_j β̄_j ⌟ (β_j ⌟ ω)`, the adjoint of [`e_dtheta`].
pub fn i_dtheta(omega: &Form) -> Form {
    let n = omega.n;
    let mut out = Form::zero(n);
    for j in 1..=n {
        let t = omega.interior(Generator::Beta(j)).interior(Generator::BetaBar(j));
        for (w, c) in t.coeffs {
            out.add_term(w, I * c);
        }
    }
    out
}

/// `⟨a, b⟩`, linear in `a` and conjugate-linear in `b`.
pub fn hermitian_inner(a: &Form, b: &Form) -> Result<C64> {
    a.check_n(b)?;
    Ok(a.coeffs.iter().map(|(w, c)| c * b.coeff(w).conj()).sum())
}

/// Matrix of a linear map of forms in the given word bases.
pub fn operator_matrix<F: Fn(&Form) -> Form>(n: usize, domain: &[BasisWord], codomain: &[BasisWord], op: F) -> DMatrix<C64> {
    let mut m = DMatrix::<C64>::zeros(codomain.len(), domain.len());
    for (col, w) in domain.iter().enumerate() {
        let image = op(&Form::from_word(*w, crate::linalg::ONE));
        for (row, w2) in codomain.iter().enumerate() {
            m[(row, col)] = image.coeff(w2);
        }
        debug_assert!(image.terms().all(|(w, _)| codomain.contains(w)), "codomain basis too small (n = {n})");
    }
    m
}

fn to_vector(f: &Form, basis: &[BasisWord]) -> Vec<C64> {
    basis.iter().map(|w| f.coeff(w)).collect()
}

fn from_vector(n: usize, basis: &[BasisWord], v: &[C64]) -> Form {
    let mut f = Form::zero(n);
    for (w, c) in basis.iter().zip(v) {
        f.add_term(*w, *c);
    }
    f
}

/// A summand `ω_j` of the Lefschetz splitting `ω = Σ_j e(dθ)^j ω_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct LefschetzComponent {
    pub j: usize,
    /// Primitive form in `Λ^{p-j, q-j}` (annihilated by `i(dθ)`).
    pub form: Form,
}

impl LefschetzComponent {
    /// `e(dθ)^j ω_j`.
    pub fn embedded(&self) -> Form {
        let mut f = self.form.clone();
        for _ in 0..self.j {
            f = e_dtheta(&f);
        }
        f
    }
}

fn pseudo_inverse(m: &DMatrix<C64>) -> DMatrix<C64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return DMatrix::zeros(m.ncols(), m.nrows());
    }
    m.clone().pseudo_inverse(1e-10).expect("SVD of a small constant matrix")
}

/// Split a pure `(p, q)`-form into primitive Lefschetz components by
/// repeatedly peeling `ω = ω_0 + e(dθ)α` with the least-squares `α`.
pub fn lefschetz_decompose(omega: &Form, p: usize, q: usize) -> Result<Vec<LefschetzComponent>> {
    let n = omega.n();
    if p > n || q > n {
        return Err(Error::Degree(format!("bidegree ({p},{q}) exceeds n = {n}")));
    }
    if omega.is_zero() {
        return Ok(Vec::new());
    }
    if omega.bidegree() != Some((p, q)) {
        return Err(Error::Degree(format!("input is not a pure ({p},{q})-form")));
    }

    let mut out = Vec::new();
    let mut basis = words_of_bidegree(n, p, q);
    let mut current = to_vector(omega, &basis);
    for j in 0..=p.min(q) {
        let (pj, qj) = (p - j, q - j);
        let norm = current.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm < PRUNE_TOL {
            break;
        }
        if pj == 0 || qj == 0 {
            out.push(LefschetzComponent { j, form: from_vector(n, &basis, &current) });
            break;
        }
        let lower = words_of_bidegree(n, pj - 1, qj - 1);
        let e = operator_matrix(n, &lower, &basis, e_dtheta);
        let alpha = pseudo_inverse(&e) * nalgebra::DVector::from_column_slice(&current);
        let range_part = &e * &alpha;
        let primitive: Vec<C64> = current.iter().zip(range_part.iter()).map(|(c, r)| c - r).collect();
        let primitive_form = from_vector(n, &basis, &primitive);
        if !primitive_form.is_zero() {
            out.push(LefschetzComponent { j, form: primitive_form });
        }
        current = alpha.iter().copied().collect();
        basis = lower;
    }
    Ok(out)
}

fn rank(m: &DMatrix<C64>, tol: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    m.clone().svd(false, false).singular_values.iter().filter(|&&s| s > tol).count()
}

/// `dim V_j^{p,q}` for every `j = 0..=min(p,q)`, computed as the rank of
/// `e(dθ)^j` on the kernel of `i(dθ)` in `Λ^{p-j,q-j}`.
pub fn lefschetz_dimensions(n: usize, p: usize, q: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for j in 0..=p.min(q) {
        let (pj, qj) = (p - j, q - j);
        let dom = words_of_bidegree(n, pj, qj);
        // projector onto the kernel of i(dθ) on Λ^{pj,qj}: I - A⁺A
        let kernel: DMatrix<C64> = if pj == 0 || qj == 0 {
            DMatrix::identity(dom.len(), dom.len())
        } else {
            let cod = words_of_bidegree(n, pj - 1, qj - 1);
            let a = operator_matrix(n, &dom, &cod, i_dtheta);
            DMatrix::identity(dom.len(), dom.len()) - pseudo_inverse(&a) * a
        };
        let mut image = kernel;
        let mut basis = dom;
        for step in 0..j {
            let target = words_of_bidegree(n, pj + step + 1, qj + step + 1);
            let e = operator_matrix(n, &basis, &target, e_dtheta);
            image = e * image;
            basis = target;
        }
        out.push((j, rank(&image, 1e-10)));
    }
    out
}

/// `(n - k)` for horizontal `k`-forms: the value of `[i(dθ), e(dθ)]`.
pub fn commutator_constant(n: usize, k: usize) -> f64 {
    n as f64 - k as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ONE;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn repeated_factor_vanishes() {
        let b1 = Form::from_word(BasisWord::beta(2, 1), ONE);
        assert!(wedge(&b1, &b1).unwrap().is_zero());
    }

    #[test]
    fn degree_one_anticommutes() {
        let b1 = Form::from_word(BasisWord::beta(1, 1), ONE);
        let bb1 = Form::from_word(BasisWord::beta_bar(1, 1), ONE);
        let lhs = wedge(&bb1, &b1).unwrap();
        let rhs = wedge(&b1, &bb1).unwrap().scale(-ONE);
        assert_eq!(lhs, rhs);
        let w = BasisWord::new(1, &[1], &[1], false).unwrap();
        assert_eq!(lhs.coeff(&w), -ONE);
    }

    #[test]
    fn theta_moves_to_front_with_even_sign() {
        let n = 2;
        let b1 = Form::from_word(BasisWord::beta(n, 1), ONE);
        let bb2 = Form::from_word(BasisWord::beta_bar(n, 2), ONE);
        let th = Form::from_word(BasisWord::theta(n), ONE);
        let lhs = wedge(&wedge(&b1, &bb2).unwrap(), &th).unwrap();
        let w = BasisWord::new(n, &[1], &[2], true).unwrap();
        assert_eq!(lhs.coeff(&w), ONE);
    }

    #[test]
    fn mismatched_n_is_rejected() {
        let a = Form::scalar(1, ONE);
        let b = Form::scalar(2, ONE);
        assert!(matches!(wedge(&a, &b), Err(Error::Dimension { .. })));
        assert!(hermitian_inner(&a, &b).is_err());
    }

    #[test]
    fn epsilon_sign_examples() {
        assert_eq!(epsilon_sign(2, &[1, 3], &[1, 2, 3]), -1);
        assert_eq!(epsilon_sign(1, &[1], &[1, 2]), 0);
        assert_eq!(epsilon_sign(1, &[], &[1]), 1);
        assert_eq!(epsilon_sign(3, &[1, 2], &[1, 2, 3]), 1);
        assert_eq!(epsilon_sign(1, &[2], &[1, 3]), 0);
    }

    #[test]
    fn epsilon_sign_agrees_with_left_multiplication() {
        let n = 4;
        for w in words_of_bidegree(n, 2, 0) {
            for j in 1..=n {
                let i_set = w.hol_indices();
                match w.left_mult(Generator::Beta(j)) {
                    None => assert_eq!(epsilon_sign(j, &i_set, &[]), 0),
                    Some((s, w2)) => assert_eq!(epsilon_sign(j, &i_set, &w2.hol_indices()) as f64, s),
                }
            }
        }
    }

    #[test]
    fn e_dtheta_examples() {
        let one = Form::scalar(1, ONE);
        let got = e_dtheta(&one);
        let w = BasisWord::new(1, &[1], &[1], false).unwrap();
        assert_eq!(got.coeff(&w), -I);
        assert_eq!(got.terms().count(), 1);

        let top = Form::from_word(BasisWord::new(2, &[1, 2], &[1, 2], false).unwrap(), ONE);
        assert!(e_dtheta(&top).is_zero());

        let b1 = Form::from_word(BasisWord::beta(2, 1), ONE);
        let got = e_dtheta(&b1);
        let w = BasisWord::new(2, &[1, 2], &[2], false).unwrap();
        assert_eq!(got.coeff(&w), -I);
        assert_eq!(got.terms().count(), 1);
    }

    #[test]
    fn i_dtheta_examples() {
        let w = BasisWord::new(1, &[1], &[1], false).unwrap();
        let got = i_dtheta(&Form::from_word(w, ONE));
        assert_eq!(got.coeff(&BasisWord::scalar(1)), I);
        assert!(i_dtheta(&Form::scalar(1, ONE)).is_zero());
        let back = i_dtheta(&Form::dtheta(1));
        assert_eq!(back.coeff(&BasisWord::scalar(1)), ONE);
    }

    #[test]
    fn inner_product_examples() {
        let b1 = Form::from_word(BasisWord::beta(1, 1), ONE);
        let bb1 = Form::from_word(BasisWord::beta_bar(1, 1), ONE);
        assert_eq!(hermitian_inner(&b1, &b1).unwrap(), ONE);
        assert_eq!(hermitian_inner(&b1, &bb1).unwrap(), ZERO);
        for n in 1..=4 {
            let dt = Form::dtheta(n);
            assert_eq!(hermitian_inner(&dt, &dt).unwrap(), c(n as f64, 0.0));
        }
    }

    #[test]
    fn lefschetz_examples() {
        let w = BasisWord::new(1, &[1], &[1], false).unwrap();
        let comps = lefschetz_decompose(&Form::from_word(w, ONE), 1, 1).unwrap();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].j, 1);
        assert!((comps[0].form.coeff(&BasisWord::scalar(1)) - I).norm() < 1e-14);

        let w = BasisWord::new(2, &[1], &[2], false).unwrap();
        let comps = lefschetz_decompose(&Form::from_word(w, ONE), 1, 1).unwrap();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].j, 0);

        assert!(lefschetz_decompose(&Form::zero(2), 1, 1).unwrap().is_empty());
        let mixed = Form::from_word(BasisWord::beta(2, 1), ONE).add(&Form::from_word(BasisWord::beta_bar(2, 1), ONE)).unwrap();
        assert!(matches!(lefschetz_decompose(&mixed, 1, 0), Err(Error::Degree(_))));
    }

    #[test]
    fn lefschetz_dimensions_n2_bidegree_11() {
        assert_eq!(lefschetz_dimensions(2, 1, 1), vec![(0, 3), (1, 1)]);
        // e(dθ) i(dθ) on Λ^{1,1}, n = 2: eigenvalues 0 (×3) and 2 (×1)
        let basis = words_of_bidegree(2, 1, 1);
        let m = operator_matrix(2, &basis, &basis, |f| e_dtheta(&i_dtheta(f)));
        let eig = crate::linalg::hermitian_eigen(&m);
        let expect = [0.0, 0.0, 0.0, 2.0];
        for (x, y) in eig.values.iter().zip(expect) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn words_of_degree_counts() {
        for n in 1..=3 {
            let total: usize = (0..=2 * n + 1).map(|k| words_of_degree(n, k).len()).sum();
            assert_eq!(total, 1 << (2 * n + 1));
        }
    }

    #[test]
    fn json_terms_round_trip() {
        let f = Form::dtheta(3).add(&Form::from_word(BasisWord::theta(3), c(0.5, -2.0))).unwrap();
        let json = serde_json::to_string(&f.to_terms()).unwrap();
        let back: Vec<FormTerm> = serde_json::from_str(&json).unwrap();
        assert_eq!(Form::from_json_terms(3, &back).unwrap(), f);
    }
}
