//! Fixtures shared by the criterion benchmarks in `benches/`.

use heisenberg_hodge::model::{dyadic_grid, random_form, seeded};
use heisenberg_hodge::{FormField, Model, ModelConfig};

/// Model on the default `±2^{-2..3}` grid with a grade-limited random 1-form.
pub fn fixture(n: usize, fock_max: usize) -> (Model, FormField) {
    let model = Model::new(ModelConfig::new(n, dyadic_grid(-2, 3), fock_max, 1e-10).expect("valid config")).expect("model builds");
    let omega = random_form(&model, &mut seeded(11), 1, model.exact_grade_limit(&[1]));
    (model, omega)
}
