//! Hodge Laplacian on 1-forms over the Heisenberg group, realised in a
//! truncated oscillator model: exterior algebra and Lefschetz splitting,
//! the CR and de Rham operators, closed-form symbols on the Heisenberg
//! fan, the five-way decomposition of 1-forms, the functional calculus
//! `m(Δ₁)`, and numerical Mihlin–Hörmander norms.

// NaN-rejecting guards are written as `!(x > 0.0)` on purpose
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod decomposition;
pub mod error;
pub mod exterior;
pub mod fan;
pub mod linalg;
pub mod mh;
pub mod model;
pub mod multiplier;
pub mod verify;

pub use decomposition::{DecompositionResult, WTriple};
pub use error::{Error, Result};
pub use exterior::{BasisWord, Form, Generator, LefschetzComponent};
pub use fan::{FanEigensystem, FanPoint};
pub use linalg::C64;
pub use model::{FormField, Model, ModelConfig, ScalarField, Slice};
pub use multiplier::MultiplierSpec;
