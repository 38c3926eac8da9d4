//! Nakano (variable-exponent) sequence spaces: modulars and Luxemburg norms,
//! certified exponent asymptotics, and three-valued classification of the
//! inclusion `ℓ_{p_n} ↪ ℓ_{q_n}`.

// `!(x >= 1.0)` is deliberate: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod exponents;
pub mod criteria;
pub mod extended;
pub mod scalar;
pub mod series;
pub mod vectors;
pub mod verdict;
pub mod witness;

pub use exponents::{ExponentError, ExponentSequence, IndexSet};
pub use scalar::Scalar;
pub use verdict::{Answer, Certificate, Evidence, Verdict};

pub type SparseVectorF64 = vectors::SparseVector<f64>;
pub type SparseVectorF32 = vectors::SparseVector<f32>;
pub type NormResultF64 = vectors::NormResult<f64>;
pub type NormResultF32 = vectors::NormResult<f32>;
