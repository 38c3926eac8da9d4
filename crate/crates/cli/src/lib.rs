//! Command-line front end: the exponent DSL, descriptor generators and
//! command dispatch for the `nakano` binary.

// `!(x >= 1.0)` is deliberate: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod app;
pub mod dsl;
pub mod generate;

pub use dsl::{parse_dsl, print_dsl, DslError, DslErrorKind};
