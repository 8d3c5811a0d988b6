//! Analysis of free noncommutative functions: nc polynomials and power series in two
//! classes of Hermitian variables, sampling-based matrix convexity and operator
//! monotonicity testers, the classical one-variable integral representations, and a
//! slice-based certifier for the x-degree of convex nc functions.

// `!(x > 0.0)` deliberately also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod convexity;
pub mod error;
pub mod evaluation;
pub mod expr_parser;
pub mod free_algebra;
pub mod linalg;
pub mod matrix_domain;
pub mod one_var;
pub mod presets;
pub mod slice_cert;

pub use error::{NcError, Result};
