//! Curvature of left-invariant metrics on compact Lie groups, their
//! homogeneous and biquotient quotients, and integer invariants of
//! Eschenburg and Bazaikin spaces.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod biquot;
pub mod census;
pub mod error;
pub mod homspace;
pub mod liealg;
pub mod metric;
pub mod optimize;
pub mod par;
pub mod rng;
pub mod spaces;

pub use error::{Error, Result};
