//! Linearized regularized 13-moment (R13) equations with Onsager wall
//! conditions.
//!
//! The crate covers the whole chain from molecular-model parameters to flow
//! solutions:
//!
//! - [`model_params`]: parameter sets, validation and thermodynamic
//!   discriminants;
//! - [`kinetic_basis`]: the velocity-space polynomial basis and the
//!   kinetic/macroscopic energy equivalence;
//! - [`tensor_algebra`] and [`state_space`]: stf tensors, frames, the
//!   macroscopic state and its mass-weighted inner product;
//! - [`onsager_coefficients`]: the weak-form wall coefficients and their
//!   positivity and consistency audits;
//! - [`korn_verifier`]: finite-element certificates for the Korn-type
//!   inequalities and the conformal-Killing kernel;
//! - [`slab`]: steady and transient slab solvers with energy monitors;
//! - [`catalog`]: bundled models and tabulated reference values;
//! - [`config`] and [`app`]: configuration-driven runs with
//!   reproducibility manifests.

// Index loops follow the tensor index notation of the formulas, and negated
// comparisons are how NaN inputs get rejected.
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod app;
pub mod catalog;
pub mod config;
pub mod error;
pub mod kinetic_basis;
pub mod korn_verifier;
pub mod linalg;
pub mod model_params;
pub mod onsager_coefficients;
pub mod quadrature;
pub mod slab;
pub mod state_space;
pub mod tensor_algebra;

pub use error::{R13Error, Result};
