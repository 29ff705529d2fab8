//! Exact-arithmetic construction and verification of matrix factorizations
//! of relative invariants: the Spin₁₄ octic, the quartic on ℂ²⊗Δ₁₀, the
//! heptic on ∧³ℂ⁷ and the degree-16 invariant on ∧³ℂ⁸.

#![allow(clippy::needless_range_loop)]

pub mod clifford;
pub mod error;
pub mod exterior;
pub mod forms;
pub mod heptic;
pub mod matrix;
pub mod mf;
pub mod report;
pub mod rng;
pub mod scalar;
pub mod sedecic;
pub mod spin10;
pub mod spin14;

pub use error::{Error, Result};
pub use scalar::{QuadRat, Rat, Scalar};
