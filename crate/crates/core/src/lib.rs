//! Generalized Tribonacci sequences `V(n) = r V(n-1) + s V(n-2) + t V(n-3)`.
//!
//! Three independent evaluation paths are provided and cross-checked:
//!
//! * exact forward iteration ([`sequence`]),
//! * companion-matrix powers, exact or modular ([`matrix`]),
//! * the closed form over the roots of `x^3 - r x^2 - s x - t` ([`analytic`]).
//!
//! [`quaternion`] lifts the sequence to quaternions and [`identities`] runs
//! batch verification of the determinant, matrix-form, quadratic and closed
//! form identities over parameter pools.

pub mod analytic;
pub mod error;
pub mod identities;
pub mod matrix;
pub mod quaternion;
pub mod sequence;

pub use analytic::{BinetConstants, BinetEvaluator, CubicRoots};
pub use error::{Error, Result};
pub use matrix::{Mat3, Mat3Mod};
pub use quaternion::Quaternion;
pub use sequence::{Preset, SequenceParams};

pub use num_bigint::BigInt;
pub use num_complex::Complex64;
pub use num_rational::BigRational;
