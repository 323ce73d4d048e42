//! Exact symbolic engine for truncated Chern-class calculus.
//!
//! The crate covers weighted truncated polynomial rings over the rationals
//! ([`graded_ring`]), characteristic classes of formal bundles
//! ([`char_classes`]), formal test varieties built from products of
//! projective spaces together with their Chern numbers ([`cobordism`]),
//! set partitions and diagonal classes on powers ([`partitions`]), and
//! standard cycles `Σ_I Δ_{I*} P_I(c(X))` on powers of varieties with their
//! evaluation and decoding ([`universal_cycles`]).
//!
//! All arithmetic is exact.

pub mod char_classes;
pub mod cli;
pub mod cobordism;
pub mod error;
pub mod graded_ring;
pub mod linalg;
pub mod partitions;
pub mod rational;
pub mod universal_cycles;
pub mod verify;

pub use error::{Error, Result};
pub use graded_ring::{Alphabet, GradedPoly, Monomial};
pub use rational::Rational;
