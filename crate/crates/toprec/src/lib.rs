//! Exact topological recursion on quantum Airy structures.
//!
//! The crate computes the amplitudes `F_{g,n}` of a quantum Airy structure
//! `(A, B, C, D)` in exact arithmetic, and ships four families of structures
//! together with independent oracles:
//!
//! * [`frobenius`]: 2d TQFT amplitudes from a commutative Frobenius algebra,
//! * [`loopspace`]: the Witten–Kontsevich structure and ψ-class intersections,
//! * [`mirzakhani`]: Weil–Petersson volumes by two pipelines,
//! * [`givental`]: semisimple CohFTs assembled with Givental operations.
//!
//! [`graphs`] enumerates the trivalent graphs whose weighted sum reproduces the
//! recursion, and [`tr`] checks symmetry and annihilation of computed tables.

pub mod airy;
pub mod builtin;
pub mod coeff;
mod error;
pub mod frobenius;
pub mod givental;
pub mod graphs;
pub mod linalg;
pub mod loopspace;
pub mod mirzakhani;
pub mod poly;
pub mod tr;

pub use airy::{AiryStructure, IndexSet, RelationReport, Sparsity, Window};
pub use coeff::{PiPoly, Rational, Ring, Scalar};
pub use error::{Error, Result};
pub use tr::AmplitudeTable;
