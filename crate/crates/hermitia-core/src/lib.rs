//! Numerical library for Hermitian symmetric spaces of tube and non-tube type:
//! bounded symmetric domain models for the classical families, Bergmann kernels
//! and their bounded cocycles, Maslov indices in subspace and Jordan-algebra
//! models, a Lie-algebra tightness criterion, restricted root data, and Toledo
//! invariants of surface-group representations.
//!
//! All matrices are dense complex `f64` ([`numeric::CMatrix`]); every public
//! operation documents its preconditions and returns a typed error instead of
//! panicking on bad input. Randomized operations take explicit seeds and are
//! deterministic for a fixed seed.

pub mod acceptance;
pub mod bergmann;
pub mod domains;
pub mod error;
pub mod io;
pub mod jordan;
pub mod lie;
pub mod maslov;
pub mod numeric;
pub mod tol;
pub mod toledo;

pub use error::{Error, Result};
