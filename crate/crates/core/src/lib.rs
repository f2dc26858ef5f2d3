//! Confluent second-order Darboux transformations built on the Wronskian
//! differential formula, with elliptic-function machinery for periodic
//! potentials and independent numerical verification tools.
//!
//! The library constructs isospectral partners of a solvable potential from
//! a single seed solution u1 at a factorization energy eps1 and its
//! parametric derivative du1/deps. The transformation function
//! w(x) = D + W(u1, du1/deps) never requires integrating u1^2 numerically,
//! although an integral-based route is provided as a cross-check.
//!
//! Modules:
//! - [`elliptic`]: complete elliptic integrals, Jacobi sn, Weierstrass
//!   p/zeta/sigma via theta series.
//! - [`susy`]: the model-independent transformation machinery.
//! - [`models`]: free-particle and single-gap Lame seeds with closed-form
//!   partners.
//! - [`verify`]: finite-difference residuals, a bound-state eigensolver and
//!   numerical band edges.

pub mod elliptic;
pub mod error;
pub mod grid;
pub mod models;
pub mod quad;
pub mod susy;
pub mod verify;

pub use error::{Error, Result};
pub use grid::{ComplexGridFunction, GridFunction, GridSpec};
