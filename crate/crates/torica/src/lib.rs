//! Exact-arithmetic toolkit for complete simplicial toric varieties given by
//! fans: class groups and Cox-ring gradings, support polytopes, a small
//! Gröbner engine for smoothness certificates, and the Jacobian-ring
//! description of the Hodge theory of ample quasi-smooth hypersurfaces.

pub mod coxring;
pub mod divisor;
pub mod fan;
pub mod forms;
pub mod groebner;
pub mod hodge;
pub mod lattice;
pub mod matrix;
pub mod report;

use num_bigint::BigInt;
use num_rational::BigRational;

/// Arbitrary-precision integer matrix.
pub type IntMatrix = matrix::Matrix<BigInt>;
/// Exact rational matrix.
pub type RatMatrix = matrix::Matrix<BigRational>;

pub use lattice::{ClassGroup, DivisorClass};
