//! Exact computations with dagger-completed group algebras: word-length
//! groups and combings, twisted convolution, bar complexes with combing
//! homotopies, Hochschild homology of the noncommutative torus, and
//! noncommutative differential forms.

pub mod algebra;
pub mod barcomplex;
pub mod combing;
pub mod error;
pub mod forms;
pub mod group;
pub mod linalg;
pub mod par;
pub mod sample;
pub mod scalar;
pub mod torus;
pub mod tower;

pub use error::{Error, Result};
pub use group::{GroupDescriptor, GroupElement};
pub use scalar::{Prime, Scalar, Valuation};
