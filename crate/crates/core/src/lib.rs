//! Symmetric forms on positive semidefinite matrices.
//!
//! The crate evaluates unitarily invariant forms `φ(A) = φ(λ(A))` and checks,
//! by seeded sampling, the trace inequalities, majorization relations and
//! Lieb-type concavity statements built on them.

pub mod cli;
pub mod compound;
pub mod error;
pub mod forms;
pub mod harness;
pub mod hermitian;
pub mod interp;
pub mod majorization;
pub mod report;
pub mod sample;
pub mod seed;

pub use error::{Error, Result};
pub use forms::Form;
pub use hermitian::{ComplexMatrix, HermitianMatrix, PsdMatrix, C64};
