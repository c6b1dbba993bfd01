//! Numerical ranges of matrix products and their elliptical containment regions.
//!
//! W(A) = {x*Ax : ‖x‖ = 1} is computed from its support function
//! h(θ) = λ_max((e^{−iθ}A + e^{iθ}A*)/2). Regions built from elliptical disks are compared
//! with it on a uniform angle grid.

pub mod cli;
pub mod contractions;
pub mod error;
pub mod essherm;
pub mod matkernel;
pub mod numrange;
pub mod plot;
pub mod projpairs;
pub mod random;
pub mod regions;
pub mod report;
pub mod verify;

pub use error::{Error, Result};
pub use matkernel::ComplexMatrix;
pub use report::{GapRow, VerifyReport};

/// Default tolerance for structural predicates (projection, positive contraction, ...).
pub const STRUCTURAL_TOL: f64 = 1e-8;
/// Default tolerance for support-function equality and containment verdicts.
pub const EQUALITY_TOL: f64 = 1e-6;
/// Default number of grid angles.
pub const DEFAULT_GRID: usize = 720;
