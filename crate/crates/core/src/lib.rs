//! Exact computational kernel for the conformal compactification of
//! Minkowski spacetime modeled as 2×2 hermitian matrices.

pub mod error;
pub mod scalar;
pub mod herm;
pub mod spacetime;
pub mod auto;
pub mod incidence;
pub mod preservers;
pub mod json;
pub mod verify;

pub use error::{KernelError, Result};
pub use herm::{Herm2, Inertia, Mat2, Projection};
pub use scalar::{ExtReal, GaussRational, Rational, SignClass};
pub use spacetime::{M4Event, Point, QuadricPoint, Unitary2};
