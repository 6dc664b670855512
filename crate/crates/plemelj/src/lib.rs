//! Cauchy principal-value integrals, the off-curve Cauchy transform, and its
//! lateral boundary values via the Sokhotski-Plemelj formulas, on simple
//! smooth curves in the complex plane.
//!
//! The jump relations hold for densities well beyond Holder continuity: the
//! library carries a modulus-of-continuity estimator and a Dini/Holder
//! classifier, and its convergence experiments probe the boundary behavior
//! for merely Dini-continuous densities.
//!
//! Layout:
//! - [`curve`]: simple smooth oriented curves, local normalization, the
//!   regularized pullback kernel, and side classification.
//! - [`density`]: densities on curves, builtin examples, modulus-of-continuity
//!   estimation and regularity classification.
//! - [`pv`]: principal-value integrals by symmetric excision and singularity
//!   subtraction, on intervals and on curves, plus an existence predicate.
//! - [`transform`]: the Cauchy transform, boundary values, approach sequences,
//!   and convergence experiments.
//! - [`quad`]: the adaptive quadrature engine underneath everything.

pub mod curve;
pub mod density;
pub mod error;
pub mod pv;
pub mod quad;
pub mod report;
pub mod seq;
pub mod transform;

pub use curve::{Curve, CurveKind, NormalizedFrame, Parameterization, Side};
pub use density::{Density, DensitySource, RegularityClass};
pub use error::{Error, Result};
