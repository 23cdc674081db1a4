//! Truncated models of bounded operators from ℓ¹ and the ill-posedness
//! phenomena of ℓ¹-regularized least squares on them.
//!
//! The modules build on each other: [`sphere_enum`] lists rational points of
//! the unit sphere, [`operators`] assembles finite sections of operators with
//! their structural attributes, [`tikhonov`] solves and certifies the
//! penalized problems, [`diagnostics`] probes weak* continuity and inverse
//! growth, and [`classify`] sorts operators into posedness classes.

pub mod classify;
pub mod diagnostics;
pub mod error;
pub mod operators;
pub mod sphere_enum;
pub mod tikhonov;

pub use classify::{catalog, check_consistency, classify, CatalogEntry, PosednessClass, Rule, Verdict, Violation};
pub use diagnostics::{composition_probe, pseudoinverse_growth, weak_star_probe, GrowthRow, ProbeReport, ProbeVerdict};
pub use error::{Error, Result};
pub use operators::{OperatorAttributes, SpaceTag, Tri, TruncatedOperator};
pub use sphere_enum::{DirectionSet, EnumerationParams, RationalDirection};
pub use tikhonov::{MinimizerCertificate, TikhonovProblem};
