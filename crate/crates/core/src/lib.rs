//! Dual-quaternion tools for closed 6R linkages: axis geometry,
//! Denavit-Hartenberg invariants, invariant quadratic polynomials, the
//! known mobile families, and numerical motion sampling.
//!
//! Algebraic routines are generic over [`Scalar`]; the aliases below fix
//! the two backends used in practice, exact rationals (`Q` suffix) and
//! `f64` (`F` suffix).

pub mod classify;
pub mod dualquat;
pub mod error;
pub mod linkage;
pub mod motion;
pub mod quadpoly;
pub mod sample;
pub mod scalar;

pub use classify::{classify, coupler_degree, genus_bound, maximal_bond_diagram, BondDiagram, FamilyReport};
pub use dualquat::{act, ComplexDualQuaternion, DualNumber, DualQuaternion, Line};
pub use error::{Error, Result};
pub use linkage::{assemble, dh_from_lines, lines_from_dh, DHParams, JointParameter, Linkage6R, Synthesis};
pub use motion::{closure_system, mobility_witness, track, MobilityWitness, MotionSample, TrackerConfig};
pub use scalar::{Rational, Scalar};

pub type DualQuatQ = DualQuaternion<Rational>;
pub type DualQuatF = DualQuaternion<f64>;
pub type LineQ = Line<Rational>;
pub type LineF = Line<f64>;
pub type LinkageQ = Linkage6R<Rational>;
pub type LinkageF = Linkage6R<f64>;
pub type DHParamsQ = DHParams<Rational>;
pub type DHParamsF = DHParams<f64>;
