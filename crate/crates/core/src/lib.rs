//! Rate-independent ferroelectric/ferroelastic material modelling built on a Preisach
//! hysteresis operator.
//!
//! * [`hysteresis`]: play and Preisach operators, the hysteresis potential, dissipation.
//! * [`inversion`]: solving `q + b(t) P[q] = w` step by step, with the Lipschitz bounds of
//!   the inverse exposed as checkable quantities.
//! * [`constitutive`]: the thermodynamically consistent material law with internal variable
//!   `q = E / f(eps)` and material-point drivers.
//! * [`beam`]: longitudinal oscillations of a clamped piezoelectric beam.
//! * [`scenario`]: configuration, built-in scenarios, property suites and convergence studies
//!   behind the `ferrohyst` command line tool.
//!
//! All numerical code is generic over [`Real`]; the aliases below fix the scalar to `f64`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod beam;
pub mod constitutive;
pub mod error;
pub mod hysteresis;
pub mod inversion;
pub mod quadrature;
pub mod roots;
pub mod scalar;
pub mod scenario;

pub use error::{Error, Result};
pub use scalar::Real;

pub type RGrid = hysteresis::RGrid<f64>;
pub type MemoryState = hysteresis::MemoryState<f64>;
pub type PreisachDensity = hysteresis::PreisachDensity<f64>;
pub type InversionProblem = inversion::InversionProblem<f64>;
pub type MaterialParams = constitutive::MaterialParams<f64>;
pub type ShapeFunction = constitutive::ShapeFunction<f64>;
pub type Material = constitutive::Material<f64>;
pub type PointTrajectory = constitutive::PointTrajectory<f64>;
pub type BeamMesh = beam::BeamMesh<f64>;
pub type BeamState = beam::BeamState<f64>;
pub type BeamModel = beam::BeamModel<f64>;
