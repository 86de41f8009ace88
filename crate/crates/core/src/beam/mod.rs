//! Longitudinal oscillations of a piezoelectric beam clamped at `x = 0`:
//!
//! ```text
//! rho u_tt - (nu u_xt + c u_x + W[u_x])_x = 0,   u(0, t) = 0,
//! (nu u_xt + c u_x + W[u_x])(l, t) = s(t),      D(t) = r(t),
//! ```
//!
//! with `W[eps] = -e E + f'(eps) U[q]` and `E` eliminated through `e eps + kappa E + P[q] = r`.
//! Space is discretized by linear elements with element-local strain and memory, time by
//! backward Euler; each step runs Picard sweeps on `W`.

mod energy;
mod linalg;
mod signal;
mod stepper;

pub use energy::{energy_audit, EnergyRecord};
pub use signal::{BoundaryData, Signal};
pub use stepper::{
    hysteretic_stress_functional, simulate, step, BeamMesh, BeamModel, BeamRun, BeamState, StepInfo, StepperConfig,
};
