//! Scalar play operator, Preisach operator and hysteresis potential on a discretized memory axis.
//!
//! The Preisach operator is evaluated in its play representation: every memory level `r_j`
//! carries the exact output `xi_j` of a play with radius `r_j`, and the output is the finite
//! sum `P = sum_j g_j(xi_j)`. For continuous densities `g_j(v) = dr * g(r_j, v)` with `r_j` the
//! cell midpoint, so the discretized operator is itself a Preisach operator with nondecreasing
//! kernels and inherits the energy inequality, the memory ordering and the Lipschitz bounds
//! exactly, not only up to quadrature error.

mod density;
mod grid;
mod memory;
mod operator;
mod play;

pub use density::{
    density_constants, projection_g, projection_potential, CustomDensity, DiscreteStack, PreisachDensity,
};
pub use grid::{GridKind, RGrid};
pub use memory::{evolve_memory, MemoryState};
pub(crate) use operator::{check_trial, raw_output, trial_output, trial_potential};
pub use operator::{dissipation_increment, potential_output, preisach_output};
pub use play::{play_init, play_update};
