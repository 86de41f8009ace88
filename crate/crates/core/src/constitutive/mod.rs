//! The ferroelectric/ferroelastic material law with internal variable `q = E / f(eps)`:
//!
//! ```text
//! sigma = nu eps_t + c eps - e E + f'(eps) U[q]
//! D     = e eps + kappa E + P[q]
//! F     = c/2 eps^2 + kappa/2 E^2 + f(eps) U[q]
//! ```

mod driver;
mod material;
mod shape;

pub use driver::{clausius_duhem_residuals, drive_field, drive_stress, residual_scale, PointRecord, PointTrajectory};
pub use material::{Material, MaterialParams, PointState};
pub use shape::{shape_eval, HermiteTable, ShapeFunction, WORKING_RANGE};
