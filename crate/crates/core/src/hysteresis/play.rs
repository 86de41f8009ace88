//! The scalar play operator with dead-zone radius `r`.

use crate::error::{Error, Result};
use crate::scalar::Real;

fn check_radius<T: Real>(r: T) -> Result<()> {
    if r > T::zero() && r.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("play radius must be positive, got {r}")))
    }
}

/// Initial play value: `max(q0 - r, min(0, q0 + r))`.
pub fn play_init<T: Real>(q0: T, r: T) -> Result<T> {
    check_radius(r)?;
    Ok(init_unchecked(q0, r))
}

/// Exact play output after a monotone input step ending at `q_new`.
pub fn play_update<T: Real>(xi_prev: T, q_new: T, r: T) -> Result<T> {
    check_radius(r)?;
    Ok(step_unchecked(xi_prev, q_new, r))
}

#[inline(always)]
pub(crate) fn init_unchecked<T: Real>(q0: T, r: T) -> T {
    (q0 - r).max(T::zero().min(q0 + r))
}

#[inline(always)]
pub(crate) fn step_unchecked<T: Real>(xi_prev: T, q_new: T, r: T) -> T {
    (q_new + r).min((q_new - r).max(xi_prev))
}
