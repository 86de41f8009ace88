//! Preisach operator, hysteresis potential and dissipation on a discretized memory.

use super::density::PreisachDensity;
use super::memory::MemoryState;
use crate::error::{Error, Result};
use crate::scalar::Real;

fn check<T: Real>(density: &PreisachDensity<T>, state: &MemoryState<T>) -> Result<()> {
    density.check_grid(state.grid())?;
    let grid = state.grid();
    if state.history_sup() > grid.cutoff() && density.support() > grid.cutoff() {
        return Err(Error::CutoffViolation {
            sup: state.history_sup().to_f64().unwrap_or(f64::NAN),
            cutoff: grid.cutoff().to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(())
}

/// `P[q] = sum_j g_j(xi_j)`.
pub fn preisach_output<T: Real>(density: &PreisachDensity<T>, state: &MemoryState<T>) -> Result<T> {
    check(density, state)?;
    Ok(raw_output(density, state))
}

/// `U[q] = sum_j G_j(xi_j)`.
pub fn potential_output<T: Real>(density: &PreisachDensity<T>, state: &MemoryState<T>) -> Result<T> {
    check(density, state)?;
    Ok(raw_potential(density, state))
}

/// `q_after (P_after - P_before) - (U_after - U_before)`.
pub fn dissipation_increment<T: Real>(
    density: &PreisachDensity<T>,
    before: &MemoryState<T>,
    after: &MemoryState<T>,
    q_after: T,
) -> Result<T> {
    if !before.same_grid(after) {
        return Err(Error::InvalidParameter("dissipation: memory states on different grids".into()));
    }
    let p0 = preisach_output(density, before)?;
    let u0 = potential_output(density, before)?;
    let p1 = preisach_output(density, after)?;
    let u1 = potential_output(density, after)?;
    Ok(q_after * (p1 - p0) - (u1 - u0))
}

pub(crate) fn raw_output<T: Real>(density: &PreisachDensity<T>, state: &MemoryState<T>) -> T {
    let grid = state.grid();
    state.xi().iter().enumerate().fold(T::zero(), |acc, (j, &xi)| acc + density.cell_value(grid, j, xi))
}

pub(crate) fn raw_potential<T: Real>(density: &PreisachDensity<T>, state: &MemoryState<T>) -> T {
    let grid = state.grid();
    state.xi().iter().enumerate().fold(T::zero(), |acc, (j, &xi)| acc + density.cell_potential(grid, j, xi))
}

/// Output the operator would have after a monotone step to `q`, with no allocation.
/// Callers are responsible for the grid check.
pub(crate) fn trial_output<T: Real>(density: &PreisachDensity<T>, state: &MemoryState<T>, q: T) -> T {
    if matches!(density, PreisachDensity::Zero) {
        return T::zero();
    }
    let grid = state.grid();
    (0..grid.len()).fold(T::zero(), |acc, j| acc + density.cell_value(grid, j, state.trial_xi(j, q)))
}

/// Potential after a hypothetical step to `q`.
pub(crate) fn trial_potential<T: Real>(density: &PreisachDensity<T>, state: &MemoryState<T>, q: T) -> T {
    if matches!(density, PreisachDensity::Zero) {
        return T::zero();
    }
    let grid = state.grid();
    (0..grid.len()).fold(T::zero(), |acc, j| acc + density.cell_potential(grid, j, state.trial_xi(j, q)))
}

/// Validates a state against a density and the history cutoff before a trial evaluation at `q`.
pub(crate) fn check_trial<T: Real>(density: &PreisachDensity<T>, state: &MemoryState<T>, q: T) -> Result<()> {
    check(density, state)?;
    let grid = state.grid();
    if q.abs() > grid.cutoff() && density.support() > grid.cutoff() {
        return Err(Error::CutoffViolation {
            sup: q.abs().to_f64().unwrap_or(f64::NAN),
            cutoff: grid.cutoff().to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(())
}
