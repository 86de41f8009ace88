use std::sync::Arc;

use super::grid::RGrid;
use super::play::{init_unchecked, step_unchecked};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Play outputs on every memory level of a grid: the full hysteresis memory of one point.
#[derive(Debug, Clone, PartialEq)]
pub struct MemoryState<T> {
    grid: Arc<RGrid<T>>,
    xi: Vec<T>,
    input: T,
    history_sup: T,
}

impl<T: Real> MemoryState<T> {
    /// Demagnetized (virgin) state at input zero.
    pub fn virgin(grid: Arc<RGrid<T>>) -> Self {
        Self::with_input(grid, T::zero())
    }

    /// State obtained from the initial condition of the play at input `q0`.
    pub fn with_input(grid: Arc<RGrid<T>>, q0: T) -> Self {
        let xi = grid.radii().iter().map(|&r| init_unchecked(q0, r)).collect();
        MemoryState { grid, xi, input: q0, history_sup: q0.abs() }
    }

    pub fn grid(&self) -> &Arc<RGrid<T>> {
        &self.grid
    }

    pub fn xi(&self) -> &[T] {
        &self.xi
    }

    /// Last input value.
    pub fn input(&self) -> T {
        self.input
    }

    /// Supremum of `|q|` over the input history.
    pub fn history_sup(&self) -> T {
        self.history_sup
    }

    /// Applies a monotone input step to `q_new` in place.
    pub fn advance(&mut self, q_new: T) {
        for (xi, &r) in self.xi.iter_mut().zip(self.grid.radii()) {
            *xi = step_unchecked(*xi, q_new, r);
        }
        self.input = q_new;
        self.history_sup = self.history_sup.max(q_new.abs());
    }

    /// Returns the state after a monotone input step to `q_new`.
    pub fn evolve(&self, q_new: T) -> Self {
        let mut next = self.clone();
        next.advance(q_new);
        next
    }

    /// Play value of level `j` after a hypothetical step to `q_new`, without mutating.
    #[inline(always)]
    pub(crate) fn trial_xi(&self, j: usize, q_new: T) -> T {
        step_unchecked(self.xi[j], q_new, self.grid.radii()[j])
    }

    pub(crate) fn same_grid(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.grid, &other.grid) || *self.grid == *other.grid
    }

    /// Checks the play constraint `|q - xi_j| <= r_j` and the ordering
    /// `|xi_i - xi_j| <= |r_j - r_i|` (adjacent levels suffice by the triangle inequality).
    pub fn check_invariants(&self, tol: T) -> Result<()> {
        let radii = self.grid.radii();
        for (j, (&xi, &r)) in self.xi.iter().zip(radii).enumerate() {
            if (self.input - xi).abs() > r + tol {
                return Err(Error::InvalidParameter(format!(
                    "play constraint violated at level {j}: |{} - {}| > {}",
                    self.input, xi, r
                )));
            }
        }
        for j in 1..self.xi.len() {
            if (self.xi[j] - self.xi[j - 1]).abs() > radii[j] - radii[j - 1] + tol {
                return Err(Error::InvalidParameter(format!(
                    "memory ordering violated between levels {} and {j}",
                    j - 1
                )));
            }
        }
        Ok(())
    }
}

/// Applies `play_update` at every level of the memory.
pub fn evolve_memory<T: Real>(state: &MemoryState<T>, q_new: T) -> MemoryState<T> {
    state.evolve(q_new)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> Arc<RGrid<f64>> {
        Arc::new(RGrid::uniform(10, 1.0).unwrap())
    }

    #[test]
    fn virgin_ramp_to_two() {
        let s = MemoryState::virgin(grid()).evolve(2.0);
        for (&xi, &r) in s.xi().iter().zip(s.grid().radii()) {
            assert!((xi - (2.0 - r)).abs() < 1e-15);
        }
    }

    #[test]
    fn zero_step_is_identity() {
        let s = MemoryState::virgin(grid()).evolve(0.7).evolve(-0.2);
        assert_eq!(s.evolve(s.input()), s);
    }

    #[test]
    fn two_segment_history() {
        let s = MemoryState::virgin(grid()).evolve(1.0).evolve(0.5);
        for (&xi, &r) in s.xi().iter().zip(s.grid().radii()) {
            let expected = (1.0f64 - r).max(0.0).min(0.5 + r);
            assert!((xi - expected).abs() < 1e-15, "r={r}: {xi} vs {expected}");
        }
        s.check_invariants(1e-12).unwrap();
    }
}
