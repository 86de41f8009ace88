use crate::error::Result;
use crate::scalar::Real;

use super::signal::BoundaryData;
use super::stepper::{BeamModel, BeamState};

/// Energy bookkeeping after a step; dissipation and work are cumulative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyRecord<T> {
    pub t: T,
    pub kinetic: T,
    pub free_energy: T,
    pub diss_hyst: T,
    pub diss_visc: T,
    pub work_boundary: T,
    /// `K + F + dissipation - work - (K + F)(0)`.
    pub residual: T,
}

pub(crate) struct EnergyAccumulator<T> {
    initial: T,
    current: EnergyRecord<T>,
}

fn stored<T: Real>(model: &BeamModel<T>, state: &BeamState<T>) -> T {
    let h = model.mesh.h();
    state.elements.iter().fold(T::zero(), |acc, el| acc + h * el.free_energy)
}

impl<T: Real> EnergyAccumulator<T> {
    pub(crate) fn new(model: &BeamModel<T>, state: &BeamState<T>, kinetic: T) -> Result<Self> {
        let free = stored(model, state);
        Ok(EnergyAccumulator {
            initial: kinetic + free,
            current: EnergyRecord {
                t: state.t,
                kinetic,
                free_energy: free,
                diss_hyst: T::zero(),
                diss_visc: T::zero(),
                work_boundary: T::zero(),
                residual: T::zero(),
            },
        })
    }

    pub(crate) fn advance(
        &mut self,
        model: &BeamModel<T>,
        boundary: &BoundaryData<T>,
        prev: &BeamState<T>,
        next: &BeamState<T>,
        kinetic: T,
        dt: T,
    ) -> Result<()> {
        let h = model.mesh.h();
        let nu = model.material.params.nu;
        let mut hyst = T::zero();
        let mut visc = T::zero();
        let mut field_sum = T::zero();
        for (a, b) in prev.elements.iter().zip(&next.elements) {
            let (f, _) = model.material.shape_at(b.eps)?;
            hyst = hyst + h * f * (b.q * (b.p - a.p) - (b.u - a.u));
            visc = visc + h * nu * b.eps_dot * b.eps_dot * dt;
            field_sum = field_sum + h * b.field;
        }
        let n = next.v.len() - 1;
        let dr = boundary.r.at(next.t) - boundary.r.at(prev.t);
        let work = dt * boundary.s.at(next.t) * next.v[n] + dr * field_sum;
        let c = &mut self.current;
        c.t = next.t;
        c.kinetic = kinetic;
        c.free_energy = stored(model, next);
        c.diss_hyst = c.diss_hyst + hyst;
        c.diss_visc = c.diss_visc + visc;
        c.work_boundary = c.work_boundary + work;
        c.residual = c.kinetic + c.free_energy + c.diss_hyst + c.diss_visc - c.work_boundary - self.initial;
        Ok(())
    }

    pub(crate) fn record(&self) -> EnergyRecord<T> {
        self.current
    }
}

/// Per-step balance residuals (increments of the cumulative residual).
pub fn energy_audit<T: Real>(records: &[EnergyRecord<T>]) -> Vec<T> {
    records.windows(2).map(|w| w[1].residual - w[0].residual).collect()
}
