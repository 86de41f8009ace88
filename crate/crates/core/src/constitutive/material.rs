use crate::error::{Error, Result};
use crate::hysteresis::{potential_output, preisach_output, MemoryState, PreisachDensity, RGrid};
use crate::inversion::invert_step;
use crate::scalar::Real;
use std::sync::Arc;

use super::shape::ShapeFunction;

#[derive(Debug, Clone, PartialEq)]
pub struct MaterialParams<T> {
    /// Elastic constant `c > 0`.
    pub c: T,
    /// Piezoelectric coupling `e`.
    pub e: T,
    /// Dielectric constant `kappa > 0`.
    pub kappa: T,
    /// Viscosity `nu >= 0`.
    pub nu: T,
    /// Mass density `rho > 0`.
    pub rho: T,
    pub shape: ShapeFunction<T>,
}

impl<T: Real> Default for MaterialParams<T> {
    fn default() -> Self {
        MaterialParams {
            c: T::one(),
            e: T::zero(),
            kappa: T::lit(0.01),
            nu: T::zero(),
            rho: T::one(),
            shape: ShapeFunction::Linear,
        }
    }
}

impl<T: Real> MaterialParams<T> {
    pub fn validate(&self) -> Result<()> {
        let bad = |name: &str, v: T| Error::InvalidParameter(format!("{name} = {v} is not admissible"));
        if !(self.c > T::zero() && self.c.is_finite()) {
            return Err(bad("c", self.c));
        }
        if !self.e.is_finite() {
            return Err(bad("e", self.e));
        }
        if !(self.kappa > T::zero() && self.kappa.is_finite()) {
            return Err(bad("kappa", self.kappa));
        }
        if !(self.nu >= T::zero() && self.nu.is_finite()) {
            return Err(bad("nu", self.nu));
        }
        if !(self.rho > T::zero() && self.rho.is_finite()) {
            return Err(bad("rho", self.rho));
        }
        Ok(())
    }
}

/// Material constants together with the Preisach density of the polarization.
#[derive(Debug, Clone)]
pub struct Material<T> {
    pub params: MaterialParams<T>,
    pub density: PreisachDensity<T>,
    f_min: T,
}

/// A material point: strain, field, memory of `q` and the derived quantities.
#[derive(Debug, Clone)]
pub struct PointState<T> {
    pub t: T,
    pub eps: T,
    pub eps_dot: T,
    pub field: T,
    pub q: T,
    pub p: T,
    pub u: T,
    pub sigma: T,
    pub d: T,
    pub free_energy: T,
    pub memory: MemoryState<T>,
}

impl<T: Real> Material<T> {
    pub fn new(params: MaterialParams<T>, density: PreisachDensity<T>) -> Result<Self> {
        params.validate()?;
        let f_min = params.shape.f_min();
        if !(f_min > T::zero()) {
            return Err(Error::ShapeDegeneracy { eps: f64::NAN, f: f_min.to_f64().unwrap_or(f64::NAN) });
        }
        Ok(Material { params, density, f_min })
    }

    pub fn f_min(&self) -> T {
        self.f_min
    }

    /// Grid with `m` levels up to `cutoff` (atoms for a Prandtl-Ishlinskii stack).
    pub fn grid(&self, m: usize, cutoff: T) -> Result<Arc<RGrid<T>>> {
        Ok(Arc::new(self.density.build_grid(m, cutoff)?))
    }

    /// `(f, f')` at `eps`, rejecting values below the positivity floor.
    pub fn shape_at(&self, eps: T) -> Result<(T, T)> {
        let (f, df) = self.params.shape.eval(eps)?;
        if !(f >= self.f_min * (T::one() - T::lit(1e-9))) || !(f > T::zero()) {
            return Err(Error::ShapeDegeneracy {
                eps: eps.to_f64().unwrap_or(f64::NAN),
                f: f.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok((f, df))
    }

    /// Solves `e eps + kappa E + P[E / f(eps)] = r` for the field.
    pub fn solve_field_from_d(&self, eps: T, r: T, memory: &MemoryState<T>) -> Result<(T, T, MemoryState<T>)> {
        let (f, _) = self.shape_at(eps)?;
        let kf = self.params.kappa * f;
        let (q, mem) = invert_step(memory, T::one() / kf, (r - self.params.e * eps) / kf, &self.density)?;
        Ok((q, f * q, mem))
    }

    /// `nu eps_dot + c eps - e E + f'(eps) U`.
    pub fn stress(&self, eps: T, eps_dot: T, field: T, memory_after: &MemoryState<T>) -> Result<T> {
        let (_, df) = self.shape_at(eps)?;
        let u = potential_output(&self.density, memory_after)?;
        let p = &self.params;
        Ok(p.nu * eps_dot + p.c * eps - p.e * field + df * u)
    }

    /// `e eps + kappa E + P`.
    pub fn dielectric_displacement(&self, eps: T, field: T, memory_after: &MemoryState<T>) -> Result<T> {
        let p = preisach_output(&self.density, memory_after)?;
        Ok(self.params.e * eps + self.params.kappa * field + p)
    }

    /// `c/2 eps^2 + kappa/2 E^2 + f(eps) U`.
    pub fn free_energy(&self, eps: T, field: T, memory_after: &MemoryState<T>) -> Result<T> {
        let (f, _) = self.shape_at(eps)?;
        let u = potential_output(&self.density, memory_after)?;
        let h = T::half();
        Ok(h * self.params.c * eps * eps + h * self.params.kappa * field * field + f * u)
    }

    /// Zero strain and field with virgin memory on `grid`.
    pub fn virgin_state(&self, grid: Arc<RGrid<T>>) -> Result<PointState<T>> {
        self.density.check_grid(&grid)?;
        self.state_at(T::zero(), T::zero(), T::zero(), T::zero(), MemoryState::virgin(grid))
    }

    /// Assembles a state; `memory` must already carry the input `field / f(eps)`.
    pub fn state_at(&self, t: T, eps: T, eps_dot: T, field: T, memory: MemoryState<T>) -> Result<PointState<T>> {
        let (f, df) = self.shape_at(eps)?;
        let p_val = preisach_output(&self.density, &memory)?;
        let u = potential_output(&self.density, &memory)?;
        let p = &self.params;
        let h = T::half();
        Ok(PointState {
            t,
            eps,
            eps_dot,
            field,
            q: memory.input(),
            p: p_val,
            u,
            sigma: p.nu * eps_dot + p.c * eps - p.e * field + df * u,
            d: p.e * eps + p.kappa * field + p_val,
            free_energy: h * p.c * eps * eps + h * p.kappa * field * field + f * u,
            memory,
        })
    }
}
