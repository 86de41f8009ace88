//! Material-point drivers: field-driven (prescribed `E`, target stress) and stress-driven
//! (prescribed `sigma`, displacement datum `r`). Each step brackets the strain outward from
//! the previous value within the working range and refines it by regula falsi; the hysteresis
//! is evaluated exactly for every trial.

use crate::error::{Error, Result};
use crate::hysteresis::{check_trial, trial_potential};
use crate::inversion::solve_scalar;
use crate::roots::{expand_bracket, find_root_with, RootOptions};
use crate::scalar::Real;

use super::material::{Material, PointState};
use super::shape::WORKING_RANGE;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointRecord<T> {
    pub t: T,
    pub eps: T,
    pub field: T,
    pub q: T,
    pub p: T,
    pub u: T,
    pub sigma: T,
    pub d: T,
    pub free_energy: T,
    /// `q dP - dU` relative to the previous record.
    pub diss: T,
}

impl<T: Real> PointRecord<T> {
    fn from_state(s: &PointState<T>, diss: T) -> Self {
        PointRecord {
            t: s.t,
            eps: s.eps,
            field: s.field,
            q: s.q,
            p: s.p,
            u: s.u,
            sigma: s.sigma,
            d: s.d,
            free_energy: s.free_energy,
            diss,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct PointTrajectory<T> {
    pub records: Vec<PointRecord<T>>,
}

impl<T: Real> PointTrajectory<T> {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Appends the records of `other`, skipping its first record (the shared state).
    pub fn extend_from(&mut self, other: &PointTrajectory<T>) {
        let skip = usize::from(!self.records.is_empty());
        self.records.extend(other.records.iter().skip(skip).copied());
    }
}

/// Per-step `d_eps sigma_k + dD E_k - dF`.
pub fn clausius_duhem_residuals<T: Real>(traj: &PointTrajectory<T>) -> Vec<T> {
    traj.records
        .windows(2)
        .map(|w| {
            let (a, b) = (&w[0], &w[1]);
            (b.eps - a.eps) * b.sigma + (b.d - a.d) * b.field - (b.free_energy - a.free_energy)
        })
        .collect()
}

/// `1 + max|sigma| + max|E|`, the scale of the admissibility residuals.
pub fn residual_scale<T: Real>(traj: &PointTrajectory<T>) -> T {
    let (s, e) =
        traj.records.iter().fold((T::zero(), T::zero()), |(s, e), r| (s.max(r.sigma.abs()), e.max(r.field.abs())));
    T::one() + s + e
}

fn check_series<T: Real>(start: &PointState<T>, t: &[T], a: &[T], b: &[T]) -> Result<()> {
    if t.len() != a.len() || t.len() != b.len() {
        return Err(Error::InvalidParameter("driver series lengths differ".into()));
    }
    let mut prev = start.t;
    for &tk in t {
        if !(tk > prev) {
            return Err(Error::InvalidParameter(format!("time stamps must increase strictly ({prev} then {tk})")));
        }
        prev = tk;
    }
    Ok(())
}

/// Root of the increasing strain equation `h`, searched outward from `eps_prev`.
fn solve_strain<T: Real, H: Fn(T) -> Result<T>>(h: H, eps_prev: T, target: T, t: T) -> Result<T> {
    let range = T::lit(WORKING_RANGE);
    // errors inside the search (cutoff, degenerate f) are collected and surfaced afterwards
    let failure = std::cell::RefCell::new(None);
    let eval = |x: T| match h(x) {
        Ok(v) => v,
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            T::nan()
        }
    };
    let x0 = eps_prev.max(-range).min(range);
    let f0 = eval(x0);
    let bracket = expand_bracket(eval, x0, f0, T::lit(1e-3), -range, range);
    if let Some(e) = failure.borrow_mut().take() {
        return Err(e);
    }
    let Some((lo, hi)) = bracket else {
        return Err(Error::OutOfRange {
            value: target.to_f64().unwrap_or(f64::NAN),
            lo: -WORKING_RANGE,
            hi: WORKING_RANGE,
        });
    };
    let tol = T::exact_tol() * (T::one() + target.abs());
    let root = find_root_with(eval, lo, hi, RootOptions::new(tol * T::half()));
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let root = root?;
    if !(root.residual.abs() <= tol) {
        return Err(Error::StepDivergence {
            iterations: root.iterations,
            t: t.to_f64().unwrap_or(f64::NAN),
            last_update: root.residual.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(root.x)
}

/// Prescribed field `E_k` and target stress; solves
/// `nu (eps - eps_prev)/dt + c eps - e E_k + f'(eps) U[E_k / f(eps)] = sigma_k` per step.
pub fn drive_field<T: Real>(
    material: &Material<T>,
    start: &PointState<T>,
    t: &[T],
    field: &[T],
    sigma_target: &[T],
) -> Result<(PointTrajectory<T>, PointState<T>)> {
    check_series(start, t, field, sigma_target)?;
    let p = &material.params;
    let density = &material.density;
    let mut state = start.clone();
    let mut traj = PointTrajectory { records: vec![PointRecord::from_state(start, T::zero())] };
    for k in 0..t.len() {
        let dt = t[k] - state.t;
        let (ek, sk) = (field[k], sigma_target[k]);
        let mem = &state.memory;
        let eps_prev = state.eps;
        let h = |eps: T| -> Result<T> {
            let (f, df) = material.shape_at(eps)?;
            let q = ek / f;
            check_trial(density, mem, q)?;
            let u = trial_potential(density, mem, q);
            Ok(p.nu * (eps - eps_prev) / dt + p.c * eps - p.e * ek + df * u - sk)
        };
        let eps = solve_strain(h, eps_prev, sk, t[k])?;
        let (f, _) = material.shape_at(eps)?;
        let next = material.state_at(t[k], eps, (eps - eps_prev) / dt, ek, mem.evolve(ek / f))?;
        let diss = next.q * (next.p - state.p) - (next.u - state.u);
        traj.records.push(PointRecord::from_state(&next, diss));
        state = next;
    }
    Ok((traj, state))
}

/// Prescribed stress `sigma_k` and displacement datum `r_k`; the field follows from
/// `e eps + kappa E + P = r` for every trial strain.
pub fn drive_stress<T: Real>(
    material: &Material<T>,
    start: &PointState<T>,
    t: &[T],
    sigma: &[T],
    r: &[T],
) -> Result<(PointTrajectory<T>, PointState<T>)> {
    check_series(start, t, sigma, r)?;
    let p = &material.params;
    let density = &material.density;
    let mut state = start.clone();
    let mut traj = PointTrajectory { records: vec![PointRecord::from_state(start, T::zero())] };
    for k in 0..t.len() {
        let dt = t[k] - state.t;
        let (sk, rk) = (sigma[k], r[k]);
        let mem = &state.memory;
        let eps_prev = state.eps;
        let field_q = |eps: T| -> Result<(T, T, T)> {
            let (f, df) = material.shape_at(eps)?;
            let kf = p.kappa * f;
            let q = solve_scalar(mem, T::one() / kf, (rk - p.e * eps) / kf, density)?;
            Ok((q, f, df))
        };
        let h = |eps: T| -> Result<T> {
            let (q, f, df) = field_q(eps)?;
            let u = trial_potential(density, mem, q);
            Ok(p.nu * (eps - eps_prev) / dt + p.c * eps - p.e * f * q + df * u - sk)
        };
        let eps = solve_strain(h, eps_prev, sk, t[k])?;
        let (q, f, _) = field_q(eps)?;
        let next = material.state_at(t[k], eps, (eps - eps_prev) / dt, f * q, mem.evolve(q))?;
        let diss = next.q * (next.p - state.p) - (next.u - state.u);
        traj.records.push(PointRecord::from_state(&next, diss));
        state = next;
    }
    Ok((traj, state))
}
