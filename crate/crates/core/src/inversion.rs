//! Inversion of `q(t) + b(t) P[q](t) = w(t)` for time-dependent coefficients `b >= 0`.
//!
//! The equation is solved causally, one time stamp at a time. At each stamp the scalar map
//! `x -> x + b_k P(x; memory)` is continuous with slope at least one, so its root is unique
//! and a bracketed root finder always converges. The fixed-point construction with frozen
//! coefficients on short subintervals is available as [`InvertMode::Picard`] for cross-checks.

use crate::error::{Error, Result};
use crate::hysteresis::{check_trial, trial_output, MemoryState, PreisachDensity};
use crate::roots::{find_root, find_root_with, RootOptions};
use crate::scalar::Real;

/// Data of one inversion problem; `b` and `w` share time stamps.
#[derive(Debug, Clone)]
pub struct InversionProblem<T> {
    pub b: Vec<T>,
    pub w: Vec<T>,
    pub density: PreisachDensity<T>,
    pub initial_memory: MemoryState<T>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InvertMode {
    /// Bracketed regula falsi / bisection at every stamp.
    #[default]
    Bracketed,
    /// Fixed-point iteration around frozen coefficients, re-anchored whenever `b` drifts
    /// by more than `1 / (2 M L)`.
    Picard,
}

/// Lipschitz constant of `(I + cP)^{-1}` for Preisach operators, used to size Picard anchors.
pub const PREISACH_INVERSE_LIPSCHITZ: f64 = 2.0;

fn check_coefficient<T: Real>(b: T) -> Result<()> {
    if b >= T::zero() && b.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidCoefficient(format!("b must be finite and >= 0, got {b}")))
    }
}

/// Residual tolerance of a solved step.
pub fn step_tolerance<T: Real>(w: T) -> T {
    T::exact_tol() * (T::one() + w.abs())
}

/// Solves `q + b P[evolve(memory, q)] = w` and returns `q` with the evolved memory.
pub fn invert_step<T: Real>(
    memory: &MemoryState<T>,
    b: T,
    w: T,
    density: &PreisachDensity<T>,
) -> Result<(T, MemoryState<T>)> {
    let q = solve_scalar(memory, b, w, density)?;
    Ok((q, memory.evolve(q)))
}

pub(crate) fn solve_scalar<T: Real>(memory: &MemoryState<T>, b: T, w: T, density: &PreisachDensity<T>) -> Result<T> {
    check_coefficient(b)?;
    if !w.is_finite() {
        return Err(Error::InvalidParameter(format!("right-hand side must be finite, got {w}")));
    }
    check_trial(density, memory, memory.input())?;
    if b == T::zero() || matches!(density, PreisachDensity::Zero) {
        check_trial(density, memory, w)?;
        return Ok(w);
    }

    let residual = |x: T| x + b * trial_output(density, memory, x) - w;

    // Limits within which the discretized memory is faithful.
    let grid = memory.grid();
    let limit = if density.support() > grid.cutoff() { grid.cutoff() } else { T::infinity() };

    // Slopes of the residual lie in [1, 1 + b sum mu_j], so one evaluation at the previous
    // input brackets the root.
    let x0 = memory.input().max(-limit).min(limit);
    let r0 = residual(x0);
    if r0 == T::zero() {
        return Ok(x0);
    }
    let slope = T::one() + b * density.discrete_weights(grid).into_iter().fold(T::zero(), |a, w| a + w);
    let widen = T::lit(1e-9);
    let far = (x0 - r0 * (T::one() + widen)).max(-limit).min(limit);
    let near = x0 - r0 / slope * (T::one() - widen);
    let (near, r_near) = if slope.is_finite() { (near, residual(near)) } else { (x0, r0) };
    let near_ok = r_near.signum() == r0.signum() || r_near == T::zero();
    let (near, r_near) = if near_ok { (near, r_near) } else { (x0, r0) };
    let r_far = residual(far);
    let tol = step_tolerance(w) * T::half();
    if r_far.signum() != r0.signum() || r_far == T::zero() {
        let (lo, hi) = if far < near { ((far, r_far), (near, r_near)) } else { ((near, r_near), (far, r_far)) };
        return Ok(find_root_with(residual, lo, hi, RootOptions::new(tol))?.x);
    }

    let mut half = match density.discrete_output_bound(grid) {
        Some(bound) => b * bound,
        None => b * (T::one() + w.abs()),
    };
    half = half.max(T::epsilon() * (T::one() + w.abs()));
    let (mut lo, mut hi);
    let mut tries = 0;
    loop {
        lo = (w - half).max(-limit);
        hi = (w + half).min(limit);
        if residual(lo) <= T::zero() && residual(hi) >= T::zero() {
            break;
        }
        let clipped = lo <= -limit || hi >= limit;
        tries += 1;
        if clipped || tries > 200 {
            return Err(Error::CutoffViolation {
                sup: w.abs().to_f64().unwrap_or(f64::NAN),
                cutoff: grid.cutoff().to_f64().unwrap_or(f64::NAN),
            });
        }
        half = half * T::two();
    }

    let root = find_root(residual, lo, hi, RootOptions::new(tol))?;
    Ok(root.x)
}

fn validate<T: Real>(problem: &InversionProblem<T>) -> Result<()> {
    if problem.b.len() != problem.w.len() {
        return Err(Error::InvalidParameter(format!(
            "b has {} samples but w has {}",
            problem.b.len(),
            problem.w.len()
        )));
    }
    problem.b.iter().try_for_each(|&b| check_coefficient(b))
}

/// Solves the problem at every stamp, threading the memory.
pub fn invert_trajectory<T: Real>(problem: &InversionProblem<T>) -> Result<Vec<T>> {
    invert_trajectory_with(problem, InvertMode::Bracketed)
}

pub fn invert_trajectory_with<T: Real>(problem: &InversionProblem<T>, mode: InvertMode) -> Result<Vec<T>> {
    validate(problem)?;
    match mode {
        InvertMode::Bracketed => {
            let mut memory = problem.initial_memory.clone();
            let mut out = Vec::with_capacity(problem.w.len());
            for (&b, &w) in problem.b.iter().zip(&problem.w) {
                let q = solve_scalar(&memory, b, w, &problem.density)?;
                memory.advance(q);
                out.push(q);
            }
            Ok(out)
        }
        InvertMode::Picard => invert_picard(problem),
    }
}

fn invert_picard<T: Real>(problem: &InversionProblem<T>) -> Result<Vec<T>> {
    let density = &problem.density;
    let mut memory = problem.initial_memory.clone();
    let m: T = density.discrete_weights(memory.grid()).into_iter().fold(T::zero(), |a, b| a + b);
    let lipschitz = T::lit(PREISACH_INVERSE_LIPSCHITZ);
    let gamma = if m > T::zero() { T::one() / (T::two() * m * lipschitz) } else { T::infinity() };

    let mut out = Vec::with_capacity(problem.w.len());
    let mut anchor: Option<T> = None;
    for (&b, &w) in problem.b.iter().zip(&problem.w) {
        let base = match anchor {
            Some(a) if (b - a).abs() < gamma => a,
            _ => b,
        };
        anchor = Some(base);
        let mut x = memory.input();
        let mut converged = false;
        for _ in 0..500 {
            check_trial(density, &memory, x)?;
            let rhs = w - (b - base) * trial_output(density, &memory, x);
            let next = solve_scalar(&memory, base, rhs, density)?;
            let delta = (next - x).abs();
            x = next;
            if delta <= T::epsilon() * T::lit(8.0) * (T::one() + x.abs()) {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::InvalidParameter("Picard inversion did not converge within 500 sweeps".into()));
        }
        memory.advance(x);
        out.push(x);
    }
    Ok(out)
}

/// `w_k = q_k + b_k P[q](t_k)`: the forward map of the inversion problem.
pub fn forward_trajectory<T: Real>(
    initial_memory: &MemoryState<T>,
    density: &PreisachDensity<T>,
    b: &[T],
    q: &[T],
) -> Result<Vec<T>> {
    if b.len() != q.len() {
        return Err(Error::InvalidParameter("b and q lengths differ".into()));
    }
    let mut memory = initial_memory.clone();
    let mut out = Vec::with_capacity(q.len());
    for (&bk, &qk) in b.iter().zip(q) {
        check_coefficient(bk)?;
        check_trial(density, &memory, qk)?;
        memory.advance(qk);
        out.push(qk + bk * crate::hysteresis::raw_output(density, &memory));
    }
    Ok(out)
}

/// Guaranteed ratio `||q1 - q2|| / ||w1 - w2||` for a shared coefficient: `exp(b_bar M)`.
pub fn lipschitz_bound_fixed_b<T: Real>(b_bar: T, m: T) -> T {
    (b_bar * m).exp()
}

/// `exp(b_bar M) (dw + M1 db)`: bound on `||q1 - q2||` when both `w` and `b` differ.
pub fn lipschitz_bound_varying_b<T: Real>(b_bar: T, m: T, m1: T, dw: T, db: T) -> T {
    (b_bar * m).exp() * (dw + m1 * db)
}

/// `prod_j (1 + b_bar mu_j)`: bound for a discrete stack with slope weights `mu_j`.
pub fn discrete_stack_bound<T: Real>(b_bar: T, weights: &[T]) -> T {
    weights.iter().fold(T::one(), |acc, &mu| acc * (T::one() + b_bar * mu))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hysteresis::{preisach_output, RGrid};
    use std::sync::Arc;

    fn projection_memory(m: usize) -> (PreisachDensity<f64>, MemoryState<f64>) {
        let d = PreisachDensity::Projection;
        let g = Arc::new(d.build_grid(m, 4.0).unwrap());
        (d, MemoryState::virgin(g))
    }

    #[test]
    fn zero_coefficient_is_identity() {
        let (d, mem) = projection_memory(400);
        let (q, _) = invert_step(&mem, 0.0, 0.7, &d).unwrap();
        assert_eq!(q, 0.7);
    }

    #[test]
    fn negative_coefficient_rejected() {
        let (d, mem) = projection_memory(400);
        assert!(matches!(invert_step(&mem, -1.0, 0.7, &d), Err(Error::InvalidCoefficient(_))));
    }

    #[test]
    fn single_prandtl_cell_closed_form() {
        let d = PreisachDensity::prandtl(&[(0.5, 1.0)]).unwrap();
        let g = Arc::new(d.build_grid(0, 0.0).unwrap());
        let problem = InversionProblem {
            b: vec![1.0; 3],
            w: vec![0.0, 0.3, 2.0],
            density: d,
            initial_memory: MemoryState::virgin(g),
        };
        let q: Vec<f64> = invert_trajectory(&problem).unwrap();
        assert_eq!(q[0], 0.0);
        assert!((q[1] - 0.3).abs() < 1e-14);
        // closed form (w + b mu r) / (1 + b mu)
        assert!((q[2] - 1.25).abs() < 1e-14);
    }

    /// Independent oracle: bisection on the virgin-curve equation q^2/2 + kappa f q = r.
    fn virgin_oracle(kappa_f: f64, r: f64) -> f64 {
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid * mid / 2.0 + kappa_f * mid - r > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn projection_field_elimination_example() {
        let kf = 0.01 * 1.1;
        let expected = virgin_oracle(kf, 0.005);
        assert!((expected - 0.089603).abs() < 1e-6);
        let (b, w) = (1.0 / kf, 0.005 / kf);
        let (d, mem) = projection_memory(400);
        let (q, after) = invert_step(&mem, b, w, &d).unwrap();
        assert!((q - expected).abs() < 1e-4);
        let p = preisach_output(&d, &after).unwrap();
        assert!((q + b * p - w).abs() <= step_tolerance(w));
        let (d, mem) = projection_memory(20000);
        let (q, _) = invert_step(&mem, b, w, &d).unwrap();
        assert!((q - expected).abs() < 1e-6);
    }

    #[test]
    fn zero_rhs_stays_at_zero() {
        let (d, mem) = projection_memory(100);
        let problem =
            InversionProblem { b: vec![0.0, 1.0, 3.0, 0.5], w: vec![0.0; 4], density: d, initial_memory: mem };
        assert!(invert_trajectory(&problem).unwrap().iter().all(|&q| q == 0.0));
    }

    #[test]
    fn round_trip_and_picard_agree() {
        let (d, mem) = projection_memory(200);
        let q: Vec<f64> = (0..200).map(|k| 1.3 * (k as f64 * 0.07).sin() * (k as f64 * 0.013).cos()).collect();
        let b: Vec<f64> = (0..200).map(|k| 1.0 + 0.8 * (k as f64 * 0.05).sin()).collect();
        let w = forward_trajectory(&mem, &d, &b, &q).unwrap();
        let problem = InversionProblem { b, w, density: d, initial_memory: mem };
        let q1 = invert_trajectory(&problem).unwrap();
        let q2 = invert_trajectory_with(&problem, InvertMode::Picard).unwrap();
        for k in 0..q.len() {
            assert!((q1[k] - q[k]).abs() < 1e-10);
            assert!((q1[k] - q2[k]).abs() < 1e-10);
        }
    }

    #[test]
    fn mismatched_lengths_rejected() {
        let (d, mem) = projection_memory(10);
        let problem = InversionProblem { b: vec![1.0], w: vec![], density: d, initial_memory: mem };
        assert!(invert_trajectory(&problem).is_err());
    }

    #[test]
    fn cutoff_violation_when_root_beyond_grid() {
        let d = PreisachDensity::Projection;
        let g = Arc::new(RGrid::uniform(20, 0.5).unwrap());
        let mem = MemoryState::virgin(g);
        assert!(matches!(invert_step(&mem, 1.0, 5.0, &d), Err(Error::CutoffViolation { .. })));
    }

    #[test]
    fn bounds() {
        assert!((lipschitz_bound_fixed_b(1.0, 1.0) - std::f64::consts::E).abs() < 1e-15);
        assert_eq!(lipschitz_bound_fixed_b(0.0, 3.0), 1.0);
        assert!((lipschitz_bound_fixed_b(2.0, 0.5) - std::f64::consts::E).abs() < 1e-15);
        assert!((lipschitz_bound_varying_b(1.0, 1.0, 1.0, 0.1, 0.0) - 0.1 * std::f64::consts::E).abs() < 1e-15);
        assert_eq!(lipschitz_bound_varying_b(1.0, 1.0, 1.0, 0.0, 0.0), 0.0);
        assert!((lipschitz_bound_varying_b(1.0, 1.0, 1.0, 0.0, 0.2) - 0.2 * std::f64::consts::E).abs() < 1e-15);
        assert_eq!(discrete_stack_bound(1.0, &[1.0, 0.5]), 3.0);
    }
}
