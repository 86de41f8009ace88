//! Bracketed scalar root finding: Illinois-modified regula falsi safeguarded by bisection.
//!
//! Every map this crate solves (the inversion map `x + b P(x)`, the strain equation of the
//! material-point drivers) is continuous and changes sign on a known bracket, so a
//! bracketing method converges unconditionally. Regula falsi is exact once the bracket sits
//! inside a linear piece, which is the typical case for piecewise linear Preisach kernels.

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy)]
pub struct RootOptions<T> {
    /// Stop when `|f(x)| <= f_tol`.
    pub f_tol: T,
    /// Stop when the bracket is narrower than `x_tol * (1 + |x|)`.
    pub x_tol: T,
    pub max_iter: usize,
}

impl<T: Real> RootOptions<T> {
    pub fn new(f_tol: T) -> Self {
        RootOptions { f_tol, x_tol: T::epsilon() * T::lit(4.0), max_iter: 400 }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Root<T> {
    pub x: T,
    pub residual: T,
    pub iterations: usize,
}

/// Finds a zero of `f` on `[lo, hi]`. The endpoint values must have opposite signs
/// (or one of them must vanish).
pub fn find_root<T, F>(mut f: F, lo: T, hi: T, opts: RootOptions<T>) -> Result<Root<T>>
where
    T: Real,
    F: FnMut(T) -> T,
{
    let (a, b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let fa = f(a);
    let fb = f(b);
    find_root_with(f, (a, fa), (b, fb), opts)
}

/// [`find_root`] with the endpoint values already known.
pub fn find_root_with<T, F>(mut f: F, lo: (T, T), hi: (T, T), opts: RootOptions<T>) -> Result<Root<T>>
where
    T: Real,
    F: FnMut(T) -> T,
{
    let ((mut a, mut fa), (mut b, mut fb)) = (lo, hi);
    if !(fa.is_finite() && fb.is_finite()) {
        return Err(Error::NoBracket {
            lo: a.to_f64().unwrap_or(f64::NAN),
            hi: b.to_f64().unwrap_or(f64::NAN),
            context: "non-finite function value at bracket endpoint".into(),
        });
    }
    if fa.abs() <= opts.f_tol {
        return Ok(Root { x: a, residual: fa, iterations: 0 });
    }
    if fb.abs() <= opts.f_tol {
        return Ok(Root { x: b, residual: fb, iterations: 0 });
    }
    if fa.signum() == fb.signum() {
        return Err(Error::NoBracket {
            lo: a.to_f64().unwrap_or(f64::NAN),
            hi: b.to_f64().unwrap_or(f64::NAN),
            context: format!(
                "f(lo) = {:e}, f(hi) = {:e}",
                fa.to_f64().unwrap_or(f64::NAN),
                fb.to_f64().unwrap_or(f64::NAN)
            ),
        });
    }

    let mut best = if fa.abs() < fb.abs() { (a, fa) } else { (b, fb) };
    // Illinois bookkeeping: which end was retained last (-1 = a, +1 = b).
    let mut retained = 0i8;
    let mut width_prev = b - a;
    let mut stalled = 0usize;

    for it in 1..=opts.max_iter {
        let width = b - a;
        if width <= opts.x_tol * (T::one() + best.0.abs()) {
            return Ok(Root { x: best.0, residual: best.1, iterations: it });
        }
        let mid = a + width * T::half();
        let mut x = if stalled >= 2 {
            stalled = 0;
            mid
        } else {
            b - fb * (b - a) / (fb - fa)
        };
        if !(x > a && x < b) {
            x = mid;
        }
        let fx = f(x);
        if fx.abs() < best.1.abs() {
            best = (x, fx);
        }
        if fx.abs() <= opts.f_tol {
            return Ok(Root { x, residual: fx, iterations: it });
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
            if retained == 1 {
                fb = fb * T::half();
            }
            retained = 1;
        } else {
            b = x;
            fb = fx;
            if retained == -1 {
                fa = fa * T::half();
            }
            retained = -1;
        }
        let new_width = b - a;
        if new_width > width_prev * T::half() {
            stalled += 1;
        } else {
            stalled = 0;
            width_prev = new_width;
        }
    }
    Ok(Root { x: best.0, residual: best.1, iterations: opts.max_iter })
}

/// Searches outward from `x0` (where the increasing function has value `f0`) with doubling
/// steps starting at `step`, within `[lo, hi]`. Returns the endpoints and values of a bracket,
/// or `None` if the limits are reached without a sign change.
pub fn expand_bracket<T, F>(mut f: F, x0: T, f0: T, step: T, lo: T, hi: T) -> Option<((T, T), (T, T))>
where
    T: Real,
    F: FnMut(T) -> T,
{
    if !f0.is_finite() {
        return None;
    }
    if f0 == T::zero() {
        return Some(((x0, f0), (x0, f0)));
    }
    let up = f0 < T::zero();
    let mut near = (x0, f0);
    let mut step = step.abs().max(T::epsilon() * (T::one() + x0.abs()));
    loop {
        let x = if up { (near.0 + step).min(hi) } else { (near.0 - step).max(lo) };
        let fx = f(x);
        if !fx.is_finite() {
            return None;
        }
        if (fx >= T::zero()) == up {
            return Some(if up { (near, (x, fx)) } else { ((x, fx), near) });
        }
        if x == hi || x == lo {
            return None;
        }
        near = (x, fx);
        step = step * T::two();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_sqrt_two() {
        let r = find_root(|x: f64| x * x - 2.0, 0.0, 2.0, RootOptions::new(1e-14)).unwrap();
        assert!((r.x - 2f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn exact_on_piecewise_linear() {
        let f = |x: f64| if x < 0.3 { x - 0.5 } else { 3.0 * x - 1.1 };
        let r = find_root(f, -1.0, 1.0, RootOptions::new(1e-15)).unwrap();
        assert!((r.x - 1.1 / 3.0).abs() < 1e-15);
        assert!(r.iterations < 20);
    }

    #[test]
    fn rejects_missing_sign_change() {
        let err = find_root(|x: f64| x * x + 1.0, -1.0, 1.0, RootOptions::new(1e-12));
        assert!(matches!(err, Err(Error::NoBracket { .. })));
    }

    #[test]
    fn steep_and_flat_pieces() {
        // slope 1000 on the right: the residual criterion must still be met
        let f = |x: f64| if x < 0.0 { x } else { 1000.0 * x } - 0.123456789;
        let r = find_root(f, -5.0, 5.0, RootOptions::new(1e-12)).unwrap();
        assert!(r.residual.abs() <= 1e-12);
    }
}
