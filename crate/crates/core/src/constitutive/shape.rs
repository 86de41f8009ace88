//! Shape functions `f(eps) > 0` of the internal variable `q = E / f(eps)`.
//!
//! Each variant is defined on `[-1, 1]` and extended to the working range `[-1.5, 1.5]` by
//! ramping `f'` linearly to zero over a margin and holding `f` constant beyond it. The margin
//! is 0.5 wide unless the ramp would halve `f`, in which case it shrinks to `f(±1) / |f'(±1)|`,
//! so the extension stays positive with Lipschitz `f'`, `1/f` and `eps/f`.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Half-width of the working range for strains.
pub const WORKING_RANGE: f64 = 1.5;
const MARGIN: f64 = 0.5;

/// Cubic Hermite table over `[-1, 1]`: nodes `(x_i, f_i, f'_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermiteTable<T> {
    nodes: Vec<(T, T, T)>,
}

impl<T: Real> HermiteTable<T> {
    pub fn new(nodes: Vec<(T, T, T)>) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::InvalidParameter("shape table needs at least two nodes".into()));
        }
        if nodes[0].0 != -T::one() || nodes[nodes.len() - 1].0 != T::one() {
            return Err(Error::InvalidParameter("shape table must span exactly [-1, 1]".into()));
        }
        if nodes.windows(2).any(|w| !(w[1].0 > w[0].0)) {
            return Err(Error::InvalidParameter("shape table abscissae must increase".into()));
        }
        let table = HermiteTable { nodes };
        // positivity on the core interval, sampled finely within every segment
        for w in table.nodes.windows(2) {
            for i in 0..=64 {
                let x = w[0].0 + (w[1].0 - w[0].0) * T::of_usize(i) / T::lit(64.0);
                let (f, _) = table.eval(x);
                if !(f > T::zero()) {
                    return Err(Error::ShapeDegeneracy {
                        eps: x.to_f64().unwrap_or(f64::NAN),
                        f: f.to_f64().unwrap_or(f64::NAN),
                    });
                }
            }
        }
        Ok(table)
    }

    fn eval(&self, x: T) -> (T, T) {
        let idx = self.nodes.windows(2).position(|w| x <= w[1].0).unwrap_or(self.nodes.len() - 2);
        let (x0, f0, d0) = self.nodes[idx];
        let (x1, f1, d1) = self.nodes[idx + 1];
        let h = x1 - x0;
        let t = (x - x0) / h;
        let t2 = t * t;
        let t3 = t2 * t;
        let two = T::two();
        let three = T::lit(3.0);
        let h00 = two * t3 - three * t2 + T::one();
        let h10 = t3 - two * t2 + t;
        let h01 = -two * t3 + three * t2;
        let h11 = t3 - t2;
        let f = h00 * f0 + h10 * h * d0 + h01 * f1 + h11 * h * d1;
        let six = T::lit(6.0);
        let four = T::lit(4.0);
        let dh00 = six * t2 - six * t;
        let dh10 = three * t2 - four * t + T::one();
        let dh01 = -six * t2 + six * t;
        let dh11 = three * t2 - two * t;
        let df = (dh00 * f0 + dh01 * f1) / h + dh10 * d0 + dh11 * d1;
        (f, df)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ShapeFunction<T> {
    /// `f(x) = 1.1 - x`.
    Linear,
    /// `f(x) = 1/2 + (x - 1)^4 / 4`.
    Quartic,
    Table(HermiteTable<T>),
}

impl<T: Real> ShapeFunction<T> {
    fn core(&self, x: T) -> (T, T) {
        match self {
            ShapeFunction::Linear => (T::lit(1.1) - x, -T::one()),
            ShapeFunction::Quartic => {
                let d = x - T::one();
                let d3 = d * d * d;
                (T::half() + d3 * d / T::lit(4.0), d3)
            }
            ShapeFunction::Table(t) => t.eval(x),
        }
    }

    /// Margin over which `f'` is ramped to zero on each side: `(left, right)`.
    fn margins(&self) -> (T, T) {
        let margin = T::lit(MARGIN);
        let (fl, sl) = self.core(-T::one());
        let (fr, sr) = self.core(T::one());
        // going left f changes by -f'(-1) per unit, going right by f'(1)
        let left = if sl > T::zero() { margin.min(fl / sl) } else { margin };
        let right = if sr < T::zero() { margin.min(fr / -sr) } else { margin };
        (left, right)
    }

    /// `(f(eps), f'(eps))` on the working range `[-1.5, 1.5]`.
    pub fn eval(&self, eps: T) -> Result<(T, T)> {
        let range = T::lit(WORKING_RANGE);
        if !(eps.abs() <= range) {
            return Err(Error::OutOfRange {
                value: eps.to_f64().unwrap_or(f64::NAN),
                lo: -WORKING_RANGE,
                hi: WORKING_RANGE,
            });
        }
        Ok(self.eval_unchecked(eps))
    }

    pub(crate) fn eval_unchecked(&self, eps: T) -> (T, T) {
        let one = T::one();
        if eps.abs() <= one {
            return self.core(eps);
        }
        let (left, right) = self.margins();
        if eps > one {
            let (f1, s1) = self.core(one);
            let d = (eps - one).min(right);
            let f = f1 + s1 * (d - d * d / (T::two() * right));
            (f, s1 * (one - d / right))
        } else {
            let (f0, s0) = self.core(-one);
            let d = (-one - eps).min(left);
            let f = f0 - s0 * (d - d * d / (T::two() * left));
            (f, s0 * (one - d / left))
        }
    }

    /// Smallest value of `f` on the working range.
    pub fn f_min(&self) -> T {
        let range = T::lit(WORKING_RANGE);
        let n = 3000;
        (0..=n)
            .map(|i| {
                let x = -range + T::two() * range * T::of_usize(i) / T::of_usize(n);
                self.eval_unchecked(x).0
            })
            .fold(T::infinity(), |a, b| a.min(b))
    }
}

/// `(f(eps), f'(eps))`.
pub fn shape_eval<T: Real>(f: &ShapeFunction<T>, eps: T) -> Result<(T, T)> {
    f.eval(eps)
}
