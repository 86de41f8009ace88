use crate::error::{Error, Result};
use crate::scalar::Real;

/// A scalar boundary signal of time.
#[derive(Debug, Clone, PartialEq)]
pub enum Signal<T> {
    Constant(T),
    /// `offset + amplitude sin(2 pi t / period)`.
    Sine {
        amplitude: T,
        period: T,
        offset: T,
    },
    /// Piecewise linear through `(t_i, y_i)`, held constant outside.
    Samples {
        t: Vec<T>,
        y: Vec<T>,
    },
}

impl<T: Real> Signal<T> {
    pub fn validate(&self) -> Result<()> {
        match self {
            Signal::Constant(c) if !c.is_finite() => Err(Error::InvalidParameter("non-finite constant signal".into())),
            Signal::Sine { period, .. } if !(*period > T::zero()) => {
                Err(Error::InvalidParameter("sine period must be positive".into()))
            }
            Signal::Samples { t, y } => {
                if t.is_empty() || t.len() != y.len() {
                    return Err(Error::InvalidParameter("sampled signal needs matching nonempty t and y".into()));
                }
                if t.windows(2).any(|w| !(w[1] > w[0])) {
                    return Err(Error::InvalidParameter("sampled signal times must increase".into()));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    pub fn at(&self, time: T) -> T {
        match self {
            Signal::Constant(c) => *c,
            Signal::Sine { amplitude, period, offset } => {
                let two_pi = T::lit(std::f64::consts::TAU);
                *offset + *amplitude * (two_pi * time / *period).sin()
            }
            Signal::Samples { t, y } => {
                if time <= t[0] {
                    return y[0];
                }
                let last = t.len() - 1;
                if time >= t[last] {
                    return y[last];
                }
                let i = t.partition_point(|&s| s <= time) - 1;
                let w = (time - t[i]) / (t[i + 1] - t[i]);
                y[i] + w * (y[i + 1] - y[i])
            }
        }
    }
}

/// Displacement datum `r(t)` (the same at both ends) and end traction `s(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryData<T> {
    pub r: Signal<T>,
    pub s: Signal<T>,
}

impl<T: Real> BoundaryData<T> {
    pub fn zero() -> Self {
        BoundaryData { r: Signal::Constant(T::zero()), s: Signal::Constant(T::zero()) }
    }
}
