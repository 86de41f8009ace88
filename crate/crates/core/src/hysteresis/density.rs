//! Preisach densities `g(r, v)`, their potential kernels `G(r, v)` and slope bounds `mu(r)`.

use std::fmt;
use std::sync::Arc;

use super::grid::{GridKind, RGrid};
use crate::error::{Error, Result};
use crate::quadrature::adaptive_simpson;
use crate::scalar::{clamp, Real};

type Kernel<T> = Arc<dyn Fn(T, T) -> T + Send + Sync>;
type Profile<T> = Arc<dyn Fn(T) -> T + Send + Sync>;

/// Discrete Prandtl–Ishlinskii stack: `P = sum_j mu_j * xi_{r_j}`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteStack<T> {
    radii: Vec<T>,
    weights: Vec<T>,
}

impl<T: Real> DiscreteStack<T> {
    pub fn new(pairs: &[(T, T)]) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::InvalidDensity("stack needs at least one play".into()));
        }
        let mut radii = Vec::with_capacity(pairs.len());
        let mut weights = Vec::with_capacity(pairs.len());
        for &(r, mu) in pairs {
            if !(mu >= T::zero()) || !mu.is_finite() {
                return Err(Error::InvalidDensity(format!("stack weight must be >= 0, got {mu}")));
            }
            radii.push(r);
            weights.push(mu);
        }
        // validates ordering
        RGrid::from_radii(radii.clone())?;
        Ok(DiscreteStack { radii, weights })
    }

    pub fn radii(&self) -> &[T] {
        &self.radii
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }
}

/// User-supplied density. The potential kernel is obtained by numerical integration,
/// `G(r, v) = v g(r, v) - int_0^v g(r, s) ds`.
#[derive(Clone)]
pub struct CustomDensity<T> {
    g: Kernel<T>,
    slope_bound: Profile<T>,
    support: T,
    saturation: Option<T>,
}

impl<T: Real> CustomDensity<T> {
    /// `g` must be nondecreasing in `v` with `g(r, 0) = 0` and vanish for `r > support`.
    /// `slope_bound(r)` bounds `dg/dv`. If `g(r, .)` is constant outside `[-V, V]`,
    /// pass `saturation = Some(V)` so that the output bound `M1` is finite.
    pub fn new<G, M>(g: G, slope_bound: M, support: T, saturation: Option<T>) -> Self
    where
        G: Fn(T, T) -> T + Send + Sync + 'static,
        M: Fn(T) -> T + Send + Sync + 'static,
    {
        CustomDensity { g: Arc::new(g), slope_bound: Arc::new(slope_bound), support, saturation }
    }
}

impl<T> fmt::Debug for CustomDensity<T>
where
    T: fmt::Debug,
{
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomDensity")
            .field("support", &self.support)
            .field("saturation", &self.saturation)
            .finish_non_exhaustive()
    }
}

#[derive(Debug, Clone)]
pub enum PreisachDensity<T> {
    /// `g(r, v) = proj_[-1+r, 1-r](v)` for `r <= 1`, zero otherwise.
    Projection,
    PrandtlIshlinskii(DiscreteStack<T>),
    Custom(CustomDensity<T>),
    /// `g = 0`: purely reversible material.
    Zero,
}

/// Projection kernel.
#[inline]
pub fn projection_g<T: Real>(r: T, v: T) -> T {
    if r <= T::one() {
        let s = T::one() - r;
        clamp(v, -s, s)
    } else {
        T::zero()
    }
}

/// Potential kernel of the projection density.
#[inline]
pub fn projection_potential<T: Real>(r: T, v: T) -> T {
    if r <= T::one() {
        let s = T::one() - r;
        let a = v.abs().min(s);
        a * a * T::half()
    } else {
        T::zero()
    }
}

impl<T: Real> PreisachDensity<T> {
    pub fn prandtl(pairs: &[(T, T)]) -> Result<Self> {
        Ok(PreisachDensity::PrandtlIshlinskii(DiscreteStack::new(pairs)?))
    }

    /// Radius beyond which the density vanishes.
    pub fn support(&self) -> T {
        match self {
            PreisachDensity::Projection => T::one(),
            PreisachDensity::PrandtlIshlinskii(s) => s.radii.last().copied().unwrap_or_else(T::zero),
            PreisachDensity::Custom(c) => c.support,
            PreisachDensity::Zero => T::zero(),
        }
    }

    /// Memory grid suited to this density: the stack levels for discrete stacks,
    /// `m` uniform cells on `(0, cutoff]` otherwise.
    pub fn build_grid(&self, m: usize, cutoff: T) -> Result<RGrid<T>> {
        match self {
            PreisachDensity::PrandtlIshlinskii(s) => RGrid::from_radii(s.radii.clone()),
            _ => RGrid::uniform(m, cutoff),
        }
    }

    /// Checks that `grid` can be used to evaluate this density.
    pub fn check_grid(&self, grid: &RGrid<T>) -> Result<()> {
        match self {
            PreisachDensity::PrandtlIshlinskii(s) => {
                if grid.kind() != GridKind::Atoms || grid.radii() != s.radii.as_slice() {
                    return Err(Error::InvalidParameter(
                        "grid levels do not match the Prandtl-Ishlinskii stack".into(),
                    ));
                }
            }
            PreisachDensity::Zero => {}
            _ => {
                if grid.kind() != GridKind::Cells {
                    return Err(Error::InvalidParameter("continuous densities need a uniform cell grid".into()));
                }
            }
        }
        Ok(())
    }

    /// Continuous kernel `g(r, v)`; `None` for discrete stacks.
    pub fn g(&self, r: T, v: T) -> Option<T> {
        match self {
            PreisachDensity::Projection => Some(projection_g(r, v)),
            PreisachDensity::Custom(c) => Some(if r > c.support { T::zero() } else { (c.g)(r, v) }),
            PreisachDensity::Zero => Some(T::zero()),
            PreisachDensity::PrandtlIshlinskii(_) => None,
        }
    }

    /// Continuous potential kernel `G(r, v) = int_0^v v' dg/dv(r, v') dv'`.
    pub fn potential_kernel(&self, r: T, v: T) -> Option<T> {
        match self {
            PreisachDensity::Projection => Some(projection_potential(r, v)),
            PreisachDensity::Custom(c) => Some(custom_potential(c, r, v)),
            PreisachDensity::Zero => Some(T::zero()),
            PreisachDensity::PrandtlIshlinskii(_) => None,
        }
    }

    /// Slope bound `mu(r)`; `None` for discrete stacks.
    pub fn slope_bound(&self, r: T) -> Option<T> {
        match self {
            PreisachDensity::Projection => Some(if r < T::one() { T::one() } else { T::zero() }),
            PreisachDensity::Custom(c) => Some(if r > c.support { T::zero() } else { (c.slope_bound)(r) }),
            PreisachDensity::Zero => Some(T::zero()),
            PreisachDensity::PrandtlIshlinskii(_) => None,
        }
    }

    /// `g_j(v)`: contribution of memory level `j` of `grid` at play value `v`.
    #[inline]
    pub fn cell_value(&self, grid: &RGrid<T>, j: usize, v: T) -> T {
        match self {
            PreisachDensity::Projection => grid.widths()[j] * projection_g(grid.radii()[j], v),
            PreisachDensity::PrandtlIshlinskii(s) => s.weights[j] * v,
            PreisachDensity::Custom(c) => {
                let r = grid.radii()[j];
                if r > c.support {
                    T::zero()
                } else {
                    grid.widths()[j] * (c.g)(r, v)
                }
            }
            PreisachDensity::Zero => T::zero(),
        }
    }

    /// `G_j(v)`: potential contribution of level `j`.
    #[inline]
    pub fn cell_potential(&self, grid: &RGrid<T>, j: usize, v: T) -> T {
        match self {
            PreisachDensity::Projection => grid.widths()[j] * projection_potential(grid.radii()[j], v),
            PreisachDensity::PrandtlIshlinskii(s) => s.weights[j] * v * v * T::half(),
            PreisachDensity::Custom(c) => grid.widths()[j] * custom_potential(c, grid.radii()[j], v),
            PreisachDensity::Zero => T::zero(),
        }
    }

    /// Discrete slope weights `mu_j` (Lipschitz constants of `g_j`).
    pub fn discrete_weights(&self, grid: &RGrid<T>) -> Vec<T> {
        match self {
            PreisachDensity::PrandtlIshlinskii(s) => s.weights.clone(),
            _ => (0..grid.len())
                .map(|j| {
                    let mu = self.slope_bound(grid.radii()[j]).unwrap_or_else(T::zero);
                    grid.widths()[j] * mu
                })
                .collect(),
        }
    }

    /// Bound on `|P|` for the discretized operator, `sum_j g_j(+V) - g_j(-V)`; `None` if unbounded.
    pub fn discrete_output_bound(&self, grid: &RGrid<T>) -> Option<T> {
        let sat = match self {
            PreisachDensity::Projection => T::one(),
            PreisachDensity::Zero => return Some(T::zero()),
            PreisachDensity::Custom(c) => c.saturation?,
            PreisachDensity::PrandtlIshlinskii(s) => {
                return if s.weights.iter().all(|&w| w == T::zero()) { Some(T::zero()) } else { None }
            }
        };
        Some(
            (0..grid.len())
                .map(|j| self.cell_value(grid, j, sat) - self.cell_value(grid, j, -sat))
                .fold(T::zero(), |a, b| a + b),
        )
    }

    /// `M = int_0^inf mu(r) dr`.
    pub fn slope_integral(&self) -> Result<T> {
        let m = match self {
            PreisachDensity::PrandtlIshlinskii(s) => s.weights.iter().fold(T::zero(), |a, &b| a + b),
            PreisachDensity::Zero => T::zero(),
            _ => {
                let mu = |r: T| self.slope_bound(r).unwrap_or_else(T::zero);
                adaptive_simpson(&mu, T::zero(), self.support(), quad_tol())
            }
        };
        finite_or(m, "slope integral M")
    }

    /// `M1 = int_0^inf int_R dg/dv dv dr`.
    pub fn output_bound(&self) -> Result<T> {
        let m1 = match self {
            PreisachDensity::Zero => T::zero(),
            PreisachDensity::PrandtlIshlinskii(s) => {
                if s.weights.iter().all(|&w| w == T::zero()) {
                    T::zero()
                } else {
                    T::infinity()
                }
            }
            PreisachDensity::Projection => {
                let span = |r: T| projection_g(r, T::one()) - projection_g(r, -T::one());
                adaptive_simpson(&span, T::zero(), T::one(), quad_tol())
            }
            PreisachDensity::Custom(c) => match c.saturation {
                None => T::infinity(),
                Some(v) => {
                    let span = |r: T| (c.g)(r, v) - (c.g)(r, -v);
                    adaptive_simpson(&span, T::zero(), c.support, quad_tol())
                }
            },
        };
        finite_or(m1, "output bound M1")
    }
}

fn quad_tol<T: Real>() -> T {
    T::lit(1e-13).max(T::epsilon() * T::lit(16.0))
}

fn finite_or<T: Real>(x: T, what: &str) -> Result<T> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::InvalidDensity(format!("{what} is not finite")))
    }
}

fn custom_potential<T: Real>(c: &CustomDensity<T>, r: T, v: T) -> T {
    if r > c.support || v == T::zero() {
        return T::zero();
    }
    let g = |s: T| (c.g)(r, s);
    v * g(v) - adaptive_simpson(&g, T::zero(), v, quad_tol())
}

/// `(M, M1)` of a density.
pub fn density_constants<T: Real>(density: &PreisachDensity<T>) -> Result<(T, T)> {
    Ok((density.slope_integral()?, density.output_bound()?))
}
