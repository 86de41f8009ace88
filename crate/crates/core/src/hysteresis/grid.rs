use crate::error::{Error, Result};
use crate::scalar::Real;

/// How the operator output is assembled from the memory levels of a grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridKind {
    /// Uniform cells `[r_{j-1}, r_j]` on `(0, R]`; plays are tracked at the cell midpoints and
    /// each cell contributes `width * g(midpoint, xi)` (midpoint rule).
    Cells,
    /// Isolated memory levels of a discrete Preisach stack; each level carries its own weight.
    Atoms,
}

/// Discretized memory axis.
#[derive(Debug, Clone, PartialEq)]
pub struct RGrid<T> {
    kind: GridKind,
    radii: Vec<T>,
    widths: Vec<T>,
    cutoff: T,
}

impl<T: Real> RGrid<T> {
    /// `m` uniform cells covering `(0, cutoff]`.
    pub fn uniform(m: usize, cutoff: T) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParameter("grid needs at least one cell".into()));
        }
        if !(cutoff > T::zero()) || !cutoff.is_finite() {
            return Err(Error::InvalidParameter(format!("grid cutoff must be positive, got {cutoff}")));
        }
        let mf = T::of_usize(m);
        let width = cutoff / mf;
        let radii = (0..m).map(|j| (T::of_usize(j) + T::half()) * cutoff / mf).collect();
        Ok(RGrid { kind: GridKind::Cells, radii, widths: vec![width; m], cutoff })
    }

    /// Memory levels given explicitly (discrete Preisach / Prandtl–Ishlinskii stacks).
    pub fn from_radii(radii: Vec<T>) -> Result<Self> {
        let mut prev = T::zero();
        for &r in &radii {
            if !(r > prev) || !r.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "memory levels must be positive and strictly increasing (got {r} after {prev})"
                )));
            }
            prev = r;
        }
        let mut widths = Vec::with_capacity(radii.len());
        let mut left = T::zero();
        for &r in &radii {
            widths.push(r - left);
            left = r;
        }
        Ok(RGrid { kind: GridKind::Atoms, cutoff: prev, radii, widths })
    }

    pub fn kind(&self) -> GridKind {
        self.kind
    }

    /// Radii at which plays are tracked.
    pub fn radii(&self) -> &[T] {
        &self.radii
    }

    /// Cell widths (for atom grids: distance to the previous level).
    pub fn widths(&self) -> &[T] {
        &self.widths
    }

    pub fn cutoff(&self) -> T {
        self.cutoff
    }

    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }

    /// Largest cell width.
    pub fn spacing(&self) -> T {
        self.widths.iter().fold(T::zero(), |a, &w| a.max(w))
    }
}
