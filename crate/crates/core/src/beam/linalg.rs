use crate::scalar::Real;

/// Symmetric tridiagonal matrix factored once for the Thomas algorithm.
#[derive(Debug, Clone)]
pub(crate) struct Tridiagonal<T> {
    /// Sub/super diagonal, `off[i]` couples rows `i` and `i + 1`.
    off: Vec<T>,
    cprime: Vec<T>,
    denom: Vec<T>,
}

impl<T: Real> Tridiagonal<T> {
    pub(crate) fn factor(diag: &[T], off: &[T]) -> Self {
        let n = diag.len();
        let mut cprime = vec![T::zero(); n];
        let mut denom = vec![T::zero(); n];
        for i in 0..n {
            let d = if i == 0 { diag[0] } else { diag[i] - off[i - 1] * cprime[i - 1] };
            denom[i] = d;
            if i + 1 < n {
                cprime[i] = off[i] / d;
            }
        }
        Tridiagonal { off: off.to_vec(), cprime, denom }
    }

    pub(crate) fn solve(&self, rhs: &mut [T]) {
        let n = rhs.len();
        rhs[0] = rhs[0] / self.denom[0];
        for i in 1..n {
            rhs[i] = (rhs[i] - self.off[i - 1] * rhs[i - 1]) / self.denom[i];
        }
        for i in (0..n - 1).rev() {
            rhs[i] = rhs[i] - self.cprime[i] * rhs[i + 1];
        }
    }
}
