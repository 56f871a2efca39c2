use ndarray::{Array1, Array2, ArrayView1, ArrayView2};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Lower-triangular Cholesky factor of a symmetric positive-definite matrix.
#[derive(Debug, Clone)]
pub struct Cholesky<T> {
    lower: Array2<T>,
}

impl<T: Real> Cholesky<T> {
    /// Factors `a = L L^T`. Only the lower triangle of `a` is read.
    ///
    /// Pivots at or below `n * eps * max_diag` are rejected as singular.
    pub fn factor(a: ArrayView2<'_, T>) -> Result<Self> {
        let n = a.nrows();
        if a.ncols() != n {
            return Err(Error::DimensionMismatch(format!("{:?} is not square", a.dim())));
        }
        let max_diag = (0..n).map(|i| a[[i, i]].abs()).fold(T::zero(), T::max);
        let threshold = T::epsilon() * T::from_usize_lossy(n.max(1)) * max_diag;
        let mut l = Array2::<T>::zeros((n, n));
        for j in 0..n {
            let mut d = a[[j, j]];
            for p in 0..j {
                d = d - l[[j, p]] * l[[j, p]];
            }
            if !(d > threshold) || !d.is_finite() {
                return Err(Error::SingularMatrix {
                    row: j,
                    pivot: d.to_f64_lossy(),
                });
            }
            let djj = d.sqrt();
            l[[j, j]] = djj;
            for i in (j + 1)..n {
                let mut s = a[[i, j]];
                for p in 0..j {
                    s = s - l[[i, p]] * l[[j, p]];
                }
                l[[i, j]] = s / djj;
            }
        }
        Ok(Self { lower: l })
    }

    pub fn dim(&self) -> usize {
        self.lower.nrows()
    }

    /// Solves `L L^T x = b` by forward then backward substitution.
    pub fn solve(&self, b: ArrayView1<'_, T>) -> Result<Array1<T>> {
        let n = self.dim();
        if b.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "rhs has length {}, system has {n} rows",
                b.len()
            )));
        }
        let l = &self.lower;
        let mut y = b.to_owned();
        for i in 0..n {
            let mut s = y[i];
            for p in 0..i {
                s = s - l[[i, p]] * y[p];
            }
            y[i] = s / l[[i, i]];
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for p in (i + 1)..n {
                s = s - l[[p, i]] * y[p];
            }
            y[i] = s / l[[i, i]];
        }
        Ok(y)
    }
}

pub fn cholesky_solve<T: Real>(a: ArrayView2<'_, T>, b: ArrayView1<'_, T>) -> Result<Array1<T>> {
    Cholesky::factor(a)?.solve(b)
}

/// `H^T H`.
pub fn gram<T: Real>(h: ArrayView2<'_, T>) -> Array2<T> {
    h.t().dot(&h)
}

pub(crate) fn add_diagonal<T: Real>(a: &mut Array2<T>, value: T) {
    for i in 0..a.nrows() {
        a[[i, i]] = a[[i, i]] + value;
    }
}

fn check_finite<T: Real>(name: &str, values: impl IntoIterator<Item = T>) -> Result<()> {
    if values.into_iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput(format!("{name} contains non-finite values")));
    }
    Ok(())
}

fn check_rows<T>(h: &ArrayView2<'_, T>, y: &ArrayView1<'_, T>) -> Result<()> {
    if h.nrows() != y.len() {
        return Err(Error::DimensionMismatch(format!(
            "H has {} rows, Y has {} entries",
            h.nrows(),
            y.len()
        )));
    }
    Ok(())
}

/// Minimizer of `1/2 ||Y - H w||^2 + mu/2 ||w||^2`, i.e.
/// `(H^T H + mu I)^{-1} H^T Y`, through a Cholesky solve.
pub fn ridge_solve<T: Real>(h: ArrayView2<'_, T>, y: ArrayView1<'_, T>, mu: T) -> Result<Array1<T>> {
    check_rows(&h, &y)?;
    if !(mu >= T::zero()) || !mu.is_finite() {
        return Err(Error::param("mu", format!("must be finite and >= 0, got {mu}")));
    }
    check_finite("H", h.iter().copied())?;
    check_finite("Y", y.iter().copied())?;
    let mut a = gram(h);
    add_diagonal(&mut a, mu);
    let rhs = h.t().dot(&y);
    cholesky_solve(a.view(), rhs.view())
}

/// Minimizer of `1/2 ||Y - H w||^2 + mu/2 ||w||^2 + gamma/2 ||B w||^2`, i.e.
/// `(gamma B^T B + mu I + H^T H)^{-1} H^T Y`.
///
/// With `gamma == 0` or an all-zero `B` the system, and therefore the
/// result, is exactly the one [`ridge_solve`] forms.
pub fn csfr_solve<T: Real>(
    h: ArrayView2<'_, T>,
    y: ArrayView1<'_, T>,
    b: ArrayView2<'_, T>,
    mu: T,
    gamma: T,
) -> Result<Array1<T>> {
    check_rows(&h, &y)?;
    if !(mu > T::zero()) || !mu.is_finite() {
        return Err(Error::param("mu", format!("must be finite and > 0, got {mu}")));
    }
    if !(gamma >= T::zero()) || !gamma.is_finite() {
        return Err(Error::param("gamma", format!("must be finite and >= 0, got {gamma}")));
    }
    if b.ncols() != h.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "B has {} columns, H has {}",
            b.ncols(),
            h.ncols()
        )));
    }
    check_finite("H", h.iter().copied())?;
    check_finite("Y", y.iter().copied())?;
    check_finite("B", b.iter().copied())?;
    let mut a = gram(h);
    add_diagonal(&mut a, mu);
    if gamma > T::zero() && b.nrows() > 0 {
        a.scaled_add(gamma, &gram(b));
    }
    let rhs = h.t().dot(&y);
    cholesky_solve(a.view(), rhs.view())
}
