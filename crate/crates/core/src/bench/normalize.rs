use ndarray::{Array1, Array2, ArrayView2, Axis};

use super::dataset::Dataset;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Per-column affine map onto `[-1, 1]`, fitted on training rows only.
#[derive(Debug, Clone, PartialEq)]
pub struct MinMaxScaler<T> {
    min: Array1<T>,
    max: Array1<T>,
}

impl<T: Real> MinMaxScaler<T> {
    /// Fits column ranges. Constant columns are reported by index and map
    /// to zero.
    pub fn fit(x: ArrayView2<'_, T>) -> Result<(Self, Vec<usize>)> {
        if x.nrows() == 0 {
            return Err(Error::InvalidInput("cannot fit a scaler on zero rows".into()));
        }
        let min = x.fold_axis(Axis(0), T::infinity(), |&a, &b| a.min(b));
        let max = x.fold_axis(Axis(0), T::neg_infinity(), |&a, &b| a.max(b));
        let constant = (0..x.ncols()).filter(|&j| !(max[j] > min[j])).collect();
        Ok((Self { min, max }, constant))
    }

    pub fn from_bounds(min: Array1<T>, max: Array1<T>) -> Result<Self> {
        if min.len() != max.len() {
            return Err(Error::DimensionMismatch("scaler bounds".into()));
        }
        Ok(Self { min, max })
    }

    pub fn min(&self) -> &Array1<T> {
        &self.min
    }

    pub fn max(&self) -> &Array1<T> {
        &self.max
    }

    pub fn dim(&self) -> usize {
        self.min.len()
    }

    /// Rows outside the fitted range map outside `[-1, 1]`; nothing is
    /// clipped.
    pub fn transform(&self, x: ArrayView2<'_, T>) -> Result<Array2<T>> {
        if x.ncols() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "scaler fitted on {} columns, got {}",
                self.dim(),
                x.ncols()
            )));
        }
        let two = T::of(2.0);
        let mut out = x.to_owned();
        for (j, mut col) in out.axis_iter_mut(Axis(1)).enumerate() {
            let (lo, hi) = (self.min[j], self.max[j]);
            if hi > lo {
                let span = hi - lo;
                col.mapv_inplace(|v| two * (v - lo) / span - T::one());
            } else {
                col.fill(T::zero());
            }
        }
        Ok(out)
    }
}

/// Fits a scaler on `ds` and returns the transformed copy, the scaler and
/// one warning per constant column.
pub fn normalize_features<T: Real>(ds: &Dataset<T>) -> Result<(Dataset<T>, MinMaxScaler<T>, Vec<String>)> {
    let (scaler, constant) = MinMaxScaler::fit(ds.features())?;
    let warnings = constant
        .iter()
        .map(|j| format!("feature column {j} is constant; mapped to 0"))
        .collect();
    let x = scaler.transform(ds.features())?;
    Ok((ds.with_features(x), scaler, warnings))
}
