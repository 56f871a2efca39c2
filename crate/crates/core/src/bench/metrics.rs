use ndarray::ArrayView1;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Root mean squared error divided by the population standard deviation of
/// `y`; a constant mean predictor scores exactly one.
pub fn nrmse<T: Real>(y_hat: ArrayView1<'_, T>, y: ArrayView1<'_, T>) -> Result<T> {
    if y_hat.len() != y.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} predictions for {} targets",
            y_hat.len(),
            y.len()
        )));
    }
    if y.len() < 2 {
        return Err(Error::UndefinedMetric("NRMSE needs at least two targets".into()));
    }
    let n = T::from_usize_lossy(y.len());
    let mean = y.sum() / n;
    let var: T = y.iter().map(|&v| (v - mean) * (v - mean)).sum::<T>() / n;
    if !(var > T::zero()) {
        return Err(Error::UndefinedMetric("targets are constant".into()));
    }
    let sse: T = y_hat
        .iter()
        .zip(y.iter())
        .map(|(&p, &t)| (p - t) * (p - t))
        .sum();
    Ok((sse / (n * var)).sqrt())
}

/// Mean and sample (n - 1) standard deviation; the deviation of a single
/// value is zero.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() == 1 {
        return (mean, 0.0);
    }
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    (mean, (ss / (n - 1.0)).sqrt())
}
