//! The eight-dimensional artificial regression benchmark.

use ndarray::{Array1, Array2};
use rand::seq::SliceRandom;
use rand_distr::{Distribution, Normal};

use super::dataset::Dataset;
use crate::rng;
use crate::scalar::Real;

pub const SYNTH_DIM: usize = 8;
pub const SYNTH_DEFAULT_N: usize = 5000;

/// Column means `0, 0.5, .., 3.5`.
pub fn synth_means() -> [f64; SYNTH_DIM] {
    std::array::from_fn(|j| 0.5 * j as f64)
}

/// Column standard deviations `0.2, 0.4, .., 1.6`.
pub fn synth_stds() -> [f64; SYNTH_DIM] {
    std::array::from_fn(|j| 0.2 * (j + 1) as f64)
}

/// `0.3 sum x_j^2 + 0.7 sum cos(x_j)`.
pub fn synth_target(x: &[f64]) -> f64 {
    0.3 * x.iter().map(|v| v * v).sum::<f64>() + 0.7 * x.iter().map(|v| v.cos()).sum::<f64>()
}

/// Generates `n` fully labeled rows.
///
/// With `noise`, `R` is the clean label range; 5% of the rows get an extra
/// `N(0.1 R, (0.1 R)^2)` draw and another, disjoint 10% get `N(R, (0.1 R)^2)`.
pub fn synth_generate<T: Real>(n: usize, noise: bool, seed: u64) -> Dataset<T> {
    let mut r = rng::seeded(seed);
    let cols: Vec<Normal<f64>> = synth_means()
        .iter()
        .zip(synth_stds())
        .map(|(&m, s)| Normal::new(m, s).expect("valid normal"))
        .collect();
    let mut x = Array2::<f64>::zeros((n, SYNTH_DIM));
    for mut row in x.outer_iter_mut() {
        for (v, dist) in row.iter_mut().zip(&cols) {
            *v = dist.sample(&mut r);
        }
    }
    let mut y: Array1<f64> = x
        .outer_iter()
        .map(|row| synth_target(row.as_slice().expect("row-major")))
        .collect();
    if noise && n > 0 {
        let lo = y.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = y.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let range = hi - lo;
        let type1 = Normal::new(0.1 * range, 0.1 * range).expect("valid normal");
        let type2 = Normal::new(range, 0.1 * range).expect("valid normal");
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut r);
        let n1 = (0.05 * n as f64).round() as usize;
        let n2 = (0.10 * n as f64).round() as usize;
        for &i in &order[..n1] {
            y[i] += type1.sample(&mut r);
        }
        for &i in &order[n1..(n1 + n2).min(n)] {
            y[i] += type2.sample(&mut r);
        }
    }
    Dataset::fully_labeled(x.mapv(T::of), y.mapv(T::of)).expect("finite synthetic data")
}
