use ndarray::{Array1, Array2, ArrayView1, ArrayView2, ArrayViewMut1, Axis, Zip};

use super::antecedent::Antecedent;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Fills `out` (length `K (D + 1)`) with
/// `[phi_k, phi_k x_1, .., phi_k x_D]` for every rule `k`.
pub fn hidden_row_into<T: Real>(
    x: ArrayView1<'_, T>,
    ant: &Antecedent<T>,
    mut out: ArrayViewMut1<'_, T>,
) {
    let k = ant.rule_count();
    let width = ant.dim() + 1;
    let mut phi = vec![T::zero(); k];
    ant.firing_into(x, &mut phi);
    for (r, &p) in phi.iter().enumerate() {
        let base = r * width;
        out[base] = p;
        for (j, &xj) in x.iter().enumerate() {
            out[base + 1 + j] = p * xj;
        }
    }
}

pub fn hidden_row<T: Real>(x: ArrayView1<'_, T>, ant: &Antecedent<T>) -> Result<Array1<T>> {
    ant.check_input(x.len())?;
    let mut out = Array1::zeros(ant.param_count());
    hidden_row_into(x, ant, out.view_mut());
    Ok(out)
}

/// Hidden (design) matrix `H(X)` of shape `N x K(D+1)`; `H(X) w` is the
/// vector of model outputs. Rows are computed in parallel.
pub fn hidden_matrix<T: Real>(x: ArrayView2<'_, T>, ant: &Antecedent<T>) -> Result<Array2<T>> {
    ant.check_input(x.ncols())?;
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("non-finite feature value".into()));
    }
    let mut h = Array2::zeros((x.nrows(), ant.param_count()));
    Zip::from(h.axis_iter_mut(Axis(0)))
        .and(x.axis_iter(Axis(0)))
        .par_for_each(|out, row| hidden_row_into(row, ant, out));
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuzzy::{ts_predict, ConsequentWeights};
    use crate::rng;
    use ndarray::array;
    use rand::Rng;

    #[test]
    fn single_rule_single_feature() {
        let ant = Antecedent::new(array![[0.0]], array![[1.0]]).unwrap();
        let h = hidden_matrix(array![[0.5]].view(), &ant).unwrap();
        assert_eq!(h, array![[1.0, 0.5]]);
    }

    #[test]
    fn rule_activation_columns_sum_to_one() {
        let mut r = rng::seeded(4);
        let d = 3;
        let ant = Antecedent::new(
            Array2::from_shape_fn((2, d), |_| r.random_range(-1.0..1.0)),
            Array2::from_shape_fn((2, d), |_| r.random_range(0.2..1.0)),
        )
        .unwrap();
        let x: Array2<f64> = Array2::from_shape_fn((40, d), |_| r.random_range(-1.0..1.0));
        let h = hidden_matrix(x.view(), &ant).unwrap();
        let total = &h.column(0) + &h.column(d + 1);
        assert!(total.iter().all(|v| (v - 1.0).abs() < 1e-12));
    }

    #[test]
    fn product_with_weights_matches_predictions() {
        let mut r = rng::seeded(8);
        let (k, d) = (3, 2);
        let ant = Antecedent::new(
            Array2::from_shape_fn((k, d), |_| r.random_range(-1.0..1.0)),
            Array2::from_shape_fn((k, d), |_| r.random_range(0.2..1.0)),
        )
        .unwrap();
        let w: Array1<f64> = Array1::from_shape_fn(k * (d + 1), |_| r.random_range(-2.0..2.0));
        let cw = ConsequentWeights::new(w.clone(), k, d).unwrap();
        let x = Array2::from_shape_fn((25, d), |_| r.random_range(-1.0..1.0));
        let y = hidden_matrix(x.view(), &ant).unwrap().dot(&w);
        for (i, row) in x.outer_iter().enumerate() {
            let direct = ts_predict(row, &ant, &cw).unwrap();
            assert!((y[i] - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let ant = Antecedent::new(array![[0.0, 0.0]], array![[1.0, 1.0]]).unwrap();
        assert!(matches!(
            hidden_matrix(array![[0.5]].view(), &ant),
            Err(Error::DimensionMismatch(_))
        ));
    }
}
