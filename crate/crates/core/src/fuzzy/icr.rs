//! Interpolation-consistency (MixUp-style) batches over unlabeled samples.

use ndarray::{Array1, Array2, ArrayView1, ArrayView2, Axis, Zip};
use rand::Rng;
use rand_distr::{Beta, Distribution};

use super::antecedent::Antecedent;
use super::hidden::hidden_row_into;
use crate::error::{Error, Result};
use crate::rng;
use crate::scalar::Real;

/// `M` interpolated samples `u~_i = l_i u1_i + (1 - l_i) u2_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct IcrBatch<T> {
    u1: Array2<T>,
    u2: Array2<T>,
    lambdas: Array1<T>,
    u_tilde: Array2<T>,
    /// Pool row indices behind `u1`/`u2` when drawn by [`icr_augment`].
    source_rows: Option<(Vec<usize>, Vec<usize>)>,
}

impl<T: Real> IcrBatch<T> {
    /// Builds a batch from explicit endpoints and mixing weights.
    pub fn from_parts(u1: Array2<T>, u2: Array2<T>, lambdas: Array1<T>) -> Result<Self> {
        if u1.dim() != u2.dim() || lambdas.len() != u1.nrows() {
            return Err(Error::DimensionMismatch(format!(
                "u1 {:?}, u2 {:?}, lambdas {}",
                u1.dim(),
                u2.dim(),
                lambdas.len()
            )));
        }
        if lambdas.iter().any(|&l| !(l >= T::zero() && l <= T::one())) {
            return Err(Error::InvalidInput("mixing weights must lie in [0, 1]".into()));
        }
        let mut u_tilde = Array2::zeros(u1.dim());
        for (i, mut row) in u_tilde.outer_iter_mut().enumerate() {
            let l = lambdas[i];
            for j in 0..row.len() {
                row[j] = l * u1[[i, j]] + (T::one() - l) * u2[[i, j]];
            }
        }
        Ok(Self {
            u1,
            u2,
            lambdas,
            u_tilde,
            source_rows: None,
        })
    }

    pub fn len(&self) -> usize {
        self.lambdas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambdas.is_empty()
    }

    pub fn u1(&self) -> ArrayView2<'_, T> {
        self.u1.view()
    }

    pub fn u2(&self) -> ArrayView2<'_, T> {
        self.u2.view()
    }

    pub fn lambdas(&self) -> ArrayView1<'_, T> {
        self.lambdas.view()
    }

    pub fn u_tilde(&self) -> ArrayView2<'_, T> {
        self.u_tilde.view()
    }

    pub fn source_rows(&self) -> Option<(&[usize], &[usize])> {
        self.source_rows
            .as_ref()
            .map(|(a, b)| (a.as_slice(), b.as_slice()))
    }
}

/// Draws `M` index pairs (with replacement) from the unlabeled pool and `M`
/// mixing weights from `Beta(beta_a, beta_b)`. Deterministic in `seed`.
pub fn icr_augment<T: Real>(
    unlabeled: ArrayView2<'_, T>,
    m: usize,
    beta_a: f64,
    beta_b: f64,
    seed: u64,
) -> Result<IcrBatch<T>> {
    if unlabeled.nrows() == 0 {
        return Err(Error::InvalidInput("unlabeled pool is empty".into()));
    }
    if m == 0 {
        return Err(Error::param("m_interp", "need at least one interpolated sample"));
    }
    let beta = Beta::new(beta_a, beta_b)
        .map_err(|e| Error::param("beta", format!("({beta_a}, {beta_b}): {e}")))?;
    let mut r = rng::seeded(seed);
    let n = unlabeled.nrows();
    let first: Vec<usize> = (0..m).map(|_| r.random_range(0..n)).collect();
    let second: Vec<usize> = (0..m).map(|_| r.random_range(0..n)).collect();
    let lambdas: Array1<T> = (0..m).map(|_| T::of(beta.sample(&mut r))).collect();
    let mut batch = IcrBatch::from_parts(
        unlabeled.select(Axis(0), &first),
        unlabeled.select(Axis(0), &second),
        lambdas,
    )?;
    batch.source_rows = Some((first, second));
    Ok(batch)
}

/// `B(U) = H(U~) - diag(l) H(U1) - diag(1 - l) H(U2)`.
pub fn icr_matrix<T: Real>(ant: &Antecedent<T>, batch: &IcrBatch<T>) -> Result<Array2<T>> {
    ant.check_input(batch.u1.ncols())?;
    let p = ant.param_count();
    let mut b = Array2::zeros((batch.len(), p));
    Zip::indexed(b.axis_iter_mut(Axis(0))).par_for_each(|i, mut out| {
        let mut h1 = Array1::zeros(p);
        let mut h2 = Array1::zeros(p);
        hidden_row_into(batch.u_tilde.row(i), ant, out.view_mut());
        hidden_row_into(batch.u1.row(i), ant, h1.view_mut());
        hidden_row_into(batch.u2.row(i), ant, h2.view_mut());
        combine(out.as_slice_mut().expect("row-major"), batch.lambdas[i], h1.view(), h2.view());
    });
    Ok(b)
}

/// Same as [`icr_matrix`], reading the endpoint rows from a precomputed
/// `H(pool)` when the batch carries its source indices.
pub fn icr_matrix_with_pool<T: Real>(
    ant: &Antecedent<T>,
    batch: &IcrBatch<T>,
    pool_hidden: ArrayView2<'_, T>,
) -> Result<Array2<T>> {
    let Some((first, second)) = batch.source_rows() else {
        return icr_matrix(ant, batch);
    };
    ant.check_input(batch.u1.ncols())?;
    if pool_hidden.ncols() != ant.param_count() {
        return Err(Error::DimensionMismatch("pooled hidden matrix width".into()));
    }
    let mut b = Array2::zeros((batch.len(), ant.param_count()));
    Zip::indexed(b.axis_iter_mut(Axis(0))).par_for_each(|i, mut out| {
        hidden_row_into(batch.u_tilde.row(i), ant, out.view_mut());
        combine(
            out.as_slice_mut().expect("row-major"),
            batch.lambdas[i],
            pool_hidden.row(first[i]),
            pool_hidden.row(second[i]),
        );
    });
    Ok(b)
}

#[inline]
fn combine<T: Real>(out: &mut [T], lambda: T, h1: ArrayView1<'_, T>, h2: ArrayView1<'_, T>) {
    let rest = T::one() - lambda;
    for ((o, &a), &b) in out.iter_mut().zip(h1.iter()).zip(h2.iter()) {
        *o = *o - lambda * a - rest * b;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuzzy::hidden_matrix;
    use ndarray::array;

    fn ant() -> Antecedent<f64> {
        Antecedent::new(array![[-0.5, 0.2], [0.4, -0.3]], array![[0.6, 0.4], [0.3, 0.8]]).unwrap()
    }

    #[test]
    fn lambda_one_returns_first_endpoint() {
        let b = IcrBatch::from_parts(
            array![[0.1, 0.2], [0.3, -0.4]],
            array![[0.9, 0.9], [-0.7, 0.0]],
            array![1.0, 1.0],
        )
        .unwrap();
        assert_eq!(b.u_tilde(), b.u1());
    }

    #[test]
    fn midpoint() {
        let b = IcrBatch::from_parts(array![[1.0, 0.0]], array![[0.0, 1.0]], array![0.5]).unwrap();
        assert_eq!(b.u_tilde().row(0).to_vec(), vec![0.5, 0.5]);
    }

    #[test]
    fn same_seed_same_batch() {
        let pool = Array2::from_shape_fn((30, 2), |(i, j)| (i as f64 * 0.1 - 1.0) * (j as f64 + 1.0));
        let a = icr_augment(pool.view(), 17, 1.0, 1.0, 99).unwrap();
        let b = icr_augment(pool.view(), 17, 1.0, 1.0, 99).unwrap();
        assert_eq!(a, b);
        let c = icr_augment(pool.view(), 17, 1.0, 1.0, 100).unwrap();
        assert_ne!(a, c);
        assert!(a.lambdas().iter().all(|&l| (0.0..=1.0).contains(&l)));
    }

    #[test]
    fn empty_pool_is_rejected() {
        let pool = Array2::<f64>::zeros((0, 2));
        assert!(matches!(
            icr_augment(pool.view(), 3, 1.0, 1.0, 0),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn degenerate_pairs_give_zero_rows() {
        let u = array![[0.3, -0.2], [0.8, 0.1]];
        let b = IcrBatch::from_parts(u.clone(), u.clone(), array![0.37, 0.9]).unwrap();
        let m = icr_matrix(&ant(), &b).unwrap();
        assert!(m.iter().all(|&v| v.abs() < 1e-15));
        let e = IcrBatch::from_parts(u.clone(), array![[0.0, 0.0], [-1.0, 1.0]], array![1.0, 1.0])
            .unwrap();
        let m = icr_matrix(&ant(), &e).unwrap();
        assert!(m.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn matches_three_hidden_matrices() {
        let mut r = rng::seeded(31);
        let u1 = Array2::from_shape_fn((4, 2), |_| r.random_range(-1.0..1.0));
        let u2 = Array2::from_shape_fn((4, 2), |_| r.random_range(-1.0..1.0));
        let l = Array1::from_shape_fn(4, |_| r.random_range(0.0..1.0));
        let b = IcrBatch::from_parts(u1.clone(), u2.clone(), l.clone()).unwrap();
        let got = icr_matrix(&ant(), &b).unwrap();
        let ht = hidden_matrix(b.u_tilde(), &ant()).unwrap();
        let h1 = hidden_matrix(u1.view(), &ant()).unwrap();
        let h2 = hidden_matrix(u2.view(), &ant()).unwrap();
        for i in 0..4 {
            for p in 0..6 {
                let expect = ht[[i, p]] - l[i] * h1[[i, p]] - (1.0 - l[i]) * h2[[i, p]];
                assert!((got[[i, p]] - expect).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn pooled_path_is_bitwise_identical() {
        let pool = Array2::from_shape_fn((25, 2), |(i, j)| ((i * 7 + j * 3) % 11) as f64 / 5.5 - 1.0);
        let batch = icr_augment(pool.view(), 40, 2.0, 0.5, 4).unwrap();
        let hp = hidden_matrix(pool.view(), &ant()).unwrap();
        assert_eq!(
            icr_matrix(&ant(), &batch).unwrap(),
            icr_matrix_with_pool(&ant(), &batch, hp.view()).unwrap()
        );
    }
}
