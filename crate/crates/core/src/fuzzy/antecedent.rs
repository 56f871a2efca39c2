use ndarray::{Array1, Array2, ArrayView1, ArrayView2};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Lower bound applied to every estimated membership width.
pub const SIGMA_MIN: f64 = 1e-6;

/// Gaussian membership `exp(-((x - m) / sigma)^2)`.
pub fn gaussian_mf<T: Real>(x: T, m: T, sigma: T) -> Result<T> {
    if !(sigma > T::zero()) {
        return Err(Error::param("sigma", format!("must be > 0, got {sigma}")));
    }
    let z = (x - m) / sigma;
    Ok((-(z * z)).exp())
}

/// Rule antecedents: one Gaussian per rule and input dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct Antecedent<T> {
    centers: Array2<T>,
    sigmas: Array2<T>,
}

impl<T: Real> Antecedent<T> {
    /// Both matrices are `K x D`. Widths must be strictly positive and every
    /// entry finite.
    pub fn new(centers: Array2<T>, sigmas: Array2<T>) -> Result<Self> {
        if centers.dim() != sigmas.dim() {
            return Err(Error::DimensionMismatch(format!(
                "centers {:?} vs sigmas {:?}",
                centers.dim(),
                sigmas.dim()
            )));
        }
        if centers.nrows() == 0 || centers.ncols() == 0 {
            return Err(Error::InvalidInput("antecedent needs K >= 1 and D >= 1".into()));
        }
        if centers.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("non-finite rule center".into()));
        }
        if sigmas.iter().any(|s| !(s.is_finite() && *s > T::zero())) {
            return Err(Error::param("sigmas", "widths must be finite and > 0"));
        }
        Ok(Self { centers, sigmas })
    }

    pub fn rule_count(&self) -> usize {
        self.centers.nrows()
    }

    pub fn dim(&self) -> usize {
        self.centers.ncols()
    }

    /// Length of the flattened consequent vector, `K (D + 1)`.
    pub fn param_count(&self) -> usize {
        self.rule_count() * (self.dim() + 1)
    }

    pub fn centers(&self) -> ArrayView2<'_, T> {
        self.centers.view()
    }

    pub fn sigmas(&self) -> ArrayView2<'_, T> {
        self.sigmas.view()
    }

    pub(crate) fn check_input(&self, len: usize) -> Result<()> {
        if len != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "input has {len} features, antecedent expects {}",
                self.dim()
            )));
        }
        Ok(())
    }

    /// Writes normalized firing strengths into `out` (length `K`).
    ///
    /// The products of `D` Gaussians are formed as sums of exponents and the
    /// largest exponent is subtracted before exponentiating, so the
    /// normalizer is at least one for any finite input.
    pub(crate) fn firing_into(&self, x: ArrayView1<'_, T>, out: &mut [T]) {
        debug_assert_eq!(out.len(), self.rule_count());
        let mut best = T::neg_infinity();
        for (k, slot) in out.iter_mut().enumerate() {
            let mut log_prod = T::zero();
            for ((&xj, &m), &s) in x
                .iter()
                .zip(self.centers.row(k).iter())
                .zip(self.sigmas.row(k).iter())
            {
                let z = (xj - m) / s;
                log_prod = log_prod - z * z;
            }
            *slot = log_prod;
            if log_prod > best {
                best = log_prod;
            }
        }
        let mut total = T::zero();
        for slot in out.iter_mut() {
            *slot = (*slot - best).exp();
            total = total + *slot;
        }
        for slot in out.iter_mut() {
            *slot = *slot / total;
        }
    }
}

/// Normalized rule activations for one input; a point on the `K`-simplex.
pub fn firing_strengths<T: Real>(x: ArrayView1<'_, T>, ant: &Antecedent<T>) -> Result<Array1<T>> {
    ant.check_input(x.len())?;
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("non-finite input feature".into()));
    }
    let mut out = vec![T::zero(); ant.rule_count()];
    ant.firing_into(x, &mut out);
    Ok(Array1::from(out))
}

/// Flattened consequent weights laid out rule by rule as
/// `[w_10, w_11, .., w_1D, w_20, .., w_KD]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConsequentWeights<T> {
    w: Array1<T>,
    rules: usize,
    dim: usize,
}

impl<T: Real> ConsequentWeights<T> {
    pub fn new(w: Array1<T>, rules: usize, dim: usize) -> Result<Self> {
        if w.len() != rules * (dim + 1) {
            return Err(Error::DimensionMismatch(format!(
                "weight vector has length {}, expected K(D+1) = {}",
                w.len(),
                rules * (dim + 1)
            )));
        }
        if w.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("non-finite consequent weight".into()));
        }
        Ok(Self { w, rules, dim })
    }

    pub fn zeros(rules: usize, dim: usize) -> Self {
        Self {
            w: Array1::zeros(rules * (dim + 1)),
            rules,
            dim,
        }
    }

    pub fn as_array(&self) -> &Array1<T> {
        &self.w
    }

    pub fn into_array(self) -> Array1<T> {
        self.w
    }

    pub fn rule_count(&self) -> usize {
        self.rules
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `[w_k0, w_k1, .., w_kD]` for rule `k`.
    pub fn rule(&self, k: usize) -> ArrayView1<'_, T> {
        let width = self.dim + 1;
        self.w.slice(ndarray::s![k * width..(k + 1) * width])
    }
}

/// Takagi–Sugeno output: firing-strength weighted sum of the rules' affine
/// consequents.
pub fn ts_predict<T: Real>(
    x: ArrayView1<'_, T>,
    ant: &Antecedent<T>,
    w: &ConsequentWeights<T>,
) -> Result<T> {
    if w.rule_count() != ant.rule_count() || w.dim() != ant.dim() {
        return Err(Error::DimensionMismatch(format!(
            "weights are for K={}, D={} but antecedent has K={}, D={}",
            w.rule_count(),
            w.dim(),
            ant.rule_count(),
            ant.dim()
        )));
    }
    let phi = firing_strengths(x, ant)?;
    let mut y = T::zero();
    for (k, &p) in phi.iter().enumerate() {
        let rule = w.rule(k);
        let mut local = rule[0];
        for (&wj, &xj) in rule.iter().skip(1).zip(x.iter()) {
            local = local + wj * xj;
        }
        y = y + p * local;
    }
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn gaussian_examples() {
        assert_eq!(gaussian_mf(0.3, 0.3, 0.5).unwrap(), 1.0);
        assert!(close(gaussian_mf(1.0, 0.0, 1.0).unwrap(), (-1.0f64).exp(), 1e-15));
        let v = gaussian_mf(0.5, -0.5, 0.5).unwrap();
        assert!(close(v, (-4.0f64).exp(), 1e-15));
        assert!(close(v, 0.018316, 1e-6));
    }

    #[test]
    fn gaussian_rejects_non_positive_sigma() {
        assert!(matches!(
            gaussian_mf(0.0, 0.0, 0.0),
            Err(Error::InvalidParameter { name: "sigma", .. })
        ));
        assert!(gaussian_mf(0.0, 0.0, -1.0).is_err());
        assert!(gaussian_mf(0.0, 0.0, f64::NAN).is_err());
    }

    #[test]
    fn single_rule_fires_fully() {
        let ant = Antecedent::new(array![[0.2, -0.4]], array![[0.3, 0.1]]).unwrap();
        let phi = firing_strengths(array![0.9, 0.9].view(), &ant).unwrap();
        assert_eq!(phi.to_vec(), vec![1.0]);
    }

    #[test]
    fn symmetric_rules_split_evenly() {
        let ant = Antecedent::new(array![[-1.0, -1.0], [1.0, 1.0]], array![[0.5, 0.7], [0.5, 0.7]])
            .unwrap();
        let phi = firing_strengths(array![0.0, 0.0].view(), &ant).unwrap();
        assert!(close(phi[0], 0.5, 1e-15) && close(phi[1], 0.5, 1e-15));
    }

    #[test]
    fn two_rule_one_dim_example() {
        let ant = Antecedent::new(array![[0.0], [1.0]], array![[1.0], [1.0]]).unwrap();
        let phi = firing_strengths(array![1.0].view(), &ant).unwrap();
        let e = (-1.0f64).exp();
        assert!(close(phi[0], e / (e + 1.0), 1e-15));
        assert!(close(phi[1], 1.0 / (e + 1.0), 1e-15));
        assert!(close(phi[0], 0.2689, 1e-4) && close(phi[1], 0.7311, 1e-4));
    }

    #[test]
    fn far_inputs_do_not_underflow() {
        // Every raw product is exp(-1e6) == 0 in f64.
        let ant = Antecedent::new(array![[0.0], [1.0]], array![[1e-3], [1e-3]]).unwrap();
        let phi = firing_strengths(array![1000.0].view(), &ant).unwrap();
        assert!(phi.iter().all(|v: &f64| v.is_finite()));
        assert!(close(phi.sum(), 1.0, 1e-12));
        assert_eq!(phi[1], 1.0);
    }

    #[test]
    fn zero_weights_predict_zero() {
        let ant = Antecedent::new(array![[0.0], [1.0]], array![[1.0], [1.0]]).unwrap();
        let w = ConsequentWeights::zeros(2, 1);
        assert_eq!(ts_predict(array![0.7].view(), &ant, &w).unwrap(), 0.0);
    }

    #[test]
    fn single_rule_is_linear_model() {
        let ant = Antecedent::new(array![[0.0, 0.0]], array![[1.0, 1.0]]).unwrap();
        let w = ConsequentWeights::new(array![0.5, 2.0, -3.0], 1, 2).unwrap();
        let y = ts_predict(array![0.25, 0.5].view(), &ant, &w).unwrap();
        assert!(close(y, 0.5 + 2.0 * 0.25 - 3.0 * 0.5, 1e-15));
    }

    #[test]
    fn prediction_matches_termwise_sum() {
        // K=3, D=2 fixed "random" instance; oracle evaluates each rule with
        // gaussian_mf and normalizes by hand.
        let centers = array![[0.1, -0.3], [-0.6, 0.4], [0.8, 0.9]];
        let sigmas = array![[0.4, 0.7], [0.3, 0.5], [0.9, 0.2]];
        let w = array![0.3, -1.2, 0.7, 1.1, 0.05, -0.4, -0.9, 2.0, 0.6];
        let x = [0.25, -0.15];
        let ant = Antecedent::new(centers.clone(), sigmas.clone()).unwrap();
        let cw = ConsequentWeights::new(w.clone(), 3, 2).unwrap();

        let mut raw = [0.0; 3];
        for k in 0..3 {
            raw[k] = (0..2)
                .map(|j| gaussian_mf(x[j], centers[[k, j]], sigmas[[k, j]]).unwrap())
                .product();
        }
        let total: f64 = raw.iter().sum();
        let mut expect = 0.0;
        for k in 0..3 {
            let local = w[3 * k] + w[3 * k + 1] * x[0] + w[3 * k + 2] * x[1];
            expect += raw[k] / total * local;
        }
        let got = ts_predict(ndarray::arr1(&x).view(), &ant, &cw).unwrap();
        assert!(close(got, expect, 1e-13), "{got} vs {expect}");
    }

    #[test]
    fn weight_length_is_checked() {
        assert!(ConsequentWeights::new(array![1.0, 2.0, 3.0], 2, 1).is_err());
        let cw = ConsequentWeights::new(array![1.0, 2.0, 3.0, 4.0], 2, 1).unwrap();
        assert_eq!(cw.rule(1).to_vec(), vec![3.0, 4.0]);
    }

    #[test]
    fn antecedent_validation() {
        assert!(Antecedent::new(array![[0.0]], array![[0.0]]).is_err());
        assert!(Antecedent::new(array![[0.0, 1.0]], array![[1.0]]).is_err());
        assert!(Antecedent::new(array![[f64::NAN]], array![[1.0]]).is_err());
    }

    #[test]
    fn works_in_single_precision() {
        let ant = Antecedent::new(array![[0.0f32], [1.0]], array![[1.0f32], [1.0]]).unwrap();
        let phi = firing_strengths(array![1.0f32].view(), &ant).unwrap();
        assert!((phi.sum() - 1.0).abs() < 1e-6);
    }
}
