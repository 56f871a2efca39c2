use ndarray::{Array1, Array2, ArrayView2, Axis};
use rand::seq::index;

use super::antecedent::SIGMA_MIN;
use crate::error::{Error, Result};
use crate::rng;
use crate::scalar::Real;

/// Distances below this are treated as a sample sitting on a center.
pub const SINGULAR_DISTANCE: f64 = 1e-12;

/// Soft assignment of `N` samples to `K` clusters; rows lie on the simplex.
#[derive(Debug, Clone, PartialEq)]
pub struct MembershipMatrix<T> {
    values: Array2<T>,
    fuzziness: T,
}

impl<T: Real> MembershipMatrix<T> {
    pub fn new(values: Array2<T>, fuzziness: T) -> Result<Self> {
        let tol = T::of(1e-9);
        for (i, row) in values.outer_iter().enumerate() {
            if row.iter().any(|&u| !(u >= T::zero() && u <= T::one())) {
                return Err(Error::InvalidInput(format!("membership row {i} leaves [0, 1]")));
            }
            let s: T = row.sum();
            if (s - T::one()).abs() > tol {
                return Err(Error::InvalidInput(format!("membership row {i} sums to {s}")));
            }
        }
        Ok(Self { values, fuzziness })
    }

    pub fn values(&self) -> ArrayView2<'_, T> {
        self.values.view()
    }

    pub fn fuzziness(&self) -> T {
        self.fuzziness
    }

    pub fn rule_count(&self) -> usize {
        self.values.ncols()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FcmConfig<T> {
    pub rules: usize,
    /// Fuzziness exponent; must exceed one.
    pub fuzziness: T,
    /// Stop once no center moves farther than this between iterations.
    pub tol: T,
    pub max_iter: usize,
    pub seed: u64,
}

impl<T: Real> FcmConfig<T> {
    pub fn new(rules: usize, fuzziness: T, seed: u64) -> Self {
        Self {
            rules,
            fuzziness,
            tol: T::of(1e-6),
            max_iter: 300,
            seed,
        }
    }

    pub(crate) fn validate(&self, n: usize) -> Result<()> {
        validate_fuzziness(self.fuzziness)?;
        if self.rules == 0 {
            return Err(Error::param("rules", "need at least one rule"));
        }
        if self.rules > n {
            return Err(Error::param(
                "rules",
                format!("{} clusters requested for {n} samples", self.rules),
            ));
        }
        if !(self.tol > T::zero()) {
            return Err(Error::param("tol", "must be > 0"));
        }
        Ok(())
    }
}

pub(crate) fn validate_fuzziness<T: Real>(alpha: T) -> Result<()> {
    if !(alpha > T::one()) || !alpha.is_finite() {
        return Err(Error::param(
            "fuzziness",
            format!("must be a finite value > 1, got {alpha}"),
        ));
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct FcmFit<T> {
    pub centers: Array2<T>,
    pub memberships: MembershipMatrix<T>,
    pub iterations: usize,
    pub converged: bool,
    /// Objective after each iteration's center update.
    pub objective_trace: Vec<T>,
}

/// Membership update. A sample closer than [`SINGULAR_DISTANCE`] to a
/// center is assigned to the nearest center outright.
pub fn update_memberships<T: Real>(
    x: ArrayView2<'_, T>,
    centers: ArrayView2<'_, T>,
    alpha: T,
) -> Array2<T> {
    let k = centers.nrows();
    let mut u = Array2::zeros((x.nrows(), k));
    let singular = T::of(SINGULAR_DISTANCE * SINGULAR_DISTANCE);
    // u_ik = d_ik^{-2/(a-1)} / sum_c d_ic^{-2/(a-1)}, with d^2 in hand:
    // exponent on d^2 is -1/(a-1). Evaluated as a shifted softmax.
    let expo = -(T::one() / (alpha - T::one()));
    let mut logs = vec![T::zero(); k];
    for (xi, mut ui) in x.outer_iter().zip(u.outer_iter_mut()) {
        let mut nearest = 0;
        let mut nearest_d2 = T::infinity();
        for (c, center) in centers.outer_iter().enumerate() {
            let d2: T = xi
                .iter()
                .zip(center.iter())
                .map(|(&a, &b)| (a - b) * (a - b))
                .sum();
            if d2 < nearest_d2 {
                nearest_d2 = d2;
                nearest = c;
            }
            logs[c] = expo * d2.ln();
        }
        if nearest_d2 < singular {
            ui[nearest] = T::one();
            continue;
        }
        let top = logs.iter().copied().fold(T::neg_infinity(), T::max);
        let mut total = T::zero();
        for (slot, &l) in ui.iter_mut().zip(logs.iter()) {
            *slot = (l - top).exp();
            total = total + *slot;
        }
        ui.mapv_inplace(|v| v / total);
    }
    u
}

/// `(sum_i u_ik^a X_i, sum_i u_ik^a)` for every cluster.
pub(crate) fn weighted_sums<T: Real>(
    x: ArrayView2<'_, T>,
    u: ArrayView2<'_, T>,
    alpha: T,
) -> (Array2<T>, Array1<T>) {
    let k = u.ncols();
    let mut sums = Array2::zeros((k, x.ncols()));
    let mut mass = Array1::zeros(k);
    for (xi, ui) in x.outer_iter().zip(u.outer_iter()) {
        for c in 0..k {
            let w = ui[c].powf(alpha);
            if w == T::zero() {
                continue;
            }
            mass[c] = mass[c] + w;
            sums.row_mut(c).scaled_add(w, &xi);
        }
    }
    (sums, mass)
}

/// Center update. A cluster with zero total membership keeps its previous
/// center.
pub fn update_centers<T: Real>(
    x: ArrayView2<'_, T>,
    u: ArrayView2<'_, T>,
    alpha: T,
    previous: ArrayView2<'_, T>,
) -> Array2<T> {
    let (mut sums, mass) = weighted_sums(x, u, alpha);
    for (c, mut row) in sums.outer_iter_mut().enumerate() {
        if mass[c] > T::zero() {
            row.mapv_inplace(|v| v / mass[c]);
        } else {
            row.assign(&previous.row(c));
        }
    }
    sums
}

/// `1/2 sum_k sum_i u_ik^a ||X_i - m_k||^2`.
pub fn fcm_objective<T: Real>(
    x: ArrayView2<'_, T>,
    centers: ArrayView2<'_, T>,
    u: ArrayView2<'_, T>,
    alpha: T,
) -> T {
    let mut total = T::zero();
    for (xi, ui) in x.outer_iter().zip(u.outer_iter()) {
        for (c, center) in centers.outer_iter().enumerate() {
            let d2: T = xi
                .iter()
                .zip(center.iter())
                .map(|(&a, &b)| (a - b) * (a - b))
                .sum();
            total = total + ui[c].powf(alpha) * d2;
        }
    }
    total * T::of(0.5)
}

/// One membership update followed by one center update.
pub fn fcm_step<T: Real>(
    x: ArrayView2<'_, T>,
    centers: ArrayView2<'_, T>,
    alpha: T,
) -> (Array2<T>, Array2<T>) {
    let u = update_memberships(x, centers, alpha);
    let next = update_centers(x, u.view(), alpha, centers);
    (u, next)
}

/// `K` distinct sample rows drawn with the seeded stream.
pub(crate) fn initial_centers<T: Real>(x: ArrayView2<'_, T>, rules: usize, seed: u64) -> Array2<T> {
    let mut rng = rng::seeded(seed);
    let picks = index::sample(&mut rng, x.nrows(), rules).into_vec();
    x.select(Axis(0), &picks)
}

pub(crate) fn max_center_shift<T: Real>(a: ArrayView2<'_, T>, b: ArrayView2<'_, T>) -> T {
    a.outer_iter()
        .zip(b.outer_iter())
        .map(|(p, q)| {
            p.iter()
                .zip(q.iter())
                .map(|(&u, &v)| (u - v) * (u - v))
                .sum::<T>()
                .sqrt()
        })
        .fold(T::zero(), T::max)
}

/// Fuzzy c-means from `K` seeded random sample rows.
pub fn fcm_fit<T: Real>(x: ArrayView2<'_, T>, cfg: &FcmConfig<T>) -> Result<FcmFit<T>> {
    cfg.validate(x.nrows())?;
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("non-finite feature value".into()));
    }
    let mut centers = initial_centers(x, cfg.rules, cfg.seed);
    let mut u = Array2::zeros((x.nrows(), cfg.rules));
    let mut trace = Vec::new();
    let mut converged = false;
    let mut iterations = 0;
    while iterations < cfg.max_iter {
        let (next_u, next_centers) = fcm_step(x, centers.view(), cfg.fuzziness);
        iterations += 1;
        let shift = max_center_shift(centers.view(), next_centers.view());
        trace.push(fcm_objective(x, next_centers.view(), next_u.view(), cfg.fuzziness));
        u = next_u;
        centers = next_centers;
        if shift < cfg.tol {
            converged = true;
            break;
        }
    }
    if iterations == 0 {
        u = update_memberships(x, centers.view(), cfg.fuzziness);
    }
    Ok(FcmFit {
        centers,
        memberships: MembershipMatrix::new(u, cfg.fuzziness)?,
        iterations,
        converged,
        objective_trace: trace,
    })
}

/// Membership-weighted standard deviation of every cluster along every
/// feature, floored at [`SIGMA_MIN`].
pub fn fuzzy_sigmas<T: Real>(
    x: ArrayView2<'_, T>,
    memberships: &MembershipMatrix<T>,
    centers: ArrayView2<'_, T>,
) -> Result<Array2<T>> {
    let u = memberships.values();
    if u.nrows() != x.nrows() || u.ncols() != centers.nrows() || centers.ncols() != x.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "x {:?}, memberships {:?}, centers {:?}",
            x.dim(),
            u.dim(),
            centers.dim()
        )));
    }
    Ok(sigmas_from(x, u, centers, memberships.fuzziness()))
}

pub(crate) fn sigmas_from<T: Real>(
    x: ArrayView2<'_, T>,
    u: ArrayView2<'_, T>,
    centers: ArrayView2<'_, T>,
    alpha: T,
) -> Array2<T> {
    let (k, d) = centers.dim();
    let floor = T::of(SIGMA_MIN);
    let mut num = Array2::<T>::zeros((k, d));
    let mut mass = Array1::<T>::zeros(k);
    for (xi, ui) in x.outer_iter().zip(u.outer_iter()) {
        for c in 0..k {
            let w = ui[c].powf(alpha);
            mass[c] = mass[c] + w;
            for j in 0..d {
                let diff = xi[j] - centers[[c, j]];
                num[[c, j]] = num[[c, j]] + w * diff * diff;
            }
        }
    }
    for c in 0..k {
        for j in 0..d {
            let s = if mass[c] > T::zero() {
                (num[[c, j]] / mass[c]).sqrt()
            } else {
                T::zero()
            };
            num[[c, j]] = if s > floor { s } else { floor };
        }
    }
    num
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::{array, Array2};
    use rand::Rng;
    use rand_distr::{Distribution, Normal};

    fn cfg(k: usize, alpha: f64) -> FcmConfig<f64> {
        FcmConfig {
            rules: k,
            fuzziness: alpha,
            tol: 1e-10,
            max_iter: 500,
            seed: 11,
        }
    }

    /// Plain Lloyd's k-means with deterministic farthest-point seeding; the
    /// oracle for the well-separated blob case.
    fn lloyd(x: &Array2<f64>, k: usize) -> Array2<f64> {
        let mut centers = Array2::zeros((k, x.ncols()));
        centers.row_mut(0).assign(&x.row(0));
        for c in 1..k {
            let far = (0..x.nrows())
                .max_by(|&a, &b| {
                    let da = (0..c)
                        .map(|q| (&x.row(a) - &centers.row(q)).mapv(|v| v * v).sum())
                        .fold(f64::INFINITY, f64::min);
                    let db = (0..c)
                        .map(|q| (&x.row(b) - &centers.row(q)).mapv(|v| v * v).sum())
                        .fold(f64::INFINITY, f64::min);
                    da.partial_cmp(&db).unwrap()
                })
                .unwrap();
            centers.row_mut(c).assign(&x.row(far));
        }
        for _ in 0..100 {
            let mut sums = Array2::<f64>::zeros(centers.dim());
            let mut counts = vec![0usize; k];
            for row in x.outer_iter() {
                let best = (0..k)
                    .min_by(|&a, &b| {
                        let da = (&row - &centers.row(a)).mapv(|v| v * v).sum();
                        let db = (&row - &centers.row(b)).mapv(|v| v * v).sum();
                        da.partial_cmp(&db).unwrap()
                    })
                    .unwrap();
                sums.row_mut(best).scaled_add(1.0, &row);
                counts[best] += 1;
            }
            for c in 0..k {
                let n = counts[c] as f64;
                centers.row_mut(c).assign(&(&sums.row(c) / n));
            }
        }
        centers
    }

    #[test]
    fn single_cluster_is_the_mean() {
        let x = array![[0.0, 1.0], [2.0, -1.0], [4.0, 3.0]];
        let fit = fcm_fit(x.view(), &cfg(1, 2.0)).unwrap();
        assert!((fit.centers[[0, 0]] - 2.0).abs() < 1e-12);
        assert!((fit.centers[[0, 1]] - 1.0).abs() < 1e-12);
        assert!(fit.memberships.values().iter().all(|&u| u == 1.0));
    }

    #[test]
    fn two_points_two_clusters() {
        let x = array![[-1.0], [1.0]];
        let fit = fcm_fit(x.view(), &cfg(2, 2.0)).unwrap();
        let mut c: Vec<f64> = fit.centers.column(0).to_vec();
        c.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((c[0] + 1.0).abs() < 1e-9 && (c[1] - 1.0).abs() < 1e-9);
        for row in fit.memberships.values().outer_iter() {
            let hi = row.iter().copied().fold(0.0, f64::max);
            assert!((hi - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn blobs_match_lloyd_oracle() {
        let mut rng = rng::seeded(5);
        let noise = Normal::new(0.0, 0.1).unwrap();
        let mut x = Array2::zeros((200, 1));
        for i in 0..200 {
            let mean = if i < 100 { -5.0 } else { 5.0 };
            x[[i, 0]] = mean + noise.sample(&mut rng);
        }
        let oracle = lloyd(&x, 2);
        let fit = fcm_fit(x.view(), &cfg(2, 2.0)).unwrap();
        let direct = (fit.centers[[0, 0]] - oracle[[0, 0]]).abs()
            + (fit.centers[[1, 0]] - oracle[[1, 0]]).abs();
        let swapped = (fit.centers[[0, 0]] - oracle[[1, 0]]).abs()
            + (fit.centers[[1, 0]] - oracle[[0, 0]]).abs();
        let (a, b) = if direct <= swapped {
            (fit.centers[[0, 0]] - oracle[[0, 0]], fit.centers[[1, 0]] - oracle[[1, 0]])
        } else {
            (fit.centers[[0, 0]] - oracle[[1, 0]], fit.centers[[1, 0]] - oracle[[0, 0]])
        };
        assert!(a.abs() < 0.1 && b.abs() < 0.1, "{:?} vs {:?}", fit.centers, oracle);
        let blob_means = [x.column(0).slice(ndarray::s![..100]).mean().unwrap(),
            x.column(0).slice(ndarray::s![100..]).mean().unwrap()];
        for c in fit.centers.column(0) {
            assert!(blob_means.iter().any(|m| (c - m).abs() < 0.1));
        }
    }

    #[test]
    fn objective_never_increases() {
        let mut rng = rng::seeded(9);
        let x = Array2::from_shape_fn((120, 3), |_| rng.random_range(-1.0..1.0));
        for alpha in [1.1, 1.5, 2.0, 3.0] {
            let fit = fcm_fit(x.view(), &cfg(4, alpha)).unwrap();
            for pair in fit.objective_trace.windows(2) {
                assert!(pair[1] <= pair[0] * (1.0 + 1e-12), "alpha {alpha}: {pair:?}");
            }
        }
    }

    #[test]
    fn memberships_are_row_stochastic() {
        let mut rng = rng::seeded(2);
        let x = Array2::from_shape_fn((50, 2), |_| rng.random_range(-1.0..1.0));
        let fit = fcm_fit(x.view(), &cfg(3, 1.1)).unwrap();
        for row in fit.memberships.values().outer_iter() {
            assert!((row.sum() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn sample_on_center_gets_hard_assignment() {
        let x: Array2<f64> = array![[0.5, 0.5], [0.0, 0.0]];
        let centers = array![[0.5, 0.5], [1.0, 1.0]];
        let u = update_memberships(x.view(), centers.view(), 2.0);
        assert_eq!(u.row(0).to_vec(), vec![1.0, 0.0]);
        assert!((u.row(1).sum() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn invalid_parameters() {
        let x = array![[0.0], [1.0]];
        assert!(matches!(
            fcm_fit(x.view(), &cfg(2, 1.0)),
            Err(Error::InvalidParameter { name: "fuzziness", .. })
        ));
        assert!(matches!(
            fcm_fit(x.view(), &cfg(3, 2.0)),
            Err(Error::InvalidParameter { name: "rules", .. })
        ));
    }

    #[test]
    fn identical_points_floor_sigma() {
        let x = array![[0.3, 0.3], [0.3, 0.3], [0.3, 0.3]];
        let m = MembershipMatrix::new(array![[1.0], [1.0], [1.0]], 1.1).unwrap();
        let s = fuzzy_sigmas(x.view(), &m, array![[0.3, 0.3]].view()).unwrap();
        assert!(s.iter().all(|&v| v == SIGMA_MIN));
    }

    #[test]
    fn single_cluster_sigma_is_population_std() {
        let x: Array2<f64> = array![[1.0, 0.0], [2.0, 0.0], [4.0, 3.0], [5.0, -1.0]];
        let m = MembershipMatrix::new(Array2::ones((4, 1)), 2.0).unwrap();
        let mean = x.mean_axis(Axis(0)).unwrap();
        let s = fuzzy_sigmas(x.view(), &m, mean.clone().insert_axis(Axis(0)).view()).unwrap();
        for j in 0..2 {
            let std = x.column(j).std(0.0);
            assert!((s[[0, j]] - std).abs() < 1e-12);
        }
    }

    #[test]
    fn sigma_matches_elementwise_evaluation() {
        let mut rng = rng::seeded(21);
        let x: Array2<f64> = Array2::from_shape_fn((5, 2), |_| rng.random_range(-1.0..1.0));
        let mut u: Array2<f64> = Array2::from_shape_fn((5, 3), |_| rng.random_range(0.01..1.0));
        for mut row in u.outer_iter_mut() {
            let s = row.sum();
            row.mapv_inplace(|v| v / s);
        }
        let centers: Array2<f64> = Array2::from_shape_fn((3, 2), |_| rng.random_range(-1.0..1.0));
        let alpha = 1.7;
        let m = MembershipMatrix::new(u.clone(), alpha).unwrap();
        let got = fuzzy_sigmas(x.view(), &m, centers.view()).unwrap();
        for k in 0..3 {
            for j in 0..2 {
                let mut num = 0.0;
                let mut den = 0.0;
                for i in 0..5 {
                    let w = u[[i, k]].powf(alpha);
                    num += w * (x[[i, j]] - centers[[k, j]]).powi(2);
                    den += w;
                }
                assert!((got[[k, j]] - (num / den).sqrt()).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn membership_matrix_validation() {
        assert!(MembershipMatrix::new(array![[0.5, 0.6]], 2.0).is_err());
        assert!(MembershipMatrix::new(array![[1.5, -0.5]], 2.0).is_err());
        assert!(MembershipMatrix::new(array![[0.25, 0.75]], 2.0).is_ok());
    }
}
