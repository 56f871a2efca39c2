use crate::error::{Error, Result};
use crate::scalar::Real;

/// Hyperparameters shared by the structure (fuzzy c-means) and parameter
/// (consequent weight) consensus loops.
#[derive(Debug, Clone, PartialEq)]
pub struct AdmmConfig<T> {
    /// Number of rules / clusters.
    pub rules: usize,
    /// Fuzzy c-means exponent.
    pub fuzziness: T,
    /// Penalty on center consensus.
    pub rho_s: T,
    /// Penalty on weight consensus.
    pub rho_p: T,
    /// L2 weight on the consequent parameters.
    pub mu: T,
    /// Interpolation-consistency weight.
    pub gamma: T,
    /// Bound on pairwise disagreement of local centers.
    pub eps1: T,
    /// Bound on the change of center duals between iterations.
    pub eps2: T,
    /// Bound on both weight residuals (consensus gap and successive change).
    pub param_tol: T,
    pub max_iter_structure: usize,
    pub max_iter_parameter: usize,
    /// Interpolated samples drawn per agent and iteration.
    pub m_interp: usize,
    pub beta_a: f64,
    pub beta_b: f64,
    pub seed: u64,
    /// Draw each agent's interpolation batch once instead of every iteration.
    pub freeze_augmentation: bool,
}

impl<T: Real> Default for AdmmConfig<T> {
    fn default() -> Self {
        Self {
            rules: 5,
            fuzziness: T::of(1.1),
            rho_s: T::of(0.1),
            rho_p: T::of(0.1),
            mu: T::of(0.1),
            gamma: T::of(0.1),
            eps1: T::of(1e-4),
            eps2: T::of(1e-4),
            param_tol: T::of(1e-4),
            max_iter_structure: 100,
            max_iter_parameter: 1000,
            m_interp: 500,
            beta_a: 1.0,
            beta_b: 1.0,
            seed: 0,
            freeze_augmentation: false,
        }
    }
}

fn positive<T: Real>(name: &'static str, v: T) -> Result<()> {
    if v > T::zero() && v.is_finite() {
        Ok(())
    } else {
        Err(Error::param(name, format!("must be finite and > 0, got {v}")))
    }
}

impl<T: Real> AdmmConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if self.rules == 0 {
            return Err(Error::param("rules", "need at least one rule"));
        }
        crate::fuzzy::validate_fuzziness(self.fuzziness)?;
        positive("rho_s", self.rho_s)?;
        positive("rho_p", self.rho_p)?;
        positive("mu", self.mu)?;
        positive("eps1", self.eps1)?;
        positive("eps2", self.eps2)?;
        positive("param_tol", self.param_tol)?;
        if !(self.gamma >= T::zero()) || !self.gamma.is_finite() {
            return Err(Error::param("gamma", "must be finite and >= 0"));
        }
        if self.max_iter_structure == 0 || self.max_iter_parameter == 0 {
            return Err(Error::param("max_iter", "iteration caps must be >= 1"));
        }
        if self.gamma > T::zero() && self.m_interp == 0 {
            return Err(Error::param("m_interp", "must be >= 1 when gamma > 0"));
        }
        if !(self.beta_a > 0.0 && self.beta_b > 0.0) {
            return Err(Error::param("beta", "shape parameters must be > 0"));
        }
        Ok(())
    }
}
