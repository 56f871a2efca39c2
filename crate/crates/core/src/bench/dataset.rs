use ndarray::{Array1, Array2, ArrayView1, ArrayView2, Axis};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Features, targets and a labeled mask.
///
/// Targets are stored for every row, but only rows with the mask set may be
/// read through [`Dataset::labeled_targets`]; unlabeled targets are kept so a
/// held-out evaluation can use them.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset<T> {
    features: Array2<T>,
    targets: Array1<T>,
    labeled: Vec<bool>,
}

impl<T: Real> Dataset<T> {
    pub fn new(features: Array2<T>, targets: Array1<T>, labeled: Vec<bool>) -> Result<Self> {
        let (n, d) = features.dim();
        if n == 0 || d == 0 {
            return Err(Error::InvalidInput(format!(
                "dataset needs N >= 1 and D >= 1, got {n} x {d}"
            )));
        }
        if targets.len() != n || labeled.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "{n} feature rows, {} targets, {} mask entries",
                targets.len(),
                labeled.len()
            )));
        }
        if features.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("non-finite feature value".into()));
        }
        if let Some(i) = (0..n).find(|&i| labeled[i] && !targets[i].is_finite()) {
            return Err(Error::InvalidInput(format!("labeled row {i} has a non-finite target")));
        }
        Ok(Self {
            features,
            targets,
            labeled,
        })
    }

    /// Every row labeled.
    pub fn fully_labeled(features: Array2<T>, targets: Array1<T>) -> Result<Self> {
        let n = features.nrows();
        Self::new(features, targets, vec![true; n])
    }

    pub fn len(&self) -> usize {
        self.features.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dim(&self) -> usize {
        self.features.ncols()
    }

    pub fn features(&self) -> ArrayView2<'_, T> {
        self.features.view()
    }

    /// All targets, labeled or not. Training code must use
    /// [`Dataset::labeled_targets`] instead.
    pub fn targets(&self) -> ArrayView1<'_, T> {
        self.targets.view()
    }

    pub fn labeled_mask(&self) -> &[bool] {
        &self.labeled
    }

    pub fn labeled_count(&self) -> usize {
        self.labeled.iter().filter(|&&l| l).count()
    }

    pub fn unlabeled_count(&self) -> usize {
        self.len() - self.labeled_count()
    }

    pub fn labeled_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.labeled[i]).collect()
    }

    pub fn unlabeled_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| !self.labeled[i]).collect()
    }

    pub fn labeled_features(&self) -> Array2<T> {
        self.features.select(Axis(0), &self.labeled_indices())
    }

    pub fn labeled_targets(&self) -> Array1<T> {
        self.targets.select(Axis(0), &self.labeled_indices())
    }

    pub fn unlabeled_features(&self) -> Array2<T> {
        self.features.select(Axis(0), &self.unlabeled_indices())
    }

    /// Rows `indices`, in that order, with their mask entries.
    pub fn select(&self, indices: &[usize]) -> Self {
        Self {
            features: self.features.select(Axis(0), indices),
            targets: self.targets.select(Axis(0), indices),
            labeled: indices.iter().map(|&i| self.labeled[i]).collect(),
        }
    }

    pub fn with_mask(mut self, labeled: Vec<bool>) -> Result<Self> {
        if labeled.len() != self.len() {
            return Err(Error::DimensionMismatch("mask length".into()));
        }
        self.labeled = labeled;
        Self::new(self.features, self.targets, self.labeled)
    }

    pub(crate) fn with_features(&self, features: Array2<T>) -> Self {
        debug_assert_eq!(features.dim(), self.features.dim());
        Self {
            features,
            targets: self.targets.clone(),
            labeled: self.labeled.clone(),
        }
    }
}
