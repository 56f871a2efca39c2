use rand::seq::{index, SliceRandom};

use super::dataset::Dataset;
use crate::error::{Error, Result};
use crate::rng;
use crate::scalar::Real;

/// Train/test row indices of one cross-validation fold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fold {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

/// Seeded shuffle of `0..n` cut into `folds` contiguous test blocks
/// (larger blocks first). Index lists are sorted.
pub fn kfold_split(n: usize, folds: usize, seed: u64) -> Result<Vec<Fold>> {
    if folds < 2 {
        return Err(Error::InvalidConfig(format!("need at least 2 folds, got {folds}")));
    }
    if folds > n {
        return Err(Error::InvalidConfig(format!("{folds} folds for {n} samples")));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng::seeded(seed));
    let mut out = Vec::with_capacity(folds);
    let mut start = 0;
    for f in 0..folds {
        let size = n / folds + usize::from(f < n % folds);
        let mut test = order[start..start + size].to_vec();
        let mut train: Vec<usize> = order[..start]
            .iter()
            .chain(&order[start + size..])
            .copied()
            .collect();
        test.sort_unstable();
        train.sort_unstable();
        out.push(Fold { train, test });
        start += size;
    }
    Ok(out)
}

/// Marks exactly `labeled_count` rows, chosen without replacement, as
/// labeled; every other row becomes unlabeled.
pub fn label_split<T: Real>(train: &Dataset<T>, labeled_count: usize, seed: u64) -> Result<Dataset<T>> {
    if labeled_count > train.len() {
        return Err(Error::InvalidConfig(format!(
            "{labeled_count} labeled samples requested from {} training rows",
            train.len()
        )));
    }
    let mut mask = vec![false; train.len()];
    for i in index::sample(&mut rng::seeded(seed), train.len(), labeled_count) {
        mask[i] = true;
    }
    train.clone().with_mask(mask)
}
