use rand::seq::SliceRandom;

use crate::bench::Dataset;
use crate::error::{Error, Result};
use crate::rng;
use crate::scalar::Real;

/// Sizes of `total` split into `parts` near-equal pieces, remainder first.
fn split_sizes(total: usize, parts: usize) -> Vec<usize> {
    (0..parts)
        .map(|p| total / parts + usize::from(p < total % parts))
        .collect()
}

/// Row indices of each of `agents` shards.
///
/// Labeled and unlabeled rows are shuffled separately. Labeled rows are
/// dealt in near-equal groups, then unlabeled rows top every shard up to its
/// near-equal share of the whole set. Indices within a shard are sorted.
pub fn shard_indices<T: Real>(ds: &Dataset<T>, agents: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    if agents == 0 {
        return Err(Error::InvalidConfig("need at least one agent".into()));
    }
    let mut labeled = ds.labeled_indices();
    let mut unlabeled = ds.unlabeled_indices();
    if labeled.len() < agents {
        return Err(Error::InvalidConfig(format!(
            "{} labeled samples cannot give each of {agents} agents at least one",
            labeled.len()
        )));
    }
    let mut r = rng::seeded(seed);
    labeled.shuffle(&mut r);
    unlabeled.shuffle(&mut r);

    let totals = split_sizes(ds.len(), agents);
    let labeled_sizes = split_sizes(labeled.len(), agents);
    let mut unlabeled_sizes: Vec<usize> = totals
        .iter()
        .zip(&labeled_sizes)
        .map(|(&t, &l)| t.saturating_sub(l))
        .collect();
    // Saturation can leave a few unlabeled rows unassigned; hand them out
    // round-robin so every row lands somewhere.
    let assigned: usize = unlabeled_sizes.iter().sum();
    for extra in 0..unlabeled.len() - assigned {
        unlabeled_sizes[extra % agents] += 1;
    }

    let mut out = Vec::with_capacity(agents);
    let (mut lp, mut up) = (0, 0);
    for a in 0..agents {
        let mut idx: Vec<usize> = labeled[lp..lp + labeled_sizes[a]].to_vec();
        idx.extend_from_slice(&unlabeled[up..up + unlabeled_sizes[a]]);
        lp += labeled_sizes[a];
        up += unlabeled_sizes[a];
        idx.sort_unstable();
        out.push(idx);
    }
    Ok(out)
}

/// Disjoint per-agent slices of `ds` covering every row.
pub fn shard_dataset<T: Real>(ds: &Dataset<T>, agents: usize, seed: u64) -> Result<Vec<Dataset<T>>> {
    Ok(shard_indices(ds, agents, seed)?
        .iter()
        .map(|idx| ds.select(idx))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::{Array1, Array2};

    fn data(n: usize, labeled: usize) -> Dataset<f64> {
        let mask = (0..n).map(|i| i < labeled).collect();
        Dataset::new(
            Array2::from_shape_fn((n, 2), |(i, j)| (i + j) as f64),
            Array1::from_shape_fn(n, |i| i as f64),
            mask,
        )
        .unwrap()
    }

    #[test]
    fn divisible_split() {
        let s = shard_dataset(&data(100, 50), 5, 1).unwrap();
        assert_eq!(s.iter().map(|d| d.len()).collect::<Vec<_>>(), vec![20; 5]);
    }

    #[test]
    fn remainder_goes_first() {
        let s = shard_dataset(&data(101, 50), 5, 1).unwrap();
        assert_eq!(
            s.iter().map(|d| d.len()).collect::<Vec<_>>(),
            vec![21, 20, 20, 20, 20]
        );
    }

    #[test]
    fn labeled_rows_spread_evenly() {
        let s = shard_dataset(&data(1000, 50), 5, 3).unwrap();
        assert!(s.iter().all(|d| d.labeled_count() == 10));
    }

    #[test]
    fn shards_partition_the_rows() {
        let ds = data(203, 17);
        let idx = shard_indices(&ds, 4, 9).unwrap();
        let mut all: Vec<usize> = idx.concat();
        all.sort_unstable();
        assert_eq!(all, (0..203).collect::<Vec<_>>());
        assert_eq!(idx, shard_indices(&ds, 4, 9).unwrap());
    }

    #[test]
    fn too_few_labels() {
        assert!(matches!(
            shard_dataset(&data(100, 3), 5, 0),
            Err(Error::InvalidConfig(_))
        ));
    }
}
