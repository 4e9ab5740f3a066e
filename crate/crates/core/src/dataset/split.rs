use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::Dataset;
use crate::{Error, Result};

pub const DEFAULT_REPETITIONS: usize = 5;
pub const DEFAULT_TRAIN_FRACTION: f64 = 0.7;

/// Seed for repetition `r` of the evaluation protocol. Repetition 0 uses
/// `seed` unchanged.
pub fn repetition_seed(seed: u64, r: usize) -> u64 {
    seed ^ (r as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Row indices of a stratified split, each side in ascending order.
///
/// Each class is shuffled independently and `round(train_fraction * count)`
/// of its rows go to the training side.
pub fn stratified_split_indices(
    labels: &[u8],
    train_fraction: f64,
    seed: u64,
) -> Result<(Vec<usize>, Vec<usize>)> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::param(format!(
            "train fraction must lie in (0, 1), got {train_fraction}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut train = Vec::new();
    let mut test = Vec::new();
    for class in [0u8, 1] {
        let mut idx: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == class).collect();
        if idx.is_empty() {
            continue;
        }
        let take = (train_fraction * idx.len() as f64).round() as usize;
        if take == 0 || take == idx.len() {
            return Err(Error::param(format!(
                "class {class} has {} rows, too few to appear on both sides at fraction {train_fraction}",
                idx.len()
            )));
        }
        idx.shuffle(&mut rng);
        train.extend_from_slice(&idx[..take]);
        test.extend_from_slice(&idx[take..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok((train, test))
}

pub fn stratified_split(
    d: &Dataset,
    train_fraction: f64,
    seed: u64,
) -> Result<(Dataset, Dataset)> {
    let (train, test) = stratified_split_indices(d.labels(), train_fraction, seed)?;
    Ok((d.subset(&train)?, d.subset(&test)?))
}

/// `repetitions` independent stratified splits; metrics are meant to be
/// averaged over the returned pairs.
pub fn repeated_eval_protocol(
    d: &Dataset,
    repetitions: usize,
    train_fraction: f64,
    seed: u64,
) -> Result<Vec<(Dataset, Dataset)>> {
    if repetitions == 0 {
        return Err(Error::param("repetitions must be at least 1"));
    }
    (0..repetitions)
        .map(|r| stratified_split(d, train_fraction, repetition_seed(seed, r)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::toy;

    fn eighty_twenty() -> Dataset {
        let rows: Vec<Vec<f64>> = (0..100).map(|i| vec![i as f64]).collect();
        let refs: Vec<&[f64]> = rows.iter().map(Vec::as_slice).collect();
        let labels: Vec<u8> = (0..100).map(|i| u8::from(i % 5 == 0)).collect();
        toy(&refs, &labels)
    }

    #[test]
    fn per_class_rounding() {
        let d = eighty_twenty();
        for seed in [0, 1, 99] {
            let (train, test) = stratified_split(&d, 0.7, seed).unwrap();
            assert_eq!(train.class_counts(), (56, 14));
            assert_eq!(test.class_counts(), (24, 6));
        }
    }

    #[test]
    fn half_split_of_four() {
        let d = toy(&[&[1.0], &[2.0], &[3.0], &[4.0]], &[1, 1, 0, 0]);
        let (train, test) = stratified_split(&d, 0.5, 3).unwrap();
        assert_eq!(train.class_counts(), (1, 1));
        assert_eq!(test.class_counts(), (1, 1));
    }

    #[test]
    fn deterministic_and_seed_sensitive() {
        let d = eighty_twenty();
        let a = stratified_split_indices(d.labels(), 0.7, 5).unwrap();
        let b = stratified_split_indices(d.labels(), 0.7, 5).unwrap();
        let c = stratified_split_indices(d.labels(), 0.7, 6).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn rejects_bad_fraction_and_tiny_class() {
        let d = eighty_twenty();
        assert!(stratified_split(&d, 0.0, 0).is_err());
        assert!(stratified_split(&d, 1.0, 0).is_err());
        let tiny = toy(&[&[1.0], &[2.0], &[3.0]], &[1, 0, 0]);
        assert!(stratified_split(&tiny, 0.7, 0).is_err());
    }

    #[test]
    fn protocol_partitions() {
        let d = eighty_twenty();
        let splits = repeated_eval_protocol(&d, 5, 0.7, 11).unwrap();
        assert_eq!(splits.len(), 5);
        for (r, (train, test)) in splits.iter().enumerate() {
            assert_eq!(train.class_counts(), (56, 14));
            let (tr, te) = stratified_split_indices(d.labels(), 0.7, repetition_seed(11, r)).unwrap();
            let mut all: Vec<usize> = tr.iter().chain(&te).copied().collect();
            all.sort_unstable();
            assert_eq!(all, (0..100).collect::<Vec<_>>());
            assert_eq!(train.n() + test.n(), 100);
        }
        assert!(repeated_eval_protocol(&d, 0, 0.7, 0).is_err());
    }

    #[test]
    fn single_repetition_matches_plain_split() {
        let d = eighty_twenty();
        let one = repeated_eval_protocol(&d, 1, 0.7, 42).unwrap();
        assert_eq!(one[0], stratified_split(&d, 0.7, 42).unwrap());
    }

    proptest::proptest! {
        #[test]
        fn proportions_within_one_row(
            labels in proptest::collection::vec(0u8..2, 10..200),
            frac in 0.2f64..0.8,
            seed in proptest::num::u64::ANY,
        ) {
            let pos = labels.iter().filter(|&&y| y == 1).count();
            let neg = labels.len() - pos;
            if let Ok((train, _)) = stratified_split_indices(&labels, frac, seed) {
                let tp = train.iter().filter(|&&i| labels[i] == 1).count() as f64;
                let tn = train.len() as f64 - tp;
                proptest::prop_assert!((tp - frac * pos as f64).abs() <= 1.0);
                proptest::prop_assert!((tn - frac * neg as f64).abs() <= 1.0);
            }
        }
    }
}
