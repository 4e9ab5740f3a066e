//! Hellinger distance split scoring.
//!
//! For a partition of a node into `K` parts with `(pos_j, neg_j)` rows each,
//! the score is
//!
//! ```text
//! sqrt( sum_j ( sqrt(pos_j / P) - sqrt(neg_j / N) )^2 )
//! ```
//!
//! where `P` and `N` are the node's class totals. Only within-class
//! proportions enter, so scaling either class by a constant leaves the score
//! unchanged. The value lies in `[0, sqrt(2)]`.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum SplitRule {
    /// Rows with `value <= threshold` go to the first child, the rest to the second.
    Threshold { threshold: f64 },
    /// One child per listed category index, in order.
    Categories { categories: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitCandidate {
    pub feature: usize,
    pub rule: SplitRule,
    pub hd_score: f64,
}

impl SplitCandidate {
    pub fn threshold(&self) -> Option<f64> {
        match self.rule {
            SplitRule::Threshold { threshold } => Some(threshold),
            SplitRule::Categories { .. } => None,
        }
    }
}

/// Score without precondition checks; `total_pos` and `total_neg` must be
/// the column sums of `parts` and both nonzero.
pub(crate) fn hellinger_unchecked(parts: &[(usize, usize)], total_pos: usize, total_neg: usize) -> f64 {
    let (tp, tn) = (total_pos as f64, total_neg as f64);
    parts
        .iter()
        .map(|&(p, n)| {
            let d = (p as f64 / tp).sqrt() - (n as f64 / tn).sqrt();
            d * d
        })
        .sum::<f64>()
        .sqrt()
}

/// Hellinger distance between the class-conditional distributions over the
/// partitions, each given as `(positives, negatives)`.
pub fn hellinger_split_score(partition_counts: &[(usize, usize)]) -> Result<f64> {
    if partition_counts.len() < 2 {
        return Err(Error::param(format!(
            "a split needs at least 2 partitions, got {}",
            partition_counts.len()
        )));
    }
    let total_pos: usize = partition_counts.iter().map(|c| c.0).sum();
    let total_neg: usize = partition_counts.iter().map(|c| c.1).sum();
    if total_pos == 0 || total_neg == 0 {
        return Err(Error::param("both classes must be present in the node"));
    }
    Ok(hellinger_unchecked(partition_counts, total_pos, total_neg))
}

/// A cut point between two adjacent distinct sorted values that sends `lo`
/// left and `hi` right.
/// Scores closer than this count as tied; equal-in-theory scores can differ
/// in the last bits after rounding.
pub(crate) const SCORE_TOLERANCE: f64 = 1e-12;

/// Whether `score` beats `best` by more than rounding noise.
pub(crate) fn beats(score: f64, best: f64) -> bool {
    score > best + SCORE_TOLERANCE
}

pub(crate) fn midpoint(lo: f64, hi: f64) -> f64 {
    let m = lo / 2.0 + hi / 2.0;
    if m >= hi || m < lo {
        lo
    } else {
        m
    }
}

/// Best binary threshold over one numeric column restricted to rows whose
/// sorted order is given, requiring at least `min_leaf` rows per side.
pub(crate) fn search_numeric(
    feature: usize,
    sorted: &[(f64, u8)],
    min_leaf: usize,
) -> Option<SplitCandidate> {
    let total_pos = sorted.iter().filter(|s| s.1 == 1).count();
    let total_neg = sorted.len() - total_pos;
    if total_pos == 0 || total_neg == 0 {
        return None;
    }
    let mut best: Option<(f64, f64)> = None;
    let (mut left_pos, mut left_neg) = (0, 0);
    for i in 0..sorted.len() - 1 {
        if sorted[i].1 == 1 {
            left_pos += 1;
        } else {
            left_neg += 1;
        }
        let (lo, hi) = (sorted[i].0, sorted[i + 1].0);
        if lo == hi {
            continue;
        }
        let left = i + 1;
        if left < min_leaf || sorted.len() - left < min_leaf {
            continue;
        }
        let parts = [(left_pos, left_neg), (total_pos - left_pos, total_neg - left_neg)];
        let score = hellinger_unchecked(&parts, total_pos, total_neg);
        if best.is_none_or(|(s, _)| beats(score, s)) {
            best = Some((score, midpoint(lo, hi)));
        }
    }
    best.map(|(hd_score, threshold)| SplitCandidate {
        feature,
        rule: SplitRule::Threshold { threshold },
        hd_score,
    })
}

pub(crate) fn sort_column(values: impl Iterator<Item = (f64, u8)>) -> Vec<(f64, u8)> {
    let mut v: Vec<(f64, u8)> = values.collect();
    v.sort_by(|a, b| a.0.total_cmp(&b.0));
    v
}

/// Multi-way split with one branch per observed category.
pub(crate) fn search_categorical(
    feature: usize,
    counts: &[(usize, usize)],
    min_leaf: usize,
) -> Option<SplitCandidate> {
    let observed: Vec<usize> = (0..counts.len())
        .filter(|&k| counts[k].0 + counts[k].1 > 0)
        .collect();
    if observed.len() < 2 {
        return None;
    }
    if observed.iter().any(|&k| counts[k].0 + counts[k].1 < min_leaf) {
        return None;
    }
    let parts: Vec<(usize, usize)> = observed.iter().map(|&k| counts[k]).collect();
    let total_pos: usize = parts.iter().map(|c| c.0).sum();
    let total_neg: usize = parts.iter().map(|c| c.1).sum();
    if total_pos == 0 || total_neg == 0 {
        return None;
    }
    Some(SplitCandidate {
        feature,
        rule: SplitRule::Categories {
            categories: observed,
        },
        hd_score: hellinger_unchecked(&parts, total_pos, total_neg),
    })
}

fn check_lengths(values: usize, labels: &[u8]) -> Result<()> {
    if values != labels.len() {
        return Err(Error::LengthMismatch {
            expected: values,
            actual: labels.len(),
        });
    }
    if let Some(bad) = labels.iter().find(|&&y| y > 1) {
        return Err(Error::param(format!("label {bad} is not 0 or 1")));
    }
    Ok(())
}

/// Highest-scoring midpoint threshold on a numeric column; ties go to the
/// lower threshold. `None` when the values are all equal or a class is absent.
pub fn best_split_numeric(
    feature: usize,
    values: &[f64],
    labels: &[u8],
) -> Result<Option<SplitCandidate>> {
    check_lengths(values.len(), labels)?;
    if values.len() < 2 {
        return Ok(None);
    }
    let sorted = sort_column(values.iter().copied().zip(labels.iter().copied()));
    Ok(search_numeric(feature, &sorted, 1))
}

/// K-way split over the categories present in `values`. `None` when only
/// one category (or one class) is present.
pub fn best_split_categorical(
    feature: usize,
    values: &[usize],
    labels: &[u8],
    category_count: usize,
) -> Result<Option<SplitCandidate>> {
    check_lengths(values.len(), labels)?;
    let mut counts = vec![(0usize, 0usize); category_count];
    for (&v, &y) in values.iter().zip(labels) {
        let c = counts
            .get_mut(v)
            .ok_or_else(|| Error::param(format!("category index {v} out of range")))?;
        if y == 1 {
            c.0 += 1;
        } else {
            c.1 += 1;
        }
    }
    Ok(search_categorical(feature, &counts, 1))
}
