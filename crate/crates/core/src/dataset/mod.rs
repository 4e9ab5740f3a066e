//! Tabular binary-labelled data: schema, ingestion, scaling, imbalance
//! measurement, stratified splitting and a synthetic generator.

mod csv_io;
mod encode;
mod scaling;
mod split;
mod synth;

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::matrix::Matrix;
use crate::{Error, Result};

pub use csv_io::{load_csv, load_csv_with_schema, read_csv, read_csv_with_schema, write_csv};
pub use encode::{encoded_width, one_hot};
pub use scaling::{min_max_apply, min_max_fit, ColumnRange, ScalingParams};
pub use split::{
    repeated_eval_protocol, repetition_seed, stratified_split, stratified_split_indices,
    DEFAULT_REPETITIONS, DEFAULT_TRAIN_FRACTION,
};
pub use synth::{synth_generate, SynthConfig};

/// Coefficient of variation at or above which a dataset counts as imbalanced
/// (a 2:1 class ratio gives 1/3).
pub const IMBALANCE_THRESHOLD: f64 = 0.30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeatureKind {
    Continuous,
    Categorical,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureSpec {
    pub name: String,
    pub kind: FeatureKind,
    /// Category labels in index order; empty for continuous features.
    #[serde(default)]
    pub categories: Vec<String>,
}

impl FeatureSpec {
    pub fn continuous(name: impl Into<String>) -> Self {
        FeatureSpec {
            name: name.into(),
            kind: FeatureKind::Continuous,
            categories: Vec::new(),
        }
    }

    pub fn categorical<S: Into<String>>(
        name: impl Into<String>,
        categories: impl IntoIterator<Item = S>,
    ) -> Self {
        FeatureSpec {
            name: name.into(),
            kind: FeatureKind::Categorical,
            categories: categories.into_iter().map(Into::into).collect(),
        }
    }

    pub fn is_categorical(&self) -> bool {
        self.kind == FeatureKind::Categorical
    }
}

pub(crate) fn validate_specs(specs: &[FeatureSpec]) -> Result<()> {
    let mut names = HashSet::new();
    for s in specs {
        if !names.insert(s.name.as_str()) {
            return Err(Error::InvalidDataset(format!(
                "duplicate feature name `{}`",
                s.name
            )));
        }
        match s.kind {
            FeatureKind::Categorical if s.categories.is_empty() => {
                return Err(Error::InvalidDataset(format!(
                    "categorical feature `{}` has no categories",
                    s.name
                )))
            }
            FeatureKind::Continuous if !s.categories.is_empty() => {
                return Err(Error::InvalidDataset(format!(
                    "continuous feature `{}` lists categories",
                    s.name
                )))
            }
            _ => {}
        }
    }
    Ok(())
}

/// Feature matrix with per-column type tags and 0/1 labels (1 = positive).
///
/// Categorical cells hold the category index as an `f64`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    specs: Vec<FeatureSpec>,
    features: Matrix,
    labels: Vec<u8>,
}

impl Dataset {
    pub fn new(specs: Vec<FeatureSpec>, features: Matrix, labels: Vec<u8>) -> Result<Self> {
        validate_specs(&specs)?;
        if features.nrows() == 0 {
            return Err(Error::InvalidDataset("dataset has no rows".into()));
        }
        if features.ncols() != specs.len() {
            return Err(Error::InvalidDataset(format!(
                "{} feature specs but {} columns",
                specs.len(),
                features.ncols()
            )));
        }
        if labels.len() != features.nrows() {
            return Err(Error::LengthMismatch {
                expected: features.nrows(),
                actual: labels.len(),
            });
        }
        if let Some(bad) = labels.iter().find(|&&y| y > 1) {
            return Err(Error::InvalidDataset(format!("label {bad} is not 0 or 1")));
        }
        for (i, row) in features.iter_rows().enumerate() {
            for (spec, &x) in specs.iter().zip(row) {
                match spec.kind {
                    FeatureKind::Continuous if !x.is_finite() => {
                        return Err(Error::InvalidDataset(format!(
                            "row {i}: non-finite value in `{}`",
                            spec.name
                        )))
                    }
                    FeatureKind::Categorical
                        if !(x >= 0.0 && x.fract() == 0.0 && (x as usize) < spec.categories.len()) =>
                    {
                        return Err(Error::InvalidDataset(format!(
                            "row {i}: `{x}` is not a category index of `{}`",
                            spec.name
                        )))
                    }
                    _ => {}
                }
            }
        }
        Ok(Dataset {
            specs,
            features,
            labels,
        })
    }

    /// Number of rows.
    pub fn n(&self) -> usize {
        self.labels.len()
    }

    /// Number of raw features.
    pub fn p(&self) -> usize {
        self.specs.len()
    }

    pub fn specs(&self) -> &[FeatureSpec] {
        &self.specs
    }

    pub fn features(&self) -> &Matrix {
        &self.features
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn row(&self, i: usize) -> &[f64] {
        self.features.row(i)
    }

    /// `(negatives, positives)`.
    pub fn class_counts(&self) -> (usize, usize) {
        let pos = self.labels.iter().filter(|&&y| y == 1).count();
        (self.n() - pos, pos)
    }

    pub fn has_both_classes(&self) -> bool {
        let (neg, pos) = self.class_counts();
        neg > 0 && pos > 0
    }

    /// Rows picked by index, in the order given. Panics on an out-of-range index.
    pub fn subset(&self, indices: &[usize]) -> Result<Dataset> {
        if indices.is_empty() {
            return Err(Error::InvalidDataset("empty row selection".into()));
        }
        Ok(Dataset {
            specs: self.specs.clone(),
            features: self.features.select_rows(indices),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
        })
    }

    /// Checks that this dataset can be fed to a model trained on `schema`.
    ///
    /// Names and kinds must match column for column. A categorical column may
    /// know more categories than the schema, as long as the schema's list is a
    /// prefix of its own; indices past the prefix are categories the model
    /// never saw.
    pub fn check_conforms(&self, schema: &[FeatureSpec]) -> Result<()> {
        check_schema(&self.specs, schema)
    }
}

pub(crate) fn check_schema(actual: &[FeatureSpec], schema: &[FeatureSpec]) -> Result<()> {
    if actual.len() != schema.len() {
        return Err(Error::SchemaMismatch(format!(
            "expected {} features, got {}",
            schema.len(),
            actual.len()
        )));
    }
    for (a, s) in actual.iter().zip(schema) {
        if a.name != s.name || a.kind != s.kind {
            return Err(Error::SchemaMismatch(format!(
                "expected {:?} feature `{}`, got {:?} feature `{}`",
                s.kind, s.name, a.kind, a.name
            )));
        }
        if !a.categories.starts_with(&s.categories) {
            return Err(Error::SchemaMismatch(format!(
                "categories of `{}` do not extend the trained categories",
                a.name
            )));
        }
    }
    Ok(())
}

/// Population standard deviation of the two class counts over their mean.
pub fn imbalance_cv(d: &Dataset) -> Result<f64> {
    let (neg, pos) = d.class_counts();
    imbalance_cv_counts(neg, pos)
}

pub fn imbalance_cv_counts(a: usize, b: usize) -> Result<f64> {
    if a == 0 || b == 0 {
        return Err(Error::SingleClass);
    }
    let (a, b) = (a as f64, b as f64);
    let mean = (a + b) / 2.0;
    let std = (((a - mean).powi(2) + (b - mean).powi(2)) / 2.0).sqrt();
    Ok(std / mean)
}

pub fn is_imbalanced(d: &Dataset) -> Result<bool> {
    Ok(imbalance_cv(d)? >= IMBALANCE_THRESHOLD)
}

#[cfg(test)]
pub(crate) fn toy(rows: &[&[f64]], labels: &[u8]) -> Dataset {
    let p = rows.first().map_or(0, |r| r.len());
    let specs = (0..p).map(|j| FeatureSpec::continuous(format!("x{j}"))).collect();
    Dataset::new(specs, Matrix::from_rows(rows).unwrap(), labels.to_vec()).unwrap()
}
