//! The imbalanced ensemble classifier: a Hellinger tree picks the features
//! and contributes its own prediction as one more input to a small network.
//!
//! Fitting runs, in order: grow the tree on all features, keep the features it
//! splits on, build the network input (selected features with categoricals
//! one-hot expanded, then the tree's 0/1 prediction), min-max scale it, size
//! the hidden layer from `n` and the input width, and train.

use serde::{Deserialize, Serialize};

use crate::ann::{self, hidden_neuron_count, MlpModel, TrainConfig};
use crate::dataset::{check_schema, one_hot, Dataset, ScalingParams};
use crate::hddt::{grow_tree, HddtModel, TreeConfig};
use crate::matrix::Matrix;
use crate::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IecModel {
    pub schema_version: u32,
    pub tree: HddtModel,
    pub selected_features: Vec<usize>,
    /// Fitted on the augmented training matrix.
    pub scaling: ScalingParams,
    pub net: MlpModel,
    /// Network input width: expanded selected features plus the tree column.
    pub d_m: usize,
}

/// Network input for `rows` (laid out in the tree's schema): the selected
/// features, categoricals one-hot, followed by the tree's predicted label.
pub fn augment(rows: &Matrix, tree: &HddtModel, selected: &[usize]) -> Result<Matrix> {
    if selected.is_empty() {
        return Err(Error::param("feature selection is empty"));
    }
    let encoded = one_hot(rows, &tree.specs, selected)?;
    let op = tree.predict_matrix(rows)?;
    let width = encoded.ncols() + 1;
    let mut out = Matrix::zeros(rows.nrows(), width);
    for (i, &label) in op.iter().enumerate() {
        let dst = out.row_mut(i);
        dst[..width - 1].copy_from_slice(encoded.row(i));
        dst[width - 1] = f64::from(label);
    }
    Ok(out)
}

pub fn augment_dataset(data: &Dataset, tree: &HddtModel, selected: &[usize]) -> Result<Matrix> {
    check_schema(data.specs(), &tree.specs)?;
    augment(data.features(), tree, selected)
}

/// Fits the full pipeline on `train`.
pub fn fit(train: &Dataset, tree_config: TreeConfig, train_config: &TrainConfig) -> Result<IecModel> {
    if !train.has_both_classes() {
        return Err(Error::SingleClass);
    }
    let tree = grow_tree(train, tree_config)?;
    let mut selected_features = tree.select_features();
    if selected_features.is_empty() {
        // the tree is a single leaf; its column is constant
        selected_features = (0..train.p()).collect();
    }
    let augmented = augment(train.features(), &tree, &selected_features)?;
    let d_m = augmented.ncols();
    let scaling = ScalingParams::fit_matrix(&augmented)?;
    let scaled = scaling.apply_matrix(&augmented)?;
    let k = hidden_neuron_count(train.n(), d_m)?;
    let net = ann::train(&scaled, train.labels(), k, train_config)?;
    Ok(IecModel {
        schema_version: SCHEMA_VERSION,
        tree,
        selected_features,
        scaling,
        net,
        d_m,
    })
}

impl IecModel {
    pub fn hidden_count(&self) -> usize {
        self.net.hidden_count
    }

    /// Scaled network inputs for rows in the tree's schema.
    pub fn network_inputs(&self, rows: &Matrix) -> Result<Matrix> {
        let augmented = augment(rows, &self.tree, &self.selected_features)?;
        self.scaling.apply_matrix(&augmented)
    }

    pub fn predict_matrix(&self, rows: &Matrix) -> Result<Vec<u8>> {
        self.net.classify_matrix(&self.network_inputs(rows)?)
    }

    pub fn predict(&self, data: &Dataset) -> Result<Vec<u8>> {
        check_schema(data.specs(), &self.tree.specs)?;
        self.predict_matrix(data.features())
    }

    pub fn predict_row(&self, row: &[f64]) -> Result<u8> {
        let m = Matrix::from_rows(&[row])?;
        Ok(self.predict_matrix(&m)?[0])
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let model: IecModel = serde_json::from_str(text)?;
        if model.schema_version != SCHEMA_VERSION {
            return Err(Error::SchemaVersion(model.schema_version));
        }
        model.net.validate()?;
        if model.net.input_dim != model.d_m || model.scaling.ranges.len() != model.d_m {
            return Err(Error::param("model dimensions are inconsistent"));
        }
        Ok(model)
    }
}
