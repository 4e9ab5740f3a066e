//! Reference classifiers the ensemble is compared against.

use serde::{Deserialize, Serialize};

use crate::ann::{self, hidden_neuron_count, MlpModel, TrainConfig};
use crate::dataset::{check_schema, one_hot, Dataset, FeatureSpec, ScalingParams};
use crate::{Error, Result};

/// The network alone on every raw feature (categoricals one-hot, min-max
/// scaled), with the same hidden-layer sizing rule as the ensemble.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnOnlyModel {
    pub specs: Vec<FeatureSpec>,
    pub scaling: ScalingParams,
    pub net: MlpModel,
}

impl AnnOnlyModel {
    pub fn fit(train: &Dataset, config: &TrainConfig) -> Result<Self> {
        if !train.has_both_classes() {
            return Err(Error::SingleClass);
        }
        let all: Vec<usize> = (0..train.p()).collect();
        let encoded = one_hot(train.features(), train.specs(), &all)?;
        let scaling = ScalingParams::fit_matrix(&encoded)?;
        let scaled = scaling.apply_matrix(&encoded)?;
        let k = hidden_neuron_count(train.n(), scaled.ncols())?;
        let net = ann::train(&scaled, train.labels(), k, config)?;
        Ok(AnnOnlyModel {
            specs: train.specs().to_vec(),
            scaling,
            net,
        })
    }

    pub fn predict(&self, data: &Dataset) -> Result<Vec<u8>> {
        check_schema(data.specs(), &self.specs)?;
        let all: Vec<usize> = (0..self.specs.len()).collect();
        let encoded = one_hot(data.features(), &self.specs, &all)?;
        self.net.classify_matrix(&self.scaling.apply_matrix(&encoded)?)
    }
}

/// Predicts the negative class for every row.
pub fn constant_negative(data: &Dataset) -> Vec<u8> {
    vec![0; data.n()]
}
