//! Repeated stratified-split comparison of the ANN-only baseline, the
//! Hellinger tree alone, and the ensemble.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ann::TrainConfig;
use crate::baseline::AnnOnlyModel;
use crate::dataset::{repeated_eval_protocol, repetition_seed, Dataset};
use crate::ensemble;
use crate::hddt::{grow_tree, TreeConfig};
use crate::metrics::{comparison_table, confusion, mean_report, report, ConfusionMatrix, MetricsReport};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Classifier {
    #[serde(rename = "ANN")]
    AnnOnly,
    #[serde(rename = "HDDT")]
    Hddt,
    #[serde(rename = "IEC")]
    Iec,
}

impl Classifier {
    pub const ALL: [Classifier; 3] = [Classifier::AnnOnly, Classifier::Hddt, Classifier::Iec];

    pub fn name(self) -> &'static str {
        match self {
            Classifier::AnnOnly => "ANN",
            Classifier::Hddt => "HDDT",
            Classifier::Iec => "IEC",
        }
    }

    pub fn fit_predict(
        self,
        train: &Dataset,
        test: &Dataset,
        tree: TreeConfig,
        net: &TrainConfig,
    ) -> Result<Vec<u8>> {
        match self {
            Classifier::AnnOnly => AnnOnlyModel::fit(train, net)?.predict(test),
            Classifier::Hddt => grow_tree(train, tree)?.predict(test),
            Classifier::Iec => ensemble::fit(train, tree, net)?.predict(test),
        }
    }
}

impl fmt::Display for Classifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkConfig {
    pub repetitions: usize,
    pub train_fraction: f64,
    pub seed: u64,
    pub tree: TreeConfig,
    pub net: TrainConfig,
}

impl Default for BenchmarkConfig {
    fn default() -> Self {
        BenchmarkConfig {
            repetitions: crate::dataset::DEFAULT_REPETITIONS,
            train_fraction: crate::dataset::DEFAULT_TRAIN_FRACTION,
            seed: 0,
            tree: TreeConfig::default(),
            net: TrainConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldReport {
    pub fold: usize,
    pub classifier: Classifier,
    pub confusion: ConfusionMatrix,
    pub report: MetricsReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifierSummary {
    pub classifier: Classifier,
    pub mean: MetricsReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkResult {
    /// Fold-major, classifiers in [`Classifier::ALL`] order within a fold.
    pub folds: Vec<FoldReport>,
    pub summary: Vec<ClassifierSummary>,
}

impl BenchmarkResult {
    pub fn mean(&self, classifier: Classifier) -> Option<&MetricsReport> {
        self.summary
            .iter()
            .find(|s| s.classifier == classifier)
            .map(|s| &s.mean)
    }

    pub fn table(&self) -> String {
        let rows: Vec<(&str, MetricsReport)> = self
            .summary
            .iter()
            .map(|s| (s.classifier.name(), s.mean))
            .collect();
        comparison_table(&rows)
    }
}

fn run_fold(
    fold: usize,
    train: &Dataset,
    test: &Dataset,
    config: &BenchmarkConfig,
) -> Result<Vec<FoldReport>> {
    let net = TrainConfig {
        seed: repetition_seed(config.net.seed, fold),
        ..config.net
    };
    Classifier::ALL
        .iter()
        .map(|&classifier| {
            let predicted = classifier.fit_predict(train, test, config.tree, &net)?;
            let cm = confusion(&predicted, test.labels())?;
            Ok(FoldReport {
                fold,
                classifier,
                confusion: cm,
                report: report(&cm),
            })
        })
        .collect()
}

/// Trains and scores every classifier on each split of the repeated
/// evaluation protocol. Folds run in parallel; results keep fold order.
pub fn run_benchmark(data: &Dataset, config: &BenchmarkConfig) -> Result<BenchmarkResult> {
    let splits = repeated_eval_protocol(data, config.repetitions, config.train_fraction, config.seed)?;
    let per_fold: Vec<Vec<FoldReport>> = splits
        .par_iter()
        .enumerate()
        .map(|(fold, (train, test))| {
            run_fold(fold, train, test, config).map_err(|e| Error::Fold {
                fold,
                source: Box::new(e),
            })
        })
        .collect::<Result<_>>()?;
    let folds: Vec<FoldReport> = per_fold.into_iter().flatten().collect();
    let summary = Classifier::ALL
        .iter()
        .map(|&classifier| {
            let reports: Vec<MetricsReport> = folds
                .iter()
                .filter(|f| f.classifier == classifier)
                .map(|f| f.report)
                .collect();
            Ok(ClassifierSummary {
                classifier,
                mean: mean_report(&reports)?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(BenchmarkResult { folds, summary })
}
