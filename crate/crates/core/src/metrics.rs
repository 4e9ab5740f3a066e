//! Confusion-matrix metrics for binary classification, positive class = 1.
//!
//! `auc` here is the mean of sensitivity and specificity computed from hard
//! labels (balanced accuracy), not the area under a ROC curve. Any metric
//! whose denominator is zero evaluates to 0.

use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
}

impl ConfusionMatrix {
    pub fn new(tp: usize, fp: usize, tn: usize, fn_: usize) -> Result<Self> {
        if tp + fp + tn + fn_ == 0 {
            return Err(Error::param("confusion matrix has no rows"));
        }
        Ok(ConfusionMatrix { tp, fp, tn, fn_ })
    }

    pub fn total(&self) -> usize {
        self.tp + self.fp + self.tn + self.fn_
    }

    /// Names of metrics whose denominator is zero for this matrix.
    pub fn undefined_metrics(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        let precision_undefined = self.tp + self.fp == 0;
        let sensitivity_undefined = self.tp + self.fn_ == 0;
        if precision_undefined {
            out.push("precision");
        }
        if sensitivity_undefined {
            out.push("sensitivity");
        }
        if self.tn + self.fp == 0 {
            out.push("specificity");
        }
        if precision_undefined || sensitivity_undefined || self.tp == 0 {
            out.push("f_measure");
        }
        out
    }
}

pub fn confusion(predicted: &[u8], actual: &[u8]) -> Result<ConfusionMatrix> {
    if predicted.len() != actual.len() {
        return Err(Error::LengthMismatch {
            expected: actual.len(),
            actual: predicted.len(),
        });
    }
    if predicted.is_empty() {
        return Err(Error::param("no predictions to evaluate"));
    }
    let mut cm = ConfusionMatrix::default();
    for (&p, &a) in predicted.iter().zip(actual) {
        match (p, a) {
            (1, 1) => cm.tp += 1,
            (1, 0) => cm.fp += 1,
            (0, 0) => cm.tn += 1,
            (0, 1) => cm.fn_ += 1,
            _ => return Err(Error::param(format!("labels must be 0 or 1, got ({p}, {a})"))),
        }
    }
    Ok(cm)
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct MetricsReport {
    pub precision: f64,
    pub sensitivity: f64,
    pub specificity: f64,
    pub g_mean: f64,
    pub auc: f64,
    pub f_measure: f64,
    pub accuracy: f64,
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

pub fn report(cm: &ConfusionMatrix) -> MetricsReport {
    let precision = ratio(cm.tp, cm.tp + cm.fp);
    let sensitivity = ratio(cm.tp, cm.tp + cm.fn_);
    let specificity = ratio(cm.tn, cm.fp + cm.tn);
    let f_measure = if precision + sensitivity == 0.0 {
        0.0
    } else {
        2.0 * precision * sensitivity / (precision + sensitivity)
    };
    MetricsReport {
        precision,
        sensitivity,
        specificity,
        g_mean: (sensitivity * specificity).sqrt(),
        auc: (sensitivity + specificity) / 2.0,
        f_measure,
        accuracy: ratio(cm.tp + cm.tn, cm.total()),
    }
}

pub fn evaluate(predicted: &[u8], actual: &[u8]) -> Result<MetricsReport> {
    Ok(report(&confusion(predicted, actual)?))
}

/// Per-metric arithmetic mean.
pub fn mean_report(reports: &[MetricsReport]) -> Result<MetricsReport> {
    if reports.is_empty() {
        return Err(Error::param("cannot average zero reports"));
    }
    let n = reports.len() as f64;
    let mean = |f: fn(&MetricsReport) -> f64| reports.iter().map(f).sum::<f64>() / n;
    Ok(MetricsReport {
        precision: mean(|r| r.precision),
        sensitivity: mean(|r| r.sensitivity),
        specificity: mean(|r| r.specificity),
        g_mean: mean(|r| r.g_mean),
        auc: mean(|r| r.auc),
        f_measure: mean(|r| r.f_measure),
        accuracy: mean(|r| r.accuracy),
    })
}

/// Comparison table with one row per classifier and columns
/// `AUC, F-measure, G-mean, Accuracy`.
pub fn comparison_table(rows: &[(&str, MetricsReport)]) -> String {
    let name_width = rows
        .iter()
        .map(|(name, _)| name.len())
        .chain(["Classifier".len()])
        .max()
        .unwrap_or(0);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<name_width$}  {:>9}  {:>9}  {:>9}  {:>9}",
        "Classifier", "AUC", "F-measure", "G-mean", "Accuracy"
    );
    for (name, r) in rows {
        let _ = writeln!(
            out,
            "{:<name_width$}  {:>9.4}  {:>9.4}  {:>9.4}  {:>9.4}",
            name, r.auc, r.f_measure, r.g_mean, r.accuracy
        );
    }
    out
}

/// Two-column table of every metric in a single report.
pub fn report_table(r: &MetricsReport) -> String {
    let mut out = String::new();
    for (name, v) in [
        ("precision", r.precision),
        ("sensitivity", r.sensitivity),
        ("specificity", r.specificity),
        ("g_mean", r.g_mean),
        ("auc", r.auc),
        ("f_measure", r.f_measure),
        ("accuracy", r.accuracy),
    ] {
        let _ = writeln!(out, "{name:<12} {v:.4}");
    }
    out
}
