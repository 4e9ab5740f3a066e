use serde::{Deserialize, Serialize};

use super::{Dataset, FeatureKind};
use crate::matrix::Matrix;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ColumnRange {
    pub min: f64,
    pub max: f64,
}

impl ColumnRange {
    /// Maps `x` into `[0, 1]`, clamping values outside the fitted range.
    /// A degenerate range sends everything to 0.5.
    pub fn scale(&self, x: f64) -> f64 {
        let width = self.max - self.min;
        if width == 0.0 {
            0.5
        } else {
            ((x - self.min) / width).clamp(0.0, 1.0)
        }
    }

    pub fn unscale(&self, v: f64) -> f64 {
        self.min + v * (self.max - self.min)
    }

    fn observe(values: impl Iterator<Item = f64>) -> Option<ColumnRange> {
        values.fold(None, |acc, x| {
            Some(match acc {
                None => ColumnRange { min: x, max: x },
                Some(r) => ColumnRange {
                    min: r.min.min(x),
                    max: r.max.max(x),
                },
            })
        })
    }
}

/// Min-max parameters per column. Categorical columns carry `None` and pass
/// through untouched.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingParams {
    pub ranges: Vec<Option<ColumnRange>>,
}

impl ScalingParams {
    /// Fits every column of a purely numeric matrix.
    pub fn fit_matrix(m: &Matrix) -> Result<Self> {
        if m.nrows() == 0 {
            return Err(Error::param("cannot fit scaling on zero rows"));
        }
        Ok(ScalingParams {
            ranges: (0..m.ncols()).map(|j| ColumnRange::observe(m.column(j))).collect(),
        })
    }

    pub fn apply_matrix(&self, m: &Matrix) -> Result<Matrix> {
        if m.ncols() != self.ranges.len() {
            return Err(Error::SchemaMismatch(format!(
                "scaling fitted on {} columns, got {}",
                self.ranges.len(),
                m.ncols()
            )));
        }
        let mut out = m.clone();
        for i in 0..out.nrows() {
            for (x, range) in out.row_mut(i).iter_mut().zip(&self.ranges) {
                if let Some(r) = range {
                    *x = r.scale(*x);
                }
            }
        }
        Ok(out)
    }
}

pub fn min_max_fit(d: &Dataset) -> ScalingParams {
    let m = d.features();
    ScalingParams {
        ranges: d
            .specs()
            .iter()
            .enumerate()
            .map(|(j, s)| match s.kind {
                FeatureKind::Continuous => ColumnRange::observe(m.column(j)),
                FeatureKind::Categorical => None,
            })
            .collect(),
    }
}

pub fn min_max_apply(d: &Dataset, s: &ScalingParams) -> Result<Dataset> {
    if s.ranges.len() != d.p() {
        return Err(Error::SchemaMismatch(format!(
            "scaling fitted on {} features, dataset has {}",
            s.ranges.len(),
            d.p()
        )));
    }
    for (spec, range) in d.specs().iter().zip(&s.ranges) {
        if range.is_some() != (spec.kind == FeatureKind::Continuous) {
            return Err(Error::SchemaMismatch(format!(
                "feature `{}` kind does not match the scaling parameters",
                spec.name
            )));
        }
    }
    Dataset::new(
        d.specs().to_vec(),
        s.apply_matrix(d.features())?,
        d.labels().to_vec(),
    )
}
