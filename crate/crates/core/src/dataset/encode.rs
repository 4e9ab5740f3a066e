use super::{FeatureKind, FeatureSpec};
use crate::matrix::Matrix;
use crate::{Error, Result};

/// Width of the selected columns after one-hot expansion of categoricals.
pub fn encoded_width(specs: &[FeatureSpec], selected: &[usize]) -> usize {
    selected
        .iter()
        .map(|&f| match specs[f].kind {
            FeatureKind::Continuous => 1,
            FeatureKind::Categorical => specs[f].categories.len(),
        })
        .sum()
}

/// Selected columns of `features`, continuous ones copied and categorical ones
/// expanded to indicator columns. A category index past the schema's list
/// (a category unseen at training time) encodes as all zeros.
pub fn one_hot(features: &Matrix, specs: &[FeatureSpec], selected: &[usize]) -> Result<Matrix> {
    if features.ncols() != specs.len() {
        return Err(Error::SchemaMismatch(format!(
            "expected {} columns, got {}",
            specs.len(),
            features.ncols()
        )));
    }
    if let Some(&f) = selected.iter().find(|&&f| f >= specs.len()) {
        return Err(Error::param(format!("feature index {f} out of range")));
    }
    let width = encoded_width(specs, selected);
    let mut out = Matrix::zeros(features.nrows(), width);
    for i in 0..features.nrows() {
        let src = features.row(i);
        let dst = out.row_mut(i);
        let mut col = 0;
        for &f in selected {
            let spec = &specs[f];
            match spec.kind {
                FeatureKind::Continuous => {
                    dst[col] = src[f];
                    col += 1;
                }
                FeatureKind::Categorical => {
                    let k = src[f] as usize;
                    if k < spec.categories.len() {
                        dst[col + k] = 1.0;
                    }
                    col += spec.categories.len();
                }
            }
        }
    }
    Ok(out)
}
