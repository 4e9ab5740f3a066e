use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{Dataset, FeatureSpec};
use crate::matrix::Matrix;
use crate::{Error, Result};

/// Gaussian imbalanced binary data.
///
/// Informative features are `N(0, 1)` for negatives and `N(shift, 1)` for
/// positives; noise features are `N(0, 1)` for both classes. Columns are named
/// `inf_0..` followed by `noise_0..`.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub n: usize,
    pub informative: usize,
    pub noise: usize,
    pub minority_fraction: f64,
    pub seed: u64,
    pub shift: f64,
}

impl SynthConfig {
    pub const DEFAULT_SHIFT: f64 = 1.0;

    pub fn new(n: usize, informative: usize, noise: usize, minority_fraction: f64, seed: u64) -> Self {
        SynthConfig {
            n,
            informative,
            noise,
            minority_fraction,
            seed,
            shift: Self::DEFAULT_SHIFT,
        }
    }

    pub fn positives(&self) -> usize {
        (self.n as f64 * self.minority_fraction).round() as usize
    }

    fn validate(&self) -> Result<()> {
        if self.n < 10 {
            return Err(Error::param(format!("n must be at least 10, got {}", self.n)));
        }
        if !(self.minority_fraction > 0.0 && self.minority_fraction < 0.5) {
            return Err(Error::param(format!(
                "minority fraction must lie in (0, 0.5), got {}",
                self.minority_fraction
            )));
        }
        if self.informative + self.noise == 0 {
            return Err(Error::param("at least one feature is required"));
        }
        if self.positives() == 0 {
            return Err(Error::param("minority fraction rounds to zero positive rows"));
        }
        if !self.shift.is_finite() {
            return Err(Error::param("shift must be finite"));
        }
        Ok(())
    }

    pub fn generate(&self) -> Result<Dataset> {
        self.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let pos = self.positives();
        let mut labels: Vec<u8> = (0..self.n).map(|i| u8::from(i < pos)).collect();
        labels.shuffle(&mut rng);

        let p = self.informative + self.noise;
        let mut features = Matrix::zeros(self.n, p);
        for (i, &y) in labels.iter().enumerate() {
            let row = features.row_mut(i);
            for (j, x) in row.iter_mut().enumerate() {
                let z: f64 = StandardNormal.sample(&mut rng);
                let mean = if j < self.informative && y == 1 { self.shift } else { 0.0 };
                *x = mean + z;
            }
        }
        let specs = (0..self.informative)
            .map(|j| FeatureSpec::continuous(format!("inf_{j}")))
            .chain((0..self.noise).map(|j| FeatureSpec::continuous(format!("noise_{j}"))))
            .collect();
        Dataset::new(specs, features, labels)
    }
}

pub fn synth_generate(
    n: usize,
    informative: usize,
    noise: usize,
    minority_fraction: f64,
    seed: u64,
) -> Result<Dataset> {
    SynthConfig::new(n, informative, noise, minority_fraction, seed).generate()
}
