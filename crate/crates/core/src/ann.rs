//! One-hidden-layer feedforward network with logistic activations.
//!
//! The output is `sigmoid(sum_i c_i * sigmoid(a_i . z + b_i) + c_0)`, trained by
//! full-batch gradient descent on mean squared error and thresholded at 1/2.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::matrix::Matrix;
use crate::{Error, Result};

pub fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// Hidden-layer width `round(sqrt(n / (d_m * ln n)))`, at least 1.
pub fn hidden_neuron_count(n: usize, d_m: usize) -> Result<usize> {
    if n < 3 {
        return Err(Error::param(format!("need at least 3 training rows, got {n}")));
    }
    if d_m == 0 {
        return Err(Error::param("input dimension must be at least 1"));
    }
    let n = n as f64;
    let k = (n / (d_m as f64 * n.ln())).sqrt().round();
    Ok((k as usize).max(1))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub epochs: usize,
    pub learning_rate: f64,
    pub seed: u64,
    /// Initial weights are drawn uniformly from `[-init_scale, init_scale]`.
    pub init_scale: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            epochs: 2000,
            learning_rate: 0.3,
            seed: 0,
            init_scale: 0.5,
        }
    }
}

impl TrainConfig {
    fn validate(&self) -> Result<()> {
        if self.epochs == 0 {
            return Err(Error::param("epochs must be at least 1"));
        }
        if !(self.learning_rate.is_finite() && self.learning_rate > 0.0) {
            return Err(Error::param(format!(
                "learning rate must be finite and positive, got {}",
                self.learning_rate
            )));
        }
        if !(self.init_scale.is_finite() && self.init_scale > 0.0) {
            return Err(Error::param(format!(
                "init scale must be finite and positive, got {}",
                self.init_scale
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MlpModel {
    pub input_dim: usize,
    pub hidden_count: usize,
    /// `hidden_count x input_dim`, row-major.
    pub hidden_weights: Vec<f64>,
    pub hidden_biases: Vec<f64>,
    pub output_weights: Vec<f64>,
    pub output_bias: f64,
}

/// Loss gradient laid out like the model parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradient {
    pub hidden_weights: Vec<f64>,
    pub hidden_biases: Vec<f64>,
    pub output_weights: Vec<f64>,
    pub output_bias: f64,
}

impl MlpModel {
    pub fn zeros(input_dim: usize, hidden_count: usize) -> Self {
        MlpModel {
            input_dim,
            hidden_count,
            hidden_weights: vec![0.0; input_dim * hidden_count],
            hidden_biases: vec![0.0; hidden_count],
            output_weights: vec![0.0; hidden_count],
            output_bias: 0.0,
        }
    }

    /// Uniform initialisation in `[-scale, scale]`: hidden weights, hidden
    /// biases, output weights, output bias, in that draw order.
    pub fn random(input_dim: usize, hidden_count: usize, scale: f64, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut draw = |len: usize| -> Vec<f64> {
            (0..len).map(|_| rng.random_range(-scale..=scale)).collect()
        };
        let hidden_weights = draw(input_dim * hidden_count);
        let hidden_biases = draw(hidden_count);
        let output_weights = draw(hidden_count);
        let output_bias = draw(1)[0];
        MlpModel {
            input_dim,
            hidden_count,
            hidden_weights,
            hidden_biases,
            output_weights,
            output_bias,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let k = self.hidden_count;
        if k == 0 || self.input_dim == 0 {
            return Err(Error::param("network dimensions must be positive"));
        }
        if self.hidden_weights.len() != k * self.input_dim
            || self.hidden_biases.len() != k
            || self.output_weights.len() != k
        {
            return Err(Error::param("network parameter arrays have inconsistent sizes"));
        }
        let all_finite = self
            .hidden_weights
            .iter()
            .chain(&self.hidden_biases)
            .chain(&self.output_weights)
            .all(|w| w.is_finite())
            && self.output_bias.is_finite();
        if !all_finite {
            return Err(Error::param("network has non-finite weights"));
        }
        Ok(())
    }

    fn check_input(&self, z: &[f64]) -> Result<()> {
        if z.len() != self.input_dim {
            return Err(Error::LengthMismatch {
                expected: self.input_dim,
                actual: z.len(),
            });
        }
        Ok(())
    }

    fn hidden_row(&self, i: usize) -> &[f64] {
        &self.hidden_weights[i * self.input_dim..(i + 1) * self.input_dim]
    }

    fn hidden_activation(&self, i: usize, z: &[f64]) -> f64 {
        let a = self.hidden_row(i);
        sigmoid(a.iter().zip(z).map(|(w, x)| w * x).sum::<f64>() + self.hidden_biases[i])
    }

    fn forward_unchecked(&self, z: &[f64], hidden: &mut [f64]) -> f64 {
        let mut u = self.output_bias;
        for (i, h) in hidden.iter_mut().enumerate() {
            *h = self.hidden_activation(i, z);
            u += self.output_weights[i] * *h;
        }
        sigmoid(u)
    }

    /// Network output in `(0, 1)`.
    pub fn forward(&self, z: &[f64]) -> Result<f64> {
        self.check_input(z)?;
        let mut hidden = vec![0.0; self.hidden_count];
        Ok(self.forward_unchecked(z, &mut hidden))
    }

    /// 0 when the output is at most 1/2, otherwise 1.
    pub fn classify(&self, z: &[f64]) -> Result<u8> {
        Ok(threshold_label(self.forward(z)?))
    }

    pub fn classify_matrix(&self, rows: &Matrix) -> Result<Vec<u8>> {
        rows.iter_rows().map(|z| self.classify(z)).collect()
    }

    /// Mean squared error of the outputs against `targets`.
    pub fn loss(&self, rows: &Matrix, targets: &[u8]) -> Result<f64> {
        check_batch(self, rows, targets)?;
        let mut hidden = vec![0.0; self.hidden_count];
        let sum: f64 = rows
            .iter_rows()
            .zip(targets)
            .map(|(z, &y)| {
                let e = self.forward_unchecked(z, &mut hidden) - f64::from(y);
                e * e
            })
            .sum();
        Ok(sum / rows.nrows() as f64)
    }

    /// Mean squared error and its gradient by backpropagation.
    pub fn loss_and_gradient(&self, rows: &Matrix, targets: &[u8]) -> Result<(f64, Gradient)> {
        check_batch(self, rows, targets)?;
        let k = self.hidden_count;
        let d = self.input_dim;
        let n = rows.nrows() as f64;
        let mut g = Gradient {
            hidden_weights: vec![0.0; k * d],
            hidden_biases: vec![0.0; k],
            output_weights: vec![0.0; k],
            output_bias: 0.0,
        };
        let mut hidden = vec![0.0; k];
        let mut loss = 0.0;
        for (z, &y) in rows.iter_rows().zip(targets) {
            let out = self.forward_unchecked(z, &mut hidden);
            let err = out - f64::from(y);
            loss += err * err;
            // d loss / d pre-activation of the output unit
            let delta = 2.0 * err / n * out * (1.0 - out);
            g.output_bias += delta;
            for i in 0..k {
                let h = hidden[i];
                g.output_weights[i] += delta * h;
                let delta_h = delta * self.output_weights[i] * h * (1.0 - h);
                g.hidden_biases[i] += delta_h;
                for (gw, x) in g.hidden_weights[i * d..(i + 1) * d].iter_mut().zip(z) {
                    *gw += delta_h * x;
                }
            }
        }
        Ok((loss / n, g))
    }

    fn step(&mut self, g: &Gradient, learning_rate: f64) {
        let update = |w: &mut [f64], dw: &[f64]| {
            for (w, dw) in w.iter_mut().zip(dw) {
                *w -= learning_rate * dw;
            }
        };
        update(&mut self.hidden_weights, &g.hidden_weights);
        update(&mut self.hidden_biases, &g.hidden_biases);
        update(&mut self.output_weights, &g.output_weights);
        self.output_bias -= learning_rate * g.output_bias;
    }
}

pub fn threshold_label(output: f64) -> u8 {
    u8::from(output > 0.5)
}

fn check_batch(model: &MlpModel, rows: &Matrix, targets: &[u8]) -> Result<()> {
    if rows.ncols() != model.input_dim {
        return Err(Error::LengthMismatch {
            expected: model.input_dim,
            actual: rows.ncols(),
        });
    }
    if rows.nrows() != targets.len() {
        return Err(Error::LengthMismatch {
            expected: rows.nrows(),
            actual: targets.len(),
        });
    }
    if rows.nrows() == 0 {
        return Err(Error::param("empty training batch"));
    }
    Ok(())
}

/// Trains a `k`-unit network from a seeded uniform initialisation for exactly
/// `config.epochs` full-batch gradient steps.
pub fn train(rows: &Matrix, targets: &[u8], k: usize, config: &TrainConfig) -> Result<MlpModel> {
    config.validate()?;
    if k == 0 {
        return Err(Error::param("hidden layer needs at least one unit"));
    }
    if rows.ncols() == 0 {
        return Err(Error::param("input dimension must be at least 1"));
    }
    let model = MlpModel::random(rows.ncols(), k, config.init_scale, config.seed);
    train_from(model, rows, targets, config)
}

/// Continues gradient descent from an existing model.
pub fn train_from(
    mut model: MlpModel,
    rows: &Matrix,
    targets: &[u8],
    config: &TrainConfig,
) -> Result<MlpModel> {
    config.validate()?;
    for epoch in 0..config.epochs {
        let (loss, g) = model.loss_and_gradient(rows, targets)?;
        if !loss.is_finite() {
            return Err(Error::NonFiniteLoss { epoch });
        }
        model.step(&g, config.learning_rate);
    }
    model.validate().map_err(|_| Error::NonFiniteLoss {
        epoch: config.epochs,
    })?;
    Ok(model)
}
