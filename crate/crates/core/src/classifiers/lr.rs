//! L2-penalized logistic regression fitted by full-batch gradient ascent.
//!
//! The objective is the mean log-likelihood minus `lambda / 2 * |beta|^2`
//! (the intercept is not penalized). Each epoch takes one gradient step; a
//! step that would lower the objective is retried at half the rate, and the
//! halved rate is kept for later epochs. Training stops early once the rate
//! has been halved [`MAX_HALVINGS`] times in a row without progress.

use super::check_training_data;
use crate::corpus::Label;
use crate::error::{Error, Result};
use crate::featurizer::FeatureVector;

pub const DEFAULT_LEARNING_RATE: f64 = 0.1;
pub const DEFAULT_EPOCHS: usize = 500;
pub const DEFAULT_LAMBDA: f64 = 1e-3;
pub const MAX_HALVINGS: u32 = 40;

#[derive(Debug, Clone, PartialEq)]
pub struct LrModel {
    pub beta0: f64,
    pub beta: Vec<f64>,
    pub l2_lambda: f64,
}

/// `1 / (1 + e^-z)`, evaluated without overflow.
pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// `ln(1 + e^z)`, evaluated without overflow.
fn softplus(z: f64) -> f64 {
    z.max(0.0) + (-z.abs()).exp().ln_1p()
}

impl LrModel {
    pub fn dimension(&self) -> usize {
        self.beta.len()
    }

    pub fn linear(&self, x: &FeatureVector) -> Result<f64> {
        if x.len() != self.beta.len() {
            return Err(Error::DimensionMismatch {
                expected: self.beta.len(),
                actual: x.len(),
            });
        }
        Ok(self.beta0 + x.dot(&self.beta))
    }

    /// `P(Spam | x)`.
    pub fn probability(&self, x: &FeatureVector) -> Result<f64> {
        self.linear(x).map(sigmoid)
    }
}

/// The penalized log-likelihood as a function of the packed parameters
/// `[beta0, beta_1, ..., beta_d]`. Spam is coded 1.
pub struct LrObjective<'a> {
    x: &'a [FeatureVector],
    y: Vec<f64>,
    lambda: f64,
}

impl<'a> LrObjective<'a> {
    pub fn new(x: &'a [FeatureVector], y: &[Label], lambda: f64) -> Self {
        LrObjective {
            x,
            y: y.iter().map(|l| if l.is_spam() { 1.0 } else { 0.0 }).collect(),
            lambda,
        }
    }

    fn z(&self, params: &[f64], row: &FeatureVector) -> f64 {
        params[0] + row.dot(&params[1..])
    }

    pub fn value(&self, params: &[f64]) -> f64 {
        let n = self.x.len() as f64;
        let ll: f64 = self
            .x
            .iter()
            .zip(&self.y)
            .map(|(row, &y)| {
                let z = self.z(params, row);
                y * z - softplus(z)
            })
            .sum();
        let penalty: f64 = params[1..].iter().map(|b| b * b).sum();
        ll / n - 0.5 * self.lambda * penalty
    }

    pub fn gradient(&self, params: &[f64]) -> Vec<f64> {
        let n = self.x.len() as f64;
        let mut g = vec![0.0; params.len()];
        for (row, &y) in self.x.iter().zip(&self.y) {
            let r = y - sigmoid(self.z(params, row));
            g[0] += r;
            for (gj, xj) in g[1..].iter_mut().zip(row.as_slice()) {
                *gj += r * xj;
            }
        }
        g[0] /= n;
        for (gj, b) in g[1..].iter_mut().zip(&params[1..]) {
            *gj = *gj / n - self.lambda * b;
        }
        g
    }
}

/// Per-epoch record of a training run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LrTrace {
    /// Objective after each accepted epoch, starting with the initial value.
    pub objective: Vec<f64>,
    pub final_learning_rate: f64,
}

/// Fits from zero-initialized parameters. The procedure is deterministic;
/// `seed` is accepted for interface symmetry and recorded by callers.
pub fn train_lr(
    x: &[FeatureVector],
    y: &[Label],
    l2_lambda: f64,
    learning_rate: f64,
    epochs: usize,
    seed: u64,
) -> Result<LrModel> {
    train_lr_traced(x, y, l2_lambda, learning_rate, epochs, seed).map(|(m, _)| m)
}

pub fn train_lr_traced(
    x: &[FeatureVector],
    y: &[Label],
    l2_lambda: f64,
    learning_rate: f64,
    epochs: usize,
    _seed: u64,
) -> Result<(LrModel, LrTrace)> {
    if !(l2_lambda >= 0.0 && l2_lambda.is_finite()) {
        return Err(Error::InvalidArgument(format!("lambda must be >= 0, got {l2_lambda}")));
    }
    if !(learning_rate > 0.0 && learning_rate.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "learning rate must be > 0, got {learning_rate}"
        )));
    }
    if epochs == 0 {
        return Err(Error::InvalidArgument("epochs must be at least 1".into()));
    }
    let dim = check_training_data(x, y)?;

    let objective = LrObjective::new(x, y, l2_lambda);
    let mut params = vec![0.0; dim + 1];
    let mut current = objective.value(&params);
    let mut rate = learning_rate;
    let mut trace = LrTrace {
        objective: vec![current],
        final_learning_rate: rate,
    };

    'epochs: for epoch in 1..=epochs {
        let grad = objective.gradient(&params);
        if grad.iter().any(|g| !g.is_finite()) {
            return Err(Error::NonFinite(format!("gradient is not finite at epoch {epoch}")));
        }
        let mut halvings = 0;
        loop {
            let candidate: Vec<f64> = params.iter().zip(&grad).map(|(p, g)| p + rate * g).collect();
            let value = objective.value(&candidate);
            if !value.is_finite() {
                return Err(Error::NonFinite(format!("log-likelihood is not finite at epoch {epoch}")));
            }
            if value >= current {
                params = candidate;
                current = value;
                trace.objective.push(value);
                break;
            }
            halvings += 1;
            if halvings > MAX_HALVINGS {
                break 'epochs;
            }
            rate *= 0.5;
        }
    }
    trace.final_learning_rate = rate;

    let beta0 = params[0];
    params.remove(0);
    Ok((
        LrModel {
            beta0,
            beta: params,
            l2_lambda,
        },
        trace,
    ))
}
