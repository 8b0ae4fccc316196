//! Linear SVM trained with Pegasos stochastic subgradient descent.
//!
//! Minimizes `lambda/2 |w|^2 + mean(max(0, 1 - y (w.x - b)))` with Spam = +1.
//! Step `t` (1-based over all epochs) uses rate `1 / (lambda t)`; after each
//! step `w` is projected onto the ball of radius `1 / sqrt(lambda)`. The
//! offset `b` takes the same subgradient steps but is neither shrunk nor
//! projected. Sample order is reshuffled every epoch from a ChaCha8
//! generator seeded with `seed`.
//!
//! The returned hyperplane is the average of all iterates from the second
//! half of the epochs. If that average scores worse than the all-zero
//! hyperplane, the best end-of-epoch iterate (or zero) is returned instead.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::check_training_data;
use crate::corpus::Label;
use crate::error::{Error, Result};
use crate::featurizer::FeatureVector;

pub const DEFAULT_LAMBDA: f64 = 1e-3;
pub const DEFAULT_EPOCHS: usize = 200;

#[derive(Debug, Clone, PartialEq)]
pub struct SvmModel {
    pub w: Vec<f64>,
    pub b: f64,
    pub lambda: f64,
}

impl SvmModel {
    pub fn dimension(&self) -> usize {
        self.w.len()
    }

    /// Signed distance proxy `w.x - b`; non-negative means Spam.
    pub fn margin(&self, x: &FeatureVector) -> Result<f64> {
        if x.len() != self.w.len() {
            return Err(Error::DimensionMismatch {
                expected: self.w.len(),
                actual: x.len(),
            });
        }
        Ok(x.dot(&self.w) - self.b)
    }

    pub fn predict(&self, x: &FeatureVector) -> Result<Label> {
        Ok(if self.margin(x)? >= 0.0 { Label::Spam } else { Label::NonSpam })
    }
}

fn sign(label: Label) -> f64 {
    if label.is_spam() {
        1.0
    } else {
        -1.0
    }
}

/// Regularized empirical hinge loss of `(w, b)`.
pub fn svm_objective(w: &[f64], b: f64, lambda: f64, x: &[FeatureVector], y: &[Label]) -> f64 {
    let hinge: f64 = x
        .iter()
        .zip(y)
        .map(|(row, &l)| (1.0 - sign(l) * (row.dot(w) - b)).max(0.0))
        .sum();
    0.5 * lambda * w.iter().map(|v| v * v).sum::<f64>() + hinge / x.len() as f64
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SvmTrace {
    /// Objective of the raw iterate at the end of each epoch.
    pub epoch_objective: Vec<f64>,
    /// Objective of the averaged iterate.
    pub averaged_objective: f64,
    /// Objective of the returned model.
    pub final_objective: f64,
}

impl SvmTrace {
    pub fn best_epoch_objective(&self) -> f64 {
        self.epoch_objective.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

pub fn train_svm(x: &[FeatureVector], y: &[Label], lambda: f64, epochs: usize, seed: u64) -> Result<SvmModel> {
    train_svm_traced(x, y, lambda, epochs, seed).map(|(m, _)| m)
}

pub fn train_svm_traced(
    x: &[FeatureVector],
    y: &[Label],
    lambda: f64,
    epochs: usize,
    seed: u64,
) -> Result<(SvmModel, SvmTrace)> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidArgument(format!("lambda must be > 0, got {lambda}")));
    }
    if epochs == 0 {
        return Err(Error::InvalidArgument("epochs must be at least 1".into()));
    }
    let dim = check_training_data(x, y)?;

    let radius = 1.0 / lambda.sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..x.len()).collect();
    let mut w = vec![0.0; dim];
    let mut b = 0.0;
    let mut t: u64 = 0;

    let average_from = epochs / 2;
    let mut w_sum = vec![0.0; dim];
    let mut b_sum = 0.0;
    let mut n_avg: u64 = 0;

    let mut trace = SvmTrace::default();
    let mut best: Option<(f64, Vec<f64>, f64)> = None;

    for epoch in 0..epochs {
        order.shuffle(&mut rng);
        for &i in &order {
            t += 1;
            let eta = 1.0 / (lambda * t as f64);
            let yi = sign(y[i]);
            let row = x[i].as_slice();
            let violated = yi * (x[i].dot(&w) - b) < 1.0;
            let shrink = 1.0 - eta * lambda;
            for wj in w.iter_mut() {
                *wj *= shrink;
            }
            if violated {
                for (wj, xj) in w.iter_mut().zip(row) {
                    *wj += eta * yi * xj;
                }
                b -= eta * yi;
            }
            let norm = w.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm > radius {
                let scale = radius / norm;
                w.iter_mut().for_each(|v| *v *= scale);
            }
            if epoch >= average_from {
                for (s, v) in w_sum.iter_mut().zip(&w) {
                    *s += v;
                }
                b_sum += b;
                n_avg += 1;
            }
        }
        if !(b.is_finite() && w.iter().all(|v| v.is_finite())) {
            return Err(Error::NonFinite(format!("SVM weights are not finite after epoch {}", epoch + 1)));
        }
        let obj = svm_objective(&w, b, lambda, x, y);
        trace.epoch_objective.push(obj);
        if best.as_ref().is_none_or(|(o, _, _)| obj < *o) {
            best = Some((obj, w.clone(), b));
        }
    }

    let inv = 1.0 / n_avg as f64;
    let w_avg: Vec<f64> = w_sum.iter().map(|s| s * inv).collect();
    let b_avg = b_sum * inv;
    let avg_obj = svm_objective(&w_avg, b_avg, lambda, x, y);
    trace.averaged_objective = avg_obj;

    // at (0, 0) every hinge term is exactly 1
    let zero_obj = 1.0;
    let (w, b, final_obj) = if avg_obj <= zero_obj {
        (w_avg, b_avg, avg_obj)
    } else {
        match best {
            Some((o, w, b)) if o <= zero_obj => (w, b, o),
            _ => (vec![0.0; dim], 0.0, zero_obj),
        }
    };
    trace.final_objective = final_obj;
    Ok((SvmModel { w, b, lambda }, trace))
}
