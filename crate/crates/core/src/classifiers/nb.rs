//! Gaussian naive Bayes over real-valued features.

use super::check_training_data;
use crate::corpus::Label;
use crate::error::{Error, Result};
use crate::featurizer::FeatureVector;

pub const DEFAULT_VARIANCE_FLOOR: f64 = 1e-9;

/// Prior and per-feature Gaussian parameters of one class.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassGaussian {
    pub prior: f64,
    pub mean: Vec<f64>,
    pub variance: Vec<f64>,
}

impl ClassGaussian {
    fn log_joint(&self, x: &[f64]) -> f64 {
        let mut log_p = self.prior.ln();
        for ((&xi, &mu), &var) in x.iter().zip(&self.mean).zip(&self.variance) {
            let d = xi - mu;
            log_p -= 0.5 * ((2.0 * std::f64::consts::PI * var).ln() + d * d / var);
        }
        log_p
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NbModel {
    pub spam: ClassGaussian,
    pub non_spam: ClassGaussian,
    pub variance_floor: f64,
}

impl NbModel {
    pub fn dimension(&self) -> usize {
        self.spam.mean.len()
    }

    pub fn class(&self, label: Label) -> &ClassGaussian {
        match label {
            Label::Spam => &self.spam,
            Label::NonSpam => &self.non_spam,
        }
    }

    /// `(P(Spam | x), P(NonSpam | x))` from log-space Gaussian likelihoods.
    pub fn posteriors(&self, x: &FeatureVector) -> Result<(f64, f64)> {
        if x.len() != self.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                actual: x.len(),
            });
        }
        let ls = self.spam.log_joint(x.as_slice());
        let ln = self.non_spam.log_joint(x.as_slice());
        // normalize against the larger joint so the exponent is <= 0
        let m = ls.max(ln);
        let (es, en) = ((ls - m).exp(), (ln - m).exp());
        let z = es + en;
        Ok((es / z, en / z))
    }

    pub fn posterior(&self, x: &FeatureVector) -> Result<f64> {
        self.posteriors(x).map(|(spam, _)| spam)
    }
}

/// Fits class priors and per-feature means and (population) variances,
/// flooring each variance at `variance_floor`.
pub fn train_nb(x: &[FeatureVector], y: &[Label], variance_floor: f64) -> Result<NbModel> {
    if !(variance_floor > 0.0 && variance_floor.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "variance floor must be positive, got {variance_floor}"
        )));
    }
    let dim = check_training_data(x, y)?;
    let fit = |label: Label| {
        let rows: Vec<&[f64]> = x
            .iter()
            .zip(y)
            .filter(|(_, &l)| l == label)
            .map(|(v, _)| v.as_slice())
            .collect();
        let n = rows.len() as f64;
        let mut mean = vec![0.0; dim];
        for r in &rows {
            for (m, v) in mean.iter_mut().zip(r.iter()) {
                *m += v;
            }
        }
        mean.iter_mut().for_each(|m| *m /= n);
        let mut variance = vec![0.0; dim];
        for r in &rows {
            for ((s, v), m) in variance.iter_mut().zip(r.iter()).zip(&mean) {
                *s += (v - m) * (v - m);
            }
        }
        variance.iter_mut().for_each(|s| *s = (*s / n).max(variance_floor));
        ClassGaussian {
            prior: n / x.len() as f64,
            mean,
            variance,
        }
    };
    Ok(NbModel {
        spam: fit(Label::Spam),
        non_spam: fit(Label::NonSpam),
        variance_floor,
    })
}
