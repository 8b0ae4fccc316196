//! Precision, recall, F1 and ROC AUC with Spam as the positive class.
//!
//! Every 0/0 ratio is reported as 0.

use std::fmt::Write as _;

use crate::classifiers::TrainedModel;
use crate::corpus::Label;
use crate::error::{Error, Result};
use crate::segmenter::TokenizedReview;
use crate::text::fmt_f64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ConfusionMatrix {
    pub tp: u64,
    pub fp: u64,
    pub fn_: u64,
    pub tn: u64,
}

impl ConfusionMatrix {
    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.fn_ + self.tn
    }

    /// The same matrix read with NonSpam as the positive class.
    pub fn swapped(&self) -> Self {
        ConfusionMatrix {
            tp: self.tn,
            fp: self.fn_,
            fn_: self.fp,
            tn: self.tp,
        }
    }
}

pub fn confusion(truth: &[Label], predicted: &[Label]) -> Result<ConfusionMatrix> {
    if truth.len() != predicted.len() {
        return Err(Error::InvalidArgument(format!(
            "{} truth labels but {} predictions",
            truth.len(),
            predicted.len()
        )));
    }
    if truth.is_empty() {
        return Err(Error::InvalidArgument("nothing to evaluate".into()));
    }
    let mut cm = ConfusionMatrix::default();
    for (&t, &p) in truth.iter().zip(predicted) {
        match (t, p) {
            (Label::Spam, Label::Spam) => cm.tp += 1,
            (Label::NonSpam, Label::Spam) => cm.fp += 1,
            (Label::Spam, Label::NonSpam) => cm.fn_ += 1,
            (Label::NonSpam, Label::NonSpam) => cm.tn += 1,
        }
    }
    Ok(cm)
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Prf {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Harmonic mean of `p` and `r`, 0 when both are 0.
pub fn f1_score(p: f64, r: f64) -> f64 {
    if p + r == 0.0 {
        0.0
    } else {
        2.0 * p * r / (p + r)
    }
}

/// Positive-class precision, recall and F1.
pub fn prf(cm: &ConfusionMatrix) -> Prf {
    let precision = ratio(cm.tp, cm.tp + cm.fp);
    let recall = ratio(cm.tp, cm.tp + cm.fn_);
    Prf {
        precision,
        recall,
        f1: f1_score(precision, recall),
    }
}

/// Probability that a random spam review outscores a random non-spam one,
/// ties counting one half. Computed from mid-ranks in `O(n log n)`.
pub fn auc(truth: &[Label], scores: &[f64]) -> Result<f64> {
    if truth.len() != scores.len() {
        return Err(Error::InvalidArgument(format!(
            "{} truth labels but {} scores",
            truth.len(),
            scores.len()
        )));
    }
    if scores.iter().any(|s| s.is_nan()) {
        return Err(Error::InvalidArgument("score is NaN".into()));
    }
    let n_pos = truth.iter().filter(|l| l.is_spam()).count();
    let n_neg = truth.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::SingleClass);
    }

    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&i, &j| scores[i].total_cmp(&scores[j]));

    // sum of 1-based mid-ranks of the positives, kept doubled to stay integral
    let mut rank_sum_x2: u128 = 0;
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && scores[order[end]] == scores[order[start]] {
            end += 1;
        }
        // ranks start+1..=end, mid-rank (start + 1 + end) / 2
        let mid_x2 = (start + 1 + end) as u128;
        let positives = order[start..end].iter().filter(|&&i| truth[i].is_spam()).count() as u128;
        rank_sum_x2 += mid_x2 * positives;
        start = end;
    }
    let n_pos = n_pos as u128;
    let u_x2 = rank_sum_x2 - n_pos * (n_pos + 1);
    Ok(u_x2 as f64 / (2.0 * n_pos as f64 * n_neg as f64))
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub spam: Prf,
    pub non_spam: Prf,
    /// Unweighted mean of the two per-class values (F1 included).
    pub macro_avg: Prf,
    /// Per-class values weighted by class support.
    pub weighted_avg: Prf,
    pub auc: f64,
    pub confusion: ConfusionMatrix,
    pub n: u64,
}

impl EvalReport {
    pub fn from_predictions(truth: &[Label], predicted: &[Label], scores: &[f64]) -> Result<Self> {
        let cm = confusion(truth, predicted)?;
        let spam = prf(&cm);
        let non_spam = prf(&cm.swapped());
        let macro_avg = Prf {
            precision: (spam.precision + non_spam.precision) / 2.0,
            recall: (spam.recall + non_spam.recall) / 2.0,
            f1: (spam.f1 + non_spam.f1) / 2.0,
        };
        let n = cm.total();
        let (ws, wn) = ((cm.tp + cm.fn_) as f64 / n as f64, (cm.tn + cm.fp) as f64 / n as f64);
        let weighted_avg = Prf {
            precision: ws * spam.precision + wn * non_spam.precision,
            recall: ws * spam.recall + wn * non_spam.recall,
            f1: ws * spam.f1 + wn * non_spam.f1,
        };
        Ok(EvalReport {
            spam,
            non_spam,
            macro_avg,
            weighted_avg,
            auc: auc(truth, scores)?,
            confusion: cm,
            n,
        })
    }

    /// `metric\tvalue` lines with full-precision values.
    pub fn to_key_values(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "n\t{}", self.n);
        for (name, p) in [
            ("spam", &self.spam),
            ("non_spam", &self.non_spam),
            ("macro", &self.macro_avg),
            ("weighted", &self.weighted_avg),
        ] {
            let _ = writeln!(s, "{name}_precision\t{}", fmt_f64(p.precision));
            let _ = writeln!(s, "{name}_recall\t{}", fmt_f64(p.recall));
            let _ = writeln!(s, "{name}_f1\t{}", fmt_f64(p.f1));
        }
        let _ = writeln!(s, "auc\t{}", fmt_f64(self.auc));
        let cm = &self.confusion;
        let _ = writeln!(s, "tp\t{}\nfp\t{}\nfn\t{}\ntn\t{}", cm.tp, cm.fp, cm.fn_, cm.tn);
        s
    }

    pub fn to_table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{:<10} {:>9} {:>9} {:>9}", "class", "precision", "recall", "f1");
        for (name, p) in [
            ("spam", &self.spam),
            ("non_spam", &self.non_spam),
            ("macro", &self.macro_avg),
            ("weighted", &self.weighted_avg),
        ] {
            let _ = writeln!(s, "{name:<10} {:>9.4} {:>9.4} {:>9.4}", p.precision, p.recall, p.f1);
        }
        let _ = writeln!(s, "auc        {:>9.4}", self.auc);
        let cm = &self.confusion;
        let _ = writeln!(s, "confusion  tp={} fp={} fn={} tn={} (n={})", cm.tp, cm.fp, cm.fn_, cm.tn, self.n);
        s
    }
}

/// Predicts every labeled review and summarizes the results.
pub fn evaluate(model: &TrainedModel, test: &[TokenizedReview]) -> Result<EvalReport> {
    let mut truth = Vec::with_capacity(test.len());
    let mut predicted = Vec::with_capacity(test.len());
    let mut scores = Vec::with_capacity(test.len());
    for doc in test {
        truth.push(doc.label.ok_or_else(|| Error::Unlabeled(doc.id.clone()))?);
        let (label, score) = model.predict(doc)?;
        predicted.push(label);
        scores.push(score);
    }
    EvalReport::from_predictions(&truth, &predicted, &scores)
}
