//! The three trainable classifiers and the serialized model that bundles a
//! classifier with the feature space it was trained against.

pub mod lr;
pub mod nb;
pub mod svm;

use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use crate::corpus::Label;
use crate::error::{Error, Result};
use crate::featurizer::{vectorize, FeatureSpace, FeatureVector};
use crate::segmenter::TokenizedReview;
use crate::text::{fmt_f64, parse_f64, parse_usize, LineReader};

pub use lr::{sigmoid, train_lr, LrModel, LrObjective};
pub use nb::{train_nb, ClassGaussian, NbModel};
pub use svm::{svm_objective, train_svm, SvmModel};

const HEADER: &str = "spamkit-model\t1";

/// Validates a training set and returns its dimension.
pub(crate) fn check_training_data(x: &[FeatureVector], y: &[Label]) -> Result<usize> {
    if x.len() != y.len() {
        return Err(Error::InvalidArgument(format!(
            "{} feature vectors but {} labels",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 2 {
        return Err(Error::InvalidArgument("need at least two training examples".into()));
    }
    if !(y.contains(&Label::Spam) && y.contains(&Label::NonSpam)) {
        return Err(Error::SingleClass);
    }
    let dim = x[0].len();
    if let Some(v) = x.iter().find(|v| v.len() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            actual: v.len(),
        });
    }
    Ok(dim)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    NaiveBayes,
    Logistic,
    Svm,
}

impl ModelKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::NaiveBayes => "nb",
            ModelKind::Logistic => "lr",
            ModelKind::Svm => "svm",
        }
    }

    /// Score at or above which a review is labeled Spam.
    pub fn threshold(self) -> f64 {
        match self {
            ModelKind::NaiveBayes | ModelKind::Logistic => 0.5,
            ModelKind::Svm => 0.0,
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nb" => Ok(ModelKind::NaiveBayes),
            "lr" => Ok(ModelKind::Logistic),
            "svm" => Ok(ModelKind::Svm),
            other => Err(Error::InvalidArgument(format!(
                "unknown model `{other}` (expected svm, lr or nb)"
            ))),
        }
    }
}

/// Training hyperparameters, one variant per model kind.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Hyperparameters {
    NaiveBayes { variance_floor: f64 },
    Logistic { lambda: f64, learning_rate: f64, epochs: usize },
    Svm { lambda: f64, epochs: usize },
}

impl Hyperparameters {
    pub fn defaults(kind: ModelKind) -> Self {
        match kind {
            ModelKind::NaiveBayes => Hyperparameters::NaiveBayes {
                variance_floor: nb::DEFAULT_VARIANCE_FLOOR,
            },
            ModelKind::Logistic => Hyperparameters::Logistic {
                lambda: lr::DEFAULT_LAMBDA,
                learning_rate: lr::DEFAULT_LEARNING_RATE,
                epochs: lr::DEFAULT_EPOCHS,
            },
            ModelKind::Svm => Hyperparameters::Svm {
                lambda: svm::DEFAULT_LAMBDA,
                epochs: svm::DEFAULT_EPOCHS,
            },
        }
    }

    pub fn kind(&self) -> ModelKind {
        match self {
            Hyperparameters::NaiveBayes { .. } => ModelKind::NaiveBayes,
            Hyperparameters::Logistic { .. } => ModelKind::Logistic,
            Hyperparameters::Svm { .. } => ModelKind::Svm,
        }
    }

    /// `(name, value)` pairs in file order.
    pub fn entries(&self) -> Vec<(&'static str, String)> {
        match *self {
            Hyperparameters::NaiveBayes { variance_floor } => vec![("variance_floor", fmt_f64(variance_floor))],
            Hyperparameters::Logistic {
                lambda,
                learning_rate,
                epochs,
            } => vec![
                ("lambda", fmt_f64(lambda)),
                ("learning_rate", fmt_f64(learning_rate)),
                ("epochs", epochs.to_string()),
            ],
            Hyperparameters::Svm { lambda, epochs } => {
                vec![("lambda", fmt_f64(lambda)), ("epochs", epochs.to_string())]
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Classifier {
    NaiveBayes(NbModel),
    Logistic(LrModel),
    Svm(SvmModel),
}

impl Classifier {
    pub fn kind(&self) -> ModelKind {
        match self {
            Classifier::NaiveBayes(_) => ModelKind::NaiveBayes,
            Classifier::Logistic(_) => ModelKind::Logistic,
            Classifier::Svm(_) => ModelKind::Svm,
        }
    }

    pub fn dimension(&self) -> usize {
        match self {
            Classifier::NaiveBayes(m) => m.dimension(),
            Classifier::Logistic(m) => m.dimension(),
            Classifier::Svm(m) => m.dimension(),
        }
    }

    /// Ranking score: Spam posterior, Spam probability or SVM margin.
    pub fn score(&self, x: &FeatureVector) -> Result<f64> {
        match self {
            Classifier::NaiveBayes(m) => m.posterior(x),
            Classifier::Logistic(m) => m.probability(x),
            Classifier::Svm(m) => m.margin(x),
        }
    }

    /// Label and score; ties at the threshold go to Spam.
    pub fn classify(&self, x: &FeatureVector) -> Result<(Label, f64)> {
        let score = self.score(x)?;
        let label = if score >= self.kind().threshold() {
            Label::Spam
        } else {
            Label::NonSpam
        };
        Ok((label, score))
    }

    pub fn train(x: &[FeatureVector], y: &[Label], hyper: &Hyperparameters, seed: u64) -> Result<Self> {
        Ok(match *hyper {
            Hyperparameters::NaiveBayes { variance_floor } => Classifier::NaiveBayes(train_nb(x, y, variance_floor)?),
            Hyperparameters::Logistic {
                lambda,
                learning_rate,
                epochs,
            } => Classifier::Logistic(train_lr(x, y, lambda, learning_rate, epochs, seed)?),
            Hyperparameters::Svm { lambda, epochs } => Classifier::Svm(train_svm(x, y, lambda, epochs, seed)?),
        })
    }
}

/// A classifier together with its feature space and training settings.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainedModel {
    classifier: Classifier,
    space: FeatureSpace,
    hyperparameters: Hyperparameters,
    seed: u64,
}

impl TrainedModel {
    pub fn new(classifier: Classifier, space: FeatureSpace, hyperparameters: Hyperparameters, seed: u64) -> Result<Self> {
        if classifier.kind() != hyperparameters.kind() {
            return Err(Error::InvalidArgument(format!(
                "{} classifier with {} hyperparameters",
                classifier.kind(),
                hyperparameters.kind()
            )));
        }
        if classifier.dimension() != space.dimension() {
            return Err(Error::DimensionMismatch {
                expected: space.dimension(),
                actual: classifier.dimension(),
            });
        }
        Ok(TrainedModel {
            classifier,
            space,
            hyperparameters,
            seed,
        })
    }

    /// Vectorizes labeled reviews in `space` and fits the requested classifier.
    pub fn train(space: FeatureSpace, docs: &[TokenizedReview], hyperparameters: Hyperparameters, seed: u64) -> Result<Self> {
        let mut x = Vec::with_capacity(docs.len());
        let mut y = Vec::with_capacity(docs.len());
        for doc in docs {
            y.push(doc.label.ok_or_else(|| Error::Unlabeled(doc.id.clone()))?);
            x.push(vectorize(doc, &space));
        }
        let classifier = Classifier::train(&x, &y, &hyperparameters, seed)?;
        Self::new(classifier, space, hyperparameters, seed)
    }

    pub fn classifier(&self) -> &Classifier {
        &self.classifier
    }

    pub fn space(&self) -> &FeatureSpace {
        &self.space
    }

    pub fn hyperparameters(&self) -> &Hyperparameters {
        &self.hyperparameters
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn kind(&self) -> ModelKind {
        self.classifier.kind()
    }

    pub fn predict(&self, doc: &TokenizedReview) -> Result<(Label, f64)> {
        self.classifier.classify(&vectorize(doc, &self.space))
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{HEADER}");
        let _ = writeln!(s, "model\t{}", self.kind());
        let _ = writeln!(s, "seed\t{}", self.seed);
        for (k, v) in self.hyperparameters.entries() {
            let _ = writeln!(s, "{k}\t{v}");
        }
        s.push_str("[feature-space]\n");
        self.space.write_into(&mut s);
        s.push_str("[parameters]\n");
        match &self.classifier {
            Classifier::NaiveBayes(m) => {
                for (name, class) in [("spam", &m.spam), ("non_spam", &m.non_spam)] {
                    let _ = writeln!(s, "{name}_prior\t{}", fmt_f64(class.prior));
                    write_vec(&mut s, &format!("{name}_mean"), &class.mean);
                    write_vec(&mut s, &format!("{name}_variance"), &class.variance);
                }
            }
            Classifier::Logistic(m) => {
                let _ = writeln!(s, "beta0\t{}", fmt_f64(m.beta0));
                write_vec(&mut s, "beta", &m.beta);
            }
            Classifier::Svm(m) => {
                let _ = writeln!(s, "b\t{}", fmt_f64(m.b));
                write_vec(&mut s, "w", &m.w);
            }
        }
        s
    }

    pub fn parse_str(text: &str) -> Result<Self> {
        let mut lines = LineReader::new(text);
        lines.expect(HEADER).map_err(|e| match e {
            Error::Parse { line: 1, .. } => Error::Format("not a spamkit model file (version 1)".into()),
            other => other,
        })?;
        let (n, v) = lines.field("model")?;
        let kind: ModelKind = v.parse().map_err(|e: Error| Error::parse(n, e.to_string()))?;
        let (n, v) = lines.field("seed")?;
        let seed = v
            .parse::<u64>()
            .map_err(|_| Error::parse(n, format!("invalid seed `{v}`")))?;
        let mut float = |key: &str| -> Result<f64> {
            let (n, v) = lines.field(key)?;
            parse_f64(n, v)
        };
        let hyperparameters = match kind {
            ModelKind::NaiveBayes => Hyperparameters::NaiveBayes {
                variance_floor: float("variance_floor")?,
            },
            ModelKind::Logistic => {
                let lambda = float("lambda")?;
                let learning_rate = float("learning_rate")?;
                let (n, v) = lines.field("epochs")?;
                Hyperparameters::Logistic {
                    lambda,
                    learning_rate,
                    epochs: parse_usize(n, v)?,
                }
            }
            ModelKind::Svm => {
                let lambda = float("lambda")?;
                let (n, v) = lines.field("epochs")?;
                Hyperparameters::Svm {
                    lambda,
                    epochs: parse_usize(n, v)?,
                }
            }
        };
        lines.expect("[feature-space]")?;
        let space = FeatureSpace::read_from(&mut lines)?;
        lines.expect("[parameters]")?;
        let dim = space.dimension();
        let classifier = match hyperparameters {
            Hyperparameters::NaiveBayes { variance_floor } => {
                let mut class = |name: &str| -> Result<ClassGaussian> {
                    let (n, v) = lines.field(&format!("{name}_prior"))?;
                    Ok(ClassGaussian {
                        prior: parse_f64(n, v)?,
                        mean: read_vec(&mut lines, &format!("{name}_mean"), dim)?,
                        variance: read_vec(&mut lines, &format!("{name}_variance"), dim)?,
                    })
                };
                let spam = class("spam")?;
                let non_spam = class("non_spam")?;
                Classifier::NaiveBayes(NbModel {
                    spam,
                    non_spam,
                    variance_floor,
                })
            }
            Hyperparameters::Logistic { lambda, .. } => {
                let (n, v) = lines.field("beta0")?;
                let beta0 = parse_f64(n, v)?;
                Classifier::Logistic(LrModel {
                    beta0,
                    beta: read_vec(&mut lines, "beta", dim)?,
                    l2_lambda: lambda,
                })
            }
            Hyperparameters::Svm { lambda, .. } => {
                let (n, v) = lines.field("b")?;
                let b = parse_f64(n, v)?;
                Classifier::Svm(SvmModel {
                    w: read_vec(&mut lines, "w", dim)?,
                    b,
                    lambda,
                })
            }
        };
        lines.finish()?;
        Self::new(classifier, space, hyperparameters, seed)
    }
}

fn write_vec(s: &mut String, key: &str, values: &[f64]) {
    s.push_str(key);
    s.push('\t');
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            s.push(' ');
        }
        s.push_str(&fmt_f64(*v));
    }
    s.push('\n');
}

fn read_vec(lines: &mut LineReader<'_>, key: &str, dim: usize) -> Result<Vec<f64>> {
    let (n, v) = lines.field(key)?;
    let values: Vec<f64> = if v.is_empty() {
        Vec::new()
    } else {
        v.split(' ').map(|x| parse_f64(n, x)).collect::<Result<_>>()?
    };
    if values.len() != dim {
        return Err(Error::parse(n, format!("`{key}` has {} values, expected {dim}", values.len())));
    }
    Ok(values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::featurizer::{build_feature_space, Lexicon, LexiconKind, Selector};

    fn docs() -> Vec<TokenizedReview> {
        let spam = ["khi_nào bán vậy", "ở_đâu có bán", "giá bao_nhiêu vậy", "khi_nào có hàng"];
        let ham = ["máy đẹp pin tốt", "màn_hình đẹp", "dùng tốt lắm", "pin trâu máy bền"];
        spam.iter()
            .enumerate()
            .map(|(i, t)| TokenizedReview::from_tokens(&format!("s{i}"), t, Some(Label::Spam)))
            .chain(
                ham.iter()
                    .enumerate()
                    .map(|(i, t)| TokenizedReview::from_tokens(&format!("n{i}"), t, Some(Label::NonSpam))),
            )
            .collect()
    }

    fn space() -> FeatureSpace {
        build_feature_space(
            &docs(),
            Selector::ChiSquare,
            500,
            Some(&Lexicon::builtin(LexiconKind::Opinion)),
            Some(&Lexicon::builtin(LexiconKind::Question)),
        )
        .unwrap()
    }

    #[test]
    fn every_kind_round_trips_bit_exactly() {
        for kind in [ModelKind::NaiveBayes, ModelKind::Logistic, ModelKind::Svm] {
            let model = TrainedModel::train(space(), &docs(), Hyperparameters::defaults(kind), 42).unwrap();
            let text = model.to_text();
            let back = TrainedModel::parse_str(&text).unwrap();
            assert_eq!(back, model, "{kind}");
            assert_eq!(back.to_text(), text);
            for d in docs() {
                let (l1, s1) = model.predict(&d).unwrap();
                let (l2, s2) = back.predict(&d).unwrap();
                assert_eq!(l1, l2);
                assert_eq!(s1.to_bits(), s2.to_bits());
            }
        }
    }

    #[test]
    fn training_set_is_fit() {
        for kind in [ModelKind::NaiveBayes, ModelKind::Logistic, ModelKind::Svm] {
            let model = TrainedModel::train(space(), &docs(), Hyperparameters::defaults(kind), 1).unwrap();
            for d in docs() {
                assert_eq!(model.predict(&d).unwrap().0, d.label.unwrap(), "{kind} on {}", d.id);
            }
        }
    }

    #[test]
    fn empty_doc_under_zero_lr_is_spam() {
        let space = space();
        let dim = space.dimension();
        let lr = LrModel {
            beta0: 0.0,
            beta: vec![0.0; dim],
            l2_lambda: 0.0,
        };
        let model = TrainedModel::new(Classifier::Logistic(lr), space, Hyperparameters::defaults(ModelKind::Logistic), 0).unwrap();
        let empty = TokenizedReview::new("e", vec![], None);
        assert_eq!(model.predict(&empty).unwrap(), (Label::Spam, 0.5));
    }

    #[test]
    fn predict_dispatches_to_variant() {
        let model = TrainedModel::train(space(), &docs(), Hyperparameters::defaults(ModelKind::Svm), 3).unwrap();
        let d = TokenizedReview::from_tokens("q", "máy đẹp khi_nào", None);
        let x = vectorize(&d, model.space());
        let Classifier::Svm(svm) = model.classifier() else { unreachable!() };
        assert_eq!(model.predict(&d).unwrap().1, svm.margin(&x).unwrap());
    }

    #[test]
    fn rejects_inconsistent_models() {
        let space = space();
        let lr = LrModel {
            beta0: 0.0,
            beta: vec![0.0; 3],
            l2_lambda: 0.0,
        };
        assert!(TrainedModel::new(Classifier::Logistic(lr.clone()), space.clone(), Hyperparameters::defaults(ModelKind::Logistic), 0).is_err());
        let lr = LrModel {
            beta: vec![0.0; space.dimension()],
            ..lr
        };
        assert!(TrainedModel::new(Classifier::Logistic(lr), space, Hyperparameters::defaults(ModelKind::Svm), 0).is_err());
        assert!(TrainedModel::parse_str("garbage").is_err());
    }

    #[test]
    fn unlabeled_training_doc_is_error() {
        let mut d = docs();
        d.push(TokenizedReview::from_tokens("u", "máy", None));
        assert!(matches!(
            TrainedModel::train(space(), &d, Hyperparameters::defaults(ModelKind::Svm), 0),
            Err(Error::Unlabeled(_))
        ));
    }
}
