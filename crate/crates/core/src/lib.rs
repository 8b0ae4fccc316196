//! Spam detection for Vietnamese product reviews.
//!
//! The pipeline runs in this order:
//!
//! 1. [`normalizer`] rewrites teencode ("ko", "wá") to standard spelling;
//! 2. [`segmenter`] groups syllables into words by greedy longest match;
//! 3. [`featurizer`] selects the top-k terms by chi-square or odds ratio and
//!    turns reviews into TF-IDF plus lexicon-ratio vectors;
//! 4. [`classifiers`] trains Gaussian naive Bayes, logistic regression or a
//!    Pegasos linear SVM;
//! 5. [`metrics`] reports precision, recall, F1 and AUC.
//!
//! [`corpus`] holds the review file format, stratified splitting and a
//! synthetic corpus generator.

pub mod classifiers;
pub mod corpus;
pub mod error;
pub mod featurizer;
pub mod metrics;
pub mod normalizer;
pub mod pipeline;
pub mod segmenter;
mod text;

pub use classifiers::{Classifier, Hyperparameters, ModelKind, TrainedModel};
pub use corpus::{generate_synthetic, stratified_split, Corpus, Label, Review, SyntheticSpec};
pub use error::{Error, Result};
pub use featurizer::{build_feature_space, FeatureSpace, FeatureVector, Lexicon, LexiconKind, Selector};
pub use metrics::{evaluate, EvalReport};
pub use normalizer::{normalize_text, NormalizationMap};
pub use pipeline::Preprocessor;
pub use segmenter::{segment, TokenizedReview, WordLexicon};
