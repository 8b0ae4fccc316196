//! Feature selection and vectorization.
//!
//! Terms are scored against the Spam class with a chi-square or odds-ratio
//! statistic over document presence counts, the top `k` are kept, and each
//! review becomes a dense vector of three blocks:
//!
//! 1. TF-IDF weights of the selected terms, L2-normalized as a block;
//! 2. one ratio per opinion-lexicon word: occurrences / review length;
//! 3. one ratio per question-lexicon word, likewise.

mod contingency;
mod lexicon;
mod space;
mod vector;

pub use contingency::{chi_square, count_contingency, odds_ratio, ContingencyCounts};
pub use lexicon::{check_disjoint, Lexicon, LexiconKind};
pub use space::{build_feature_space, FeatureSpace, ScoredTerm, Selector};
pub use vector::{tfidf_weight, vectorize, vectorize_tokens, FeatureVector};
