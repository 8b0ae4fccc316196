//! Shared fixtures for the criterion benchmarks.

use spamkit_core::{
    build_feature_space, generate_synthetic, FeatureSpace, Lexicon, LexiconKind, Preprocessor, Selector, SyntheticSpec,
    TokenizedReview,
};

/// Tokenized default synthetic corpus with `n_per_class` reviews per label.
pub fn synthetic_docs(n_per_class: usize, seed: u64) -> Vec<TokenizedReview> {
    let corpus = generate_synthetic(n_per_class, &SyntheticSpec::default(), seed).expect("default spec is valid");
    Preprocessor::builtin().tokenize_corpus(&corpus)
}

/// Chi-square space with k = 500 and both shipped lexicons.
pub fn default_space(docs: &[TokenizedReview]) -> FeatureSpace {
    build_feature_space(
        docs,
        Selector::ChiSquare,
        500,
        Some(&Lexicon::builtin(LexiconKind::Opinion)),
        Some(&Lexicon::builtin(LexiconKind::Question)),
    )
    .expect("synthetic corpus has a vocabulary")
}
