use std::collections::HashMap;

use super::space::FeatureSpace;
use crate::segmenter::TokenizedReview;

/// Dense feature vector laid out as described by a [`FeatureSpace`].
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector(pub Vec<f64>);

impl FeatureVector {
    pub fn zeros(dim: usize) -> Self {
        FeatureVector(vec![0.0; dim])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn dot(&self, weights: &[f64]) -> f64 {
        self.0.iter().zip(weights).map(|(x, w)| x * w).sum()
    }
}

impl From<Vec<f64>> for FeatureVector {
    fn from(v: Vec<f64>) -> Self {
        FeatureVector(v)
    }
}

/// Raw term count times `ln(n_train_docs / doc_freq)`.
pub fn tfidf_weight(term_count_in_doc: u64, doc_freq: u64, n_train_docs: u64) -> f64 {
    if term_count_in_doc == 0 {
        return 0.0;
    }
    debug_assert!(doc_freq >= 1 && doc_freq <= n_train_docs);
    term_count_in_doc as f64 * (n_train_docs as f64 / doc_freq as f64).ln()
}

pub fn vectorize(doc: &TokenizedReview, space: &FeatureSpace) -> FeatureVector {
    vectorize_tokens(&doc.tokens, space)
}

/// Builds the three-block vector for a token sequence. Tokens outside the
/// space are ignored; an empty document maps to the zero vector.
pub fn vectorize_tokens<S: AsRef<str>>(tokens: &[S], space: &FeatureSpace) -> FeatureVector {
    let n_terms = space.selected_terms().len();
    let n_opinion = space.opinion_words().len();
    let mut v = vec![0.0; space.dimension()];
    if tokens.is_empty() {
        return FeatureVector(v);
    }

    let mut counts: HashMap<&str, u64> = HashMap::new();
    for t in tokens {
        *counts.entry(t.as_ref()).or_default() += 1;
    }

    let len = tokens.len() as f64;
    for (&token, &count) in &counts {
        if let Some(i) = space.term_position(token) {
            let term = &space.selected_terms()[i];
            v[i] = tfidf_weight(count, term.doc_freq, space.n_train_docs());
        }
        if let Some(i) = space.opinion_position(token) {
            v[n_terms + i] = count as f64 / len;
        }
        if let Some(i) = space.question_position(token) {
            v[n_terms + n_opinion + i] = count as f64 / len;
        }
    }

    let norm = v[..n_terms].iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        for x in &mut v[..n_terms] {
            *x /= norm;
        }
    }
    FeatureVector(v)
}
