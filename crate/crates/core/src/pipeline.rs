//! Text preprocessing in pipeline order: normalize, then segment.

use crate::corpus::{Corpus, Review};
use crate::error::Result;
use crate::featurizer::Lexicon;
use crate::normalizer::{normalize_text, NormalizationMap};
use crate::segmenter::{segment, TokenizedReview, WordLexicon};

#[derive(Debug, Clone)]
pub struct Preprocessor {
    map: NormalizationMap,
    lexicon: WordLexicon,
}

impl Preprocessor {
    pub fn new(map: NormalizationMap, lexicon: WordLexicon) -> Self {
        Preprocessor { map, lexicon }
    }

    /// Shipped teencode map and segmentation lexicon, with the shipped
    /// feature lexicons merged into the latter.
    pub fn builtin() -> Self {
        use crate::featurizer::LexiconKind;
        Self::new(NormalizationMap::builtin(), WordLexicon::builtin())
            .with_feature_lexicons([
                &Lexicon::builtin(LexiconKind::Opinion),
                &Lexicon::builtin(LexiconKind::Question),
            ])
            .expect("shipped lexicons fit the segmenter")
    }

    /// Adds every feature-lexicon word to the segmentation lexicon so that
    /// multi-syllable entries come out of segmentation as single tokens.
    pub fn with_feature_lexicons<'a, I>(mut self, lexicons: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a Lexicon>,
    {
        for lex in lexicons {
            self.lexicon.extend(lex.words())?;
        }
        Ok(self)
    }

    /// Same segmentation, no teencode replacement. Case folding, Unicode
    /// composition and punctuation splitting still apply.
    pub fn without_normalization(&self) -> Self {
        Preprocessor {
            map: NormalizationMap::new(),
            lexicon: self.lexicon.clone(),
        }
    }

    pub fn map(&self) -> &NormalizationMap {
        &self.map
    }

    pub fn lexicon(&self) -> &WordLexicon {
        &self.lexicon
    }

    pub fn tokens(&self, text: &str) -> Vec<String> {
        segment(&normalize_text(text, &self.map), &self.lexicon)
    }

    pub fn tokenize(&self, review: &Review) -> TokenizedReview {
        TokenizedReview::new(review.id.clone(), self.tokens(&review.text), review.label)
    }

    pub fn tokenize_corpus(&self, corpus: &Corpus) -> Vec<TokenizedReview> {
        corpus.iter().map(|r| self.tokenize(r)).collect()
    }
}
