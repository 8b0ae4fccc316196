//! Seeded generator of labeled review corpora.
//!
//! Every review draws a length uniformly from `min_tokens..=max_tokens`.
//! Each token is, with the class's mixing probability, a uniform draw from
//! that class's indicative pool, and otherwise a uniform draw from the shared
//! filler pool. Pool words are written with `_` between syllables and are
//! emitted into the review text with spaces instead.
//!
//! Randomness comes from `ChaCha8Rng::seed_from_u64(seed)` (crate
//! `rand_chacha` 0.3) consumed in a fixed order: reviews alternate spam,
//! non-spam; per review one length draw, then per token one `f64` draw and
//! one index draw. Changing this order changes every generated corpus.

use std::collections::HashSet;
use std::io::Read;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Corpus, Label, Review};
use crate::error::{Error, Result};
use crate::text::{content_lines, read_utf8};

const DEFAULT_SPEC: &str = include_str!("../../data/synthetic_spec.txt");

/// Word pools and sampling probabilities for [`generate_synthetic`].
///
/// Text form, one `key = value` per line (`#` comments allowed):
///
/// ```text
/// spam_prob = 0.5
/// non_spam_prob = 0.5
/// min_tokens = 5
/// max_tokens = 30
/// spam_words = khi_nào, ở_đâu
/// non_spam_words = tốt, đẹp
/// filler_words = điện_thoại, máy
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSpec {
    pub spam_words: Vec<String>,
    pub non_spam_words: Vec<String>,
    pub filler_words: Vec<String>,
    /// Probability that a token of a spam review comes from `spam_words`.
    pub spam_prob: f64,
    /// Probability that a token of a non-spam review comes from `non_spam_words`.
    pub non_spam_prob: f64,
    pub min_tokens: usize,
    pub max_tokens: usize,
}

impl Default for SyntheticSpec {
    /// Question words as the spam pool and opinion words as the non-spam pool,
    /// both taken from the shipped lexicons.
    fn default() -> Self {
        Self::parse_str(DEFAULT_SPEC).expect("shipped synthetic spec is valid")
    }
}

impl SyntheticSpec {
    pub fn parse<R: Read>(input: R) -> Result<Self> {
        Self::parse_str(&read_utf8(input)?)
    }

    pub fn parse_str(text: &str) -> Result<Self> {
        let mut spam_words = None;
        let mut non_spam_words = None;
        let mut filler_words = None;
        let mut spam_prob = None;
        let mut non_spam_prob = None;
        let mut min_tokens = None;
        let mut max_tokens = None;

        for (line_no, line) in content_lines(text) {
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::parse(line_no, "expected `key = value`"))?;
            let (key, value) = (key.trim(), value.trim());
            let words = || -> Vec<String> {
                value
                    .split(',')
                    .map(str::trim)
                    .filter(|w| !w.is_empty())
                    .map(str::to_string)
                    .collect()
            };
            let prob = || -> Result<f64> {
                let p = crate::text::parse_f64(line_no, value)?;
                if !(0.0..=1.0).contains(&p) {
                    return Err(Error::parse(line_no, format!("probability {p} outside [0, 1]")));
                }
                Ok(p)
            };
            let slot_filled = match key {
                "spam_words" => spam_words.replace(words()).is_some(),
                "non_spam_words" => non_spam_words.replace(words()).is_some(),
                "filler_words" => filler_words.replace(words()).is_some(),
                "spam_prob" => spam_prob.replace(prob()?).is_some(),
                "non_spam_prob" => non_spam_prob.replace(prob()?).is_some(),
                "min_tokens" => min_tokens
                    .replace(crate::text::parse_usize(line_no, value)?)
                    .is_some(),
                "max_tokens" => max_tokens
                    .replace(crate::text::parse_usize(line_no, value)?)
                    .is_some(),
                other => return Err(Error::parse(line_no, format!("unknown key `{other}`"))),
            };
            if slot_filled {
                return Err(Error::DuplicateKey {
                    line: line_no,
                    key: key.to_string(),
                });
            }
        }

        let missing = |k: &str| Error::Format(format!("synthetic spec is missing `{k}`"));
        let spec = SyntheticSpec {
            spam_words: spam_words.ok_or_else(|| missing("spam_words"))?,
            non_spam_words: non_spam_words.ok_or_else(|| missing("non_spam_words"))?,
            filler_words: filler_words.ok_or_else(|| missing("filler_words"))?,
            spam_prob: spam_prob.ok_or_else(|| missing("spam_prob"))?,
            non_spam_prob: non_spam_prob.ok_or_else(|| missing("non_spam_prob"))?,
            min_tokens: min_tokens.unwrap_or(5),
            max_tokens: max_tokens.unwrap_or(30),
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Pools must be non-empty and pairwise disjoint, probabilities in
    /// `[0, 1]`, and `1 <= min_tokens <= max_tokens`.
    pub fn validate(&self) -> Result<()> {
        let pools = [
            ("spam_words", &self.spam_words),
            ("non_spam_words", &self.non_spam_words),
            ("filler_words", &self.filler_words),
        ];
        for (name, pool) in pools {
            if pool.is_empty() {
                return Err(Error::InvalidArgument(format!("`{name}` pool is empty")));
            }
            if let Some(w) = pool.iter().find(|w| w.trim().is_empty() || w.contains(char::is_whitespace)) {
                return Err(Error::InvalidArgument(format!(
                    "`{name}` contains invalid word {w:?}; join syllables with '_'"
                )));
            }
        }
        for i in 0..pools.len() {
            let a: HashSet<&String> = pools[i].1.iter().collect();
            for other in &pools[i + 1..] {
                if let Some(w) = other.1.iter().find(|w| a.contains(w)) {
                    return Err(Error::InvalidArgument(format!(
                        "word `{w}` appears in both `{}` and `{}`",
                        pools[i].0, other.0
                    )));
                }
            }
        }
        for p in [self.spam_prob, self.non_spam_prob] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidArgument(format!("probability {p} outside [0, 1]")));
            }
        }
        if self.min_tokens == 0 || self.min_tokens > self.max_tokens {
            return Err(Error::InvalidArgument(format!(
                "token range {}..={} is invalid",
                self.min_tokens, self.max_tokens
            )));
        }
        Ok(())
    }

    fn pool(&self, label: Label) -> (&[String], f64) {
        match label {
            Label::Spam => (&self.spam_words, self.spam_prob),
            Label::NonSpam => (&self.non_spam_words, self.non_spam_prob),
        }
    }
}

/// Generates `2 * n_per_class` labeled reviews with ids `syn-000000`,
/// `syn-000001`, ... alternating spam and non-spam.
pub fn generate_synthetic(n_per_class: usize, spec: &SyntheticSpec, seed: u64) -> Result<Corpus> {
    if n_per_class == 0 {
        return Err(Error::InvalidArgument("n_per_class must be at least 1".into()));
    }
    spec.validate()?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut reviews = Vec::with_capacity(2 * n_per_class);
    for _ in 0..n_per_class {
        for label in Label::ALL {
            let (indicative, prob) = spec.pool(label);
            let len = rng.gen_range(spec.min_tokens..=spec.max_tokens);
            let mut words = Vec::with_capacity(len);
            for _ in 0..len {
                let pool = if rng.gen::<f64>() < prob {
                    indicative
                } else {
                    &spec.filler_words
                };
                let word = &pool[rng.gen_range(0..pool.len())];
                words.push(word.replace('_', " "));
            }
            let id = format!("syn-{:06}", reviews.len());
            reviews.push(Review::new(id, words.join(" "), Some(label)));
        }
    }
    Corpus::new(reviews)
}
