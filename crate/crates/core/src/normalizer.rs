//! Teencode normalization: rewrites informal spellings ("ko", "wá") to
//! standard Vietnamese before segmentation.
//!
//! Text is case-folded, put in Unicode NFC, split on whitespace with runs of
//! punctuation detached into their own tokens, and every token equal to a
//! map key is replaced by its value. Matching is whole-token only.

use std::collections::BTreeMap;
use std::io::Read;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use unicode_normalization::char::is_combining_mark;
use unicode_normalization::UnicodeNormalization;

use crate::corpus::{Corpus, Review};
use crate::error::{Error, Result};
use crate::text::{content_lines, read_utf8};

const DEFAULT_MAP: &str = include_str!("../data/normalize_map.tsv");

/// Lowercase + NFC, the canonical form used for every comparison.
pub fn canonical(s: &str) -> String {
    s.nfc().collect::<String>().to_lowercase().nfc().collect()
}

/// Characters that are neither letters, digits nor combining marks.
pub fn is_punctuation(c: char) -> bool {
    !c.is_alphanumeric() && !c.is_whitespace() && !is_combining_mark(c)
}

pub fn is_punctuation_token(token: &str) -> bool {
    !token.is_empty() && token.chars().all(is_punctuation)
}

/// Splits canonical text on whitespace and detaches punctuation runs.
fn tokenize(text: &str) -> Vec<&str> {
    let mut out = Vec::new();
    for chunk in text.split_whitespace() {
        let mut start = 0;
        let mut prev: Option<bool> = None;
        for (i, c) in chunk.char_indices() {
            let punct = is_punctuation(c);
            if prev.is_some_and(|p| p != punct) {
                out.push(&chunk[start..i]);
                start = i;
            }
            prev = Some(punct);
        }
        out.push(&chunk[start..]);
    }
    out
}

/// Source-token to replacement-token pairs. Keys are stored canonically.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NormalizationMap {
    entries: BTreeMap<String, String>,
}

impl NormalizationMap {
    pub fn new() -> Self {
        Self::default()
    }

    /// The teencode map shipped with the crate (curated, non-normative).
    pub fn builtin() -> Self {
        Self::parse_str(DEFAULT_MAP).expect("shipped normalization map is valid")
    }

    pub fn load<R: Read>(input: R) -> Result<Self> {
        Self::parse_str(&read_utf8(input)?)
    }

    pub fn parse_str(text: &str) -> Result<Self> {
        let mut map = NormalizationMap::new();
        for (line_no, line) in content_lines(text) {
            let (source, replacement) = line
                .split_once('\t')
                .ok_or_else(|| Error::parse(line_no, "expected `source<TAB>replacement`"))?;
            if replacement.contains('\t') {
                return Err(Error::parse(line_no, "expected exactly two fields"));
            }
            map.insert(source, replacement).map_err(|e| match e {
                Error::DuplicateKey { key, .. } => Error::DuplicateKey { line: line_no, key },
                Error::InvalidArgument(m) => Error::parse(line_no, m),
                other => other,
            })?;
        }
        Ok(map)
    }

    /// Adds one pair. Fails on an empty side, on whitespace inside either
    /// side, or when the canonical key is already present.
    pub fn insert(&mut self, source: &str, replacement: &str) -> Result<()> {
        let key = canonical(source.trim());
        let value = canonical(replacement.trim());
        if key.is_empty() || value.is_empty() {
            return Err(Error::InvalidArgument("empty source or replacement".into()));
        }
        if key.contains(char::is_whitespace) || value.contains(char::is_whitespace) {
            return Err(Error::InvalidArgument(format!(
                "`{source}` -> `{replacement}`: both sides must be single tokens"
            )));
        }
        if self.entries.contains_key(&key) {
            return Err(Error::DuplicateKey { line: 0, key });
        }
        self.entries.insert(key, value);
        Ok(())
    }

    pub fn get(&self, token: &str) -> Option<&str> {
        self.entries.get(token).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    /// Replacement token to the sorted list of sources that produce it.
    pub fn inverse(&self) -> BTreeMap<&str, Vec<&str>> {
        let mut inv: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
        for (k, v) in self.iter() {
            inv.entry(v).or_default().push(k);
        }
        inv
    }

    pub fn to_tsv(&self) -> String {
        self.iter().map(|(k, v)| format!("{k}\t{v}\n")).collect()
    }
}

/// Canonicalizes `text` and replaces every whole token found in `map`.
pub fn normalize_text(text: &str, map: &NormalizationMap) -> String {
    let canon = canonical(text);
    let tokens: Vec<&str> = tokenize(&canon)
        .into_iter()
        .map(|t| map.get(t).unwrap_or(t))
        .collect();
    tokens.join(" ")
}

/// Rewrites standard words back into teencode: every whitespace token of a
/// review whose canonical form is a replacement value in `map` is swapped,
/// with probability `rate`, for one of the sources mapping to it. The result
/// normalizes back to the same text as the input.
///
/// Uses `ChaCha8Rng::seed_from_u64(seed)`; one `f64` draw per eligible token
/// plus one index draw per rewrite.
pub fn inject_teencode(corpus: &Corpus, map: &NormalizationMap, rate: f64, seed: u64) -> Result<Corpus> {
    if !(0.0..=1.0).contains(&rate) {
        return Err(Error::InvalidArgument(format!("rate {rate} outside [0, 1]")));
    }
    let inverse = map.inverse();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let reviews = corpus
        .iter()
        .map(|r| {
            let words: Vec<String> = r
                .text
                .split_whitespace()
                .map(|w| match inverse.get(canonical(w).as_str()) {
                    Some(sources) if rng.gen::<f64>() < rate => {
                        sources[rng.gen_range(0..sources.len())].to_string()
                    }
                    _ => w.to_string(),
                })
                .collect();
            Review::new(r.id.clone(), words.join(" "), r.label)
        })
        .collect();
    Corpus::new(reviews)
}
