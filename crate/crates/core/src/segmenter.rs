//! Dictionary-based greedy longest-match word segmentation.
//!
//! Vietnamese writes one syllable per whitespace-separated unit, so a word
//! like "điện thoại" spans two units. The segmenter scans syllables left to
//! right and, at each position, takes the longest window (up to the
//! lexicon's `max_syllables`) that is a lexicon word. Multi-syllable words
//! are emitted joined with `_`. Punctuation-only units are dropped and
//! windows never span them.

use std::collections::HashSet;
use std::io::Read;

use crate::corpus::{Corpus, Label};
use crate::error::{Error, Result};
use crate::normalizer::{canonical, is_punctuation_token};
use crate::text::{content_lines, read_utf8};

/// Longest word the lexicon accepts, in syllables.
pub const MAX_WORD_SYLLABLES: usize = 4;

const DEFAULT_LEXICON: &str = include_str!("../data/segment_lexicon.txt");

/// Set of known words, each stored as canonical syllables joined by one space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordLexicon {
    words: HashSet<String>,
    max_syllables: usize,
}

impl WordLexicon {
    /// The segmentation lexicon shipped with the crate.
    pub fn builtin() -> Self {
        Self::parse_str(DEFAULT_LEXICON).expect("shipped lexicon is valid")
    }

    pub fn load<R: Read>(input: R) -> Result<Self> {
        Self::parse_str(&read_utf8(input)?)
    }

    /// One word per line with syllables separated by spaces (`_` is accepted
    /// as a separator too). Duplicate lines collapse.
    pub fn parse_str(text: &str) -> Result<Self> {
        let mut lex = WordLexicon {
            words: HashSet::new(),
            max_syllables: 0,
        };
        for (line_no, line) in content_lines(text) {
            lex.insert(line).map_err(|m| Error::parse(line_no, m))?;
        }
        if lex.words.is_empty() {
            return Err(Error::Format("segmentation lexicon is empty".into()));
        }
        Ok(lex)
    }

    pub fn from_words<I, S>(words: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut lex = WordLexicon {
            words: HashSet::new(),
            max_syllables: 0,
        };
        lex.extend(words)?;
        if lex.words.is_empty() {
            return Err(Error::Format("segmentation lexicon is empty".into()));
        }
        Ok(lex)
    }

    /// Adds more words, e.g. the multi-syllable entries of the feature lexicons.
    pub fn extend<I, S>(&mut self, words: I) -> Result<()>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        for w in words {
            self.insert(w.as_ref()).map_err(Error::InvalidArgument)?;
        }
        Ok(())
    }

    fn insert(&mut self, word: &str) -> std::result::Result<(), String> {
        let canon = canonical(&word.replace('_', " "));
        let syllables: Vec<&str> = canon.split_whitespace().collect();
        match syllables.len() {
            0 => Ok(()),
            n if n > MAX_WORD_SYLLABLES => Err(format!(
                "`{}` has {n} syllables, at most {MAX_WORD_SYLLABLES} allowed",
                word.trim()
            )),
            n => {
                self.max_syllables = self.max_syllables.max(n);
                self.words.insert(syllables.join(" "));
                Ok(())
            }
        }
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn max_syllables(&self) -> usize {
        self.max_syllables
    }

    /// `word` uses single spaces between syllables.
    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(word)
    }
}

/// Segments normalized text into word tokens.
pub fn segment(text: &str, lexicon: &WordLexicon) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut run: Vec<&str> = Vec::new();
    for unit in text.split_whitespace() {
        if is_punctuation_token(unit) {
            segment_run(&run, lexicon, &mut tokens);
            run.clear();
        } else {
            run.push(unit);
        }
    }
    segment_run(&run, lexicon, &mut tokens);
    tokens
}

fn segment_run(syllables: &[&str], lexicon: &WordLexicon, out: &mut Vec<String>) {
    let mut i = 0;
    let mut window = String::new();
    while i < syllables.len() {
        let longest = lexicon.max_syllables.min(syllables.len() - i);
        let mut taken = 1;
        for len in (2..=longest).rev() {
            window.clear();
            for (j, s) in syllables[i..i + len].iter().enumerate() {
                if j > 0 {
                    window.push(' ');
                }
                window.push_str(s);
            }
            if lexicon.contains(&window) {
                taken = len;
                break;
            }
        }
        out.push(syllables[i..i + taken].join("_"));
        i += taken;
    }
}

/// A review reduced to its word tokens.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenizedReview {
    pub id: String,
    pub tokens: Vec<String>,
    pub label: Option<Label>,
}

impl TokenizedReview {
    pub fn new(id: impl Into<String>, tokens: Vec<String>, label: Option<Label>) -> Self {
        TokenizedReview {
            id: id.into(),
            tokens,
            label,
        }
    }

    /// Convenience constructor from whitespace-separated tokens.
    pub fn from_tokens(id: &str, tokens: &str, label: Option<Label>) -> Self {
        Self::new(id, tokens.split_whitespace().map(str::to_string).collect(), label)
    }
}

/// Segments every review of a corpus whose text is already normalized.
pub fn segment_corpus(corpus: &Corpus, lexicon: &WordLexicon) -> Vec<TokenizedReview> {
    corpus
        .iter()
        .map(|r| TokenizedReview::new(r.id.clone(), segment(&r.text, lexicon), r.label))
        .collect()
}
