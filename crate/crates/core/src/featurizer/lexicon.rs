use std::collections::BTreeSet;
use std::fmt;
use std::io::Read;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::normalizer::canonical;
use crate::text::{content_lines, read_utf8};

const OPINION: &str = include_str!("../../data/opinion_lexicon.txt");
const QUESTION: &str = include_str!("../../data/question_lexicon.txt");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LexiconKind {
    /// Evaluative words, more frequent in genuine reviews.
    Opinion,
    /// Interrogatives, more frequent in spam.
    Question,
}

impl LexiconKind {
    pub fn as_str(self) -> &'static str {
        match self {
            LexiconKind::Opinion => "opinion",
            LexiconKind::Question => "question",
        }
    }
}

impl fmt::Display for LexiconKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LexiconKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "opinion" => Ok(LexiconKind::Opinion),
            "question" => Ok(LexiconKind::Question),
            other => Err(Error::InvalidArgument(format!("unknown lexicon kind `{other}`"))),
        }
    }
}

/// A hand-curated word list. Words are canonical tokens, multi-syllable words
/// joined with `_` exactly as the segmenter emits them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lexicon {
    kind: LexiconKind,
    words: BTreeSet<String>,
}

impl Lexicon {
    pub fn new<I, S>(kind: LexiconKind, words: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let words: BTreeSet<String> = words
            .into_iter()
            .map(|w| canonical(w.as_ref()).split_whitespace().collect::<Vec<_>>().join("_"))
            .filter(|w| !w.is_empty())
            .collect();
        if words.is_empty() {
            return Err(Error::InvalidArgument(format!("{kind} lexicon is empty")));
        }
        Ok(Lexicon { kind, words })
    }

    /// The shipped list for `kind` (170 opinion words, 30 question words).
    pub fn builtin(kind: LexiconKind) -> Self {
        let text = match kind {
            LexiconKind::Opinion => OPINION,
            LexiconKind::Question => QUESTION,
        };
        Self::parse_str(kind, text).expect("shipped lexicon is valid")
    }

    pub fn load<R: Read>(kind: LexiconKind, input: R) -> Result<Self> {
        Self::parse_str(kind, &read_utf8(input)?)
    }

    /// One word per line; syllables may be separated by `_` or spaces.
    pub fn parse_str(kind: LexiconKind, text: &str) -> Result<Self> {
        Self::new(kind, content_lines(text).map(|(_, line)| line.trim()))
    }

    pub fn kind(&self) -> LexiconKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(word)
    }

    /// Words in ascending order.
    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.words.iter().map(String::as_str)
    }
}

/// Fails if a word appears in both lexicons.
pub fn check_disjoint(a: &Lexicon, b: &Lexicon) -> Result<()> {
    match a.words.intersection(&b.words).next() {
        Some(w) => Err(Error::InvalidArgument(format!(
            "`{w}` is in both the {} and {} lexicons",
            a.kind, b.kind
        ))),
        None => Ok(()),
    }
}
