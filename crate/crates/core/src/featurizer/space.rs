use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use super::contingency::{chi_square, odds_ratio, ContingencyCounts};
use super::lexicon::{check_disjoint, Lexicon};
use crate::corpus::Label;
use crate::error::{Error, Result};
use crate::segmenter::TokenizedReview;
use crate::text::{fmt_f64, parse_f64, parse_usize, LineReader};

const HEADER: &str = "spamkit-feature-space\t1";

/// Term scoring statistic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Selector {
    ChiSquare,
    OddsRatio,
}

impl Selector {
    pub fn as_str(self) -> &'static str {
        match self {
            Selector::ChiSquare => "chi2",
            Selector::OddsRatio => "oddsratio",
        }
    }

    pub fn score(self, cells: &ContingencyCounts) -> f64 {
        match self {
            Selector::ChiSquare => chi_square(cells),
            Selector::OddsRatio => odds_ratio(cells),
        }
    }
}

impl fmt::Display for Selector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Selector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "chi2" => Ok(Selector::ChiSquare),
            "oddsratio" => Ok(Selector::OddsRatio),
            other => Err(Error::InvalidArgument(format!(
                "unknown selector `{other}` (expected chi2 or oddsratio)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoredTerm {
    pub term: String,
    pub score: f64,
    /// Training reviews containing the term.
    pub doc_freq: u64,
}

/// Frozen vector geometry: the selected terms followed by the opinion and
/// question lexicon words.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureSpace {
    selected_terms: Vec<ScoredTerm>,
    opinion_words: Vec<String>,
    question_words: Vec<String>,
    n_train_docs: u64,
    selector: Selector,
    k: usize,
    term_index: HashMap<String, usize>,
    opinion_index: HashMap<String, usize>,
    question_index: HashMap<String, usize>,
}

fn by_rank(x: &ScoredTerm, y: &ScoredTerm) -> std::cmp::Ordering {
    y.score.total_cmp(&x.score).then_with(|| x.term.cmp(&y.term))
}

fn index_of(words: &[String]) -> HashMap<String, usize> {
    words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect()
}

impl FeatureSpace {
    /// Assembles a space from already-scored terms, checking its invariants.
    pub fn from_parts(
        selected_terms: Vec<ScoredTerm>,
        opinion_words: Vec<String>,
        question_words: Vec<String>,
        n_train_docs: u64,
        selector: Selector,
        k: usize,
    ) -> Result<Self> {
        let invalid = |m: String| Err(Error::InvalidArgument(m));
        if k == 0 {
            return invalid("k must be at least 1".into());
        }
        if selected_terms.len() > k {
            return invalid(format!("{} terms selected but k = {k}", selected_terms.len()));
        }
        for t in &selected_terms {
            if t.term.is_empty() || t.term.contains(char::is_whitespace) {
                return invalid(format!("invalid term {:?}", t.term));
            }
            if !(t.score.is_finite() && t.score >= 0.0) {
                return invalid(format!("term `{}` has invalid score {}", t.term, t.score));
            }
            if t.doc_freq == 0 || t.doc_freq > n_train_docs {
                return invalid(format!(
                    "term `{}` has doc_freq {} outside 1..={n_train_docs}",
                    t.term, t.doc_freq
                ));
            }
        }
        if let Some(w) = selected_terms.windows(2).find(|w| by_rank(&w[0], &w[1]).is_ge()) {
            return invalid(format!("terms `{}` and `{}` are out of rank order", w[0].term, w[1].term));
        }
        for words in [&opinion_words, &question_words] {
            if let Some(w) = words.iter().find(|w| w.is_empty() || w.contains(char::is_whitespace)) {
                return invalid(format!("invalid lexicon word {w:?}"));
            }
            if words.iter().collect::<HashSet<_>>().len() != words.len() {
                return invalid("duplicate lexicon word".into());
            }
        }
        let opinion_set: HashSet<&String> = opinion_words.iter().collect();
        if let Some(w) = question_words.iter().find(|w| opinion_set.contains(w)) {
            return invalid(format!("`{w}` is in both lexicons"));
        }

        Ok(FeatureSpace {
            term_index: selected_terms.iter().enumerate().map(|(i, t)| (t.term.clone(), i)).collect(),
            opinion_index: index_of(&opinion_words),
            question_index: index_of(&question_words),
            selected_terms,
            opinion_words,
            question_words,
            n_train_docs,
            selector,
            k,
        })
    }

    pub fn selected_terms(&self) -> &[ScoredTerm] {
        &self.selected_terms
    }

    pub fn opinion_words(&self) -> &[String] {
        &self.opinion_words
    }

    pub fn question_words(&self) -> &[String] {
        &self.question_words
    }

    pub fn n_train_docs(&self) -> u64 {
        self.n_train_docs
    }

    pub fn selector(&self) -> Selector {
        self.selector
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn has_lexicon_features(&self) -> bool {
        !self.opinion_words.is_empty() || !self.question_words.is_empty()
    }

    /// Total vector length: selected terms plus both lexicon blocks.
    pub fn dimension(&self) -> usize {
        self.selected_terms.len() + self.opinion_words.len() + self.question_words.len()
    }

    pub fn term_position(&self, term: &str) -> Option<usize> {
        self.term_index.get(term).copied()
    }

    pub(crate) fn opinion_position(&self, word: &str) -> Option<usize> {
        self.opinion_index.get(word).copied()
    }

    pub(crate) fn question_position(&self, word: &str) -> Option<usize> {
        self.question_index.get(word).copied()
    }

    /// Human-readable name of every vector coordinate.
    pub fn feature_names(&self) -> Vec<String> {
        let mut names: Vec<String> = self.selected_terms.iter().map(|t| t.term.clone()).collect();
        names.extend(self.opinion_words.iter().map(|w| format!("opinion:{w}")));
        names.extend(self.question_words.iter().map(|w| format!("question:{w}")));
        names
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        self.write_into(&mut s);
        s
    }

    pub(crate) fn write_into(&self, s: &mut String) {
        use std::fmt::Write;
        let _ = writeln!(s, "{HEADER}");
        let _ = writeln!(s, "selector\t{}", self.selector);
        let _ = writeln!(s, "k\t{}", self.k);
        let _ = writeln!(s, "n_train_docs\t{}", self.n_train_docs);
        let _ = writeln!(s, "terms\t{}", self.selected_terms.len());
        for t in &self.selected_terms {
            let _ = writeln!(s, "{}\t{}\t{}", t.term, fmt_f64(t.score), t.doc_freq);
        }
        for (key, words) in [("opinion", &self.opinion_words), ("question", &self.question_words)] {
            let _ = writeln!(s, "{key}\t{}", words.len());
            for w in words {
                let _ = writeln!(s, "{w}");
            }
        }
    }

    pub fn parse_str(text: &str) -> Result<Self> {
        let mut lines = LineReader::new(text);
        let space = Self::read_from(&mut lines)?;
        lines.finish()?;
        Ok(space)
    }

    pub(crate) fn read_from(lines: &mut LineReader<'_>) -> Result<Self> {
        lines.expect(HEADER)?;
        let (n, v) = lines.field("selector")?;
        let selector: Selector = v.parse().map_err(|e: Error| Error::parse(n, e.to_string()))?;
        let (n, v) = lines.field("k")?;
        let k = parse_usize(n, v)?;
        let (n, v) = lines.field("n_train_docs")?;
        let n_train_docs = parse_usize(n, v)? as u64;
        let (n, v) = lines.field("terms")?;
        let count = parse_usize(n, v)?;
        let mut terms = Vec::with_capacity(count.min(1 << 20));
        for _ in 0..count {
            let (n, line) = lines.next_line()?;
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 3 {
                return Err(Error::parse(n, "expected `term<TAB>score<TAB>doc_freq`"));
            }
            terms.push(ScoredTerm {
                term: fields[0].to_string(),
                score: parse_f64(n, fields[1])?,
                doc_freq: parse_usize(n, fields[2])? as u64,
            });
        }
        let mut read_words = |key: &str| -> Result<Vec<String>> {
            let (n, v) = lines.field(key)?;
            let count = parse_usize(n, v)?;
            (0..count)
                .map(|_| lines.next_line().map(|(_, w)| w.to_string()))
                .collect()
        };
        let opinion = read_words("opinion")?;
        let question = read_words("question")?;
        Self::from_parts(terms, opinion, question, n_train_docs, selector, k)
    }
}

/// Scores every distinct training token against the Spam class and keeps the
/// `k` best (descending score, ties by ascending term). Lexicon words are
/// appended in ascending order; pass `None` to leave a block out.
pub fn build_feature_space(
    train: &[TokenizedReview],
    selector: Selector,
    k: usize,
    opinion: Option<&Lexicon>,
    question: Option<&Lexicon>,
) -> Result<FeatureSpace> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    if train.is_empty() {
        return Err(Error::InvalidArgument("training set is empty".into()));
    }
    if let (Some(o), Some(q)) = (opinion, question) {
        check_disjoint(o, q)?;
    }

    let mut n_spam = 0u64;
    // term -> (spam docs containing it, non-spam docs containing it)
    let mut presence: HashMap<&str, (u64, u64)> = HashMap::new();
    for doc in train {
        let label = doc.label.ok_or_else(|| Error::Unlabeled(doc.id.clone()))?;
        if label == Label::Spam {
            n_spam += 1;
        }
        let unique: HashSet<&str> = doc.tokens.iter().map(String::as_str).collect();
        for term in unique {
            let entry = presence.entry(term).or_default();
            match label {
                Label::Spam => entry.0 += 1,
                Label::NonSpam => entry.1 += 1,
            }
        }
    }
    if presence.is_empty() {
        return Err(Error::InvalidArgument("training vocabulary is empty".into()));
    }
    let n = train.len() as u64;
    let n_non_spam = n - n_spam;

    let mut scored: Vec<ScoredTerm> = presence
        .into_iter()
        .map(|(term, (a, b))| {
            let cells = ContingencyCounts::new(a, b, n_spam - a, n_non_spam - b);
            ScoredTerm {
                term: term.to_string(),
                score: selector.score(&cells),
                doc_freq: a + b,
            }
        })
        .collect();
    scored.sort_by(by_rank);
    scored.truncate(k);

    let words = |l: Option<&Lexicon>| l.map(|l| l.words().map(str::to_string).collect()).unwrap_or_default();
    FeatureSpace::from_parts(scored, words(opinion), words(question), n, selector, k)
}
