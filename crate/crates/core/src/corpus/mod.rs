//! Review records, the TSV corpus format and train/test splitting.
//!
//! A corpus file holds one review per line as `<id>\t<label>\t<text>` where
//! the label is `spam`, `non_spam` or `?` (unlabeled). Lines starting with `#`
//! and blank lines are ignored. Inside `text`, tab, newline, carriage return
//! and backslash are written as the two-character escapes `\t`, `\n`, `\r`
//! and `\\`.

pub mod synthetic;

use std::collections::HashSet;
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::text::{content_lines, read_utf8};

pub use synthetic::{generate_synthetic, SyntheticSpec};

/// Binary review label. `Spam` is the positive class everywhere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Spam,
    NonSpam,
}

impl Label {
    pub const ALL: [Label; 2] = [Label::Spam, Label::NonSpam];

    pub fn as_str(self) -> &'static str {
        match self {
            Label::Spam => "spam",
            Label::NonSpam => "non_spam",
        }
    }

    pub fn is_spam(self) -> bool {
        self == Label::Spam
    }

    pub fn opposite(self) -> Label {
        match self {
            Label::Spam => Label::NonSpam,
            Label::NonSpam => Label::Spam,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Label {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "spam" => Ok(Label::Spam),
            "non_spam" => Ok(Label::NonSpam),
            other => Err(other.to_string()),
        }
    }
}

/// One product review.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Review {
    pub id: String,
    pub text: String,
    pub label: Option<Label>,
}

impl Review {
    pub fn new(id: impl Into<String>, text: impl Into<String>, label: Option<Label>) -> Self {
        Review {
            id: id.into(),
            text: text.into(),
            label,
        }
    }
}

/// An ordered collection of reviews with unique ids.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Corpus {
    reviews: Vec<Review>,
}

fn check_id(id: &str) -> std::result::Result<(), String> {
    if id.is_empty() {
        return Err("review id must not be empty".into());
    }
    if id.starts_with('#') {
        return Err(format!("review id `{id}` must not start with '#'"));
    }
    if id.contains(['\t', '\n', '\r']) {
        return Err(format!("review id {id:?} contains a tab or line break"));
    }
    Ok(())
}

impl Corpus {
    /// Builds a corpus, checking that ids are valid and unique.
    pub fn new(reviews: Vec<Review>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(reviews.len());
        for (i, review) in reviews.iter().enumerate() {
            check_id(&review.id).map_err(Error::InvalidArgument)?;
            if !seen.insert(review.id.as_str()) {
                return Err(Error::DuplicateId {
                    line: i + 1,
                    id: review.id.clone(),
                });
            }
        }
        Ok(Corpus { reviews })
    }

    pub fn reviews(&self) -> &[Review] {
        &self.reviews
    }

    pub fn into_reviews(self) -> Vec<Review> {
        self.reviews
    }

    pub fn len(&self) -> usize {
        self.reviews.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reviews.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Review> {
        self.reviews.iter()
    }

    /// Number of reviews carrying `label`.
    pub fn count(&self, label: Label) -> usize {
        self.reviews
            .iter()
            .filter(|r| r.label == Some(label))
            .count()
    }

    pub fn unlabeled_count(&self) -> usize {
        self.reviews.iter().filter(|r| r.label.is_none()).count()
    }

    /// Fails on the first review without a label.
    pub fn require_labeled(&self) -> Result<()> {
        match self.reviews.iter().find(|r| r.label.is_none()) {
            Some(r) => Err(Error::Unlabeled(r.id.clone())),
            None => Ok(()),
        }
    }

    pub fn parse<R: Read>(input: R) -> Result<Self> {
        let text = read_utf8(input)?;
        Self::parse_str(&text)
    }

    pub fn parse_str(text: &str) -> Result<Self> {
        let mut reviews = Vec::new();
        let mut seen = HashSet::new();
        for (line_no, line) in content_lines(text) {
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 3 {
                return Err(Error::parse(
                    line_no,
                    format!("expected 3 tab-separated fields, found {}", fields.len()),
                ));
            }
            let id = fields[0];
            check_id(id).map_err(|m| Error::parse(line_no, m))?;
            let label = match fields[1] {
                "?" => None,
                token => Some(token.parse::<Label>().map_err(|token| Error::UnknownLabel {
                    line: line_no,
                    token,
                })?),
            };
            if !seen.insert(id.to_string()) {
                return Err(Error::DuplicateId {
                    line: line_no,
                    id: id.to_string(),
                });
            }
            let text = unescape(fields[2]).map_err(|m| Error::parse(line_no, m))?;
            reviews.push(Review {
                id: id.to_string(),
                text,
                label,
            });
        }
        Ok(Corpus { reviews })
    }

    pub fn write_to<W: Write>(&self, mut out: W) -> Result<()> {
        out.write_all(self.to_tsv().as_bytes())?;
        Ok(())
    }

    /// Serializes to the corpus file format, without comment lines.
    pub fn to_tsv(&self) -> String {
        let mut s = String::new();
        for r in &self.reviews {
            s.push_str(&r.id);
            s.push('\t');
            s.push_str(r.label.map_or("?", Label::as_str));
            s.push('\t');
            escape_into(&r.text, &mut s);
            s.push('\n');
        }
        s
    }
}

impl<'a> IntoIterator for &'a Corpus {
    type Item = &'a Review;
    type IntoIter = std::slice::Iter<'a, Review>;

    fn into_iter(self) -> Self::IntoIter {
        self.reviews.iter()
    }
}

fn escape_into(text: &str, out: &mut String) {
    for c in text.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\t' => out.push_str("\\t"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
}

fn unescape(field: &str) -> std::result::Result<String, String> {
    let mut out = String::with_capacity(field.len());
    let mut chars = field.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next() {
            Some('\\') => out.push('\\'),
            Some('t') => out.push('\t'),
            Some('n') => out.push('\n'),
            Some('r') => out.push('\r'),
            Some(other) => return Err(format!("unknown escape sequence `\\{other}`")),
            None => return Err("dangling backslash at end of text".into()),
        }
    }
    Ok(out)
}

/// Number of reviews of one class that go to the training part: the
/// per-class count times `train_fraction`, rounded half up.
pub fn train_count(class_count: usize, train_fraction: f64) -> usize {
    ((class_count as f64 * train_fraction) + 0.5).floor() as usize
}

/// Splits a fully labeled corpus into `(train, test)` class by class.
///
/// Each class's reviews are shuffled with a ChaCha8 generator seeded from
/// `seed` (Spam first, then NonSpam, sharing one generator) and the first
/// [`train_count`] of them go to training. Both parts keep file order.
pub fn stratified_split(corpus: &Corpus, train_fraction: f64, seed: u64) -> Result<(Corpus, Corpus)> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "train fraction must lie in (0, 1), got {train_fraction}"
        )));
    }
    corpus.require_labeled()?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut in_train = vec![false; corpus.len()];
    for label in Label::ALL {
        let mut idx: Vec<usize> = corpus
            .reviews
            .iter()
            .enumerate()
            .filter(|(_, r)| r.label == Some(label))
            .map(|(i, _)| i)
            .collect();
        idx.shuffle(&mut rng);
        let n_train = train_count(idx.len(), train_fraction);
        for &i in &idx[..n_train] {
            in_train[i] = true;
        }
    }

    let (mut train, mut test) = (Vec::new(), Vec::new());
    for (review, to_train) in corpus.reviews.iter().zip(in_train) {
        if to_train {
            train.push(review.clone());
        } else {
            test.push(review.clone());
        }
    }
    Ok((Corpus { reviews: train }, Corpus { reviews: test }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_single_record() {
        let c = Corpus::parse_str("r1\tspam\tkhi nào bán vậy").unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.reviews()[0], Review::new("r1", "khi nào bán vậy", Some(Label::Spam)));
    }

    #[test]
    fn duplicate_id_reports_second_line() {
        let err = Corpus::parse_str("r1\tspam\ta\nr1\tnon_spam\tb").unwrap_err();
        assert!(matches!(err, Error::DuplicateId { line: 2, ref id } if id == "r1"), "{err}");
    }

    #[test]
    fn question_mark_is_unlabeled() {
        let c = Corpus::parse_str("r1\t?\tmáy đẹp").unwrap();
        assert_eq!(c.reviews()[0].label, None);
        assert_eq!(c.unlabeled_count(), 1);
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(matches!(
            Corpus::parse_str("# header\nr1\tspam").unwrap_err(),
            Error::Parse { line: 2, .. }
        ));
        assert!(matches!(
            Corpus::parse_str("r1\tham\ttext").unwrap_err(),
            Error::UnknownLabel { line: 1, .. }
        ));
        assert!(matches!(
            Corpus::parse_str("r1\tspam\ta\tb").unwrap_err(),
            Error::Parse { line: 1, .. }
        ));
        assert!(Corpus::parse_str("r1\tspam\tbad \\q escape").is_err());
    }

    #[test]
    fn empty_text_is_legal() {
        let c = Corpus::parse_str("r1\tnon_spam\t\n").unwrap();
        assert_eq!(c.reviews()[0].text, "");
        assert_eq!(Corpus::parse_str(&c.to_tsv()).unwrap(), c);
    }

    #[test]
    fn escapes_control_characters() {
        let c = Corpus::new(vec![Review::new("a", "x\ty\nz\\w\r", None)]).unwrap();
        let tsv = c.to_tsv();
        assert_eq!(tsv, "a\t?\tx\\ty\\nz\\\\w\\r\n");
        assert_eq!(Corpus::parse_str(&tsv).unwrap(), c);
    }

    #[test]
    fn new_rejects_invalid_ids() {
        assert!(Corpus::new(vec![Review::new("", "t", None)]).is_err());
        assert!(Corpus::new(vec![Review::new("#x", "t", None)]).is_err());
        assert!(Corpus::new(vec![Review::new("a", "t", None), Review::new("a", "u", None)]).is_err());
    }

    fn balanced(n: usize) -> Corpus {
        let reviews = (0..2 * n)
            .map(|i| {
                let label = if i % 2 == 0 { Label::Spam } else { Label::NonSpam };
                Review::new(format!("r{i}"), format!("text {i}"), Some(label))
            })
            .collect();
        Corpus::new(reviews).unwrap()
    }

    #[test]
    fn split_one_to_one() {
        let c = balanced(1000);
        let (train, test) = stratified_split(&c, 0.5, 1).unwrap();
        assert_eq!(train.count(Label::Spam), 500);
        assert_eq!(train.count(Label::NonSpam), 500);
        assert_eq!(test.count(Label::Spam), 500);
        assert_eq!(test.count(Label::NonSpam), 500);
    }

    #[test]
    fn split_is_deterministic() {
        let c = balanced(50);
        assert_eq!(stratified_split(&c, 0.3, 9).unwrap(), stratified_split(&c, 0.3, 9).unwrap());
        assert_ne!(stratified_split(&c, 0.3, 9).unwrap(), stratified_split(&c, 0.3, 10).unwrap());
    }

    #[test]
    fn split_partitions_small_corpus() {
        let c = balanced(3);
        let all: HashSet<&str> = c.iter().map(|r| r.id.as_str()).collect();
        for seed in 0..20 {
            let (train, test) = stratified_split(&c, 0.5, seed).unwrap();
            let tr: HashSet<&str> = train.iter().map(|r| r.id.as_str()).collect();
            let te: HashSet<&str> = test.iter().map(|r| r.id.as_str()).collect();
            assert!(tr.is_disjoint(&te));
            assert_eq!(&tr | &te, all);
            // round(1.5) = 2 per class
            assert_eq!(train.count(Label::Spam), 2);
            assert_eq!(train.count(Label::NonSpam), 2);
        }
    }

    #[test]
    fn split_rejects_unlabeled_and_bad_fraction() {
        let c = Corpus::parse_str("a\tspam\tx\nb\t?\ty").unwrap();
        assert!(matches!(stratified_split(&c, 0.5, 0), Err(Error::Unlabeled(_))));
        let c = balanced(2);
        assert!(stratified_split(&c, 0.0, 0).is_err());
        assert!(stratified_split(&c, 1.0, 0).is_err());
    }

    #[test]
    fn train_count_rounds_half_up() {
        assert_eq!(train_count(3, 0.5), 2);
        assert_eq!(train_count(1, 0.5), 1);
        assert_eq!(train_count(10, 0.34), 3);
        assert_eq!(train_count(0, 0.5), 0);
    }
}
