use crate::corpus::Label;
use crate::error::{Error, Result};
use crate::segmenter::TokenizedReview;

/// Document counts for one term against one class `c`.
///
/// `a`: in `c`, containing the term; `b`: not in `c`, containing it;
/// `c`: in `c`, not containing it; `d`: neither.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ContingencyCounts {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub d: u64,
}

impl ContingencyCounts {
    pub const fn new(a: u64, b: u64, c: u64, d: u64) -> Self {
        ContingencyCounts { a, b, c, d }
    }

    pub fn total(&self) -> u64 {
        self.a + self.b + self.c + self.d
    }

    /// The same term counted against the other class.
    pub fn complement(&self) -> Self {
        ContingencyCounts::new(self.b, self.a, self.d, self.c)
    }

    /// Reviews containing the term.
    pub fn doc_freq(&self) -> u64 {
        self.a + self.b
    }
}

/// Counts presence of `term` in labeled reviews; each review counts once no
/// matter how often the term occurs in it.
pub fn count_contingency(term: &str, docs: &[TokenizedReview], positive: Label) -> Result<ContingencyCounts> {
    let mut cells = ContingencyCounts::new(0, 0, 0, 0);
    for doc in docs {
        let label = doc.label.ok_or_else(|| Error::Unlabeled(doc.id.clone()))?;
        let present = doc.tokens.iter().any(|t| t == term);
        match (label == positive, present) {
            (true, true) => cells.a += 1,
            (false, true) => cells.b += 1,
            (true, false) => cells.c += 1,
            (false, false) => cells.d += 1,
        }
    }
    Ok(cells)
}

/// `N (AD - BC)^2 / ((A+C)(A+B)(D+C)(D+B))`, or 0 when a marginal is zero.
pub fn chi_square(cells: &ContingencyCounts) -> f64 {
    let (a, b, c, d) = (cells.a as f64, cells.b as f64, cells.c as f64, cells.d as f64);
    let denom = (a + c) * (a + b) * (d + c) * (d + b);
    if denom == 0.0 {
        return 0.0;
    }
    let diff = a * d - b * c;
    (a + b + c + d) * diff * diff / denom
}

/// `AD / BC`. A zero `B` or `C` is replaced by 0.5 before dividing; non-zero
/// cells are used as is.
pub fn odds_ratio(cells: &ContingencyCounts) -> f64 {
    let fix = |x: u64| if x == 0 { 0.5 } else { x as f64 };
    (cells.a as f64 * cells.d as f64) / (fix(cells.b) * fix(cells.c))
}
