//! Small helpers shared by the line-oriented file formats.

use std::io::Read;

use crate::error::Result;

/// Reads a whole stream as UTF-8.
pub(crate) fn read_utf8<R: Read>(mut input: R) -> Result<String> {
    let mut buf = Vec::new();
    input.read_to_end(&mut buf)?;
    String::from_utf8(buf).map_err(|e| {
        let line = 1 + e.as_bytes()[..e.utf8_error().valid_up_to()]
            .iter()
            .filter(|&&b| b == b'\n')
            .count();
        crate::Error::parse(line, "input is not valid UTF-8")
    })
}

/// Yields `(1-based line number, line)` for every line that is neither blank
/// nor a `#` comment. A trailing `\r` is stripped.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.strip_suffix('\r').unwrap_or(line);
        if line.trim().is_empty() || line.starts_with('#') {
            None
        } else {
            Some((i + 1, line))
        }
    })
}

/// Shortest decimal rendering that parses back to the identical `f64`.
pub(crate) fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

pub(crate) fn parse_f64(line: usize, s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| crate::Error::parse(line, format!("invalid number `{s}`")))
}

pub(crate) fn parse_usize(line: usize, s: &str) -> Result<usize> {
    s.trim()
        .parse::<usize>()
        .map_err(|_| crate::Error::parse(line, format!("invalid integer `{s}`")))
}

/// Strict line reader for the versioned model and feature-space formats.
/// Nothing is skipped: every line must be consumed by the parser.
pub(crate) struct LineReader<'a> {
    lines: std::iter::Peekable<std::iter::Enumerate<std::str::Split<'a, char>>>,
}

impl<'a> LineReader<'a> {
    pub(crate) fn new(text: &'a str) -> Self {
        LineReader {
            lines: text.split('\n').enumerate().peekable(),
        }
    }

    pub(crate) fn next_line(&mut self) -> Result<(usize, &'a str)> {
        match self.lines.next() {
            Some((i, line)) => Ok((i + 1, line)),
            None => Err(crate::Error::Format("unexpected end of input".into())),
        }
    }

    /// Reads a `key\tvalue` line and returns the value.
    pub(crate) fn field(&mut self, key: &str) -> Result<(usize, &'a str)> {
        let (n, line) = self.next_line()?;
        match line.split_once('\t') {
            Some((k, v)) if k == key => Ok((n, v)),
            _ => Err(crate::Error::parse(n, format!("expected `{key}<TAB>...`, found {line:?}"))),
        }
    }

    pub(crate) fn expect(&mut self, exact: &str) -> Result<()> {
        let (n, line) = self.next_line()?;
        if line == exact {
            Ok(())
        } else {
            Err(crate::Error::parse(n, format!("expected {exact:?}, found {line:?}")))
        }
    }

    /// Succeeds if only a final empty line (from a trailing newline) remains.
    pub(crate) fn finish(mut self) -> Result<()> {
        match self.lines.next() {
            None => Ok(()),
            Some((_, "")) if self.lines.peek().is_none() => Ok(()),
            Some((i, line)) => Err(crate::Error::parse(i + 1, format!("unexpected trailing content {line:?}"))),
        }
    }
}
