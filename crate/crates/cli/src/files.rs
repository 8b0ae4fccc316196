//! Data-file lookup and atomic output.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use tempfile::NamedTempFile;

pub const DATA_DIR_ENV: &str = "SPAMKIT_DATA_DIR";

/// Resolves an optional data file: the explicit path wins, then
/// `$SPAMKIT_DATA_DIR/<default_name>` if it exists, else `None` (use the
/// embedded default).
pub fn resolve(explicit: Option<&Path>, default_name: &str) -> Option<PathBuf> {
    if let Some(p) = explicit {
        return Some(p.to_path_buf());
    }
    let dir = std::env::var_os(DATA_DIR_ENV)?;
    let candidate = Path::new(&dir).join(default_name);
    candidate.is_file().then_some(candidate)
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

/// Loads `path` with `parse`, attaching the file name to any error.
pub fn load<T, F>(path: &Path, parse: F) -> Result<T>
where
    F: FnOnce(&str) -> spamkit_core::Result<T>,
{
    let text = read_text(path)?;
    parse(&text).with_context(|| format!("{}", path.display()))
}

/// Writes `contents` next to `path` and renames it into place, so a failed
/// run never leaves a partial file behind.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = NamedTempFile::new_in(dir).with_context(|| format!("creating temporary file in {}", dir.display()))?;
    tmp.write_all(contents.as_bytes())
        .and_then(|_| tmp.as_file().sync_all())
        .with_context(|| format!("writing {}", path.display()))?;
    tmp.persist(path).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}
