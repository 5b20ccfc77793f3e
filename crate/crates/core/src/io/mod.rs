//! Configuration files, dataset ingestion, CSV curve output and JSON
//! result documents.

pub mod config;
pub mod csv;
pub mod dataset;
pub mod document;

pub use self::config::{Config, GridOverrides};
pub use self::csv::{emit_curve, emit_table, Table};
pub use self::dataset::{load_dataset, parse_dataset, DatasetKind};
pub use self::document::ResultDocument;

use std::io::Write;
use std::path::Path;

use crate::error::Result;

/// Writes `bytes` to `path` through a temporary file in the same directory
/// followed by a rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
