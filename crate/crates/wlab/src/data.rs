//! The shipped knowledge base and diagram transcription.

use std::fs;
use std::path::Path;

use thiserror::Error;
use wlab_core::lattice::{Figure, KnowledgeBase};

pub const SHIPPED_KB: &str = include_str!("../../../facts/paper.kb");
pub const FIGURE2: &str = include_str!("../../../facts/figure2.fig");

pub const DEFAULT_KB_PATH: &str = "facts/paper.kb";
pub const DEFAULT_FIGURE_PATH: &str = "facts/figure2.fig";

#[derive(Debug, Error)]
pub enum DataError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {msg}")]
    Kb { path: String, msg: String },
}

/// Reads `path`, or the default file if it exists, or the embedded copy.
fn read_or(path: Option<&Path>, default: &str, embedded: &str) -> Result<(String, String), DataError> {
    let p = match path {
        Some(p) => p,
        None if Path::new(default).is_file() => Path::new(default),
        None => return Ok(("<built-in>".into(), embedded.to_string())),
    };
    let shown = p.display().to_string();
    fs::read_to_string(p)
        .map(|t| (shown.clone(), t))
        .map_err(|source| DataError::Io { path: shown, source })
}

pub fn load_kb(path: Option<&Path>) -> Result<KnowledgeBase, DataError> {
    let (shown, text) = read_or(path, DEFAULT_KB_PATH, SHIPPED_KB)?;
    KnowledgeBase::parse(&text).map_err(|e| DataError::Kb { path: shown, msg: e.to_string() })
}

pub fn load_figure(path: Option<&Path>) -> Result<Figure, DataError> {
    let (shown, text) = read_or(path, DEFAULT_FIGURE_PATH, FIGURE2)?;
    Figure::parse(&text).map_err(|e| DataError::Kb { path: shown, msg: e.to_string() })
}

pub fn shipped_kb() -> KnowledgeBase {
    KnowledgeBase::parse(SHIPPED_KB).expect("shipped knowledge base parses")
}

pub fn shipped_figure() -> Figure {
    Figure::parse(FIGURE2).expect("shipped figure parses")
}
