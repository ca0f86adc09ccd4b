//! Text formats for demonstrations, configuration, words, sub-goals,
//! automata, plans and execution traces.

mod config;
mod demos;
mod model;
mod subgoals;
mod trace;
mod words;

use std::fs;
use std::path::{Path, PathBuf};

pub use config::{DbscanSection, RadiusSetting, RunConfig};
pub use demos::{format_demos, load_demos, parse_demos};
pub use model::{format_model, load_model, parse_model, Model};
pub use subgoals::{format_subgoals, parse_subgoals};
pub use trace::{format_plan, format_trace};
pub use words::{format_words, parse_words};

/// A problem with an input or output file.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    /// `line` is 1-based.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{0}")]
    Toml(#[from] toml::de::Error),
    #[error("{0}")]
    Invalid(String),
    #[error("{}: {source}", path.display())]
    InFile { path: PathBuf, source: Box<Error> },
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse { line, message: message.into() }
    }

    pub(crate) fn invalid(message: impl Into<String>) -> Self {
        Error::Invalid(message.into())
    }

    fn in_file(self, path: &Path) -> Self {
        match self {
            e @ (Error::Io { .. } | Error::InFile { .. }) => e,
            e => Error::InFile { path: path.to_path_buf(), source: Box::new(e) },
        }
    }
}

pub fn read_text(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

pub fn write_text(path: &Path, text: &str) -> Result<(), Error> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|source| Error::Io { path: dir.to_path_buf(), source })?;
    }
    fs::write(path, text).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

/// Reads `path` and parses it, attaching the path to any error.
pub(crate) fn load_with<T>(path: &Path, parse: impl FnOnce(&str) -> Result<T, Error>) -> Result<T, Error> {
    let text = read_text(path)?;
    parse(&text).map_err(|e| e.in_file(path))
}
