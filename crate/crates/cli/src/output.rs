use std::fmt::Display;
use std::io::{self, Write};
use std::path::Path;

use gfstream::gf2poly::PolyError;
use gfstream::sketch::SketchError;
use gfstream::stream::coding::CodingError;
use gfstream::tally::TallyError;
use gfstream::{FieldError, StreamError};
use tempfile::NamedTempFile;

pub const EXIT_REJECT: u8 = 1;
pub const EXIT_IO: u8 = 2;
pub const EXIT_PRECONDITION: u8 = 3;
pub const EXIT_BUDGET: u8 = 4;
pub const EXIT_BOUND: u8 = 5;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn precondition(message: impl Display) -> Self {
        Self {
            code: EXIT_PRECONDITION,
            message: message.to_string(),
        }
    }

    pub fn io(context: impl Display, err: io::Error) -> Self {
        Self {
            code: EXIT_IO,
            message: format!("{context}: {err}"),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Self {
            code: EXIT_IO,
            message: e.to_string(),
        }
    }
}

impl From<SketchError> for Failure {
    fn from(e: SketchError) -> Self {
        let code = match e {
            SketchError::BudgetExceeded { .. } => EXIT_BUDGET,
            SketchError::Io(_) => EXIT_IO,
            _ => EXIT_PRECONDITION,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

macro_rules! precondition_from {
    ($($t:ty),*) => {
        $(impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                Failure::precondition(e)
            }
        })*
    };
}

precondition_from!(StreamError, FieldError, PolyError, CodingError, TallyError, serde_json::Error);

/// Writes `bytes` to `path` through a temporary file in the same directory,
/// so readers never see a partial file. Without a path, writes to stdout.
pub fn emit(path: Option<&Path>, bytes: &[u8]) -> Result<(), Failure> {
    let Some(path) = path else {
        let mut out = io::stdout().lock();
        out.write_all(bytes)?;
        return Ok(out.flush()?);
    };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let ctx = || path.display().to_string();
    let mut tmp = NamedTempFile::new_in(dir).map_err(|e| Failure::io(ctx(), e))?;
    tmp.write_all(bytes).map_err(|e| Failure::io(ctx(), e))?;
    tmp.as_file().sync_all().map_err(|e| Failure::io(ctx(), e))?;
    tmp.persist(path).map_err(|e| Failure::io(ctx(), e.error))?;
    Ok(())
}

pub fn to_json<T: serde::Serialize>(value: &T) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s.into_bytes()
}

/// The given seed, or a fresh one announced on stderr.
pub fn resolve_seed(seed: Option<u64>, what: &str) -> u64 {
    seed.unwrap_or_else(|| {
        let s = rand::random::<u64>();
        eprintln!("gfstream: generated {what} seed {s}");
        s
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn emit_replaces_the_target_whole() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("report.json");
        std::fs::write(&path, "old contents that are longer").unwrap();
        emit(Some(&path), b"new").unwrap();
        assert_eq!(std::fs::read(&path).unwrap(), b"new");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
        let missing = dir.path().join("no/such/dir/x");
        assert_eq!(emit(Some(&missing), b"x").unwrap_err().code, EXIT_IO);
    }

    #[test]
    fn error_classes() {
        let budget = SketchError::BudgetExceeded { needed: 10, budget: 1 };
        assert_eq!(Failure::from(budget).code, EXIT_BUDGET);
        assert_eq!(Failure::from(StreamError::ZeroLength).code, EXIT_PRECONDITION);
        assert_eq!(Failure::from(io::Error::other("x")).code, EXIT_IO);
    }
}
