use std::fmt;
use std::path::PathBuf;

/// A problem with a document or report, located by a dotted path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub path: String,
    pub message: String,
}

impl Violation {
    pub fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            path: path.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violations(pub Vec<Violation>);

impl fmt::Display for Violations {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl std::error::Error for Violations {}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("cannot read {}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("not valid JSON for this format: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Invalid(#[from] Violations),
    #[error("unknown fixture '{0}' (expected a2 or dual-numbers)")]
    UnknownFixture(String),
    #[error("task {index} ({task}) failed: {source}")]
    Task {
        index: usize,
        task: &'static str,
        source: commacat_core::Error,
    },
    #[error("no task named '{0}' in the document")]
    NoSuchTask(String),
}

impl Error {
    /// 2 for anything wrong with the input, 3 when a task could not finish.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Task { .. } | Error::NoSuchTask(_) => 3,
            _ => 2,
        }
    }
}
