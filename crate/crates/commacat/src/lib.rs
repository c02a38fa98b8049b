//! Document format, built-in fixtures, reports and certificate replay for
//! [`commacat_core`].

pub mod doc;
pub mod error;
pub mod fixture;
pub mod matrix;
pub mod report;
pub mod run;

use std::path::Path;

use commacat_core::Limits;

pub use doc::{Document, Resolved};
pub use error::{Error, Violation, Violations};
pub use report::{replay, ReplaySummary, Report};

pub fn read_document(path: &Path) -> Result<Document, Error> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(Document::parse(&text)?)
}

pub fn read_report(path: &Path) -> Result<Report, Error> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(serde_json::from_str(&text)?)
}

/// Validates a document and runs its tasks, optionally only those named.
pub fn run_document(doc: &Document, only: &[String], limits: Limits) -> Result<Report, Error> {
    let resolved = doc::validate(doc)?;
    run::run(&doc.tasks, &resolved, only, limits)
}
