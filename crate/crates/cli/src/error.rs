use std::path::PathBuf;

use thiserror::Error;

/// Problems with the suite configuration; the runner exits with status 2 on these.
#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("config parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("invalid config field `{field}`: {message}")]
    Invalid { field: String, message: String },
}
