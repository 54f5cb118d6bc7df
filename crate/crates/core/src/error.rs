//! Crate-wide error type.

use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by graph construction, simulation, and the harness.
#[derive(Debug, Error)]
pub enum Error {
    /// A size or count argument was out of range (e.g. zero agents).
    #[error("invalid size: {0}")]
    InvalidSize(String),

    /// A named parameter failed validation.
    #[error("invalid parameter `{field}`: {message}")]
    InvalidParameter { field: String, message: String },

    /// The random-graph generator exhausted its retry budget without
    /// producing a connected simple graph.
    #[error(
        "graph generation failed: no connected draw in {attempts} attempts \
         (agents={agents}, edge probability={edge_prob})"
    )]
    GenerationFailure {
        attempts: usize,
        agents: usize,
        edge_prob: f64,
    },

    /// The graph is not connected, so its diameter is infinite.
    #[error("graph is disconnected: diameter is infinite")]
    Disconnected,

    /// A directed link must join two distinct agents.
    #[error("invalid link: sender and receiver are both agent {0}")]
    InvalidLink(usize),

    /// Vector dimensions do not match the expected agent count.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    /// A per-round operation was invoked out of protocol order.
    #[error("protocol order violated: {0}")]
    ProtocolOrder(String),

    /// An edge-list or config file could not be parsed.
    #[error("malformed file `{path}`: {message}")]
    MalformedFile { path: String, message: String },

    /// Unknown figure preset name.
    #[error("unknown preset `{0}` (expected one of fig3, fig4, fig5, fig6, fig7)")]
    UnknownPreset(String),

    /// I/O failure, with the offending path echoed.
    #[error("i/o error on `{path}`: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn parameter(field: &str, message: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field: field.to_string(),
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
