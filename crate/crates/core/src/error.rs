//! Error types shared across the crate.
//!
//! Recoverable failures (bad configuration, unusable graphs, degenerate fit
//! inputs) are reported through these enums. Violations of documented numeric
//! preconditions (non-finite inputs, dimension mismatches) panic instead; they
//! indicate a caller bug, not a runtime condition to recover from.

use thiserror::Error;

/// Invalid configuration, reported with the offending field.
#[derive(Debug, Clone, Error, PartialEq)]
#[error("config field `{field}`: {message}")]
pub struct ConfigError {
    pub field: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            field: field.into(),
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum GraphError {
    #[error("graph is disconnected; the second-smallest Laplacian eigenvalue is 0")]
    Disconnected,
    #[error("graph has {0} node(s); at least 2 are required")]
    TooFewNodes(usize),
}

/// Failures of the log-log slope fit.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum FitError {
    #[error("need at least {required} points in [{k_min}, {k_max}], found {found}")]
    TooFewPoints {
        required: usize,
        found: usize,
        k_min: u64,
        k_max: u64,
    },
    #[error("series value {value} at k={k} is not positive; cannot fit in log space")]
    NonPositiveValue { k: u64, value: f64 },
}

/// Lookup of a step that was never recorded as a checkpoint.
#[derive(Debug, Clone, Error, PartialEq)]
#[error("step {0} is not a recorded checkpoint")]
pub struct UnrecordedCheckpoint(pub u64);
