//! Batch front end for renormlab: parameter search, per-parameter pipelines
//! and corpus surveys with CSV, JSON and SVG output.

pub mod corpus;
pub mod find;
pub mod pipeline;
pub mod plot;
pub mod survey;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use corpus::{parse_corpus, CorpusEntry, CorpusError};
pub use find::{find_param, FindError, FindKind};
pub use pipeline::{run_pipeline, PipelineReport};
pub use survey::{run_survey, SurveyOutput, SurveyRow, CSV_COLUMNS};

/// Environment override for the nest's `|I^m|` guard.
pub const PRECISION_GUARD_ENV: &str = "RENORMLAB_PRECISION_GUARD";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("I/O: {0}")]
    Io(#[from] std::io::Error),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Io(_) => 2,
            CliError::Invariant(_) => 3,
        }
    }
}

impl From<CorpusError> for CliError {
    fn from(e: CorpusError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<FindError> for CliError {
    fn from(e: FindError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.into())
    }
}

/// Everything that can change an output byte.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub eps: f64,
    pub kbar: f64,
    /// Julia grid side.
    pub grid: usize,
    pub max_iter: usize,
    /// Nest level budget.
    pub max_levels: usize,
    /// Tower depth.
    pub depth: usize,
    /// Deepest tower level that the verifiers visit.
    pub verify_levels: usize,
    /// Contraction samples per level.
    pub samples: usize,
    pub quad_points: usize,
    pub seed: u64,
    pub precision_guard: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            eps: renormlab::verify::DEFAULT_EPS,
            kbar: renormlab::verify::DEFAULT_KBAR,
            grid: 400,
            max_iter: 500,
            max_levels: renormlab::nest::NestOptions::default().max_levels,
            depth: 4,
            verify_levels: 3,
            samples: 100,
            quad_points: 10_000,
            seed: 0,
            precision_guard: renormlab::nest::NestOptions::default().precision_guard,
        }
    }
}

impl RunConfig {
    /// Reads [`PRECISION_GUARD_ENV`] if set.
    pub fn with_env(mut self) -> Result<Self, CliError> {
        if let Ok(v) = std::env::var(PRECISION_GUARD_ENV) {
            let g: f64 = v
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("{PRECISION_GUARD_ENV}={v:?} is not a number")))?;
            if g.is_nan() || g <= 0.0 {
                return Err(CliError::Usage(format!("{PRECISION_GUARD_ENV} must be positive")));
            }
            self.precision_guard = g;
        }
        Ok(self)
    }

    pub fn nest_options(&self) -> renormlab::nest::NestOptions {
        renormlab::nest::NestOptions {
            max_levels: self.max_levels,
            precision_guard: self.precision_guard,
            ..Default::default()
        }
    }
}
