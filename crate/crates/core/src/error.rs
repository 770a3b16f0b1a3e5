use std::path::PathBuf;

use thiserror::Error;

use crate::solver::PicardReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("triangle {triangle} is not counterclockwise (signed area {area:e})")]
    Orientation { triangle: usize, area: f64 },

    #[error("boundary edge {edge} ({a}, {b}) carries no tag")]
    UntaggedBoundary { edge: usize, a: usize, b: usize },

    #[error("edge {edge} ({a}, {b}) is nonconforming: {reason}")]
    Nonconforming {
        edge: usize,
        a: usize,
        b: usize,
        reason: String,
    },

    #[error("mesh structure error: {0}")]
    Structure(String),

    #[error("degenerate triangle {triangle} (area {area:e})")]
    Geometry { triangle: usize, area: f64 },

    #[error("point ({}, {}) is outside the domain of {what}", point[0], point[1])]
    Domain { what: &'static str, point: [f64; 2] },

    #[error("non-finite data value from {what} at ({}, {}), t = {time}", point[0], point[1])]
    Data {
        what: &'static str,
        point: [f64; 2],
        time: f64,
    },

    #[error("linear solver failure in {context}: {message}")]
    Solver {
        context: &'static str,
        message: String,
    },

    #[error(
        "Picard iteration did not converge after {} iterations (last update {:e})",
        report.iterations,
        report.update_norms.last().copied().unwrap_or(f64::NAN)
    )]
    NotConverged { report: PicardReport },

    #[error("time step {step} (t = {time}) failed: {source}")]
    TimeStep {
        step: usize,
        time: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::InvalidArgument(_) => 2,
            Error::Parse { .. }
            | Error::Orientation { .. }
            | Error::UntaggedBoundary { .. }
            | Error::Nonconforming { .. }
            | Error::Structure(_)
            | Error::Geometry { .. } => 3,
            Error::NotConverged { .. } | Error::Solver { .. } => 4,
            Error::TimeStep { source, .. } => source.exit_code(),
            Error::Io { .. } => 5,
            Error::Domain { .. } | Error::Data { .. } => 2,
        }
    }
}
