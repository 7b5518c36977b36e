use std::path::PathBuf;

use pextremal_core::domain::DomainError;
use pextremal_core::eigen::EigenError;
use pextremal_core::flow::FlowError;
use pextremal_core::hyperbolic::HyperbolicError;
use pextremal_core::radial::{ParamError, RadialError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NONCONVERGENCE: i32 = 3;
pub const EXIT_INVALID: i32 = 4;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    NonConvergence(String),
    #[error("{0}")]
    InvalidParams(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::NonConvergence(_) => EXIT_NONCONVERGENCE,
            CliError::InvalidParams(_) => EXIT_INVALID,
            CliError::Io { .. } => EXIT_IO,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::NonConvergence(_) => "non_convergence",
            CliError::InvalidParams(_) => "invalid_params",
            CliError::Io { .. } => "io",
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

impl From<ParamError> for CliError {
    fn from(e: ParamError) -> Self {
        CliError::InvalidParams(e.to_string())
    }
}

impl From<RadialError> for CliError {
    fn from(e: RadialError) -> Self {
        match e {
            RadialError::InvalidParams(p) => p.into(),
            other => CliError::NonConvergence(other.to_string()),
        }
    }
}

impl From<DomainError> for CliError {
    fn from(e: DomainError) -> Self {
        CliError::InvalidParams(e.to_string())
    }
}

impl From<EigenError> for CliError {
    fn from(e: EigenError) -> Self {
        match e {
            EigenError::NonConvergence { .. } | EigenError::ZeroField => {
                CliError::NonConvergence(e.to_string())
            }
            EigenError::Radial(r) => r.into(),
            other => CliError::InvalidParams(other.to_string()),
        }
    }
}

impl From<FlowError> for CliError {
    fn from(e: FlowError) -> Self {
        match e {
            FlowError::Eigen(inner) => inner.into(),
            FlowError::Domain(inner) => inner.into(),
            FlowError::NotSimplyConnected => CliError::InvalidParams(e.to_string()),
            other => CliError::NonConvergence(other.to_string()),
        }
    }
}

impl From<HyperbolicError> for CliError {
    fn from(e: HyperbolicError) -> Self {
        CliError::InvalidParams(e.to_string())
    }
}
