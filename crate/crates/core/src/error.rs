use thiserror::Error;

use crate::assembly::AssemblyError;
use crate::control::ControlError;
use crate::enrichment::EnrichmentError;
use crate::linalg::LinalgError;
use crate::mesh::MeshError;
use crate::quadrature::QuadratureError;
use crate::study::ConfigError;

/// Any failure of the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error(transparent)]
    Enrichment(#[from] EnrichmentError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Assembly(#[from] AssemblyError),
    #[error(transparent)]
    Control(#[from] ControlError),
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io { context: context.into(), source }
    }

    /// Process exit status: 2 for invalid input, 3 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Mesh(_) | Error::Io { .. } => 2,
            Error::Enrichment(EnrichmentError::InvalidConfig(_) | EnrichmentError::TipOutsideDomain(_)) => 2,
            Error::Assembly(AssemblyError::InvalidProblem(_) | AssemblyError::BoundsCrossed(_)) => 2,
            _ => 3,
        }
    }
}
