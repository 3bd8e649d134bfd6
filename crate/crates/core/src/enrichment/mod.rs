//! Enrichment functions, node classification and the enriched basis.

mod functions;
pub mod geometry;
mod space;

pub use functions::{
    cutoff_eval, face_sign, heaviside, polar_coords, polar_coords_on_face, singular_eval,
    CutoffSpec, Polar,
};
pub(crate) use functions::polar_impl;
pub use space::{
    classify_nodes, BasisValue, DofEntry, DofKind, DofMap, ElementInfo, EnrichedSpace, LocalFn,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EnrichmentError {
    #[error("corner tip {0:?} lies outside the meshed domain")]
    TipOutsideDomain(crate::Point),
    #[error("point {point:?} is outside element {element}")]
    PointOutsideElement { element: usize, point: crate::Point },
    #[error("basis gradients are undefined at the tip (element {0})")]
    PointAtTip(usize),
    #[error("invalid enrichment configuration: {0}")]
    InvalidConfig(String),
}

/// Discretization flavour.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    /// P1 plus one global cut-off singular function.
    CutXfem,
    /// P1 plus nodal singular functions inside a fixed radius.
    ClassicXfem,
    /// Plain P1.
    P1Plain,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::CutXfem => "cut",
            Method::ClassicXfem => "classic",
            Method::P1Plain => "p1",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "cut" | "cut_xfem" => Some(Method::CutXfem),
            "classic" | "classic_xfem" => Some(Method::ClassicXfem),
            "p1" | "p1_plain" => Some(Method::P1Plain),
            _ => None,
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnrichmentConfig {
    pub method: Method,
    /// Radius of the nodal singular enrichment (classic XFEM).
    pub enrichment_radius: f64,
    /// Cut-off of the global singular function (cut XFEM).
    pub cutoff: CutoffSpec,
}

impl EnrichmentConfig {
    pub fn cut(cutoff: CutoffSpec) -> Self {
        EnrichmentConfig { method: Method::CutXfem, enrichment_radius: 0.5, cutoff }
    }

    pub fn classic(enrichment_radius: f64) -> Self {
        EnrichmentConfig {
            method: Method::ClassicXfem,
            enrichment_radius,
            cutoff: CutoffSpec::default(),
        }
    }

    pub fn p1() -> Self {
        EnrichmentConfig {
            method: Method::P1Plain,
            enrichment_radius: 0.5,
            cutoff: CutoffSpec::default(),
        }
    }

    pub fn with_method(method: Method, enrichment_radius: f64, cutoff: CutoffSpec) -> Self {
        EnrichmentConfig { method, enrichment_radius, cutoff }
    }

    pub fn validate(&self) -> Result<(), EnrichmentError> {
        if !(self.enrichment_radius > 0.0) {
            return Err(EnrichmentError::InvalidConfig(format!(
                "enrichment radius must be positive (got {})",
                self.enrichment_radius
            )));
        }
        if CutoffSpec::new(self.cutoff.r0, self.cutoff.r1).is_none() {
            return Err(EnrichmentError::InvalidConfig(format!(
                "cut-off radii must satisfy 0 < r0 < r1 (got {}, {})",
                self.cutoff.r0, self.cutoff.r1
            )));
        }
        Ok(())
    }
}
