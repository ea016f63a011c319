//! Quantal response equilibria for comparison with M equilibrium.
//!
//! The logit trace follows the principal branch of a two-player game from the
//! uniform profile at `λ = 0` along an increasing grid. The Luce closed form
//! covers the asymmetric matching-pennies game with payoffs
//! `(1,0) (0,5) / (0,1) (5,0)`.

mod bound;
mod logit;
mod luce;

pub use bound::{dominated_pairs, logit_dominated_bound_check, PairDomination, BOUND_SLACK};
pub use logit::{
    default_grid, geometric_grid, logit_qre_trace, logit_qre_trace_with, logit_residual, logit_response, TraceOptions, MAX_SCALED_PRECISION,
};
pub use luce::{in_luce_union, luce_amp_closed_form, luce_amp_exact, luce_amp_samples, LuceSample, LUCE_UNION};

use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum QreError {
    #[error("shape error: {0}")]
    Shape(String),
    #[error("invalid grid: {0}")]
    Grid(String),
    #[error("continuation failed at lambda = {lambda} (residual {residual:e})")]
    ContinuationFailure { lambda: f64, residual: f64 },
    #[error("not applicable: {0}")]
    NotApplicable(String),
}

/// One accepted point of a QRE path.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QrePoint {
    pub lambda: f64,
    /// One mixture per player.
    pub profile: Vec<Vec<f64>>,
    /// Largest violation of the fixed-point equations.
    pub residual: f64,
}

/// A traced path in the layout of the μ-equilibrium correspondence export:
/// one level per grid value, each holding a single principal record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceExport {
    pub model: String,
    pub levels: Vec<ExportLevel>,
    pub principal: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExportLevel {
    pub rho: f64,
    pub exact: bool,
    pub records: Vec<ExportRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExportRecord {
    pub branch: usize,
    pub label: String,
    pub dimension: usize,
    pub vertices: Vec<Vec<Vec<f64>>>,
    pub residual: f64,
}

/// Package a trace for overlay plotting next to a μ-equilibrium path.
pub fn export_trace(model: &str, trace: &[QrePoint]) -> TraceExport {
    TraceExport {
        model: model.to_string(),
        levels: trace
            .iter()
            .map(|p| ExportLevel {
                rho: p.lambda,
                exact: false,
                records: vec![ExportRecord {
                    branch: 0,
                    label: "principal".into(),
                    dimension: 0,
                    vertices: p.profile.iter().map(|s| vec![s.clone()]).collect(),
                    residual: p.residual,
                }],
            })
            .collect(),
        principal: (!trace.is_empty()).then_some(0),
    }
}
