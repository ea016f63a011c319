//! Analysis of elicited choices and beliefs.
//!
//! Observations are read from comma-separated text, clustered on beliefs by
//! k-means, classified into the colored M-equilibrium sets of their game and
//! scored for best responses to the subject's own stated belief.

mod br;
mod classify;
mod data;
mod kmeans;

pub use br::{best_response_rate, describe, is_best_response, BrRow, BrTable, RoleSummary, BR_TIE};
pub use classify::{classify_into_sets, contains_f64, CONTAIN_TOL, hull_distance, ClassReport, ClusterLabel, ObservationLabel, SetLabel};
pub use data::{ingest, ingest_str, Ingested, Observation, Role, RowError, BELIEF_REJECT_TOL, BELIEF_TOL};
pub use kmeans::{elbow, kmeans, Clustering, Elbow, DEFAULT_RESTARTS};

#[derive(Debug, thiserror::Error)]
pub enum AnalysisError {
    #[error("format error: {0}")]
    Format(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("capability: {0}")]
    Capability(String),
}
