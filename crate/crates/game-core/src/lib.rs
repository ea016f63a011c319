//! Finite normal-form games and the correspondences built on expected payoffs.
//!
//! Player and action indices are zero-based throughout. Exact computations use
//! [`Q`]; sampling and data work use `f64` with a scale-aware tie tolerance.

pub mod correspondence;
pub mod error;
pub mod game;
pub mod linalg;
pub mod polytope;
pub mod sample;
pub mod scalar;

pub use correspondence::{
    best_response, mu_power_exact, mu_power_f64, rank, rank_assignment_of, rank_mu, rank_mu_order,
    rank_vector, CorrespondenceValue, Kind, WeakOrder,
};
pub use error::GameError;
pub use game::{expected_payoffs, expected_payoffs_at, is_distribution, pure, uniform, Game};
pub use polytope::{Constraint, Polytope, Rel};
pub use scalar::{parse_q, q, q_from_f64, q_to_string, qi, Scalar, EPS_TIE, Q};
