//! M-equilibrium choice and belief sets.
//!
//! Exact mode (two players, at most four actions each) builds each set from
//! polytopes over the rationals; sampled mode (any number of players) keeps
//! uniform draws that satisfy the strict ordinal conditions. Sets are indexed
//! by their color, the per-player strict ordering of actions.

pub mod color;
pub mod doc;
mod exact;
pub mod markers;
pub mod membership;
pub mod pieces;
pub mod region;
pub mod sampled;
pub mod stability;

use game_core::{Game, Q};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use color::RankAssignment;
pub use markers::boundary_markers;
pub use membership::{membership, membership_symmetric, Definition, Membership};
pub use region::{colorability, Component, MEquilibrium, Marker, MarkerKind, Measure, RegionSet, Representation, Space};
pub use stability::{behavioral_stability, Stability};

/// Largest per-player action count in exact mode.
pub const MAX_EXACT_ACTIONS: usize = 4;

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum MsetsError {
    #[error("capability: {0}")]
    Capability(String),
    #[error("symmetric mode needs a symmetric game")]
    NotSymmetric,
    #[error("shape error: {0}")]
    Shape(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Sampled,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Options {
    pub symmetric: bool,
    pub mode: Mode,
    pub samples: usize,
    pub seed: u64,
    /// Skip the lower-dimensional pieces (exact mode).
    pub colorable_only: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            symmetric: false,
            mode: Mode::Exact,
            samples: 100_000,
            seed: 0,
            colorable_only: false,
        }
    }
}

impl Options {
    pub fn exact() -> Self {
        Self::default()
    }

    pub fn symmetric_exact() -> Self {
        Options {
            symmetric: true,
            ..Self::default()
        }
    }

    pub fn sampled(samples: usize, seed: u64) -> Self {
        Options {
            mode: Mode::Sampled,
            samples,
            seed,
            ..Self::default()
        }
    }
}

/// All nonempty M-equilibria: colorable sets first (ordered by color), then
/// lower-dimensional components in exact mode.
pub fn enumerate_m_equilibria(game: &Game, options: &Options) -> Result<Vec<MEquilibrium>, MsetsError> {
    match options.mode {
        Mode::Exact => exact::enumerate(game, options),
        Mode::Sampled => sampled::enumerate(game, options),
    }
}

/// Belief set of a color: per player, the beliefs whose payoff order is strict
/// and follows the color.
pub fn belief_set(game: &Game, color: &RankAssignment, options: &Options) -> Result<RegionSet, MsetsError> {
    let space = if options.symmetric { Space::SymmetricBelief } else { Space::Belief };
    match options.mode {
        Mode::Exact => {
            exact::pieces(game, options.symmetric, true)?;
            let factors = exact::strict_beliefs(game, color, options.symmetric);
            let measure = factors.iter().fold(Q::from_integer(1.into()), |acc, p| acc * p.measure());
            let dimension = factors.iter().map(|p| p.dimension().unwrap_or(0)).sum();
            Ok(RegionSet {
                color: Some(color.clone()),
                colors: vec![color.clone()],
                space,
                representation: Representation::Exact(vec![factors]),
                dimension,
                measure: Measure::exact(measure),
                boundary_markers: Vec::new(),
            })
        }
        Mode::Sampled => {
            let all = sampled::enumerate(game, options)?;
            all.into_iter()
                .find(|m| m.belief_set.color.as_ref() == Some(color))
                .map(|m| m.belief_set)
                .ok_or_else(|| MsetsError::Invalid(format!("color {color} has an empty choice set")))
        }
    }
}

/// Stored measure of a region.
pub fn measure(region: &RegionSet) -> Measure {
    region.measure.clone()
}

/// Monte-Carlo estimate of an exact region's measure (uniform draws on the
/// product of the factor simplices).
pub fn estimate_measure(region: &RegionSet, samples: usize, seed: u64) -> Measure {
    let pieces = region.pieces();
    if pieces.is_empty() || samples == 0 {
        return Measure::estimate(0, samples);
    }
    let dims: Vec<usize> = pieces[0].iter().map(|p| p.ambient()).collect();
    let float: Vec<Vec<Vec<(Vec<f64>, f64, bool)>>> = pieces
        .iter()
        .map(|piece| {
            piece
                .iter()
                .map(|p| {
                    p.constraints()
                        .iter()
                        .map(|c| {
                            (
                                c.a.iter().map(game_core::Scalar::to_f64).collect(),
                                game_core::Scalar::to_f64(&c.b),
                                c.rel == game_core::Rel::Eq,
                            )
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = 0;
    for _ in 0..samples {
        let x = game_core::sample::uniform_product(&mut rng, &dims);
        let inside = float.iter().any(|piece| {
            piece.iter().zip(&x).all(|(cs, xi)| {
                cs.iter().all(|(a, b, eq)| {
                    let s: f64 = a.iter().zip(xi).map(|(u, v)| u * v).sum::<f64>() - b;
                    if *eq {
                        s.abs() <= game_core::EPS_TIE
                    } else {
                        s >= 0.0
                    }
                })
            })
        });
        if inside {
            hits += 1;
        }
    }
    Measure::estimate(hits, samples)
}
