//! Result types: region sets and M-equilibria.

use game_core::{Polytope, Q};

use crate::RankAssignment;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Space {
    Choice,
    Belief,
    SymmetricChoice,
    SymmetricBelief,
}

/// Size of a region as a fraction of the (product) simplex volume.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Measure {
    pub value: f64,
    /// Present in exact mode.
    #[serde(with = "crate::doc::opt_q")]
    pub exact: Option<Q>,
    /// Zero in exact mode.
    pub std_error: f64,
}

impl Measure {
    pub fn exact(v: Q) -> Self {
        Measure {
            value: game_core::Scalar::to_f64(&v),
            exact: Some(v),
            std_error: 0.0,
        }
    }

    pub fn estimate(hits: usize, samples: usize) -> Self {
        let n = samples.max(1) as f64;
        let p = hits as f64 / n;
        Measure {
            value: p,
            exact: None,
            std_error: (p * (1.0 - p) / n).sqrt(),
        }
    }
}

#[derive(Debug, Clone)]
pub enum Representation {
    /// Union of products of polytopes (one factor per player, or one shared
    /// factor in symmetric mode). Strict constraints are kept; the reported
    /// set is the closure.
    Exact(Vec<Vec<Polytope<Q>>>),
    /// Accepted sample points, one vector per factor.
    Sampled(Vec<Vec<Vec<f64>>>),
    /// Independent clouds, one per factor (sampled belief sets). A point of a
    /// multi-opponent belief factor is the opponents' mixtures concatenated.
    SampledFactors(Vec<Vec<Vec<f64>>>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MarkerKind {
    Nash,
    Uniform,
}

/// A Nash profile or `σ^u` lying in the closure of a choice set.
#[derive(Debug, Clone, PartialEq)]
pub struct Marker {
    pub kind: MarkerKind,
    /// Laid out like the set's factors.
    pub point: Vec<Vec<Q>>,
}

#[derive(Debug, Clone)]
pub struct RegionSet {
    /// The single color of a colorable set.
    pub color: Option<RankAssignment>,
    /// Every color whose pieces make up the set.
    pub colors: Vec<RankAssignment>,
    pub space: Space,
    pub representation: Representation,
    pub dimension: usize,
    pub measure: Measure,
    pub boundary_markers: Vec<Marker>,
}

impl RegionSet {
    /// Exact factors of a single-piece set.
    pub fn factors(&self) -> Option<&[Polytope<Q>]> {
        match &self.representation {
            Representation::Exact(p) if p.len() == 1 => Some(&p[0]),
            _ => None,
        }
    }

    pub fn pieces(&self) -> &[Vec<Polytope<Q>>] {
        match &self.representation {
            Representation::Exact(p) => p,
            Representation::Sampled(_) | Representation::SampledFactors(_) => &[],
        }
    }

    /// Closure membership (exact representation only).
    pub fn contains_closed(&self, point: &[Vec<Q>]) -> bool {
        self.pieces()
            .iter()
            .any(|piece| piece.len() == point.len() && piece.iter().zip(point).all(|(p, x)| p.contains_closed(x)))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.representation, Representation::Exact(_))
    }
}

/// A connected component of a non-colorable set.
#[derive(Debug, Clone)]
pub struct Component {
    pub dimension: usize,
    pub pieces: Vec<Vec<Polytope<Q>>>,
}

#[derive(Debug, Clone)]
pub struct MEquilibrium {
    pub choice_set: RegionSet,
    pub belief_set: RegionSet,
    pub colorable: bool,
    /// Exact mode only.
    pub components: Vec<Component>,
    /// Sampled mode: the accepted cloud shows a large internal gap.
    pub disconnected_warning: bool,
}

/// Whether the set has full dimension and a single strict color.
pub fn colorability(meq: &MEquilibrium) -> bool {
    let full: usize = match meq.choice_set.space {
        Space::SymmetricChoice | Space::SymmetricBelief => meq
            .choice_set
            .colors
            .first()
            .map(|c| c.order(0).len() - 1)
            .unwrap_or(0),
        _ => meq
            .choice_set
            .colors
            .first()
            .map(|c| c.orders().iter().map(|o| o.len() - 1).sum())
            .unwrap_or(0),
    };
    meq.choice_set.colors.len() == 1 && meq.choice_set.color.is_some() && meq.choice_set.dimension == full
}
