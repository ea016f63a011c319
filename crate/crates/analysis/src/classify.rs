//! Classification of observations into M-equilibrium sets.
//!
//! A stated belief is located in the belief sets and the chosen action (as a
//! pure mixture) in the choice sets, one factor at a time: the factor of the
//! observation's role, or the shared factor in symmetric mode. Membership is
//! closure membership with a small tolerance, so slider reports on the simplex
//! boundary are classified. Points outside every set get the distance to the
//! nearest one.

use std::collections::BTreeMap;

use game_core::{Polytope, Rel, Scalar, Q};
use msets::{MEquilibrium, RegionSet, Space};
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::{AnalysisError, Clustering, Observation, Role};

/// Constraint slack tolerated by [`contains_f64`].
pub const CONTAIN_TOL: f64 = 1e-9;
const NONE: &str = "none";

/// Whether `x` lies in the closure of `p`, up to [`CONTAIN_TOL`].
pub fn contains_f64(p: &Polytope<Q>, x: &[f64]) -> bool {
    p.ambient() == x.len()
        && !p.vertices().is_empty()
        && x.iter().all(|&v| v >= -CONTAIN_TOL)
        && (x.iter().sum::<f64>() - 1.0).abs() <= crate::BELIEF_TOL
        && p.constraints().iter().all(|c| {
            let s: f64 = c.a.iter().zip(x).map(|(a, v)| a.to_f64() * v).sum::<f64>() - c.b.to_f64();
            match c.rel {
                Rel::Ge | Rel::Gt => s >= -CONTAIN_TOL,
                Rel::Eq => s.abs() <= CONTAIN_TOL,
            }
        })
}

fn next_subset(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Euclidean distance from `x` to the convex hull of `vertices`.
///
/// Every affinely independent subset of at most `x.len()` vertices is tried
/// (the points lie in a simplex of dimension `x.len() - 1`):
/// `x` is projected onto the subset's affine hull and the projection kept when
/// its barycentric coordinates are nonnegative. The nearest point of the hull
/// is such a projection for the subset spanning its minimal face.
pub fn hull_distance(vertices: &[Vec<f64>], x: &[f64]) -> f64 {
    if vertices.is_empty() {
        return f64::INFINITY;
    }
    let d = x.len();
    let mut best = f64::INFINITY;
    for size in 1..=vertices.len().min(d) {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            if let Some(dist) = project(vertices, &idx, x) {
                best = best.min(dist);
            }
            if !next_subset(&mut idx, vertices.len()) {
                break;
            }
        }
    }
    best
}

fn project(vertices: &[Vec<f64>], idx: &[usize], x: &[f64]) -> Option<f64> {
    let v0 = &vertices[idx[0]];
    let d = x.len();
    let m = idx.len() - 1;
    let dirs = DMatrix::from_fn(d, m, |r, c| vertices[idx[c + 1]][r] - v0[r]);
    let rhs = DVector::from_fn(d, |r, _| x[r] - v0[r]);
    let t = if m == 0 {
        DVector::zeros(0)
    } else {
        let gram = dirs.transpose() * &dirs;
        let scale = gram.diagonal().max().max(1.0);
        if gram.determinant().abs() <= 1e-14 * scale.powi(m as i32) {
            return None;
        }
        gram.cholesky()?.solve(&(dirs.transpose() * &rhs))
    };
    let lead = 1.0 - t.sum();
    if lead < -1e-12 || t.iter().any(|&w| w < -1e-12) {
        return None;
    }
    Some((rhs - dirs * t).norm())
}

/// Where a point falls among the sets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SetLabel {
    /// Index into the M-equilibrium list of the first containing set.
    pub set: Option<usize>,
    /// Color label of that set (`"none"` outside every set, `"component i"`
    /// for a non-colorable set).
    pub color: String,
    /// Every containing set.
    pub containing: Vec<usize>,
    /// Distance to the nearest set; zero inside.
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservationLabel {
    pub index: usize,
    pub role: Role,
    pub belief: SetLabel,
    pub choice: SetLabel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterLabel {
    pub cluster: usize,
    pub size: usize,
    pub role: Role,
    pub centroid: Vec<f64>,
    pub mean_choice: Vec<f64>,
    pub belief: SetLabel,
    pub choice: SetLabel,
    /// Centroid and mean choice fall in the same set.
    pub agreement: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassReport {
    pub observations: Vec<ObservationLabel>,
    pub clusters: Vec<ClusterLabel>,
    /// Fraction of stated beliefs per color label.
    pub belief_fractions: BTreeMap<String, f64>,
    /// Fraction of choices per color label.
    pub choice_fractions: BTreeMap<String, f64>,
    /// Fraction of observations whose cluster's mean choice has each color.
    pub cluster_choice_fractions: BTreeMap<String, f64>,
    /// Fraction of observations in clusters whose centroid and mean choice agree.
    pub cluster_agreement: Option<f64>,
}

struct Factors {
    /// Per set: per piece, the polytope of this factor.
    polys: Vec<Vec<Polytope<Q>>>,
    verts: Vec<Vec<Vec<Vec<f64>>>>,
}

impl Factors {
    fn new(sets: &[&RegionSet], factor: usize) -> Self {
        let polys: Vec<Vec<Polytope<Q>>> = sets
            .iter()
            .map(|s| s.pieces().iter().map(|piece| piece[factor].clone()).collect())
            .collect();
        let verts = polys
            .iter()
            .map(|ps| {
                ps.iter()
                    .map(|p| p.vertices().iter().map(|v| v.iter().map(Scalar::to_f64).collect()).collect())
                    .collect()
            })
            .collect();
        Factors { polys, verts }
    }

    fn label(&self, x: &[f64], names: &[String]) -> SetLabel {
        let containing: Vec<usize> = (0..self.polys.len())
            .filter(|&s| self.polys[s].iter().any(|p| contains_f64(p, x)))
            .collect();
        if let Some(&set) = containing.first() {
            return SetLabel {
                set: Some(set),
                color: names[set].clone(),
                containing,
                distance: 0.0,
            };
        }
        let distance = self
            .verts
            .iter()
            .flatten()
            .map(|v| hull_distance(v, x))
            .fold(f64::INFINITY, f64::min);
        SetLabel {
            set: None,
            color: NONE.into(),
            containing,
            distance,
        }
    }
}

fn fractions<'a>(labels: impl Iterator<Item = (&'a str, f64)>) -> BTreeMap<String, f64> {
    let mut out = BTreeMap::new();
    let mut total = 0.0;
    for (l, w) in labels {
        *out.entry(l.to_string()).or_insert(0.0) += w;
        total += w;
    }
    if total > 0.0 {
        out.values_mut().for_each(|v| *v /= total);
    }
    out
}

/// Label observations (and, with a clustering of their beliefs, each cluster)
/// by the exact M-equilibrium sets of `game`.
pub fn classify_into_sets(
    game: &game_core::Game,
    observations: &[Observation],
    sets: &[MEquilibrium],
    clustering: Option<&Clustering>,
) -> Result<ClassReport, AnalysisError> {
    if game.num_players() != 2 {
        return Err(AnalysisError::Capability("classification covers two-player games".into()));
    }
    if sets.iter().any(|m| !m.choice_set.is_exact() || !m.belief_set.is_exact()) {
        return Err(AnalysisError::Capability("classification needs exact M-equilibrium sets".into()));
    }
    let symmetric = sets
        .first()
        .map(|m| matches!(m.choice_set.space, Space::SymmetricChoice | Space::SymmetricBelief))
        .unwrap_or(false);
    let mut component = 0;
    let names: Vec<String> = sets
        .iter()
        .map(|m| match (&m.choice_set.color, m.colorable) {
            (Some(c), true) => c.label(game.labels()),
            _ => {
                component += 1;
                format!("component {component}")
            }
        })
        .collect();
    let factor = |role: Role| if symmetric { 0 } else { role.player() };
    let choice_sets: Vec<&RegionSet> = sets.iter().map(|m| &m.choice_set).collect();
    let belief_sets: Vec<&RegionSet> = sets.iter().map(|m| &m.belief_set).collect();
    let roles = if symmetric { vec![Role::Row] } else { vec![Role::Row, Role::Column] };
    let per_role: Vec<(Factors, Factors)> = roles
        .iter()
        .map(|&r| (Factors::new(&choice_sets, factor(r)), Factors::new(&belief_sets, factor(r))))
        .collect();
    let tables = |role: Role| &per_role[factor(role)];

    let mut labels = Vec::with_capacity(observations.len());
    for (index, o) in observations.iter().enumerate() {
        let p = o.role.player();
        let (own, opp) = (game.actions(p), game.actions(1 - p));
        if o.choice >= own || o.belief.len() != opp {
            return Err(AnalysisError::Invalid(format!("observation {index} does not fit the game")));
        }
        let (cf, bf) = tables(o.role);
        labels.push(ObservationLabel {
            index,
            role: o.role,
            belief: bf.label(&o.belief, &names),
            choice: cf.label(&game_core::pure::<f64>(own, o.choice), &names),
        });
    }

    let mut clusters = Vec::new();
    if let Some(c) = clustering {
        if c.assignment.len() != observations.len() {
            return Err(AnalysisError::Invalid("clustering does not match the observations".into()));
        }
        for (k, centroid) in c.centroids.iter().enumerate() {
            let members: Vec<&Observation> = observations.iter().zip(&c.assignment).filter(|(_, &a)| a == k).map(|(o, _)| o).collect();
            let Some(first) = members.first() else { continue };
            let role = first.role;
            if members.iter().any(|o| factor(o.role) != factor(role)) {
                return Err(AnalysisError::Invalid(format!("cluster {k} mixes roles of an asymmetric game")));
            }
            let own = game.actions(role.player());
            let mut mean_choice = vec![0.0; own];
            for o in &members {
                mean_choice[o.choice] += 1.0 / members.len() as f64;
            }
            let (cf, bf) = tables(role);
            let belief = bf.label(centroid, &names);
            let choice = cf.label(&mean_choice, &names);
            let agreement = belief.set.is_some() && belief.set == choice.set;
            clusters.push(ClusterLabel {
                cluster: k,
                size: members.len(),
                role,
                centroid: centroid.clone(),
                mean_choice,
                belief,
                choice,
                agreement,
            });
        }
    }

    let n = observations.len().max(1) as f64;
    Ok(ClassReport {
        belief_fractions: fractions(labels.iter().map(|l| (l.belief.color.as_str(), 1.0))),
        choice_fractions: fractions(labels.iter().map(|l| (l.choice.color.as_str(), 1.0))),
        cluster_choice_fractions: fractions(clusters.iter().map(|c| (c.choice.color.as_str(), c.size as f64))),
        cluster_agreement: clustering.map(|_| clusters.iter().filter(|c| c.agreement).map(|c| c.size as f64).sum::<f64>() / n),
        observations: labels,
        clusters,
    })
}
