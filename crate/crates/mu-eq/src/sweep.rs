//! The correspondence `ρ ⇉ E_μ(ρ)(G)` on a grid, with branches linked across
//! grid points by nearest set distance.

use game_core::{q_to_string, Game, Scalar};
use serde::{Deserialize, Serialize};

use crate::{mu_equilibria_with, mu_power_exact, mu_power_f64, MuEquilibrium, MuError, MuOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BranchLabel {
    Principal,
    Paired,
    Bifurcation,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOptions {
    /// Largest integer `ρ` solved in rational arithmetic.
    pub exact_max: u32,
    /// Sup-norm linking threshold between consecutive grid points.
    pub threshold: f64,
    /// Subintervals per refinement step around a count change.
    pub refine: usize,
    pub mu: MuOptions,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            exact_max: 64,
            threshold: 0.2,
            refine: 10,
            mu: MuOptions::default(),
        }
    }
}

/// One μ-equilibrium at one grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub branch: usize,
    pub label: BranchLabel,
    pub dimension: usize,
    /// Vertices of the choice closure, per player.
    pub vertices: Vec<Vec<Vec<f64>>>,
    /// The same vertices as rationals, when solved exactly.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<Vec<Vec<Vec<String>>>>,
    pub belief_measure: f64,
    #[serde(skip)]
    cloud: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Level {
    pub rho: f64,
    pub exact: bool,
    pub records: Vec<Record>,
}

/// The equilibrium count changes between `low` and `high` (equal when the
/// grid point itself carries a continuum).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub low: f64,
    pub high: f64,
    pub count_low: usize,
    pub count_high: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrespondencePath {
    pub levels: Vec<Level>,
    pub events: Vec<Event>,
    pub principal: Option<usize>,
}

impl CorrespondencePath {
    /// Records on one branch, with their grid values.
    pub fn branch(&self, id: usize) -> Vec<(f64, &Record)> {
        self.levels
            .iter()
            .flat_map(|l| l.records.iter().filter(|r| r.branch == id).map(move |r| (l.rho, r)))
            .collect()
    }
}

/// Points spread over a component's closure: the vertices plus evenly spaced
/// points on the segments between vertices of the same piece.
fn cloud<S: Scalar>(eq: &MuEquilibrium<S>) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    for piece in &eq.pieces {
        let f: Vec<Vec<Vec<f64>>> = piece
            .choice
            .iter()
            .map(|p| p.vertices().iter().map(|v| v.iter().map(S::to_f64).collect()).collect())
            .collect();
        let verts: Vec<Vec<f64>> = crate::cartesian(&f).into_iter().map(|v| v.concat()).collect();
        for (a, x) in verts.iter().enumerate() {
            out.push(x.clone());
            for y in &verts[a + 1..] {
                for t in 1..20 {
                    let s = t as f64 / 20.0;
                    out.push(x.iter().zip(y).map(|(u, v)| u + s * (v - u)).collect());
                }
            }
        }
    }
    out
}

fn sup(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Smallest sup-norm distance between two point clouds.
pub(crate) fn set_distance(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    a.iter()
        .flat_map(|x| b.iter().map(move |y| sup(x, y)))
        .fold(f64::INFINITY, f64::min)
}

fn record<S: Scalar>(eq: &MuEquilibrium<S>, exact: Option<&dyn Fn(&S) -> String>) -> Record {
    let vs = eq.vertices();
    Record {
        branch: 0,
        label: BranchLabel::Paired,
        dimension: eq.dimension,
        vertices: vs.iter().map(|v| v.iter().map(|x| x.iter().map(S::to_f64).collect()).collect()).collect(),
        exact: exact.map(|f| vs.iter().map(|v| v.iter().map(|x| x.iter().map(f).collect()).collect()).collect()),
        belief_measure: eq.belief_set.measure.value,
        cloud: cloud(eq),
    }
}

fn solve_at(game: &Game, rho: f64, opts: &SweepOptions) -> Result<Level, MuError> {
    let exact = rho.fract() == 0.0 && rho >= 0.0 && rho <= opts.exact_max as f64;
    let records = if exact {
        let mu = mu_power_exact(game, rho as u32);
        mu_equilibria_with(game, &mu, &opts.mu)?.iter().map(|e| record(e, Some(&q_to_string))).collect()
    } else {
        let mu = mu_power_f64(game, rho);
        mu_equilibria_with(game, &mu, &opts.mu)?.iter().map(|e| record(e, None)).collect()
    };
    Ok(Level { rho, exact, records })
}

fn count(game: &Game, rho: f64, opts: &SweepOptions) -> Result<usize, MuError> {
    Ok(solve_at(game, rho, opts)?.records.len())
}

/// Narrow a count change inside `(low, high)` by two rounds of subdivision.
fn locate(game: &Game, mut low: f64, mut high: f64, opts: &SweepOptions) -> Result<Event, MuError> {
    let (count_low, count_high) = (count(game, low, opts)?, count(game, high, opts)?);
    for _ in 0..2 {
        let step = (high - low) / opts.refine as f64;
        let c0 = count(game, low, opts)?;
        for t in 1..=opts.refine {
            let x = if t == opts.refine { high } else { low + step * t as f64 };
            if count(game, x, opts)? != c0 {
                high = x;
                low = x - step;
                break;
            }
        }
    }
    Ok(Event {
        low,
        high,
        count_low,
        count_high,
    })
}

pub fn sweep_correspondence(game: &Game, grid: &[f64], opts: &SweepOptions) -> Result<CorrespondencePath, MuError> {
    if grid.is_empty() || grid.windows(2).any(|w| w[0] >= w[1]) || grid[0] < 0.0 {
        return Err(MuError::Invalid("grid must be nonnegative and strictly increasing".into()));
    }
    let mut levels: Vec<Level> = grid.iter().map(|&r| solve_at(game, r, opts)).collect::<Result<_, _>>()?;

    let mut next_branch = 0;
    for l in 0..levels.len() {
        if l == 0 {
            for r in levels[0].records.iter_mut() {
                r.branch = next_branch;
                next_branch += 1;
            }
            continue;
        }
        let (prev, cur) = levels.split_at_mut(l);
        let prev = &prev[l - 1].records;
        let cur = &mut cur[0].records;
        let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
        for (a, p) in prev.iter().enumerate() {
            for (b, c) in cur.iter().enumerate() {
                let d = set_distance(&p.cloud, &c.cloud);
                if d <= opts.threshold {
                    pairs.push((d, a, b));
                }
            }
        }
        pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut used_prev = vec![false; prev.len()];
        let mut assigned = vec![None; cur.len()];
        for (_, a, b) in pairs {
            if !used_prev[a] && assigned[b].is_none() {
                used_prev[a] = true;
                assigned[b] = Some(prev[a].branch);
            }
        }
        for (b, r) in cur.iter_mut().enumerate() {
            r.branch = assigned[b].unwrap_or_else(|| {
                next_branch += 1;
                next_branch - 1
            });
        }
    }

    let n = game.num_players();
    let uniform: Vec<f64> = (0..n).flat_map(|i| vec![1.0 / game.actions(i) as f64; game.actions(i)]).collect();
    let principal = levels[0]
        .records
        .iter()
        .min_by(|a, b| set_distance(&a.cloud, &[uniform.clone()]).total_cmp(&set_distance(&b.cloud, &[uniform.clone()])))
        .map(|r| r.branch);
    for level in &mut levels {
        for r in &mut level.records {
            r.label = if Some(r.branch) == principal {
                BranchLabel::Principal
            } else if r.dimension > 0 {
                BranchLabel::Bifurcation
            } else {
                BranchLabel::Paired
            };
        }
    }

    let mut events = Vec::new();
    for l in 0..levels.len() {
        let c = levels[l].records.len();
        if levels[l].records.iter().any(|r| r.dimension > 0) {
            events.push(Event {
                low: levels[l].rho,
                high: levels[l].rho,
                count_low: c,
                count_high: c,
            });
        }
        if l + 1 < levels.len() && levels[l + 1].records.len() != c {
            events.push(locate(game, levels[l].rho, levels[l + 1].rho, opts)?);
        }
    }
    Ok(CorrespondencePath { levels, events, principal })
}
