//! Monte-Carlo pipeline for any number of players.
//!
//! Profiles are drawn uniformly from the product of simplices (one shared
//! simplex in symmetric mode) and kept when every pair is strictly ordered
//! with matching payoffs, i.e. in the interior of a colorable set. Beliefs are
//! drawn on separate streams and bucketed by the strict payoff order they
//! induce.

use std::collections::BTreeMap;

use game_core::{expected_payoffs, expected_payoffs_at, sample::uniform_simplex, Game, WeakOrder};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::markers::{attach, candidates};
use crate::region::{MEquilibrium, Measure, Representation, RegionSet, Space};
use crate::{MsetsError, Options, RankAssignment};

/// Largest cloud used by the gap heuristic.
const GAP_POINTS: usize = 2000;
/// Gap warning threshold, in units of the median nearest-neighbour distance.
const GAP_FACTOR: f64 = 10.0;

fn strict_order(values: &[f64]) -> Option<Vec<usize>> {
    let o = WeakOrder::of(values);
    o.is_strict().then(|| o.blocks().iter().map(|b| b[0]).collect())
}

/// Color of a profile whose mixtures and payoffs are strictly and equally ordered.
pub fn strict_color(game: &Game, profile: &[Vec<f64>], symmetric: bool) -> Option<RankAssignment> {
    let players = if symmetric { 1 } else { game.num_players() };
    let mut orders = Vec::with_capacity(players);
    for i in 0..players {
        let own = strict_order(&profile[i])?;
        let pay = strict_order(&expected_payoffs_at(game, i, profile))?;
        if own != pay {
            return None;
        }
        orders.push(own);
    }
    Some(RankAssignment::new(orders))
}

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(id);
    r
}

/// Draw `samples` beliefs for `player` and bucket them by strict payoff order.
fn belief_clouds(game: &Game, player: usize, symmetric: bool, samples: usize, seed: u64) -> BTreeMap<Vec<usize>, Vec<Vec<f64>>> {
    let mut rng = stream(seed, player as u64 + 1);
    let n = game.num_players();
    let mut out: BTreeMap<Vec<usize>, Vec<Vec<f64>>> = BTreeMap::new();
    for _ in 0..samples {
        let opp: Vec<Vec<f64>> = if symmetric {
            let b = uniform_simplex(&mut rng, game.actions(0));
            vec![b; n - 1]
        } else {
            (0..n)
                .filter(|&j| j != player)
                .map(|j| uniform_simplex(&mut rng, game.actions(j)))
                .collect()
        };
        let refs: Vec<&[f64]> = opp.iter().map(Vec::as_slice).collect();
        let pi = expected_payoffs(game, player, &refs).expect("shapes match");
        if let Some(o) = strict_order(&pi) {
            let point = if symmetric { opp[0].clone() } else { opp.concat() };
            out.entry(o).or_default().push(point);
        }
    }
    out
}

pub(crate) fn enumerate(game: &Game, opts: &Options) -> Result<Vec<MEquilibrium>, MsetsError> {
    if opts.symmetric && !game.symmetric() {
        return Err(MsetsError::NotSymmetric);
    }
    if opts.samples == 0 {
        return Err(MsetsError::Invalid("sampled mode needs at least one sample".into()));
    }
    let n = game.num_players();
    let sym = opts.symmetric;
    let mut rng = stream(opts.seed, 0);
    let mut groups: BTreeMap<RankAssignment, Vec<Vec<Vec<f64>>>> = BTreeMap::new();
    for _ in 0..opts.samples {
        let profile: Vec<Vec<f64>> = if sym {
            vec![uniform_simplex(&mut rng, game.actions(0)); n]
        } else {
            (0..n).map(|i| uniform_simplex(&mut rng, game.actions(i))).collect()
        };
        if let Some(c) = strict_color(game, &profile, sym) {
            let point = if sym { vec![profile[0].clone()] } else { profile };
            groups.entry(c).or_default().push(point);
        }
    }
    let players = if sym { 1 } else { n };
    let clouds: Vec<BTreeMap<Vec<usize>, Vec<Vec<f64>>>> = (0..players)
        .map(|i| belief_clouds(game, i, sym, opts.samples, opts.seed))
        .collect();
    let (choice_space, belief_space) = if sym {
        (Space::SymmetricChoice, Space::SymmetricBelief)
    } else {
        (Space::Choice, Space::Belief)
    };
    let full: usize = (0..players).map(|i| game.actions(i) - 1).sum();
    let belief_full: usize = (0..players)
        .map(|i| if sym { game.actions(0) - 1 } else { (0..n).filter(|&j| j != i).map(|j| game.actions(j) - 1).sum() })
        .sum();
    let markers = candidates(game, sym);

    let mut out = Vec::new();
    for (color, points) in groups {
        let factors: Vec<Vec<Vec<f64>>> = (0..players)
            .map(|i| clouds[i].get(color.order(i)).cloned().unwrap_or_default())
            .collect();
        let fractions: Vec<Measure> = factors.iter().map(|f| Measure::estimate(f.len(), opts.samples)).collect();
        let value: f64 = fractions.iter().map(|m| m.value).product();
        // delta method for a product of independent proportions
        let var: f64 = fractions
            .iter()
            .map(|m| {
                let rest: f64 = value / m.value.max(f64::MIN_POSITIVE);
                (rest * m.std_error).powi(2)
            })
            .sum();
        let warning = gap_warning(&points);
        let choice_set = RegionSet {
            color: Some(color.clone()),
            colors: vec![color.clone()],
            space: choice_space,
            dimension: full,
            measure: Measure::estimate(points.len(), opts.samples),
            representation: Representation::Sampled(points),
            boundary_markers: Vec::new(),
        };
        let belief_set = RegionSet {
            color: Some(color.clone()),
            colors: vec![color],
            space: belief_space,
            dimension: belief_full,
            measure: Measure {
                value,
                exact: None,
                std_error: var.sqrt(),
            },
            representation: Representation::SampledFactors(factors),
            boundary_markers: Vec::new(),
        };
        let mut m = MEquilibrium {
            choice_set,
            belief_set,
            colorable: true,
            components: Vec::new(),
            disconnected_warning: warning,
        };
        m.choice_set.boundary_markers = attach(game, &markers, &m, sym);
        out.push(m);
    }
    Ok(out)
}

fn dist2(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| (x - y) * (x - y))
        .sum()
}

/// Largest minimum-spanning-tree edge against the median nearest-neighbour
/// distance, on an evenly thinned cloud.
pub fn gap_warning(points: &[Vec<Vec<f64>>]) -> bool {
    if points.len() < 3 {
        return false;
    }
    let stride = points.len().div_ceil(GAP_POINTS);
    let pts: Vec<&Vec<Vec<f64>>> = points.iter().step_by(stride).collect();
    let m = pts.len();
    if m < 3 {
        return false;
    }
    let mut nn = vec![f64::INFINITY; m];
    for i in 0..m {
        for j in i + 1..m {
            let d = dist2(pts[i], pts[j]);
            nn[i] = nn[i].min(d);
            nn[j] = nn[j].min(d);
        }
    }
    let mut sorted = nn.clone();
    sorted.sort_by(f64::total_cmp);
    let median = sorted[m / 2].sqrt();
    // Prim's algorithm on the complete graph
    let mut in_tree = vec![false; m];
    let mut best = vec![f64::INFINITY; m];
    best[0] = 0.0;
    let mut longest: f64 = 0.0;
    for _ in 0..m {
        let u = (0..m)
            .filter(|&v| !in_tree[v])
            .min_by(|&a, &b| best[a].total_cmp(&best[b]))
            .expect("vertex left");
        in_tree[u] = true;
        longest = longest.max(best[u]);
        for v in 0..m {
            if !in_tree[v] {
                best[v] = best[v].min(dist2(pts[u], pts[v]));
            }
        }
    }
    longest.sqrt() > GAP_FACTOR * median
}
