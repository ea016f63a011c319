//! Both inclusions between a colorable M-equilibrium and the μ-equilibria of
//! its color.
//!
//! Forward: for random `μ` ranked by the color, every fixed point found is an
//! M-equilibrium profile, and a strictly ordered one lies in the closure of the
//! M-equilibrium of its own color. Backward: a random interior choice `σ^c` of
//! the M-equilibrium, used as `μ`, is a fixed point supported by any interior
//! belief of the set.

use game_core::{Game, Polytope, Q};
use msets::{enumerate_m_equilibria, membership, Definition, MEquilibrium, Options, RankAssignment};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::{is_fixed_point, solve, supports, MuError, Regions};

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct MetaReport {
    pub color: RankAssignment,
    pub mu_samples: usize,
    /// Fixed-point pieces examined in the forward direction.
    pub fixed_points: usize,
    /// Of those, pieces carrying this color.
    pub same_color: usize,
    pub forward_violations: usize,
    pub interior_samples: usize,
    pub backward_violations: usize,
}

/// `μ` ranked by `order` (ascending) with distinct entries on a 1/1000 grid.
fn ranked_mu(rng: &mut ChaCha8Rng, order: &[usize]) -> Vec<Q> {
    let k = order.len();
    let mut w: Vec<i64> = Vec::with_capacity(k);
    while w.len() < k {
        let x = rng.random_range(1..=1000);
        if !w.contains(&x) {
            w.push(x);
        }
    }
    w.sort_unstable();
    let total: i64 = w.iter().sum();
    let mut mu = vec![Q::from_integer(0.into()); k];
    for (s, &a) in order.iter().enumerate() {
        mu[a] = Q::new(w[s].into(), total.into());
    }
    mu
}

/// Random point in the relative interior: positive weights on every vertex.
fn interior(rng: &mut ChaCha8Rng, p: &Polytope<Q>) -> Vec<Q> {
    let vs = p.vertices();
    let w: Vec<i64> = vs.iter().map(|_| rng.random_range(1..=100)).collect();
    let total: i64 = w.iter().sum();
    (0..p.ambient())
        .map(|c| {
            vs.iter()
                .zip(&w)
                .fold(Q::from_integer(0.into()), |acc, (v, &x)| acc + v[c].clone() * Q::from_integer(x.into()))
                / Q::from_integer(total.into())
        })
        .collect()
}

fn centroid(p: &Polytope<Q>) -> Vec<Q> {
    p.interior_point().expect("feasible piece")
}

fn in_closure(m: &MEquilibrium, choice: &[Vec<Q>], belief: &[Vec<Q>]) -> bool {
    m.choice_set.contains_closed(choice) && m.belief_set.contains_closed(belief)
}

pub fn verify_meta_inclusion(game: &Game, color: &RankAssignment, mu_samples: usize, seed: u64) -> Result<MetaReport, MuError> {
    if game.num_players() != 2 {
        return Err(MuError::Capability("meta-inclusion check needs two players".into()));
    }
    let all = enumerate_m_equilibria(game, &Options { colorable_only: true, ..Options::exact() })
        .map_err(|e| MuError::Capability(e.to_string()))?;
    let target = all
        .iter()
        .find(|m| m.choice_set.color.as_ref() == Some(color))
        .ok_or_else(|| MuError::Invalid(format!("color {color} has no colorable M-equilibrium")))?;
    let regions = Regions::new(game);

    let forward: Vec<(usize, usize, usize)> = (0..mu_samples)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(2 * t as u64);
            let mu: Vec<Vec<Q>> = (0..2).map(|i| ranked_mu(&mut rng, color.order(i))).collect();
            let (mut seen, mut same, mut bad) = (0, 0, 0);
            for eq in solve(&regions, &mu) {
                let beliefs = eq.belief_set.pieces();
                for (piece, belief) in eq.pieces.iter().zip(beliefs) {
                    seen += 1;
                    let c: Vec<Vec<Q>> = piece.choice.iter().map(centroid).collect();
                    let b: Vec<Vec<Q>> = belief.iter().map(centroid).collect();
                    let bb: Vec<Vec<Vec<Q>>> = b.iter().map(|x| vec![x.clone()]).collect();
                    let mut ok = is_fixed_point(game, &mu, &c)
                        && supports(game, &mu, &c, &bb)
                        && membership(game, &c, &bb, Definition::Two).is_ok_and(|m| m.member);
                    if let Some(col) = &eq.color {
                        if col == color {
                            same += 1;
                        }
                        ok &= all
                            .iter()
                            .find(|m| m.choice_set.color.as_ref() == Some(col))
                            .is_some_and(|m| in_closure(m, &c, &b));
                    }
                    if !ok {
                        bad += 1;
                    }
                }
            }
            (seen, same, bad)
        })
        .collect();

    let choice = target.choice_set.factors().expect("exact set");
    let belief = target.belief_set.factors().expect("exact set");
    let backward: usize = (0..mu_samples)
        .into_par_iter()
        .filter(|&t| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(2 * t as u64 + 1);
            let c: Vec<Vec<Q>> = choice.iter().map(|p| interior(&mut rng, p)).collect();
            let b: Vec<Vec<Vec<Q>>> = belief.iter().map(|p| vec![interior(&mut rng, p)]).collect();
            let mu = c.clone();
            let found = solve(&regions, &mu).iter().any(|e| e.contains_closed(&c));
            !(found && is_fixed_point(game, &mu, &c) && supports(game, &mu, &c, &b))
        })
        .count();

    Ok(MetaReport {
        color: color.clone(),
        mu_samples,
        fixed_points: forward.iter().map(|x| x.0).sum(),
        same_color: forward.iter().map(|x| x.1).sum(),
        forward_violations: forward.iter().map(|x| x.2).sum(),
        interior_samples: mu_samples,
        backward_violations: backward,
    })
}

