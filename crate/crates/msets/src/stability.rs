//! Behavioral stability by payoff perturbation.
//!
//! Each trial perturbs every payoff entry uniformly in `[−ε, ε]` and asks
//! whether the profile is still an M-equilibrium profile of the perturbed game.
//! Two-player profiles that fail the literal test are accepted when the
//! closure of the perturbed M-equilibrium set comes within `√ε` (sup norm) of
//! the profile, with choice and belief inside the same piece. Interior points
//! of colorable sets pass either way; profiles held in place by a payoff tie
//! that perturbation destroys do not.

use game_core::{q_from_f64, Constraint, Game, Polytope, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::membership::{membership, Definition};
use crate::pieces::{meet, sides, Side};
use crate::MsetsError;

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Stability {
    pub stable: bool,
    pub failures: usize,
    pub trials: usize,
    /// Certified by the margin bound without sampling.
    pub fast_path: bool,
}

/// Smallest payoff gap over all strict pairs, or `None` when some pair rests
/// on an equality branch.
fn margin(game: &Game, choice: &[Vec<f64>], belief: &[Vec<Vec<f64>>]) -> Option<f64> {
    let mut m = f64::INFINITY;
    for i in 0..game.num_players() {
        let pc = game_core::expected_payoffs_at(game, i, choice);
        let refs: Vec<&[f64]> = belief[i].iter().map(Vec::as_slice).collect();
        let pb = game_core::expected_payoffs(game, i, &refs).ok()?;
        let s = &choice[i];
        for k in 0..s.len() {
            for l in k + 1..s.len() {
                if s[k].cmp_tie(&s[l]).is_eq() || pc[k].cmp_tie(&pc[l]).is_eq() || pb[k].cmp_tie(&pb[l]).is_eq() {
                    return None;
                }
                m = m.min((pc[k] - pc[l]).abs()).min((pb[k] - pb[l]).abs());
            }
        }
    }
    Some(m)
}

/// Sup-norm radius of the closure neighbourhood used for two-player games.
pub fn neighbourhood(epsilon: f64) -> f64 {
    epsilon.sqrt()
}

pub fn behavioral_stability(
    game: &Game,
    choice: &[Vec<f64>],
    belief: &[Vec<Vec<f64>>],
    epsilon: f64,
    trials: usize,
    seed: u64,
) -> Result<Stability, MsetsError> {
    if !(epsilon > 0.0) {
        return Err(MsetsError::Invalid("epsilon must be positive".into()));
    }
    if !membership(game, choice, belief, Definition::Two)?.member {
        return Err(MsetsError::Invalid("profile is not an M-equilibrium profile of the game".into()));
    }
    let n = game.num_players();
    let cells = (0..n).map(|i| game.num_cells() / game.actions(i)).max().unwrap_or(1);
    if let Some(m) = margin(game, choice, belief) {
        if m > epsilon * cells.max(2) as f64 {
            return Ok(Stability {
                stable: true,
                failures: 0,
                trials: 0,
                fast_path: true,
            });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let delta = neighbourhood(epsilon);
    let mut failures = 0;
    for _ in 0..trials {
        let perturbed: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                game.payoff_tensor_f64(i)
                    .iter()
                    .map(|v| v + rng.random_range(-epsilon..=epsilon))
                    .collect()
            })
            .collect();
        let g2 = game
            .with_payoffs(perturbed.iter().map(|row| row.iter().map(|&v| q_from_f64(v)).collect()).collect())
            .map_err(|e| MsetsError::Shape(e.to_string()))?;
        if membership(&g2, choice, belief, Definition::Two)?.member {
            continue;
        }
        if n == 2 && near_closure(&g2, choice, belief, delta) {
            continue;
        }
        failures += 1;
    }
    Ok(Stability {
        stable: failures == 0,
        failures,
        trials,
        fast_path: false,
    })
}

fn boxed(p: &Polytope<f64>, x: &[f64], delta: f64) -> Polytope<f64> {
    let mut out = p.closed();
    let k = x.len();
    for c in 0..k {
        let e: Vec<f64> = game_core::pure(k, c);
        if x[c] - delta > 0.0 {
            out.add(Constraint::ge(e.clone(), x[c] - delta));
        }
        if x[c] + delta < 1.0 {
            out.add(Constraint::ge(e.iter().map(|v| -v).collect(), -(x[c] + delta)));
        }
    }
    out
}

fn matrix(game: &Game, player: usize) -> Vec<Vec<f64>> {
    game.payoff_matrix(player)
        .iter()
        .map(|r| r.iter().map(Scalar::to_f64).collect())
        .collect()
}

/// Whether some piece of the game's M-equilibrium set has a choice closure and
/// belief closure within `delta` of the profile.
pub fn near_closure(game: &Game, choice: &[Vec<f64>], belief: &[Vec<Vec<f64>>], delta: f64) -> bool {
    let (m1, m2) = (matrix(game, 0), matrix(game, 1));
    let near = |s: &Side<f64>, own: &[f64], b: &[f64]| !boxed(&s.own, own, delta).is_empty() && !boxed(&s.pay, b, delta).is_empty();
    let l1: Vec<Side<f64>> = sides(&m1, false, false)
        .into_iter()
        .filter(|s| near(s, &choice[0], &belief[0][0]))
        .collect();
    if l1.is_empty() {
        return false;
    }
    let l2: Vec<Side<f64>> = sides(&m2, false, false)
        .into_iter()
        .filter(|s| near(s, &choice[1], &belief[1][0]))
        .collect();
    l1.iter().any(|s1| {
        l2.iter().any(|s2| {
            let f1 = meet(&s1.own, &s2.pay);
            let f2 = meet(&s2.own, &s1.pay);
            f1.is_feasible()
                && f2.is_feasible()
                && !boxed(&f1, &choice[0], delta).is_empty()
                && !boxed(&f2, &choice[1], delta).is_empty()
        })
    })
}
