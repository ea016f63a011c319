//! Best-response rates and descriptive statistics per role.

use game_core::{expected_payoffs, Game};
use serde::{Deserialize, Serialize};

use crate::{AnalysisError, Observation, Role};

/// Payoff gap within which two actions both count as best responses.
pub const BR_TIE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BrRow {
    pub role: Role,
    pub n: usize,
    pub hits: usize,
    pub rate: f64,
    /// Binomial standard error of `rate`.
    pub se: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BrTable {
    pub rows: Vec<BrRow>,
    /// Pooled `(n, hits, rate)`.
    pub overall: (usize, usize, f64),
}

impl BrTable {
    pub fn role(&self, role: Role) -> Option<&BrRow> {
        self.rows.iter().find(|r| r.role == role)
    }
}

fn row(role: Role, n: usize, hits: usize) -> BrRow {
    let rate = if n == 0 { 0.0 } else { hits as f64 / n as f64 };
    let se = if n == 0 { 0.0 } else { (rate * (1.0 - rate) / n as f64).sqrt() };
    BrRow { role, n, hits, rate, se }
}

/// Whether the observed choice maximizes expected payoff under the stated belief.
pub fn is_best_response(game: &Game, o: &Observation) -> Result<bool, AnalysisError> {
    let p = o.role.player();
    if o.choice >= game.actions(p) {
        return Err(AnalysisError::Invalid(format!("choice {} out of range", o.choice)));
    }
    let pay = expected_payoffs(game, p, &[o.belief.as_slice()]).map_err(|e| AnalysisError::Invalid(e.to_string()))?;
    let best = pay.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Ok(pay[o.choice] >= best - BR_TIE)
}

/// Fraction of best responses to the subject's own belief, per role
/// (two-player games).
pub fn best_response_rate(game: &Game, observations: &[Observation]) -> Result<BrTable, AnalysisError> {
    if game.num_players() != 2 {
        return Err(AnalysisError::Capability("best-response tables cover two-player games".into()));
    }
    let mut counts = [(0usize, 0usize); 2];
    for o in observations {
        let hit = is_best_response(game, o)?;
        let c = &mut counts[o.role.player()];
        c.0 += 1;
        c.1 += usize::from(hit);
    }
    let rows = [Role::Row, Role::Column]
        .into_iter()
        .filter(|r| counts[r.player()].0 > 0)
        .map(|r| row(r, counts[r.player()].0, counts[r.player()].1))
        .collect();
    let n = counts[0].0 + counts[1].0;
    let hits = counts[0].1 + counts[1].1;
    Ok(BrTable {
        rows,
        overall: (n, hits, if n == 0 { 0.0 } else { hits as f64 / n as f64 }),
    })
}

/// Sample means and covariances of beliefs and choices for one role.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoleSummary {
    pub role: Role,
    pub n: usize,
    pub mean_belief: Vec<f64>,
    pub belief_covariance: Vec<Vec<f64>>,
    /// Choice frequencies.
    pub mean_choice: Vec<f64>,
    pub choice_covariance: Vec<Vec<f64>>,
}

fn moments(points: &[Vec<f64>]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = points.len();
    let d = points.first().map_or(0, Vec::len);
    let mut mean = vec![0.0; d];
    for p in points {
        mean.iter_mut().zip(p).for_each(|(m, v)| *m += v / n as f64);
    }
    let mut cov = vec![vec![0.0; d]; d];
    if n > 1 {
        for p in points {
            for a in 0..d {
                for b in 0..d {
                    cov[a][b] += (p[a] - mean[a]) * (p[b] - mean[b]) / (n - 1) as f64;
                }
            }
        }
    }
    (mean, cov)
}

/// Per-role summaries (unbiased covariances).
pub fn describe(game: &Game, observations: &[Observation]) -> Vec<RoleSummary> {
    [Role::Row, Role::Column]
        .into_iter()
        .filter_map(|role| {
            let obs: Vec<&Observation> = observations.iter().filter(|o| o.role == role).collect();
            if obs.is_empty() {
                return None;
            }
            let k = game.actions(role.player());
            let beliefs: Vec<Vec<f64>> = obs.iter().map(|o| o.belief.clone()).collect();
            let choices: Vec<Vec<f64>> = obs.iter().map(|o| game_core::pure(k, o.choice.min(k - 1))).collect();
            let (mean_belief, belief_covariance) = moments(&beliefs);
            let (mean_choice, choice_covariance) = moments(&choices);
            Some(RoleSummary {
                role,
                n: obs.len(),
                mean_belief,
                belief_covariance,
                mean_choice,
                choice_covariance,
            })
        })
        .collect()
}
