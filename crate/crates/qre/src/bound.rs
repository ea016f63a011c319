//! The one-third bound on logit choice of a dominated action.
//!
//! If `π_d ≤ (π_a + π_b)/2` cell by cell, then for every belief and every λ,
//! convexity of `exp` gives `e^{λπ_d} ≤ (e^{λπ_a} + e^{λπ_b})/2`, hence
//! `p_d ≤ 1/3`. Domination by an uneven mixture of two actions is detected as
//! well; for those the bound is checked on the trace rather than implied.

use game_core::{Game, Q};
use num_traits::{One, Signed, Zero};

use crate::{QreError, QrePoint};

/// Slack allowed on traced probabilities.
pub const BOUND_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairDomination {
    pub player: usize,
    pub dominated: usize,
    pub mix: [usize; 2],
    /// Weight on `mix[0]`: one half when that works, else the midpoint of the
    /// feasible weights.
    pub weight: Q,
    /// Feasible weights on `mix[0]`.
    pub weights: (Q, Q),
}

impl PairDomination {
    /// Whether the fifty-fifty mixture dominates, so the bound is a theorem.
    pub fn even(&self) -> bool {
        self.weight == Q::new(1.into(), 2.into())
    }
}

/// Weights `w ∈ (0, 1)` with `d ≤ w·a + (1−w)·b` in every cell.
fn feasible(d: &[&Q], a: &[&Q], b: &[&Q]) -> Option<(Q, Q)> {
    let (mut lo, mut hi) = (Q::zero(), Q::one());
    for c in 0..d.len() {
        // w (a − b) ≥ d − b
        let slope = a[c] - b[c];
        let need = d[c] - b[c];
        if slope.is_zero() {
            if need.is_positive() {
                return None;
            }
        } else if slope.is_positive() {
            lo = lo.max(need / slope);
        } else {
            hi = hi.min(need / slope);
        }
    }
    (lo < hi || (lo == hi && lo.is_positive() && lo < Q::one())).then_some((lo, hi))
}

/// All (player, action, pair) where the action is weakly dominated by a
/// mixture of the pair that puts positive weight on both, checked exactly.
pub fn dominated_pairs(game: &Game) -> Vec<PairDomination> {
    let half = Q::new(1.into(), 2.into());
    let mut out = Vec::new();
    for i in 0..game.num_players() {
        let k = game.actions(i);
        if k < 3 {
            continue;
        }
        // payoffs by own action, one entry per opponent profile
        let mut rows: Vec<Vec<&Q>> = vec![Vec::new(); k];
        for idx in 0..game.num_cells() {
            let prof = game.profile(idx);
            rows[prof[i]].push(game.payoff(i, &prof));
        }
        for d in 0..k {
            for a in 0..k {
                for b in a + 1..k {
                    if a == d || b == d {
                        continue;
                    }
                    if let Some((lo, hi)) = feasible(&rows[d], &rows[a], &rows[b]) {
                        let weight = if lo <= half && half <= hi {
                            half.clone()
                        } else {
                            (&lo + &hi) / Q::from_integer(2.into())
                        };
                        out.push(PairDomination {
                            player: i,
                            dominated: d,
                            mix: [a, b],
                            weight,
                            weights: (lo, hi),
                        });
                    }
                }
            }
        }
    }
    out
}

/// Whether every traced point keeps each pair-dominated action at or below
/// one third.
pub fn logit_dominated_bound_check(game: &Game, trace: &[QrePoint]) -> Result<bool, QreError> {
    let doms = dominated_pairs(game);
    if doms.is_empty() {
        return Err(QreError::NotApplicable(
            "no action is dominated by a mixture of two others".into(),
        ));
    }
    Ok(trace.iter().all(|p| {
        doms.iter()
            .all(|d| p.profile[d.player][d.dominated] <= 1.0 / 3.0 + BOUND_SLACK)
    }))
}
