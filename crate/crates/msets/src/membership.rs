//! Point membership under either definition.
//!
//! Definition 2 checks, for every player and pair `k, l`:
//!
//! - choice: `(σ_k−σ_l)(π_k(σ^c)−π_l(σ^c)) > 0`, or a payoff tie, or both unplayed;
//! - belief: `(π_k(σ^c)−π_l(σ^c))(π_k(σ^b)−π_l(σ^b)) > 0`, or a belief tie, or both unplayed.
//!
//! Definition 1 asks `rank(σ^c) ⊆ rank(π(σ^b)) = rank(π(σ^c))`: the two payoff
//! vectors share a weak order, ties in `σ` are payoff ties and a strictly
//! larger probability never goes with a strictly smaller payoff.

use std::cmp::Ordering;

use game_core::{expected_payoffs, expected_payoffs_at, Game, Scalar, WeakOrder};

use crate::{MsetsError, RankAssignment};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
pub enum Definition {
    #[serde(rename = "1")]
    One,
    #[default]
    #[serde(rename = "2")]
    Two,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Membership {
    pub member: bool,
    /// Set for members whose mixtures are strictly ordered.
    pub color: Option<RankAssignment>,
    /// Some equality branch is active.
    pub boundary: bool,
}

fn sgn<S: Scalar>(a: &S, b: &S) -> Ordering {
    a.cmp_tie(b)
}

/// `belief[i]` lists player `i`'s beliefs about each opponent, in player order.
pub fn membership<S: Scalar>(
    game: &Game,
    choice: &[Vec<S>],
    belief: &[Vec<Vec<S>>],
    definition: Definition,
) -> Result<Membership, MsetsError> {
    let n = game.num_players();
    if choice.len() != n || belief.len() != n {
        return Err(MsetsError::Shape(format!("expected {n} choice and belief entries")));
    }
    for (i, s) in choice.iter().enumerate() {
        if s.len() != game.actions(i) {
            return Err(MsetsError::Shape(format!("player {} mixes over {} actions", i + 1, game.actions(i))));
        }
    }
    let mut member = true;
    let mut boundary = false;
    for i in 0..n {
        let refs: Vec<&[S]> = belief[i].iter().map(Vec::as_slice).collect();
        let pb = expected_payoffs(game, i, &refs).map_err(|e| MsetsError::Shape(e.to_string()))?;
        let pc = expected_payoffs_at(game, i, choice);
        let s = &choice[i];
        let (ok, edge) = match definition {
            Definition::Two => check_two(s, &pc, &pb),
            Definition::One => check_one(s, &pc, &pb),
        };
        member &= ok;
        boundary |= edge;
    }
    let color = if member {
        choice
            .iter()
            .map(|s| {
                let o = WeakOrder::of(s);
                o.is_strict().then(|| o.blocks().iter().map(|b| b[0]).collect::<Vec<_>>())
            })
            .collect::<Option<Vec<_>>>()
            .map(RankAssignment::new)
    } else {
        None
    };
    Ok(Membership { member, color, boundary })
}

/// Symmetric profile `(σ, …, σ)` with every player believing `β` of everyone.
pub fn membership_symmetric<S: Scalar>(
    game: &Game,
    choice: &[S],
    belief: &[S],
    definition: Definition,
) -> Result<Membership, MsetsError> {
    let n = game.num_players();
    let c = vec![choice.to_vec(); n];
    let b = vec![vec![belief.to_vec(); n - 1]; n];
    let mut m = membership(game, &c, &b, definition)?;
    m.color = m.color.map(|c| RankAssignment::new(vec![c.order(0).to_vec()]));
    Ok(m)
}

fn check_two<S: Scalar>(s: &[S], pc: &[S], pb: &[S]) -> (bool, bool) {
    let mut edge = false;
    for k in 0..s.len() {
        for l in k + 1..s.len() {
            let ds = sgn(&s[k], &s[l]);
            let dc = sgn(&pc[k], &pc[l]);
            let db = sgn(&pb[k], &pb[l]);
            let unplayed = s[k].is_zero_tie() && s[l].is_zero_tie();
            let strict_c = ds != Ordering::Equal && ds == dc;
            if !strict_c {
                if dc == Ordering::Equal || unplayed {
                    edge = true;
                } else {
                    return (false, edge);
                }
            }
            let strict_b = dc != Ordering::Equal && dc == db;
            if !strict_b {
                if db == Ordering::Equal || unplayed {
                    edge = true;
                } else {
                    return (false, edge);
                }
            }
        }
    }
    (true, edge)
}

fn check_one<S: Scalar>(s: &[S], pc: &[S], pb: &[S]) -> (bool, bool) {
    let edge = !WeakOrder::of(s).is_strict() || !WeakOrder::of(pc).is_strict();
    if WeakOrder::of(pc) != WeakOrder::of(pb) {
        return (false, edge);
    }
    for k in 0..s.len() {
        for l in 0..s.len() {
            if k == l {
                continue;
            }
            let ds = sgn(&s[k], &s[l]);
            let dc = sgn(&pc[k], &pc[l]);
            let ok = match ds {
                Ordering::Equal => dc == Ordering::Equal,
                Ordering::Greater => dc != Ordering::Less,
                Ordering::Less => dc != Ordering::Greater,
            };
            if !ok {
                return (false, edge);
            }
        }
    }
    (true, edge)
}
