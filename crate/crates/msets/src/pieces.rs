//! Branch pieces of the ordinal conditions for two-player games.
//!
//! For actions `a` ranked below `b` the choice condition holds in one of three
//! ways: strictly (`σ_a < σ_b` and `π_a < π_b`), through a payoff tie
//! (`π_a = π_b`), or with both actions unplayed. The belief condition follows
//! the same branch, with `π` evaluated at the belief. Every branch is linear in
//! the player's own mixture and in the opponent's mixture, so fixing a branch
//! for each pair yields polytopes: the own block for `σ_i` and the payoff block
//! in the opponent simplex, which is also the player's belief factor.

use game_core::{correspondence::permutations, Constraint, Polytope, Scalar};
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Branch {
    Strict,
    Tie,
    Unplayed,
}

const BRANCHES: [Branch; 3] = [Branch::Strict, Branch::Tie, Branch::Unplayed];

/// One player's half of a piece.
#[derive(Debug, Clone)]
pub struct Side<S> {
    pub order: Vec<usize>,
    pub branches: Vec<Branch>,
    /// Own mixtures in `Σ_r` meeting the own-coordinate part of each branch.
    pub own: Polytope<S>,
    /// Opponent mixtures meeting the payoff part of each branch.
    pub pay: Polytope<S>,
}

/// A product of polytopes on which every pair follows a fixed branch.
#[derive(Debug, Clone)]
pub struct Piece<S> {
    pub orders: Vec<Vec<usize>>,
    pub branches: Vec<Vec<Branch>>,
    /// One factor per player (a single shared factor in symmetric mode).
    pub choice: Vec<Polytope<S>>,
    /// Player `i`'s belief factor, in the opponent simplex.
    pub belief: Vec<Polytope<S>>,
}

impl<S: Scalar> Piece<S> {
    pub fn all_strict(&self) -> bool {
        self.branches.iter().flatten().all(|b| *b == Branch::Strict)
    }

    pub fn dimension(&self) -> usize {
        self.choice.iter().map(|p| p.dimension().unwrap_or(0)).sum()
    }

    pub fn belief_dimension(&self) -> usize {
        self.belief.iter().map(|p| p.dimension().unwrap_or(0)).sum()
    }

    pub fn contains_closed(&self, point: &[Vec<S>]) -> bool {
        self.choice.iter().zip(point).all(|(p, x)| p.contains_closed(x))
    }
}

/// Pairs `(low, high)` of an ascending order.
pub fn pairs(order: &[usize]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for s in 0..order.len() {
        for t in s + 1..order.len() {
            out.push((order[s], order[t]));
        }
    }
    out
}

fn unit<S: Scalar>(k: usize, a: usize) -> Vec<S> {
    game_core::pure(k, a)
}

/// `Σ_r`: mixtures weakly ordered along `order`.
pub fn order_region<S: Scalar>(order: &[usize]) -> Polytope<S> {
    let k = order.len();
    let mut p = Polytope::simplex(k);
    for w in order.windows(2) {
        let a: Vec<S> = (0..k)
            .map(|c| {
                if c == w[1] {
                    S::one()
                } else if c == w[0] {
                    -S::one()
                } else {
                    S::zero()
                }
            })
            .collect();
        p.add(Constraint::ge(a, S::zero()));
    }
    p
}

/// Add the own-coordinate part of a branch. Returns false when infeasible.
fn add_own<S: Scalar>(p: &mut Polytope<S>, low: usize, high: usize, b: Branch) -> bool {
    let k = p.ambient();
    match b {
        Branch::Strict => {
            let a: Vec<S> = unit::<S>(k, high)
                .into_iter()
                .zip(unit::<S>(k, low))
                .map(|(x, y)| x - y)
                .collect();
            p.add(Constraint::gt(a, S::zero()));
        }
        Branch::Tie => return true,
        Branch::Unplayed => {
            p.add(Constraint::eq(unit(k, low), S::zero()));
            p.add(Constraint::eq(unit(k, high), S::zero()));
        }
    }
    p.is_feasible()
}

/// Add the payoff part of a branch; `m[own][opp]`.
fn add_pay<S: Scalar>(p: &mut Polytope<S>, m: &[Vec<S>], low: usize, high: usize, b: Branch) -> bool {
    let c: Vec<S> = m[high].iter().zip(&m[low]).map(|(x, y)| x.clone() - y.clone()).collect();
    let flat = c.iter().all(|v| v.is_zero_tie());
    match b {
        Branch::Strict if flat => return false,
        Branch::Strict => p.add(Constraint::gt(c, S::zero())),
        Branch::Tie if flat => return true,
        Branch::Tie => p.add(Constraint::eq(c, S::zero())),
        Branch::Unplayed => return true,
    }
    p.is_feasible()
}

/// All feasible sides of a player with payoff matrix `m[own][opp]`.
///
/// With `shared`, own and payoff constraints act on the same simplex
/// (symmetric mode) and are collected in `own`.
pub fn sides<S: Scalar>(m: &[Vec<S>], strict_only: bool, shared: bool) -> Vec<Side<S>> {
    let k_own = m.len();
    let k_opp = m[0].len();
    let choices: &[Branch] = if strict_only { &BRANCHES[..1] } else { &BRANCHES };
    let orders = permutations(&(0..k_own).collect::<Vec<_>>());
    orders
        .into_par_iter()
        .flat_map_iter(|order| {
            let ps = pairs(&order);
            let mut out = Vec::new();
            let mut stack = vec![(order_region::<S>(&order), Polytope::<S>::simplex(k_opp), Vec::new())];
            while let Some((own, pay, branches)) = stack.pop() {
                if branches.len() == ps.len() {
                    out.push(Side {
                        order: order.clone(),
                        branches,
                        own,
                        pay,
                    });
                    continue;
                }
                let (low, high) = ps[branches.len()];
                for &b in choices {
                    let mut own2 = own.clone();
                    if !add_own(&mut own2, low, high, b) {
                        continue;
                    }
                    let mut pay2 = pay.clone();
                    let ok = if shared {
                        add_pay(&mut own2, m, low, high, b)
                    } else {
                        add_pay(&mut pay2, m, low, high, b)
                    };
                    if !ok {
                        continue;
                    }
                    let mut br = branches.clone();
                    br.push(b);
                    stack.push((own2, pay2, br));
                }
            }
            out.reverse();
            out
        })
        .collect()
}

/// Intersection keeping strict constraints strict.
pub fn meet<S: Scalar>(a: &Polytope<S>, b: &Polytope<S>) -> Polytope<S> {
    let mut p = a.clone();
    for c in b.constraints() {
        p.add(c.clone());
    }
    p
}

/// Pieces of a two-player game, `m1[a][b]` and `m2[b][a]` the players' own-first matrices.
pub fn bimatrix_pieces<S: Scalar>(m1: &[Vec<S>], m2: &[Vec<S>], strict_only: bool) -> Vec<Piece<S>> {
    let l1 = sides(m1, strict_only, false);
    let l2 = sides(m2, strict_only, false);
    join(&l1, &l2)
}

/// Combine two players' sides into nonempty pieces.
pub fn join<S: Scalar>(l1: &[Side<S>], l2: &[Side<S>]) -> Vec<Piece<S>> {
    l1.par_iter()
        .flat_map_iter(|s1| {
            l2.iter().filter_map(move |s2| {
                let f1 = meet(&s1.own, &s2.pay);
                if !f1.is_feasible() {
                    return None;
                }
                let f2 = meet(&s2.own, &s1.pay);
                if !f2.is_feasible() {
                    return None;
                }
                Some(Piece {
                    orders: vec![s1.order.clone(), s2.order.clone()],
                    branches: vec![s1.branches.clone(), s2.branches.clone()],
                    choice: vec![f1, f2],
                    belief: vec![s1.pay.clone(), s2.pay.clone()],
                })
            })
        })
        .collect()
}

/// Symmetric pieces `(σ, σ)` of a symmetric game with row matrix `m`.
pub fn symmetric_pieces<S: Scalar>(m: &[Vec<S>], strict_only: bool) -> Vec<Piece<S>> {
    sides(m, strict_only, true)
        .into_iter()
        .map(|s| {
            // the belief factor repeats the payoff constraints on a fresh simplex
            let mut belief = Polytope::simplex(m.len());
            for (&(low, high), &b) in pairs(&s.order).iter().zip(&s.branches) {
                add_pay(&mut belief, m, low, high, b);
            }
            Piece {
                orders: vec![s.order],
                branches: vec![s.branches],
                choice: vec![s.own],
                belief: vec![belief],
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use game_core::{qi, Q};

    fn mat(rows: &[&[i64]]) -> Vec<Vec<Q>> {
        rows.iter().map(|r| r.iter().map(|&v| qi(v)).collect()).collect()
    }

    #[test]
    fn pair_listing() {
        assert_eq!(pairs(&[2, 0, 1]), vec![(2, 0), (2, 1), (0, 1)]);
    }

    #[test]
    fn matching_pennies_has_only_the_center() {
        let m1 = mat(&[&[1, -1], &[-1, 1]]);
        let m2 = mat(&[&[-1, 1], &[1, -1]]);
        let ps = bimatrix_pieces(&m1, &m2, false);
        assert!(!ps.is_empty());
        assert!(ps.iter().all(|p| !p.all_strict() && p.dimension() == 0));
        let half = vec![game_core::q(1, 2), game_core::q(1, 2)];
        assert!(ps.iter().all(|p| p.choice.iter().all(|f| f.vertices() == [half.clone()])));
    }
}
