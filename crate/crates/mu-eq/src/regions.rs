//! Weak-order regions of the opponent simplex and the `rank^μ` value on each.

use game_core::{Constraint, Polytope, Scalar, WeakOrder};

/// All weak orders (ordered set partitions) of `0..k`, lowest block first.
pub fn weak_orders(k: usize) -> Vec<WeakOrder> {
    fn go(rest: &[usize], prefix: &mut Vec<Vec<usize>>, out: &mut Vec<WeakOrder>) {
        if rest.is_empty() {
            out.push(WeakOrder::from_blocks(prefix.clone()));
            return;
        }
        let m = rest.len();
        for mask in 1u32..(1 << m) {
            let (block, left): (Vec<usize>, Vec<usize>) = (0..m).partition(|&t| mask & (1 << t) != 0);
            prefix.push(block.iter().map(|&t| rest[t]).collect());
            let left: Vec<usize> = left.iter().map(|&t| rest[t]).collect();
            go(&left, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(&(0..k).collect::<Vec<_>>(), &mut Vec::new(), &mut out);
    out
}

/// Beliefs (opponent mixtures) under which the payoffs `m[own][opp]` have
/// weak order `order`, or `None` when no belief does.
pub fn payoff_region<S: Scalar>(m: &[Vec<S>], order: &WeakOrder) -> Option<Polytope<S>> {
    let k_opp = m[0].len();
    let mut p = Polytope::simplex(k_opp);
    let diff = |hi: usize, lo: usize| -> Vec<S> { m[hi].iter().zip(&m[lo]).map(|(x, y)| x.clone() - y.clone()).collect() };
    let blocks = order.blocks();
    let mut add = |c: Vec<S>, strict: bool| -> bool {
        if c.iter().all(Scalar::is_zero_tie) {
            return !strict;
        }
        p.add(if strict { Constraint::gt(c, S::zero()) } else { Constraint::eq(c, S::zero()) });
        true
    };
    for b in blocks {
        for w in b.windows(2) {
            if !add(diff(w[1], w[0]), false) {
                return None;
            }
        }
    }
    for w in blocks.windows(2) {
        if !add(diff(w[1][0], w[0][0]), true) {
            return None;
        }
    }
    p.is_feasible().then_some(p)
}

/// `rank^μ` on payoffs with weak order `order`: the product over tied blocks
/// of the permutahedra of the `μ` values handed to each block.
pub fn rank_mu_polytope<S: Scalar>(mu: &[S], order: &WeakOrder) -> Polytope<S> {
    let k = mu.len();
    let mut sorted = mu.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let mut p = Polytope::simplex(k);
    let mut pos = 0;
    for b in order.blocks() {
        let vals = &sorted[pos..pos + b.len()];
        pos += b.len();
        let indicator = |set: &[usize]| -> Vec<S> { (0..k).map(|c| if set.contains(&c) { S::one() } else { S::zero() }).collect() };
        let total = vals.iter().fold(S::zero(), |acc, v| acc + v.clone());
        p.add(Constraint::eq(indicator(b), total));
        let m = b.len();
        for mask in 1u32..(1 << m) - 1 {
            let sub: Vec<usize> = (0..m).filter(|t| mask & (1 << t) != 0).map(|t| b[t]).collect();
            let least = vals[..sub.len()].iter().fold(S::zero(), |acc, v| acc + v.clone());
            p.add(Constraint::ge(indicator(&sub), least));
        }
    }
    p
}
