//! Exact enumeration for two-player games.
//!
//! Pieces with every pair on the strict branch are the colorable sets, one per
//! color. The remaining pieces are lower-dimensional (or sit on payoff ties
//! that hold identically). Those inside the closure of a colorable set add
//! nothing and are dropped; the rest are deduplicated and merged into connected
//! components by closure intersection, each reported as its own M-equilibrium.

use std::collections::BTreeSet;

use game_core::{Game, Polytope, Q};
use num_traits::Zero;

use crate::markers::{attach, candidates};
use crate::pieces::{bimatrix_pieces, symmetric_pieces, Piece};
use crate::region::{Component, MEquilibrium, Measure, Representation, RegionSet, Space};
use crate::{MsetsError, Options, RankAssignment, MAX_EXACT_ACTIONS};

pub(crate) fn pieces(game: &Game, symmetric: bool, strict_only: bool) -> Result<Vec<Piece<Q>>, MsetsError> {
    if game.num_players() != 2 {
        return Err(MsetsError::Capability(format!(
            "exact mode needs two players, got {}",
            game.num_players()
        )));
    }
    if let Some(&k) = game.action_counts().iter().find(|&&k| k > MAX_EXACT_ACTIONS) {
        return Err(MsetsError::Capability(format!(
            "exact mode handles at most {MAX_EXACT_ACTIONS} actions per player, got {k}"
        )));
    }
    if symmetric && !game.symmetric() {
        return Err(MsetsError::NotSymmetric);
    }
    let m0 = game.payoff_matrix(0);
    Ok(if symmetric {
        symmetric_pieces(&m0, strict_only)
    } else {
        bimatrix_pieces(&m0, &game.payoff_matrix(1), strict_only)
    })
}

fn product_measure(factors: &[Polytope<Q>]) -> Q {
    factors.iter().fold(Q::from_integer(1.into()), |acc, p| acc * p.measure())
}

fn product_dimension(factors: &[Polytope<Q>]) -> usize {
    factors.iter().map(|p| p.dimension().unwrap_or(0)).sum()
}

/// Sorted closure vertices per factor; equal keys mean equal closures.
fn key(factors: &[Polytope<Q>]) -> Vec<Vec<Vec<Q>>> {
    factors
        .iter()
        .map(|p| {
            let mut v = p.vertices().to_vec();
            v.sort();
            v
        })
        .collect()
}

fn subset_closed(a: &[Polytope<Q>], b: &[Polytope<Q>]) -> bool {
    a.iter().zip(b).all(|(x, y)| x.subset_of_closed(y))
}

fn touches(a: &[Polytope<Q>], b: &[Polytope<Q>]) -> bool {
    a.iter().zip(b).all(|(x, y)| !x.intersect_closed(y).is_empty())
}

fn color_of(p: &Piece<Q>) -> RankAssignment {
    RankAssignment::new(p.orders.clone())
}

pub(crate) fn enumerate(game: &Game, opts: &Options) -> Result<Vec<MEquilibrium>, MsetsError> {
    let all = pieces(game, opts.symmetric, opts.colorable_only)?;
    let (choice_space, belief_space) = if opts.symmetric {
        (Space::SymmetricChoice, Space::SymmetricBelief)
    } else {
        (Space::Choice, Space::Belief)
    };
    let markers = candidates(game, opts.symmetric);
    let (mut strict, rest): (Vec<Piece<Q>>, Vec<Piece<Q>>) = all.into_iter().partition(|p| p.all_strict());
    strict.sort_by_key(color_of);

    let mut out = Vec::new();
    for p in &strict {
        let color = color_of(p);
        let choice_set = RegionSet {
            color: Some(color.clone()),
            colors: vec![color.clone()],
            space: choice_space,
            dimension: p.dimension(),
            measure: Measure::exact(product_measure(&p.choice)),
            representation: Representation::Exact(vec![p.choice.clone()]),
            boundary_markers: Vec::new(),
        };
        let belief_set = RegionSet {
            color: Some(color.clone()),
            colors: vec![color],
            space: belief_space,
            dimension: p.belief_dimension(),
            measure: Measure::exact(product_measure(&p.belief)),
            representation: Representation::Exact(vec![p.belief.clone()]),
            boundary_markers: Vec::new(),
        };
        out.push(MEquilibrium {
            choice_set,
            belief_set,
            colorable: true,
            components: vec![Component {
                dimension: p.dimension(),
                pieces: vec![p.choice.clone()],
            }],
            disconnected_warning: false,
        });
    }

    // lower-dimensional pieces outside every colorable closure, deduplicated
    let closures: Vec<Vec<Polytope<Q>>> = strict
        .iter()
        .map(|p| p.choice.iter().map(Polytope::closed).collect())
        .collect();
    let mut kept: Vec<(Vec<Vec<Vec<Q>>>, Piece<Q>, BTreeSet<RankAssignment>, Vec<Vec<Polytope<Q>>>)> = Vec::new();
    for p in rest {
        if closures.iter().any(|c| subset_closed(&p.choice, c)) {
            continue;
        }
        let k = key(&p.choice);
        let color = color_of(&p);
        match kept.iter_mut().find(|e| e.0 == k) {
            Some(e) => {
                e.2.insert(color);
                if !e.3.iter().any(|b| key(b) == key(&p.belief)) {
                    e.3.push(p.belief.clone());
                }
            }
            None => {
                let beliefs = vec![p.belief.clone()];
                kept.push((k, p, BTreeSet::from([color]), beliefs));
            }
        }
    }

    // connected components by closure intersection
    let n = kept.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        let mut j = i;
        while parent[j] != r {
            let next = parent[j];
            parent[j] = r;
            j = next;
        }
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            if find(&mut parent, i) != find(&mut parent, j) && touches(&kept[i].1.choice, &kept[j].1.choice) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_of: Vec<Option<usize>> = vec![None; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        match root_of[r] {
            Some(g) => groups[g].push(i),
            None => {
                root_of[r] = Some(groups.len());
                groups.push(vec![i]);
            }
        }
    }

    let mut extra = Vec::new();
    for g in groups {
        let colors: BTreeSet<RankAssignment> = g.iter().flat_map(|&i| kept[i].2.iter().cloned()).collect();
        let colors: Vec<RankAssignment> = colors.into_iter().collect();
        let choice_pieces: Vec<Vec<Polytope<Q>>> = g.iter().map(|&i| kept[i].1.choice.clone()).collect();
        let mut belief_pieces: Vec<Vec<Polytope<Q>>> = Vec::new();
        for &i in &g {
            for b in &kept[i].3 {
                if !belief_pieces.iter().any(|x| key(x) == key(b)) {
                    belief_pieces.push(b.clone());
                }
            }
        }
        let dimension = choice_pieces.iter().map(|p| product_dimension(p)).max().unwrap_or(0);
        let belief_dimension = belief_pieces.iter().map(|p| product_dimension(p)).max().unwrap_or(0);
        // pieces of a degenerate full-dimensional component may overlap; the
        // sum is then an upper bound
        let sum = |ps: &[Vec<Polytope<Q>>]| ps.iter().fold(Q::zero(), |acc, p| acc + product_measure(p));
        let choice_set = RegionSet {
            color: None,
            colors: colors.clone(),
            space: choice_space,
            dimension,
            measure: Measure::exact(sum(&choice_pieces)),
            representation: Representation::Exact(choice_pieces.clone()),
            boundary_markers: Vec::new(),
        };
        let belief_set = RegionSet {
            color: None,
            colors,
            space: belief_space,
            dimension: belief_dimension,
            measure: Measure::exact(sum(&belief_pieces)),
            representation: Representation::Exact(belief_pieces),
            boundary_markers: Vec::new(),
        };
        extra.push(MEquilibrium {
            choice_set,
            belief_set,
            colorable: false,
            components: vec![Component {
                dimension,
                pieces: choice_pieces,
            }],
            disconnected_warning: false,
        });
    }
    extra.sort_by(|a, b| {
        b.choice_set
            .dimension
            .cmp(&a.choice_set.dimension)
            .then_with(|| key(&a.choice_set.pieces()[0]).cmp(&key(&b.choice_set.pieces()[0])))
    });
    out.extend(extra);

    for m in &mut out {
        m.choice_set.boundary_markers = attach(game, &markers, m, opts.symmetric);
    }
    Ok(out)
}

/// Per-player belief factors of a color: opponent mixtures under which the
/// payoff order is strict and follows the color.
pub(crate) fn strict_beliefs(game: &Game, color: &RankAssignment, symmetric: bool) -> Vec<Polytope<Q>> {
    let players = if symmetric { 1 } else { 2 };
    (0..players)
        .map(|i| {
            let m = game.payoff_matrix(i);
            let mut p = Polytope::simplex(m[0].len());
            for (low, high) in crate::pieces::pairs(color.order(i)) {
                let c: Vec<Q> = m[high].iter().zip(&m[low]).map(|(x, y)| x - y).collect();
                p.add(game_core::Constraint::gt(c, Q::zero()));
            }
            p
        })
        .collect()
}
