//! Reference equilibria: pure and mixed Nash equilibria and BEAUNE.
//!
//! Mixed equilibria of two-player games come from support enumeration. For a
//! pair of candidate supports `(S1, S2)` the equilibrium profiles form a product
//! of two closed polytopes: `σ1` lives on `S1` and makes every action of `S2`
//! optimal for player 2, and symmetrically for `σ2`. Products that are single
//! points are isolated equilibria; larger products are reported as continua by
//! their vertices.

use std::cmp::Ordering;

use game_core::{
    best_response, expected_payoffs_at, polytope::in_simplex, pure, Constraint, Game, Polytope, Scalar, WeakOrder, Q,
};
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Largest action count handled by support enumeration.
pub const MAX_ACTIONS: usize = 4;

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum NashError {
    #[error("capability: {0}")]
    Capability(String),
    #[error("shape error: {0}")]
    Shape(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NashKind {
    Pure,
    Mixed,
    DegenerateMixed,
}

/// An isolated equilibrium.
#[derive(Debug, Clone, PartialEq)]
pub struct NashPoint {
    pub profile: Vec<Vec<Q>>,
    pub kind: NashKind,
    pub support: Vec<Vec<usize>>,
}

impl NashPoint {
    pub fn new(profile: Vec<Vec<Q>>) -> Self {
        let support: Vec<Vec<usize>> = profile
            .iter()
            .map(|s| (0..s.len()).filter(|&k| !s[k].is_zero()).collect())
            .collect();
        let all_pure = support.iter().all(|s| s.len() == 1);
        let interior = support.iter().zip(&profile).all(|(s, p)| s.len() == p.len());
        let kind = if all_pure {
            NashKind::Pure
        } else if interior {
            NashKind::Mixed
        } else {
            NashKind::DegenerateMixed
        };
        NashPoint {
            profile,
            kind,
            support,
        }
    }
}

/// A flagged continuum of equilibria: the convex hull of `vertices` (each a
/// full profile) consists of equilibria.
#[derive(Debug, Clone, PartialEq)]
pub struct NashContinuum {
    pub vertices: Vec<Vec<Vec<Q>>>,
    pub dimension: usize,
}

/// All equilibria found by support enumeration.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct NashSet {
    pub points: Vec<NashPoint>,
    pub continua: Vec<NashContinuum>,
}

impl NashSet {
    /// Whether the profile is one of the points or lies in a continuum's hull.
    pub fn contains(&self, profile: &[Vec<Q>]) -> bool {
        self.points.iter().any(|p| p.profile == profile)
            || self.continua.iter().any(|c| continuum_contains(c, profile))
    }
}

/// Whether every player's mixed action is a best response to the others,
/// exactly.
pub fn is_nash(game: &Game, profile: &[Vec<Q>]) -> bool {
    (0..game.num_players()).all(|i| {
        let pi = expected_payoffs_at(game, i, profile);
        let best = pi.iter().max().expect("nonempty");
        profile[i]
            .iter()
            .zip(&pi)
            .all(|(w, v)| w.is_zero() || v == best)
    })
}

/// All pure-strategy equilibria, in flat profile order.
pub fn pure_nash(game: &Game) -> Vec<NashPoint> {
    (0..game.num_cells())
        .filter_map(|idx| {
            let prof = game.profile(idx);
            let ok = (0..game.num_players()).all(|i| {
                let mine = game.payoff_tensor(i)[idx].clone();
                (0..game.actions(i)).all(|a| {
                    let mut dev = prof.clone();
                    dev[i] = a;
                    *game.payoff(i, &dev) <= mine
                })
            });
            ok.then(|| {
                NashPoint::new(
                    prof.iter()
                        .enumerate()
                        .map(|(i, &a)| pure(game.actions(i), a))
                        .collect(),
                )
            })
        })
        .collect()
}

fn check_bimatrix(game: &Game) -> Result<(), NashError> {
    if game.num_players() != 2 {
        return Err(NashError::Capability(
            "mixed equilibria are computed for two-player games only".into(),
        ));
    }
    if game.action_counts().iter().any(|&k| k > MAX_ACTIONS) {
        return Err(NashError::Capability(format!(
            "support enumeration handles at most {MAX_ACTIONS} actions per player"
        )));
    }
    Ok(())
}

fn subsets(k: usize) -> Vec<Vec<usize>> {
    (1u32..(1 << k))
        .map(|m| (0..k).filter(|&j| m & (1 << j) != 0).collect())
        .collect()
}

/// Polytope of own strategies `x` (on `own_support`) that make every action in
/// `opp_support` optimal for the opponent, whose payoff matrix is `m`
/// (`m[opp action][own action]`).
fn support_polytope(m: &[Vec<Q>], own_k: usize, own_support: &[usize], opp_support: &[usize]) -> Polytope<Q> {
    let mut p = Polytope::simplex(own_k);
    for k in (0..own_k).filter(|k| !own_support.contains(k)) {
        let mut a = vec![Q::zero(); own_k];
        a[k] = Q::one();
        p.add(Constraint::eq(a, Q::zero()));
    }
    let base = opp_support[0];
    for l in 0..m.len() {
        if l == base {
            continue;
        }
        let a: Vec<Q> = (0..own_k).map(|k| &m[base][k] - &m[l][k]).collect();
        if opp_support.contains(&l) {
            p.add(Constraint::eq(a, Q::zero()));
        } else {
            p.add(Constraint::ge(a, Q::zero()));
        }
        if p.is_empty() {
            break;
        }
    }
    p
}

fn continuum_contains(c: &NashContinuum, profile: &[Vec<Q>]) -> bool {
    // hull membership over the product: each player's part must lie in the hull
    // of that player's vertex parts
    (0..profile.len()).all(|i| {
        let parts: Vec<Vec<Q>> = c.vertices.iter().map(|v| v[i].clone()).collect();
        in_hull(&parts, &profile[i])
    })
}

/// Exact hull membership for a small vertex set.
fn in_hull(vertices: &[Vec<Q>], x: &[Q]) -> bool {
    let mut uniq: Vec<Vec<Q>> = Vec::new();
    for v in vertices {
        if !uniq.contains(v) {
            uniq.push(v.clone());
        }
    }
    // weights λ on the simplex over vertices with Σ λ_j v_j = x
    let n = uniq.len();
    let mut p = Polytope::simplex(n);
    for c in 0..x.len() {
        let a: Vec<Q> = uniq.iter().map(|v| v[c].clone()).collect();
        p.add(Constraint::eq(a, x[c].clone()));
        if p.is_empty() {
            return false;
        }
    }
    !p.is_empty()
}

fn assemble(points: Vec<Vec<Vec<Q>>>, mut continua: Vec<NashContinuum>) -> NashSet {
    continua.dedup();
    let mut kept: Vec<NashContinuum> = Vec::new();
    for (i, c) in continua.iter().enumerate() {
        let inside_other = continua.iter().enumerate().any(|(j, d)| {
            j != i
                && c.vertices.iter().all(|v| continuum_contains(d, v))
                && (d.dimension > c.dimension || (d.dimension == c.dimension && j < i))
        });
        if !inside_other && !kept.contains(c) {
            kept.push(c.clone());
        }
    }
    let mut out = NashSet {
        points: Vec::new(),
        continua: kept,
    };
    for p in points {
        if !out.contains(&p) {
            out.points.push(NashPoint::new(p));
        }
    }
    out.points.sort_by(|a, b| b.profile.partial_cmp(&a.profile).unwrap_or(Ordering::Equal));
    out
}

/// All equilibria of a two-player game with at most four actions per player.
pub fn mixed_nash_bimatrix(game: &Game) -> Result<NashSet, NashError> {
    check_bimatrix(game)?;
    let (k1, k2) = (game.actions(0), game.actions(1));
    let m1 = game.payoff_matrix(0);
    let m2 = game.payoff_matrix(1);
    let mut points = Vec::new();
    let mut continua = Vec::new();
    for s1 in subsets(k1) {
        for s2 in subsets(k2) {
            let p1 = support_polytope(&m2, k1, &s1, &s2);
            if p1.is_empty() {
                continue;
            }
            let p2 = support_polytope(&m1, k2, &s2, &s1);
            if p2.is_empty() {
                continue;
            }
            let (v1, v2) = (p1.vertices(), p2.vertices());
            if v1.len() == 1 && v2.len() == 1 {
                points.push(vec![v1[0].clone(), v2[0].clone()]);
            } else {
                let vertices = v1
                    .iter()
                    .flat_map(|a| v2.iter().map(move |b| vec![a.clone(), b.clone()]))
                    .collect();
                let dimension = p1.dimension().unwrap_or(0) + p2.dimension().unwrap_or(0);
                continua.push(NashContinuum { vertices, dimension });
            }
        }
    }
    Ok(assemble(points, continua))
}

/// Symmetric equilibria `(σ, σ)` of a symmetric two-player game.
pub fn symmetric_nash(game: &Game) -> Result<NashSet, NashError> {
    check_bimatrix(game)?;
    if !game.symmetric() {
        return Err(NashError::Shape("symmetric equilibria need a symmetric game".into()));
    }
    let k = game.actions(0);
    // the opponent's payoff against own σ is the row matrix read the same way
    let m = game.payoff_matrix(0);
    let mut points = Vec::new();
    let mut continua = Vec::new();
    for s in subsets(k) {
        let p = support_polytope(&m, k, &s, &s);
        match p.vertices() {
            [] => {}
            [v] => points.push(vec![v.clone(), v.clone()]),
            vs => continua.push(NashContinuum {
                vertices: vs.iter().map(|v| vec![v.clone(), v.clone()]).collect(),
                dimension: p.dimension().unwrap_or(0),
            }),
        }
    }
    Ok(assemble(points, continua))
}

/// Supporting beliefs of a BEAUNE.
#[derive(Debug, Clone)]
pub enum BeliefRegion {
    /// Two players: per player, a polytope in the opponent's simplex.
    Exact(Vec<Polytope<Q>>),
    /// More players: per player, sampled opponent profiles inside the region.
    Sampled(Vec<Vec<Vec<Vec<f64>>>>),
}

#[derive(Debug, Clone)]
pub struct Beaune {
    pub choice: Vec<Vec<Q>>,
    pub belief_set: BeliefRegion,
    /// Every player's choice is a best response to some belief with full
    /// support (trembling-hand perfection for two-player games).
    pub trembling_hand_perfect: bool,
}

impl Beaune {
    /// Closed belief set of a player (two-player case) as a polytope.
    pub fn belief_polytope(&self, player: usize) -> Option<&Polytope<Q>> {
        match &self.belief_set {
            BeliefRegion::Exact(ps) => ps.get(player),
            BeliefRegion::Sampled(_) => None,
        }
    }
}

/// Beliefs `β` of `player` (about a two-player opponent) whose set of best
/// responses equals `top`.
fn br_polytope(game: &Game, player: usize, top: &[usize]) -> Polytope<Q> {
    let m = game.payoff_matrix(player);
    let kk = game.actions(1 - player);
    let mut p = Polytope::simplex(kk);
    let base = top[0];
    for l in 0..m.len() {
        if l == base {
            continue;
        }
        let a: Vec<Q> = (0..kk).map(|c| &m[base][c] - &m[l][c]).collect();
        if top.contains(&l) {
            p.add(Constraint::eq(a, Q::zero()));
        } else {
            p.add(Constraint::gt(a, Q::zero()));
        }
    }
    p
}

/// BEAUNE of a choice profile: `None` unless the choice is a Nash profile.
/// Two-player games get exact belief polytopes; larger games a sampled region
/// (`samples` draws per player, seeded).
pub fn beaune(game: &Game, choice: &[Vec<Q>], samples: usize, seed: u64) -> Option<Beaune> {
    if choice.len() != game.num_players()
        || choice.iter().enumerate().any(|(i, s)| s.len() != game.actions(i) || !in_simplex(s))
        || !is_nash(game, choice)
    {
        return None;
    }
    let tops: Vec<Vec<usize>> = (0..game.num_players())
        .map(|i| WeakOrder::of(&expected_payoffs_at(game, i, choice)).top().to_vec())
        .collect();
    let thp = thp_check(game, choice);
    let belief_set = if game.num_players() == 2 {
        BeliefRegion::Exact(
            (0..2)
                .map(|i| {
                    let p = br_polytope(game, i, &tops[i]);
                    p.closed()
                })
                .collect(),
        )
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fchoice: Vec<Vec<f64>> = choice.iter().map(|s| s.iter().map(Scalar::to_f64).collect()).collect();
        BeliefRegion::Sampled(
            (0..game.num_players())
                .map(|i| {
                    let dims: Vec<usize> = (0..game.num_players())
                        .filter(|&j| j != i)
                        .map(|j| game.actions(j))
                        .collect();
                    let mut kept = Vec::new();
                    for _ in 0..samples {
                        let beliefs = game_core::sample::uniform_product(&mut rng, &dims);
                        let mut prof = fchoice.clone();
                        for (slot, j) in (0..game.num_players()).filter(|&j| j != i).enumerate() {
                            prof[j] = beliefs[slot].clone();
                        }
                        let pi = expected_payoffs_at(game, i, &prof);
                        if WeakOrder::of(&pi).top() == tops[i].as_slice() {
                            kept.push(beliefs);
                        }
                    }
                    kept
                })
                .collect(),
        )
    };
    Some(Beaune {
        choice: choice.to_vec(),
        belief_set,
        trembling_hand_perfect: thp,
    })
}

/// Whether each player's choice is a best response to some full-support
/// belief. Exact for two players; for more players, checked against products
/// of interior beliefs on a coarse lattice.
pub fn thp_check(game: &Game, choice: &[Vec<Q>]) -> bool {
    if game.num_players() == 2 {
        return (0..2).all(|i| {
            let m = game.payoff_matrix(i);
            let kk = game.actions(1 - i);
            let support: Vec<usize> = (0..choice[i].len()).filter(|&k| !choice[i][k].is_zero()).collect();
            let mut p = Polytope::simplex(kk);
            for c in 0..kk {
                let mut a = vec![Q::zero(); kk];
                a[c] = Q::one();
                p.add(Constraint::gt(a, Q::zero()));
            }
            for &s in &support {
                for l in 0..m.len() {
                    let a: Vec<Q> = (0..kk).map(|c| &m[s][c] - &m[l][c]).collect();
                    p.add(Constraint::ge(a, Q::zero()));
                }
            }
            p.is_feasible()
        });
    }
    // interior lattice points with denominator 8 for every opponent
    (0..game.num_players()).all(|i| {
        let support: Vec<usize> = (0..choice[i].len()).filter(|&k| !choice[i][k].is_zero()).collect();
        let opps: Vec<usize> = (0..game.num_players()).filter(|&j| j != i).collect();
        let grids: Vec<Vec<Vec<Q>>> = opps.iter().map(|&j| interior_lattice(game.actions(j), 8)).collect();
        let mut idx = vec![0usize; opps.len()];
        loop {
            let mut prof = choice.to_vec();
            for (slot, &j) in opps.iter().enumerate() {
                prof[j] = grids[slot][idx[slot]].clone();
            }
            let br = best_response(&expected_payoffs_at(game, i, &prof));
            if support.iter().all(|&s| br.vertices.contains(&pure(game.actions(i), s))) {
                return true;
            }
            let mut d = 0;
            loop {
                if d == idx.len() {
                    return false;
                }
                idx[d] += 1;
                if idx[d] < grids[d].len() {
                    break;
                }
                idx[d] = 0;
                d += 1;
            }
        }
    })
}

fn interior_lattice(k: usize, den: i64) -> Vec<Vec<Q>> {
    fn rec(k: usize, left: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if k == 1 {
            if left >= 1 {
                cur.push(left);
                out.push(cur.clone());
                cur.pop();
            }
            return;
        }
        for v in 1..left {
            cur.push(v);
            rec(k - 1, left - v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(k, den, &mut Vec::new(), &mut out);
    out.into_iter()
        .map(|w| w.into_iter().map(|x| game_core::q(x, den)).collect())
        .collect()
}
