//! μ-equilibria: fixed points `σ^c ∈ rank^μ(π(σ^b))` with their supporting
//! belief sets.
//!
//! In two-player games each player's opponent simplex splits into finitely
//! many regions by the weak order of that player's payoffs, and `rank^μ` is a
//! fixed polytope on each region. The fixed points are therefore a finite
//! union of polytope products, one per pair of weak orders, computed exactly.
//! Games with three or more players use the permutation candidates, plus a
//! Newton search for fixed points on payoff ties in floating-point mode.

pub mod meta;
pub mod regions;
pub mod sweep;
mod ties;

use std::collections::BTreeMap;

use game_core::{expected_payoffs, expected_payoffs_at, rank_mu, sample::uniform_simplex, Constraint, Game, Polytope, Scalar, WeakOrder, Q};
use msets::{Measure, RankAssignment, RegionSet, Representation, Space};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub use meta::{verify_meta_inclusion, MetaReport};
pub use regions::{payoff_region, rank_mu_polytope, weak_orders};
pub use sweep::{sweep_correspondence, BranchLabel, CorrespondencePath, Event, Record, SweepOptions};

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum MuError {
    #[error("shape error: {0}")]
    Shape(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("capability: {0}")]
    Capability(String),
}

/// Belief sampling used for games with three or more players.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MuOptions {
    pub samples: usize,
    pub seed: u64,
}

impl Default for MuOptions {
    fn default() -> Self {
        MuOptions { samples: 10_000, seed: 0 }
    }
}

/// One product piece of a μ-equilibrium: per player the weak payoff order,
/// the choice polytope, and (two players) the belief polytope.
#[derive(Debug, Clone)]
pub struct MuPiece<S> {
    pub orders: Vec<WeakOrder>,
    pub choice: Vec<Polytope<S>>,
}

#[derive(Debug, Clone)]
pub struct MuEquilibrium<S> {
    pub mu: Vec<Vec<S>>,
    pub pieces: Vec<MuPiece<S>>,
    /// Beliefs `σ^b` with `rank^μ(π(σ^b)) = rank^μ(π(σ^c))`, per piece.
    pub belief_set: RegionSet,
    /// Strict payoff orders shared by the whole component.
    pub color: Option<RankAssignment>,
    /// Affine dimension of the choice closure.
    pub dimension: usize,
}

fn cartesian<S: Clone>(factors: &[Vec<Vec<S>>]) -> Vec<Vec<Vec<S>>> {
    factors.iter().fold(vec![Vec::new()], |acc, f| {
        acc.iter()
            .flat_map(|prefix| {
                f.iter().map(move |v| {
                    let mut p = prefix.clone();
                    p.push(v.clone());
                    p
                })
            })
            .collect()
    })
}

impl<S: Scalar> MuEquilibrium<S> {
    /// Vertices of the choice closure (union over pieces, deduplicated).
    pub fn vertices(&self) -> Vec<Vec<Vec<S>>> {
        let mut out: Vec<Vec<Vec<S>>> = Vec::new();
        for piece in &self.pieces {
            let f: Vec<Vec<Vec<S>>> = piece.choice.iter().map(|p| p.vertices().to_vec()).collect();
            for v in cartesian(&f) {
                if !out.iter().any(|w| same(w, &v)) {
                    out.push(v);
                }
            }
        }
        out.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
        out
    }

    /// The profile of a point equilibrium.
    pub fn point(&self) -> Option<Vec<Vec<S>>> {
        (self.dimension == 0).then(|| self.vertices().remove(0))
    }

    /// Whether the choice closure contains `profile`.
    pub fn contains_closed(&self, profile: &[Vec<S>]) -> bool {
        self.pieces
            .iter()
            .any(|p| p.choice.iter().zip(profile).all(|(f, x)| f.contains_closed(x)))
    }

    /// Mean of the vertices: a representative profile.
    pub fn center(&self) -> Vec<Vec<f64>> {
        let vs = self.vertices();
        let n = vs.len() as f64;
        let mut c: Vec<Vec<f64>> = vs[0].iter().map(|x| vec![0.0; x.len()]).collect();
        for v in &vs {
            for (ci, vi) in c.iter_mut().zip(v) {
                for (a, b) in ci.iter_mut().zip(vi) {
                    *a += b.to_f64() / n;
                }
            }
        }
        c
    }
}

fn same<S: Scalar>(a: &[Vec<S>], b: &[Vec<S>]) -> bool {
    a.iter().flatten().zip(b.iter().flatten()).all(|(x, y)| x.cmp_tie(y).is_eq())
}

/// `μ(ρ)` for every player, exact for integer exponents.
pub fn mu_power_exact(game: &Game, rho: u32) -> Vec<Vec<Q>> {
    game.action_counts().iter().map(|&k| game_core::mu_power_exact(k, rho)).collect()
}

pub fn mu_power_f64(game: &Game, rho: f64) -> Vec<Vec<f64>> {
    game.action_counts().iter().map(|&k| game_core::mu_power_f64(k, rho)).collect()
}

fn check_mu<S: Scalar>(game: &Game, mu: &[Vec<S>]) -> Result<(), MuError> {
    if mu.len() != game.num_players() {
        return Err(MuError::Shape(format!("expected {} μ vectors", game.num_players())));
    }
    for (i, m) in mu.iter().enumerate() {
        if m.len() != game.actions(i) {
            return Err(MuError::Shape(format!("μ for player {} needs {} entries", i + 1, game.actions(i))));
        }
        if !game_core::is_distribution(m) {
            return Err(MuError::Invalid(format!("μ for player {} is not a distribution", i + 1)));
        }
    }
    Ok(())
}

pub fn mu_equilibria<S: Scalar>(game: &Game, mu: &[Vec<S>]) -> Result<Vec<MuEquilibrium<S>>, MuError> {
    mu_equilibria_with(game, mu, &MuOptions::default())
}

/// All μ-equilibria, as connected components of the fixed-point set. Points
/// come first, then higher-dimensional components; ties broken by profile.
pub fn mu_equilibria_with<S: Scalar>(game: &Game, mu: &[Vec<S>], opts: &MuOptions) -> Result<Vec<MuEquilibrium<S>>, MuError> {
    check_mu(game, mu)?;
    let mut out = if game.num_players() == 2 {
        bimatrix(game, mu)
    } else {
        candidates(game, mu, opts)
    };
    out.sort_by(|a, b| {
        a.dimension
            .cmp(&b.dimension)
            .then_with(|| a.vertices().partial_cmp(&b.vertices()).unwrap_or(std::cmp::Ordering::Equal))
    });
    Ok(out)
}

/// Belief regions per player and weak order; depends on the game only.
pub(crate) struct Regions {
    pub per_player: Vec<Vec<(WeakOrder, Polytope<Q>)>>,
}

impl Regions {
    pub fn new(game: &Game) -> Self {
        let per_player = (0..2)
            .map(|i| {
                let m = game.payoff_matrix(i);
                weak_orders(game.actions(i))
                    .into_iter()
                    .filter_map(|w| payoff_region(&m, &w).map(|p| (w, p)))
                    .collect()
            })
            .collect();
        Regions { per_player }
    }
}

fn convert<S: Scalar>(p: &Polytope<Q>) -> Polytope<S> {
    Polytope::from_constraints(
        p.ambient(),
        p.constraints().iter().map(|c| Constraint {
            a: c.a.iter().map(S::from_q).collect(),
            rel: c.rel,
            b: S::from_q(&c.b),
        }),
    )
}

fn meet<S: Scalar>(a: &Polytope<S>, b: &Polytope<S>) -> Polytope<S> {
    let mut p = a.clone();
    for c in b.constraints() {
        p.add(c.clone());
    }
    p
}

fn bimatrix<S: Scalar>(game: &Game, mu: &[Vec<S>]) -> Vec<MuEquilibrium<S>> {
    let regions = Regions::new(game);
    solve(&regions, mu)
}

pub(crate) fn solve<S: Scalar>(regions: &Regions, mu: &[Vec<S>]) -> Vec<MuEquilibrium<S>> {
    // sides[i]: (order of player i, own choice polytope, region of that order in
    // the opponent's simplex)
    let sides: Vec<Vec<(WeakOrder, Polytope<S>, Polytope<Q>, Polytope<S>)>> = (0..2)
        .map(|i| {
            regions.per_player[i]
                .iter()
                .map(|(w, r)| (w.clone(), rank_mu_polytope(&mu[i], w), r.clone(), convert::<S>(r)))
                .collect()
        })
        .collect();
    let pairs: Vec<(usize, usize)> = (0..sides[0].len())
        .flat_map(|a| (0..sides[1].len()).map(move |b| (a, b)))
        .collect();
    let pieces: Vec<(MuPiece<S>, Vec<Polytope<Q>>)> = pairs
        .par_iter()
        .filter_map(|&(a, b)| {
            let (w0, v0, r0q, r0) = &sides[0][a];
            let (w1, v1, r1q, r1) = &sides[1][b];
            // Row's choice must induce Column's order, and vice versa
            let c0 = meet(v0, r1);
            if !c0.is_feasible() {
                return None;
            }
            let c1 = meet(v1, r0);
            if !c1.is_feasible() {
                return None;
            }
            Some((
                MuPiece {
                    orders: vec![w0.clone(), w1.clone()],
                    choice: vec![c0, c1],
                },
                vec![r0q.clone(), r1q.clone()],
            ))
        })
        .collect();
    components(mu, pieces)
}

fn closures_meet<S: Scalar>(a: &[Polytope<S>], b: &[Polytope<S>]) -> bool {
    a.iter().zip(b).all(|(x, y)| !x.intersect_closed(y).is_empty())
}

fn components<S: Scalar>(mu: &[Vec<S>], pieces: Vec<(MuPiece<S>, Vec<Polytope<Q>>)>) -> Vec<MuEquilibrium<S>> {
    let n = pieces.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for a in 0..n {
        for b in a + 1..n {
            if closures_meet(&pieces[a].0.choice, &pieces[b].0.choice) {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent[ra] = rb;
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for a in 0..n {
        groups.entry(find(&mut parent, a)).or_default().push(a);
    }
    groups
        .into_values()
        .map(|idx| {
            let members: Vec<&(MuPiece<S>, Vec<Polytope<Q>>)> = idx.iter().map(|&a| &pieces[a]).collect();
            let dimension = members
                .iter()
                .map(|(p, _)| p.choice.iter().map(|f| f.dimension().unwrap_or(0)).sum::<usize>())
                .max()
                .unwrap_or(0);
            let beliefs: Vec<Vec<Polytope<Q>>> = members.iter().map(|(_, b)| b.clone()).collect();
            let measure = beliefs
                .iter()
                .map(|f| f.iter().fold(Q::from_integer(1.into()), |acc, p| acc * p.measure()))
                .fold(Q::from_integer(0.into()), |acc, m| acc + m);
            let belief_dim = beliefs
                .iter()
                .map(|f| f.iter().map(|p| p.dimension().unwrap_or(0)).sum::<usize>())
                .max()
                .unwrap_or(0);
            let color = strict_color(members.iter().map(|(p, _)| p));
            MuEquilibrium {
                mu: mu.to_vec(),
                pieces: members.iter().map(|(p, _)| p.clone()).collect(),
                belief_set: RegionSet {
                    color: color.clone(),
                    colors: color.iter().cloned().collect(),
                    space: Space::Belief,
                    representation: Representation::Exact(beliefs),
                    dimension: belief_dim,
                    measure: Measure::exact(measure),
                    boundary_markers: Vec::new(),
                },
                color,
                dimension,
            }
        })
        .collect()
}

fn strict_color<'a, S: 'a>(mut pieces: impl Iterator<Item = &'a MuPiece<S>>) -> Option<RankAssignment> {
    let first = pieces.next()?;
    if pieces.next().is_some() || !first.orders.iter().all(WeakOrder::is_strict) {
        return None;
    }
    Some(RankAssignment::new(
        first.orders.iter().map(|w| w.blocks().iter().map(|b| b[0]).collect()).collect(),
    ))
}

fn point_polytope<S: Scalar>(x: &[S]) -> Polytope<S> {
    let k = x.len();
    Polytope::from_constraints(k, (0..k - 1).map(|c| Constraint::eq(game_core::pure(k, c), x[c].clone())))
}

/// Distinct permutations of `μ_i` for every player.
fn permutations<S: Scalar>(mu: &[S]) -> Vec<Vec<S>> {
    let idx: Vec<usize> = (0..mu.len()).collect();
    let mut out: Vec<Vec<S>> = Vec::new();
    for p in game_core::correspondence::permutations(&idx) {
        let v: Vec<S> = p.iter().map(|&a| mu[a].clone()).collect();
        if !out.iter().any(|w| w.iter().zip(&v).all(|(a, b)| a.cmp_tie(b).is_eq())) {
            out.push(v);
        }
    }
    out
}

fn candidates<S: Scalar>(game: &Game, mu: &[Vec<S>], opts: &MuOptions) -> Vec<MuEquilibrium<S>> {
    let n = game.num_players();
    let perms: Vec<Vec<Vec<S>>> = mu.iter().map(|m| permutations(m)).collect();
    let profiles = cartesian(&perms);
    let mut fixed: Vec<(Vec<WeakOrder>, Vec<Vec<S>>)> = profiles
        .into_iter()
        .filter(|s| (0..n).all(|i| rank_mu(&expected_payoffs_at(game, i, s), &mu[i]).contains(&s[i])))
        .map(|s| ((0..n).map(|i| WeakOrder::of(&expected_payoffs_at(game, i, &s))).collect(), s))
        .collect();
    if !S::EXACT {
        let mu64: Vec<Vec<f64>> = mu.iter().map(|m| m.iter().map(S::to_f64).collect()).collect();
        for (orders, x) in ties::tie_fixed_points(game, &mu64, opts.seed) {
            let xs: Vec<Vec<S>> = x.iter().map(|v| v.iter().map(|&c| S::from_q(&game_core::q_from_f64(c))).collect()).collect();
            let as64 = |p: &[Vec<S>]| -> Vec<Vec<f64>> { p.iter().map(|v| v.iter().map(S::to_f64).collect()).collect() };
            if !fixed.iter().any(|(_, y)| ties::close(&as64(y), &x)) {
                fixed.push((orders, xs));
            }
        }
    }
    fixed
        .into_iter()
        .enumerate()
        .map(|(t, (orders, s))| {
            let piece = MuPiece {
                orders: orders.clone(),
                choice: s.iter().map(|x| point_polytope(x)).collect(),
            };
            let clouds = belief_clouds(game, &orders, opts, t as u64);
            let fractions: Vec<Measure> = clouds.iter().map(|c| Measure::estimate(c.len(), opts.samples)).collect();
            let color = strict_color(std::iter::once(&piece));
            MuEquilibrium {
                mu: mu.to_vec(),
                pieces: vec![piece],
                belief_set: RegionSet {
                    color: color.clone(),
                    colors: color.iter().cloned().collect(),
                    space: Space::Belief,
                    dimension: (0..n)
                        .map(|i| (0..n).filter(|&j| j != i).map(|j| game.actions(j) - 1).sum::<usize>())
                        .sum(),
                    measure: Measure {
                        value: fractions.iter().map(|m| m.value).product(),
                        exact: None,
                        std_error: 0.0,
                    },
                    representation: Representation::SampledFactors(clouds),
                    boundary_markers: Vec::new(),
                },
                color,
                dimension: 0,
            }
        })
        .collect()
}

/// Per player, sampled beliefs inducing the same weak payoff order.
fn belief_clouds(game: &Game, orders: &[WeakOrder], opts: &MuOptions, stream: u64) -> Vec<Vec<Vec<f64>>> {
    let n = game.num_players();
    (0..n)
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            rng.set_stream(stream * n as u64 + i as u64);
            let mut cloud = Vec::new();
            for _ in 0..opts.samples {
                let opp: Vec<Vec<f64>> = (0..n).filter(|&j| j != i).map(|j| uniform_simplex(&mut rng, game.actions(j))).collect();
                let refs: Vec<&[f64]> = opp.iter().map(Vec::as_slice).collect();
                let pi = expected_payoffs(game, i, &refs).expect("shapes match");
                if WeakOrder::of(&pi) == orders[i] {
                    cloud.push(opp.concat());
                }
            }
            cloud
        })
        .collect()
}

/// Direct re-check of the fixed-point condition at a profile.
pub fn is_fixed_point<S: Scalar>(game: &Game, mu: &[Vec<S>], profile: &[Vec<S>]) -> bool {
    (0..game.num_players()).all(|i| rank_mu(&expected_payoffs_at(game, i, profile), &mu[i]).contains(&profile[i]))
}

/// Whether `belief` (player `i`'s beliefs about the others) supports the same
/// `rank^μ` value as the choice profile.
pub fn supports<S: Scalar>(game: &Game, mu: &[Vec<S>], profile: &[Vec<S>], belief: &[Vec<Vec<S>>]) -> bool {
    (0..game.num_players()).all(|i| {
        let refs: Vec<&[S]> = belief[i].iter().map(Vec::as_slice).collect();
        let pb = match expected_payoffs(game, i, &refs) {
            Ok(v) => v,
            Err(_) => return false,
        };
        let pc = expected_payoffs_at(game, i, profile);
        rank_mu(&pb, &mu[i]).same_hull(&rank_mu(&pc, &mu[i]))
    })
}
