//! Fixed points on payoff ties for three or more players, in floating point.
//!
//! For a profile of weak orders the unknowns are all mixtures. Each player
//! contributes one block-sum equation per tied block (the `μ` mass handed to
//! that block) and one payoff equality per adjacent pair inside a block,
//! `K_i` equations in all, so the system is square. Newton's method runs from
//! random points of `rank^μ`; roots are kept when they lie in `rank^μ` and
//! reproduce the weak orders.

use game_core::{expected_payoffs_at, linalg::solve, rank_mu_order, Game, WeakOrder};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::regions::weak_orders;

const STARTS: usize = 6;
const STEPS: usize = 40;
const RESIDUAL: f64 = 1e-12;
/// Roots closer than this (sup norm) are the same fixed point.
const SAME: f64 = 1e-7;

struct System<'a> {
    game: &'a Game,
    mu: &'a [Vec<f64>],
    orders: Vec<WeakOrder>,
    /// Sorted `μ` mass of each block, per player.
    mass: Vec<Vec<f64>>,
}

impl System<'_> {
    fn split(&self, x: &[f64]) -> Vec<Vec<f64>> {
        let mut out = Vec::new();
        let mut pos = 0;
        for &k in self.game.action_counts() {
            out.push(x[pos..pos + k].to_vec());
            pos += k;
        }
        out
    }

    fn residual(&self, x: &[f64]) -> Vec<f64> {
        let s = self.split(x);
        let mut f = Vec::with_capacity(x.len());
        for (i, w) in self.orders.iter().enumerate() {
            let pi = expected_payoffs_at(self.game, i, &s);
            for (b, m) in w.blocks().iter().zip(&self.mass[i]) {
                f.push(b.iter().map(|&a| s[i][a]).sum::<f64>() - m);
                for t in b.windows(2) {
                    f.push(pi[t[1]] - pi[t[0]]);
                }
            }
        }
        f
    }

    /// Jacobian rows in the same order as `residual`.
    fn jacobian(&self, x: &[f64]) -> Vec<Vec<f64>> {
        let s = self.split(x);
        let counts = self.game.action_counts();
        let offset: Vec<usize> = counts.iter().scan(0, |acc, &k| {
            let o = *acc;
            *acc += k;
            Some(o)
        }).collect();
        let dim = x.len();
        // d[i][j][c] = payoffs of player i with opponent j playing c
        let n = counts.len();
        let d: Vec<Vec<Vec<Vec<f64>>>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if j == i {
                            return Vec::new();
                        }
                        (0..counts[j])
                            .map(|c| {
                                let mut t = s.clone();
                                t[j] = game_core::pure(counts[j], c);
                                expected_payoffs_at(self.game, i, &t)
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let mut rows = Vec::with_capacity(dim);
        for (i, w) in self.orders.iter().enumerate() {
            for b in w.blocks() {
                let mut r = vec![0.0; dim];
                for &a in b {
                    r[offset[i] + a] = 1.0;
                }
                rows.push(r);
                for t in b.windows(2) {
                    let mut r = vec![0.0; dim];
                    for j in (0..n).filter(|&j| j != i) {
                        for c in 0..counts[j] {
                            r[offset[j] + c] = d[i][j][c][t[1]] - d[i][j][c][t[0]];
                        }
                    }
                    rows.push(r);
                }
            }
        }
        rows
    }

    fn newton(&self, mut x: Vec<f64>) -> Option<Vec<f64>> {
        for _ in 0..STEPS {
            let f = self.residual(&x);
            if f.iter().all(|v| v.abs() < RESIDUAL) {
                return Some(x);
            }
            let step = solve(&self.jacobian(&x), &f)?;
            for (a, s) in x.iter_mut().zip(step) {
                *a -= s;
            }
            if x.iter().any(|v| !v.is_finite() || v.abs() > 10.0) {
                return None;
            }
        }
        let f = self.residual(&x);
        f.iter().all(|v| v.abs() < RESIDUAL).then_some(x)
    }

    fn accept(&self, x: &[f64]) -> bool {
        let s = self.split(x);
        self.orders.iter().enumerate().all(|(i, w)| {
            let pi = expected_payoffs_at(self.game, i, &s);
            WeakOrder::of(&pi) == *w && rank_mu_order(w, &self.mu[i]).contains(&s[i])
        })
    }
}

fn random_point(rng: &mut ChaCha8Rng, vertices: &[Vec<f64>]) -> Vec<f64> {
    let w: Vec<f64> = vertices.iter().map(|_| rng.random::<f64>() + 1e-3).collect();
    let total: f64 = w.iter().sum();
    (0..vertices[0].len())
        .map(|c| vertices.iter().zip(&w).map(|(v, x)| v[c] * x).sum::<f64>() / total)
        .collect()
}

/// Profiles of mixtures solving some weak-order profile with at least one tie.
pub(crate) fn tie_fixed_points(game: &Game, mu: &[Vec<f64>], seed: u64) -> Vec<(Vec<WeakOrder>, Vec<Vec<f64>>)> {
    let per: Vec<Vec<WeakOrder>> = game.action_counts().iter().map(|&k| weak_orders(k)).collect();
    let profiles = per.iter().fold(vec![Vec::new()], |acc: Vec<Vec<WeakOrder>>, ws| {
        acc.iter()
            .flat_map(|p| {
                ws.iter().map(move |w| {
                    let mut q = p.clone();
                    q.push(w.clone());
                    q
                })
            })
            .collect()
    });
    let found: Vec<(Vec<WeakOrder>, Vec<Vec<f64>>)> = profiles
        .into_par_iter()
        .enumerate()
        .filter(|(_, orders)| !orders.iter().all(WeakOrder::is_strict))
        .flat_map_iter(|(t, orders)| {
            let mass: Vec<Vec<f64>> = orders
                .iter()
                .zip(mu)
                .map(|(w, m)| {
                    let mut sorted = m.clone();
                    sorted.sort_by(f64::total_cmp);
                    let mut pos = 0;
                    w.blocks()
                        .iter()
                        .map(|b| {
                            let v: f64 = sorted[pos..pos + b.len()].iter().sum();
                            pos += b.len();
                            v
                        })
                        .collect()
                })
                .collect();
            let sys = System { game, mu, orders: orders.clone(), mass };
            let verts: Vec<Vec<Vec<f64>>> = orders.iter().zip(mu).map(|(w, m)| rank_mu_order(w, m).vertices).collect();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(t as u64);
            let mut roots: Vec<Vec<Vec<f64>>> = Vec::new();
            for _ in 0..STARTS {
                let x0: Vec<f64> = verts.iter().flat_map(|v| random_point(&mut rng, v)).collect();
                if let Some(x) = sys.newton(x0) {
                    if sys.accept(&x) {
                        let s = sys.split(&x);
                        if !roots.iter().any(|r| close(r, &s)) {
                            roots.push(s);
                        }
                    }
                }
            }
            roots.into_iter().map(move |r| (orders.clone(), r))
        })
        .collect();
    let mut out: Vec<(Vec<WeakOrder>, Vec<Vec<f64>>)> = Vec::new();
    for (w, x) in found {
        if !out.iter().any(|(_, y)| close(y, &x)) {
            out.push((w, x));
        }
    }
    out
}

pub(crate) fn close(a: &[Vec<f64>], b: &[Vec<f64>]) -> bool {
    a.iter().flatten().zip(b.iter().flatten()).all(|(x, y)| (x - y).abs() < SAME)
}
