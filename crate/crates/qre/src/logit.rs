//! Logit fixed points `σ_i = softmax(λ π_i(σ_{-i}))` along the principal branch.
//!
//! The branch is followed from the uniform profile at `λ = 0` by
//! pseudo-arclength continuation in `(σ, λ·R)`, where `R` is the payoff range,
//! so turning points in λ are passed rather than stalled on. Every crossing of
//! a grid value is refined by Newton steps in `σ` at that λ and reported in
//! curve order; a branch that folds back reports the same λ more than once.
//! Tracing stops at the first crossing of the last grid value.

use game_core::{Game, Scalar};
use nalgebra::{DMatrix, DVector};

use crate::{QreError, QrePoint};

#[derive(Debug, Clone, PartialEq)]
pub struct TraceOptions {
    /// Successive corrector iterates closer than this count as converged.
    pub tolerance: f64,
    /// Largest accepted residual.
    pub max_residual: f64,
    /// Cap on predictor-corrector steps over the whole trace.
    pub max_steps: usize,
    /// Initial arclength step.
    pub initial_step: f64,
}

impl Default for TraceOptions {
    fn default() -> Self {
        TraceOptions {
            tolerance: 1e-12,
            max_residual: 1e-10,
            max_steps: 100_000,
            initial_step: 0.05,
        }
    }
}

/// `0` followed by `start·2^k` for `k = 0..steps`.
pub fn geometric_grid(start: f64, steps: usize) -> Vec<f64> {
    std::iter::once(0.0)
        .chain((0..steps).map(|k| start * 2f64.powi(k as i32)))
        .collect()
}

/// Largest exponent gap `λ·R` on the default grid; beyond it the smallest
/// probabilities start to underflow.
pub const MAX_SCALED_PRECISION: f64 = 512.0;

/// The geometric grid from 0.01, stopped once `λ` times the payoff range
/// exceeds [`MAX_SCALED_PRECISION`].
pub fn default_grid(game: &Game) -> Vec<f64> {
    let range = (0..game.num_players())
        .map(|i| {
            let v = game.payoff_tensor_f64(i);
            v.iter().copied().fold(f64::MIN, f64::max) - v.iter().copied().fold(f64::MAX, f64::min)
        })
        .fold(0.0, f64::max);
    let mut grid = vec![0.0];
    let mut l = 0.01;
    while grid.len() < 64 && (range == 0.0 || l * range <= MAX_SCALED_PRECISION) {
        grid.push(l);
        l *= 2.0;
    }
    grid
}

struct Model {
    m: [Vec<Vec<f64>>; 2],
    k: [usize; 2],
    range: f64,
}

impl Model {
    fn new(game: &Game) -> Result<Self, QreError> {
        if game.num_players() != 2 {
            return Err(QreError::Shape("the logit trace needs a two-player game".into()));
        }
        let mat = |i: usize| -> Vec<Vec<f64>> {
            game.payoff_matrix(i)
                .iter()
                .map(|r| r.iter().map(Scalar::to_f64).collect())
                .collect()
        };
        let m = [mat(0), mat(1)];
        let range = m
            .iter()
            .map(|mi| {
                let v: Vec<f64> = mi.iter().flatten().copied().collect();
                v.iter().copied().fold(f64::MIN, f64::max) - v.iter().copied().fold(f64::MAX, f64::min)
            })
            .fold(0.0, f64::max);
        Ok(Model {
            m,
            k: [game.actions(0), game.actions(1)],
            range,
        })
    }

    fn n(&self) -> usize {
        self.k[0] + self.k[1]
    }

    fn split(&self, flat: &[f64]) -> Vec<Vec<f64>> {
        vec![flat[..self.k[0]].to_vec(), flat[self.k[0]..self.n()].to_vec()]
    }

    /// Profile from log-probabilities, renormalized per player.
    fn profile(&self, logs: &[f64]) -> Vec<Vec<f64>> {
        self.split(logs).iter().map(|l| softmax(1.0, l)).collect()
    }

    fn payoffs(&self, i: usize, opp: &[f64]) -> Vec<f64> {
        self.m[i].iter().map(|r| r.iter().zip(opp).map(|(a, b)| a * b).sum()).collect()
    }

    fn response(&self, lambda: f64, sigma: &[Vec<f64>]) -> Vec<Vec<f64>> {
        (0..2).map(|i| softmax(lambda, &self.payoffs(i, &sigma[1 - i]))).collect()
    }

    fn residual(&self, lambda: f64, sigma: &[Vec<f64>]) -> f64 {
        let t = self.response(lambda, sigma);
        sup_diff(sigma, &t)
    }

    fn lambda(&self, ell: f64) -> f64 {
        if self.range > 0.0 {
            ell / self.range
        } else {
            0.0
        }
    }

    /// `F = y − log T(e^y)` in log-probabilities `y`, with derivatives in `y`
    /// (columns `0..n`) and in the scaled precision `ℓ = λR` (column `n`).
    fn system(&self, ell: f64, y: &[f64]) -> (DVector<f64>, DMatrix<f64>) {
        let n = self.n();
        let lambda = self.lambda(ell);
        let sigma: Vec<Vec<f64>> = self.split(y).iter().map(|l| l.iter().map(|v| v.exp()).collect()).collect();
        let off = [0, self.k[0]];
        let mut f = DVector::zeros(n);
        let mut j = DMatrix::<f64>::zeros(n, n + 1);
        for i in 0..2 {
            let o = 1 - i;
            let pi = self.payoffs(i, &sigma[o]);
            let top = pi.iter().copied().fold(f64::MIN, f64::max);
            let lse = top * lambda + pi.iter().map(|v| (lambda * (v - top)).exp()).sum::<f64>().ln();
            let s = softmax(lambda, &pi);
            let mean: f64 = s.iter().zip(&pi).map(|(a, b)| a * b).sum();
            for a in 0..self.k[i] {
                f[off[i] + a] = y[off[i] + a] - lambda * pi[a] + lse;
                j[(off[i] + a, off[i] + a)] = 1.0;
                for b in 0..self.k[o] {
                    let mbar: f64 = s.iter().zip(&self.m[i]).map(|(sc, row)| sc * row[b]).sum();
                    j[(off[i] + a, off[o] + b)] = -lambda * (self.m[i][a][b] - mbar) * sigma[o][b];
                }
                j[(off[i] + a, n)] = -(pi[a] - mean) / self.range;
            }
        }
        (f, j)
    }

    fn converged(&self, moved: f64, y: &[f64], opts: &TraceOptions) -> bool {
        let scale = y.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        moved < opts.tolerance * scale
    }

    /// Newton in `y` at fixed λ.
    fn refine(&self, ell: f64, start: &[f64], opts: &TraceOptions) -> Option<Vec<f64>> {
        let n = self.n();
        let mut y = start.to_vec();
        for _ in 0..50 {
            let (f, j) = self.system(ell, &y);
            let delta = j.columns(0, n).into_owned().lu().solve(&(-f))?;
            y.iter_mut().zip(delta.iter()).for_each(|(a, d)| *a += d);
            if self.converged(delta.amax(), &y, opts) {
                break;
            }
        }
        (self.residual(self.lambda(ell), &self.profile(&y)) <= opts.max_residual).then_some(y)
    }

    /// Unit tangent of the solution curve, oriented along `prev`.
    fn tangent(&self, y: &DVector<f64>, prev: &DVector<f64>) -> Option<DVector<f64>> {
        let n = self.n();
        let (_, j) = self.system(y[n], &y.as_slice()[..n]);
        let mut a = DMatrix::<f64>::zeros(n + 1, n + 1);
        a.rows_mut(0, n).copy_from(&j);
        a.row_mut(n).copy_from(&prev.transpose());
        let mut rhs = DVector::zeros(n + 1);
        rhs[n] = 1.0;
        let v = a.lu().solve(&rhs)?;
        let norm = v.norm();
        (norm.is_finite() && norm > 0.0).then(|| v / norm)
    }

    /// Corrector: Newton on `F = 0` within the hyperplane through the
    /// predictor orthogonal to `v`.
    fn correct(&self, pred: &DVector<f64>, v: &DVector<f64>, opts: &TraceOptions) -> Option<(DVector<f64>, usize)> {
        let n = self.n();
        let mut y = pred.clone();
        for it in 0..8 {
            let (f, j) = self.system(y[n], &y.as_slice()[..n]);
            let mut a = DMatrix::<f64>::zeros(n + 1, n + 1);
            a.rows_mut(0, n).copy_from(&j);
            a.row_mut(n).copy_from(&v.transpose());
            let mut rhs = DVector::zeros(n + 1);
            rhs.rows_mut(0, n).copy_from(&(-f));
            rhs[n] = -v.dot(&(&y - pred));
            let delta = a.lu().solve(&rhs)?;
            y += &delta;
            if !y.iter().all(|v| v.is_finite()) {
                return None;
            }
            if self.converged(delta.amax(), y.as_slice(), opts) {
                return Some((y, it + 1));
            }
        }
        None
    }
}

fn normalized(mut v: Vec<f64>) -> Vec<f64> {
    let s: f64 = v.iter().sum();
    v.iter_mut().for_each(|x| *x /= s);
    v
}

fn softmax(lambda: f64, pi: &[f64]) -> Vec<f64> {
    let top = pi.iter().copied().fold(f64::MIN, f64::max);
    normalized(pi.iter().map(|v| (lambda * (v - top)).exp()).collect())
}

fn sup_diff(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Logit response of `player` at precision `lambda` to the others in `profile`.
pub fn logit_response(game: &Game, player: usize, profile: &[Vec<f64>], lambda: f64) -> Vec<f64> {
    softmax(lambda, &game_core::expected_payoffs_at(game, player, profile))
}

/// Largest violation of the logit fixed-point equations at `profile`.
pub fn logit_residual(game: &Game, lambda: f64, profile: &[Vec<f64>]) -> f64 {
    (0..game.num_players())
        .flat_map(|i| {
            let r = logit_response(game, i, profile, lambda);
            profile[i].iter().zip(r).map(|(a, b)| (a - b).abs()).collect::<Vec<_>>()
        })
        .fold(0.0, f64::max)
}

pub fn logit_qre_trace(game: &Game, lambda_grid: &[f64]) -> Result<Vec<QrePoint>, QreError> {
    logit_qre_trace_with(game, lambda_grid, &TraceOptions::default())
}

pub fn logit_qre_trace_with(game: &Game, lambda_grid: &[f64], opts: &TraceOptions) -> Result<Vec<QrePoint>, QreError> {
    let model = Model::new(game)?;
    if lambda_grid.is_empty() {
        return Err(QreError::Grid("empty grid".into()));
    }
    if lambda_grid[0] != 0.0 {
        return Err(QreError::Grid("the grid must start at 0".into()));
    }
    if lambda_grid.windows(2).any(|w| !(w[1] > w[0])) || lambda_grid.iter().any(|l| !l.is_finite()) {
        return Err(QreError::Grid("the grid must be finite and strictly increasing".into()));
    }
    let n = model.n();
    let uniform: Vec<f64> = (0..2)
        .flat_map(|i| std::iter::repeat((model.k[i] as f64).recip().ln()).take(model.k[i]))
        .collect();
    let point = |lambda: f64, logs: &[f64]| {
        let profile = model.profile(logs);
        QrePoint {
            lambda,
            residual: model.residual(lambda, &profile),
            profile,
        }
    };
    let mut out = vec![point(0.0, &uniform)];
    if lambda_grid.len() == 1 {
        return Ok(out);
    }
    if model.range == 0.0 {
        out.extend(lambda_grid[1..].iter().map(|&l| point(l, &uniform)));
        return Ok(out);
    }
    let ells: Vec<f64> = lambda_grid.iter().map(|l| l * model.range).collect();
    let last = *ells.last().expect("nonempty");
    let mut y = DVector::from_iterator(n + 1, uniform.iter().copied().chain(std::iter::once(0.0)));
    let mut v = DVector::zeros(n + 1);
    v[n] = 1.0;
    let mut h = opts.initial_step;
    let mut steps = 0;
    loop {
        let Some(t) = model.tangent(&y, &v) else {
            let residual = model.residual(model.lambda(y[n]), &model.profile(&y.as_slice()[..n]));
            return Err(QreError::ContinuationFailure { lambda: model.lambda(y[n]), residual });
        };
        let accepted = loop {
            steps += 1;
            if steps > opts.max_steps || h < 1e-12 {
                let residual = model.residual(model.lambda(y[n]), &model.profile(&y.as_slice()[..n]));
                return Err(QreError::ContinuationFailure { lambda: model.lambda(y[n]), residual });
            }
            let pred = &y + &t * h;
            match model.correct(&pred, &t, opts) {
                Some((c, iters)) if (&c - &pred).norm() <= 0.5 * h && t.dot(&(&c - &y)) > 0.0 => {
                    if iters <= 3 {
                        h = (h * 1.5).min(0.25 * (1.0 + c[n]));
                    }
                    break c;
                }
                _ => h *= 0.5,
            }
        };
        let (lo, hi) = (y[n].min(accepted[n]), y[n].max(accepted[n]));
        let forward = accepted[n] >= y[n];
        let mut crossed: Vec<usize> = (1..ells.len()).filter(|&g| ells[g] > lo && ells[g] <= hi).collect();
        if !forward {
            crossed.reverse();
        }
        for g in crossed {
            let w = (ells[g] - y[n]) / (accepted[n] - y[n]);
            let guess: Vec<f64> = (0..n).map(|a| y[a] + w * (accepted[a] - y[a])).collect();
            let refined = model.refine(ells[g], &guess, opts).ok_or_else(|| QreError::ContinuationFailure {
                lambda: lambda_grid[g],
                residual: model.residual(lambda_grid[g], &model.profile(&guess)),
            })?;
            out.push(point(lambda_grid[g], &refined));
            if ells[g] == last {
                return Ok(out);
            }
        }
        if accepted[n] < 0.0 {
            return Err(QreError::ContinuationFailure {
                lambda: 0.0,
                residual: f64::NAN,
            });
        }
        v = t;
        y = accepted;
    }
}
