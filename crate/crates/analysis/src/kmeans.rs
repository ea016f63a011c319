//! Lloyd's k-means with random restarts and the elbow curve.
//!
//! Each restart starts from `k` distinct data points drawn at random and
//! alternates assignment (nearest centroid, lowest index on ties) and update
//! (cluster means) until the assignment is stable. A cluster that empties is
//! re-seeded at the point farthest from its centroid. The restart with the
//! smallest total squared error wins, earliest restart on ties; clusters are
//! then relabeled in lexicographic order of their centroids.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::AnalysisError;

pub const DEFAULT_RESTARTS: usize = 5000;
const MAX_ITERATIONS: usize = 1000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Clustering {
    pub k: usize,
    pub centroids: Vec<Vec<f64>>,
    pub assignment: Vec<usize>,
    pub sizes: Vec<usize>,
    pub total_error: f64,
    pub restarts: usize,
    /// Total error after each assignment step of the winning restart.
    pub history: Vec<f64>,
}

fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn nearest(p: &[f64], centroids: &[Vec<f64>]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (c, x) in centroids.iter().enumerate() {
        let d = dist2(p, x);
        if d < best.1 {
            best = (c, d);
        }
    }
    best
}

struct Run {
    centroids: Vec<Vec<f64>>,
    assignment: Vec<usize>,
    error: f64,
    history: Vec<f64>,
}

fn lloyd(points: &[Vec<f64>], mut centroids: Vec<Vec<f64>>) -> Run {
    let k = centroids.len();
    let dim = points[0].len();
    let mut assignment = vec![usize::MAX; points.len()];
    let mut history: Vec<f64> = Vec::new();
    for _ in 0..MAX_ITERATIONS {
        let mut changed = false;
        let mut error = 0.0;
        for (i, p) in points.iter().enumerate() {
            let (c, d) = nearest(p, &centroids);
            changed |= assignment[i] != c;
            assignment[i] = c;
            error += d;
        }
        if let Some(&prev) = history.last() {
            assert!(error <= prev + 1e-9 * (1.0 + prev), "k-means error increased: {prev} -> {error}");
        }
        history.push(error);
        if !changed {
            break;
        }
        let mut sums = vec![vec![0.0; dim]; k];
        let mut counts = vec![0usize; k];
        for (p, &c) in points.iter().zip(&assignment) {
            counts[c] += 1;
            sums[c].iter_mut().zip(p).for_each(|(s, v)| *s += v);
        }
        for c in 0..k {
            if counts[c] > 0 {
                centroids[c] = sums[c].iter().map(|s| s / counts[c] as f64).collect();
            }
        }
        for c in 0..k {
            if counts[c] == 0 {
                // farthest point from its own centroid
                let far = (0..points.len())
                    .filter(|&i| counts[assignment[i]] > 1)
                    .max_by(|&a, &b| {
                        dist2(&points[a], &centroids[assignment[a]]).total_cmp(&dist2(&points[b], &centroids[assignment[b]]))
                    });
                if let Some(i) = far {
                    counts[assignment[i]] -= 1;
                    assignment[i] = c;
                    counts[c] = 1;
                    centroids[c] = points[i].clone();
                }
            }
        }
    }
    let error = *history.last().expect("at least one pass");
    Run {
        centroids,
        assignment,
        error,
        history,
    }
}

fn distinct(points: &[Vec<f64>]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..points.len()).collect();
    idx.sort_by(|&a, &b| points[a].partial_cmp(&points[b]).expect("finite points"));
    idx.dedup_by(|a, b| points[*a] == points[*b]);
    idx
}

pub fn kmeans(points: &[Vec<f64>], k: usize, restarts: usize, seed: u64) -> Result<Clustering, AnalysisError> {
    if points.is_empty() || k == 0 || restarts == 0 {
        return Err(AnalysisError::Invalid("k-means needs points, k ≥ 1 and at least one restart".into()));
    }
    let dim = points[0].len();
    if points.iter().any(|p| p.len() != dim || p.iter().any(|v| !v.is_finite())) {
        return Err(AnalysisError::Invalid("points must be finite and of equal length".into()));
    }
    let uniq = distinct(points);
    if k > uniq.len() {
        return Err(AnalysisError::Invalid(format!("k = {k} exceeds the {} distinct points", uniq.len())));
    }
    let runs: Vec<(usize, Run)> = (0..restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(r as u64);
            let init = sample(&mut rng, uniq.len(), k).into_iter().map(|i| points[uniq[i]].clone()).collect();
            (r, lloyd(points, init))
        })
        .collect();
    let (_, best) = runs
        .into_iter()
        .min_by(|a, b| a.1.error.total_cmp(&b.1.error).then(a.0.cmp(&b.0)))
        .expect("at least one restart");
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| best.centroids[a].partial_cmp(&best.centroids[b]).expect("finite"));
    let mut relabel = vec![0; k];
    for (new, &old) in order.iter().enumerate() {
        relabel[old] = new;
    }
    let assignment: Vec<usize> = best.assignment.iter().map(|&c| relabel[c]).collect();
    let mut sizes = vec![0; k];
    assignment.iter().for_each(|&c| sizes[c] += 1);
    Ok(Clustering {
        k,
        centroids: order.iter().map(|&c| best.centroids[c].clone()).collect(),
        assignment,
        sizes,
        total_error: best.error,
        restarts,
        history: best.history,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Elbow {
    pub ks: Vec<usize>,
    pub errors: Vec<f64>,
    /// The k with the largest second difference of the log error curve.
    pub suggested: usize,
}

impl Elbow {
    /// `(k, error)` pairs for plotting.
    pub fn polyline(&self) -> Vec<[f64; 2]> {
        self.ks.iter().zip(&self.errors).map(|(&k, &e)| [k as f64, e]).collect()
    }
}

/// Best total error for each `k` in the range (capped at the number of
/// distinct points) and the suggested elbow.
///
/// The elbow is taken on `ln(error)`: the raw curve is convex, so its second
/// difference peaks at the smallest k whatever the data, while on a log scale
/// a sharp relative drop followed by a flat tail stands out.
pub fn elbow(points: &[Vec<f64>], ks: std::ops::RangeInclusive<usize>, restarts: usize, seed: u64) -> Result<Elbow, AnalysisError> {
    let cap = distinct(points).len();
    let ks: Vec<usize> = ks.filter(|&k| k >= 1 && k <= cap).collect();
    if ks.is_empty() {
        return Err(AnalysisError::Invalid("no admissible k".into()));
    }
    let errors = ks
        .iter()
        .map(|&k| kmeans(points, k, restarts, seed).map(|c| c.total_error))
        .collect::<Result<Vec<_>, _>>()?;
    let suggested = if ks.len() < 3 {
        ks[0]
    } else {
        let floor = errors[0].max(f64::MIN_POSITIVE) * 1e-12;
        let log: Vec<f64> = errors.iter().map(|e| (e + floor).ln()).collect();
        (1..ks.len() - 1)
            .max_by(|&a, &b| {
                let s = |i: usize| log[i - 1] - 2.0 * log[i] + log[i + 1];
                s(a).total_cmp(&s(b)).then(b.cmp(&a))
            })
            .map(|i| ks[i])
            .expect("interior point")
    };
    Ok(Elbow { ks, errors, suggested })
}
