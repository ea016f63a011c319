//! Slider-based belief elicitation under the binarized scoring rule.
//!
//! A player reports one slider value `q_jk` per opponent `j` and action `k`.
//! For each slider two uniform points are drawn; the report is correct when it
//! is at least as close to the realized outcome (1 if `j` played `k`, else 0)
//! as one of the draws. A correct slider wins with probability
//! `P = p(1−(1−q)²) + (1−p)(1−q²)` under true belief `p`.

use game_core::Scalar;
use rand::{seq::index::sample, Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Tolerance on per-opponent sums.
pub const SIMPLEX_TOL: f64 = 1e-9;

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum ElicitError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("shape error: {0}")]
    Shape(String),
}

/// Reports and true beliefs, grouped per opponent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SliderReport {
    pub reports: Vec<Vec<f64>>,
    pub truth: Vec<Vec<f64>>,
    pub prize: f64,
}

fn check_simplex(groups: &[Vec<f64>], what: &str) -> Result<(), ElicitError> {
    for (j, g) in groups.iter().enumerate() {
        if g.is_empty() || g.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(ElicitError::Domain(format!("{what} for opponent {j} must lie in [0, 1]")));
        }
        let s: f64 = g.iter().sum();
        if (s - 1.0).abs() > SIMPLEX_TOL {
            return Err(ElicitError::Domain(format!("{what} for opponent {j} sum to {s}, not 1")));
        }
    }
    Ok(())
}

impl SliderReport {
    pub fn new(reports: Vec<Vec<f64>>, truth: Vec<Vec<f64>>, prize: f64) -> Result<Self, ElicitError> {
        let r = SliderReport { reports, truth, prize };
        r.validate()?;
        Ok(r)
    }

    /// Truthful reporting.
    pub fn truthful(truth: Vec<Vec<f64>>, prize: f64) -> Result<Self, ElicitError> {
        Self::new(truth.clone(), truth, prize)
    }

    pub fn validate(&self) -> Result<(), ElicitError> {
        if !(self.prize >= 0.0) {
            return Err(ElicitError::Domain("the prize must be non-negative".into()));
        }
        if self.reports.len() != self.truth.len()
            || self.reports.iter().zip(&self.truth).any(|(a, b)| a.len() != b.len())
        {
            return Err(ElicitError::Shape("reports and beliefs must have the same layout".into()));
        }
        check_simplex(&self.reports, "reports")?;
        check_simplex(&self.truth, "beliefs")
    }

    /// Number of sliders.
    pub fn sliders(&self) -> usize {
        self.reports.iter().map(Vec::len).sum()
    }

    /// `(opponent, action)` of every slider, in order.
    pub fn labels(&self) -> Vec<(usize, usize)> {
        self.reports
            .iter()
            .enumerate()
            .flat_map(|(j, g)| (0..g.len()).map(move |k| (j, k)))
            .collect()
    }
}

fn unit<S: Scalar>(x: &S) -> bool {
    x >= &S::zero() && x <= &S::one()
}

fn formula<S: Scalar>(p: &S, q: &S) -> S {
    let one = S::one();
    let miss = one.clone() - q.clone();
    p.clone() * (one.clone() - miss.clone() * miss) + (one.clone() - p.clone()) * (one - q.clone() * q.clone())
}

/// Chance that a slider reporting `q` is correct when the truth is `p`.
pub fn win_probability<S: Scalar>(p: &S, q: &S) -> Result<S, ElicitError> {
    if !unit(p) || !unit(q) {
        return Err(ElicitError::Domain(format!("p = {:?} and q = {:?} must lie in [0, 1]", p, q)));
    }
    Ok(formula(p, q))
}

/// Whether a report is correct against two draws; ties go to the reporter.
pub fn is_correct(q: f64, outcome: bool, draws: [f64; 2]) -> bool {
    let o = if outcome { 1.0 } else { 0.0 };
    (q - o).abs() <= (draws[0] - o).abs().max((draws[1] - o).abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PaymentRule {
    /// The prize for every correct slider in a uniformly drawn subset of the
    /// given size.
    Subset(usize),
    /// The prize if one uniformly drawn slider is correct.
    SingleSlider,
}

/// One simulated round.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Round {
    pub draws: Vec<[f64; 2]>,
    pub wins: Vec<bool>,
    /// Sliders selected under the subset rule, and its payment.
    pub subset: Vec<usize>,
    pub subset_payment: f64,
    /// Slider selected under the single-slider rule, and its payment.
    pub single: usize,
    pub single_payment: f64,
}

/// Play one round: `outcome[j]` is the action opponent `j` played.
pub fn simulate_mechanism(
    report: &SliderReport,
    outcome: &[usize],
    subset_size: usize,
    seed: u64,
) -> Result<Round, ElicitError> {
    report.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    simulate_with(report, outcome, subset_size, &mut rng)
}

fn simulate_with<R: Rng>(
    report: &SliderReport,
    outcome: &[usize],
    subset_size: usize,
    rng: &mut R,
) -> Result<Round, ElicitError> {
    if outcome.len() != report.reports.len() || outcome.iter().zip(&report.reports).any(|(o, g)| *o >= g.len()) {
        return Err(ElicitError::Shape("one realized action per opponent is required".into()));
    }
    let n = report.sliders();
    if subset_size == 0 || subset_size > n {
        return Err(ElicitError::Domain(format!("subset size must be in 1..={n}")));
    }
    let mut draws = Vec::with_capacity(n);
    let mut wins = Vec::with_capacity(n);
    for (j, g) in report.reports.iter().enumerate() {
        for (k, &q) in g.iter().enumerate() {
            let d = [rng.random::<f64>(), rng.random::<f64>()];
            wins.push(is_correct(q, outcome[j] == k, d));
            draws.push(d);
        }
    }
    let mut subset: Vec<usize> = sample(rng, n, subset_size).into_vec();
    subset.sort_unstable();
    let subset_payment = report.prize * subset.iter().filter(|&&s| wins[s]).count() as f64;
    let single = rng.random_range(0..n);
    let single_payment = if wins[single] { report.prize } else { 0.0 };
    Ok(Round {
        draws,
        wins,
        subset,
        subset_payment,
        single,
        single_payment,
    })
}

/// Empirical win rate of one slider: outcome drawn with chance `p`, report
/// `q`. Returns the rate and its standard error.
pub fn simulated_win_rate(p: f64, q: f64, trials: usize, seed: u64) -> Result<(f64, f64), ElicitError> {
    win_probability(&p, &q)?;
    const CHUNK: usize = 1 << 14;
    let chunks = trials.div_ceil(CHUNK);
    let wins: usize = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let len = CHUNK.min(trials - c * CHUNK);
            (0..len)
                .filter(|_| {
                    let outcome = rng.random::<f64>() < p;
                    is_correct(q, outcome, [rng.random(), rng.random()])
                })
                .count()
        })
        .sum();
    let rate = wins as f64 / trials.max(1) as f64;
    Ok((rate, (rate * (1.0 - rate) / trials.max(1) as f64).sqrt()))
}

/// Risk-neutral expected payment `P·|S|/|S_i| · Σ P_jk` under the subset rule
/// (`subset_size = 1` is the single-slider rule).
pub fn expected_payment(truth: &[Vec<f64>], reports: &[Vec<f64>], prize: f64, subset_size: usize) -> f64 {
    let n: usize = truth.iter().map(Vec::len).sum();
    let total: f64 = truth
        .iter()
        .flatten()
        .zip(reports.iter().flatten())
        .map(|(p, q)| formula(p, q))
        .sum();
    prize * subset_size as f64 / n as f64 * total
}

/// Expected utility `E[u(P·#wins in S)]` for a uniformly drawn subset `S` of
/// the given size, by enumerating subsets.
pub fn expected_utility(
    truth: &[Vec<f64>],
    reports: &[Vec<f64>],
    prize: f64,
    subset_size: usize,
    u: impl Fn(f64) -> f64,
) -> Result<f64, ElicitError> {
    let probs: Vec<f64> = truth
        .iter()
        .flatten()
        .zip(reports.iter().flatten())
        .map(|(p, q)| win_probability(p, q))
        .collect::<Result<_, _>>()?;
    let n = probs.len();
    if subset_size == 0 || subset_size > n || n > 20 {
        return Err(ElicitError::Domain(format!("subset size must be in 1..={n}, with at most 20 sliders")));
    }
    let mut total = 0.0;
    let mut count = 0usize;
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != subset_size {
            continue;
        }
        // distribution of the number of wins among the selected sliders
        let mut dist = vec![1.0];
        for (s, p) in probs.iter().enumerate() {
            if mask & (1 << s) == 0 {
                continue;
            }
            let mut next = vec![0.0; dist.len() + 1];
            for (w, m) in dist.iter().enumerate() {
                next[w] += m * (1.0 - p);
                next[w + 1] += m * p;
            }
            dist = next;
        }
        total += dist.iter().enumerate().map(|(w, m)| m * u(prize * w as f64)).sum::<f64>();
        count += 1;
    }
    Ok(total / count as f64)
}

/// Outcome of the incentive check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IcReport {
    pub resolution: f64,
    /// Grid maximizer of the expected payment, per slider.
    pub argmax: Vec<Vec<f64>>,
    /// Largest `|argmax − p|` over sliders.
    pub max_deviation: f64,
    /// Norm of the central-difference gradient at `q = p`.
    pub gradient_norm: f64,
    pub holds: bool,
}

/// Largest accepted gradient norm at the truth.
pub const GRADIENT_TOL: f64 = 1e-8;

/// Grid search of the risk-neutral expected payment (prize 1, all sliders
/// paid) around truthful reporting.
pub fn verify_incentive_compatibility(truth: &[Vec<f64>], resolution: f64) -> Result<IcReport, ElicitError> {
    check_simplex(truth, "beliefs")?;
    if !(resolution > 0.0 && resolution <= 1.0) {
        return Err(ElicitError::Domain("resolution must lie in (0, 1]".into()));
    }
    let cells = (1.0 / resolution).round() as usize;
    let grid: Vec<f64> = (0..=cells).map(|i| (i as f64 * resolution).min(1.0)).collect();
    // the payment is a sum over sliders, so each slider is maximized alone
    let argmax: Vec<Vec<f64>> = truth
        .iter()
        .map(|g| {
            g.iter()
                .map(|p| {
                    *grid
                        .iter()
                        .max_by(|a, b| formula(p, *a).total_cmp(&formula(p, *b)))
                        .expect("nonempty grid")
                })
                .collect()
        })
        .collect();
    let max_deviation = argmax
        .iter()
        .flatten()
        .zip(truth.iter().flatten())
        .map(|(a, p)| (a - p).abs())
        .fold(0.0, f64::max);
    let h = 1e-6;
    let n: usize = truth.iter().map(Vec::len).sum();
    let gradient_norm = truth
        .iter()
        .flatten()
        .map(|p| {
            let d = (formula(p, &(p + h)) - formula(p, &(p - h))) / (2.0 * h) / n as f64;
            d * d
        })
        .sum::<f64>()
        .sqrt();
    Ok(IcReport {
        resolution,
        argmax,
        max_deviation,
        gradient_norm,
        holds: max_deviation <= resolution + 1e-12 && gradient_norm < GRADIENT_TOL,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ties_favour_the_reporter() {
        assert!(is_correct(0.5, true, [0.5, 0.9]));
        assert!(!is_correct(0.4, true, [0.5, 0.9]));
    }
}
