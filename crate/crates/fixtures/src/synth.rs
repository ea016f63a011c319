//! Synthetic observation data for two-player games.
//!
//! Layout (comma separated, header row):
//! `subject,round,role,game,choice,belief_1,…,belief_K` where `role` is `row`
//! or `column`, `choice` is a zero-based action index and the beliefs are the
//! subject's stated distribution over the opponent's actions.

use game_core::{expected_payoffs, Game, WeakOrder};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

pub const CSV_HEADER_PREFIX: [&str; 5] = ["subject", "round", "role", "game", "choice"];

/// How stated beliefs are drawn.
#[derive(Debug, Clone, PartialEq)]
pub enum BeliefDist {
    /// Uniform on the opponent simplex.
    Uniform,
    /// Two-action opponents: probability of the first action uniform in `[lo, hi]`.
    Interval { lo: f64, hi: f64 },
    /// Gaussian blobs around the given centers (chosen uniformly), redrawn
    /// until inside the simplex.
    Blobs { centers: Vec<Vec<f64>>, sd: f64 },
    /// Always the same point.
    Point(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthSpec {
    pub n_subjects: usize,
    pub rounds: usize,
    pub belief: BeliefDist,
    /// Probability that the choice is a best response to the stated belief.
    pub best_response_rate: f64,
    pub seed: u64,
}

/// One generated observation.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthRow {
    pub subject: usize,
    pub round: usize,
    pub role: usize,
    pub choice: usize,
    pub belief: Vec<f64>,
}

fn draw_belief(rng: &mut ChaCha8Rng, dist: &BeliefDist, k: usize) -> Vec<f64> {
    match dist {
        BeliefDist::Uniform => game_core::sample::uniform_simplex(rng, k),
        BeliefDist::Interval { lo, hi } => {
            assert_eq!(k, 2, "interval beliefs need a two-action opponent");
            let p = rng.random_range(*lo..=*hi);
            vec![p, 1.0 - p]
        }
        BeliefDist::Blobs { centers, sd } => {
            let c = centers.choose(rng).expect("at least one center");
            let noise = Normal::new(0.0, *sd).expect("valid sd");
            loop {
                let mut b: Vec<f64> = c[..k - 1].iter().map(|x| x + noise.sample(rng)).collect();
                let last = 1.0 - b.iter().sum::<f64>();
                b.push(last);
                if b.iter().all(|&x| x >= 0.0) {
                    return b;
                }
            }
        }
        BeliefDist::Point(p) => p.clone(),
    }
}

/// Generate observations. Subjects alternate between the row (even ids) and
/// column (odd ids) roles.
pub fn synth_observations(game: &Game, spec: &SynthSpec) -> Vec<SynthRow> {
    assert_eq!(game.num_players(), 2, "synthetic data is for two-player games");
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut rows = Vec::with_capacity(spec.n_subjects * spec.rounds);
    for round in 1..=spec.rounds {
        for subject in 0..spec.n_subjects {
            let role = subject % 2;
            let k_opp = game.actions(1 - role);
            let belief = draw_belief(&mut rng, &spec.belief, k_opp);
            let pi = expected_payoffs(game, role, &[&belief]).expect("belief matches game");
            let order = WeakOrder::of(&pi);
            let best = order.top().to_vec();
            let others: Vec<usize> = (0..pi.len()).filter(|a| !best.contains(a)).collect();
            let hit = rng.random_bool(spec.best_response_rate.clamp(0.0, 1.0));
            let choice = if hit || others.is_empty() {
                *best.choose(&mut rng).expect("nonempty")
            } else {
                *others.choose(&mut rng).expect("nonempty")
            };
            rows.push(SynthRow {
                subject: subject + 1,
                round,
                role,
                choice,
                belief,
            });
        }
    }
    rows
}

/// Generate a dataset as CSV text in the documented layout.
pub fn synth_dataset(game: &Game, game_id: &str, spec: &SynthSpec) -> String {
    let rows = synth_observations(game, spec);
    let k = (0..game.num_players()).map(|i| game.actions(i)).max().unwrap_or(0);
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<String> = CSV_HEADER_PREFIX.iter().map(|s| s.to_string()).collect();
    header.extend((1..=k).map(|j| format!("belief_{j}")));
    w.write_record(&header).expect("in-memory write");
    for r in rows {
        let mut rec = vec![
            r.subject.to_string(),
            r.round.to_string(),
            if r.role == 0 { "row" } else { "column" }.to_string(),
            game_id.to_string(),
            r.choice.to_string(),
        ];
        rec.extend(r.belief.iter().map(|x| x.to_string()));
        rec.resize(header.len(), String::new());
        w.write_record(&rec).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
}
