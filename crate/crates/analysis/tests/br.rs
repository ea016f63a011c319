use analysis::{best_response_rate, describe, ingest_str, is_best_response, Observation, Role};
use fixtures::{synth_dataset, BeliefDist, SynthSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn synth(game: &str, rate: f64, n: usize, seed: u64) -> (game_core::Game, Vec<Observation>) {
    let g = fixtures::load(game).unwrap();
    let spec = SynthSpec {
        n_subjects: n,
        rounds: 10,
        belief: BeliefDist::Uniform,
        best_response_rate: rate,
        seed,
    };
    let got = ingest_str(&synth_dataset(&g, game, &spec), Some(&g)).unwrap();
    assert!(got.rejected.is_empty());
    (g, got.observations)
}

#[test]
fn everyone_best_responds() {
    for name in ["coord", "amp", "ds_mid", "nl"] {
        let (g, data) = synth(name, 1.0, 20, 3);
        let t = best_response_rate(&g, &data).unwrap();
        assert_eq!(t.rows.len(), 2);
        assert!(t.rows.iter().all(|r| r.rate == 1.0 && r.se == 0.0));
        assert_eq!(t.overall, (200, 200, 1.0));
    }
}

#[test]
fn constructed_rate_recovered() {
    let (g, data) = synth("amp", 0.58, 200, 9);
    let t = best_response_rate(&g, &data).unwrap();
    let row = t.role(Role::Row).unwrap();
    assert_eq!(row.n, 1000);
    let sigma = (0.58f64 * 0.42 / 1000.0).sqrt();
    assert!((row.rate - 0.58).abs() < 3.0 * sigma, "{}", row.rate);
    assert!((row.se - (row.rate * (1.0 - row.rate) / 1000.0).sqrt()).abs() < 1e-15);
}

#[test]
fn uniform_choices_half() {
    let g = fixtures::load("chicken").unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let n = 20_000;
    let data: Vec<Observation> = (0..n)
        .map(|t| {
            let p: f64 = rng.random_range(0.01..0.99);
            Observation {
                subject: t.to_string(),
                round: 1,
                role: if t % 2 == 0 { Role::Row } else { Role::Column },
                game: "chicken".into(),
                choice: rng.random_range(0..2),
                belief: vec![p, 1.0 - p],
            }
        })
        .collect();
    let t = best_response_rate(&g, &data).unwrap();
    let sigma = (0.25 / n as f64).sqrt();
    assert!((t.overall.2 - 0.5).abs() < 3.0 * sigma, "{:?}", t.overall);
}

#[test]
fn ties_count_as_best_responses() {
    let g = fixtures::load("coord").unwrap();
    // indifference belief by bisection
    let pay = |p: f64, a: usize| game_core::expected_payoffs(&g, 0, &[&[p, 1.0 - p][..]]).unwrap()[a];
    let mut lo = 0.0;
    let mut hi = 1.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if pay(mid, 0) > pay(mid, 1) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let p = 0.5 * (lo + hi);
    for choice in 0..2 {
        let o = Observation {
            subject: "1".into(),
            round: 1,
            role: Role::Row,
            game: "coord".into(),
            choice,
            belief: vec![p, 1.0 - p],
        };
        assert!(is_best_response(&g, &o).unwrap());
    }
}

#[test]
fn descriptive_moments() {
    let (g, data) = synth("nl", 0.6, 10, 1);
    let s = describe(&g, &data);
    assert_eq!(s.len(), 2);
    for r in &s {
        let own: Vec<&Observation> = data.iter().filter(|o| o.role == r.role).collect();
        assert_eq!(r.n, own.len());
        let n = own.len() as f64;
        for j in 0..3 {
            let m = own.iter().map(|o| o.belief[j]).sum::<f64>() / n;
            assert!((m - r.mean_belief[j]).abs() < 1e-12);
            let f = own.iter().filter(|o| o.choice == j).count() as f64 / n;
            assert!((f - r.mean_choice[j]).abs() < 1e-12);
            let v = own.iter().map(|o| (o.belief[j] - m).powi(2)).sum::<f64>() / (n - 1.0);
            assert!((v - r.belief_covariance[j][j]).abs() < 1e-12);
        }
        // rows of a simplex covariance sum to zero
        for row in &r.belief_covariance {
            assert!(row.iter().sum::<f64>().abs() < 1e-12);
        }
    }
}

#[test]
fn three_player_refused() {
    let g = fixtures::load("three_player").unwrap();
    assert!(best_response_rate(&g, &[]).is_err());
}
