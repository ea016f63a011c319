//! End-to-end runs of the `meq` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use cli::commands::{ClassifyDoc, ClusterDoc, ElicitDoc, NashDoc, QreDoc, StabilityDoc, SweepDoc};
use cli::Envelope;
use msets::doc::ResultDocument;
use serde::de::DeserializeOwned;

fn meq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_meq"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn run_ok(args: &[&str]) -> Output {
    let out = meq(args);
    assert_eq!(code(&out), 0, "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out
}

fn read<T: DeserializeOwned>(path: &Path) -> Envelope<T> {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn stdout<T: DeserializeOwned>(out: &Output) -> Envelope<T> {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn tmp(dir: &tempfile::TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn msets_writes_document_and_plot() {
    let dir = tempfile::tempdir().unwrap();
    let (json, svg) = (tmp(&dir, "coord.json"), tmp(&dir, "coord.svg"));
    run_ok(&["msets", "--game", "coord", "--out", s(&json), "--plot", s(&svg)]);
    let doc: Envelope<ResultDocument> = read(&json);
    assert_eq!(doc.command, "msets");
    assert_eq!(doc.game.as_deref(), Some("coord"));
    assert_eq!(doc.seed, None);
    let colorable = doc.result.equilibria.iter().filter(|e| e.colorable).count();
    assert_eq!(colorable, 2);
    let plot = std::fs::read_to_string(&svg).unwrap();
    assert!(plot.starts_with("<svg") || plot.starts_with("<?xml"));
    assert!(plot.trim_end().ends_with("</svg>"));
}

#[test]
fn existing_output_needs_force() {
    let dir = tempfile::tempdir().unwrap();
    let json = tmp(&dir, "out.json");
    std::fs::write(&json, "keep").unwrap();
    let out = meq(&["msets", "--game", "coord", "--out", s(&json)]);
    assert_eq!(code(&out), 3);
    assert_eq!(std::fs::read_to_string(&json).unwrap(), "keep");
    run_ok(&["msets", "--game", "coord", "--out", s(&json), "--force"]);
    assert!(std::fs::read_to_string(&json).unwrap().starts_with('{'));
}

#[test]
fn existing_plot_is_guarded_too() {
    let dir = tempfile::tempdir().unwrap();
    let (json, svg) = (tmp(&dir, "a.json"), tmp(&dir, "a.svg"));
    std::fs::write(&svg, "keep").unwrap();
    assert_eq!(code(&meq(&["msets", "--game", "coord", "--out", s(&json), "--plot", s(&svg)])), 3);
    assert!(!json.exists());
}

#[test]
fn exit_codes() {
    // validation
    assert_eq!(code(&meq(&["msets", "--game", "no_such_game_or_file"])), 3);
    assert_eq!(code(&meq(&["msets", "--game", "coord", "--bogus"])), 3);
    assert_eq!(code(&meq(&["msets", "--game", "three_player", "--mode", "sampled"])), 3);
    assert_eq!(code(&meq(&["qre-trace", "--game", "coord", "--grid", "3:1:1"])), 3);
    // capability
    assert_eq!(code(&meq(&["msets", "--game", "three_player"])), 2);
    assert_eq!(code(&meq(&["stability", "--game", "coord", "--choice", "1/2,1/2;1/2,1/2", "--seed", "1", "--plot", "x.svg"])), 2);
}

#[test]
fn randomized_commands_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let runs: Vec<Vec<u8>> = (0..2)
        .map(|i| {
            let p = tmp(&dir, &format!("r{i}.json"));
            run_ok(&["msets", "--game", "chicken", "--mode", "sampled", "--samples", "5000", "--seed", "11", "--out", s(&p)]);
            std::fs::read(&p).unwrap()
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
    let doc: Envelope<ResultDocument> = serde_json::from_slice(&runs[0]).unwrap();
    assert_eq!(doc.seed, Some(11));
    assert_eq!(doc.result.seed, Some(11));
    let other = run_ok(&["msets", "--game", "chicken", "--mode", "sampled", "--samples", "5000", "--seed", "12"]);
    assert_ne!(other.stdout, runs[0]);
}

#[test]
fn mondrian_plot_has_three_colorable_shapes() {
    let dir = tempfile::tempdir().unwrap();
    let svg = tmp(&dir, "m.svg");
    let out = run_ok(&["msets", "--game", "mondrian", "--symmetric", "--plot", s(&svg)]);
    let doc: Envelope<ResultDocument> = stdout(&out);
    assert_eq!(doc.result.equilibria.iter().filter(|e| e.colorable).count(), 3);
    let plot = std::fs::read_to_string(&svg).unwrap();
    // one filled polygon per colorable set in each of the two panels
    let filled = plot.lines().filter(|l| l.starts_with("<polygon") && !l.contains("fill=\"none\"")).count();
    assert_eq!(filled, 6, "{plot}");
}

#[test]
fn chicken_sweep_events() {
    let out = run_ok(&["mu-sweep", "--game", "chicken", "--rho", "0:5:0.25"]);
    let doc: Envelope<SweepDoc> = stdout(&out);
    let events: Vec<(f64, f64)> = doc.result.path.events.iter().map(|e| (e.low, e.high)).collect();
    assert!(events.iter().any(|&(lo, hi)| lo <= 2.0 && 2.0 <= hi), "{events:?}");
    assert!(events.iter().any(|&(lo, hi)| lo <= 3.0 && 3.0 <= hi), "{events:?}");
    let counts: Vec<usize> = doc.result.path.levels.iter().map(|l| l.records.len()).collect();
    // uniform weights at ρ = 0 leave a single equilibrium
    assert_eq!(counts[0], 1);
    assert_eq!(*counts.last().unwrap(), 3);
}

#[test]
fn qre_bound_on_dominance_solvable_game() {
    let out = run_ok(&["qre-trace", "--game", "ds_mid"]);
    let doc: Envelope<QreDoc> = stdout(&out);
    assert!(!doc.result.dominated.is_empty());
    assert_eq!(doc.result.bound_holds, Some(true));
    let p = doc.result.max_dominated_probability.unwrap();
    assert!(p <= 1.0 / 3.0 + 1e-12, "{p}");
    for w in doc.result.trace.windows(2) {
        assert!(w[0].lambda < w[1].lambda);
    }
}

#[test]
fn nash_of_asymmetric_pennies() {
    let out = run_ok(&["nash", "--game", "amp3"]);
    let doc: Envelope<NashDoc> = stdout(&out);
    assert!(doc.result.complete);
    assert_eq!(doc.result.points.len(), 1);
    assert_eq!(doc.result.points[0].profile, vec![vec!["1/6", "5/6"], vec!["1/2", "1/2"]]);
}

#[test]
fn stability_of_interior_and_tie_bound_profiles() {
    let out = run_ok(&["stability", "--game", "coord", "--choice", "9/10,1/10;9/10,1/10", "--seed", "1"]);
    let doc: Envelope<StabilityDoc> = stdout(&out);
    assert!(doc.result.stability.stable);
    let out = run_ok(&["stability", "--game", "nongeneric_3x3_left", "--choice", "2/5,0,3/5;2/5,0,3/5", "--seed", "1", "--trials", "200"]);
    let doc: Envelope<StabilityDoc> = stdout(&out);
    assert!(!doc.result.stability.stable);
    assert_eq!(doc.result.stability.trials, 200);
    // not an M-equilibrium profile at all
    assert_eq!(code(&meq(&["stability", "--game", "coord", "--choice", "1/2,1/2;1,0", "--seed", "1"])), 3);
}

#[test]
fn elicitation_simulation() {
    let out = run_ok(&["elicit-sim", "--truth", "1/2,1/2", "--trials", "20000", "--seed", "4"]);
    let doc: Envelope<ElicitDoc> = stdout(&out);
    assert_eq!(doc.seed, Some(4));
    for slider in &doc.result.sliders {
        assert_eq!(slider.win_probability, 0.75);
        assert!((slider.simulated - 0.75).abs() <= 3.0 * slider.std_error + 1e-12);
    }
    assert!(doc.result.incentive.holds);
    assert_eq!(code(&meq(&["elicit-sim", "--truth", "0.3", "--seed", "1"])), 3);
    assert_eq!(code(&meq(&["elicit-sim", "--truth", "1/2,1/2"])), 3);
}

#[test]
fn synth_cluster_classify_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let data = tmp(&dir, "obs.csv");
    run_ok(&[
        "synth", "--game", "coord", "--subjects", "20", "--rounds", "10", "--beliefs", "blobs:0.03:0.9,0.1;0.1,0.9", "--seed", "5", "--out", s(&data),
    ]);
    let text = std::fs::read_to_string(&data).unwrap();
    assert_eq!(text.lines().count(), 201);

    let out = run_ok(&["cluster", "--data", s(&data), "--game", "coord", "--kmin", "1", "--kmax", "6", "--seed", "2"]);
    let doc: Envelope<ClusterDoc> = stdout(&out);
    assert_eq!(doc.result.observations, 200);
    assert_eq!(doc.result.elbow.as_ref().unwrap().suggested, 2);
    assert_eq!(doc.result.clustering.k, 2);
    let again = run_ok(&["cluster", "--data", s(&data), "--game", "coord", "--kmin", "1", "--kmax", "6", "--seed", "2"]);
    assert_eq!(out.stdout, again.stdout);

    let svg = tmp(&dir, "classify.svg");
    let out = run_ok(&["classify", "--game", "coord", "--data", s(&data), "--k", "2", "--seed", "2", "--plot", s(&svg)]);
    let doc: Envelope<ClassifyDoc> = stdout(&out);
    let r = &doc.result;
    assert_eq!(r.observations, 200);
    assert!(r.symmetric);
    // best responses to beliefs that stay inside one colorable set
    assert_eq!(r.best_response.overall.1, 200);
    assert_eq!(r.best_response.overall.0, 200);
    let total: f64 = r.report.belief_fractions.values().sum();
    assert!((total - 1.0).abs() < 1e-12);
    assert_eq!(r.report.clusters.len(), 2);
    for c in &r.report.clusters {
        assert!(c.agreement);
    }
    assert!(std::fs::read_to_string(&svg).unwrap().contains("<circle"));
}

#[test]
fn bad_rows_are_reported_not_fatal() {
    let dir = tempfile::tempdir().unwrap();
    let data = tmp(&dir, "bad.csv");
    std::fs::write(&data, "subject,round,role,game,choice,belief_1,belief_2\n1,1,row,coord,0,0.5,0.5\n1,2,row,coord,0,0.6,0.6\n").unwrap();
    let out = run_ok(&["classify", "--game", "coord", "--data", s(&data)]);
    let doc: Envelope<ClassifyDoc> = stdout(&out);
    assert_eq!((doc.result.observations, doc.result.rejected), (1, 1));
    assert!(String::from_utf8_lossy(&out.stderr).contains(":3:"));

    let missing = tmp(&dir, "missing.csv");
    std::fs::write(&missing, "subject,round,role,choice\n1,1,row,0\n").unwrap();
    assert_eq!(code(&meq(&["classify", "--game", "coord", "--data", s(&missing)])), 3);
}

#[test]
fn game_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = tmp(&dir, "g.json");
    let game = fixtures::load("coord").unwrap();
    std::fs::write(&path, game.to_json().unwrap()).unwrap();
    let out = run_ok(&["nash", "--game", s(&path)]);
    let doc: Envelope<NashDoc> = stdout(&out);
    assert_eq!(doc.result.points.len(), 3);
}
