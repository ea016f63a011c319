//! Command implementations. Each returns a JSON result document and, when
//! asked, an SVG plot.

use std::path::Path;

use analysis::{Clustering, Elbow, Observation, Role};
use game_core::{parse_q, q_to_string, Game, Scalar, Q};
use msets::doc::{Frame, PlotData, ResultDocument};
use msets::{MEquilibrium, Mode, Options, RankAssignment, Stability};
use serde::{Deserialize, Serialize};

use crate::config::{Command, ModeArg, RoleArg, SpaceArg};
use crate::svg;
use crate::CliError;

/// Common wrapper of every result document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope<T> {
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub game: Option<String>,
    /// Echoed for every randomized command.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub result: T,
}

pub struct Outcome {
    pub document: String,
    pub plot: Option<String>,
}

fn finish<T: Serialize>(command: &str, game: Option<&str>, seed: Option<u64>, result: T, plot: Option<String>) -> Result<Outcome, CliError> {
    let env = Envelope {
        command: command.to_string(),
        game: game.map(str::to_string),
        seed,
        result,
    };
    let mut document = serde_json::to_string(&env).map_err(|e| CliError::Runtime(e.to_string()))?;
    document.push('\n');
    Ok(Outcome { document, plot })
}

/// A fixture name or a path to a game file.
pub fn load_game(source: &str) -> Result<Game, CliError> {
    if fixtures::NAMES.contains(&source) {
        return fixtures::load(source).map_err(|e| CliError::Validation(e.to_string()));
    }
    let path = Path::new(source);
    if !path.exists() {
        return Err(CliError::Validation(format!("`{source}` is neither a fixture nor a file")));
    }
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Validation(format!("{source}: {e}")))?;
    let game = Game::from_json(&text)?;
    if game.name().is_none() {
        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("game").to_string();
        return Ok(game.with_name(stem));
    }
    Ok(game)
}

fn game_name<'a>(game: &'a Game, source: &'a str) -> &'a str {
    game.name().unwrap_or(source)
}

fn need_seed(seed: Option<u64>, what: &str) -> Result<u64, CliError> {
    seed.ok_or_else(|| CliError::Validation(format!("{what} is randomized: pass --seed")))
}

/// `start:stop:step` (inclusive) or a comma-separated list.
pub fn parse_grid(text: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::Validation(format!("bad grid `{text}`"));
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() == 3 {
        let v: Vec<f64> = parts.iter().map(|p| p.trim().parse::<f64>()).collect::<Result<_, _>>().map_err(|_| bad())?;
        let (a, b, h) = (v[0], v[1], v[2]);
        if !(h > 0.0) || !(b >= a) || !a.is_finite() || !b.is_finite() {
            return Err(bad());
        }
        let n = ((b - a) / h + 1e-9).floor() as usize;
        // decimal steps: round to the step's precision to keep 0.1-type grids clean
        let scale = 1e12;
        return Ok((0..=n).map(|i| ((a + i as f64 * h) * scale).round() / scale).collect());
    }
    text.split(',').map(|p| p.trim().parse::<f64>().map_err(|_| bad())).collect()
}

fn parse_mixture(text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|p| {
            parse_q(p)
                .map(|v| v.to_f64())
                .ok_or_else(|| CliError::Validation(format!("bad probability `{p}`")))
        })
        .collect()
}

/// `a,b;c,d` → one vector per `;` group.
pub fn parse_groups(text: &str) -> Result<Vec<Vec<f64>>, CliError> {
    text.split(';').map(parse_mixture).collect()
}

fn options(symmetric: bool, mode: ModeArg, samples: usize, seed: Option<u64>) -> Result<Options, CliError> {
    Ok(match mode {
        ModeArg::Exact => Options {
            symmetric,
            ..Options::exact()
        },
        ModeArg::Sampled => Options {
            symmetric,
            ..Options::sampled(samples, need_seed(seed, "sampled mode")?)
        },
    })
}

fn colors(meqs: &[MEquilibrium]) -> Vec<Option<RankAssignment>> {
    meqs.iter().map(|m| if m.colorable { m.choice_set.color.clone() } else { None }).collect()
}

fn plot_data(meqs: &[MEquilibrium]) -> Result<PlotData, CliError> {
    msets::doc::plot_data(meqs).ok_or_else(|| CliError::Capability("plots cover 2×2 games and symmetric games with two or three actions".into()))
}

pub fn compute(command: &Command, want_plot: bool) -> Result<Outcome, CliError> {
    match command {
        Command::Msets {
            game,
            mode,
            symmetric,
            samples,
            seed,
            ..
        } => msets_cmd(game, *mode, *symmetric, *samples, *seed, want_plot),
        Command::MuSweep {
            game,
            rho,
            threshold,
            samples,
            seed,
            ..
        } => mu_sweep(game, rho, *threshold, *samples, *seed, want_plot),
        Command::QreTrace { game, grid, .. } => qre_trace(game, grid.as_deref(), want_plot),
        Command::Nash { game, symmetric, .. } => nash_cmd(game, *symmetric, want_plot),
        Command::Stability {
            game,
            choice,
            belief,
            epsilon,
            trials,
            seed,
            ..
        } => stability(game, choice, belief.as_deref(), *epsilon, *trials, *seed, want_plot),
        Command::ElicitSim {
            truth,
            report,
            prize,
            subset,
            trials,
            resolution,
            seed,
            ..
        } => elicit(truth, report.as_deref(), *prize, *subset, *trials, *resolution, *seed, want_plot),
        Command::Cluster {
            data,
            game,
            role,
            k,
            kmin,
            kmax,
            restarts,
            seed,
            ..
        } => cluster(data, game.as_deref(), *role, *k, (*kmin, *kmax), *restarts, *seed, want_plot),
        Command::Classify {
            game,
            data,
            game_id,
            space,
            k,
            restarts,
            seed,
            ..
        } => classify(game, data, game_id.as_deref(), *space, *k, *restarts, *seed, want_plot),
        Command::Synth {
            game,
            subjects,
            rounds,
            beliefs,
            br_rate,
            seed,
            ..
        } => synth(game, *subjects, *rounds, beliefs, *br_rate, *seed),
    }
}

fn msets_cmd(source: &str, mode: ModeArg, symmetric: bool, samples: usize, seed: Option<u64>, want_plot: bool) -> Result<Outcome, CliError> {
    let game = load_game(source)?;
    let opts = options(symmetric, mode, samples, seed)?;
    let meqs = msets::enumerate_m_equilibria(&game, &opts)?;
    let doc: ResultDocument = msets::doc::document(&game, &opts, &meqs);
    let plot = if want_plot {
        Some(svg::msets_plot(&plot_data(&meqs)?, &colors(&meqs), None))
    } else {
        None
    };
    let seed = (opts.mode == Mode::Sampled).then_some(opts.seed);
    finish("msets", Some(game_name(&game, source)), seed, doc, plot)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepDoc {
    pub family: String,
    pub grid: Vec<f64>,
    pub path: mu_eq::CorrespondencePath,
}

/// Plot point of a profile laid out per player: `(p, q)` in the square,
/// ternary coordinates of the first player's mixture otherwise.
fn profile_point(game: &Game, profile: &[Vec<f64>]) -> Option<[f64; 2]> {
    match game.action_counts() {
        [2, 2] => Some([profile[1][0], profile[0][0]]),
        [3, 3] if game.symmetric() => Some(svg::mixture_point(&profile[0])),
        _ => None,
    }
}

fn mu_sweep(source: &str, rho: &str, threshold: f64, samples: Option<usize>, seed: Option<u64>, want_plot: bool) -> Result<Outcome, CliError> {
    let game = load_game(source)?;
    let grid = parse_grid(rho)?;
    if grid.iter().any(|&r| !(r >= 0.0)) {
        return Err(CliError::Validation("ρ must be non-negative".into()));
    }
    let mut opts = mu_eq::SweepOptions {
        threshold,
        ..Default::default()
    };
    let sampled = game.num_players() > 2;
    if sampled {
        opts.mu.seed = need_seed(seed, "belief sampling for three or more players")?;
        if let Some(s) = samples {
            opts.mu.samples = s;
        }
    }
    let path = mu_eq::sweep_correspondence(&game, &grid, &opts)?;
    let plot = if want_plot {
        let frame = match game.action_counts() {
            [2, 2] => Frame::Square,
            [3, 3] if game.symmetric() => Frame::Ternary,
            _ => return Err(CliError::Capability("sweep plots cover 2×2 and symmetric 3×3 games".into())),
        };
        Some(svg::document(&[(frame, "μ-equilibria along ρ")], |panels, out| {
            let p = &panels[0];
            for level in &path.levels {
                for r in &level.records {
                    let fill = svg::PALETTE[r.branch % svg::PALETTE.len()];
                    let pts: Vec<[f64; 2]> = r.vertices.iter().filter_map(|v| profile_point(&game, v)).collect();
                    if pts.len() == 1 {
                        svg::circle(out, p, pts[0], 2.0, fill);
                    } else {
                        svg::polyline(out, p, &pts, fill, 2.0);
                    }
                }
            }
        }))
    } else {
        None
    };
    let doc = SweepDoc {
        family: "power: μ_k ∝ k^ρ".into(),
        grid,
        path,
    };
    finish("mu-sweep", Some(game_name(&game, source)), sampled.then_some(opts.mu.seed), doc, plot)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DominationDoc {
    pub player: usize,
    pub dominated: usize,
    pub mix: [usize; 2],
    pub weights: [String; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QreDoc {
    pub grid: Vec<f64>,
    pub trace: Vec<qre::QrePoint>,
    /// Actions dominated by a mixture of two others.
    pub dominated: Vec<DominationDoc>,
    /// Whether every traced profile keeps each such action at most 1/3.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound_holds: Option<bool>,
    /// Largest traced probability of a dominated action.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_dominated_probability: Option<f64>,
}

fn qre_trace(source: &str, grid: Option<&str>, want_plot: bool) -> Result<Outcome, CliError> {
    let game = load_game(source)?;
    let grid = match grid {
        Some(g) => parse_grid(g)?,
        None => qre::default_grid(&game),
    };
    let trace = qre::logit_qre_trace(&game, &grid)?;
    let pairs = qre::dominated_pairs(&game);
    let (bound_holds, max_dominated_probability) = if pairs.is_empty() {
        (None, None)
    } else {
        let max = trace
            .iter()
            .flat_map(|t| pairs.iter().map(move |d| t.profile[d.player][d.dominated]))
            .fold(0.0f64, f64::max);
        (Some(qre::logit_dominated_bound_check(&game, &trace)?), Some(max))
    };
    let plot = if want_plot {
        let symmetric = game.symmetric() && game.action_counts() == [3, 3];
        let meqs = msets::enumerate_m_equilibria(&game, &if symmetric { Options::symmetric_exact() } else { Options::exact() })?;
        let overlay: Vec<[f64; 2]> = trace.iter().filter_map(|t| profile_point(&game, &t.profile)).collect();
        Some(svg::msets_plot(&plot_data(&meqs)?, &colors(&meqs), Some(&overlay)))
    } else {
        None
    };
    let doc = QreDoc {
        grid,
        trace,
        dominated: pairs
            .iter()
            .map(|d| DominationDoc {
                player: d.player,
                dominated: d.dominated,
                mix: d.mix,
                weights: [q_to_string(&d.weights.0), q_to_string(&d.weights.1)],
            })
            .collect(),
        bound_holds,
        max_dominated_probability,
    };
    finish("qre-trace", Some(game_name(&game, source)), None, doc, plot)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NashPointDoc {
    pub profile: Vec<Vec<String>>,
    pub kind: String,
    pub support: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContinuumDoc {
    pub dimension: usize,
    pub vertices: Vec<Vec<Vec<String>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NashDoc {
    /// False for games beyond bimatrix support enumeration: only pure
    /// equilibria are listed then.
    pub complete: bool,
    pub points: Vec<NashPointDoc>,
    pub continua: Vec<ContinuumDoc>,
}

fn strings(profile: &[Vec<Q>]) -> Vec<Vec<String>> {
    profile.iter().map(|v| v.iter().map(q_to_string).collect()).collect()
}

fn nash_cmd(source: &str, symmetric: bool, want_plot: bool) -> Result<Outcome, CliError> {
    if want_plot {
        return Err(CliError::Capability("nash has no plot; see msets".into()));
    }
    let game = load_game(source)?;
    let (set, complete) = if symmetric {
        (nash::symmetric_nash(&game)?, true)
    } else if game.num_players() == 2 {
        (nash::mixed_nash_bimatrix(&game)?, true)
    } else {
        (
            nash::NashSet {
                points: nash::pure_nash(&game),
                continua: Vec::new(),
            },
            false,
        )
    };
    let doc = NashDoc {
        complete,
        points: set
            .points
            .iter()
            .map(|p| NashPointDoc {
                profile: strings(&p.profile),
                kind: serde_json::to_value(p.kind)
                    .ok()
                    .and_then(|v| v.as_str().map(str::to_string))
                    .unwrap_or_default(),
                support: p.support.clone(),
            })
            .collect(),
        continua: set
            .continua
            .iter()
            .map(|c| ContinuumDoc {
                dimension: c.dimension,
                vertices: c.vertices.iter().map(|v| strings(v)).collect(),
            })
            .collect(),
    };
    finish("nash", Some(game_name(&game, source)), None, doc, None)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityDoc {
    pub choice: Vec<Vec<f64>>,
    pub belief: Vec<Vec<Vec<f64>>>,
    pub epsilon: f64,
    /// Sup-norm closure radius accepted for two-player games.
    pub neighbourhood: f64,
    pub stability: Stability,
}

fn stability(
    source: &str,
    choice: &str,
    belief: Option<&str>,
    epsilon: f64,
    trials: usize,
    seed: Option<u64>,
    want_plot: bool,
) -> Result<Outcome, CliError> {
    if want_plot {
        return Err(CliError::Capability("stability has no plot".into()));
    }
    let seed = need_seed(seed, "stability")?;
    let game = load_game(source)?;
    let choice = parse_groups(choice)?;
    let n = game.num_players();
    if choice.len() != n {
        return Err(CliError::Validation(format!("expected {n} mixtures")));
    }
    let belief: Vec<Vec<Vec<f64>>> = match belief {
        Some(text) => text
            .split(';')
            .map(|player| player.split('/').map(parse_mixture).collect::<Result<Vec<_>, _>>())
            .collect::<Result<_, _>>()?,
        None => (0..n).map(|i| (0..n).filter(|&j| j != i).map(|j| choice[j].clone()).collect()).collect(),
    };
    let s = msets::behavioral_stability(&game, &choice, &belief, epsilon, trials, seed)?;
    let doc = StabilityDoc {
        choice,
        belief,
        epsilon,
        neighbourhood: msets::stability::neighbourhood(epsilon),
        stability: s,
    };
    finish("stability", Some(game_name(&game, source)), Some(seed), doc, None)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SliderDoc {
    pub opponent: usize,
    pub action: usize,
    pub truth: f64,
    pub report: f64,
    /// Exact chance of a correct slider.
    pub win_probability: f64,
    pub simulated: f64,
    pub std_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElicitDoc {
    pub prize: f64,
    pub subset: usize,
    pub trials: usize,
    pub sliders: Vec<SliderDoc>,
    /// Risk-neutral expected payment under the subset rule.
    pub expected_payment: f64,
    pub truthful_payment: f64,
    pub incentive: elicitation::IcReport,
}

#[allow(clippy::too_many_arguments)]
fn elicit(
    truth: &str,
    report: Option<&str>,
    prize: f64,
    subset: usize,
    trials: usize,
    resolution: f64,
    seed: Option<u64>,
    want_plot: bool,
) -> Result<Outcome, CliError> {
    if want_plot {
        return Err(CliError::Capability("elicit-sim has no plot".into()));
    }
    let seed = need_seed(seed, "the mechanism simulation")?;
    let truth = parse_groups(truth)?;
    let reports = match report {
        Some(r) => parse_groups(r)?,
        None => truth.clone(),
    };
    let r = elicitation::SliderReport::new(reports.clone(), truth.clone(), prize)?;
    if subset == 0 || subset > r.sliders() {
        return Err(CliError::Validation(format!("subset size must lie in 1..={}", r.sliders())));
    }
    let mut sliders = Vec::new();
    for (i, (j, k)) in r.labels().into_iter().enumerate() {
        let (p, q) = (truth[j][k], reports[j][k]);
        let (simulated, std_error) = elicitation::simulated_win_rate(p, q, trials, seed.wrapping_add(i as u64))?;
        sliders.push(SliderDoc {
            opponent: j,
            action: k,
            truth: p,
            report: q,
            win_probability: elicitation::win_probability(&p, &q)?,
            simulated,
            std_error,
        });
    }
    let doc = ElicitDoc {
        prize,
        subset,
        trials,
        sliders,
        expected_payment: elicitation::expected_payment(&truth, &reports, prize, subset),
        truthful_payment: elicitation::expected_payment(&truth, &truth, prize, subset),
        incentive: elicitation::verify_incentive_compatibility(&truth, resolution)?,
    };
    finish("elicit-sim", None, Some(seed), doc, None)
}

fn read_observations(path: &Path, game: Option<&Game>) -> Result<(Vec<Observation>, usize), CliError> {
    let got = analysis::ingest(path, game).map_err(|e| match e {
        analysis::AnalysisError::Io(io) => CliError::Validation(format!("{}: {io}", path.display())),
        other => other.into(),
    })?;
    for r in &got.rejected {
        eprintln!("{}:{}: rejected: {}", path.display(), r.line, r.reason);
    }
    Ok((got.observations, got.rejected.len()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterDoc {
    pub observations: usize,
    pub rejected: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub role: Option<Role>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elbow: Option<Elbow>,
    pub clustering: Clustering,
}

fn role_of(r: RoleArg) -> Role {
    match r {
        RoleArg::Row => Role::Row,
        RoleArg::Column => Role::Column,
    }
}

fn centroid_plot(c: &Clustering) -> Result<String, CliError> {
    let dim = c.centroids.first().map_or(0, Vec::len);
    let frame = match dim {
        2 => Frame::Square,
        3 => Frame::Ternary,
        _ => return Err(CliError::Capability("centroid plots cover two or three actions".into())),
    };
    let max = c.sizes.iter().copied().max().unwrap_or(1).max(1) as f64;
    Ok(svg::document(&[(frame, "belief clusters")], |panels, out| {
        for (k, x) in c.centroids.iter().enumerate() {
            let r = 3.0 + 15.0 * (c.sizes[k] as f64 / max).sqrt();
            svg::circle(out, &panels[0], svg::mixture_point(x), r, svg::PALETTE[k % svg::PALETTE.len()]);
        }
    }))
}

#[allow(clippy::too_many_arguments)]
fn cluster(
    data: &Path,
    game: Option<&str>,
    role: Option<RoleArg>,
    k: Option<usize>,
    (kmin, kmax): (usize, usize),
    restarts: usize,
    seed: Option<u64>,
    want_plot: bool,
) -> Result<Outcome, CliError> {
    let seed = need_seed(seed, "k-means")?;
    let game = game.map(load_game).transpose()?;
    let (obs, rejected) = read_observations(data, game.as_ref())?;
    let role = role.map(role_of);
    let points: Vec<Vec<f64>> = obs.iter().filter(|o| role.is_none_or(|r| o.role == r)).map(|o| o.belief.clone()).collect();
    if points.is_empty() {
        return Err(CliError::Validation("no observations to cluster".into()));
    }
    let (elbow, k) = match k {
        Some(k) => (None, k),
        None => {
            if kmin > kmax {
                return Err(CliError::Validation("--kmin exceeds --kmax".into()));
            }
            let e = analysis::elbow(&points, kmin..=kmax, restarts, seed)?;
            let k = e.suggested;
            (Some(e), k)
        }
    };
    let clustering = analysis::kmeans(&points, k, restarts, seed)?;
    let plot = if want_plot {
        Some(match &elbow {
            Some(e) => svg::curve_plot(&e.polyline(), "k-means error by k"),
            None => centroid_plot(&clustering)?,
        })
    } else {
        None
    };
    let doc = ClusterDoc {
        observations: points.len(),
        rejected,
        role,
        elbow,
        clustering,
    };
    finish("cluster", game.as_ref().and_then(Game::name), Some(seed), doc, plot)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifyDoc {
    pub observations: usize,
    pub rejected: usize,
    pub symmetric: bool,
    pub report: analysis::ClassReport,
    pub best_response: analysis::BrTable,
    pub summaries: Vec<analysis::RoleSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub clustering: Option<Clustering>,
}

#[allow(clippy::too_many_arguments)]
fn classify(
    source: &str,
    data: &Path,
    game_id: Option<&str>,
    space: SpaceArg,
    k: Option<usize>,
    restarts: usize,
    seed: Option<u64>,
    want_plot: bool,
) -> Result<Outcome, CliError> {
    let game = load_game(source)?;
    let name = game_name(&game, source).to_string();
    let (all, rejected) = read_observations(data, Some(&game))?;
    let id = game_id.unwrap_or(&name);
    let mut obs: Vec<Observation> = all.iter().filter(|o| o.game == id).cloned().collect();
    if obs.is_empty() && game_id.is_none() {
        let mut ids: Vec<&str> = all.iter().map(|o| o.game.as_str()).collect();
        ids.dedup();
        if ids.len() == 1 {
            obs = all.clone();
        }
    }
    if obs.is_empty() {
        return Err(CliError::Validation(format!("no observations for game `{id}`")));
    }
    let symmetric = match space {
        SpaceArg::Auto => game.symmetric(),
        SpaceArg::Symmetric => true,
        SpaceArg::Asymmetric => false,
    };
    let meqs = msets::enumerate_m_equilibria(&game, &if symmetric { Options::symmetric_exact() } else { Options::exact() })?;
    let clustering = match k {
        Some(k) => {
            let seed = need_seed(seed, "k-means")?;
            let pts: Vec<Vec<f64>> = obs.iter().map(|o| o.belief.clone()).collect();
            Some(analysis::kmeans(&pts, k, restarts, seed)?)
        }
        None => None,
    };
    let report = analysis::classify_into_sets(&game, &obs, &meqs, clustering.as_ref())?;
    let plot = if want_plot {
        if !symmetric {
            return Err(CliError::Capability("classification plots cover symmetric sets".into()));
        }
        let data = plot_data(&meqs)?;
        let colors = colors(&meqs);
        let max = report.clusters.iter().map(|c| c.size).max().unwrap_or(1).max(1) as f64;
        Some(svg::document(&[(data.frame, "choices"), (data.frame, "beliefs")], |panels, out| {
            let inner = svg::msets_plot(&data, &colors, None);
            // reuse the set drawing, then add the clusters on top
            for line in inner.lines().filter(|l| !l.starts_with("<svg") && !l.starts_with("</svg") && !l.starts_with("<rect width")) {
                out.push_str(line);
                out.push('\n');
            }
            for c in &report.clusters {
                let r = 3.0 + 12.0 * (c.size as f64 / max).sqrt();
                let fill = c.belief.set.map_or(svg::NON_COLORABLE, |s| svg::fill(&colors, s));
                svg::circle(out, &panels[1], svg::mixture_point(&c.centroid), r, fill);
                svg::circle(out, &panels[0], svg::mixture_point(&c.mean_choice), r, fill);
            }
        }))
    } else {
        None
    };
    let doc = ClassifyDoc {
        observations: obs.len(),
        rejected,
        symmetric,
        best_response: analysis::best_response_rate(&game, &obs)?,
        summaries: analysis::describe(&game, &obs),
        report,
        clustering,
    };
    finish("classify", Some(&name), k.and(seed), doc, plot)
}

/// Parse a belief distribution flag.
pub fn parse_beliefs(text: &str) -> Result<fixtures::BeliefDist, CliError> {
    let bad = || CliError::Validation(format!("bad belief distribution `{text}`"));
    let (kind, rest) = text.split_once(':').unwrap_or((text, ""));
    match kind {
        "uniform" => Ok(fixtures::BeliefDist::Uniform),
        "interval" => {
            let (lo, hi) = rest.split_once(':').ok_or_else(bad)?;
            let lo: f64 = lo.parse().map_err(|_| bad())?;
            let hi: f64 = hi.parse().map_err(|_| bad())?;
            if !(0.0..=1.0).contains(&lo) || !(lo..=1.0).contains(&hi) {
                return Err(bad());
            }
            Ok(fixtures::BeliefDist::Interval { lo, hi })
        }
        "point" => Ok(fixtures::BeliefDist::Point(parse_mixture(rest)?)),
        "blobs" => {
            let (sd, centers) = rest.split_once(':').ok_or_else(bad)?;
            let sd: f64 = sd.parse().map_err(|_| bad())?;
            if !(sd > 0.0) {
                return Err(bad());
            }
            Ok(fixtures::BeliefDist::Blobs {
                centers: parse_groups(centers)?,
                sd,
            })
        }
        _ => Err(bad()),
    }
}

fn synth(source: &str, subjects: usize, rounds: usize, beliefs: &str, br_rate: f64, seed: Option<u64>) -> Result<Outcome, CliError> {
    let seed = need_seed(seed, "synthetic data")?;
    let game = load_game(source)?;
    if game.num_players() != 2 {
        return Err(CliError::Capability("synthetic data covers two-player games".into()));
    }
    if !(0.0..=1.0).contains(&br_rate) {
        return Err(CliError::Validation("--br-rate must lie in [0, 1]".into()));
    }
    let belief = parse_beliefs(beliefs)?;
    let k = |role: usize| game.actions(1 - role);
    let fits = |v: &[f64], role: usize| v.len() == k(role) && v.iter().all(|x| *x >= 0.0) && (v.iter().sum::<f64>() - 1.0).abs() < 1e-9;
    let ok = match &belief {
        fixtures::BeliefDist::Uniform => true,
        fixtures::BeliefDist::Interval { .. } => k(0) == 2 && k(1) == 2,
        fixtures::BeliefDist::Point(p) => fits(p, 0) && fits(p, 1),
        fixtures::BeliefDist::Blobs { centers, .. } => !centers.is_empty() && centers.iter().all(|c| fits(c, 0) && fits(c, 1)),
    };
    if !ok {
        return Err(CliError::Validation("belief distribution does not fit the opponents' action counts".into()));
    }
    let spec = fixtures::SynthSpec {
        n_subjects: subjects,
        rounds,
        belief,
        best_response_rate: br_rate,
        seed,
    };
    Ok(Outcome {
        document: fixtures::synth_dataset(&game, game_name(&game, source), &spec),
        plot: None,
    })
}
