//! Command-line flags.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Clone, Parser)]
#[command(name = "meq", version, about = "M equilibrium, μ-equilibrium, QRE and Nash for finite normal-form games")]
pub struct Cli {
    /// Worker threads for parallel sections.
    #[arg(long, global = true, env = "MEQ_THREADS")]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

/// Where results go. Existing files are kept unless `--force` is given.
#[derive(Debug, Clone, Default, Args)]
pub struct OutputArgs {
    /// Result document (JSON); stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// SVG plot.
    #[arg(long)]
    pub plot: Option<PathBuf>,
    /// Overwrite existing output files.
    #[arg(long)]
    pub force: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    Sampled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RoleArg {
    Row,
    Column,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum SpaceArg {
    /// Symmetric sets when the game is flagged symmetric.
    #[default]
    Auto,
    Symmetric,
    Asymmetric,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// M-equilibrium choice and belief sets.
    Msets {
        /// Fixture name or game file path.
        #[arg(long)]
        game: String,
        #[arg(long, value_enum, default_value = "exact")]
        mode: ModeArg,
        #[arg(long)]
        symmetric: bool,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        /// Required in sampled mode.
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// The μ-equilibrium correspondence along a ρ grid (power family).
    MuSweep {
        #[arg(long)]
        game: String,
        /// `start:stop:step` or a comma-separated list.
        #[arg(long)]
        rho: String,
        /// Sup-norm distance for linking branches across grid points.
        #[arg(long, default_value_t = 0.2)]
        threshold: f64,
        /// Belief samples for games with three or more players.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Principal logit QRE branch.
    QreTrace {
        #[arg(long)]
        game: String,
        /// λ grid (`start:stop:step` or a list starting at 0); a geometric
        /// default scaled to the payoffs otherwise.
        #[arg(long)]
        grid: Option<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Nash equilibria in exact arithmetic.
    Nash {
        #[arg(long)]
        game: String,
        /// Symmetric equilibria of a symmetric game.
        #[arg(long)]
        symmetric: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Behavioral stability of a profile under payoff perturbation.
    Stability {
        #[arg(long)]
        game: String,
        /// Mixtures per player, `;`-separated, entries `,`-separated
        /// (fractions allowed), e.g. `9/10,1/10;9/10,1/10`.
        #[arg(long)]
        choice: String,
        /// Beliefs per player (`;`), opponents within a player by `/`.
        /// Defaults to correct beliefs.
        #[arg(long)]
        belief: Option<String>,
        #[arg(long, default_value_t = 0.01)]
        epsilon: f64,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Simulate the binarized slider mechanism and check incentive compatibility.
    ElicitSim {
        /// True beliefs per opponent (`;`), entries `,`-separated.
        #[arg(long)]
        truth: String,
        /// Reports, same layout; truthful when absent.
        #[arg(long)]
        report: Option<String>,
        #[arg(long, default_value_t = 1.0)]
        prize: f64,
        /// Sliders paid per round (subset rule).
        #[arg(long, default_value_t = 1)]
        subset: usize,
        #[arg(long, default_value_t = 100_000)]
        trials: usize,
        /// Report grid for the incentive check.
        #[arg(long, default_value_t = 0.001)]
        resolution: f64,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// k-means on stated beliefs, with the elbow curve when `--k` is absent.
    Cluster {
        /// Observation file.
        #[arg(long)]
        data: std::path::PathBuf,
        /// Game for validating rows.
        #[arg(long)]
        game: Option<String>,
        /// Keep one role only.
        #[arg(long, value_enum)]
        role: Option<RoleArg>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 2)]
        kmin: usize,
        #[arg(long, default_value_t = 15)]
        kmax: usize,
        #[arg(long, default_value_t = analysis::DEFAULT_RESTARTS)]
        restarts: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Synthetic observation file for a two-player game.
    Synth {
        #[arg(long)]
        game: String,
        #[arg(long, default_value_t = 20)]
        subjects: usize,
        #[arg(long, default_value_t = 10)]
        rounds: usize,
        /// `uniform`, `interval:LO:HI`, `point:a,b,…` or
        /// `blobs:SD:a,b,…;c,d,…` (centers separated by `;`).
        #[arg(long, default_value = "uniform")]
        beliefs: String,
        /// Probability that a choice best-responds to the stated belief.
        #[arg(long, default_value_t = 1.0)]
        br_rate: f64,
        #[arg(long)]
        seed: Option<u64>,
        /// Observation file (CSV); stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        force: bool,
    },
    /// Classify observations into the game's M-equilibrium sets.
    Classify {
        #[arg(long)]
        game: String,
        #[arg(long)]
        data: std::path::PathBuf,
        /// Observations with this game id (defaults to the game's name;
        /// all rows when none match that name and the file holds one game).
        #[arg(long)]
        game_id: Option<String>,
        #[arg(long, value_enum, default_value = "auto")]
        space: SpaceArg,
        /// Cluster beliefs into `k` groups first.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = analysis::DEFAULT_RESTARTS)]
        restarts: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        output: OutputArgs,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Msets { .. } => "msets",
            Command::MuSweep { .. } => "mu-sweep",
            Command::QreTrace { .. } => "qre-trace",
            Command::Nash { .. } => "nash",
            Command::Stability { .. } => "stability",
            Command::ElicitSim { .. } => "elicit-sim",
            Command::Cluster { .. } => "cluster",
            Command::Classify { .. } => "classify",
            Command::Synth { .. } => "synth",
        }
    }

    pub fn output(&self) -> OutputArgs {
        match self {
            Command::Synth { out, force, .. } => OutputArgs {
                out: out.clone(),
                plot: None,
                force: *force,
            },
            Command::Msets { output, .. }
            | Command::MuSweep { output, .. }
            | Command::QreTrace { output, .. }
            | Command::Nash { output, .. }
            | Command::Stability { output, .. }
            | Command::ElicitSim { output, .. }
            | Command::Cluster { output, .. }
            | Command::Classify { output, .. } => output.clone(),
        }
    }
}
