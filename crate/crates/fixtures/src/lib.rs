//! Reference games and synthetic observation data.
//!
//! Every game is stored in `games/<name>.json` in the standard game file format
//! and embedded at compile time.

mod synth;

use game_core::{Game, GameError};

pub use synth::{synth_dataset, synth_observations, BeliefDist, SynthRow, SynthSpec, CSV_HEADER_PREFIX};

macro_rules! catalog {
    ($($name:literal),* $(,)?) => {
        /// Names of all catalogued games.
        pub const NAMES: &[&str] = &[$($name),*];

        fn source(name: &str) -> Option<&'static str> {
            match name {
                $($name => Some(include_str!(concat!("../games/", $name, ".json"))),)*
                _ => None,
            }
        }
    };
}

catalog!(
    "mondrian",
    "intro_dominance",
    "nongeneric_3x3_left",
    "nongeneric_3x3_right",
    "coord",
    "chicken",
    "amp",
    "nongeneric_2x2",
    "unique_mixed",
    "ds_mid",
    "seven_eq",
    "three_player",
    "amp1",
    "amp2",
    "amp3",
    "amp4",
    "amp5",
    "ds1",
    "ds2",
    "nl",
    "km",
    "matching_pennies",
);

#[derive(Debug, thiserror::Error)]
pub enum FixtureError {
    #[error("unknown fixture `{0}`")]
    Unknown(String),
    #[error(transparent)]
    Game(#[from] GameError),
}

/// Load a catalogued game.
pub fn load(name: &str) -> Result<Game, FixtureError> {
    let text = source(name).ok_or_else(|| FixtureError::Unknown(name.to_string()))?;
    Ok(Game::from_json(text)?)
}

/// Canonical file text of a catalogued game.
pub fn raw(name: &str) -> Option<&'static str> {
    source(name)
}

/// The asymmetric matching-pennies family:
///
/// ```text
///        A              B
///   A  X+10, Z        W, Z+50
///   B  X, Y+10        W+10, Y
/// ```
pub fn amp_parametric(x: i64, y: i64, z: i64, w: i64) -> Game {
    Game::bimatrix(&[
        vec![(x + 10, z), (w, z + 50)],
        vec![(x, y + 10), (w + 10, y)],
    ])
    .expect("2x2 table")
}

/// `(X, Y, Z, W)` of `amp1` … `amp5`.
pub const AMP_PARAMETERS: [(i64, i64, i64, i64); 5] = [
    (10, 10, 10, 10),
    (50, 10, 10, 10),
    (50, 10, 50, 10),
    (50, 50, 50, 10),
    (50, 50, 50, 50),
];
