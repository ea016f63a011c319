//! Finite normal-form games with exact payoffs.

use std::fmt::Write as _;

use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::GameError;
use crate::scalar::{qi, Q, Scalar};

/// An n-player finite normal-form game.
///
/// Payoff tensors are stored flat in row-major order: player 1's action is the
/// most significant index.
#[derive(Debug, Clone, PartialEq)]
pub struct Game {
    name: Option<String>,
    action_counts: Vec<usize>,
    payoffs: Vec<Vec<Q>>,
    payoffs_f: Vec<Vec<f64>>,
    labels: Vec<Vec<String>>,
    symmetric: bool,
}

impl Game {
    /// Build a game from flat payoff tensors. `labels` may be empty, in which
    /// case actions are labelled `A`, `B`, `C`, ...
    pub fn new(
        action_counts: Vec<usize>,
        payoffs: Vec<Vec<Q>>,
        labels: Vec<Vec<String>>,
        symmetric: bool,
    ) -> Result<Self, GameError> {
        let n = action_counts.len();
        if n < 2 {
            return Err(GameError::Shape(format!("need at least 2 players, got {n}")));
        }
        if let Some(k) = action_counts.iter().find(|&&k| k < 2) {
            return Err(GameError::Shape(format!("every player needs at least 2 actions, got {k}")));
        }
        if payoffs.len() != n {
            return Err(GameError::Shape(format!(
                "expected {n} payoff tensors, got {}",
                payoffs.len()
            )));
        }
        let cells: usize = action_counts.iter().product();
        for (i, p) in payoffs.iter().enumerate() {
            if p.len() != cells {
                return Err(GameError::Shape(format!(
                    "player {} payoff tensor has {} cells, expected {cells}",
                    i + 1,
                    p.len()
                )));
            }
        }
        let labels = if labels.is_empty() {
            action_counts
                .iter()
                .map(|&k| (0..k).map(default_label).collect())
                .collect()
        } else {
            labels
        };
        if labels.len() != n || labels.iter().zip(&action_counts).any(|(l, &k)| l.len() != k) {
            return Err(GameError::Shape("action labels do not match action counts".into()));
        }
        let payoffs_f = payoffs
            .iter()
            .map(|p| p.iter().map(f64::from_q).collect())
            .collect();
        let game = Game {
            name: None,
            action_counts,
            payoffs,
            payoffs_f,
            labels,
            symmetric: false,
        };
        if symmetric && !game.has_symmetric_payoffs() {
            return Err(GameError::Symmetry);
        }
        Ok(Game { symmetric, ..game })
    }

    /// Two-player game from a table of `(row payoff, column payoff)` cells.
    pub fn bimatrix(cells: &[Vec<(i64, i64)>]) -> Result<Self, GameError> {
        let rows = cells.len();
        let cols = cells.first().map_or(0, |r| r.len());
        if cells.iter().any(|r| r.len() != cols) {
            return Err(GameError::Shape("ragged bimatrix".into()));
        }
        let a = cells.iter().flatten().map(|c| qi(c.0)).collect();
        let b = cells.iter().flatten().map(|c| qi(c.1)).collect();
        let mut g = Game::new(vec![rows, cols], vec![a, b], vec![], false)?;
        g.symmetric = g.has_symmetric_payoffs();
        Ok(g)
    }

    /// Symmetric two-player game from the row player's matrix.
    pub fn symmetric_from_row(rows: &[Vec<i64>]) -> Result<Self, GameError> {
        let cells: Vec<Vec<(i64, i64)>> = rows
            .iter()
            .enumerate()
            .map(|(k, r)| r.iter().enumerate().map(|(m, &v)| (v, rows[m][k])).collect())
            .collect();
        Game::bimatrix(&cells)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn with_labels(mut self, labels: Vec<Vec<String>>) -> Result<Self, GameError> {
        if labels.len() != self.num_players()
            || labels.iter().zip(&self.action_counts).any(|(l, &k)| l.len() != k)
        {
            return Err(GameError::Shape("action labels do not match action counts".into()));
        }
        self.labels = labels;
        Ok(self)
    }

    /// Same game with replaced payoffs (used for perturbations). The symmetric
    /// flag is recomputed.
    pub fn with_payoffs(&self, payoffs: Vec<Vec<Q>>) -> Result<Self, GameError> {
        let mut g = Game::new(self.action_counts.clone(), payoffs, self.labels.clone(), false)?;
        g.name = self.name.clone();
        g.symmetric = g.has_symmetric_payoffs();
        Ok(g)
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }
    pub fn num_players(&self) -> usize {
        self.action_counts.len()
    }
    pub fn action_counts(&self) -> &[usize] {
        &self.action_counts
    }
    pub fn actions(&self, player: usize) -> usize {
        self.action_counts[player]
    }
    pub fn labels(&self) -> &[Vec<String>] {
        &self.labels
    }
    pub fn symmetric(&self) -> bool {
        self.symmetric
    }
    pub fn num_cells(&self) -> usize {
        self.action_counts.iter().product()
    }
    /// Flat payoff tensor of `player`.
    pub fn payoff_tensor(&self, player: usize) -> &[Q] {
        &self.payoffs[player]
    }
    pub fn payoff_tensor_f64(&self, player: usize) -> &[f64] {
        &self.payoffs_f[player]
    }

    /// Flat index of a pure profile.
    pub fn index(&self, profile: &[usize]) -> usize {
        profile
            .iter()
            .zip(&self.action_counts)
            .fold(0, |acc, (&a, &k)| acc * k + a)
    }

    /// Pure profile of a flat index.
    pub fn profile(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.num_players()];
        for (slot, &k) in out.iter_mut().zip(&self.action_counts).rev() {
            *slot = index % k;
            index /= k;
        }
        out
    }

    pub fn payoff(&self, player: usize, profile: &[usize]) -> &Q {
        &self.payoffs[player][self.index(profile)]
    }

    /// Payoff as a scalar of the requested mode.
    pub fn payoff_as<S: Scalar>(&self, player: usize, index: usize) -> S {
        S::from_pair(&self.payoffs[player][index], self.payoffs_f[player][index])
    }

    /// For two-player games: `M[k][m]` is the payoff to `player` from own
    /// action `k` against opponent action `m`.
    pub fn payoff_matrix(&self, player: usize) -> Vec<Vec<Q>> {
        assert_eq!(self.num_players(), 2, "payoff_matrix needs a two-player game");
        let own = self.actions(player);
        let opp = self.actions(1 - player);
        (0..own)
            .map(|k| {
                (0..opp)
                    .map(|m| {
                        let prof = if player == 0 { [k, m] } else { [m, k] };
                        self.payoff(player, &prof).clone()
                    })
                    .collect()
            })
            .collect()
    }

    /// True when every player has the same action count and payoffs are
    /// invariant under relabelling players: `Π_i(c) = Π_1(c_i, c_{-i})` with the
    /// opponents' actions read in order. For two players this is the transpose
    /// identity `Π_1(a,b) = Π_2(b,a)`.
    pub fn has_symmetric_payoffs(&self) -> bool {
        let k = self.action_counts[0];
        if self.action_counts.iter().any(|&x| x != k) {
            return false;
        }
        let n = self.num_players();
        for idx in 0..self.num_cells() {
            let prof = self.profile(idx);
            for i in 0..n {
                // player i's view: own action first, opponents in player order
                let mut view = vec![prof[i]];
                view.extend(prof.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, &a)| a));
                if self.payoffs[i][idx] != self.payoffs[0][self.index(&view)] {
                    return false;
                }
                // player 1's payoff must not depend on the order of opponents
                if i == 0 && n > 2 {
                    let mut opp: Vec<usize> = view[1..].to_vec();
                    opp.sort_unstable();
                    let mut sorted = vec![view[0]];
                    sorted.extend(opp);
                    if self.payoffs[0][idx] != self.payoffs[0][self.index(&sorted)] {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Largest absolute payoff.
    pub fn max_abs_payoff(&self) -> f64 {
        self.payoffs_f
            .iter()
            .flatten()
            .fold(0.0f64, |m, v| m.max(v.abs()))
    }

    // ---- file format ----

    /// Parse the structured-text (JSON) game format.
    pub fn from_json(text: &str) -> Result<Self, GameError> {
        let file: GameFile = serde_json::from_str(text).map_err(|e| GameError::Parse(e.to_string()))?;
        file.into_game()
    }

    /// Canonical JSON text. `from_json(to_json(g))` reproduces `g`, and
    /// `to_json(from_json(t)) == t` for canonical text `t`.
    pub fn to_json(&self) -> Result<String, GameError> {
        let mut out = String::from("{\n");
        if let Some(name) = &self.name {
            let _ = writeln!(out, "  \"name\": {},", json(name));
        }
        let _ = writeln!(out, "  \"players\": {},", self.num_players());
        let _ = writeln!(out, "  \"actions\": {},", json(&self.labels));
        out.push_str("  \"payoffs\": [\n");
        for i in 0..self.num_players() {
            let ints = self.payoffs[i]
                .iter()
                .map(|v| {
                    if v.is_integer() {
                        v.to_integer().to_i64().ok_or(GameError::NonInteger)
                    } else {
                        Err(GameError::NonInteger)
                    }
                })
                .collect::<Result<Vec<i64>, _>>()?;
            let nested = nest(&ints, &self.action_counts);
            let sep = if i + 1 == self.num_players() { "" } else { "," };
            let _ = writeln!(out, "    {}{sep}", json(&nested));
        }
        out.push_str("  ],\n");
        let _ = writeln!(out, "  \"symmetric\": {}", self.symmetric);
        out.push_str("}\n");
        Ok(out)
    }
}

fn default_label(k: usize) -> String {
    if k < 26 {
        ((b'A' + k as u8) as char).to_string()
    } else {
        format!("a{}", k + 1)
    }
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("serializable")
}

/// Nested integer arrays of arbitrary depth.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Nested {
    Leaf(i64),
    List(Vec<Nested>),
}

fn nest(flat: &[i64], dims: &[usize]) -> Nested {
    if dims.is_empty() {
        return Nested::Leaf(flat[0]);
    }
    let stride: usize = dims[1..].iter().product();
    Nested::List(
        (0..dims[0])
            .map(|k| nest(&flat[k * stride..(k + 1) * stride], &dims[1..]))
            .collect(),
    )
}

fn flatten(n: &Nested, dims: &[usize], out: &mut Vec<i64>) -> Result<(), GameError> {
    match (n, dims) {
        (Nested::Leaf(v), []) => {
            out.push(*v);
            Ok(())
        }
        (Nested::List(items), [k, rest @ ..]) if items.len() == *k => {
            items.iter().try_for_each(|it| flatten(it, rest, out))
        }
        _ => Err(GameError::Shape("payoff array does not match action counts".into())),
    }
}

/// On-disk layout of a game.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameFile {
    #[serde(default)]
    pub name: Option<String>,
    pub players: usize,
    pub actions: Vec<Vec<String>>,
    pub payoffs: Vec<Nested>,
    pub symmetric: bool,
}

impl GameFile {
    pub fn into_game(self) -> Result<Game, GameError> {
        if self.actions.len() != self.players {
            return Err(GameError::Shape(format!(
                "players = {} but {} action lists",
                self.players,
                self.actions.len()
            )));
        }
        let counts: Vec<usize> = self.actions.iter().map(Vec::len).collect();
        let mut tensors = Vec::with_capacity(self.players);
        for p in &self.payoffs {
            let mut flat = Vec::new();
            flatten(p, &counts, &mut flat)?;
            tensors.push(flat.into_iter().map(qi).collect());
        }
        let mut g = Game::new(counts, tensors, self.actions, self.symmetric)?;
        g.name = self.name;
        Ok(g)
    }
}

/// Expected payoff of each pure action of `player` when the other players
/// follow `opponents` (listed in player order, skipping `player`).
///
/// `π_ik = Σ_{c_-i} Π_i(k, c_-i) ∏_{j≠i} σ_j(c_j)`.
pub fn expected_payoffs<S: Scalar>(
    game: &Game,
    player: usize,
    opponents: &[&[S]],
) -> Result<Vec<S>, GameError> {
    let n = game.num_players();
    if opponents.len() != n - 1 {
        return Err(GameError::Shape(format!(
            "expected {} opponent distributions, got {}",
            n - 1,
            opponents.len()
        )));
    }
    for (slot, j) in (0..n).filter(|&j| j != player).enumerate() {
        if opponents[slot].len() != game.actions(j) {
            return Err(GameError::Shape(format!(
                "belief about player {} has {} entries, expected {}",
                j + 1,
                opponents[slot].len(),
                game.actions(j)
            )));
        }
    }
    Ok(expected_payoffs_unchecked(game, player, opponents))
}

pub(crate) fn expected_payoffs_unchecked<S: Scalar>(
    game: &Game,
    player: usize,
    opponents: &[&[S]],
) -> Vec<S> {
    let n = game.num_players();
    let k = game.actions(player);
    let mut out = vec![S::zero(); k];
    for idx in 0..game.num_cells() {
        let prof = game.profile(idx);
        let mut w = S::one();
        let mut zero = false;
        for (slot, j) in (0..n).filter(|&j| j != player).enumerate() {
            let p = &opponents[slot][prof[j]];
            if p.is_zero() {
                zero = true;
                break;
            }
            w = w * p.clone();
        }
        if zero {
            continue;
        }
        let a = prof[player];
        out[a] = out[a].clone() + w * game.payoff_as::<S>(player, idx);
    }
    out
}

/// Expected payoffs of `player` when everyone else follows the matching entry of
/// a full profile (the player's own entry is ignored).
pub fn expected_payoffs_at<S: Scalar>(game: &Game, player: usize, profile: &[Vec<S>]) -> Vec<S> {
    let opp: Vec<&[S]> = profile
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != player)
        .map(|(_, s)| s.as_slice())
        .collect();
    expected_payoffs_unchecked(game, player, &opp)
}

/// Check that a vector is a probability distribution (exact in rational mode,
/// within 1e-12 in float mode).
pub fn is_distribution<S: Scalar>(x: &[S]) -> bool {
    let total = crate::scalar::sum(x);
    if S::EXACT {
        total == S::one() && x.iter().all(|v| *v >= S::zero())
    } else {
        (total.to_f64() - 1.0).abs() <= 1e-12 && x.iter().all(|v| v.to_f64() >= -1e-12)
    }
}

/// Uniform distribution over `k` actions.
pub fn uniform<S: Scalar>(k: usize) -> Vec<S> {
    vec![S::one() / S::from_i64(k as i64); k]
}

/// Degenerate distribution on action `a`.
pub fn pure<S: Scalar>(k: usize, a: usize) -> Vec<S> {
    (0..k).map(|m| if m == a { S::one() } else { S::zero() }).collect()
}

impl Game {
    /// Whether every payoff is an integer.
    pub fn integer_payoffs(&self) -> bool {
        self.payoffs.iter().flatten().all(|v| v.is_integer())
    }

    /// Whether all payoffs of a player are zero (degenerate input guard).
    pub fn trivial_player(&self, player: usize) -> bool {
        self.payoffs[player].iter().all(Zero::is_zero)
    }
}
