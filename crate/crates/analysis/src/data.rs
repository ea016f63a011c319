//! Delimited-text observations.
//!
//! Header row with `subject,round,role,game,choice` followed by belief columns
//! `belief_1, …` (any column whose name starts with `belief`). `role` is `row`
//! or `column`; `choice` is a zero-based action index; trailing empty belief
//! cells are dropped so games of different sizes can share a file.

use std::path::Path;

use game_core::Game;
use serde::{Deserialize, Serialize};

use crate::AnalysisError;

/// Beliefs off the simplex by more than this are rejected.
pub const BELIEF_REJECT_TOL: f64 = 1e-3;
/// Accepted beliefs sum to one within this.
pub const BELIEF_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Row,
    Column,
}

impl Role {
    /// Player index: row is 0, column is 1.
    pub fn player(self) -> usize {
        match self {
            Role::Row => 0,
            Role::Column => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    pub subject: String,
    pub round: usize,
    pub role: Role,
    pub game: String,
    pub choice: usize,
    /// Stated distribution over the opponent's actions.
    pub belief: Vec<f64>,
}

/// A rejected row with its line number in the file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowError {
    pub line: u64,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Ingested {
    pub observations: Vec<Observation>,
    pub rejected: Vec<RowError>,
}

/// Read a file; with a game, rows whose choice or belief does not fit the
/// game are rejected too.
pub fn ingest(path: impl AsRef<Path>, game: Option<&Game>) -> Result<Ingested, AnalysisError> {
    let text = std::fs::read_to_string(path)?;
    ingest_str(&text, game)
}

pub fn ingest_str(text: &str, game: Option<&Game>) -> Result<Ingested, AnalysisError> {
    let mut reader = csv::ReaderBuilder::new()
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| AnalysisError::Format(e.to_string()))?.clone();
    let find = |name: &str| {
        headers
            .iter()
            .position(|h| h.eq_ignore_ascii_case(name))
            .ok_or_else(|| AnalysisError::Format(format!("missing column `{name}`")))
    };
    let cols = [find("subject")?, find("round")?, find("role")?, find("game")?, find("choice")?];
    let belief_cols: Vec<usize> = headers
        .iter()
        .enumerate()
        .filter(|(_, h)| h.to_ascii_lowercase().starts_with("belief"))
        .map(|(i, _)| i)
        .collect();
    if belief_cols.is_empty() {
        return Err(AnalysisError::Format("missing belief columns".into()));
    }
    let mut out = Ingested::default();
    for record in reader.records() {
        let record = match record {
            Ok(r) => r,
            Err(e) => {
                let line = e.position().map_or(0, |p| p.line());
                out.rejected.push(RowError { line, reason: e.to_string() });
                continue;
            }
        };
        let line = record.position().map_or(0, |p| p.line());
        match parse_row(&record, &cols, &belief_cols, game) {
            Ok(o) => out.observations.push(o),
            Err(reason) => out.rejected.push(RowError { line, reason }),
        }
    }
    Ok(out)
}

fn parse_row(record: &csv::StringRecord, cols: &[usize; 5], belief_cols: &[usize], game: Option<&Game>) -> Result<Observation, String> {
    let get = |i: usize| record.get(i).unwrap_or("");
    let subject = get(cols[0]).to_string();
    if subject.is_empty() {
        return Err("empty subject".into());
    }
    let round: usize = get(cols[1]).parse().map_err(|_| format!("bad round `{}`", get(cols[1])))?;
    let role = match get(cols[2]).to_ascii_lowercase().as_str() {
        "row" => Role::Row,
        "column" | "col" => Role::Column,
        other => return Err(format!("bad role `{other}`")),
    };
    let game_id = get(cols[3]).to_string();
    let choice: usize = get(cols[4]).parse().map_err(|_| format!("bad choice `{}`", get(cols[4])))?;
    let cells: Vec<&str> = belief_cols.iter().map(|&i| get(i)).collect();
    let used = cells.iter().rposition(|c| !c.is_empty()).map_or(0, |p| p + 1);
    if used == 0 {
        return Err("no belief values".into());
    }
    let mut belief = Vec::with_capacity(used);
    for c in &cells[..used] {
        let v: f64 = c.parse().map_err(|_| format!("bad belief value `{c}`"))?;
        if !v.is_finite() || v < -BELIEF_REJECT_TOL || v > 1.0 + BELIEF_REJECT_TOL {
            return Err(format!("belief value {v} outside [0, 1]"));
        }
        belief.push(v);
    }
    let sum: f64 = belief.iter().sum();
    if (sum - 1.0).abs() > BELIEF_REJECT_TOL {
        return Err(format!("belief sums to {sum}"));
    }
    if (sum - 1.0).abs() > BELIEF_TOL || belief.iter().any(|&v| v < 0.0) {
        belief.iter_mut().for_each(|v| *v = v.max(0.0));
        let s: f64 = belief.iter().sum();
        belief.iter_mut().for_each(|v| *v /= s);
    }
    if let Some(g) = game {
        let me = role.player();
        if g.num_players() != 2 {
            return Err("observations need a two-player game".into());
        }
        if choice >= g.actions(me) {
            return Err(format!("choice {choice} out of range"));
        }
        if belief.len() != g.actions(1 - me) {
            return Err(format!("belief has {} entries, expected {}", belief.len(), g.actions(1 - me)));
        }
    }
    Ok(Observation {
        subject,
        round,
        role,
        game: game_id,
        choice,
        belief,
    })
}
