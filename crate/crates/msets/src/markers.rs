//! Nash profiles and `σ^u` attached to the sets whose closure contains them.

use game_core::{expected_payoffs_at, uniform, Game, Scalar, Q};
use nash::{mixed_nash_bimatrix, pure_nash, symmetric_nash};

use crate::region::{MEquilibrium, Marker, MarkerKind, Representation, Space};
use crate::RankAssignment;

/// Candidate markers, laid out per factor (a single factor when symmetric).
pub fn candidates(game: &Game, symmetric: bool) -> Vec<Marker> {
    let n = game.num_players();
    let mut profiles: Vec<Vec<Vec<Q>>> = Vec::new();
    if n == 2 {
        let set = if symmetric { symmetric_nash(game) } else { mixed_nash_bimatrix(game) };
        match set {
            Ok(s) => {
                profiles.extend(s.points.into_iter().map(|p| p.profile));
                for c in s.continua {
                    profiles.extend(c.vertices);
                }
            }
            Err(_) => profiles.extend(pure_nash(game).into_iter().map(|p| p.profile)),
        }
    } else {
        profiles.extend(pure_nash(game).into_iter().map(|p| p.profile));
    }
    let mut out: Vec<Marker> = Vec::new();
    for p in profiles {
        let point = if symmetric {
            if p.iter().any(|s| *s != p[0]) {
                continue;
            }
            vec![p[0].clone()]
        } else {
            p
        };
        let m = Marker {
            kind: MarkerKind::Nash,
            point,
        };
        if !out.contains(&m) {
            out.push(m);
        }
    }
    let u: Vec<Vec<Q>> = if symmetric {
        vec![uniform(game.actions(0))]
    } else {
        (0..n).map(|i| uniform(game.actions(i))).collect()
    };
    out.push(Marker {
        kind: MarkerKind::Uniform,
        point: u,
    });
    out
}

/// Closure of a sampled color: mixtures and payoffs weakly ordered along it.
pub fn weakly_in_color(game: &Game, color: &RankAssignment, point: &[Vec<f64>], symmetric: bool) -> bool {
    let n = game.num_players();
    let profile: Vec<Vec<f64>> = if symmetric { vec![point[0].clone(); n] } else { point.to_vec() };
    let players = if symmetric { 1 } else { n };
    (0..players).all(|i| {
        let pi = expected_payoffs_at(game, i, &profile);
        let order = color.order(i);
        order.windows(2).all(|w| {
            let s = &profile[i];
            s[w[0]].cmp_tie(&s[w[1]]) != std::cmp::Ordering::Greater
                && pi[w[0]].cmp_tie(&pi[w[1]]) != std::cmp::Ordering::Greater
        })
    })
}

/// Markers lying in the closure of an M-equilibrium choice set.
pub fn boundary_markers(game: &Game, meq: &MEquilibrium) -> Vec<Marker> {
    let symmetric = meq.choice_set.space == Space::SymmetricChoice;
    attach(game, &candidates(game, symmetric), meq, symmetric)
}

pub(crate) fn attach(game: &Game, candidates: &[Marker], meq: &MEquilibrium, symmetric: bool) -> Vec<Marker> {
    candidates
        .iter()
        .filter(|m| match &meq.choice_set.representation {
            Representation::Exact(_) => meq.choice_set.contains_closed(&m.point),
            _ => {
                let f: Vec<Vec<f64>> = m.point.iter().map(|v| v.iter().map(Scalar::to_f64).collect()).collect();
                meq.choice_set
                    .colors
                    .iter()
                    .any(|c| weakly_in_color(game, c, &f, symmetric))
            }
        })
        .cloned()
        .collect()
}
