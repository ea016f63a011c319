//! Result documents and plot data.
//!
//! Rationals are written as `"num/den"` strings. Sampled clouds are thinned to
//! at most [`DOC_POINTS`] points per cloud.

use game_core::{parse_q, q_to_string, Game, Polytope, Rel, Scalar, Q};

use crate::region::{MEquilibrium, MarkerKind, Measure, Representation, RegionSet, Space};
use crate::{Mode, Options, RankAssignment};

pub const DOC_POINTS: usize = 500;

/// Serde adapter for `Option<Q>` as an optional `"num/den"` string.
pub mod opt_q {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<Q>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(q) => s.serialize_some(&q_to_string(q)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Q>, D::Error> {
        let s: Option<String> = Option::deserialize(d)?;
        s.map(|t| parse_q(&t).ok_or_else(|| serde::de::Error::custom(format!("bad rational {t:?}"))))
            .transpose()
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ConstraintDoc {
    pub a: Vec<String>,
    pub rel: Rel,
    pub b: String,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct PolytopeDoc {
    /// Number of coordinates (the polytope lies in that simplex).
    pub ambient: usize,
    pub constraints: Vec<ConstraintDoc>,
    pub vertices: Vec<Vec<String>>,
}

impl PolytopeDoc {
    pub fn from_polytope(p: &Polytope<Q>) -> Self {
        PolytopeDoc {
            ambient: p.ambient(),
            constraints: p
                .constraints()
                .iter()
                .map(|c| ConstraintDoc {
                    a: c.a.iter().map(q_to_string).collect(),
                    rel: c.rel,
                    b: q_to_string(&c.b),
                })
                .collect(),
            vertices: p.vertices().iter().map(|v| v.iter().map(q_to_string).collect()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct MarkerDoc {
    pub kind: MarkerKind,
    pub point: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SampleDoc {
    /// Accepted points per cloud before thinning.
    pub counts: Vec<usize>,
    pub clouds: Vec<Vec<Vec<f64>>>,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct RegionDoc {
    pub space: Space,
    pub dimension: usize,
    pub measure: Measure,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pieces: Option<Vec<Vec<PolytopeDoc>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<SampleDoc>,
    pub boundary_markers: Vec<MarkerDoc>,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ColorDoc {
    /// Action labels per player, lowest rank first.
    pub orders: Vec<Vec<String>>,
    pub rank_vectors: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ComponentDoc {
    pub dimension: usize,
    pub pieces: usize,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct EquilibriumDoc {
    pub colorable: bool,
    pub colors: Vec<ColorDoc>,
    pub choice: RegionDoc,
    pub belief: RegionDoc,
    pub components: Vec<ComponentDoc>,
    pub disconnected_warning: bool,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ResultDocument {
    pub game: String,
    pub actions: Vec<Vec<String>>,
    pub mode: Mode,
    pub symmetric: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub equilibria: Vec<EquilibriumDoc>,
}

fn thin(points: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let stride = points.len().div_ceil(DOC_POINTS).max(1);
    points.iter().step_by(stride).cloned().collect()
}

fn color_doc(game: &Game, c: &RankAssignment) -> ColorDoc {
    let labels = game.labels();
    ColorDoc {
        orders: c
            .orders()
            .iter()
            .enumerate()
            .map(|(i, o)| o.iter().map(|&a| labels[i][a].clone()).collect())
            .collect(),
        rank_vectors: c
            .rank_vectors_exact()
            .iter()
            .map(|r| r.iter().map(q_to_string).collect())
            .collect(),
    }
}

fn region_doc(r: &RegionSet) -> RegionDoc {
    let (pieces, samples) = match &r.representation {
        Representation::Exact(ps) => (
            Some(ps.iter().map(|p| p.iter().map(PolytopeDoc::from_polytope).collect()).collect()),
            None,
        ),
        Representation::Sampled(points) => {
            let flat: Vec<Vec<f64>> = points.iter().map(|p| p.concat()).collect();
            (
                None,
                Some(SampleDoc {
                    counts: vec![flat.len()],
                    clouds: vec![thin(&flat)],
                }),
            )
        }
        Representation::SampledFactors(clouds) => (
            None,
            Some(SampleDoc {
                counts: clouds.iter().map(Vec::len).collect(),
                clouds: clouds.iter().map(|c| thin(c)).collect(),
            }),
        ),
    };
    RegionDoc {
        space: r.space,
        dimension: r.dimension,
        measure: r.measure.clone(),
        pieces,
        samples,
        boundary_markers: r
            .boundary_markers
            .iter()
            .map(|m| MarkerDoc {
                kind: m.kind,
                point: m.point.iter().map(|v| v.iter().map(q_to_string).collect()).collect(),
            })
            .collect(),
    }
}

pub fn document(game: &Game, options: &Options, meqs: &[MEquilibrium]) -> ResultDocument {
    let sampled = options.mode == Mode::Sampled;
    ResultDocument {
        game: game.name().unwrap_or("game").to_string(),
        actions: game.labels().to_vec(),
        mode: options.mode,
        symmetric: options.symmetric,
        samples: sampled.then_some(options.samples),
        seed: sampled.then_some(options.seed),
        equilibria: meqs
            .iter()
            .map(|m| EquilibriumDoc {
                colorable: m.colorable,
                colors: m.choice_set.colors.iter().map(|c| color_doc(game, c)).collect(),
                choice: region_doc(&m.choice_set),
                belief: region_doc(&m.belief_set),
                components: m
                    .components
                    .iter()
                    .map(|c| ComponentDoc {
                        dimension: c.dimension,
                        pieces: c.pieces.len(),
                    })
                    .collect(),
                disconnected_warning: m.disconnected_warning,
            })
            .collect(),
    }
}

/// Plot frame: the unit square `(p, q)` for 2×2 games, or the ternary triangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Frame {
    Square,
    Ternary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ShapeKind {
    Polygon,
    Segment,
    Point,
    Cloud,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Shape {
    /// Index of the M-equilibrium.
    pub set: usize,
    pub colorable: bool,
    pub kind: ShapeKind,
    pub points: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct PlotMarker {
    pub kind: MarkerKind,
    pub at: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct PlotData {
    pub frame: Frame,
    pub choice: Vec<Shape>,
    pub belief: Vec<Shape>,
    pub markers: Vec<PlotMarker>,
}

/// Ternary coordinates: first action at the origin, second at `(1, 0)`, third at the apex.
pub fn ternary(x: &[f64]) -> [f64; 2] {
    [x[1] + 0.5 * x[2], x[2] * 3f64.sqrt() / 2.0]
}

/// Project a profile (laid out per factor) to the plot plane.
///
/// Square frame: horizontal axis is the second factor's first entry (Column's
/// `p`, or Row's belief about it), vertical is the first factor's (Row's `q`).
fn project(frame: Frame, factors: &[Vec<f64>]) -> [f64; 2] {
    match (frame, factors.len()) {
        (Frame::Ternary, _) => ternary(&factors[0]),
        (Frame::Square, 1) => [factors[0][0], factors[0][0]],
        (Frame::Square, _) => [factors[1][0], factors[0][0]],
    }
}

fn frame_of(m: &MEquilibrium) -> Option<Frame> {
    let sym = matches!(m.choice_set.space, Space::SymmetricChoice);
    let sizes: Vec<usize> = m.choice_set.colors.first()?.orders().iter().map(Vec::len).collect();
    match (sym, sizes.as_slice()) {
        (true, [3]) => Some(Frame::Ternary),
        (true, [2]) | (false, [2, 2]) => Some(Frame::Square),
        _ => None,
    }
}

/// Planar convex hull (monotone chain), counter-clockwise.
pub fn hull(mut pts: Vec<[f64; 2]>) -> Vec<[f64; 2]> {
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    pts.dedup_by(|a, b| (a[0] - b[0]).abs() < 1e-12 && (a[1] - b[1]).abs() < 1e-12);
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: [f64; 2], a: [f64; 2], b: [f64; 2]| (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    let mut lower: Vec<[f64; 2]> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 1e-12 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<[f64; 2]> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 1e-12 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn shapes(frame: Frame, set: usize, colorable: bool, r: &RegionSet) -> Vec<Shape> {
    let shape = |pts: Vec<[f64; 2]>, kind: Option<ShapeKind>| {
        let h = if kind == Some(ShapeKind::Cloud) { pts } else { hull(pts) };
        let kind = kind.unwrap_or(match h.len() {
            1 => ShapeKind::Point,
            2 => ShapeKind::Segment,
            _ => ShapeKind::Polygon,
        });
        Shape {
            set,
            colorable,
            kind,
            points: h,
        }
    };
    match &r.representation {
        Representation::Exact(pieces) => pieces
            .iter()
            .map(|piece| {
                // every combination of factor vertices
                let mut combos: Vec<Vec<Vec<f64>>> = vec![Vec::new()];
                for p in piece {
                    let vs: Vec<Vec<f64>> = p.vertices().iter().map(|v| v.iter().map(Scalar::to_f64).collect()).collect();
                    combos = combos
                        .into_iter()
                        .flat_map(|c| {
                            vs.iter().map(move |v| {
                                let mut c2 = c.clone();
                                c2.push(v.clone());
                                c2
                            })
                        })
                        .collect();
                }
                shape(combos.iter().map(|c| project(frame, c)).collect(), None)
            })
            .collect(),
        Representation::Sampled(points) => {
            let thinned: Vec<&Vec<Vec<f64>>> = points.iter().step_by(points.len().div_ceil(DOC_POINTS).max(1)).collect();
            vec![shape(thinned.iter().map(|p| project(frame, p)).collect(), Some(ShapeKind::Cloud))]
        }
        Representation::SampledFactors(clouds) => {
            if frame == Frame::Square && clouds.len() == 2 {
                // independent factors: pair the thinned clouds index by index
                let a = thin(&clouds[0]);
                let b = thin(&clouds[1]);
                let pts = a.iter().zip(&b).map(|(x, y)| [x[0], y[0]]).collect();
                vec![shape(pts, Some(ShapeKind::Cloud))]
            } else {
                let pts = thin(&clouds[0]).iter().map(|p| project(frame, &[p.clone()])).collect();
                vec![shape(pts, Some(ShapeKind::Cloud))]
            }
        }
    }
}

/// Plot data for 2×2 games and symmetric games with two or three actions.
pub fn plot_data(meqs: &[MEquilibrium]) -> Option<PlotData> {
    let frame = frame_of(meqs.first()?)?;
    let mut out = PlotData {
        frame,
        choice: Vec::new(),
        belief: Vec::new(),
        markers: Vec::new(),
    };
    for (i, m) in meqs.iter().enumerate() {
        out.choice.extend(shapes(frame, i, m.colorable, &m.choice_set));
        out.belief.extend(shapes(frame, i, m.colorable, &m.belief_set));
        for mk in &m.choice_set.boundary_markers {
            let f: Vec<Vec<f64>> = mk.point.iter().map(|v| v.iter().map(Scalar::to_f64).collect()).collect();
            let pm = PlotMarker {
                kind: mk.kind,
                at: project(frame, &f),
            };
            if !out.markers.contains(&pm) {
                out.markers.push(pm);
            }
        }
    }
    Some(out)
}
