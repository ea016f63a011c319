//! Minimal SVG plots.
//!
//! Two frames: the unit square (2×2 games, horizontal axis Column's `p`,
//! vertical Row's `q`) and the ternary triangle (first action bottom left,
//! second bottom right, third at the apex). Sets are filled with a fixed
//! palette indexed by the position of their color among all rank
//! assignments in lexicographic order; non-colorable sets are drawn in black.

use std::fmt::Write;

use msets::doc::{ternary, Frame, PlotData, Shape, ShapeKind};
use msets::{MarkerKind, RankAssignment};

pub const PALETTE: [&str; 12] = [
    "#d62728", "#7f7f7f", "#1f77b4", "#e6c619", "#2ca02c", "#17becf", "#e377c2", "#ff7f0e", "#8c564b", "#9467bd", "#bcbd22", "#393b79",
];
pub const NON_COLORABLE: &str = "#000000";

const SIZE: f64 = 300.0;
const MARGIN: f64 = 24.0;

/// Palette entry of a color.
pub fn color_of(color: &RankAssignment) -> &'static str {
    let counts: Vec<usize> = color.orders().iter().map(Vec::len).collect();
    let i = RankAssignment::all(&counts).iter().position(|c| c == color).unwrap_or(0);
    PALETTE[i % PALETTE.len()]
}

/// One panel: a frame placed at a horizontal offset.
#[derive(Debug, Clone, Copy)]
pub struct Panel {
    pub frame: Frame,
    pub x0: f64,
}

impl Panel {
    pub fn px(&self, at: [f64; 2]) -> (f64, f64) {
        let h = match self.frame {
            Frame::Square => 1.0,
            Frame::Ternary => 3f64.sqrt() / 2.0,
        };
        (self.x0 + MARGIN + at[0] * SIZE, MARGIN + (h - at[1]) * SIZE)
    }

    fn outline(&self, out: &mut String, title: &str) {
        let corners: Vec<[f64; 2]> = match self.frame {
            Frame::Square => vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]],
            Frame::Ternary => vec![[0.0, 0.0], [1.0, 0.0], [0.5, 3f64.sqrt() / 2.0]],
        };
        polygon(out, self, &corners, "none", "#333333", 1.0);
        let (x, _) = self.px([0.0, 0.0]);
        let _ = writeln!(out, r#"<text x="{x:.2}" y="{:.2}" font-size="12" font-family="sans-serif">{title}</text>"#, MARGIN - 8.0);
    }
}

fn points(panel: &Panel, pts: &[[f64; 2]]) -> String {
    pts.iter()
        .map(|&p| {
            let (x, y) = panel.px(p);
            format!("{x:.2},{y:.2}")
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn polygon(out: &mut String, panel: &Panel, pts: &[[f64; 2]], fill: &str, stroke: &str, width: f64) {
    let _ = writeln!(
        out,
        r#"<polygon points="{}" fill="{fill}" fill-opacity="0.6" stroke="{stroke}" stroke-width="{width}"/>"#,
        points(panel, pts)
    );
}

pub fn polyline(out: &mut String, panel: &Panel, pts: &[[f64; 2]], stroke: &str, width: f64) {
    let _ = writeln!(
        out,
        r#"<polyline points="{}" fill="none" stroke="{stroke}" stroke-width="{width}"/>"#,
        points(panel, pts)
    );
}

pub fn circle(out: &mut String, panel: &Panel, at: [f64; 2], r: f64, fill: &str) {
    let (x, y) = panel.px(at);
    let _ = writeln!(out, r##"<circle cx="{x:.2}" cy="{y:.2}" r="{r:.2}" fill="{fill}" fill-opacity="0.8" stroke="#000000" stroke-width="0.5"/>"##);
}

fn square_marker(out: &mut String, panel: &Panel, at: [f64; 2]) {
    let (x, y) = panel.px(at);
    let _ = writeln!(
        out,
        r##"<rect x="{:.2}" y="{:.2}" width="8" height="8" fill="none" stroke="#000000" stroke-width="1.5"/>"##,
        x - 4.0,
        y - 4.0
    );
}

fn shape(out: &mut String, panel: &Panel, s: &Shape, fill: &str) {
    match s.kind {
        ShapeKind::Polygon => polygon(out, panel, &s.points, fill, fill, 0.5),
        ShapeKind::Segment => polyline(out, panel, &s.points, fill, 3.0),
        ShapeKind::Point => circle(out, panel, s.points[0], 3.0, fill),
        ShapeKind::Cloud => {
            for &p in &s.points {
                let (x, y) = panel.px(p);
                let _ = writeln!(out, r#"<circle cx="{x:.2}" cy="{y:.2}" r="1" fill="{fill}" fill-opacity="0.5"/>"#);
            }
        }
    }
}

/// A document of `panels` side by side; `body` draws into it.
pub fn document(frames: &[(Frame, &str)], body: impl FnOnce(&[Panel], &mut String)) -> String {
    let panels: Vec<Panel> = frames
        .iter()
        .enumerate()
        .map(|(i, &(frame, _))| Panel {
            frame,
            x0: i as f64 * (SIZE + 2.0 * MARGIN),
        })
        .collect();
    let width = frames.len() as f64 * (SIZE + 2.0 * MARGIN);
    let height = SIZE + 2.0 * MARGIN;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">"#
    );
    let _ = writeln!(out, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##);
    for (p, (_, title)) in panels.iter().zip(frames) {
        p.outline(&mut out, title);
    }
    body(&panels, &mut out);
    out.push_str("</svg>\n");
    out
}

/// Fill for set `i` of a list of colors (`None` for non-colorable sets).
pub fn fill(colors: &[Option<RankAssignment>], set: usize) -> &'static str {
    colors.get(set).and_then(Option::as_ref).map_or(NON_COLORABLE, color_of)
}

/// Choice sets on the left, belief sets on the right, with Nash (disk) and
/// uniform (square) markers on the choice panel.
pub fn msets_plot(data: &PlotData, colors: &[Option<RankAssignment>], overlay: Option<&[[f64; 2]]>) -> String {
    document(&[(data.frame, "choice sets"), (data.frame, "belief sets")], |panels, out| {
        for s in &data.choice {
            shape(out, &panels[0], s, fill(colors, s.set));
        }
        for s in &data.belief {
            shape(out, &panels[1], s, fill(colors, s.set));
        }
        for m in &data.markers {
            match m.kind {
                MarkerKind::Nash => circle(out, &panels[0], m.at, 4.0, "#000000"),
                MarkerKind::Uniform => square_marker(out, &panels[0], m.at),
            }
        }
        if let Some(path) = overlay {
            polyline(out, &panels[0], path, "#000000", 1.5);
        }
    })
}

/// Plot coordinates of a mixture: ternary for three actions, `(x, x)` on the
/// diagonal for two.
pub fn mixture_point(x: &[f64]) -> [f64; 2] {
    match x.len() {
        3 => ternary(x),
        _ => [x[0], x[0]],
    }
}

/// A `(k, error)` curve on an auto-scaled square frame.
pub fn curve_plot(points: &[[f64; 2]], title: &str) -> String {
    let (xmin, xmax) = points.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| (a.min(p[0]), b.max(p[0])));
    let ymax = points.iter().fold(0.0f64, |a, p| a.max(p[1]));
    let sx = if xmax > xmin { xmax - xmin } else { 1.0 };
    let sy = if ymax > 0.0 { ymax } else { 1.0 };
    let scaled: Vec<[f64; 2]> = points.iter().map(|p| [(p[0] - xmin) / sx, p[1] / sy]).collect();
    document(&[(Frame::Square, title)], |panels, out| {
        polyline(out, &panels[0], &scaled, "#1f77b4", 1.5);
        for &p in &scaled {
            circle(out, &panels[0], p, 2.5, "#1f77b4");
        }
    })
}
