//! SVG rendering of disc scenes. Output is fully determined by the scene:
//! elements are written in scene order with six decimals.

use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::disc::{DiscPoint, Geodesic};
use super::sector::SectorBoundary;
use super::tessellation::Tessellation;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenePolygon {
    pub points: Vec<DiscPoint>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fill: Option<String>,
}

/// A geodesic piece; `to` may lie on the unit circle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneSegment {
    pub from: DiscPoint,
    pub to: DiscPoint,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stroke: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneLabel {
    pub at: DiscPoint,
    pub text: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Scene {
    #[serde(default)]
    pub tiles: Vec<ScenePolygon>,
    #[serde(default)]
    pub geodesics: Vec<SceneSegment>,
    #[serde(default)]
    pub points: Vec<DiscPoint>,
    #[serde(default)]
    pub labels: Vec<SceneLabel>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Style {
    pub size: u32,
    pub tile_stroke: String,
    pub line_stroke: String,
    pub stroke_width: f64,
    pub font_size: f64,
}

impl Default for Style {
    fn default() -> Self {
        Style {
            size: 800,
            tile_stroke: "#555555".into(),
            line_stroke: "#c0392b".into(),
            stroke_width: 0.003,
            font_size: 0.025,
        }
    }
}

impl Scene {
    pub fn from_tessellation(tess: &Tessellation) -> Scene {
        let mut s = Scene::default();
        s.add_tessellation(tess);
        s
    }

    pub fn add_tessellation(&mut self, tess: &Tessellation) {
        for t in &tess.tiles {
            self.tiles.push(ScenePolygon {
                points: t.vertices.clone(),
                fill: None,
            });
        }
    }

    pub fn add_polyline(&mut self, points: &[DiscPoint], stroke: Option<&str>) {
        for w in points.windows(2) {
            self.geodesics.push(SceneSegment {
                from: w[0],
                to: w[1],
                stroke: stroke.map(str::to_string),
            });
        }
    }

    pub fn add_sector(&mut self, sector: &SectorBoundary, stroke: Option<&str>) {
        let stroke = stroke.map(str::to_string);
        for r in &sector.rays {
            self.geodesics.push(SceneSegment {
                from: r.origin,
                to: r.ideal,
                stroke: stroke.clone(),
            });
        }
        for w in sector.corner.windows(2) {
            self.geodesics.push(SceneSegment {
                from: w[0],
                to: w[1],
                stroke: stroke.clone(),
            });
        }
    }
}

fn num(v: f64) -> String {
    let s = format!("{v:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

/// SVG coordinates: the disc is drawn as is, with y pointing up.
fn xy(p: &DiscPoint) -> String {
    format!("{} {}", num(p.x), num(-p.y))
}

fn arc_to(out: &mut String, from: &DiscPoint, to: &DiscPoint) {
    if from.euclid(to) < 1e-12 {
        return;
    }
    match Geodesic::through(from, to) {
        Geodesic::Diameter { .. } => {
            let _ = write!(out, " L {}", xy(to));
        }
        Geodesic::Arc { cx, cy, r } => {
            let cross = (from.x - cx) * (to.y - cy) - (from.y - cy) * (to.x - cx);
            // flipping y reverses the turning sense
            let sweep = u8::from(cross < 0.0);
            let _ = write!(out, " A {} {} 0 0 {} {}", num(r), num(r), sweep, xy(to));
        }
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

pub fn render_svg(scene: &Scene, style: &Style) -> String {
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{0}\" height=\"{0}\" viewBox=\"-1.02 -1.02 2.04 2.04\">",
        style.size
    );
    let _ = writeln!(
        out,
        "<circle cx=\"0\" cy=\"0\" r=\"1\" fill=\"white\" stroke=\"black\" stroke-width=\"{}\"/>",
        num(style.stroke_width * 2.0)
    );
    if !scene.tiles.is_empty() {
        let _ = writeln!(
            out,
            "<g fill=\"none\" stroke=\"{}\" stroke-width=\"{}\" stroke-linejoin=\"round\">",
            escape(&style.tile_stroke),
            num(style.stroke_width)
        );
        for t in &scene.tiles {
            let Some(first) = t.points.first() else {
                continue;
            };
            let mut d = format!("M {}", xy(first));
            for w in t.points.windows(2) {
                arc_to(&mut d, &w[0], &w[1]);
            }
            arc_to(&mut d, t.points.last().unwrap_or(first), first);
            d.push_str(" Z");
            match &t.fill {
                Some(f) => {
                    let _ = writeln!(out, "<path d=\"{d}\" fill=\"{}\"/>", escape(f));
                }
                None => {
                    let _ = writeln!(out, "<path d=\"{d}\"/>");
                }
            }
        }
        out.push_str("</g>\n");
    }
    if !scene.geodesics.is_empty() {
        let _ = writeln!(
            out,
            "<g fill=\"none\" stroke-width=\"{}\">",
            num(style.stroke_width * 1.5)
        );
        for g in &scene.geodesics {
            let mut d = format!("M {}", xy(&g.from));
            arc_to(&mut d, &g.from, &g.to);
            let stroke = g.stroke.as_deref().unwrap_or(&style.line_stroke);
            let _ = writeln!(out, "<path d=\"{d}\" stroke=\"{}\"/>", escape(stroke));
        }
        out.push_str("</g>\n");
    }
    for p in &scene.points {
        let _ = writeln!(
            out,
            "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"{}\"/>",
            num(p.x),
            num(-p.y),
            num(style.stroke_width * 3.0),
            escape(&style.line_stroke)
        );
    }
    if !scene.labels.is_empty() {
        let _ = writeln!(
            out,
            "<g font-family=\"sans-serif\" font-size=\"{}\" text-anchor=\"middle\">",
            num(style.font_size)
        );
        for l in &scene.labels {
            let _ = writeln!(
                out,
                "<text x=\"{}\" y=\"{}\">{}</text>",
                num(l.at.x),
                num(-l.at.y),
                escape(&l.text)
            );
        }
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    out
}
