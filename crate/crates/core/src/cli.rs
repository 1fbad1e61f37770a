//! Subcommand bodies for the `hypq` binary. Each returns the text to print;
//! the binary only parses flags and maps errors to exit codes.

use std::fmt::Write;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::bigjson;
use crate::error::{Error, Result};
use crate::geometry::{
    self, h_midpoint_line_through, sector, tessellate, zigzag_through, DiscPoint, Placement, Scene,
    Style, Tessellation,
};
use crate::numeration::{basis, MaximalTable};
use crate::polynomial::SplittingPolynomial;
use crate::schlafli::{build_system, validate, IntegerMatrix, Scheme, SchlafliPair, SplittingRule};
use crate::spectral::{analyze, FactorDecomposition, Reason, SpectralReport};
use crate::tree::{generate, level_counts, recurrence_check, SpanningTree, TreeNode};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_CAP: i32 = 3;

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::CapExceeded { .. } => EXIT_CAP,
        _ => EXIT_INVALID,
    }
}

/// `auto` or one scheme name.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeChoice {
    Auto,
    Fixed(Scheme),
}

impl std::str::FromStr for SchemeChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "auto" {
            Ok(SchemeChoice::Auto)
        } else {
            s.parse().map(SchemeChoice::Fixed)
        }
    }
}

impl SchemeChoice {
    pub fn resolve(self, pair: &SchlafliPair) -> Vec<Scheme> {
        match self {
            SchemeChoice::Auto => Scheme::auto(pair),
            SchemeChoice::Fixed(s) => vec![s],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRoot {
    pub re: f64,
    pub im: f64,
    pub multiplicity: u32,
    /// True for integer roots found by exact division.
    pub exact: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub pair: SchlafliPair,
    pub scheme: Scheme,
    pub rules: Vec<SplittingRule>,
    pub matrix: IntegerMatrix,
    pub polynomial: SplittingPolynomial,
    pub decomposition: FactorDecomposition,
    pub roots: Vec<ReportRoot>,
    pub beta: f64,
    pub pisot: bool,
    pub regular: bool,
    pub reason: Reason,
    #[serde(with = "bigjson")]
    pub digit_bound: BigInt,
    pub warnings: Vec<String>,
}

impl From<SpectralReport> for AnalysisReport {
    fn from(r: SpectralReport) -> Self {
        let roots = r
            .all_roots
            .roots
            .iter()
            .map(|x| ReportRoot {
                re: x.re,
                im: x.im,
                multiplicity: x.multiplicity,
                exact: x.exact.is_some(),
            })
            .collect();
        AnalysisReport {
            pair: r.pair,
            scheme: r.scheme,
            rules: r.system.rules,
            matrix: r.matrix,
            polynomial: r.polynomial,
            decomposition: r.decomposition,
            roots,
            beta: r.beta,
            pisot: r.pisot,
            regular: r.regular,
            reason: r.reason,
            digit_bound: r.digit_bound,
            warnings: r.warnings,
        }
    }
}

impl AnalysisReport {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} {} (h = {})", self.pair, self.scheme, self.pair.h);
        s.push_str("rules:\n");
        for r in &self.rules {
            let _ = writeln!(s, "  {r}");
            for f in &r.fans {
                let _ = writeln!(s, "    fan at {}: {} x {}", f.vertex, f.size, f.kind);
            }
        }
        s.push_str("matrix:\n");
        for line in self.matrix.to_string().lines() {
            let _ = writeln!(s, "  {line}");
        }
        let _ = writeln!(s, "polynomial: {}", self.polynomial);
        let d = &self.decomposition;
        let units: Vec<String> = d.unit_factors.iter().map(|f| format!("({f})")).collect();
        let _ = writeln!(
            s,
            "decomposition: X^{} {} core {}",
            d.stripped_x_power,
            if units.is_empty() {
                "-".to_string()
            } else {
                units.join(" ")
            },
            d.core
        );
        s.push_str("roots:\n");
        for r in &self.roots {
            let tag = if r.exact { " exact" } else { "" };
            let mult = if r.multiplicity > 1 {
                format!(" x{}", r.multiplicity)
            } else {
                String::new()
            };
            if r.im == 0.0 {
                let _ = writeln!(s, "  {:.10}{mult}{tag}", r.re);
            } else {
                let _ = writeln!(s, "  {:.10} {:+.10}i{mult}", r.re, r.im);
            }
        }
        let _ = writeln!(s, "beta: {:.10}", self.beta);
        let _ = writeln!(s, "pisot: {}", self.pisot);
        let _ = writeln!(s, "regular: {} ({})", self.regular, self.reason);
        let _ = writeln!(s, "digit_bound: {}", self.digit_bound);
        if self.warnings.is_empty() {
            s.push_str("warnings: none\n");
        } else {
            s.push_str("warnings:\n");
            for w in &self.warnings {
                let _ = writeln!(s, "  {w}");
            }
        }
        s
    }
}

fn pair_of(p: i64, q: i64) -> Result<SchlafliPair> {
    validate(p, q)
}

/// One JSON value for one report, an array for several.
fn json_of<T: Serialize>(items: &[T]) -> Result<String> {
    let v = if items.len() == 1 {
        serde_json::to_string_pretty(&items[0])
    } else {
        serde_json::to_string_pretty(items)
    };
    v.map(|s| s + "\n")
        .map_err(|e| Error::InvalidInput(e.to_string()))
}

pub fn analysis_reports(p: i64, q: i64, scheme: SchemeChoice) -> Result<Vec<AnalysisReport>> {
    let pair = pair_of(p, q)?;
    scheme
        .resolve(&pair)
        .into_iter()
        .map(|s| analyze(pair, s).map(AnalysisReport::from))
        .collect()
}

pub fn cmd_analyze(p: i64, q: i64, scheme: SchemeChoice, json: bool) -> Result<String> {
    let reports = analysis_reports(p, q, scheme)?;
    if json {
        return json_of(&reports);
    }
    Ok(reports
        .iter()
        .map(AnalysisReport::to_text)
        .collect::<Vec<_>>()
        .join("\n"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TreeFormat {
    Counts,
    Dot,
    Json,
}

impl std::str::FromStr for TreeFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "counts" => Ok(TreeFormat::Counts),
            "dot" => Ok(TreeFormat::Dot),
            "json" => Ok(TreeFormat::Json),
            _ => Err(Error::InvalidInput(format!("unknown tree format `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
struct TreeDump {
    pair: SchlafliPair,
    scheme: Scheme,
    depth: u32,
    #[serde(with = "bigjson::vec")]
    counts: Vec<BigInt>,
    recurrence: Option<bool>,
    nodes: Vec<TreeNode>,
}

/// "1 3 8 21 | recurrence: OK", or SKIPPED when there are too few levels.
pub fn counts_line(tree: &SpanningTree, poly: &SplittingPolynomial) -> Result<String> {
    let counts = level_counts(tree);
    let verdict = match recurrence_check(&counts, poly) {
        Ok(true) => "OK".to_string(),
        Ok(false) => "FAILED".to_string(),
        Err(Error::TooFewLevels { .. }) => "SKIPPED (too few levels)".to_string(),
        Err(e) => return Err(e),
    };
    Ok(format!("{counts} | recurrence: {verdict}"))
}

pub fn cmd_tree(
    p: i64,
    q: i64,
    scheme: SchemeChoice,
    depth: u32,
    format: TreeFormat,
    cap: u64,
) -> Result<String> {
    let pair = pair_of(p, q)?;
    let schemes = scheme.resolve(&pair);
    let mut sections = Vec::new();
    let mut dumps = Vec::new();
    for s in &schemes {
        let system = build_system(pair, *s)?;
        let report = analyze(pair, *s)?;
        let tree = generate(&system, depth, cap)?;
        match format {
            TreeFormat::Counts => sections.push(counts_line(&tree, &report.polynomial)? + "\n"),
            TreeFormat::Dot => sections.push(tree.to_dot()),
            TreeFormat::Json => {
                let counts = level_counts(&tree);
                dumps.push(TreeDump {
                    pair,
                    scheme: *s,
                    depth,
                    recurrence: recurrence_check(&counts, &report.polynomial).ok(),
                    counts: counts.counts,
                    nodes: tree.nodes().collect(),
                });
            }
        }
    }
    if format == TreeFormat::Json {
        return json_of(&dumps);
    }
    Ok(labelled(&schemes, sections, format == TreeFormat::Dot))
}

/// Joins per-scheme sections, with a scheme header when there are several.
fn labelled(schemes: &[Scheme], sections: Vec<String>, dot: bool) -> String {
    if sections.len() == 1 {
        return sections.into_iter().next().unwrap_or_default();
    }
    let mut out = String::new();
    for (s, body) in schemes.iter().zip(sections) {
        if dot {
            let _ = writeln!(out, "// {s}");
        } else {
            let _ = writeln!(out, "[{s}]");
        }
        out.push_str(&body);
    }
    out
}

pub fn numeration_table(pair: SchlafliPair, scheme: Scheme, up_to: u64) -> Result<String> {
    let report = analyze(pair, scheme)?;
    let b = report
        .digit_bound
        .to_u64()
        .ok_or_else(|| Error::CapExceeded {
            needed: report.digit_bound.to_string(),
            cap: u64::MAX,
        })?;
    let table = MaximalTable::new(&basis(pair, scheme, report.polynomial.degree())?, b, up_to)?;
    let mut out = String::new();
    for v in 0..=up_to {
        match table.maximal(v) {
            Ok(r) => {
                let _ = writeln!(out, "{v}: {r}");
            }
            Err(Error::Unrepresentable { .. }) => {
                let _ = writeln!(out, "{v}: none");
            }
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

pub fn cmd_numeration(p: i64, q: i64, scheme: SchemeChoice, up_to: u64) -> Result<String> {
    let pair = pair_of(p, q)?;
    let schemes = scheme.resolve(&pair);
    let sections = schemes
        .iter()
        .map(|&s| numeration_table(pair, s, up_to))
        .collect::<Result<Vec<_>>>()?;
    Ok(labelled(&schemes, sections, false))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    Tessellation,
    Sectors,
    Midlines,
    Zigzag,
    Dual45,
}

impl std::str::FromStr for Figure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tessellation" => Ok(Figure::Tessellation),
            "sectors" => Ok(Figure::Sectors),
            "midlines" => Ok(Figure::Midlines),
            "zigzag" => Ok(Figure::Zigzag),
            "dual45" => Ok(Figure::Dual45),
            _ => Err(Error::InvalidInput(format!("unknown figure `{s}`"))),
        }
    }
}

const SCHEME_STROKES: [&str; 2] = ["#2c3e50", "#16a085"];

/// Base-tile edges as vertex ids, pointing counter-clockwise.
fn base_edges(tess: &Tessellation) -> Vec<(usize, usize)> {
    let ids = &tess.tile_vertices[0];
    (0..ids.len())
        .map(|i| (ids[i], ids[(i + 1) % ids.len()]))
        .collect()
}

/// Longest symmetric walk through `edge` the tessellation can carry.
fn longest<T>(depth: u32, f: impl Fn(usize) -> Result<T>) -> Result<Option<T>> {
    for k in (0..=depth as usize).rev() {
        match f(k) {
            Ok(v) => return Ok(Some(v)),
            Err(Error::InsufficientTessellationDepth(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(None)
}

pub fn figure_scene(p: i64, q: i64, what: Figure, depth: u32, tile_cap: usize) -> Result<Scene> {
    let pair = pair_of(p, q)?;
    if what == Figure::Dual45 {
        if (pair.p, pair.q) != (4, 5) {
            return Err(Error::InvalidInput(format!(
                "dual45 draws the {{4,5}} numbering, not {pair}"
            )));
        }
        return crate::dual::dual_scene(depth);
    }
    let tess = tessellate(pair, depth, tile_cap)?;
    let mut scene = Scene::from_tessellation(&tess);
    match what {
        Figure::Tessellation | Figure::Dual45 => {}
        Figure::Sectors => {
            for (i, s) in Scheme::auto(&pair).into_iter().enumerate() {
                let system = build_system(pair, s)?;
                for kind in system.regions() {
                    match sector(&tess, s, kind, Placement::default()) {
                        Ok(b) => {
                            scene.add_sector(&b, Some(SCHEME_STROKES[i % 2]));
                            scene.labels.push(geometry::svg::SceneLabel {
                                at: b.vertex,
                                text: format!("{} {}", s, b.kind.label()),
                            });
                        }
                        Err(Error::UnsupportedCase(_)) | Err(Error::UnknownRegion(_)) => {}
                        Err(e) => return Err(e),
                    }
                }
            }
        }
        Figure::Midlines => {
            for e in base_edges(&tess) {
                let Some(line) = longest(depth, |k| h_midpoint_line_through(&tess, e, k, k))?
                else {
                    continue;
                };
                let (first, last) = (
                    line.midpoints[0],
                    *line.midpoints.last().unwrap_or(&line.midpoints[0]),
                );
                if line.midpoints.len() >= 2 {
                    let (back, ahead) = geometry::disc::ideal_endpoints(&first, &last);
                    scene.add_polyline(&[back, first, last, ahead], None);
                }
                scene.points.extend(line.midpoints.iter().copied());
            }
        }
        Figure::Zigzag => {
            for e in base_edges(&tess) {
                let Some(path) = longest(depth, |k| zigzag_through(&tess, e, k, k))? else {
                    continue;
                };
                let mut pts: Vec<DiscPoint> = path.iter().map(|&(u, _)| tess.vertex(u)).collect();
                if let Some(&(_, v)) = path.last() {
                    pts.push(tess.vertex(v));
                }
                scene.add_polyline(&pts, None);
            }
        }
    }
    Ok(scene)
}

pub fn cmd_render(p: i64, q: i64, what: Figure, depth: u32, tile_cap: usize) -> Result<String> {
    if matches!(what, Figure::Midlines | Figure::Zigzag) && q % 2 == 0 {
        pair_of(p, q)?;
        return Err(Error::InvalidInput(
            format!("{what:?} needs an odd q, got {q}").to_lowercase(),
        ));
    }
    let scene = figure_scene(p, q, what, depth, tile_cap)?;
    Ok(geometry::render_svg(&scene, &Style::default()))
}
