//! Zig-zag lines and h-mid-point lines of `{p,q}` with `q` odd.

use serde::Serialize;

use super::disc::{ideal_endpoints, midpoint, offset, DiscPoint, Geodesic, Line};
use super::tessellation::Tessellation;
use crate::error::{Error, Result};

/// A directed edge of the tessellation, as vertex ids.
pub type Edge = (usize, usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Turning {
    /// Counter-clockwise at the first arrival vertex, clockwise at the next,
    /// and so on.
    Alternating,
    /// Counter-clockwise at every vertex.
    Constant,
}

fn require_odd(tess: &Tessellation) -> Result<()> {
    if !tess.pair.q_is_odd() {
        return Err(Error::InvalidInput(format!(
            "zig-zag lines need an odd q, got {}",
            tess.pair
        )));
    }
    Ok(())
}

/// Edges of the zig-zag line starting with `start`. At each arrival vertex
/// the edges are numbered from the incoming one and edge `h + 1` is taken.
pub fn zigzag_line(tess: &Tessellation, start: Edge, steps: usize) -> Result<Vec<Edge>> {
    zigzag_line_with(tess, start, steps, Turning::Alternating)
}

pub fn zigzag_line_with(
    tess: &Tessellation,
    start: Edge,
    steps: usize,
    turning: Turning,
) -> Result<Vec<Edge>> {
    walk(tess, start, steps, turning, true)
}

/// Zig-zag line passing through `edge`, extended by `before` edges behind it
/// and `after` edges ahead of it. `edge` is at index `before` of the result.
pub fn zigzag_through(
    tess: &Tessellation,
    edge: Edge,
    before: usize,
    after: usize,
) -> Result<Vec<Edge>> {
    // read backwards, a zig-zag line is again a zig-zag line
    let back = walk(tess, (edge.1, edge.0), before, Turning::Alternating, true)?;
    let (a, b) = *back.last().expect("walk returns its start");
    let path = walk(
        tess,
        (b, a),
        before + after,
        Turning::Alternating,
        before % 2 == 0,
    )?;
    debug_assert_eq!(path[before], edge);
    Ok(path)
}

fn walk(
    tess: &Tessellation,
    start: Edge,
    steps: usize,
    turning: Turning,
    first_ccw: bool,
) -> Result<Vec<Edge>> {
    require_odd(tess)?;
    let q = tess.pair.q as usize;
    let h = tess.pair.h as usize;
    let mut out = vec![start];
    let (mut from, mut at) = start;
    for step in 0..steps {
        let around = tess.edges_at(at);
        if around.len() != q {
            return Err(Error::InsufficientTessellationDepth(format!(
                "vertex {at} has {} of its {q} edges after {step} steps",
                around.len()
            )));
        }
        let i = around.iter().position(|&(w, _)| w == from).ok_or_else(|| {
            Error::InsufficientTessellationDepth(format!(
                "edge {from}-{at} is not in the tessellation"
            ))
        })?;
        let ccw = turning == Turning::Constant || ((step % 2 == 0) == first_ccw);
        let j = if ccw { (i + h) % q } else { (i + q - h) % q };
        let next = around[j].0;
        out.push((at, next));
        from = at;
        at = next;
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MidpointLine {
    pub edges: Vec<Edge>,
    pub midpoints: Vec<DiscPoint>,
    pub supporting: Geodesic,
    /// Largest hyperbolic distance from a midpoint to the supporting line.
    pub residual: f64,
}

pub fn h_midpoint_line(tess: &Tessellation, start: Edge, steps: usize) -> Result<MidpointLine> {
    h_midpoint_line_with(tess, start, steps, Turning::Alternating)
}

pub fn h_midpoint_line_with(
    tess: &Tessellation,
    start: Edge,
    steps: usize,
    turning: Turning,
) -> Result<MidpointLine> {
    require_h(tess)?;
    midpoint_line(tess, zigzag_line_with(tess, start, steps, turning)?)
}

/// h-mid-point line through the midpoint of `edge`, with `before` and
/// `after` further midpoints on either side.
pub fn h_midpoint_line_through(
    tess: &Tessellation,
    edge: Edge,
    before: usize,
    after: usize,
) -> Result<MidpointLine> {
    require_h(tess)?;
    midpoint_line(tess, zigzag_through(tess, edge, before, after)?)
}

fn require_h(tess: &Tessellation) -> Result<()> {
    if tess.pair.h < 2 {
        return Err(Error::UnsupportedCase(format!(
            "h-mid-point lines need h >= 2, got {}",
            tess.pair
        )));
    }
    Ok(())
}

fn midpoint_line(tess: &Tessellation, edges: Vec<Edge>) -> Result<MidpointLine> {
    let midpoints: Vec<DiscPoint> = edges
        .iter()
        .map(|&(u, v)| midpoint(&tess.vertex(u), &tess.vertex(v)))
        .collect();
    let (first, last) = match (midpoints.first(), midpoints.last()) {
        (Some(f), Some(l)) if midpoints.len() >= 2 => (*f, *l),
        _ => {
            // a single midpoint: the line along its edge's perpendicular is as good as any
            let (u, v) = edges[0];
            let m = midpoints[0];
            let theta = super::disc::direction(&tess.vertex(u), &tess.vertex(v));
            let other = offset(&m, theta + std::f64::consts::FRAC_PI_2, 1.0);
            return Ok(MidpointLine {
                supporting: Geodesic::through(&m, &other),
                edges,
                midpoints,
                residual: 0.0,
            });
        }
    };
    let line = Line::through(&first, &last);
    let residual = midpoints
        .iter()
        .map(|m| line.distance(m))
        .fold(0.0, f64::max);
    Ok(MidpointLine {
        supporting: Geodesic::through(&first, &last),
        edges,
        midpoints,
        residual,
    })
}

/// A geodesic ray: starts at `origin`, leaves it in direction `theta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Ray {
    pub origin: DiscPoint,
    pub theta: f64,
    pub ideal: DiscPoint,
}

impl Ray {
    pub fn new(origin: DiscPoint, theta: f64) -> Ray {
        let ahead = offset(&origin, theta, 1.0);
        let (_, ideal) = ideal_endpoints(&origin, &ahead);
        Ray {
            origin,
            theta,
            ideal,
        }
    }

    /// Ray from `origin` pointing towards `through`.
    pub fn towards(origin: &DiscPoint, through: &DiscPoint) -> Ray {
        Ray::new(*origin, super::disc::direction(origin, through))
    }

    /// Ray from `origin` pointing away from `from`.
    pub fn away_from(origin: &DiscPoint, from: &DiscPoint) -> Ray {
        Ray::new(
            *origin,
            super::disc::direction(origin, from) + std::f64::consts::PI,
        )
    }

    pub fn line(&self) -> Line {
        Line {
            base: self.origin,
            theta: self.theta,
        }
    }

    pub fn geodesic(&self) -> Geodesic {
        self.line().geodesic()
    }

    /// True when `z` lies on the ray within `tol`.
    pub fn touches(&self, z: &DiscPoint, tol: f64) -> bool {
        let l = self.line();
        l.distance(z) < tol && l.abscissa(z) > -tol
    }

    pub fn map(&self, m: &super::isometry::DiscIsometry) -> Ray {
        let o = m.apply(&self.origin);
        let ahead = m.apply(&offset(&self.origin, self.theta, 1.0));
        Ray::towards(&o, &ahead)
    }
}
