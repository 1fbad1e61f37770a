//! Regular polygons of `{p,q}` and their reflections.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::disc::{angle_ccw, distance, DiscPoint, Geodesic};
use super::isometry::DiscIsometry;
use crate::schlafli::SchlafliPair;

/// Hyperbolic lengths of the right triangle (centre, vertex, mid-edge).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TileMetrics {
    pub circumradius: f64,
    pub inradius: f64,
    pub half_edge: f64,
}

impl TileMetrics {
    pub fn edge(&self) -> f64 {
        2.0 * self.half_edge
    }

    /// `cosh R - cosh r cosh s`, zero for a right triangle.
    pub fn pythagoras_defect(&self) -> f64 {
        self.circumradius.cosh() - self.inradius.cosh() * self.half_edge.cosh()
    }
}

pub fn tile_metrics(pair: SchlafliPair) -> TileMetrics {
    let (p, q) = (pair.p as f64, pair.q as f64);
    let cot = |x: f64| x.cos() / x.sin();
    TileMetrics {
        circumradius: (cot(PI / p) * cot(PI / q)).acosh(),
        // the half edge faces the angle pi/p at the centre
        inradius: ((PI / q).cos() / (PI / p).sin()).acosh(),
        half_edge: ((PI / p).cos() / (PI / q).sin()).acosh(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tile {
    pub id: usize,
    /// Counter-clockwise; edge `i` runs from vertex `i` to vertex `i + 1`.
    pub vertices: Vec<DiscPoint>,
    pub center: DiscPoint,
    pub generation: u32,
    pub parent: Option<usize>,
    /// Index of the edge shared with the parent; always 0 for a reflected tile.
    pub parent_edge: Option<usize>,
}

impl Tile {
    pub fn sides(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge(&self, i: usize) -> (DiscPoint, DiscPoint) {
        let n = self.sides();
        (self.vertices[i % n], self.vertices[(i + 1) % n])
    }

    pub fn edge_geodesic(&self, i: usize) -> Geodesic {
        let (u, v) = self.edge(i);
        Geodesic::through(&u, &v)
    }

    /// Interior angle at vertex `i`.
    pub fn angle(&self, i: usize) -> f64 {
        let n = self.sides();
        let v = self.vertices[i];
        angle_ccw(
            &v,
            &self.vertices[(i + 1) % n],
            &self.vertices[(i + n - 1) % n],
        )
    }

    pub fn edge_length(&self, i: usize) -> f64 {
        let (u, v) = self.edge(i);
        distance(&u, &v)
    }

    pub fn map(&self, m: &DiscIsometry) -> Tile {
        let mut vertices: Vec<DiscPoint> = self.vertices.iter().map(|v| m.apply(v)).collect();
        if m.reversing {
            vertices.reverse();
        }
        Tile {
            vertices,
            center: m.apply(&self.center),
            ..self.clone()
        }
    }

    /// Local index of the vertex closest to `p`, if within `tol`.
    pub fn vertex_index(&self, p: &DiscPoint, tol: f64) -> Option<usize> {
        self.vertices.iter().position(|v| v.euclid(p) < tol)
    }
}

pub fn base_tile(pair: SchlafliPair) -> Tile {
    let m = tile_metrics(pair);
    let r = (m.circumradius / 2.0).tanh();
    let p = pair.p as usize;
    let vertices = (0..p)
        .map(|k| DiscPoint::from_polar(r, 2.0 * PI * k as f64 / p as f64))
        .collect();
    Tile {
        id: 0,
        vertices,
        center: DiscPoint::ORIGIN,
        generation: 0,
        parent: None,
        parent_edge: None,
    }
}

/// Mirror image of `tile` in its edge `edge_index`. The child keeps
/// counter-clockwise order and its edge 0 is the shared edge.
pub fn reflect(tile: &Tile, edge_index: usize) -> Tile {
    let n = tile.sides();
    let (u, v) = tile.edge(edge_index);
    let m = DiscIsometry::reflection(&u, &v);
    let vertices = (0..n)
        .map(|k| m.apply(&tile.vertices[(edge_index + 1 + n - k) % n]))
        .collect();
    Tile {
        id: tile.id,
        vertices,
        center: m.apply(&tile.center),
        generation: tile.generation + 1,
        parent: Some(tile.id),
        parent_edge: Some(0),
    }
}

/// True when `z` is inside the polygon, by side tests on its edges.
pub fn contains(tile: &Tile, z: &DiscPoint, tol: f64) -> bool {
    let n = tile.sides();
    (0..n).all(|i| {
        let (u, v) = tile.edge(i);
        super::disc::Line::through(&u, &v).signed_distance(z) > -tol
    })
}
