//! Breadth-first reflection closure of the base tile.

use std::collections::HashMap;
use std::f64::consts::TAU;

use serde::Serialize;

use super::disc::{direction, DiscPoint};
use super::index::{PointIndex, DEDUP_TOLERANCE};
use super::tile::{base_tile, reflect, Tile};
use crate::error::{Error, Result};
use crate::schlafli::SchlafliPair;

pub const DEFAULT_TILE_CAP: usize = 400_000;

#[derive(Debug, Clone)]
pub struct Tessellation {
    pub pair: SchlafliPair,
    pub generations: u32,
    pub tiles: Vec<Tile>,
    /// Vertex ids of each tile, in the tile's own order.
    pub tile_vertices: Vec<Vec<usize>>,
    pub vertices: PointIndex,
    incident: Vec<Vec<usize>>,
    by_key: HashMap<Vec<usize>, usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClosureReport {
    /// Vertices whose whole neighbourhood lies within the generated depth.
    pub interior_vertices: usize,
    /// Interior vertices with a tile count other than `q`.
    pub defects: Vec<(usize, usize)>,
    /// Largest number of tiles seen at any vertex; more than `q` means overlap.
    pub max_incidence: usize,
}

impl ClosureReport {
    pub fn ok(&self, q: u32) -> bool {
        self.defects.is_empty() && self.max_incidence <= q as usize && self.interior_vertices > 0
    }
}

impl Tessellation {
    fn key(ids: &[usize]) -> Vec<usize> {
        let mut k = ids.to_vec();
        k.sort_unstable();
        k
    }

    fn push(&mut self, mut tile: Tile) -> Option<usize> {
        let ids: Vec<usize> = tile
            .vertices
            .iter()
            .map(|v| self.vertices.insert(*v))
            .collect();
        let key = Self::key(&ids);
        if self.by_key.contains_key(&key) {
            return None;
        }
        let id = self.tiles.len();
        tile.id = id;
        for &v in &ids {
            if self.incident.len() <= v {
                self.incident.resize(v + 1, Vec::new());
            }
            self.incident[v].push(id);
        }
        self.by_key.insert(key, id);
        self.tiles.push(tile);
        self.tile_vertices.push(ids);
        Some(id)
    }

    pub fn len(&self) -> usize {
        self.tiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tiles.is_empty()
    }

    pub fn vertex(&self, id: usize) -> DiscPoint {
        self.vertices.get(id)
    }

    pub fn vertex_id(&self, p: &DiscPoint) -> Option<usize> {
        self.vertices.find(p)
    }

    /// Tiles having vertex `v`.
    pub fn tiles_at(&self, v: usize) -> &[usize] {
        self.incident.get(v).map(|x| x.as_slice()).unwrap_or(&[])
    }

    /// Tile whose vertex set is exactly `ids`.
    pub fn tile_with_vertices(&self, ids: &[usize]) -> Option<usize> {
        self.by_key.get(&Self::key(ids)).copied()
    }

    /// Tile on the other side of edge `edge` of tile `t`.
    pub fn neighbour(&self, t: usize, edge: usize) -> Option<usize> {
        let ids = &self.tile_vertices[t];
        let n = ids.len();
        let (u, v) = (ids[edge % n], ids[(edge + 1) % n]);
        self.tiles_at(u)
            .iter()
            .copied()
            .find(|&o| o != t && self.tile_vertices[o].contains(&v))
    }

    /// Vertices joined to `v` by an edge, sorted counter-clockwise by the
    /// direction of the edge at `v`.
    pub fn edges_at(&self, v: usize) -> Vec<(usize, f64)> {
        let mut out: Vec<(usize, f64)> = Vec::new();
        for &t in self.tiles_at(v) {
            let ids = &self.tile_vertices[t];
            let n = ids.len();
            let k = ids
                .iter()
                .position(|&x| x == v)
                .expect("incident tile holds the vertex");
            for w in [ids[(k + 1) % n], ids[(k + n - 1) % n]] {
                if !out.iter().any(|&(x, _)| x == w) {
                    let theta = direction(&self.vertex(v), &self.vertex(w)).rem_euclid(TAU);
                    out.push((w, theta));
                }
            }
        }
        out.sort_by(|a, b| a.1.total_cmp(&b.1));
        out
    }

    /// Checks that exactly `q` tiles meet at every vertex of a tile of
    /// generation at most `generations - h`; all `q` neighbours of such a
    /// vertex are reachable within the generated depth.
    pub fn closure(&self) -> ClosureReport {
        let q = self.pair.q as usize;
        let reach = self.pair.h;
        let mut seen = vec![false; self.vertices.len()];
        let mut interior = 0;
        let mut defects = Vec::new();
        for (t, tile) in self.tiles.iter().enumerate() {
            if tile.generation + reach > self.generations {
                continue;
            }
            for &v in &self.tile_vertices[t] {
                if seen[v] {
                    continue;
                }
                seen[v] = true;
                interior += 1;
                let c = self.tiles_at(v).len();
                if c != q {
                    defects.push((v, c));
                }
            }
        }
        let max_incidence = self.incident.iter().map(|x| x.len()).max().unwrap_or(0);
        ClosureReport {
            interior_vertices: interior,
            defects,
            max_incidence,
        }
    }
}

pub fn tessellate(pair: SchlafliPair, generations: u32, cap: usize) -> Result<Tessellation> {
    let mut tess = Tessellation {
        pair,
        generations,
        tiles: Vec::new(),
        tile_vertices: Vec::new(),
        vertices: PointIndex::new(DEDUP_TOLERANCE),
        incident: Vec::new(),
        by_key: HashMap::new(),
    };
    tess.push(base_tile(pair));
    let mut frontier = vec![0usize];
    for _ in 0..generations {
        let mut next = Vec::new();
        for &t in &frontier {
            let tile = tess.tiles[t].clone();
            for e in 0..tile.sides() {
                if tile.parent_edge == Some(e) {
                    continue;
                }
                if let Some(id) = tess.push(reflect(&tile, e)) {
                    next.push(id);
                    if tess.len() > cap {
                        return Err(Error::CapExceeded {
                            needed: format!("more than {cap} tiles"),
                            cap: cap as u64,
                        });
                    }
                }
            }
        }
        frontier = next;
    }
    Ok(tess)
}
