//! The Fibonacci tree of the pentagrid `{5,4}` and the numbering of the
//! vertices of a sector, i.e. of the tiles of the dual tiling `{4,5}`.
//!
//! The construction takes the polygon size as a parameter so that other
//! `{p,4}` grids (duals of `{4,p}`) can be tried; only `p = 5` is checked.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::disc::DiscPoint;
use crate::geometry::lines::Ray;
use crate::geometry::sector::{assign_region, SectorBoundary, GEOMETRY_TOLERANCE};
use crate::geometry::svg::{Scene, SceneLabel, ScenePolygon};
use crate::geometry::tessellation::{tessellate, Tessellation, DEFAULT_TILE_CAP};
use crate::geometry::tile::{reflect, Tile};
use crate::schlafli::{validate, RegionKind, Scheme};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Color {
    Black,
    White,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FibNode {
    pub id: u64,
    pub color: Color,
    pub level: u32,
    pub parent: Option<u64>,
    pub children: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FibonacciTree {
    pub p: u32,
    /// `nodes[i]` has id `i + 1`.
    pub nodes: Vec<FibNode>,
}

/// Colours of the sons, left to right: the black son first.
pub fn son_colors(color: Color, p: u32) -> Vec<Color> {
    let whites = match color {
        Color::White => p - 3,
        Color::Black => p - 4,
    };
    std::iter::once(Color::Black)
        .chain(std::iter::repeat(Color::White).take(whites as usize))
        .collect()
}

/// Sides (numbered from 1 at the father) across which the sons lie, in the
/// same order as [`son_colors`].
pub fn son_sides(color: Color, p: u32) -> Vec<usize> {
    let first = match color {
        Color::White => 2,
        Color::Black => 3,
    };
    (first..p as usize).collect()
}

impl FibonacciTree {
    pub fn node(&self, id: u64) -> &FibNode {
        &self.nodes[(id - 1) as usize]
    }

    pub fn depth(&self) -> u32 {
        self.nodes.last().map_or(0, |n| n.level)
    }

    pub fn level_counts(&self) -> Vec<u64> {
        let mut c = vec![0u64; self.depth() as usize + 1];
        for n in &self.nodes {
            c[n.level as usize] += 1;
        }
        c
    }
}

pub fn fibonacci_tree(depth: u32, root: Color) -> FibonacciTree {
    fibonacci_tree_for(5, depth, root)
}

/// Tree for the `{p,4}` grid. Nodes are numbered level by level, left to
/// right, from 1.
pub fn fibonacci_tree_for(p: u32, depth: u32, root: Color) -> FibonacciTree {
    assert!(p >= 5, "the {{p,4}} grids start at p = 5");
    let mut nodes = vec![FibNode {
        id: 1,
        color: root,
        level: 0,
        parent: None,
        children: Vec::new(),
    }];
    let mut start = 0;
    for level in 1..=depth {
        let end = nodes.len();
        for i in start..end {
            for c in son_colors(nodes[i].color, p) {
                let id = nodes.len() as u64 + 1;
                nodes[i].children.push(id);
                nodes.push(FibNode {
                    id,
                    color: c,
                    level,
                    parent: Some(i as u64 + 1),
                    children: Vec::new(),
                });
            }
        }
        start = end;
    }
    FibonacciTree { p, nodes }
}

/// Labels 1..=p of the edges of `tile`, counter-clockwise, 1 on the father's side.
pub fn side_numbering(tile: &Tile, father_edge: Option<usize>) -> Result<Vec<usize>> {
    let f = father_edge.ok_or(Error::NoFatherEdge)?;
    let n = tile.sides();
    if f >= n {
        return Err(Error::InvalidInput(format!(
            "father edge {f} out of range 0..{n}"
        )));
    }
    Ok((0..n).map(|i| (i + n - f) % n + 1).collect())
}

/// Edge carrying label `label`.
fn edge_with(labels: &[usize], label: usize) -> usize {
    labels
        .iter()
        .position(|&l| l == label)
        .expect("labels are a permutation")
}

/// White nodes take the vertex between sides 1 and 2, black nodes the one
/// between sides 2 and 3.
pub fn assign_vertex(color: Color, tile: &Tile, labels: &[usize]) -> DiscPoint {
    let side = match color {
        Color::White => 1,
        Color::Black => 2,
    };
    let e = edge_with(labels, side);
    tile.vertices[(e + 1) % tile.sides()]
}

/// The central cell, one of the sectors around it, and the tiles of the
/// Fibonacci tree laid out in that sector.
#[derive(Debug, Clone)]
pub struct SectorLayout {
    pub tess: Tessellation,
    pub sector: SectorBoundary,
    /// Ray excluded from the numbering: the continuation beyond the sector
    /// vertex of the next side of the central cell.
    pub excluded_ray: Ray,
    pub tree: FibonacciTree,
    /// Tile of each tree node, with its father on edge 0.
    pub tiles: Vec<Tile>,
}

/// Sector with vertex `V1` of the central cell and head across its side
/// `V0 V1`. Tree nodes are placed through `depth`.
pub fn layout(p: u32, depth: u32, tile_cap: usize) -> Result<SectorLayout> {
    let pair = validate(p as i64, 4)?;
    let tess = tessellate(pair, depth + 1, tile_cap)?;
    let central = &tess.tiles[0];
    let (v0, v1, v2) = (
        central.vertices[0],
        central.vertices[1],
        central.vertices[2],
    );
    let head = tess
        .neighbour(0, 0)
        .ok_or_else(|| Error::InsufficientTessellationDepth("no head tile".into()))?;
    let father_ray = Ray::towards(&v1, &v0);
    let excluded_ray = Ray::away_from(&v1, &v2);
    let sector = SectorBoundary {
        scheme: Scheme::EvenQ,
        kind: RegionKind::S0,
        vertex: v1,
        corner: vec![v1],
        rays: [excluded_ray, father_ray],
        ray_names: ["excluded".into(), "father".into()],
        head: Some(head),
    };
    let tree = fibonacci_tree_for(p, depth, Color::White);
    let mut tiles: Vec<Tile> = Vec::with_capacity(tree.nodes.len());
    tiles.push(reflect(central, 0));
    for n in &tree.nodes {
        let tile = tiles[(n.id - 1) as usize].clone();
        for (&child, side) in n.children.iter().zip(son_sides(n.color, p)) {
            debug_assert_eq!(child as usize - 1, tiles.len());
            let labels = side_numbering(&tile, tile.parent_edge)?;
            tiles.push(reflect(&tile, edge_with(&labels, side)));
        }
    }
    Ok(SectorLayout {
        tess,
        sector,
        excluded_ray,
        tree,
        tiles,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BijectionReport {
    pub p: u32,
    pub depth: u32,
    /// Distinct vertices of sector tiles through `depth`.
    pub sector_vertices: usize,
    /// Sector vertices numbered by a node through `depth`.
    pub covered: usize,
    /// Sector vertices nobody numbers, off the excluded ray and not numbered
    /// at the next level either.
    pub missed: Vec<DiscPoint>,
    /// Sector vertices numbered by a node of the next level.
    pub frontier: Vec<DiscPoint>,
    /// Vertices numbered by more than one node (all levels generated).
    pub doubly_assigned: Vec<(DiscPoint, Vec<u64>)>,
    /// Sector vertices on the excluded ray.
    pub excluded: Vec<DiscPoint>,
    /// Numbered vertices lying on the excluded ray.
    pub assigned_on_excluded_ray: Vec<(DiscPoint, u64)>,
    /// Numbered vertices (through `depth`) that are not vertices of sector tiles.
    pub outside_sector: Vec<(DiscPoint, u64)>,
    pub excluded_has_sector_vertex: bool,
    /// Largest distance from an excluded vertex to the excluded ray's line.
    pub excluded_ray_residual: f64,
    /// Sector tiles per level found geometrically, and tree nodes per level.
    pub geometric_levels: Vec<u64>,
    pub tree_levels: Vec<u64>,
}

impl BijectionReport {
    pub fn ok(&self) -> bool {
        self.missed.is_empty()
            && self.doubly_assigned.is_empty()
            && self.assigned_on_excluded_ray.is_empty()
            && self.outside_sector.is_empty()
            && self.excluded_has_sector_vertex
            && self.excluded_ray_residual < GEOMETRY_TOLERANCE
            && self.geometric_levels == self.tree_levels[..self.geometric_levels.len()]
    }
}

/// Number the sector's vertices through `depth` and classify the outcome.
pub fn check_bijection(depth: u32) -> Result<BijectionReport> {
    check_bijection_for(5, depth, DEFAULT_TILE_CAP)
}

pub fn check_bijection_for(p: u32, depth: u32, tile_cap: usize) -> Result<BijectionReport> {
    // one extra level tells frontier vertices from missed ones
    let lay = layout(p, depth + 1, tile_cap)?;
    let tess = &lay.tess;
    let head = lay.sector.head.expect("layout sets a head");

    // sector tiles found by geometry alone, levels by adjacency from the head
    let geometric = crate::geometry::sector::sector_levels(tess, &lay.sector, depth)?;
    let mut sector_tiles = vec![head];
    {
        let mut level = BTreeMap::from([(head, 0u32)]);
        let mut i = 0;
        while i < sector_tiles.len() {
            let t = sector_tiles[i];
            i += 1;
            let l = level[&t];
            if l == depth {
                continue;
            }
            for e in 0..tess.tiles[t].sides() {
                if let Some(n) = tess.neighbour(t, e) {
                    if !level.contains_key(&n) && assign_region(tess, n, &lay.sector) {
                        level.insert(n, l + 1);
                        sector_tiles.push(n);
                    }
                }
            }
        }
    }
    let sector_vertices: BTreeSet<usize> = sector_tiles
        .iter()
        .flat_map(|&t| tess.tile_vertices[t].iter().copied())
        .collect();

    // numbering by the tree
    let mut by_vertex: BTreeMap<usize, Vec<u64>> = BTreeMap::new();
    let mut outside_sector = Vec::new();
    let mut assigned_on_excluded_ray = Vec::new();
    for n in &lay.tree.nodes {
        let tile = &lay.tiles[(n.id - 1) as usize];
        let labels = side_numbering(tile, tile.parent_edge)?;
        let v = assign_vertex(n.color, tile, &labels);
        if lay.excluded_ray.touches(&v, GEOMETRY_TOLERANCE) {
            assigned_on_excluded_ray.push((v, n.id));
        }
        match tess.vertex_id(&v) {
            Some(id) => {
                if n.level <= depth && !sector_vertices.contains(&id) {
                    outside_sector.push((v, n.id));
                }
                by_vertex.entry(id).or_default().push(n.id);
            }
            None => {
                if n.level <= depth {
                    outside_sector.push((v, n.id));
                }
            }
        }
    }
    let doubly_assigned = by_vertex
        .iter()
        .filter(|(_, ids)| ids.len() > 1)
        .map(|(&v, ids)| (tess.vertex(v), ids.clone()))
        .collect();

    let mut covered = 0;
    let mut missed = Vec::new();
    let mut frontier = Vec::new();
    let mut excluded = Vec::new();
    let mut residual: f64 = 0.0;
    let line = lay.excluded_ray.line();
    for &v in &sector_vertices {
        let pt = tess.vertex(v);
        let level = by_vertex.get(&v).map(|ids| lay.tree.node(ids[0]).level);
        match level {
            Some(l) if l <= depth => covered += 1,
            Some(_) => frontier.push(pt),
            None if lay.excluded_ray.touches(&pt, GEOMETRY_TOLERANCE) => {
                residual = residual.max(line.distance(&pt));
                excluded.push(pt);
            }
            None => missed.push(pt),
        }
    }
    let excluded_has_sector_vertex = excluded.iter().any(|e| e.euclid(&lay.sector.vertex) < 1e-9);
    let mut tree_levels = lay.tree.level_counts();
    tree_levels.truncate(depth as usize + 1);
    Ok(BijectionReport {
        p,
        depth,
        sector_vertices: sector_vertices.len(),
        covered,
        missed,
        frontier,
        doubly_assigned,
        excluded,
        assigned_on_excluded_ray,
        outside_sector,
        excluded_has_sector_vertex,
        excluded_ray_residual: residual,
        geometric_levels: geometric,
        tree_levels,
    })
}

/// Sector tiles with the node numbers written at their assigned vertices.
pub fn dual_scene(depth: u32) -> Result<Scene> {
    let lay = layout(5, depth, DEFAULT_TILE_CAP)?;
    let mut scene = Scene::default();
    scene.tiles.push(ScenePolygon {
        points: lay.tess.tiles[0].vertices.clone(),
        fill: Some("#eeeeee".into()),
    });
    for (n, tile) in lay.tree.nodes.iter().zip(&lay.tiles) {
        let fill = match n.color {
            Color::White => None,
            Color::Black => Some("#d0d0d0".into()),
        };
        scene.tiles.push(ScenePolygon {
            points: tile.vertices.clone(),
            fill,
        });
    }
    scene.add_sector(&lay.sector, Some("#2c3e50"));
    for (n, tile) in lay.tree.nodes.iter().zip(&lay.tiles) {
        let labels = side_numbering(tile, tile.parent_edge)?;
        let at = assign_vertex(n.color, tile, &labels);
        scene.points.push(at);
        scene.labels.push(SceneLabel {
            at,
            text: n.id.to_string(),
        });
    }
    Ok(scene)
}
