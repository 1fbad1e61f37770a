//! Sector boundaries for each scheme, region membership and cover checks.
//!
//! A sector is stored as a boundary walked with the region on its left:
//! in from infinity along `rays[0]`, through the `corner` polyline, out along
//! `rays[1]`, then back along the circle at infinity, counter-clockwise.

use std::collections::VecDeque;
use std::f64::consts::{PI, TAU};

use serde::Serialize;

use super::disc::{angle, klein_side, midpoint, offset, DiscPoint, Line};
use super::isometry::DiscIsometry;
use super::lines::Ray;
use super::tessellation::Tessellation;
use super::tile::tile_metrics;
use crate::error::{Error, Result};
use crate::schlafli::{RegionKind, Scheme};

pub const GEOMETRY_TOLERANCE: f64 = 1e-9;

/// Which polygon and which of its vertices a sector is built on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct Placement {
    pub tile: usize,
    /// Local vertex index in the tile.
    pub vertex: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SectorBoundary {
    pub scheme: Scheme,
    pub kind: RegionKind,
    pub vertex: DiscPoint,
    pub corner: Vec<DiscPoint>,
    pub rays: [Ray; 2],
    pub ray_names: [String; 2],
    pub head: Option<usize>,
}

/// Points of a polygon `P` around one of its vertices `V`. The sides at `V`
/// are `b` and `c`, with `b` reached from `c` by turning counter-clockwise
/// inside `P`; `a` is the edge at `V` on the exterior bisector of `P`.
#[derive(Debug, Clone, Copy)]
struct Corner {
    v: DiscPoint,
    b_end: DiscPoint,
    c_end: DiscPoint,
    mid_a: DiscPoint,
    mid_b: DiscPoint,
    mid_c: DiscPoint,
}

fn corner(tess: &Tessellation, at: Placement) -> Result<Corner> {
    let tile = tess
        .tiles
        .get(at.tile)
        .ok_or_else(|| Error::InvalidInput(format!("no tile {} in the tessellation", at.tile)))?;
    let n = tile.sides();
    if at.vertex >= n {
        return Err(Error::InvalidInput(format!(
            "vertex index {} out of range 0..{n}",
            at.vertex
        )));
    }
    let v = tile.vertices[at.vertex];
    let b_end = tile.vertices[(at.vertex + n - 1) % n];
    let c_end = tile.vertices[(at.vertex + 1) % n];
    let q = tess.pair.q as f64;
    let h = tess.pair.h as f64;
    let half = tile_metrics(tess.pair).half_edge;
    let theta_b = super::disc::direction(&v, &b_end);
    Ok(Corner {
        v,
        b_end,
        c_end,
        mid_a: offset(&v, theta_b + h * TAU / q, half),
        mid_b: midpoint(&v, &b_end),
        mid_c: midpoint(&v, &c_end),
    })
}

fn names(a: &str, b: &str) -> [String; 2] {
    [a.to_string(), b.to_string()]
}

/// Orders two rays from one apex so that the narrower wedge between them is
/// on the left of the boundary walk.
fn wedge(apex: DiscPoint, r: Ray, s: Ray) -> [Ray; 2] {
    let d = (r.theta - s.theta).rem_euclid(TAU);
    if d < PI {
        [r, s]
    } else {
        let _ = apex;
        [s, r]
    }
}

pub fn sector(
    tess: &Tessellation,
    scheme: Scheme,
    kind: RegionKind,
    at: Placement,
) -> Result<SectorBoundary> {
    let pair = tess.pair;
    if scheme.needs_odd_q() != pair.q_is_odd() {
        return Err(Error::SchemeParityMismatch { scheme, q: pair.q });
    }
    if scheme.needs_odd_q() && pair.h < 2 {
        return Err(Error::UnsupportedCase(format!(
            "{scheme:?} needs h >= 2, got {pair}"
        )));
    }
    let k = corner(tess, at)?;
    let q = pair.q as f64;
    let make = |corner: Vec<DiscPoint>,
                rays: [Ray; 2],
                ray_names: [String; 2],
                head: Option<usize>| SectorBoundary {
        scheme,
        kind,
        vertex: k.v,
        corner,
        rays,
        ray_names,
        head,
    };
    match (scheme, kind) {
        (Scheme::EvenQ, RegionKind::S0) => Ok(make(
            vec![k.v],
            [Ray::towards(&k.v, &k.b_end), Ray::towards(&k.v, &k.c_end)],
            names("rho_l", "rho_r"),
            Some(at.tile),
        )),
        (Scheme::EvenQ, RegionKind::S1) => {
            // across the side from V to c_end; rays continue the two sides
            // of P adjacent to it
            let tile = &tess.tiles[at.tile];
            let n = tile.sides();
            let beyond = tile.vertices[(at.vertex + 2) % n];
            let head = tess.neighbour(at.tile, at.vertex);
            Ok(make(
                vec![k.c_end, k.v],
                [
                    Ray::away_from(&k.c_end, &beyond),
                    Ray::away_from(&k.v, &k.b_end),
                ],
                names("rho_l", "rho_r"),
                head,
            ))
        }
        (Scheme::OddLegacy, _) => Err(Error::UnsupportedCase(
            "legacy odd regions are bounded by zig-zag lines, not geodesic rays".into(),
        )),
        (Scheme::OddV1, RegionKind::S0) => {
            let rho_b = Ray::away_from(&k.mid_b, &k.mid_a);
            let rho_c = rho_b.map(&DiscIsometry::rotation_about(&k.v, -TAU / q));
            Ok(make(
                vec![k.mid_b, k.v, k.mid_c],
                [rho_b, rho_c],
                names("rho_B", "rho_C"),
                Some(at.tile),
            ))
        }
        (Scheme::OddV1, RegionKind::S0Prime) => {
            let rho_m = Ray::away_from(&k.mid_b, &k.mid_a);
            let rho_n = rho_m.map(&DiscIsometry::reflection(&k.v, &k.b_end));
            let rays = wedge(k.mid_b, rho_m, rho_n);
            let ray_names = if rays[0] == rho_m {
                names("rho_m", "rho_n")
            } else {
                names("rho_n", "rho_m")
            };
            Ok(SectorBoundary {
                vertex: k.mid_b,
                ..make(vec![k.mid_b], rays, ray_names, None)
            })
        }
        (Scheme::OddV2, RegionKind::S0Prime) => Ok(make(
            vec![k.mid_b, k.v, k.mid_c],
            [
                Ray::away_from(&k.mid_b, &k.mid_a),
                Ray::away_from(&k.mid_c, &k.mid_a),
            ],
            names("rho_AB", "rho_AC"),
            Some(at.tile),
        )),
        (Scheme::OddV1 | Scheme::OddV2, RegionKind::S1) => Err(Error::UnsupportedCase(
            "the odd-scheme S1 region is not built as a geodesic sector".into(),
        )),
        (_, kind) => Err(Error::UnknownRegion(kind)),
    }
}

fn segment_touches(u: &DiscPoint, v: &DiscPoint, z: &DiscPoint, tol: f64) -> bool {
    if u.euclid(v) < 1e-15 {
        return super::disc::distance(u, z) < tol;
    }
    let l = Line::through(u, v);
    let len = super::disc::distance(u, v);
    let x = l.abscissa(z);
    l.distance(z) < tol && x > -tol && x < len + tol
}

fn winding(poly: &[[f64; 2]], z: [f64; 2]) -> i32 {
    let mut w = 0;
    for i in 0..poly.len() {
        let a = poly[i];
        let b = poly[(i + 1) % poly.len()];
        if a[1] <= z[1] {
            if b[1] > z[1] && klein_side(a, b, z) > 0.0 {
                w += 1;
            }
        } else if b[1] <= z[1] && klein_side(a, b, z) < 0.0 {
            w -= 1;
        }
    }
    w
}

impl SectorBoundary {
    pub fn on_boundary(&self, z: &DiscPoint, tol: f64) -> bool {
        self.rays.iter().any(|r| r.touches(z, tol))
            || self
                .corner
                .windows(2)
                .any(|w| segment_touches(&w[0], &w[1], z, tol))
            || self
                .corner
                .iter()
                .any(|c| super::disc::distance(c, z) < tol)
    }

    /// Membership of `z`; the boundary counts as inside.
    pub fn contains(&self, z: &DiscPoint, tol: f64) -> bool {
        if self.on_boundary(z, tol) {
            return true;
        }
        let i0 = self.rays[0].ideal;
        let i1 = self.rays[1].ideal;
        let mut poly = vec![[i0.x, i0.y]];
        poly.extend(self.corner.iter().map(|c| c.klein()));
        poly.push([i1.x, i1.y]);
        let kz = z.klein();
        // the closing arc replaces the chord from i1 to i0; the circular
        // segment between them is on the left of the chord from i0 to i1
        let seg = i32::from(klein_side([i0.x, i0.y], [i1.x, i1.y], kz) > 0.0);
        winding(&poly, kz) + seg == 1
    }

    /// Counter-clockwise length of the arc at infinity, from the end of
    /// `rays[1]` to the end of `rays[0]`.
    pub fn ideal_arc(&self) -> f64 {
        let a1 = self.rays[1].ideal.y.atan2(self.rays[1].ideal.x);
        let a0 = self.rays[0].ideal.y.atan2(self.rays[0].ideal.x);
        (a0 - a1).rem_euclid(TAU)
    }

    /// Angle between the two rays when they leave the same point.
    pub fn apex_angle(&self) -> Option<f64> {
        if self.rays[0].origin.euclid(&self.rays[1].origin) > 1e-12 {
            return None;
        }
        let d = (self.rays[0].theta - self.rays[1].theta).rem_euclid(TAU);
        Some(d)
    }
}

/// True when at most one vertex of the tile lies strictly outside the sector.
pub fn assign_region(tess: &Tessellation, tile: usize, sector: &SectorBoundary) -> bool {
    let outside = tess.tiles[tile]
        .vertices
        .iter()
        .filter(|v| !sector.contains(v, GEOMETRY_TOLERANCE))
        .count();
    outside <= 1
}

/// Tile counts per level inside the sector, levels following adjacency from
/// the head tile.
pub fn sector_levels(tess: &Tessellation, sector: &SectorBoundary, depth: u32) -> Result<Vec<u64>> {
    let head = sector
        .head
        .ok_or_else(|| Error::InvalidInput("sector has no head tile".into()))?;
    let mut level = vec![u32::MAX; tess.len()];
    let mut counts = vec![0u64; depth as usize + 1];
    let mut queue = VecDeque::from([head]);
    level[head] = 0;
    while let Some(t) = queue.pop_front() {
        let l = level[t];
        counts[l as usize] += 1;
        if l == depth {
            continue;
        }
        for e in 0..tess.tiles[t].sides() {
            let Some(n) = tess.neighbour(t, e) else {
                return Err(Error::InsufficientTessellationDepth(format!(
                    "tile {t} at level {l} lacks a neighbour"
                )));
            };
            if level[n] == u32::MAX && assign_region(tess, n, sector) {
                level[n] = l + 1;
                queue.push_back(n);
            }
        }
    }
    Ok(counts)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverReport {
    pub copies: usize,
    /// Largest mismatch between a copy's outgoing ray and the next copy's
    /// incoming ray (origin plus ideal end point, Euclidean).
    pub residual: f64,
    /// Sum of the arcs at infinity; `2pi` for a cover of winding one.
    pub arc_sum: f64,
    pub single_cycle: bool,
    pub notes: Vec<(String, f64)>,
}

impl CoverReport {
    pub fn closes(&self, tol: f64) -> bool {
        self.single_cycle && self.residual < tol && (self.arc_sum - TAU).abs() < tol
    }
}

/// Chains the copies by matching boundary rays and sums their arcs.
pub fn close_up(copies: &[SectorBoundary]) -> CoverReport {
    let n = copies.len();
    let mismatch = |a: &Ray, b: &Ray| a.origin.euclid(&b.origin) + a.ideal.euclid(&b.ideal);
    let mut next = vec![usize::MAX; n];
    let mut residual: f64 = 0.0;
    for i in 0..n {
        let (j, m) = (0..n)
            .filter(|&j| j != i)
            .map(|j| (j, mismatch(&copies[i].rays[1], &copies[j].rays[0])))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap_or((i, f64::INFINITY));
        next[i] = j;
        residual = residual.max(m);
    }
    let mut seen = vec![false; n];
    let mut i = 0;
    let mut steps = 0;
    while n > 0 && !seen[i] {
        seen[i] = true;
        i = next[i];
        steps += 1;
    }
    let single_cycle = n > 0 && steps == n && i == 0;
    let arc_sum = copies.iter().map(|c| c.ideal_arc()).sum();
    CoverReport {
        copies: n,
        residual,
        arc_sum,
        single_cycle,
        notes: Vec::new(),
    }
}

fn tiles_around(tess: &Tessellation, vertex: usize) -> Result<Vec<Placement>> {
    let tiles = tess.tiles_at(vertex);
    if tiles.len() != tess.pair.q as usize {
        return Err(Error::InsufficientTessellationDepth(format!(
            "{} of {} tiles around vertex {vertex}",
            tiles.len(),
            tess.pair.q
        )));
    }
    Ok(tiles
        .iter()
        .map(|&t| Placement {
            tile: t,
            vertex: tess.tile_vertices[t]
                .iter()
                .position(|&v| v == vertex)
                .expect("incident"),
        })
        .collect())
}

/// The `q` copies of the scheme's main region, one per tile around `vertex`.
pub fn copies_around(
    tess: &Tessellation,
    scheme: Scheme,
    vertex: usize,
) -> Result<Vec<SectorBoundary>> {
    let kind = if scheme == Scheme::OddV2 {
        RegionKind::S0Prime
    } else {
        RegionKind::S0
    };
    tiles_around(tess, vertex)?
        .into_iter()
        .map(|at| sector(tess, scheme, kind, at))
        .collect()
}

/// Cover of the plane around a vertex: `q` copies of S0 for EvenQ and
/// OddV1, `2q` copies of S0' for OddV2 (one headed by each tile, one in
/// between each adjacent pair).
pub fn cover_around(tess: &Tessellation, scheme: Scheme, vertex: usize) -> Result<CoverReport> {
    if scheme != Scheme::OddV2 {
        return Ok(close_up(&copies_around(tess, scheme, vertex)?));
    }
    let (all, rotation_residual, angle_gap) = odd_v2_cover(tess, vertex)?;
    let mut report = close_up(&all);
    report
        .notes
        .push(("rotation_residual".into(), rotation_residual));
    report.notes.push(("wedge_angle_gap".into(), angle_gap));
    Ok(report)
}

/// Every copy that `cover_around` chains, in the same order.
pub fn cover_copies(
    tess: &Tessellation,
    scheme: Scheme,
    vertex: usize,
) -> Result<Vec<SectorBoundary>> {
    if scheme != Scheme::OddV2 {
        return copies_around(tess, scheme, vertex);
    }
    Ok(odd_v2_cover(tess, vertex)?.0)
}

fn odd_v2_cover(tess: &Tessellation, vertex: usize) -> Result<(Vec<SectorBoundary>, f64, f64)> {
    let headed = copies_around(tess, Scheme::OddV2, vertex)?;
    let places = tiles_around(tess, vertex)?;
    let q = tess.pair.q as f64;
    let mut all = headed.clone();
    let mut rotation_residual: f64 = 0.0;
    let mut angle_gap: f64 = 0.0;
    for (i, at) in places.iter().enumerate() {
        let k = corner(tess, *at)?;
        // the polygon across side c shares the midpoint of c as its B
        let (j, other) = places
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(j, p)| (j, corner(tess, *p)))
            .find(|(_, c)| {
                c.as_ref()
                    .map_or(false, |c| c.mid_b.euclid(&k.mid_c) < 1e-9)
            })
            .ok_or_else(|| {
                Error::InsufficientTessellationDepth("no polygon across side c".into())
            })?;
        let other = other?;
        let _ = j;
        let rays = [
            Ray::away_from(&k.mid_c, &k.mid_a),
            Ray::away_from(&k.mid_c, &other.mid_a),
        ];
        let between = SectorBoundary {
            scheme: Scheme::OddV2,
            kind: RegionKind::S0Prime,
            vertex: k.mid_c,
            corner: vec![k.mid_c],
            rays,
            ray_names: names("rho_AC", "rho_GC"),
            head: None,
        };
        // rho_GC is the image of rho_AB under the rotation taking a to g
        let rho_ab = Ray::away_from(&k.mid_b, &k.mid_a);
        let turned = rho_ab.map(&DiscIsometry::rotation_about(&k.v, -TAU / q));
        rotation_residual = rotation_residual
            .max(turned.origin.euclid(&rays[1].origin) + turned.ideal.euclid(&rays[1].ideal));
        // the in-between wedge is as wide as the wedge of the h-mid-point
        // lines at A
        let at_a = angle(&k.mid_a, &k.mid_b, &k.mid_c);
        let at_c = between.apex_angle().unwrap_or(f64::NAN);
        angle_gap = angle_gap.max((at_a - at_c).abs());
        all.push(between);
    }
    Ok((all, rotation_residual, angle_gap))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::tessellation::{tessellate, DEFAULT_TILE_CAP};
    use crate::schlafli::validate;

    fn tess(p: i64, q: i64, g: u32) -> Tessellation {
        tessellate(validate(p, q).unwrap(), g, DEFAULT_TILE_CAP).unwrap()
    }

    #[test]
    fn even_copies_close_up() {
        let t = tess(6, 4, 3);
        let r = cover_around(&t, Scheme::EvenQ, t.tile_vertices[0][0]).unwrap();
        assert_eq!(r.copies, 4);
        assert!(r.closes(1e-9), "{r:?}");
    }

    #[test]
    fn odd_v1_copies_close_up() {
        let t = tess(5, 7, 4);
        let r = cover_around(&t, Scheme::OddV1, t.tile_vertices[0][0]).unwrap();
        assert_eq!(r.copies, 7);
        assert!(r.closes(1e-9), "{r:?}");
    }

    #[test]
    fn odd_v2_copies_close_up() {
        let t = tess(5, 7, 4);
        let r = cover_around(&t, Scheme::OddV2, t.tile_vertices[0][0]).unwrap();
        assert_eq!(r.copies, 14);
        assert!(r.closes(1e-9), "{r:?}");
        for (name, v) in &r.notes {
            assert!(*v < 1e-9, "{name} = {v}");
        }
    }

    #[test]
    fn head_is_in_and_far_tiles_are_out() {
        for (p, q, scheme, kind) in [
            (5, 4, Scheme::EvenQ, RegionKind::S0),
            (5, 4, Scheme::EvenQ, RegionKind::S1),
            (5, 7, Scheme::OddV1, RegionKind::S0),
        ] {
            let t = tess(p, q, 3);
            let s = sector(&t, scheme, kind, Placement::default()).unwrap();
            let head = s.head.unwrap();
            assert!(assign_region(&t, head, &s), "head {scheme:?} {kind:?}");
            // the tile across the base tile from the sector vertex
            let far = reflect_far(&t);
            assert!(!assign_region(&t, far, &s), "{scheme:?} {kind:?}");
        }
    }

    #[test]
    fn odd_v2_head_has_two_vertices_outside() {
        // both h-mid-point rays enter P, cutting off the far ends of b and c
        let t = tess(5, 7, 3);
        let s = sector(&t, Scheme::OddV2, RegionKind::S0Prime, Placement::default()).unwrap();
        let p = &t.tiles[0];
        let outside: Vec<usize> = (0..p.sides())
            .filter(|&i| !s.contains(&p.vertices[i], GEOMETRY_TOLERANCE))
            .collect();
        assert_eq!(outside, vec![1, p.sides() - 1]);
        assert!(!assign_region(&t, 0, &s));
        assert!(s.contains(&p.center, GEOMETRY_TOLERANCE));
    }

    fn reflect_far(t: &Tessellation) -> usize {
        // the tile facing the base tile across its vertex 0
        let v = t.tile_vertices[0][0];
        let c = t.tiles[0].center;
        *t.tiles_at(v)
            .iter()
            .max_by(|&&a, &&b| {
                let da = super::super::disc::distance(&t.tiles[a].center, &c);
                let db = super::super::disc::distance(&t.tiles[b].center, &c);
                da.total_cmp(&db)
            })
            .unwrap()
    }

    #[test]
    fn odd_v1_sector_leaves_out_only_v2() {
        // rho_B cuts P near the far end of side b: that vertex alone is
        // outside, so P and the tiles of the fan there are still spanned
        let t = tess(5, 7, 4);
        let s = sector(&t, Scheme::OddV1, RegionKind::S0, Placement::default()).unwrap();
        let p = &t.tiles[0];
        let v2 = p.vertices[p.sides() - 1];
        assert!(!s.contains(&v2, GEOMETRY_TOLERANCE));
        let outside: Vec<_> = p
            .vertices
            .iter()
            .filter(|v| !s.contains(v, GEOMETRY_TOLERANCE))
            .collect();
        assert_eq!(outside.len(), 1);
        let v2_id = t.vertex_id(&v2).unwrap();
        let fan: Vec<usize> = t
            .tiles_at(v2_id)
            .iter()
            .copied()
            .filter(|&x| {
                let out: Vec<_> = t.tiles[x]
                    .vertices
                    .iter()
                    .filter(|v| !s.contains(v, GEOMETRY_TOLERANCE))
                    .collect();
                out.len() == 1 && out[0].euclid(&v2) < 1e-9
            })
            .collect();
        assert!(fan.len() >= 2, "{fan:?}");
        for x in fan {
            assert!(assign_region(&t, x, &s));
        }
    }

    #[test]
    fn exterior_bisector_edge_is_a_tessellation_edge() {
        let t = tess(5, 7, 3);
        let k = corner(&t, Placement::default()).unwrap();
        let far = offset(
            &k.v,
            super::super::disc::direction(&k.v, &k.mid_a),
            tile_metrics(t.pair).edge(),
        );
        assert!(t.vertex_id(&far).is_some());
    }

    #[test]
    fn pentagrid_sector_counts_match_the_tree() {
        let t = tess(5, 4, 5);
        let s = sector(&t, Scheme::EvenQ, RegionKind::S0, Placement::default()).unwrap();
        assert_eq!(sector_levels(&t, &s, 4).unwrap(), vec![1, 3, 8, 21, 55]);
    }

    #[test]
    fn odd_s0_prime_is_a_narrow_wedge() {
        let t = tess(5, 7, 3);
        let s = sector(&t, Scheme::OddV1, RegionKind::S0Prime, Placement::default()).unwrap();
        let a = s.apex_angle().unwrap();
        assert!(a > 0.0 && a < PI);
    }

    #[test]
    fn mismatched_requests() {
        let t = tess(5, 4, 1);
        assert!(matches!(
            sector(&t, Scheme::OddV1, RegionKind::S0, Placement::default()),
            Err(Error::SchemeParityMismatch { .. })
        ));
        assert!(matches!(
            sector(&t, Scheme::EvenQ, RegionKind::S0Prime, Placement::default()),
            Err(Error::UnknownRegion(RegionKind::S0Prime))
        ));
        let t = tess(7, 3, 1);
        assert!(matches!(
            sector(&t, Scheme::OddV1, RegionKind::S0, Placement::default()),
            Err(Error::UnsupportedCase(_))
        ));
    }
}
