//! Deduplicating point store on a uniform grid.

use std::collections::HashMap;

use super::disc::DiscPoint;

pub const DEDUP_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct PointIndex {
    tol: f64,
    cell: f64,
    points: Vec<DiscPoint>,
    grid: HashMap<(i64, i64), Vec<usize>>,
}

impl PointIndex {
    pub fn new(tol: f64) -> Self {
        Self {
            tol,
            cell: tol * 4.0,
            points: Vec::new(),
            grid: HashMap::new(),
        }
    }

    fn key(&self, p: &DiscPoint) -> (i64, i64) {
        (
            (p.x / self.cell).floor() as i64,
            (p.y / self.cell).floor() as i64,
        )
    }

    pub fn find(&self, p: &DiscPoint) -> Option<usize> {
        let (kx, ky) = self.key(p);
        let mut best: Option<(usize, f64)> = None;
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(ids) = self.grid.get(&(kx + dx, ky + dy)) {
                    for &id in ids {
                        let d = self.points[id].euclid(p);
                        if d < self.tol && best.map_or(true, |(_, b)| d < b) {
                            best = Some((id, d));
                        }
                    }
                }
            }
        }
        best.map(|(id, _)| id)
    }

    /// Id of `p`, inserting it when no stored point is within tolerance.
    pub fn insert(&mut self, p: DiscPoint) -> usize {
        if let Some(id) = self.find(&p) {
            return id;
        }
        let id = self.points.len();
        let k = self.key(&p);
        self.points.push(p);
        self.grid.entry(k).or_default().push(id);
        id
    }

    pub fn get(&self, id: usize) -> DiscPoint {
        self.points[id]
    }

    pub fn points(&self) -> &[DiscPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}
