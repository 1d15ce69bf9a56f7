//! Conservative rasterization of the covered region and connected
//! component labelling of cell sets.

use thiserror::Error;

use crate::geom::{Domain, Point, EPS_GEOM};
use crate::unionfind::UnionFind;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GridError {
    #[error("grid step {h} must be positive and at most r/4 = {limit}")]
    BadStep { h: f64, limit: f64 },
}

/// Rejects steps outside `(0, r/4]`.
pub fn check_step(h: f64, r: f64) -> Result<(), GridError> {
    let limit = r / 4.0;
    if h.is_finite() && h > 0.0 && h <= limit * (1.0 + EPS_GEOM) {
        Ok(())
    } else {
        Err(GridError::BadStep { h, limit })
    }
}

/// Default resolution used by the evasion engine and the CLI.
pub fn default_step(r: f64) -> f64 {
    r / 8.0
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Cell {
    Outside,
    Covered,
    Borderline,
    Uncovered,
}

impl Cell {
    pub fn is_uncovered(self) -> bool {
        self == Cell::Uncovered
    }

    /// Uncovered or too close to a ball boundary to tell.
    pub fn maybe_uncovered(self) -> bool {
        matches!(self, Cell::Uncovered | Cell::Borderline)
    }
}

/// Square cells of side `h`; cell `(i, j)` has center
/// `min + ((i + 1/2) h, (j + 1/2) h)` and index `j * cols + i`.
#[derive(Clone, Debug, PartialEq)]
pub struct Raster {
    min: Point,
    h: f64,
    cols: usize,
    rows: usize,
    cells: Vec<Cell>,
}

impl Raster {
    /// Classifies the cells of `domain` against balls of radius `r`.
    ///
    /// A cell is covered when its center lies within `r - m` of a sensor and
    /// uncovered when it lies beyond `r + m` of all of them, `m = h√2/2`.
    pub fn over_domain(domain: &Domain, h: f64, sensors: &[Point], r: f64) -> Raster {
        let (min, max) = domain.bounds();
        let mut raster = Raster::blank(min, max, h);
        let inside: Vec<bool> = (0..raster.len())
            .map(|i| domain.contains(raster.center(i)))
            .collect();
        raster.classify(sensors, r, |i| inside[i]);
        raster
    }

    /// Classifies every cell of the box `[min, max]`.
    pub fn over_box(min: Point, max: Point, h: f64, sensors: &[Point], r: f64) -> Raster {
        let mut raster = Raster::blank(min, max, h);
        raster.classify(sensors, r, |_| true);
        raster
    }

    fn blank(min: Point, max: Point, h: f64) -> Raster {
        let cols = (((max.x - min.x) / h) - 1e-9).ceil().max(1.0) as usize;
        let rows = (((max.y - min.y) / h) - 1e-9).ceil().max(1.0) as usize;
        Raster {
            min,
            h,
            cols,
            rows,
            cells: vec![Cell::Outside; cols * rows],
        }
    }

    fn classify(&mut self, sensors: &[Point], r: f64, inside: impl Fn(usize) -> bool) {
        let margin = self.margin();
        let reach = r + margin;
        let mut d2 = vec![f64::INFINITY; self.len()];
        for s in sensors {
            let (i0, i1) = self.span(s.x - self.min.x, reach, self.cols);
            let (j0, j1) = self.span(s.y - self.min.y, reach, self.rows);
            for j in j0..j1 {
                let dy = self.min.y + (j as f64 + 0.5) * self.h - s.y;
                for i in i0..i1 {
                    let dx = self.min.x + (i as f64 + 0.5) * self.h - s.x;
                    let d = dx * dx + dy * dy;
                    let slot = &mut d2[j * self.cols + i];
                    if d < *slot {
                        *slot = d;
                    }
                }
            }
        }
        let lo = (r - margin).max(0.0);
        for (idx, cell) in self.cells.iter_mut().enumerate() {
            *cell = if !inside(idx) {
                Cell::Outside
            } else {
                let d = d2[idx].sqrt();
                if d < lo {
                    Cell::Covered
                } else if d > reach {
                    Cell::Uncovered
                } else {
                    Cell::Borderline
                }
            };
        }
    }

    /// Index range of cells whose centers may lie within `reach` of `offset`.
    fn span(&self, offset: f64, reach: f64, n: usize) -> (usize, usize) {
        let lo = ((offset - reach) / self.h - 0.5).floor().max(0.0) as usize;
        let hi = (((offset + reach) / self.h - 0.5).ceil() + 1.0).max(0.0) as usize;
        (lo.min(n), hi.min(n))
    }

    pub fn margin(&self) -> f64 {
        self.h * std::f64::consts::SQRT_2 / 2.0
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cell(&self, idx: usize) -> Cell {
        self.cells[idx]
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn center(&self, idx: usize) -> Point {
        let (i, j) = (idx % self.cols, idx / self.cols);
        Point::new(
            self.min.x + (i as f64 + 0.5) * self.h,
            self.min.y + (j as f64 + 0.5) * self.h,
        )
    }

    /// Index of the cell containing `p`, if any.
    pub fn index_of(&self, p: Point) -> Option<usize> {
        let fi = ((p.x - self.min.x) / self.h).floor();
        let fj = ((p.y - self.min.y) / self.h).floor();
        if fi < 0.0 || fj < 0.0 || fi >= self.cols as f64 || fj >= self.rows as f64 {
            return None;
        }
        Some(fj as usize * self.cols + fi as usize)
    }

    pub fn count(&self, state: Cell) -> usize {
        self.cells.iter().filter(|&&c| c == state).count()
    }

    pub fn mask(&self, keep: impl Fn(Cell) -> bool) -> Vec<bool> {
        self.cells.iter().map(|&c| keep(c)).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Adjacency {
    Four,
    Eight,
}

/// Connected components of a cell mask; labels are numbered in row-major
/// order of each component's first cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Components {
    labels: Vec<u32>,
    count: usize,
}

impl Components {
    pub const NONE: u32 = u32::MAX;

    pub fn label(mask: &[bool], cols: usize, rows: usize, adjacency: Adjacency) -> Components {
        assert_eq!(mask.len(), cols * rows);
        let mut uf = UnionFind::new(mask.len());
        for j in 0..rows {
            for i in 0..cols {
                let a = j * cols + i;
                if !mask[a] {
                    continue;
                }
                if i + 1 < cols && mask[a + 1] {
                    uf.union(a, a + 1);
                }
                if j + 1 < rows {
                    let below = a + cols;
                    if mask[below] {
                        uf.union(a, below);
                    }
                    if adjacency == Adjacency::Eight {
                        if i + 1 < cols && mask[below + 1] {
                            uf.union(a, below + 1);
                        }
                        if i > 0 && mask[below - 1] {
                            uf.union(a, below - 1);
                        }
                    }
                }
            }
        }
        let mut root_label = vec![Self::NONE; mask.len()];
        let mut labels = vec![Self::NONE; mask.len()];
        let mut count = 0;
        for (a, &m) in mask.iter().enumerate() {
            if !m {
                continue;
            }
            let root = uf.find(a);
            if root_label[root] == Self::NONE {
                root_label[root] = count as u32;
                count += 1;
            }
            labels[a] = root_label[root];
        }
        Components { labels, count }
    }

    pub fn count(&self) -> usize {
        self.count
    }

    /// Component of a cell, or `None` for cells outside the mask.
    pub fn of(&self, idx: usize) -> Option<u32> {
        let l = self.labels[idx];
        (l != Self::NONE).then_some(l)
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    /// First cell of each component in row-major order.
    pub fn representatives(&self) -> Vec<usize> {
        let mut reps = vec![usize::MAX; self.count];
        for (idx, &l) in self.labels.iter().enumerate() {
            if l != Self::NONE && reps[l as usize] == usize::MAX {
                reps[l as usize] = idx;
            }
        }
        reps
    }

    /// For a mask contained in the mask of `outer`: every component of
    /// `outer` holds exactly one component of `self`.
    pub fn nests_one_to_one(&self, outer: &Components) -> bool {
        if self.count != outer.count {
            return false;
        }
        let mut image = vec![None; self.count];
        let mut hit = vec![false; outer.count];
        for (&s, &o) in self.labels.iter().zip(&outer.labels) {
            if s == Self::NONE {
                continue;
            }
            if o == Self::NONE {
                return false;
            }
            match image[s as usize] {
                None => {
                    if hit[o as usize] {
                        return false;
                    }
                    hit[o as usize] = true;
                    image[s as usize] = Some(o);
                }
                Some(prev) if prev != o => return false,
                Some(_) => {}
            }
        }
        hit.iter().all(|&h| h)
    }

    /// Components containing a cell on the outer frame of the grid.
    pub fn touching_frame(&self, cols: usize, rows: usize) -> Vec<bool> {
        let mut touch = vec![false; self.count];
        let mut mark = |idx: usize| {
            if let Some(l) = self.of(idx) {
                touch[l as usize] = true;
            }
        };
        for i in 0..cols {
            mark(i);
            mark((rows - 1) * cols + i);
        }
        for j in 0..rows {
            mark(j * cols);
            mark(j * cols + cols - 1);
        }
        touch
    }
}
