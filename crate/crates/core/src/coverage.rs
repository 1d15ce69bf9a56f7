//! Static coverage: the homological criterion and a conservative grid oracle.

use serde::Serialize;

use crate::cech::{cech_at, cech_from_points};
use crate::complex::betti;
use crate::geom::{Point, Scene};
use crate::grid::{check_step, Adjacency, Cell, Components, GridError, Raster};

/// Boundary points sampled when checking the fence.
pub const FENCE_SAMPLES: usize = 1024;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CoverageVerdict {
    pub covered: bool,
    pub beta1: usize,
    pub fence_ok: bool,
}

/// Coverage at `t` from the first Betti number of the Čech complex.
pub fn is_covered_homology(scene: &Scene, t: f64) -> CoverageVerdict {
    let beta1 = betti(&cech_at(scene, t), 1);
    CoverageVerdict {
        covered: beta1 == 0,
        beta1,
        fence_ok: scene.fence_covers_boundary(t, FENCE_SAMPLES),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GridStatus {
    Covered,
    Hole,
    Uncertain,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GridVerdict {
    pub status: GridStatus,
    pub witness: Option<Point>,
}

/// Rasterized coverage at step `h`.
///
/// Any uncovered cell is a hole (its center is the witness). With no
/// uncovered cell the verdict is covered only if no borderline cell is left
/// either; otherwise it is uncertain.
pub fn is_covered_grid(scene: &Scene, t: f64, h: f64) -> Result<GridVerdict, GridError> {
    check_step(h, scene.radius())?;
    let raster = Raster::over_domain(scene.domain(), h, &scene.positions_at(t), scene.radius());
    Ok(grid_verdict(&raster))
}

pub fn grid_verdict(raster: &Raster) -> GridVerdict {
    if let Some(idx) = raster.cells().iter().position(|&c| c == Cell::Uncovered) {
        return GridVerdict {
            status: GridStatus::Hole,
            witness: Some(raster.center(idx)),
        };
    }
    let status = if raster.count(Cell::Borderline) == 0 {
        GridStatus::Covered
    } else {
        GridStatus::Uncertain
    };
    GridVerdict {
        status,
        witness: None,
    }
}

/// Betti numbers `(β0, β1)` of a union of open balls estimated on a grid.
///
/// The bounding box of the balls, padded so its frame is surely uncovered,
/// is rasterized twice: once keeping only cells surely inside the union and
/// once keeping every cell that may touch it. Covered cells connect through
/// edges, background cells also through corners. The estimate stands only
/// if the inclusion of the first picture into the second matches covered
/// components one to one and background components one to one; then β1
/// counts the background components apart from the one on the frame.
/// Returns `None` otherwise.
pub fn union_betti_grid(points: &[Point], r: f64, h: f64) -> Result<Option<(usize, usize)>, GridError> {
    check_step(h, r)?;
    if points.is_empty() {
        return Ok(Some((0, 0)));
    }
    let pad = r + 3.0 * h;
    let min = Point::new(
        points.iter().map(|p| p.x).fold(f64::INFINITY, f64::min) - pad,
        points.iter().map(|p| p.y).fold(f64::INFINITY, f64::min) - pad,
    );
    let max = Point::new(
        points.iter().map(|p| p.x).fold(f64::NEG_INFINITY, f64::max) + pad,
        points.iter().map(|p| p.y).fold(f64::NEG_INFINITY, f64::max) + pad,
    );
    let raster = Raster::over_box(min, max, h, points, r);
    let (cols, rows) = (raster.cols(), raster.rows());
    let tight = raster.mask(|c| c == Cell::Covered);
    let loose = raster.mask(|c| c != Cell::Uncovered);
    let fg_tight = Components::label(&tight, cols, rows, Adjacency::Four);
    let fg_loose = Components::label(&loose, cols, rows, Adjacency::Four);
    let not = |m: &[bool]| m.iter().map(|&x| !x).collect::<Vec<bool>>();
    let bg_tight = Components::label(&not(&tight), cols, rows, Adjacency::Eight);
    let bg_loose = Components::label(&not(&loose), cols, rows, Adjacency::Eight);
    if !fg_tight.nests_one_to_one(&fg_loose) || !bg_loose.nests_one_to_one(&bg_tight) {
        return Ok(None);
    }
    Ok(Some((fg_tight.count(), bg_tight.count() - 1)))
}

/// `(β0, β1)` of the Čech complex of the same balls.
pub fn nerve_betti(points: &[Point], r: f64) -> (usize, usize) {
    let k = cech_from_points(points, r);
    (betti(&k, 0), betti(&k, 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Domain;

    fn rect(w: f64, h: f64) -> Domain {
        Domain::rectangle(Point::new(0.0, 0.0), Point::new(w, h)).unwrap()
    }

    /// Sensors on a square lattice of pitch `p` over the rectangle.
    fn lattice(w: f64, h: f64, p: f64) -> Vec<Point> {
        let mut v = Vec::new();
        let (nx, ny) = ((w / p).round() as usize, (h / p).round() as usize);
        for j in 0..=ny {
            for i in 0..=nx {
                v.push(Point::new(i as f64 * p, j as f64 * p));
            }
        }
        v
    }

    /// Fence of sensors around the rectangle plus an inner ring that leaves
    /// the center far from every sensor.
    fn ring_scene() -> Scene {
        let mut fence = Vec::new();
        let n = 24;
        for i in 0..n {
            let a = std::f64::consts::TAU * i as f64 / n as f64;
            fence.push(Point::new(5.0 + 3.0 * a.cos(), 5.0 + 3.0 * a.sin()));
        }
        for p in lattice(10.0, 10.0, 1.0) {
            if (p.x - 5.0).abs() > 3.5 || (p.y - 5.0).abs() > 3.5 {
                fence.push(p);
            }
        }
        Scene::new(rect(10.0, 10.0), 1.0, fence, vec![], "ring").unwrap()
    }

    #[test]
    fn dense_grid_is_covered() {
        let scene = Scene::new(rect(4.0, 4.0), 1.0, lattice(4.0, 4.0, 1.0), vec![], "dense").unwrap();
        let v = is_covered_homology(&scene, 0.0);
        assert!(v.fence_ok);
        assert_eq!((v.covered, v.beta1), (true, 0));
        let g = is_covered_grid(&scene, 0.0, 1.0 / 32.0).unwrap();
        assert_eq!(g.status, GridStatus::Covered);
    }

    #[test]
    fn ring_has_a_hole() {
        let scene = ring_scene();
        let v = is_covered_homology(&scene, 0.0);
        assert!(v.fence_ok);
        assert!(!v.covered);
        assert!(v.beta1 >= 1);
        let g = is_covered_grid(&scene, 0.0, 0.125).unwrap();
        assert_eq!(g.status, GridStatus::Hole);
        let w = g.witness.unwrap();
        assert!(!scene.is_covered_point(0.0, w));
        let center = scene.domain().bounds();
        let c = Point::new((center.0.x + center.1.x) / 2.0, (center.0.y + center.1.y) / 2.0);
        assert!(!scene.is_covered_point(0.0, c));
    }

    #[test]
    fn single_sensor_covers_small_box() {
        let scene = Scene::new(rect(0.5, 0.5), 1.0, vec![Point::new(0.25, 0.25)], vec![], "one").unwrap();
        assert_eq!(is_covered_grid(&scene, 0.0, 0.05).unwrap().status, GridStatus::Covered);
    }

    #[test]
    fn empty_scene_is_a_hole() {
        let scene = Scene::new(rect(2.0, 2.0), 1.0, vec![], vec![], "empty").unwrap();
        let g = is_covered_grid(&scene, 0.0, 0.25).unwrap();
        assert_eq!(g.status, GridStatus::Hole);
        assert!(g.witness.is_some());
        assert!(!is_covered_homology(&scene, 0.0).fence_ok);
    }

    #[test]
    fn coarse_grid_rejected() {
        let scene = Scene::new(rect(2.0, 2.0), 1.0, vec![], vec![], "empty").unwrap();
        assert!(is_covered_grid(&scene, 0.0, 0.3).is_err());
    }

    #[test]
    fn union_betti_examples() {
        let r = 1.0;
        let h = r / 16.0;
        // hexagon of balls around an empty center
        let ring: Vec<Point> = (0..6)
            .map(|i| {
                let a = std::f64::consts::TAU * i as f64 / 6.0;
                Point::new(1.7 * a.cos(), 1.7 * a.sin())
            })
            .collect();
        assert_eq!(union_betti_grid(&ring, r, h).unwrap(), Some((1, 1)));
        assert_eq!(nerve_betti(&ring, r), (1, 1));
        let apart = [Point::new(0.0, 0.0), Point::new(5.0, 0.0)];
        assert_eq!(union_betti_grid(&apart, r, h).unwrap(), Some((2, 0)));
        assert_eq!(union_betti_grid(&[], r, h).unwrap(), Some((0, 0)));
    }
}
