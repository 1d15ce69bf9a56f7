//! Čech complexes of disk sensors and the timeline of their combinatorial
//! changes.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::complex::{betti, SimplicialComplex};
use crate::geom::{min_enclosing_ball, Point, Scene, SensorId, EPS_GEOM};
use crate::grid::{default_step, Cell, Raster};

/// Čech complex of open balls of radius `r` around `points`, vertex `i`
/// standing for `SensorId(i)`.
///
/// Edges and triangles share one threshold on diameters: a pair or triple
/// spans a simplex when its minimal enclosing ball has diameter below
/// `2r - EPS_GEOM`. An obtuse triple thus enters together with its longest
/// edge.
pub fn cech_from_points(points: &[Point], r: f64) -> SimplicialComplex {
    let n = points.len();
    let id = |i: usize| SensorId(i as u32);
    let mut neighbours: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut edges = Vec::new();
    let reach = 2.0 * r - EPS_GEOM;
    for i in 0..n {
        for j in i + 1..n {
            if points[i].dist(points[j]) < reach {
                neighbours[i].push(j);
                edges.push([id(i), id(j)]);
            }
        }
    }
    let mut triangles = Vec::new();
    for i in 0..n {
        for (a, &j) in neighbours[i].iter().enumerate() {
            for &l in &neighbours[i][a + 1..] {
                if neighbours[j].binary_search(&l).is_ok()
                    && 2.0 * min_enclosing_ball(&[points[i], points[j], points[l]]).radius < reach
                {
                    triangles.push([id(i), id(j), id(l)]);
                }
            }
        }
    }
    SimplicialComplex::from_closed((0..n).map(id).collect(), edges, triangles)
}

/// Nerve of the sensor balls of `scene` at time `t`.
pub fn cech_at(scene: &Scene, t: f64) -> SimplicialComplex {
    cech_from_points(&scene.positions_at(t), scene.radius())
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TimelineError {
    #[error("need 0 < tol < dt <= 0.1, got dt={dt}, tol={tol}")]
    BadParameters { dt: f64, tol: f64 },
    #[error("non-generic scene: several combinatorial changes within [{lo}, {hi}]")]
    NonGeneric { lo: f64, hi: f64 },
}

/// Maximal intervals of constant combinatorial type.
#[derive(Clone, Debug, PartialEq)]
pub struct Timeline {
    breakpoints: Vec<f64>,
    complexes: Vec<SimplicialComplex>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IntervalSummary {
    pub start: f64,
    pub end: f64,
    pub vertices: usize,
    pub edges: usize,
    pub triangles: usize,
    pub beta0: usize,
    pub beta1: usize,
}

impl Timeline {
    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn complexes(&self) -> &[SimplicialComplex] {
        &self.complexes
    }

    pub fn len(&self) -> usize {
        self.complexes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.complexes.is_empty()
    }

    pub fn interval(&self, i: usize) -> (f64, f64) {
        (self.breakpoints[i], self.breakpoints[i + 1])
    }

    /// Complex in force at time `t` (left interval at a breakpoint).
    pub fn complex_at(&self, t: f64) -> &SimplicialComplex {
        let i = self.breakpoints[1..]
            .partition_point(|&b| b < t)
            .min(self.complexes.len() - 1);
        &self.complexes[i]
    }

    pub fn shortest_interval(&self) -> f64 {
        self.breakpoints
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min)
    }

    pub fn summaries(&self) -> Vec<IntervalSummary> {
        self.complexes
            .iter()
            .enumerate()
            .map(|(i, k)| IntervalSummary {
                start: self.breakpoints[i],
                end: self.breakpoints[i + 1],
                vertices: k.vertices().len(),
                edges: k.edges().len(),
                triangles: k.triangles().len(),
                beta0: betti(k, 0),
                beta1: betti(k, 1),
            })
            .collect()
    }

    /// Plain-text interval table, one row per interval.
    pub fn table(&self) -> String {
        let mut out = String::from("# start end vertices edges triangles beta0 beta1\n");
        for s in self.summaries() {
            let _ = writeln!(
                out,
                "{:.9} {:.9} {} {} {} {} {}",
                s.start, s.end, s.vertices, s.edges, s.triangles, s.beta0, s.beta1
            );
        }
        out
    }
}

/// Sample times `k/n` for `k = 0..=n`, `n = ceil(1/dt)`.
pub fn sample_times(dt: f64) -> Vec<f64> {
    let n = (1.0 / dt - 1e-9).ceil().max(1.0) as usize;
    (0..=n).map(|k| k as f64 / n as f64).collect()
}

/// Samples the nerve every `dt` and bisects each change down to `tol`.
pub fn build_timeline(scene: &Scene, dt: f64, tol: f64) -> Result<Timeline, TimelineError> {
    if !(tol > 0.0 && tol < dt && dt <= 0.1) {
        return Err(TimelineError::BadParameters { dt, tol });
    }
    let times = sample_times(dt);
    let samples: Vec<SimplicialComplex> = times.par_iter().map(|&t| cech_at(scene, t)).collect();
    let mut breakpoints = vec![0.0];
    let mut complexes = vec![samples[0].clone()];
    let precision = tol * 1e-3;
    for w in 0..times.len() - 1 {
        if samples[w] != samples[w + 1] {
            let mut changes = Vec::new();
            localize(
                scene,
                (times[w], &samples[w]),
                (times[w + 1], &samples[w + 1]),
                precision,
                &mut changes,
            )?;
            for (t, k) in changes {
                let prev = *breakpoints.last().expect("starts at 0");
                if prev > 0.0 && t - prev < tol {
                    return Err(TimelineError::NonGeneric { lo: prev, hi: t });
                }
                breakpoints.push(t);
                complexes.push(k);
            }
        }
    }
    breakpoints.push(1.0);
    Ok(Timeline {
        breakpoints,
        complexes,
    })
}

/// Bisects a change between two samples down to `precision`, splitting
/// whenever the midpoint matches neither end.
fn localize(
    scene: &Scene,
    (lo, klo): (f64, &SimplicialComplex),
    (hi, khi): (f64, &SimplicialComplex),
    precision: f64,
    out: &mut Vec<(f64, SimplicialComplex)>,
) -> Result<(), TimelineError> {
    let mid = 0.5 * (lo + hi);
    let kmid = cech_at(scene, mid);
    if hi - lo <= precision {
        if kmid != *klo && kmid != *khi {
            return Err(TimelineError::NonGeneric { lo, hi });
        }
        out.push((mid, khi.clone()));
        return Ok(());
    }
    if kmid == *klo {
        localize(scene, (mid, &kmid), (hi, khi), precision, out)
    } else if kmid == *khi {
        localize(scene, (lo, klo), (mid, &kmid), precision, out)
    } else {
        localize(scene, (lo, klo), (mid, &kmid), precision, out)?;
        localize(scene, (mid, &kmid), (hi, khi), precision, out)
    }
}

/// Whether nerve and covered region only grow over `[t, t2]`, checked on
/// `n` equispaced samples at the default grid resolution.
pub fn monotone_growth(scene: &Scene, t: f64, t2: f64, n: usize) -> bool {
    monotone_growth_with(scene, t, t2, n, default_step(scene.radius()))
}

/// As [`monotone_growth`] at grid step `h`. A covered cell may not become
/// uncovered later; borderline cells are not held to either side.
pub fn monotone_growth_with(scene: &Scene, t: f64, t2: f64, n: usize, h: f64) -> bool {
    assert!(t <= t2 && n >= 2, "need t <= t2 and n >= 2");
    let times: Vec<f64> = (0..n)
        .map(|i| t + (t2 - t) * i as f64 / (n - 1) as f64)
        .collect();
    let r = scene.radius();
    let snaps: Vec<(SimplicialComplex, Raster)> = times
        .par_iter()
        .map(|&s| {
            (
                cech_at(scene, s),
                Raster::over_domain(scene.domain(), h, &scene.positions_at(s), r),
            )
        })
        .collect();
    (0..n).all(|i| {
        (i + 1..n).all(|j| {
            snaps[i].0.is_subcomplex_of(&snaps[j].0)
                && snaps[i]
                    .1
                    .cells()
                    .iter()
                    .zip(snaps[j].1.cells())
                    .all(|(&a, &b)| !(a == Cell::Covered && b == Cell::Uncovered))
        })
    })
}
