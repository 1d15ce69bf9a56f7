//! Evasion paths through the uncovered region, decided on a spacetime grid.

use std::collections::VecDeque;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::cech::sample_times;
use crate::geom::{Point, Scene};
use crate::grid::{check_step, Adjacency, Cell, Components, GridError, Raster};

/// Grid picture of the uncovered part of one fiber.
#[derive(Clone, Debug)]
pub struct UncoveredSlice {
    pub t: f64,
    pub raster: Raster,
    /// Components of the surely uncovered cells.
    pub components: Components,
    /// Components once borderline cells are counted as uncovered too.
    pub relaxed: Components,
}

impl UncoveredSlice {
    fn build(scene: &Scene, t: f64, h: f64) -> UncoveredSlice {
        let raster = Raster::over_domain(scene.domain(), h, &scene.positions_at(t), scene.radius());
        let (cols, rows) = (raster.cols(), raster.rows());
        let components =
            Components::label(&raster.mask(Cell::is_uncovered), cols, rows, Adjacency::Four);
        let relaxed =
            Components::label(&raster.mask(Cell::maybe_uncovered), cols, rows, Adjacency::Four);
        UncoveredSlice {
            t,
            raster,
            components,
            relaxed,
        }
    }

    pub fn component_count(&self) -> usize {
        self.components.count()
    }
}

pub fn uncovered_slice(scene: &Scene, t: f64, h: f64) -> Result<UncoveredSlice, GridError> {
    check_step(h, scene.radius())?;
    Ok(UncoveredSlice::build(scene, t, h))
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvasionError {
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error("time step must lie in (0, 1], got {0}")]
    BadTimeStep(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Exists,
    None,
    Indeterminate,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Exists => "exists",
            Verdict::None => "none",
            Verdict::Indeterminate => "indeterminate",
        }
    }

    pub fn is_decisive(self) -> bool {
        self != Verdict::Indeterminate
    }
}

/// One witness entry: a time and a cell center uncovered there.
pub type WitnessPoint = (f64, Point);

#[derive(Clone, Debug, PartialEq)]
pub struct EvasionResult {
    pub verdict: Verdict,
    pub witness: Option<Vec<WitnessPoint>>,
}

impl EvasionResult {
    pub fn exists(&self) -> bool {
        self.verdict == Verdict::Exists
    }
}

/// Layers processed per parallel batch.
const BATCH: usize = 32;

/// Decides whether a continuous path can stay uncovered from `t = 0` to
/// `t = 1`.
///
/// Slices are taken at `k/n`, `n = ceil(1/dt)`. A component at one slice
/// links to a component at the next when they share a cell. A path through
/// surely uncovered cells gives `Exists`; failing that, a path once
/// borderline cells are admitted gives `Indeterminate`; otherwise `None`.
pub fn evasion_exists(scene: &Scene, h: f64, dt: f64) -> Result<EvasionResult, EvasionError> {
    check_step(h, scene.radius())?;
    if !(dt > 0.0 && dt <= 1.0) {
        return Err(EvasionError::BadTimeStep(dt));
    }
    let times = sample_times(dt);
    let mut strict = Sweep::default();
    let mut relaxed = Sweep::default();
    let mut previous: Option<UncoveredSlice> = None;
    for batch in times.chunks(BATCH) {
        let slices: Vec<UncoveredSlice> = batch
            .par_iter()
            .map(|&t| UncoveredSlice::build(scene, t, h))
            .collect();
        for slice in slices {
            strict.advance(previous.as_ref().map(|p| &p.components), &slice.components);
            relaxed.advance(previous.as_ref().map(|p| &p.relaxed), &slice.relaxed);
            previous = Some(slice);
        }
    }
    let last = previous.expect("at least two slices");
    if let Some(end) = strict.reached.iter().position(|&r| r) {
        let cells = strict.backtrack(end as u32);
        let mut witness: Vec<WitnessPoint> = cells
            .iter()
            .zip(&times)
            .map(|(&c, &t)| (t, last.raster.center(c)))
            .collect();
        let tail = *cells.last().expect("one link per step");
        witness.push((1.0, last.raster.center(tail)));
        return Ok(EvasionResult {
            verdict: Verdict::Exists,
            witness: Some(witness),
        });
    }
    let verdict = if relaxed.reached.iter().any(|&r| r) {
        Verdict::Indeterminate
    } else {
        Verdict::None
    };
    Ok(EvasionResult {
        verdict,
        witness: None,
    })
}

/// Pairs of components of two labellings of the same grid that share a
/// cell, with the first shared cell, in order of that cell.
pub fn overlap_links(a: &Components, b: &Components) -> Vec<(u32, u32, usize)> {
    let mut seen = std::collections::BTreeSet::new();
    a.labels()
        .iter()
        .zip(b.labels())
        .enumerate()
        .filter(|(_, (&x, &y))| x != Components::NONE && y != Components::NONE)
        .filter(|(_, (&x, &y))| seen.insert((x, y)))
        .map(|(cell, (&x, &y))| (x, y, cell))
        .collect()
}

/// Forward reachability through the layered component graph.
#[derive(Default)]
struct Sweep {
    reached: Vec<bool>,
    /// Per step, for each component of the later slice: the earlier
    /// component it was reached from and the smallest linking cell.
    links: Vec<Vec<Option<(u32, usize)>>>,
}

impl Sweep {
    fn advance(&mut self, prev: Option<&Components>, next: &Components) {
        let Some(prev) = prev else {
            self.reached = vec![true; next.count()];
            return;
        };
        let mut reached = vec![false; next.count()];
        let mut link = vec![None; next.count()];
        for (a, b, cell) in overlap_links(prev, next) {
            if self.reached[a as usize] && !reached[b as usize] {
                reached[b as usize] = true;
                link[b as usize] = Some((a, cell));
            }
        }
        self.reached = reached;
        self.links.push(link);
    }

    /// Linking cells from the first step to the last, ending in `end`.
    fn backtrack(&self, end: u32) -> Vec<usize> {
        let mut cells = Vec::with_capacity(self.links.len());
        let mut comp = end;
        for step in self.links.iter().rev() {
            let (from, cell) = step[comp as usize].expect("reached component has a link");
            cells.push(cell);
            comp = from;
        }
        cells.reverse();
        cells
    }
}

/// Independent check of a witness by re-rasterizing every listed time.
///
/// Requires times from 0 to 1, strictly increasing; each point uncovered at
/// its own time and at the next one; and consecutive points joined by a
/// path of uncovered cells at the later time.
pub fn validate_witness(scene: &Scene, w: &[WitnessPoint], h: f64) -> bool {
    if w.len() < 2 || check_step(h, scene.radius()).is_err() {
        return false;
    }
    let (first, last) = (w[0].0, w[w.len() - 1].0);
    if first.abs() > 1e-9 || (last - 1.0).abs() > 1e-9 {
        return false;
    }
    if w.windows(2).any(|p| p[1].0 <= p[0].0) {
        return false;
    }
    w.par_windows(2).all(|pair| {
        let ((t0, p0), (t1, p1)) = (pair[0], pair[1]);
        let now = Probe::new(scene, t0, h);
        let next = Probe::new(scene, t1, h);
        now.uncovered_at(p0) && next.uncovered_at(p0) && next.connected(p0, p1)
    })
}

/// Lazily evaluated cell classification at one time, used by the validator.
struct Probe {
    sensors: Vec<Point>,
    r: f64,
    h: f64,
    min: Point,
    cols: i64,
    rows: i64,
    domain: crate::geom::Domain,
}

impl Probe {
    fn new(scene: &Scene, t: f64, h: f64) -> Probe {
        let (min, max) = scene.domain().bounds();
        Probe {
            sensors: scene.positions_at(t),
            r: scene.radius(),
            h,
            min,
            cols: ((max.x - min.x) / h - 1e-9).ceil() as i64,
            rows: ((max.y - min.y) / h - 1e-9).ceil() as i64,
            domain: scene.domain().clone(),
        }
    }

    fn cell_of(&self, p: Point) -> Option<(i64, i64)> {
        let i = ((p.x - self.min.x) / self.h).floor() as i64;
        let j = ((p.y - self.min.y) / self.h).floor() as i64;
        (0..self.cols).contains(&i).then_some(())?;
        (0..self.rows).contains(&j).then_some((i, j))
    }

    fn free(&self, (i, j): (i64, i64)) -> bool {
        let c = Point::new(
            self.min.x + (i as f64 + 0.5) * self.h,
            self.min.y + (j as f64 + 0.5) * self.h,
        );
        if !self.domain.contains(c) {
            return false;
        }
        let limit = self.r + self.h * std::f64::consts::SQRT_2 / 2.0;
        self.sensors.iter().all(|s| s.dist(c) > limit)
    }

    fn uncovered_at(&self, p: Point) -> bool {
        self.cell_of(p).is_some_and(|c| self.free(c))
    }

    /// Breadth-first flood fill over free cells from `a` looking for `b`.
    fn connected(&self, a: Point, b: Point) -> bool {
        let (Some(start), Some(goal)) = (self.cell_of(a), self.cell_of(b)) else {
            return false;
        };
        if !self.free(start) || !self.free(goal) {
            return false;
        }
        let mut seen = vec![false; (self.cols * self.rows) as usize];
        let key = |(i, j): (i64, i64)| (j * self.cols + i) as usize;
        seen[key(start)] = true;
        let mut queue = VecDeque::from([start]);
        while let Some((i, j)) = queue.pop_front() {
            if (i, j) == goal {
                return true;
            }
            for n in [(i + 1, j), (i - 1, j), (i, j + 1), (i, j - 1)] {
                if (0..self.cols).contains(&n.0)
                    && (0..self.rows).contains(&n.1)
                    && !seen[key(n)]
                {
                    seen[key(n)] = true;
                    if self.free(n) {
                        queue.push_back(n);
                    }
                }
            }
        }
        false
    }
}

/// Witness file body: one `t x y` line per entry.
pub fn format_witness(w: &[WitnessPoint]) -> String {
    let mut out = String::new();
    for (t, p) in w {
        let _ = writeln!(out, "{t:.9} {:.9} {:.9}", p.x, p.y);
    }
    out
}

#[derive(Debug, Error, Clone, PartialEq)]
#[error("witness line {line}: {message}")]
pub struct WitnessParseError {
    pub line: usize,
    pub message: String,
}

pub fn parse_witness(text: &str) -> Result<Vec<WitnessPoint>, WitnessParseError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            let err = |message: String| WitnessParseError { line: i + 1, message };
            let v = l
                .split_whitespace()
                .map(str::parse::<f64>)
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| err(e.to_string()))?;
            match v[..] {
                [t, x, y] => Ok((t, Point::new(x, y))),
                _ => Err(err(format!("expected 3 numbers, found {}", v.len()))),
            }
        })
        .collect()
}
