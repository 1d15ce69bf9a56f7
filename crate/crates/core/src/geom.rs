//! Planar geometry for disk sensors: points, domains, piecewise-linear
//! trajectories, minimal enclosing balls and pointwise coverage.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scenes::Metadata;

/// Symmetric tolerance used for every threshold comparison.
///
/// A quantity within `EPS_GEOM` of its critical value is treated as lying on
/// the threshold, which for open balls means "not inside".
pub const EPS_GEOM: f64 = 1e-9;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dist(self, other: Point) -> f64 {
        self.dist2(other).sqrt()
    }

    pub fn dist2(self, other: Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    pub fn midpoint(self, other: Point) -> Point {
        Point::new(0.5 * (self.x + other.x), 0.5 * (self.y + other.y))
    }

    pub fn lerp(self, other: Point, s: f64) -> Point {
        Point::new(
            self.x + (other.x - self.x) * s,
            self.y + (other.y - self.y) * s,
        )
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl From<[f64; 2]> for Point {
    fn from([x, y]: [f64; 2]) -> Self {
        Point { x, y }
    }
}

impl From<Point> for [f64; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Identity of a sensor: fence sensors come first, then mobile sensors, in
/// the order they are listed in the scene.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SensorId(pub u32);

impl SensorId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for SensorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Convex region the sensors live in.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    Disk { center: Point, radius: f64 },
    Rectangle { min: Point, max: Point },
}

impl Domain {
    pub fn disk(center: Point, radius: f64) -> Result<Self, SceneError> {
        let d = Domain::Disk { center, radius };
        d.validate()?;
        Ok(d)
    }

    pub fn rectangle(min: Point, max: Point) -> Result<Self, SceneError> {
        let d = Domain::Rectangle { min, max };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<(), SceneError> {
        match *self {
            Domain::Disk { center, radius } => {
                if !center.is_finite() || !radius.is_finite() {
                    return Err(SceneError::NonFinite);
                }
                if radius <= 0.0 {
                    return Err(SceneError::InvalidDomain("disk radius must be positive"));
                }
            }
            Domain::Rectangle { min, max } => {
                if !min.is_finite() || !max.is_finite() {
                    return Err(SceneError::NonFinite);
                }
                if !(min.x < max.x && min.y < max.y) {
                    return Err(SceneError::InvalidDomain(
                        "rectangle min must be below max componentwise",
                    ));
                }
            }
        }
        Ok(())
    }

    /// Closed-domain membership with `EPS_GEOM` slack.
    pub fn contains(&self, p: Point) -> bool {
        match *self {
            Domain::Disk { center, radius } => p.dist(center) <= radius + EPS_GEOM,
            Domain::Rectangle { min, max } => {
                p.x >= min.x - EPS_GEOM
                    && p.x <= max.x + EPS_GEOM
                    && p.y >= min.y - EPS_GEOM
                    && p.y <= max.y + EPS_GEOM
            }
        }
    }

    /// Axis-aligned bounding box `(min, max)`.
    pub fn bounds(&self) -> (Point, Point) {
        match *self {
            Domain::Disk { center, radius } => (
                Point::new(center.x - radius, center.y - radius),
                Point::new(center.x + radius, center.y + radius),
            ),
            Domain::Rectangle { min, max } => (min, max),
        }
    }

    pub fn perimeter(&self) -> f64 {
        match *self {
            Domain::Disk { radius, .. } => 2.0 * std::f64::consts::PI * radius,
            Domain::Rectangle { min, max } => 2.0 * ((max.x - min.x) + (max.y - min.y)),
        }
    }

    /// `n` boundary points equispaced by arc length, counterclockwise.
    ///
    /// Disks start at angle zero; rectangles start at the `min` corner.
    pub fn boundary_samples(&self, n: usize) -> Vec<Point> {
        let total = self.perimeter();
        (0..n)
            .map(|i| self.boundary_point(total * i as f64 / n as f64))
            .collect()
    }

    fn boundary_point(&self, s: f64) -> Point {
        match *self {
            Domain::Disk { center, radius } => {
                let a = s / radius;
                Point::new(center.x + radius * a.cos(), center.y + radius * a.sin())
            }
            Domain::Rectangle { min, max } => {
                let w = max.x - min.x;
                let h = max.y - min.y;
                if s < w {
                    Point::new(min.x + s, min.y)
                } else if s < w + h {
                    Point::new(max.x, min.y + (s - w))
                } else if s < 2.0 * w + h {
                    Point::new(max.x - (s - w - h), max.y)
                } else {
                    Point::new(min.x, max.y - (s - 2.0 * w - h))
                }
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Keyframe {
    pub t: f64,
    pub pos: Point,
}

impl Keyframe {
    pub const fn new(t: f64, x: f64, y: f64) -> Self {
        Keyframe {
            t,
            pos: Point::new(x, y),
        }
    }
}

impl Serialize for Keyframe {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.t, self.pos.x, self.pos.y].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Keyframe {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let [t, x, y] = <[f64; 3]>::deserialize(d)?;
        Ok(Keyframe::new(t, x, y))
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TrajectoryError {
    #[error("keyframes not increasing")]
    NotIncreasing,
    #[error("keyframes must start at t=0 and end at t=1")]
    Span,
    #[error("non-finite keyframe")]
    NonFinite,
}

/// Piecewise-linear motion over the unit time interval.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawTrajectory", into = "RawTrajectory")]
pub struct Trajectory {
    keyframes: Vec<Keyframe>,
}

#[derive(Serialize, Deserialize)]
struct RawTrajectory {
    keyframes: Vec<Keyframe>,
}

impl TryFrom<RawTrajectory> for Trajectory {
    type Error = TrajectoryError;

    fn try_from(raw: RawTrajectory) -> Result<Self, Self::Error> {
        Trajectory::new(raw.keyframes)
    }
}

impl From<Trajectory> for RawTrajectory {
    fn from(t: Trajectory) -> Self {
        RawTrajectory {
            keyframes: t.keyframes,
        }
    }
}

impl Trajectory {
    pub fn new(keyframes: Vec<Keyframe>) -> Result<Self, TrajectoryError> {
        if keyframes
            .iter()
            .any(|k| !k.t.is_finite() || !k.pos.is_finite())
        {
            return Err(TrajectoryError::NonFinite);
        }
        if keyframes.windows(2).any(|w| w[1].t <= w[0].t) {
            return Err(TrajectoryError::NotIncreasing);
        }
        let spans = keyframes.len() >= 2
            && keyframes[0].t == 0.0
            && keyframes[keyframes.len() - 1].t == 1.0;
        if !spans {
            return Err(TrajectoryError::Span);
        }
        Ok(Trajectory { keyframes })
    }

    pub fn stationary(p: Point) -> Self {
        Trajectory {
            keyframes: vec![Keyframe { t: 0.0, pos: p }, Keyframe { t: 1.0, pos: p }],
        }
    }

    pub fn keyframes(&self) -> &[Keyframe] {
        &self.keyframes
    }

    /// Position at time `t`, clamped to `[0, 1]`.
    pub fn position_at(&self, t: f64) -> Point {
        let t = t.clamp(0.0, 1.0);
        let k = &self.keyframes;
        // index of the first keyframe with time > t
        let i = k.partition_point(|kf| kf.t <= t);
        if i == 0 {
            return k[0].pos;
        }
        if i == k.len() {
            return k[k.len() - 1].pos;
        }
        let (a, b) = (k[i - 1], k[i]);
        if t == a.t {
            return a.pos;
        }
        a.pos.lerp(b.pos, (t - a.t) / (b.t - a.t))
    }

    /// Largest segment speed, the Lipschitz constant of `position_at`.
    pub fn max_speed(&self) -> f64 {
        self.keyframes
            .windows(2)
            .map(|w| w[0].pos.dist(w[1].pos) / (w[1].t - w[0].t))
            .fold(0.0, f64::max)
    }

    pub fn map_points(&self, f: impl Fn(Point) -> Point) -> Trajectory {
        Trajectory {
            keyframes: self
                .keyframes
                .iter()
                .map(|k| Keyframe { t: k.t, pos: f(k.pos) })
                .collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Ball {
    pub center: Point,
    pub radius: f64,
}

impl Ball {
    pub fn contains(&self, p: Point, tol: f64) -> bool {
        p.dist(self.center) <= self.radius + tol
    }
}

/// Smallest ball containing one to three points.
///
/// Three open balls of radius `r` share a point exactly when the minimal
/// enclosing ball of their centers has radius below `r`.
pub fn min_enclosing_ball(points: &[Point]) -> Ball {
    match *points {
        [a] => Ball {
            center: a,
            radius: 0.0,
        },
        [a, b] => diametral(a, b),
        [a, b, c] => {
            // A pair ball that already holds the third point is optimal; the
            // smallest such wins. Otherwise all three points are on the
            // boundary and the triangle is acute.
            let mut best: Option<Ball> = None;
            for (p, q, o) in [(a, b, c), (a, c, b), (b, c, a)] {
                let ball = diametral(p, q);
                if ball.contains(o, 1e-12 * (1.0 + ball.radius)) {
                    best = match best {
                        Some(cur) if cur.radius <= ball.radius => Some(cur),
                        _ => Some(ball),
                    };
                }
            }
            best.or_else(|| circumball(a, b, c))
                .unwrap_or_else(|| {
                    // degenerate collinear input that slipped through tolerance
                    let (p, q) = farthest_pair(a, b, c);
                    diametral(p, q)
                })
        }
        _ => panic!("min_enclosing_ball takes 1 to 3 points, got {}", points.len()),
    }
}

fn diametral(a: Point, b: Point) -> Ball {
    Ball {
        center: a.midpoint(b),
        radius: 0.5 * a.dist(b),
    }
}

fn farthest_pair(a: Point, b: Point, c: Point) -> (Point, Point) {
    let ab = a.dist2(b);
    let ac = a.dist2(c);
    let bc = b.dist2(c);
    if ab >= ac && ab >= bc {
        (a, b)
    } else if ac >= bc {
        (a, c)
    } else {
        (b, c)
    }
}

/// Circle through three points, `None` when they are collinear.
pub fn circumball(a: Point, b: Point, c: Point) -> Option<Ball> {
    let bx = b.x - a.x;
    let by = b.y - a.y;
    let cx = c.x - a.x;
    let cy = c.y - a.y;
    let d = 2.0 * (bx * cy - by * cx);
    if d.abs() < 1e-300 {
        return None;
    }
    let b2 = bx * bx + by * by;
    let c2 = cx * cx + cy * cy;
    let ux = (cy * b2 - by * c2) / d;
    let uy = (bx * c2 - cx * b2) / d;
    let center = Point::new(a.x + ux, a.y + uy);
    Some(Ball {
        center,
        radius: (ux * ux + uy * uy).sqrt(),
    })
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SceneError {
    #[error("sensing radius must be positive and finite, got {0}")]
    InvalidRadius(f64),
    #[error("invalid domain: {0}")]
    InvalidDomain(&'static str),
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("trajectory {index}: {source}")]
    Trajectory {
        index: usize,
        source: TrajectoryError,
    },
    #[error("trajectory {index} leaves the domain at t={t}")]
    LeavesDomain { index: usize, t: f64 },
    #[error("fence sensor {index} lies outside the domain")]
    FenceOutside { index: usize },
    #[error("invalid metadata: {0}")]
    Metadata(String),
}

/// A mobile sensor network over the time interval `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Scene {
    domain: Domain,
    radius: f64,
    fence: Vec<Point>,
    mobile: Vec<Trajectory>,
    label: String,
    metadata: Metadata,
}

impl Scene {
    pub fn new(
        domain: Domain,
        radius: f64,
        fence: Vec<Point>,
        mobile: Vec<Trajectory>,
        label: impl Into<String>,
    ) -> Result<Self, SceneError> {
        domain.validate()?;
        if !(radius.is_finite() && radius > 0.0) {
            return Err(SceneError::InvalidRadius(radius));
        }
        for (index, p) in fence.iter().enumerate() {
            if !p.is_finite() {
                return Err(SceneError::NonFinite);
            }
            if !domain.contains(*p) {
                return Err(SceneError::FenceOutside { index });
            }
        }
        // convex domain: checking keyframes covers every interpolated position
        for (index, traj) in mobile.iter().enumerate() {
            if let Some(k) = traj.keyframes().iter().find(|k| !domain.contains(k.pos)) {
                return Err(SceneError::LeavesDomain { index, t: k.t });
            }
        }
        Ok(Scene {
            domain,
            radius,
            fence,
            mobile,
            label: label.into(),
            metadata: Metadata::default(),
        })
    }

    pub fn with_metadata(mut self, metadata: Metadata) -> Result<Self, SceneError> {
        metadata.validate(self.sensor_count())?;
        self.metadata = metadata;
        Ok(self)
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn fence(&self) -> &[Point] {
        &self.fence
    }

    pub fn mobile(&self) -> &[Trajectory] {
        &self.mobile
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn metadata(&self) -> &Metadata {
        &self.metadata
    }

    pub fn sensor_count(&self) -> usize {
        self.fence.len() + self.mobile.len()
    }

    pub fn sensor_ids(&self) -> impl Iterator<Item = SensorId> {
        (0..self.sensor_count() as u32).map(SensorId)
    }

    /// Sensor positions at `t`, indexed by `SensorId`.
    pub fn positions_at(&self, t: f64) -> Vec<Point> {
        self.fence
            .iter()
            .copied()
            .chain(self.mobile.iter().map(|m| m.position_at(t)))
            .collect()
    }

    pub fn is_covered_point(&self, t: f64, p: Point) -> bool {
        let limit = self.radius - EPS_GEOM;
        self.positions_at(t).iter().any(|z| z.dist(p) < limit)
    }

    /// Whether `n_samples` equispaced boundary points are all covered at `t`.
    pub fn fence_covers_boundary(&self, t: f64, n_samples: usize) -> bool {
        let positions = self.positions_at(t);
        if positions.is_empty() {
            return false;
        }
        let limit = self.radius - EPS_GEOM;
        self.domain
            .boundary_samples(n_samples.max(3))
            .iter()
            .all(|b| positions.iter().any(|z| z.dist(*b) < limit))
    }

    /// The same scene with one sensor removed; later ids shift down by one.
    pub fn without_sensor(&self, id: SensorId) -> Scene {
        let mut s = self.clone();
        let i = id.index();
        if i < s.fence.len() {
            s.fence.remove(i);
        } else {
            s.mobile.remove(i - s.fence.len());
        }
        s.metadata = Metadata::default();
        s
    }

    pub fn with_extra_mobile(&self, traj: Trajectory) -> Result<Scene, SceneError> {
        let mut mobile = self.mobile.clone();
        mobile.push(traj);
        Scene::new(
            self.domain.clone(),
            self.radius,
            self.fence.clone(),
            mobile,
            self.label.clone(),
        )
    }

    /// Scene frozen at time `t`: every mobile sensor stationary there.
    pub fn frozen_at(&self, t: f64) -> Scene {
        Scene {
            mobile: self
                .mobile
                .iter()
                .map(|m| Trajectory::stationary(m.position_at(t)))
                .collect(),
            metadata: Metadata::default(),
            ..self.clone()
        }
    }
}
