//! Scene files and the two built-in networks A and B.
//!
//! A and B share their fence, their sensor ids and all motions except that
//! of four sensors near the center, whose vertical coordinates are mirrored
//! across the horizontal line of sensors. Their nerves therefore coincide at
//! every time while the small square hole opens above the line in A and
//! below it in B.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{Domain, Keyframe, Point, Scene, SceneError, SensorId, Trajectory};

/// Extra data carried by shipped scenes.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    /// Designated fiber pair `(t, t2)` with `t < t2`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair: Option<[f64; 2]>,
    /// Distinguished cycle as a closed vertex loop.
    #[serde(default, rename = "loop", skip_serializing_if = "Vec::is_empty")]
    pub loop_ids: Vec<SensorId>,
    /// Representative times of the stages of the choreography.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub stages: Vec<f64>,
}

impl Metadata {
    pub fn validate(&self, n_sensors: usize) -> Result<(), SceneError> {
        let bad = |m: &str| Err(SceneError::Metadata(m.to_string()));
        if let Some([t, t2]) = self.pair {
            if !(0.0..=1.0).contains(&t) || !(0.0..=1.0).contains(&t2) || t >= t2 {
                return bad("pair must satisfy 0 <= t < t2 <= 1");
            }
        }
        if !self.loop_ids.is_empty() {
            if self.loop_ids.len() < 3 {
                return bad("loop needs at least 3 vertices");
            }
            if let Some(v) = self.loop_ids.iter().find(|v| v.index() >= n_sensors) {
                return Err(SceneError::Metadata(format!("loop vertex {v} is not a sensor")));
            }
            let mut sorted = self.loop_ids.clone();
            sorted.sort();
            sorted.dedup();
            if sorted.len() != self.loop_ids.len() {
                return bad("loop repeats a vertex");
            }
        }
        if self.stages.iter().any(|s| !(0.0..=1.0).contains(s))
            || self.stages.windows(2).any(|w| w[1] <= w[0])
        {
            return bad("stages must be increasing times in [0, 1]");
        }
        Ok(())
    }
}

pub const FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SceneFile {
    format_version: u32,
    label: String,
    domain: Domain,
    radius: f64,
    fence: Vec<Point>,
    mobile: Vec<Trajectory>,
    #[serde(default)]
    metadata: Metadata,
}

#[derive(Debug, Error)]
pub enum SceneFileError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unsupported format_version {0}, expected {FORMAT_VERSION}")]
    Version(u32),
    #[error(transparent)]
    Invalid(#[from] SceneError),
}

/// Canonical JSON text of a scene, newline terminated.
pub fn to_json(scene: &Scene) -> String {
    let file = SceneFile {
        format_version: FORMAT_VERSION,
        label: scene.label().to_string(),
        domain: scene.domain().clone(),
        radius: scene.radius(),
        fence: scene.fence().to_vec(),
        mobile: scene.mobile().to_vec(),
        metadata: scene.metadata().clone(),
    };
    let mut s = serde_json::to_string_pretty(&file).expect("scene serializes");
    s.push('\n');
    s
}

/// Parses and validates a scene document.
pub fn from_json(text: &str) -> Result<Scene, SceneFileError> {
    let file: SceneFile = serde_json::from_str(text).map_err(|e| SceneFileError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if file.format_version != FORMAT_VERSION {
        return Err(SceneFileError::Version(file.format_version));
    }
    let scene = Scene::new(file.domain, file.radius, file.fence, file.mobile, file.label)?;
    Ok(scene.with_metadata(file.metadata)?)
}

pub fn load(path: impl AsRef<Path>) -> Result<Scene, SceneFileError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| SceneFileError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    from_json(&text)
}

pub fn save(scene: &Scene, path: impl AsRef<Path>) -> Result<(), SceneFileError> {
    let path = path.as_ref();
    fs::write(path, to_json(scene)).map_err(|source| SceneFileError::Io {
        path: path.to_path_buf(),
        source,
    })
}

// Layout of the built-in networks, radius 1.
const HALF_W: f64 = 6.25;
const HALF_H: f64 = 6.0;
const LINE_X: [f64; 6] = [-5.65, -4.05, -2.45, 2.45, 4.05, 5.65];
const GRID_X: [f64; 11] = [-5.5, -4.4, -3.3, -2.2, -1.1, 0.0, 1.1, 2.2, 3.3, 4.4, 5.5];
const GRID_Y: [f64; 5] = [0.9, 2.0, 3.1, 4.2, 5.3];

/// Ids of the sensors at the two ends of the horizontal line, on the fence.
pub const RIGHT_ANCHOR: SensorId = SensorId(13);
pub const LEFT_ANCHOR: SensorId = SensorId(30);
/// Ids of the four sensors whose motion differs between A and B.
pub const LOWER_LEFT: SensorId = SensorId(40);
pub const LOWER_RIGHT: SensorId = SensorId(41);
pub const UPPER_LEFT: SensorId = SensorId(42);
pub const UPPER_RIGHT: SensorId = SensorId(43);

/// Fence sensors counterclockwise from the lower left corner.
fn fence() -> Vec<Point> {
    let mut f = Vec::new();
    let side: Vec<f64> = (1..=7).map(|k| -6.0 + 1.5 * k as f64).collect();
    for i in 0..10 {
        f.push(Point::new(-HALF_W + 2.0 * HALF_W * i as f64 / 9.0, -HALF_H));
    }
    for &y in &side {
        f.push(Point::new(HALF_W, y));
    }
    for i in 0..10 {
        f.push(Point::new(HALF_W - 2.0 * HALF_W * i as f64 / 9.0, HALF_H));
    }
    for &y in side.iter().rev() {
        f.push(Point::new(-HALF_W, y));
    }
    f
}

fn path(keys: &[(f64, f64, f64)]) -> Trajectory {
    Trajectory::new(keys.iter().map(|&(t, x, y)| Keyframe::new(t, x, y)).collect())
        .expect("built-in keyframes are valid")
}

/// Motion of one of the four central sensors with `side = ±1`; `flip`
/// mirrors it below the line.
fn central(upper: bool, side: f64, flip: f64) -> Trajectory {
    let keys: Vec<(f64, f64, f64)> = if upper {
        vec![
            (0.0, 1.3, 0.0),
            (0.27, 1.3, 0.0),
            (0.37, 1.3, 1.75),
            (0.38, 1.3, 1.75),
            (0.45, 1.06, 1.75),
            (0.47, 1.06, 1.75),
            (0.53, 0.96, 1.75),
            (0.55, 0.96, 1.75),
            (0.60, 0.875, 1.75),
            (0.71, 0.875, 1.75),
            (0.80, 0.7, 0.0),
            (1.0, 0.7, 0.0),
        ]
    } else {
        vec![
            (0.0, 0.875, 0.0),
            (0.61, 0.875, 0.0),
            (0.69, 1.3, 0.3),
            (0.71, 1.3, 0.3),
            (0.80, 1.55, 0.0),
            (1.0, 1.55, 0.0),
        ]
    };
    path(
        &keys
            .iter()
            .map(|&(t, x, y)| (t, side * x, flip * y + 0.0))
            .collect::<Vec<_>>(),
    )
}

/// Time windows in which each bottom row, nearest the edge first, slides
/// down to the lower edge.
const RETREAT: [(f64, f64); 5] = [
    (0.080, 0.1045),
    (0.115, 0.1395),
    (0.150, 0.179),
    (0.185, 0.215),
    (0.220, 0.249),
];

/// Time windows in which each top row, deepest first, slides in from the
/// upper edge.
const FLOOD: [(f64, f64); 5] = [
    (0.820, 0.850),
    (0.852, 0.875),
    (0.880, 0.905),
    (0.910, 0.9335),
    (0.940, 0.959),
];

fn build_example_with(
    flip: f64,
    label: &str,
    retreat: &[(f64, f64); 5],
    flood: &[(f64, f64); 5],
) -> Scene {
    let domain = Domain::rectangle(Point::new(-HALF_W, -HALF_H), Point::new(HALF_W, HALF_H))
        .expect("valid rectangle");
    let mut mobile: Vec<Trajectory> = LINE_X
        .iter()
        .map(|&x| Trajectory::stationary(Point::new(x, 0.0)))
        .collect();
    mobile.push(central(false, -1.0, flip));
    mobile.push(central(false, 1.0, flip));
    mobile.push(central(true, -1.0, flip));
    mobile.push(central(true, 1.0, flip));
    // bottom half: rows retreat to the lower edge
    for (row, &y) in GRID_Y.iter().enumerate() {
        let (t0, t1) = retreat[GRID_Y.len() - 1 - row];
        for &x in &GRID_X {
            mobile.push(path(&[(0.0, x, -y), (t0, x, -y), (t1, x, -HALF_H), (1.0, x, -HALF_H)]));
        }
    }
    // top half: parked on the upper edge, then flood in
    for (row, &y) in GRID_Y.iter().enumerate() {
        let (t0, t1) = flood[row];
        for &x in &GRID_X {
            mobile.push(path(&[(0.0, x, HALF_H), (t0, x, HALF_H), (t1, x, y), (1.0, x, y)]));
        }
    }
    let mut loop_ids: Vec<SensorId> = (13..=30).map(SensorId).collect();
    loop_ids.extend([34, 35, 36, 40, 41, 37, 38, 39].map(SensorId));
    let metadata = Metadata {
        pair: Some([0.465, 0.54]),
        loop_ids,
        stages: vec![0.05, 0.465, 0.54, 0.70, 0.81, 0.90, 0.985],
    };
    Scene::new(domain, 1.0, fence(), mobile, label)
        .and_then(|s| s.with_metadata(metadata))
        .expect("built-in scene is valid")
}

fn build_example(flip: f64, label: &str) -> Scene {
    build_example_with(flip, label, &RETREAT, &FLOOD)
}

/// Network A: the small square hole opens above the horizontal line.
pub fn build_example_a() -> Scene {
    build_example(1.0, "A")
}

/// Network B: identical except the small square hole opens below the line.
pub fn build_example_b() -> Scene {
    build_example(-1.0, "B")
}
