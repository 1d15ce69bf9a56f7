//! Coverage and evasion analysis for networks of moving disk sensors.
//!
//! Sensors are open balls of a common radius moving piecewise linearly in
//! a convex planar domain over the time interval `[0, 1]`. The crate builds
//! their Čech complexes, tracks combinatorial changes over time, decides
//! coverage through Z/2 homology, decides the existence of evasion paths on
//! a spacetime grid and compares pairs of networks.

pub mod cech;
pub mod complex;
pub mod coverage;
pub mod distinguish;
pub mod evasion;
pub mod geom;
pub mod grid;
pub mod scenes;
pub mod unionfind;
pub mod z2;

pub use complex::SimplicialComplex;
pub use geom::{Domain, Point, Scene, SensorId, Trajectory};
