//! SVG snapshots of a single fiber.
//!
//! Every layer is drawn from one evaluation of the sensor positions: the
//! nerve and the uncovered raster are computed from the same point list
//! that places the disks. Numbers use three decimals and elements are
//! emitted in id or raster order, so equal inputs give equal bytes.

use std::fmt::Write as _;

use sensor_evasion::cech::cech_from_points;
use sensor_evasion::grid::{Adjacency, Cell, Components, Raster};
use sensor_evasion::{Domain, Point, Scene};

/// Pixels per scene unit.
const SCALE: f64 = 40.0;
const PAD: f64 = 10.0;

const SHADES: [&str; 6] = ["#d62728", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#bcbd22"];

/// Layers of one rendered fiber.
#[derive(Clone, Debug)]
pub struct Snapshot {
    pub t: f64,
    pub positions: Vec<Point>,
    pub fence_len: usize,
    pub edges: Vec<[usize; 2]>,
    pub triangles: Vec<[usize; 3]>,
    /// Uncovered components as lists of cell rectangles `(x, y, w, h)` in
    /// scene coordinates.
    pub shading: Vec<Vec<(f64, f64, f64, f64)>>,
}

impl Snapshot {
    /// Evaluates the scene once at `t` and derives every layer from it.
    pub fn capture(scene: &Scene, t: f64, h: f64) -> Snapshot {
        let positions = scene.positions_at(t);
        let nerve = cech_from_points(&positions, scene.radius());
        let edges = nerve.edges().iter().map(|e| [e[0].index(), e[1].index()]).collect();
        let triangles = nerve
            .triangles()
            .iter()
            .map(|t| [t[0].index(), t[1].index(), t[2].index()])
            .collect();
        let shading = if positions.is_empty() {
            Vec::new()
        } else {
            let raster = Raster::over_domain(scene.domain(), h, &positions, scene.radius());
            shading(&raster)
        };
        Snapshot {
            t,
            positions,
            fence_len: scene.fence().len(),
            edges,
            triangles,
            shading,
        }
    }
}

/// Merges horizontal runs of cells of each surely uncovered component.
fn shading(raster: &Raster) -> Vec<Vec<(f64, f64, f64, f64)>> {
    let (cols, rows, h) = (raster.cols(), raster.rows(), raster.h());
    let comps = Components::label(&raster.mask(Cell::is_uncovered), cols, rows, Adjacency::Four);
    let mut out = vec![Vec::new(); comps.count()];
    for j in 0..rows {
        let mut i = 0;
        while i < cols {
            let idx = j * cols + i;
            let Some(label) = comps.of(idx) else {
                i += 1;
                continue;
            };
            let start = i;
            while i < cols && comps.of(j * cols + i) == Some(label) {
                i += 1;
            }
            let c = raster.center(idx);
            out[label as usize].push((c.x - 0.5 * h, c.y - 0.5 * h, (i - start) as f64 * h, h));
        }
    }
    out
}

/// Renders the fiber of `scene` at `t` with raster step `h`.
pub fn render(scene: &Scene, t: f64, h: f64) -> String {
    to_svg(scene, &Snapshot::capture(scene, t, h))
}

pub fn to_svg(scene: &Scene, snap: &Snapshot) -> String {
    let (min, max) = scene.domain().bounds();
    let width = (max.x - min.x) * SCALE + 2.0 * PAD;
    let height = (max.y - min.y) * SCALE + 2.0 * PAD;
    let px = |p: Point| ((p.x - min.x) * SCALE + PAD, (max.y - p.y) * SCALE + PAD);
    let r = scene.radius() * SCALE;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.3}" height="{height:.3}" viewBox="0 0 {width:.3} {height:.3}">"#
    );
    let _ = writeln!(s, "<title>{} t={:.6}</title>", escape(scene.label()), snap.t);
    let _ = writeln!(s, r##"<rect x="0" y="0" width="{width:.3}" height="{height:.3}" fill="#ffffff"/>"##);

    if !snap.shading.is_empty() {
        s.push_str("<g class=\"uncovered\" fill-opacity=\"0.55\" stroke=\"none\">\n");
        for (k, rects) in snap.shading.iter().enumerate() {
            let _ = writeln!(s, r#"<g fill="{}">"#, SHADES[k % SHADES.len()]);
            for &(x, y, w, hh) in rects {
                let (x0, y0) = px(Point::new(x, y + hh));
                let _ = writeln!(
                    s,
                    r#"<rect x="{x0:.3}" y="{y0:.3}" width="{:.3}" height="{:.3}"/>"#,
                    w * SCALE,
                    hh * SCALE
                );
            }
            s.push_str("</g>\n");
        }
        s.push_str("</g>\n");
    }

    if !snap.positions.is_empty() {
        s.push_str("<g class=\"disks\" fill=\"#1f77b4\" fill-opacity=\"0.12\" stroke=\"#1f77b4\" stroke-opacity=\"0.5\" stroke-width=\"0.8\">\n");
        for &p in &snap.positions {
            let (x, y) = px(p);
            let _ = writeln!(s, r#"<circle cx="{x:.3}" cy="{y:.3}" r="{r:.3}"/>"#);
        }
        s.push_str("</g>\n");
    }

    if !snap.triangles.is_empty() {
        s.push_str("<g class=\"triangles\" fill=\"#2ca02c\" fill-opacity=\"0.25\" stroke=\"none\">\n");
        for t in &snap.triangles {
            let pts: Vec<String> = t
                .iter()
                .map(|&i| {
                    let (x, y) = px(snap.positions[i]);
                    format!("{x:.3},{y:.3}")
                })
                .collect();
            let _ = writeln!(s, r#"<polygon points="{}"/>"#, pts.join(" "));
        }
        s.push_str("</g>\n");
    }

    if !snap.edges.is_empty() {
        s.push_str("<g class=\"edges\" stroke=\"#333333\" stroke-width=\"1\">\n");
        for &[a, b] in &snap.edges {
            let (x1, y1) = px(snap.positions[a]);
            let (x2, y2) = px(snap.positions[b]);
            let _ = writeln!(s, r#"<line x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}"/>"#);
        }
        s.push_str("</g>\n");
    }

    if !snap.positions.is_empty() {
        s.push_str("<g class=\"sensors\" stroke=\"none\">\n");
        for (i, &p) in snap.positions.iter().enumerate() {
            let (x, y) = px(p);
            let fill = if i < snap.fence_len { "#000000" } else { "#1f77b4" };
            let _ = writeln!(s, r#"<circle cx="{x:.3}" cy="{y:.3}" r="2.500" fill="{fill}"/>"#);
        }
        s.push_str("</g>\n");
    }

    match scene.domain() {
        Domain::Rectangle { .. } => {
            let _ = writeln!(
                s,
                r##"<rect class="domain" x="{PAD:.3}" y="{PAD:.3}" width="{:.3}" height="{:.3}" fill="none" stroke="#000000" stroke-width="1.5"/>"##,
                width - 2.0 * PAD,
                height - 2.0 * PAD
            );
        }
        Domain::Disk { center, radius } => {
            let (x, y) = px(*center);
            let _ = writeln!(
                s,
                r##"<circle class="domain" cx="{x:.3}" cy="{y:.3}" r="{:.3}" fill="none" stroke="#000000" stroke-width="1.5"/>"##,
                radius * SCALE
            );
        }
    }
    s.push_str("</svg>\n");
    s
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
