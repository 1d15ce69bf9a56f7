//! Command-line front end for the `sensor-evasion` engine.
//!
//! [`run`] parses an argument vector, executes one subcommand and returns
//! the process exit code. Output goes to the supplied writers so the whole
//! command can be driven from tests.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use sensor_evasion::cech::{build_timeline, cech_at, TimelineError};
use sensor_evasion::coverage::{is_covered_grid, is_covered_homology, GridStatus};
use sensor_evasion::distinguish::{full_report, CompareParams, DistinguishError};
use sensor_evasion::evasion::{evasion_exists, format_witness, EvasionError, Verdict};
use sensor_evasion::grid::{default_step, GridError};
use sensor_evasion::scenes::{self, build_example_a, build_example_b, SceneFileError};
use sensor_evasion::Scene;

pub mod svg;

/// Exit codes shared by every subcommand.
pub mod exit {
    pub const OK: i32 = 0;
    /// Coverage found a hole, or no evasion path exists.
    pub const NEGATIVE: i32 = 1;
    /// Undecided at the requested resolution, or the fence fails.
    pub const UNDECIDED: i32 = 2;
    pub const USAGE: i32 = 64;
    pub const DATA: i32 = 65;
    pub const NO_INPUT: i32 = 66;
    pub const CANT_CREATE: i32 = 73;
    pub const SOFTWARE: i32 = 70;
}

#[derive(Parser, Debug)]
#[command(name = "sensor-evasion", version, about = "Coverage and evasion paths in mobile sensor networks")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
struct Global {
    /// Grid step for rasterized oracles (default: radius / 8)
    #[arg(long, global = true, value_name = "H")]
    grid: Option<f64>,
    /// Time step for sampling
    #[arg(long, global = true, default_value_t = 1.0 / 256.0, value_name = "S")]
    dt: f64,
    /// Event localization tolerance
    #[arg(long, global = true, default_value_t = 1e-6, value_name = "TOL")]
    tol: f64,
}

impl Global {
    fn step(&self, scene: &Scene) -> f64 {
        self.grid.unwrap_or_else(|| default_step(scene.radius()))
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide coverage of one fiber
    Coverage {
        scene: PathBuf,
        #[arg(long)]
        time: f64,
    },
    /// Decide whether an evasion path exists
    Evasion {
        scene: PathBuf,
        /// Write the witness path here when one exists
        #[arg(long, value_name = "FILE")]
        witness: Option<PathBuf>,
    },
    /// Print the Čech complex at one time and the interval table
    Cech {
        scene: PathBuf,
        #[arg(long, default_value_t = 0.0)]
        time: f64,
    },
    /// Compare two scenes
    Compare {
        scene_a: PathBuf,
        scene_b: PathBuf,
        /// Fiber pair (defaults to the first scene's metadata)
        #[arg(long, num_args = 2, value_names = ["T", "T2"])]
        pair: Option<Vec<f64>>,
        /// Write the JSON report here
        #[arg(long, value_name = "FILE")]
        json: Option<PathBuf>,
    },
    /// Built-in scenes
    Scene {
        #[command(subcommand)]
        action: SceneAction,
    },
    /// Render a fiber as SVG
    Snapshot {
        scene: PathBuf,
        #[arg(long, required_unless_present = "stages", conflicts_with = "stages")]
        time: Option<f64>,
        #[arg(long, value_name = "FILE", requires = "time")]
        out: Option<PathBuf>,
        /// Render every stage time from the scene metadata into this directory
        #[arg(long, value_name = "DIR")]
        stages: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum SceneAction {
    /// Write one of the built-in networks as JSON
    Gen {
        which: Which,
        /// Output file (stdout when omitted)
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Which {
    #[value(name = "A", alias = "a")]
    A,
    #[value(name = "B", alias = "b")]
    B,
}

/// Failure of a subcommand, carrying its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: exit::USAGE,
            message: message.into(),
        }
    }

    fn software(message: impl ToString) -> Self {
        Failure {
            code: exit::SOFTWARE,
            message: message.to_string(),
        }
    }

    fn create(path: &Path, e: std::io::Error) -> Self {
        Failure {
            code: exit::CANT_CREATE,
            message: format!("{}: {e}", path.display()),
        }
    }
}

impl From<SceneFileError> for Failure {
    fn from(e: SceneFileError) -> Self {
        let code = match e {
            SceneFileError::Io { .. } => exit::NO_INPUT,
            _ => exit::DATA,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<GridError> for Failure {
    fn from(e: GridError) -> Self {
        Failure::usage(e.to_string())
    }
}

impl From<EvasionError> for Failure {
    fn from(e: EvasionError) -> Self {
        Failure::usage(e.to_string())
    }
}

impl From<TimelineError> for Failure {
    fn from(e: TimelineError) -> Self {
        match e {
            TimelineError::BadParameters { .. } => Failure::usage(e.to_string()),
            TimelineError::NonGeneric { .. } => Failure::software(e),
        }
    }
}

impl From<DistinguishError> for Failure {
    fn from(e: DistinguishError) -> Self {
        match e {
            DistinguishError::Evasion(inner) => inner.into(),
            DistinguishError::BadPair { .. } => Failure::usage(e.to_string()),
            DistinguishError::IdMismatch(..) => Failure {
                code: exit::DATA,
                message: e.to_string(),
            },
            other => Failure::software(other),
        }
    }
}

/// Runs the command line against the process streams.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// Runs the command line, writing to `out` and `err`.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    exit::OK
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    exit::USAGE
                }
            };
        }
    };
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<i32, Failure> {
    let g = cli.global;
    if !(g.dt > 0.0 && g.dt <= 1.0) {
        return Err(Failure::usage(format!("--dt must lie in (0, 1], got {}", g.dt)));
    }
    if !(g.tol > 0.0) {
        return Err(Failure::usage(format!("--tol must be positive, got {}", g.tol)));
    }
    let io = write_err;
    match &cli.command {
        Command::Coverage { scene, time } => {
            let scene = load(scene)?;
            check_time(*time)?;
            coverage(&scene, *time, g.step(&scene), out)
        }
        Command::Evasion { scene, witness } => {
            let scene = load(scene)?;
            evasion(&scene, &g, witness.as_deref(), out)
        }
        Command::Cech { scene, time } => {
            let scene = load(scene)?;
            check_time(*time)?;
            let timeline = build_timeline(&scene, g.dt, g.tol)?;
            write!(out, "{}", cech_at(&scene, *time).to_text()).map_err(io)?;
            writeln!(out).map_err(io)?;
            write!(out, "{}", timeline.table()).map_err(io)?;
            Ok(exit::OK)
        }
        Command::Compare {
            scene_a,
            scene_b,
            pair,
            json,
        } => {
            let (a, b) = (load(scene_a)?, load(scene_b)?);
            let params = CompareParams {
                dt: g.dt,
                h: g.grid,
                pair: pair.as_ref().map(|p| [p[0], p[1]]),
                ..CompareParams::default()
            };
            let report = full_report(&a, &b, &params)?;
            if let Some(path) = json {
                fs::write(path, report.to_json()).map_err(|e| Failure::create(path, e))?;
            }
            let rows = report.timeline.len();
            let iso = report.timeline.iter().filter(|r| r.isomorphic).count();
            writeln!(out, "timeline {iso}/{rows} samples isomorphic").map_err(io)?;
            writeln!(
                out,
                "evasion a={} b={}",
                report.evasion.a.as_str(),
                report.evasion.b.as_str()
            )
            .map_err(io)?;
            for p in &report.pairs {
                let q = &p.profile;
                writeln!(
                    out,
                    "pair {} t={:.9} t2={:.9} beta1={}->{} rank={} monotone={} holes={}->{}",
                    p.scene,
                    q.t,
                    q.t2,
                    q.beta1_t,
                    q.beta1_t2,
                    q.rank_incl,
                    q.monotone,
                    opt(q.class_holes_t),
                    opt(q.class_holes_t2)
                )
                .map_err(io)?;
            }
            for c in &report.conclusions {
                writeln!(out, "conclusion: {c}").map_err(io)?;
            }
            Ok(exit::OK)
        }
        Command::Scene {
            action: SceneAction::Gen { which, out: path },
        } => {
            let scene = match which {
                Which::A => build_example_a(),
                Which::B => build_example_b(),
            };
            match path {
                Some(p) => fs::write(p, scenes::to_json(&scene)).map_err(|e| Failure::create(p, e))?,
                None => write!(out, "{}", scenes::to_json(&scene)).map_err(io)?,
            }
            Ok(exit::OK)
        }
        Command::Snapshot {
            scene,
            time,
            out: path,
            stages,
        } => {
            let scene = load(scene)?;
            let h = g.step(&scene);
            sensor_evasion::grid::check_step(h, scene.radius())?;
            if let Some(dir) = stages {
                let times = &scene.metadata().stages;
                if times.is_empty() {
                    return Err(Failure::usage("scene metadata lists no stage times"));
                }
                fs::create_dir_all(dir).map_err(|e| Failure::create(dir, e))?;
                for (i, &t) in times.iter().enumerate() {
                    let file = dir.join(format!("stage-{}.svg", i + 1));
                    fs::write(&file, svg::render(&scene, t, h)).map_err(|e| Failure::create(&file, e))?;
                    writeln!(out, "{}", file.display()).map_err(io)?;
                }
            } else {
                let t = time.expect("clap enforces --time");
                check_time(t)?;
                let text = svg::render(&scene, t, h);
                match path {
                    Some(p) => fs::write(p, text).map_err(|e| Failure::create(p, e))?,
                    None => write!(out, "{text}").map_err(io)?,
                }
            }
            Ok(exit::OK)
        }
    }
}

fn load(path: &Path) -> Result<Scene, Failure> {
    Ok(scenes::load(path)?)
}

fn check_time(t: f64) -> Result<(), Failure> {
    if (0.0..=1.0).contains(&t) {
        Ok(())
    } else {
        Err(Failure::usage(format!("time must lie in [0, 1], got {t}")))
    }
}

fn opt(v: Option<usize>) -> String {
    v.map_or_else(|| "?".to_string(), |n| n.to_string())
}

fn write_err(e: std::io::Error) -> Failure {
    Failure::software(format!("writing output: {e}"))
}

fn coverage(scene: &Scene, t: f64, h: f64, out: &mut dyn Write) -> Result<i32, Failure> {
    let grid = is_covered_grid(scene, t, h)?;
    let hom = is_covered_homology(scene, t);
    let status = match grid.status {
        GridStatus::Covered => "covered",
        GridStatus::Hole => "hole",
        GridStatus::Uncertain => "uncertain",
    };
    let mut text = format!("time {t:.9}\n");
    text += &format!(
        "homology {} beta1={} fence={}\n",
        if hom.covered { "covered" } else { "hole" },
        hom.beta1,
        if hom.fence_ok { "ok" } else { "broken" }
    );
    text += &match grid.witness {
        Some(w) => format!("grid {status} h={h:.9} witness {:.9} {:.9}\n", w.x, w.y),
        None => format!("grid {status} h={h:.9}\n"),
    };
    out.write_all(text.as_bytes()).map_err(write_err)?;
    Ok(coverage_code(hom.covered, hom.fence_ok, grid.status))
}

/// Exit code of `coverage`: decisive only when the fence holds and the
/// grid oracle agrees with the homological verdict.
fn coverage_code(covered: bool, fence_ok: bool, grid: GridStatus) -> i32 {
    match (fence_ok, covered, grid) {
        (true, true, GridStatus::Covered) => exit::OK,
        (true, false, GridStatus::Hole) => exit::NEGATIVE,
        _ => exit::UNDECIDED,
    }
}

fn evasion(scene: &Scene, g: &Global, witness: Option<&Path>, out: &mut dyn Write) -> Result<i32, Failure> {
    let h = g.step(scene);
    let result = evasion_exists(scene, h, g.dt)?;
    let io = write_err;
    writeln!(out, "evasion {}", result.verdict.as_str()).map_err(io)?;
    writeln!(out, "grid h={h:.9} dt={:.9}", g.dt).map_err(io)?;
    if let Some(w) = &result.witness {
        writeln!(out, "witness {} points", w.len()).map_err(io)?;
        if let Some(path) = witness {
            fs::write(path, format_witness(w)).map_err(|e| Failure::create(path, e))?;
        }
    }
    Ok(match result.verdict {
        Verdict::Exists => exit::OK,
        Verdict::None => exit::NEGATIVE,
        Verdict::Indeterminate => exit::UNDECIDED,
    })
}
