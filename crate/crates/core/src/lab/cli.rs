use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};
use std::ffi::OsString;
use std::io::{self, Write};

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::affine::{bm_distance_disk_with, bm_distance_pair_with, certify_disk, certify_pair, BmOptions, DEFAULT_SEED};
use crate::body::io::{from_json, to_json};
use super::{
    exponent_fit, manifest_path, measure_all, plot_svg, read_csv, stability_exponent, verify_proof_chain_with,
    write_csv, ChainConstants, FamilySpec, Manifest,
};
use crate::minkowski::lambda_transform;
use crate::santalo::{deficit_from_product, santalo_point_with, DEFICIT_CLIP, DISK_AREA, GRADIENT_TOL, MAX_NEWTON_ITERATIONS};
use crate::symmetrize::{meyer_pajor_gap, steiner_symmetral, symmetrization_flow};
use crate::{AngleGrid, Body, GeomError, Shape};

/// Relative slack allowed on the area and volume-product inequalities.
const INEQUALITY_SLACK: f64 = 1e-8;
/// Largest accepted drop of the polar area under symmetrization.
const MONOTONE_SLACK: f64 = 1e-7;

#[derive(Parser)]
#[command(name = "santalo-lab", version, about = "Planar Blaschke-Santaló stability lab")]
struct Cli {
    /// Size of the angle grid for smooth bodies.
    #[arg(long, global = true, default_value_t = 1024)]
    grid: usize,
    /// Seed for random families and multistart searches.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Gradient tolerance of the Santaló point solver.
    #[arg(long, global = true, default_value_t = GRADIENT_TOL)]
    tol: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect a body document.
    Body {
        #[command(subcommand)]
        action: BodyAction,
    },
    /// Santaló point, polar area, volume product and deficit.
    Santalo { file: PathBuf },
    /// The Λ-body, printed as a body document.
    Lambda { file: PathBuf },
    /// Banach-Mazur distance to the disk, or to a second body.
    Bm {
        file: PathBuf,
        #[arg(long)]
        pair: Option<PathBuf>,
    },
    /// Steiner symmetral about an axis, or a flow over several steps.
    Steiner {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        axis: f64,
        #[arg(long, default_value_t = 1)]
        steps: usize,
    },
    /// (ε, δ) sweep over a body family.
    Sweep {
        #[arg(long)]
        family: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Log-log exponent fit of a sweep CSV.
    Fit {
        csv: PathBuf,
        /// Use the exponent 1/4 of the general case.
        #[arg(long)]
        general: bool,
    },
    /// Numerical check of the stability chain for a symmetric body.
    Chain {
        file: PathBuf,
        #[arg(long = "chain-constant", hide = true)]
        overrides: Vec<String>,
    },
    /// SVG plot of a sweep CSV.
    Plot {
        csv: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        general: bool,
    },
}

#[derive(Subcommand)]
enum BodyAction {
    Info { file: PathBuf },
    Polar { file: PathBuf },
    Stats { file: PathBuf },
}

enum Failure {
    Usage(String),
    Violation(Vec<String>),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<GeomError> for Failure {
    fn from(e: GeomError) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn load(path: &Path, grid: AngleGrid) -> Result<Body, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    Ok(from_json(&text, grid)?)
}

fn emit<T: Serialize>(out: &mut dyn Write, value: &T) -> io::Result<()> {
    writeln!(out, "{}", serde_json::to_string_pretty(value).expect("report serialises"))
}

fn check(violations: Vec<String>) -> Outcome {
    if violations.is_empty() {
        Ok(())
    } else {
        Err(Failure::Violation(violations))
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let grid = AngleGrid::new(cli.grid)?;
    let bm_opts = BmOptions {
        seed: cli.seed,
        ..BmOptions::default()
    };
    match cli.command {
        Command::Body { action } => match action {
            BodyAction::Info { file } => {
                let b = load(&file, grid)?;
                let kind = match b.shape() {
                    Shape::Polygon(_) => "polygon",
                    Shape::Support(_) => "support",
                    Shape::Fourier(_) => "fourier",
                };
                emit(out, &json!({
                    "kind": kind,
                    "label": b.label(),
                    "area": b.area(),
                    "symmetric": b.is_symmetric(),
                    "symmetry_defect": b.symmetry_defect(),
                    "working_grid": b.working_grid().len(),
                }))?;
                Ok(())
            }
            BodyAction::Polar { file } => {
                writeln!(out, "{}", to_json(&load(&file, grid)?.polar()?))?;
                Ok(())
            }
            BodyAction::Stats { file } => {
                emit(out, &load(&file, grid)?.stats())?;
                Ok(())
            }
        },
        Command::Santalo { file } => {
            let b = load(&file, grid)?;
            let s = santalo_point_with(&b, cli.tol, MAX_NEWTON_ITERATIONS)?;
            let vp = b.area() * s.polar_area;
            emit(out, &json!({
                "point": [s.point.x, s.point.y],
                "polar_area": s.polar_area,
                "gradient_norm": s.gradient_norm,
                "volume_product": vp,
                "epsilon": deficit_from_product(vp),
            }))?;
            let bound = DISK_AREA * DISK_AREA * (1.0 + INEQUALITY_SLACK);
            check(if vp > bound {
                vec![format!("volume product {vp} exceeds pi^2")]
            } else {
                vec![]
            })
        }
        Command::Lambda { file } => {
            let b = load(&file, grid)?;
            let lam = lambda_transform(&b)?;
            let body = Body::from(lam.body.clone());
            let body = match b.label() {
                Some(l) => body.with_label(format!("lambda({l})")),
                None => body,
            };
            writeln!(out, "{}", to_json(&body))?;
            let (v, vl) = (lam.source.area(), lam.body.area());
            writeln!(err, "V(K) = {v}, V(LK) = {vl}, mollified = {}", lam.mollified)?;
            check(if vl > v * (1.0 + INEQUALITY_SLACK) {
                vec![format!("V(LK) = {vl} exceeds V(K) = {v}")]
            } else {
                vec![]
            })
        }
        Command::Bm { file, pair } => {
            let k = load(&file, grid)?;
            let (est, certified) = match pair {
                None => {
                    let est = bm_distance_disk_with(&k, &bm_opts)?;
                    let ok = certify_disk(&k, &est, &grid)?;
                    (est, ok)
                }
                Some(other) => {
                    let l = load(&other, grid)?;
                    let est = bm_distance_pair_with(&k, &l, &bm_opts)?;
                    let ok = certify_pair(&k, &l, &est, &grid)?;
                    (est, ok)
                }
            };
            emit(out, &json!({ "estimate": est, "certified": certified }))?;
            check(if certified {
                vec![]
            } else {
                vec!["witness does not certify the estimate".into()]
            })
        }
        Command::Steiner { file, axis, steps } => {
            let b = load(&file, grid)?;
            if steps <= 1 {
                let gap = meyer_pajor_gap(&b, axis)?;
                writeln!(out, "{}", to_json(&steiner_symmetral(&b, axis)?))?;
                writeln!(err, "polar area gain {gap:e}")?;
                let scale = b.area().recip();
                check(if gap < -MONOTONE_SLACK * scale {
                    vec![format!("polar area dropped by {}", -gap)]
                } else {
                    vec![]
                })
            } else {
                let axes: Vec<f64> = (0..3).map(|i| axis + i as f64 * PI / 3.0).collect();
                let flow = symmetrization_flow(&b, &axes, steps)?;
                let worst = flow.worst_decrease();
                emit(out, &json!({ "steps": flow.steps, "worst_decrease": worst }))?;
                check(if worst > MONOTONE_SLACK {
                    vec![format!("volume product dropped by {worst:e} in one step")]
                } else {
                    vec![]
                })
            }
        }
        Command::Sweep { family, out: target } => {
            let spec: FamilySpec = family.parse()?;
            let members = spec.generate(grid, cli.seed)?;
            let symmetric = members.iter().all(|m| m.body.is_symmetric());
            let records = measure_all(&members, &bm_opts)?;
            write_csv(&target, &records)?;
            let fit = exponent_fit(&records, stability_exponent(symmetric));
            let mut violations: Vec<String> = records
                .iter()
                .filter(|r| r.epsilon < -DEFICIT_CLIP)
                .map(|r| format!("{}: volume product {} exceeds pi^2", r.body_id, r.volume_product))
                .collect();
            match &fit {
                Ok(f) => violations.extend(f.violations(symmetric)),
                Err(e) => writeln!(err, "no fit: {e}")?,
            }
            let manifest = Manifest {
                tool: env!("CARGO_PKG_NAME").into(),
                version: env!("CARGO_PKG_VERSION").into(),
                command: "sweep".into(),
                family,
                seed: cli.seed,
                grid: cli.grid,
                tol: cli.tol,
                bm_starts: bm_opts.starts,
                records: records.len(),
                csv: target.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default(),
                symmetric,
                fit: fit.ok(),
                timestamp: Manifest::stamp(),
            };
            manifest.write(&manifest_path(&target))?;
            emit(out, &manifest)?;
            check(violations)
        }
        Command::Fit { csv, general } => {
            let records = read_csv(&csv)?;
            let fit = exponent_fit(&records, stability_exponent(!general))?;
            emit(out, &fit)?;
            check(fit.violations(!general))
        }
        Command::Chain { file, overrides } => {
            let b = load(&file, grid)?;
            let mut constants = ChainConstants::default();
            for o in &overrides {
                constants.set(o)?;
            }
            let report = verify_proof_chain_with(&b, &constants, &bm_opts)?;
            emit(out, &report)?;
            check(
                report
                    .failures()
                    .iter()
                    .map(|c| format!("{}: {} > {}", c.name, c.lhs, c.rhs))
                    .collect(),
            )
        }
        Command::Plot { csv, out: target, general } => {
            let records = read_csv(&csv)?;
            let fit = exponent_fit(&records, stability_exponent(!general)).ok();
            fs::write(&target, plot_svg(&records, fit.as_ref()))
                .map_err(|e| Failure::Usage(format!("{}: {e}", target.display())))?;
            Ok(())
        }
    }
}

/// Runs the command line `args` (program name first) and returns the exit
/// code: 0 on success, 1 on usage or input errors, 2 when a computed
/// quantity violates an inequality it must satisfy.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                1
            } else {
                let _ = write!(out, "{}", e.render());
                0
            };
        }
    };
    match dispatch(cli, out, err) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
        Err(Failure::Violation(list)) => {
            for v in list {
                let _ = writeln!(err, "violation: {v}");
            }
            2
        }
    }
}
