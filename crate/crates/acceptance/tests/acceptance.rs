//! Acceptance criteria for `planar-santalo`. Prints one `PASS` or `FAIL` line
//! per criterion and exits with status 1 if any criterion fails.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use nalgebra::{Matrix2, Vector2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{random_body, random_symmetric_body, square, triangle};
use planar_santalo::affine::{bm_distance_disk, john_ellipse, BmOptions, DEFAULT_SEED};
use planar_santalo::body::io::to_json;
use planar_santalo::lab::{
    cli, corpus, measure_all, stability_sweep, verify_proof_chain, FamilySpec, FIT_EPS_MIN, GENERAL_CORPUS,
    SYMMETRIC_CORPUS,
};
use planar_santalo::minkowski::{lambda_body, lutwak_gap, minkowski_residual, solve_minkowski, MinkowskiData};
use planar_santalo::santalo::{groemer_gap, minkowski_excess, santalo_deficit, santalo_point, volume_product, DISK_AREA};
use planar_santalo::symmetrize::{meyer_pajor_gap, steiner_symmetral};
use planar_santalo::{AngleGrid, Body, FourierBody, GeomError};

const DISK_VP_TOL: f64 = 1e-8;
const DISK_DEFICIT_TOL: f64 = 1e-9;
const DISK_BM_TOL: f64 = 1e-6;
const DISK_LAMBDA_TOL: f64 = 1e-9;
const DISK_BUDGET: Duration = Duration::from_secs(1);

const SQUARE_VP_TOL: f64 = 1e-6;
const SQUARE_DEFICIT_TOL: f64 = 1e-6;
const SQUARE_BM_TOL: f64 = 1e-3;
const SQUARE_JOHN_TOL: f64 = 1e-6;

const TRIANGLE_POINT_TOL: f64 = 1e-6;
const TRIANGLE_VP_TOL: f64 = 1e-5;
const TRIANGLE_VERTEX_TOL: f64 = 1e-12;

const SUITE_SEED: u64 = 0x5eed_0004;
const SYMMETRIC_PAIRS: usize = 200;
const RANDOM_BODIES: usize = 100;
const SANTALO_SLACK: f64 = 1e-8;
const GROEMER_SLACK: f64 = 1e-8;
const MINKOWSKI_SLACK: f64 = 1e-9;
const LUTWAK_SLACK: f64 = 1e-8;
const LAMBDA_AREA_SLACK: f64 = 1e-8;
const MEYER_PAJOR_SLACK: f64 = 1e-7;
const SUITE_BUDGET: Duration = Duration::from_secs(120);

const SOLVER_SEED: u64 = 0x5eed_0005;
const SOLVER_CASES: usize = 20;
const SOLVER_DEGREE: usize = 12;
const SOLVER_RESIDUAL_TOL: f64 = 1e-10;
const MODE_DIVISION_TOL: f64 = 1e-12;

const MODE2_T: f64 = 0.05;
const MODE2_EPS_COEFF: f64 = 0.375;
const MODE2_REL_TOL: f64 = 0.15;
const MODE4_T: f64 = 0.01;
const MODE4_EPS_COEFF: f64 = 6.0;
const MODE4_DELTA_COEFF: f64 = 2.0;
const MODE4_REL_TOL: f64 = 0.10;

const SLOPE_FAMILY: &str = "mode:4:0.002:0.02:6";
const SLOPE_RANGE: (f64, f64) = (0.45, 0.55);
const GAMMA_MAX: f64 = 10.0;
const SYMMETRIC_EPS_MAX: f64 = 0.05;

const CHAIN_EPS_MAX: f64 = 1e-2;
const MUTATION: &str = "pinch=0.01";
const VIOLATION_EXIT: u8 = 2;

const DETERMINISM_SEED: &str = "7";
const DETERMINISM_FAMILY: &str = "polygon:6:4";

type Outcome = Result<Verdict, GeomError>;

#[derive(Default)]
struct Verdict {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Verdict {
    fn require(&mut self, ok: bool, msg: String) {
        if ok {
            self.notes.push(msg);
        } else {
            self.failures.push(msg);
        }
    }
}

fn sup_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn rel_err(value: f64, expected: f64) -> f64 {
    (value / expected - 1.0).abs()
}

fn disk_battery() -> Outcome {
    let mut v = Verdict::default();
    let start = Instant::now();
    let disk = Body::disk(1.0);
    let vp = volume_product(&disk)?;
    let eps = santalo_deficit(&disk)?;
    let bm = bm_distance_disk(&disk)?.distance;
    let g = AngleGrid::default();
    let dh = sup_diff(&lambda_body(&disk)?.sample_support(&g), &disk.sample_support(&g));
    let elapsed = start.elapsed();
    v.require((vp - PI * PI).abs() <= DISK_VP_TOL, format!("|vp - pi^2| = {:.1e}", (vp - PI * PI).abs()));
    v.require(eps.abs() <= DISK_DEFICIT_TOL, format!("eps = {eps:.1e}"));
    v.require((bm - 1.0).abs() <= DISK_BM_TOL, format!("d_BM - 1 = {:.1e}", bm - 1.0));
    v.require(dh <= DISK_LAMBDA_TOL, format!("|h_LB - h_B| = {dh:.1e}"));
    v.require(elapsed < DISK_BUDGET, format!("{:.0} ms", elapsed.as_secs_f64() * 1e3));
    Ok(v)
}

fn square_battery() -> Outcome {
    let mut v = Verdict::default();
    let sq = square();
    let vp = volume_product(&sq)?;
    let eps = santalo_deficit(&sq)?;
    let bm = bm_distance_disk(&sq)?.distance;
    let john = john_ellipse(&sq)?;
    let dj = (john.a - Matrix2::identity()).abs().max();
    v.require((vp - 8.0).abs() <= SQUARE_VP_TOL, format!("vp = {vp:.9}"));
    let expect = PI * PI / 8.0 - 1.0;
    v.require((eps - expect).abs() <= SQUARE_DEFICIT_TOL, format!("eps = {eps:.9}"));
    v.require((bm - 2f64.sqrt()).abs() <= SQUARE_BM_TOL, format!("d_BM = {bm:.6}"));
    v.require(dj <= SQUARE_JOHN_TOL, format!("|A_John - I| = {dj:.1e}"));
    Ok(v)
}

fn triangle_battery() -> Outcome {
    let mut v = Verdict::default();
    let t = triangle();
    let s = santalo_point(&t)?.point;
    let ds = (s - Vector2::new(1.0 / 3.0, 1.0 / 3.0)).norm();
    v.require(ds <= TRIANGLE_POINT_TOL, format!("|s - (1/3, 1/3)| = {ds:.1e}"));
    let vp = volume_product(&t)?;
    v.require((vp - 6.75).abs() <= TRIANGLE_VP_TOL, format!("vp = {vp:.9}"));
    let sym = steiner_symmetral(&t, 0.0)?;
    let expect = [Vector2::new(1.0, 0.0), Vector2::new(0.0, 0.5), Vector2::new(0.0, -0.5)];
    let verts = sym.as_polygon().map(|p| p.vertices().to_vec()).unwrap_or_default();
    let worst = expect
        .iter()
        .map(|e| verts.iter().map(|w| (w - e).amax()).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max);
    v.require(
        verts.len() == 3 && worst <= TRIANGLE_VERTEX_TOL,
        format!("symmetral has {} vertices, off by {worst:.1e}", verts.len()),
    );
    let gap = meyer_pajor_gap(&t, 0.0)?;
    v.require(gap > 0.0, format!("Meyer-Pajor gap = {gap:e}, required > 0"));
    Ok(v)
}

fn inequality_suites() -> Outcome {
    let mut v = Verdict::default();
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SUITE_SEED);
    let bs_bound = DISK_AREA * DISK_AREA * (1.0 + SANTALO_SLACK);
    let (mut worst_groemer, mut worst_minkowski, mut worst_vp) = (f64::INFINITY, f64::INFINITY, 0.0f64);
    for _ in 0..SYMMETRIC_PAIRS {
        let k = random_symmetric_body(&mut rng);
        let l = random_symmetric_body(&mut rng);
        worst_groemer = worst_groemer.min(groemer_gap(&k, &l)?);
        worst_minkowski = worst_minkowski.min(minkowski_excess(&k, &l));
        worst_vp = worst_vp.max(volume_product(&k)?).max(volume_product(&l)?);
    }
    let (mut worst_lutwak, mut worst_lambda, mut worst_mp) = (f64::INFINITY, 0.0f64, f64::INFINITY);
    for _ in 0..RANDOM_BODIES {
        let k = random_body(&mut rng);
        worst_vp = worst_vp.max(volume_product(&k)?);
        worst_lutwak = worst_lutwak.min(lutwak_gap(&k)?);
        worst_lambda = worst_lambda.max(lambda_body(&k)?.area() / k.area());
        let axis = rng.gen_range(0.0..PI);
        worst_mp = worst_mp.min(meyer_pajor_gap(&k, axis)?);
    }
    let elapsed = start.elapsed();
    v.require(worst_vp <= bs_bound, format!("max vp/pi^2 = {:.9}", worst_vp / (PI * PI)));
    v.require(worst_groemer >= -GROEMER_SLACK, format!("min Groemer gap = {worst_groemer:.2e}"));
    v.require(worst_minkowski >= -MINKOWSKI_SLACK, format!("min Minkowski excess = {worst_minkowski:.2e}"));
    v.require(worst_lutwak >= -LUTWAK_SLACK, format!("min Lutwak gap = {worst_lutwak:.2e}"));
    v.require(
        worst_lambda <= 1.0 + LAMBDA_AREA_SLACK,
        format!("max V(LK)/V(K) = {worst_lambda:.6}"),
    );
    v.require(worst_mp >= -MEYER_PAJOR_SLACK, format!("min Meyer-Pajor gap = {worst_mp:.2e}"));
    v.require(elapsed < SUITE_BUDGET, format!("{:.1} s", elapsed.as_secs_f64()));
    Ok(v)
}

fn minkowski_solver() -> Outcome {
    let mut v = Verdict::default();
    let g = AngleGrid::default();
    let mut rng = ChaCha8Rng::seed_from_u64(SOLVER_SEED);
    let mut worst = 0.0f64;
    for _ in 0..SOLVER_CASES {
        let coeffs: Vec<(f64, f64)> = (0..=SOLVER_DEGREE)
            .map(|k| {
                if k < 2 {
                    (0.0, 0.0)
                } else {
                    (rng.gen_range(-0.03..0.03), rng.gen_range(-0.03..0.03))
                }
            })
            .collect();
        let data = MinkowskiData::from_fn(g, |t| {
            1.0 + coeffs
                .iter()
                .enumerate()
                .map(|(k, (a, b))| a * (k as f64 * t).cos() + b * (k as f64 * t).sin())
                .sum::<f64>()
        })?;
        let h = solve_minkowski(&data)?;
        let fmax = data.f_values().iter().fold(0.0f64, |m, x| m.max(x.abs()));
        worst = worst.max(minkowski_residual(h.values(), data.f_values()) / fmax);
    }
    v.require(worst <= SOLVER_RESIDUAL_TOL, format!("max relative residual = {worst:.1e}"));
    let shifted = MinkowskiData::from_fn(g, |t| 1.0 + 0.3 * t.cos())?;
    let rejected = matches!(solve_minkowski(&shifted), Err(GeomError::SolvabilityViolation(_)));
    v.require(rejected, format!("first harmonic rejected: {rejected}"));
    let oracle = MinkowskiData::from_fn(g, |t| 1.0 - 0.3 * (2.0 * t).cos())?;
    let h = solve_minkowski(&oracle)?;
    let expect: Vec<f64> = g.angles().map(|t| 1.0 + 0.1 * (2.0 * t).cos()).collect();
    let err = sup_diff(h.values(), &expect);
    v.require(err <= MODE_DIVISION_TOL, format!("mode-division error = {err:.1e}"));
    Ok(v)
}

fn asymptotics() -> Outcome {
    let mut v = Verdict::default();
    let g = AngleGrid::default();
    let m2: Body = FourierBody::mode(2, MODE2_T, g)?.into();
    let e2 = santalo_deficit(&m2)?;
    let r2 = rel_err(e2, MODE2_EPS_COEFF * MODE2_T.powi(4));
    v.require(r2 <= MODE2_REL_TOL, format!("mode-2 eps off by {:.1}%", 100.0 * r2));
    let m4: Body = FourierBody::mode(4, MODE4_T, g)?.into();
    let e4 = santalo_deficit(&m4)?;
    let d4 = bm_distance_disk(&m4)?.distance - 1.0;
    let (re, rd) = (
        rel_err(e4, MODE4_EPS_COEFF * MODE4_T.powi(2)),
        rel_err(d4, MODE4_DELTA_COEFF * MODE4_T),
    );
    v.require(re <= MODE4_REL_TOL, format!("mode-4 eps off by {:.1}%", 100.0 * re));
    v.require(rd <= MODE4_REL_TOL, format!("mode-4 delta off by {:.1}%", 100.0 * rd));
    Ok(v)
}

/// Largest `δ / ε^alpha` over the records of `specs` with `FIT_EPS_MIN < ε <= eps_max`.
fn gamma_hat(specs: &[&str], alpha: f64, eps_max: f64) -> Result<f64, GeomError> {
    let mut worst = 0.0f64;
    for spec in corpus(specs) {
        let members = spec.generate(AngleGrid::default(), DEFAULT_SEED)?;
        for r in measure_all(&members, &BmOptions::default())? {
            if r.epsilon > FIT_EPS_MIN && r.epsilon <= eps_max {
                worst = worst.max(r.delta / r.epsilon.powf(alpha));
            }
        }
    }
    Ok(worst)
}

fn stability_exponent() -> Outcome {
    let mut v = Verdict::default();
    let family: FamilySpec = SLOPE_FAMILY.parse()?;
    let fit = stability_sweep(&family, AngleGrid::default(), DEFAULT_SEED)?.fit;
    v.require(
        (SLOPE_RANGE.0..=SLOPE_RANGE.1).contains(&fit.slope),
        format!("mode-4 slope = {:.4}", fit.slope),
    );
    let sym = gamma_hat(SYMMETRIC_CORPUS, 0.5, SYMMETRIC_EPS_MAX)?;
    v.require(sym <= GAMMA_MAX, format!("symmetric gamma = {sym:.3}"));
    let general = gamma_hat(GENERAL_CORPUS, 0.25, f64::INFINITY)?;
    v.require(general <= GAMMA_MAX, format!("general gamma = {general:.3}"));
    Ok(v)
}

fn proof_chain() -> Outcome {
    let mut v = Verdict::default();
    let disk = verify_proof_chain(&Body::disk(1.0))?;
    v.require(disk.passed(), format!("disk: {} failing checks", disk.failures().len()));
    let (mut checked, mut failed, mut min_slack) = (0, Vec::new(), f64::INFINITY);
    for spec in corpus(SYMMETRIC_CORPUS) {
        for m in spec.generate(AngleGrid::default(), DEFAULT_SEED)? {
            if m.body.as_fourier().is_none() || santalo_deficit(&m.body)? > CHAIN_EPS_MAX {
                continue;
            }
            let report = verify_proof_chain(&m.body)?;
            checked += 1;
            min_slack = report.checks.iter().map(|c| c.slack).fold(min_slack, f64::min);
            if !report.passed() {
                failed.push(m.id);
            }
        }
    }
    v.require(
        failed.is_empty(),
        format!("{checked} corpus bodies, min slack {min_slack:.2e}, failing {failed:?}"),
    );
    let dir = tempfile::tempdir().map_err(|e| GeomError::Parse(e.to_string()))?;
    let file = dir.path().join("mode4.json");
    let body: Body = FourierBody::mode(4, MODE4_T, AngleGrid::default())?.into();
    fs::write(&file, to_json(&body)).map_err(|e| GeomError::Parse(e.to_string()))?;
    let code = run_cli(&["chain", &file.to_string_lossy(), "--chain-constant", MUTATION]).0;
    v.require(code == VIOLATION_EXIT, format!("mutated {MUTATION} exits with {code}"));
    Ok(v)
}

fn run_cli(args: &[&str]) -> (u8, Vec<u8>) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("santalo-lab").chain(args.iter().copied());
    let code = cli::run(argv, &mut out, &mut err);
    (code, out)
}

fn without_timestamp(text: &str) -> String {
    text.lines().filter(|l| !l.trim_start().starts_with("\"timestamp\"")).collect::<Vec<_>>().join("\n")
}

fn sweep_once(dir: &Path) -> Result<(u8, Vec<u8>, String), GeomError> {
    let csv = dir.join("sweep.csv");
    let code = run_cli(&[
        "--seed",
        DETERMINISM_SEED,
        "sweep",
        "--family",
        DETERMINISM_FAMILY,
        "--out",
        &csv.to_string_lossy(),
    ])
    .0;
    let io = |e: std::io::Error| GeomError::Parse(e.to_string());
    let bytes = fs::read(&csv).map_err(io)?;
    let manifest = fs::read_to_string(dir.join("sweep.manifest.json")).map_err(io)?;
    Ok((code, bytes, without_timestamp(&manifest)))
}

fn determinism() -> Outcome {
    let mut v = Verdict::default();
    let io = |e: std::io::Error| GeomError::Parse(e.to_string());
    let (a, b) = (tempfile::tempdir().map_err(io)?, tempfile::tempdir().map_err(io)?);
    let first = sweep_once(a.path())?;
    let second = sweep_once(b.path())?;
    v.require(first.0 == second.0, format!("exit codes {} and {}", first.0, second.0));
    v.require(first.1 == second.1, format!("CSV of {} bytes identical: {}", first.1.len(), first.1 == second.1));
    v.require(first.2 == second.2, format!("manifests identical: {}", first.2 == second.2));
    Ok(v)
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("disk battery", disk_battery),
        ("square battery", square_battery),
        ("triangle battery", triangle_battery),
        ("inequality suites", inequality_suites),
        ("minkowski solver", minkowski_solver),
        ("asymptotic deficits", asymptotics),
        ("stability exponent", stability_exponent),
        ("proof chain", proof_chain),
        ("determinism", determinism),
    ];
    let mut passed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let (ok, detail) = match run() {
            Ok(v) if v.failures.is_empty() => (true, v.notes.join("; ")),
            Ok(v) => (false, v.failures.join("; ")),
            Err(e) => (false, format!("error: {e}")),
        };
        passed += ok as usize;
        let tag = if ok { "PASS" } else { "FAIL" };
        println!("{tag} {:>2} {name}: {detail}", i + 1);
    }
    println!("acceptance: {passed}/{} criteria pass", criteria.len());
    if passed == criteria.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
