use std::f64::consts::PI;

use nalgebra::{Matrix2, Vector2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::john::john_ellipse;
use super::outline::Outline;
use crate::body::{polygon_support_sweep, AffineMap, Body};
use crate::error::{GeomError, Result};
use crate::grid::AngleGrid;
use crate::optim::NelderMead;

type P = Vector2<f64>;

pub const DEFAULT_STARTS: usize = 8;
pub const DEFAULT_SEED: u64 = 0x5a17a10;

/// Support slack allowed when a witness is checked.
pub const WITNESS_SLACK: f64 = 1e-9;

/// An upper bound on a Banach-Mazur distance with the map that attains it.
///
/// For the disk, `witness` sends the body into `B ⊆ T K ⊆ λB`. For a pair
/// `(K, L)`, it sends `L` into `K - x ⊆ T L - x ⊆ λ (K - x)` for the translation
/// `x` stored in `center`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BmEstimate {
    pub distance: f64,
    pub witness: AffineMap,
    pub center: P,
    pub multistart_spread: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct BmOptions {
    pub starts: usize,
    pub seed: u64,
    /// Search over translations as well; `None` decides from the symmetry
    /// of the inputs.
    pub translate: Option<bool>,
}

impl Default for BmOptions {
    fn default() -> Self {
        BmOptions {
            starts: DEFAULT_STARTS,
            seed: DEFAULT_SEED,
            translate: None,
        }
    }
}

/// `exp` of the traceless symmetric matrix `[[a, b], [b, -a]]`.
pub fn sym_exp(a: f64, b: f64) -> Matrix2<f64> {
    let rho = a.hypot(b);
    let (c, s) = if rho < 1e-12 {
        (1.0 + 0.5 * rho * rho, 1.0 + rho * rho / 6.0)
    } else {
        (rho.cosh(), rho.sinh() / rho)
    };
    Matrix2::new(c + s * a, s * b, s * b, c - s * a)
}

/// Inverse of [`sym_exp`] on symmetric positive definite matrices of unit
/// determinant.
pub fn sym_log(m: &Matrix2<f64>) -> (f64, f64) {
    let half_trace = 0.5 * (m[(0, 0)] + m[(1, 1)]);
    let rho = half_trace.max(1.0).acosh();
    let k = if rho < 1e-12 { 1.0 } else { rho / rho.sinh() };
    (k * 0.5 * (m[(0, 0)] - m[(1, 1)]), k * 0.5 * (m[(0, 1)] + m[(1, 0)]))
}

fn unit_det(m: &Matrix2<f64>) -> Result<Matrix2<f64>> {
    let d = m.determinant();
    if !(d > 0.0) {
        return Err(GeomError::SingularMap(d));
    }
    Ok(m / d.sqrt())
}

/// Polar decomposition `m = R(φ) P` of a unit-determinant map, returned as
/// `(φ, a, b)` with `P = sym_exp(a, b)`.
fn polar_params(m: &Matrix2<f64>) -> (f64, f64, f64) {
    let mtm = m.transpose() * m;
    let p = (mtm + Matrix2::identity()) / (mtm.trace() + 2.0).sqrt();
    let r = m * p.try_inverse().unwrap_or_else(Matrix2::identity);
    let (a, b) = sym_log(&p);
    (r[(1, 0)].atan2(r[(0, 0)]), a, b)
}

fn rotation(phi: f64) -> Matrix2<f64> {
    let (s, c) = phi.sin_cos();
    Matrix2::new(c, -s, s, c)
}

struct Run {
    value: f64,
    params: Vec<f64>,
}

/// Best run by value, ties to the lowest start index, plus the spread of
/// the run values.
fn reduce(runs: Vec<Run>) -> Result<(Run, f64)> {
    let finite: Vec<f64> = runs.iter().map(|r| r.value).filter(|v| v.is_finite()).collect();
    let worst = finite.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let best = runs
        .into_iter()
        .enumerate()
        .filter(|(_, r)| r.value.is_finite())
        .min_by(|(i, a), (j, b)| a.value.total_cmp(&b.value).then(i.cmp(j)))
        .map(|(_, r)| r)
        .ok_or(GeomError::NoConvergence {
            what: "banach-mazur search",
            iterations: 0,
            residual: f64::INFINITY,
        })?;
    let spread = worst - best.value;
    Ok((best, spread))
}

fn disk_ratio(outline: &Outline, a: f64, b: f64, x: &P) -> f64 {
    let phi = sym_exp(a, b);
    let inv = sym_exp(-a, -b);
    let r = outline.inner_radius(&inv, x);
    if !(r > 0.0) {
        return f64::INFINITY;
    }
    outline.outer_radius(&phi, x) / r
}

pub fn bm_distance_disk(body: &Body) -> Result<BmEstimate> {
    bm_distance_disk_with(body, &BmOptions::default())
}

/// Upper bound on `d_BM(K, B)` from `min R/r` over unit-determinant
/// symmetric maps and, for non-symmetric bodies, centers.
pub fn bm_distance_disk_with(body: &Body, opts: &BmOptions) -> Result<BmEstimate> {
    let outline = Outline::of(body)?;
    let translate = opts.translate.unwrap_or(!body.is_symmetric());
    let john = john_ellipse(body)?;
    let (a0, b0) = sym_log(&unit_det(&john.a.try_inverse().ok_or(GeomError::SingularMap(0.0))?)?);
    let scale = body.area().sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let starts: Vec<Vec<f64>> = (0..opts.starts.max(1))
        .map(|i| {
            let mut s = vec![a0, b0, john.c.x, john.c.y];
            if i > 0 {
                s[0] += rng.gen_range(-0.3..0.3);
                s[1] += rng.gen_range(-0.3..0.3);
                if translate {
                    s[2] += 0.05 * scale * rng.gen_range(-1.0..1.0);
                    s[3] += 0.05 * scale * rng.gen_range(-1.0..1.0);
                }
            }
            s
        })
        .collect();
    let dims = if translate { 4 } else { 2 };
    let nm = NelderMead::default();
    let runs: Vec<Run> = starts
        .par_iter()
        .map(|s| {
            let fixed = P::new(s[2], s[3]);
            let f = |p: &[f64]| {
                let x = if translate { P::new(p[2], p[3]) } else { fixed };
                disk_ratio(&outline, p[0], p[1], &x)
            };
            let step = [0.05, 0.05, 0.02 * scale, 0.02 * scale];
            let m = nm.minimize(f, &s[..dims], &step[..dims]);
            let mut params = m.x;
            if !translate {
                params.extend_from_slice(&s[2..4]);
            }
            Run {
                value: m.value,
                params,
            }
        })
        .collect();
    let (best, spread) = reduce(runs)?;
    let (a, b) = (best.params[0], best.params[1]);
    let x = P::new(best.params[2], best.params[3]);
    let phi = sym_exp(a, b);
    let r = outline.inner_radius_refined(&sym_exp(-a, -b), &x);
    let witness = AffineMap::new(phi / r, -(phi * x) / r)?;
    let distance = outline.outer_radius_refined(&phi, &x) / r;
    Ok(BmEstimate {
        distance: distance.max(best.value).max(1.0),
        witness,
        center: P::zeros(),
        multistart_spread: spread,
    })
}

/// Checks `B ⊆ T K ⊆ λB` on `grid` up to [`WITNESS_SLACK`].
pub fn certify_disk(body: &Body, est: &BmEstimate, grid: &AngleGrid) -> Result<bool> {
    let image = body.affine_image(&est.witness)?;
    let h = image.sample_support(grid);
    let scale = est.distance;
    Ok(h.iter().all(|&v| v >= 1.0 - WITNESS_SLACK * scale && v <= est.distance + WITNESS_SLACK * scale))
}

/// Supporting lines of `Φ(L - y)` from those of `L`.
fn mapped_lines(outline: &Outline, inv_t: &Matrix2<f64>, y: &P) -> (Vec<P>, Vec<f64>) {
    outline
        .normals
        .iter()
        .zip(&outline.offsets)
        .map(|(u, h)| {
            let w = inv_t * u;
            let n = w.norm();
            (w / n, (h - u.dot(y)) / n)
        })
        .unzip()
}

/// Smallest `λ` with `K' ⊆ μ L'' ⊆ λ K'` over `μ > 0`, where
/// `K' = K - x` and `L'' = Φ(L - y)`, and the `μ` attaining it.
fn pair_ratio(k: &Outline, l: &Outline, phi: &Matrix2<f64>, x: &P, y: &P) -> (f64, f64) {
    let inv_t = match phi.try_inverse() {
        Some(inv) => inv.transpose(),
        None => return (f64::INFINITY, 1.0),
    };
    let kpts: Vec<P> = k.points.iter().map(|p| p - x).collect();
    let koff: Vec<f64> = k.normals.iter().zip(&k.offsets).map(|(u, h)| h - u.dot(x)).collect();
    let lpts: Vec<P> = l.points.iter().map(|p| phi * (p - y)).collect();
    let (lnormals, loff) = mapped_lines(l, &inv_t, y);
    if koff.iter().chain(&loff).any(|&o| !(o > 0.0)) {
        return (f64::INFINITY, 1.0);
    }
    let hl = polygon_support_sweep(&lpts, &k.normals);
    let outer = hl.iter().zip(&koff).map(|(h, o)| h / o).fold(0.0, f64::max);
    let hk = polygon_support_sweep(&kpts, &lnormals);
    let inner = hk.iter().zip(&loff).map(|(h, o)| h / o).fold(0.0, f64::max);
    (outer * inner, inner)
}

pub fn bm_distance_pair(k: &Body, l: &Body) -> Result<BmEstimate> {
    bm_distance_pair_with(k, l, &BmOptions::default())
}

/// Upper bound on `d_BM(K, L)` over `Φ = R(φ) exp(S)` and, for
/// non-symmetric inputs, translations of both bodies.
pub fn bm_distance_pair_with(k: &Body, l: &Body, opts: &BmOptions) -> Result<BmEstimate> {
    let ko = Outline::of(k)?;
    let lo = Outline::of(l)?;
    let translate = opts.translate.unwrap_or(!(k.is_symmetric() && l.is_symmetric()));
    let jk = john_ellipse(k)?;
    let jl = john_ellipse(l)?;
    let jl_inv = jl.a.try_inverse().ok_or(GeomError::SingularMap(jl.a.determinant()))?;
    let (sk, sl) = (k.area().sqrt(), l.area().sqrt());
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let starts: Vec<Vec<f64>> = (0..opts.starts.max(1))
        .map(|i| {
            let align = unit_det(&(jk.a * rotation(i as f64 * PI / 8.0) * jl_inv)).unwrap_or_else(|_| Matrix2::identity());
            let (phi, a, b) = polar_params(&align);
            let mut s = vec![phi, a, b, jk.c.x, jk.c.y, jl.c.x, jl.c.y];
            if i > 0 && translate {
                for j in 3..5 {
                    s[j] += 0.02 * sk * rng.gen_range(-1.0..1.0);
                }
                for j in 5..7 {
                    s[j] += 0.02 * sl * rng.gen_range(-1.0..1.0);
                }
            }
            s
        })
        .collect();
    let dims = if translate { 7 } else { 3 };
    let nm = NelderMead {
        max_evals: 6000,
        ..NelderMead::default()
    };
    let map_of = |p: &[f64]| rotation(p[0]) * sym_exp(p[1], p[2]);
    let runs: Vec<Run> = starts
        .par_iter()
        .map(|s| {
            let f = |p: &[f64]| {
                let (x, y) = if translate {
                    (P::new(p[3], p[4]), P::new(p[5], p[6]))
                } else {
                    (P::new(s[3], s[4]), P::new(s[5], s[6]))
                };
                pair_ratio(&ko, &lo, &map_of(p), &x, &y).0
            };
            let step = [0.05, 0.05, 0.05, 0.02 * sk, 0.02 * sk, 0.02 * sl, 0.02 * sl];
            let m = nm.minimize(f, &s[..dims], &step[..dims]);
            let mut params = m.x;
            if !translate {
                params.extend_from_slice(&s[3..7]);
            }
            Run {
                value: m.value,
                params,
            }
        })
        .collect();
    let (best, spread) = reduce(runs)?;
    let p = &best.params;
    let phi = map_of(p);
    let (x, y) = (P::new(p[3], p[4]), P::new(p[5], p[6]));
    let (lambda, mu) = pair_ratio(&ko, &lo, &phi, &x, &y);
    // T(z) = μ Φ (z - y) + x, so that K - x ⊆ T(L) - x ⊆ λ (K - x).
    let witness = AffineMap::new(phi * mu, x - phi * y * mu)?;
    Ok(BmEstimate {
        distance: lambda.max(1.0),
        witness,
        center: x,
        multistart_spread: spread,
    })
}

/// Checks `K ⊆ T L ⊆ x + λ (K - x)` by support dominance on `grid`.
pub fn certify_pair(k: &Body, l: &Body, est: &BmEstimate, grid: &AngleGrid) -> Result<bool> {
    let image = l.affine_image(&est.witness)?;
    let hk = k.sample_support(grid);
    let hl = image.sample_support(grid);
    let scale = hk.iter().fold(0.0_f64, |m, v| m.max(v.abs())) * est.distance;
    Ok(grid.units().iter().zip(hk.iter().zip(&hl)).all(|(u, (a, b))| {
        let c = est.center.dot(u);
        let (a, b) = (a - c, b - c);
        a <= b + WITNESS_SLACK * scale && b <= est.distance * a + WITNESS_SLACK * scale
    }))
}
