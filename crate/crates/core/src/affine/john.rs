use std::f64::consts::TAU;
use std::ops::AddAssign;

use nalgebra::{Matrix2, SMatrix, SVector, Vector2};
use serde::Serialize;

use super::outline::OVERSAMPLE;
use crate::body::{AffineMap, Body, Shape};
use crate::error::{GeomError, Result};
use crate::grid::AngleGrid;
use crate::optim::{golden_min, local_minima};

type P = Vector2<f64>;
type V5 = SVector<f64, 5>;
type M5 = SMatrix<f64, 5, 5>;

/// Target duality gap of the barrier method, `m / t`.
pub const BARRIER_GAP: f64 = 1e-12;

/// Squared Newton decrement below which a barrier subproblem is centered.
const CENTERING_TOL: f64 = 1e-10;

/// The ellipse `{c + a v : |v| <= 1}`, with support `<c,u> + |a u|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EllipseParams {
    pub a: Matrix2<f64>,
    pub c: P,
}

impl EllipseParams {
    pub fn support(&self, u: &P) -> f64 {
        self.c.dot(u) + (self.a * u).norm()
    }

    pub fn area(&self) -> f64 {
        std::f64::consts::PI * self.a.determinant()
    }

    /// The affine map sending this ellipse onto the unit disk.
    pub fn normalizing_map(&self) -> Result<AffineMap> {
        let inv = self
            .a
            .try_inverse()
            .ok_or(GeomError::SingularMap(self.a.determinant()))?;
        AffineMap::new(inv, -(inv * self.c))
    }
}

/// Supporting half-planes `<x, u_i> <= h_i` the inscribed ellipse must respect.
fn constraints(body: &Body) -> Result<(Vec<P>, Vec<f64>)> {
    Ok(match body.shape() {
        Shape::Polygon(p) => {
            let edges = p.edges();
            (edges.iter().map(|e| e.normal).collect(), edges.iter().map(|e| e.offset).collect())
        }
        Shape::Support(s) => (s.units(), s.values().to_vec()),
        Shape::Fourier(f) => {
            let n = f.grid().len() * OVERSAMPLE;
            (AngleGrid::raw(n).units(), f.samples_on(n))
        }
    })
}

struct Barrier<'a> {
    units: &'a [P],
    offsets: &'a [f64],
    centered: bool,
}

fn shape(z: &V5) -> Matrix2<f64> {
    Matrix2::new(z[0], z[1], z[1], z[2])
}

impl Barrier<'_> {
    /// `t (-log det a) - Σ log s_i`, or `None` outside the domain.
    fn value(&self, z: &V5, t: f64) -> Option<f64> {
        let det = z[0] * z[2] - z[1] * z[1];
        if z[0] <= 0.0 || det <= 0.0 {
            return None;
        }
        let a = shape(z);
        let c = P::new(z[3], z[4]);
        let mut acc = -t * det.ln();
        for (u, h) in self.units.iter().zip(self.offsets) {
            let s = h - c.dot(u) - (a * u).norm();
            if s <= 0.0 {
                return None;
            }
            acc -= s.ln();
        }
        Some(acc)
    }

    fn derivatives(&self, z: &V5, t: f64) -> (V5, M5) {
        let det = z[0] * z[2] - z[1] * z[1];
        let gdet = V5::new(z[2], -2.0 * z[1], z[0], 0.0, 0.0);
        let mut hdet = M5::zeros();
        hdet[(0, 2)] = 1.0;
        hdet[(2, 0)] = 1.0;
        hdet[(1, 1)] = -2.0;
        let mut grad = -gdet * (t / det);
        let mut hess = (gdet * gdet.transpose() / (det * det) - hdet / det) * t;
        let a = shape(z);
        let c = P::new(z[3], z[4]);
        for (u, h) in self.units.iter().zip(self.offsets) {
            let q = a * u;
            let r = q.norm();
            let s = h - c.dot(u) - r;
            // q = M(u) p with M(u) = [[u1, u2, 0], [0, u1, u2]].
            let m = SMatrix::<f64, 2, 3>::new(u.x, u.y, 0.0, 0.0, u.x, u.y);
            let dr = m.transpose() * q / r;
            let ds = V5::new(-dr[0], -dr[1], -dr[2], -u.x, -u.y);
            let d2r = m.transpose() * (Matrix2::identity() / r - q * q.transpose() / (r * r * r)) * m;
            grad -= ds / s;
            hess += ds * ds.transpose() / (s * s);
            hess.fixed_view_mut::<3, 3>(0, 0).add_assign(&(d2r / s));
        }
        if self.centered {
            for i in 3..5 {
                grad[i] = 0.0;
                for j in 0..5 {
                    hess[(i, j)] = 0.0;
                    hess[(j, i)] = 0.0;
                }
                hess[(i, i)] = 1.0;
            }
        }
        (grad, hess)
    }
}

/// Maximum-area ellipse inside the body, by a log-barrier method on the
/// body's supporting half-planes. Origin-symmetric bodies get `c = 0`.
pub fn john_ellipse(body: &Body) -> Result<EllipseParams> {
    let (units, offsets) = constraints(body)?;
    let centered = body.is_symmetric();
    let start = if centered { P::zeros() } else { body.centroid()? };
    let room = units
        .iter()
        .zip(&offsets)
        .map(|(u, h)| h - start.dot(u))
        .fold(f64::INFINITY, f64::min);
    if room <= 0.0 {
        return Err(GeomError::OriginNotInterior);
    }
    let barrier = Barrier {
        units: &units,
        offsets: &offsets,
        centered,
    };
    let r0 = 0.5 * room;
    let mut z = V5::new(r0, 0.0, r0, start.x, start.y);
    let m = units.len() as f64;
    let mut t = 1.0;
    let mut decrement = f64::INFINITY;
    loop {
        let mut centered = false;
        for _ in 0..50 {
            let (grad, hess) = barrier.derivatives(&z, t);
            let step = match hess.cholesky() {
                Some(ch) => -ch.solve(&grad),
                None => -grad,
            };
            decrement = -grad.dot(&step);
            if decrement < CENTERING_TOL {
                centered = true;
                break;
            }
            let f0 = barrier.value(&z, t).unwrap_or(f64::INFINITY);
            let mut alpha = 1.0;
            let mut moved = false;
            for _ in 0..80 {
                let trial = z + step * alpha;
                if let Some(v) = barrier.value(&trial, t) {
                    if v <= f0 - 1e-4 * alpha * decrement {
                        z = trial;
                        moved = true;
                        break;
                    }
                }
                alpha *= 0.5;
            }
            if !moved {
                break;
            }
        }
        // Past this point the slacks of the active constraints are at the
        // level of round-off and larger t only adds noise.
        if !centered && t > 1.0 {
            break;
        }
        if m / t <= BARRIER_GAP {
            break;
        }
        t *= 10.0;
        if t > 1e30 {
            return Err(GeomError::NoConvergence {
                what: "john ellipse",
                iterations: 30,
                residual: decrement,
            });
        }
    }
    let c = P::new(z[3], z[4]);
    let mut a = shape(&z);
    if let Shape::Fourier(f) = body.shape() {
        // The barrier only sees sampled half-planes; shrink about c until the
        // ellipse also fits between them.
        let step = TAU / units.len() as f64;
        let room = |u: &P, h: f64| (h - c.dot(u)) / (a * u).norm();
        let sampled: Vec<f64> = units.iter().zip(&offsets).map(|(u, h)| room(u, *h)).collect();
        let s = local_minima(&sampled)
            .map(|j| {
                let t = j as f64 * step;
                golden_min(|t| room(&P::new(t.cos(), t.sin()), f.eval(t)), t - step, t + step)
            })
            .fold(1.0, f64::min);
        a *= s;
    }
    Ok(EllipseParams { a, c })
}

/// John position: the image of the body under the map that sends its John
/// ellipse to the unit disk, together with that map.
pub fn john_position(body: &Body) -> Result<(Body, AffineMap)> {
    let e = john_ellipse(body)?;
    let map = e.normalizing_map()?;
    Ok((body.affine_image(&map)?, map))
}
