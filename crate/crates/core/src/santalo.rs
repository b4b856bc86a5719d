//! Santaló point, volume product, the Blaschke-Santaló deficit and
//! Groemer's stability gap for the mixed-area inequality.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::{Matrix2, Vector2};
use serde::Serialize;

use crate::body::{Body, Shape};
use crate::error::{GeomError, Result};
use crate::grid::{cross, AngleGrid};

type P = Vector2<f64>;

/// Area of the unit disk.
pub const DISK_AREA: f64 = PI;

/// Default bound on the scale-free gradient residual at the Santaló point.
pub const GRADIENT_TOL: f64 = 1e-10;

pub const MAX_NEWTON_ITERATIONS: usize = 100;

/// Negative deficits down to this size are treated as round-off and clipped.
pub const DEFICIT_CLIP: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SantaloResult {
    pub point: P,
    pub polar_area: f64,
    /// `|∇A(s)| · sqrt(V(K)) / A(s)`, where `A(x)` is the area of `(K - x)^*`.
    pub gradient_norm: f64,
}

/// One body's entry in a stability sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeficitRecord {
    pub body_id: String,
    pub epsilon: f64,
    pub delta: f64,
    pub volume_product: f64,
    pub diagnostics: BTreeMap<String, f64>,
}

/// `x ↦ area((K - x)^*)` together with its derivatives.
///
/// Polygonal bodies use the exact polar polygon, whose vertices are
/// `u_e / (h_e - <x, u_e>)`; smooth bodies use the trapezoid rule for
/// `½∫(h - <x,u>)^{-2}`.
struct PolarArea {
    units: Vec<P>,
    offsets: Vec<f64>,
    kind: Kind,
}

enum Kind {
    Exact { turns: Vec<f64> },
    Quadrature { step: f64 },
}

impl PolarArea {
    fn new(body: &Body) -> Result<Self> {
        match body.shape() {
            Shape::Fourier(f) => {
                let g = f.grid();
                Ok(PolarArea {
                    units: g.units(),
                    offsets: f.samples(),
                    kind: Kind::Quadrature { step: g.step() },
                })
            }
            _ => {
                let edges = body.polygonize()?.edges();
                let n = edges.len();
                let units: Vec<P> = edges.iter().map(|e| e.normal).collect();
                let turns = (0..n).map(|e| cross(&units[e], &units[(e + 1) % n])).collect();
                Ok(PolarArea {
                    units,
                    offsets: edges.iter().map(|e| e.offset).collect(),
                    kind: Kind::Exact { turns },
                })
            }
        }
    }

    fn gaps(&self, x: &P) -> Option<Vec<f64>> {
        let g: Vec<f64> = self.units.iter().zip(&self.offsets).map(|(u, h)| h - u.dot(x)).collect();
        g.iter().all(|&v| v > 0.0).then_some(g)
    }

    fn value(&self, g: &[f64]) -> f64 {
        match &self.kind {
            Kind::Exact { turns } => {
                let n = g.len();
                0.5 * (0..n).map(|e| turns[e] / (g[e] * g[(e + 1) % n])).sum::<f64>()
            }
            Kind::Quadrature { step } => 0.5 * step * g.iter().map(|v| v.powi(-2)).sum::<f64>(),
        }
    }

    fn derivatives(&self, g: &[f64]) -> (P, Matrix2<f64>) {
        let mut grad = P::zeros();
        let mut hess = Matrix2::zeros();
        match &self.kind {
            Kind::Exact { turns } => {
                let n = g.len();
                for e in 0..n {
                    let f = (e + 1) % n;
                    let (ue, uf) = (self.units[e], self.units[f]);
                    let p = 0.5 * turns[e] / (g[e] * g[f]);
                    let w = ue / g[e] + uf / g[f];
                    grad += w * p;
                    hess += (w * w.transpose()
                        + ue * ue.transpose() / (g[e] * g[e])
                        + uf * uf.transpose() / (g[f] * g[f]))
                        * p;
                }
            }
            Kind::Quadrature { step } => {
                for (u, &v) in self.units.iter().zip(g) {
                    let v3 = v.powi(-3);
                    grad += u * (step * v3);
                    hess += u * u.transpose() * (3.0 * step * v3 / v);
                }
            }
        }
        (grad, hess)
    }

    /// Largest step along `d` that keeps every gap positive.
    fn max_step(&self, g: &[f64], d: &P) -> f64 {
        self.units
            .iter()
            .zip(g)
            .filter_map(|(u, &v)| {
                let rate = u.dot(d);
                (rate > 0.0).then(|| v / rate)
            })
            .fold(f64::INFINITY, f64::min)
    }
}

fn start_point(body: &Body) -> Result<P> {
    match body.shape() {
        Shape::Fourier(f) => {
            let pts = f.boundary_points(f.grid().len());
            Ok(crate::body::Polygon::from_points(&pts)?.centroid())
        }
        _ => body.centroid(),
    }
}

pub fn santalo_point(body: &Body) -> Result<SantaloResult> {
    santalo_point_with(body, GRADIENT_TOL, MAX_NEWTON_ITERATIONS)
}

/// Damped Newton on the polar-area functional, started at the centroid.
pub fn santalo_point_with(body: &Body, tol: f64, max_iter: usize) -> Result<SantaloResult> {
    let obj = PolarArea::new(body)?;
    let scale = body.area().sqrt();
    let mut x = start_point(body)?;
    let mut g = obj.gaps(&x).ok_or(GeomError::OriginNotInterior)?;
    let mut value = obj.value(&g);
    let mut residual = f64::INFINITY;
    for _ in 0..=max_iter {
        let (grad, hess) = obj.derivatives(&g);
        residual = grad.norm() * scale / value;
        if residual <= tol {
            return Ok(SantaloResult {
                point: x,
                polar_area: value,
                gradient_norm: residual,
            });
        }
        let d = hess
            .cholesky()
            .map(|c| -c.solve(&grad))
            .unwrap_or_else(|| -grad * (scale * scale / value));
        let slope = grad.dot(&d);
        let mut alpha = (0.9 * obj.max_step(&g, &d)).min(1.0);
        if -slope < 1e-12 * value {
            // The decrease is below the resolution of the objective, so
            // Armijo cannot judge the step; Newton is trusted here.
            x += d * alpha;
            g = obj.gaps(&x).ok_or(GeomError::OriginNotInterior)?;
            value = obj.value(&g);
            continue;
        }
        let mut moved = false;
        for _ in 0..60 {
            let trial = x + d * alpha;
            if let Some(gt) = obj.gaps(&trial) {
                let vt = obj.value(&gt);
                if vt <= value + 1e-4 * alpha * slope {
                    x = trial;
                    g = gt;
                    value = vt;
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
    Err(GeomError::NoConvergence {
        what: "santalo point",
        iterations: max_iter,
        residual,
    })
}

/// `V(K) · V(K^s)`.
pub fn volume_product(body: &Body) -> Result<f64> {
    Ok(body.area() * santalo_point(body)?.polar_area)
}

/// `ε = π² / (V(K) V(K^s)) - 1`, with round-off negatives clipped to zero.
pub fn deficit_from_product(product: f64) -> f64 {
    let eps = DISK_AREA * DISK_AREA / product - 1.0;
    if (-DEFICIT_CLIP..0.0).contains(&eps) {
        0.0
    } else {
        eps
    }
}

pub fn santalo_deficit(body: &Body) -> Result<f64> {
    Ok(deficit_from_product(volume_product(body)?))
}

fn require_symmetric(body: &Body) -> Result<()> {
    let d = body.symmetry_defect();
    if d > crate::body::SYMMETRY_TOL {
        return Err(GeomError::NotSymmetric(d));
    }
    Ok(())
}

/// `V(K,L)² / (V(K)V(L)) - 1`, nonnegative by Minkowski's inequality.
pub fn minkowski_excess(k: &Body, l: &Body) -> f64 {
    k.mixed_area(l).powi(2) / (k.area() * l.area()) - 1.0
}

/// Left side minus right side of Groemer's stability estimate for the
/// planar Minkowski inequality `V(K,L)² >= V(K)V(L)`.
pub fn groemer_gap(k: &Body, l: &Body) -> Result<f64> {
    require_symmetric(k)?;
    require_symmetric(l)?;
    let (vk, vl) = (k.area(), l.area());
    let lhs = minkowski_excess(k, l);
    let n = k.working_grid().len().max(l.working_grid().len());
    let grid = AngleGrid::new(n)?;
    let (sk, sl) = (vk.sqrt(), vl.sqrt());
    let dev = k
        .sample_support(&grid)
        .iter()
        .zip(l.sample_support(&grid))
        .map(|(a, b)| (a / sk - b / sl).abs())
        .fold(0.0, f64::max);
    let d = k.stats().d_groemer;
    let rhs = vk / (4.0 * d * d) * dev * dev;
    Ok(lhs - rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::body::{FourierBody, Polygon};

    fn square() -> Body {
        Polygon::from_xy(&[(-1.0, -1.0), (1.0, -1.0), (1.0, 1.0), (-1.0, 1.0)])
            .unwrap()
            .into()
    }

    fn triangle() -> Body {
        Polygon::from_xy(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]).unwrap().into()
    }

    #[test]
    fn symmetric_bodies_sit_at_the_origin() {
        let r = santalo_point(&square()).unwrap();
        assert!(r.point.norm() < 1e-10);
        assert!((r.polar_area - 2.0).abs() < 1e-14);
        let e = Body::ellipse(2.0, 0.5, AngleGrid::default()).unwrap();
        assert!(santalo_point(&e).unwrap().point.norm() < 1e-10);
    }

    #[test]
    fn translated_disk() {
        let b = Body::disk(1.0).translated(&P::new(0.3, 0.0)).unwrap();
        let r = santalo_point(&b).unwrap();
        assert!((r.point - P::new(0.3, 0.0)).norm() < 1e-10);
        assert!((r.polar_area - PI).abs() < 1e-12);
    }

    #[test]
    fn triangle_values() {
        let r = santalo_point(&triangle()).unwrap();
        assert!((r.point - P::new(1.0 / 3.0, 1.0 / 3.0)).norm() < 1e-10);
        assert!((r.polar_area - 13.5).abs() < 1e-9);
        assert!((volume_product(&triangle()).unwrap() - 6.75).abs() < 1e-9);
    }

    #[test]
    fn deficits() {
        assert!(santalo_deficit(&Body::disk(1.0)).unwrap().abs() < 1e-14);
        assert!((santalo_deficit(&square()).unwrap() - (PI * PI / 8.0 - 1.0)).abs() < 1e-12);
        let e = Body::ellipse(3.0, 0.4, AngleGrid::default()).unwrap();
        assert!(santalo_deficit(&e).unwrap().abs() < 1e-9);
    }

    #[test]
    fn groemer_examples() {
        let d = Body::disk(1.0);
        assert!(groemer_gap(&square(), &square()).unwrap().abs() < 1e-14);
        assert!(groemer_gap(&d, &Body::disk(2.0)).unwrap().abs() < 1e-14);
        let lhs = 4.0 / PI - 1.0;
        let rhs = PI / 16.0 * (0.5f64.sqrt() - 1.0 / PI.sqrt()).powi(2);
        assert!((groemer_gap(&d, &square()).unwrap() - (lhs - rhs)).abs() < 1e-9);
        let m3: Body = FourierBody::mode(3, 0.05, AngleGrid::default()).unwrap().into();
        assert!(matches!(groemer_gap(&m3, &d), Err(GeomError::NotSymmetric(_))));
    }
}
