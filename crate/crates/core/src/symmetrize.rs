//! Steiner symmetrization of polygons, the Meyer-Pajor monotonicity of the
//! polar area, and finite symmetrization flows.

use nalgebra::{Matrix2, Vector2};
use serde::Serialize;

use crate::body::{Body, Polygon};
use crate::error::{GeomError, Result};
use crate::grid::unit;
use crate::optim::NelderMead;
use crate::santalo::santalo_point;

type P = Vector2<f64>;

/// Allowed distance of the symmetral's Santaló point from the axis, relative
/// to `sqrt(area)`.
pub const AXIS_TOL: f64 = 1e-7;

fn rotation(angle: f64) -> Matrix2<f64> {
    let (s, c) = angle.sin_cos();
    Matrix2::new(c, -s, s, c)
}

/// Vertical chord `[y_min, y_max]` of a convex polygon at abscissa `x`.
fn chord(vertices: &[P], x: f64) -> Option<(f64, f64)> {
    let n = vertices.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let a = vertices[i];
        let b = vertices[(i + 1) % n];
        let (x0, x1) = if a.x <= b.x { (a.x, b.x) } else { (b.x, a.x) };
        if x < x0 || x > x1 {
            continue;
        }
        let ys: &[f64] = if a.x == b.x {
            &[a.y, b.y]
        } else if x == a.x {
            &[a.y]
        } else if x == b.x {
            &[b.y]
        } else {
            let t = (x - a.x) / (b.x - a.x);
            lo = lo.min(a.y + t * (b.y - a.y));
            hi = hi.max(a.y + t * (b.y - a.y));
            &[]
        };
        for &y in ys {
            lo = lo.min(y);
            hi = hi.max(y);
        }
    }
    (lo <= hi).then_some((lo, hi))
}

/// Steiner symmetral of a polygon about the line through the origin at
/// angle `axis`.
pub fn steiner_polygon(poly: &Polygon, axis: f64) -> Result<Polygon> {
    let (to, back) = (rotation(-axis), rotation(axis));
    let verts: Vec<P> = if axis == 0.0 {
        poly.vertices().to_vec()
    } else {
        poly.vertices().iter().map(|v| to * v).collect()
    };
    let mut xs: Vec<f64> = verts.iter().map(|v| v.x).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    let mut pts = Vec::with_capacity(2 * xs.len());
    for &x in &xs {
        if let Some((lo, hi)) = chord(&verts, x) {
            let half = 0.5 * (hi - lo);
            pts.push(P::new(x, half));
            if half > 0.0 {
                pts.push(P::new(x, -half));
            }
        }
    }
    let sym = Polygon::from_points(&pts)?;
    if axis == 0.0 {
        Ok(sym)
    } else {
        sym.map(&back, &P::zeros())
    }
}

/// Steiner symmetral of any body; smooth bodies are polygonized first.
pub fn steiner_symmetral(body: &Body, axis: f64) -> Result<Body> {
    let sym: Body = steiner_polygon(&body.polygonize()?, axis)?.into();
    Ok(match body.label() {
        Some(l) => sym.with_label(l),
        None => sym,
    })
}

/// `V((K_H)^{s'}) - V(K^s)`, after checking that `s'` lies on the axis.
pub fn meyer_pajor_gap(body: &Body, axis: f64) -> Result<f64> {
    let k: Body = body.polygonize()?.into();
    let kh = steiner_symmetral(&k, axis)?;
    let s = santalo_point(&k)?;
    let sh = santalo_point(&kh)?;
    let normal = unit(axis + std::f64::consts::FRAC_PI_2);
    let off = sh.point.dot(&normal).abs() / k.area().sqrt();
    if off > AXIS_TOL {
        return Err(GeomError::OffAxisSantaloPoint(off));
    }
    Ok(sh.polar_area - s.polar_area)
}

/// `min_x ‖h_{K-x}(θ) - h_{K-x}(θ+π)‖∞ / max h_{K-x}` on the working grid.
pub fn asymmetry(body: &Body) -> f64 {
    let grid = body.working_grid();
    let h = body.sample_support(&grid);
    let units = grid.units();
    let n = h.len();
    let half = n / 2;
    let odd: Vec<f64> = (0..half).map(|i| h[i] - h[i + half]).collect();
    let defect = |x: &[f64]| {
        odd.iter()
            .zip(&units)
            .map(|(d, u)| (d - 2.0 * (u.x * x[0] + u.y * x[1])).abs())
            .fold(0.0, f64::max)
    };
    // The first harmonic of the odd part is twice the Steiner point.
    let mut s = P::zeros();
    for (d, u) in odd.iter().zip(&units) {
        s += u * *d;
    }
    let s = s / n as f64;
    let scale = h.iter().fold(0.0_f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
    let nm = NelderMead {
        ftol: 1e-15,
        ..NelderMead::default()
    };
    let best = nm.minimize(defect, &[s.x, s.y], &[0.01 * scale, 0.01 * scale]);
    let x = P::new(best.x[0], best.x[1]);
    let hmax = h.iter().zip(&units).map(|(v, u)| v - u.dot(&x)).fold(0.0, f64::max);
    best.value / hmax
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FlowStep {
    pub axis: f64,
    pub volume_product: f64,
    pub asymmetry: f64,
}

#[derive(Debug, Clone)]
pub struct FlowHistory {
    pub steps: Vec<FlowStep>,
    pub final_body: Body,
}

impl FlowHistory {
    /// Largest relative drop of the volume product between consecutive steps.
    pub fn worst_decrease(&self) -> f64 {
        self.steps
            .windows(2)
            .map(|w| (w[0].volume_product - w[1].volume_product) / w[0].volume_product)
            .fold(0.0, f64::max)
    }
}

/// Applies symmetrals about `axes` cyclically, `steps` times.
pub fn symmetrization_flow(body: &Body, axes: &[f64], steps: usize) -> Result<FlowHistory> {
    if axes.is_empty() {
        return Err(GeomError::InvalidBody("symmetrization flow needs at least one axis".into()));
    }
    let mut k = body.clone();
    let mut history = Vec::with_capacity(steps);
    for i in 0..steps {
        let axis = axes[i % axes.len()];
        k = steiner_symmetral(&k, axis)?;
        let vp = k.area() * santalo_point(&k)?.polar_area;
        history.push(FlowStep {
            axis,
            volume_product: vp,
            asymmetry: asymmetry(&k),
        });
    }
    Ok(FlowHistory {
        steps: history,
        final_body: k,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn triangle() -> Body {
        Polygon::from_xy(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]).unwrap().into()
    }

    #[test]
    fn triangle_symmetral_is_exact() {
        let s = steiner_symmetral(&triangle(), 0.0).unwrap();
        let p = s.as_polygon().unwrap();
        let mut v: Vec<(f64, f64)> = p.vertices().iter().map(|v| (v.x, v.y)).collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(v, vec![(0.0, -0.5), (0.0, 0.5), (1.0, 0.0)]);
    }

    #[test]
    fn square_is_fixed_and_area_kept() {
        let q: Body = Polygon::from_xy(&[(-1.0, -1.0), (1.0, -1.0), (1.0, 1.0), (-1.0, 1.0)]).unwrap().into();
        let s = steiner_symmetral(&q, 0.0).unwrap();
        assert_eq!(s, q);
        let r = steiner_symmetral(&q, PI / 8.0).unwrap();
        assert!((r.area() - 4.0).abs() < 4e-12);
        assert!(meyer_pajor_gap(&q, 0.0).unwrap().abs() < 1e-7);
    }

    #[test]
    fn triangle_symmetral_keeps_the_polar_area() {
        // The symmetral of a triangle is a triangle of the same area, and all
        // triangles share the volume product 27/4.
        let gap = meyer_pajor_gap(&triangle(), 0.0).unwrap();
        assert!(gap.abs() < 1e-9, "{gap}");
        assert!((santalo_point(&triangle()).unwrap().polar_area - 13.5).abs() < 1e-9);
    }

    #[test]
    fn asymmetry_of_simple_bodies() {
        assert!(asymmetry(&Body::disk(1.0)) < 1e-12);
        let shifted = Body::disk(1.0).translated(&P::new(0.4, -0.1)).unwrap();
        assert!(asymmetry(&shifted) < 1e-9);
        assert!(asymmetry(&triangle()) > 0.1);
    }

    #[test]
    fn triangle_flow() {
        let axes = [0.0, PI / 3.0, 2.0 * PI / 3.0];
        let h = symmetrization_flow(&triangle(), &axes, 12).unwrap();
        assert_eq!(h.steps.len(), 12);
        assert!(h.steps[11].asymmetry < h.steps[0].asymmetry);
        assert!(h.worst_decrease() <= 1e-7);
    }
}
