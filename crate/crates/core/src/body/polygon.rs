use nalgebra::{Matrix2, Vector2};

use super::hull::convex_hull;
use crate::error::{GeomError, Result};
use crate::grid::{cross, unit, AngleGrid};

type P = Vector2<f64>;

/// Collinearity threshold used when cleaning derived polygons.
pub(crate) const HULL_EPS: f64 = 1e-15;

/// Strictly convex polygon with counterclockwise vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    vertices: Vec<P>,
}

/// One edge `v_j -> v_{j+1}` seen from its outward normal.
#[derive(Debug, Clone, Copy)]
pub struct Edge {
    pub normal: P,
    pub offset: f64,
    pub length: f64,
}

impl Edge {
    pub fn angle(&self) -> f64 {
        self.normal.y.atan2(self.normal.x).rem_euclid(std::f64::consts::TAU)
    }
}

impl Polygon {
    pub fn new(vertices: Vec<P>) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(GeomError::InvalidBody(format!("polygon needs >= 3 vertices, got {n}")));
        }
        if vertices.iter().any(|v| !v.x.is_finite() || !v.y.is_finite()) {
            return Err(GeomError::InvalidBody("non-finite vertex".into()));
        }
        for i in 0..n {
            let a = vertices[i];
            let b = vertices[(i + 1) % n];
            let c = vertices[(i + 2) % n];
            if a == b {
                return Err(GeomError::InvalidBody(format!("repeated vertex at {i}")));
            }
            if cross(&(b - a), &(c - b)) <= 0.0 {
                return Err(GeomError::InvalidBody(format!(
                    "polygon is not strictly convex at vertex {}",
                    (i + 1) % n
                )));
            }
        }
        // Local left turns everywhere still allow a star that winds twice.
        let turning: f64 = (0..n)
            .map(|i| {
                let e0 = vertices[(i + 1) % n] - vertices[i];
                let e1 = vertices[(i + 2) % n] - vertices[(i + 1) % n];
                cross(&e0, &e1).atan2(e0.dot(&e1))
            })
            .sum();
        if (turning - std::f64::consts::TAU).abs() > 1e-6 {
            return Err(GeomError::InvalidBody("polygon winds more than once".into()));
        }
        Ok(Polygon { vertices })
    }

    /// Convex hull of arbitrary points.
    pub fn from_points(points: &[P]) -> Result<Self> {
        Polygon::new(convex_hull(points, HULL_EPS))
    }

    pub fn from_xy(xy: &[(f64, f64)]) -> Result<Self> {
        Polygon::new(xy.iter().map(|&(x, y)| P::new(x, y)).collect())
    }

    /// Regular `n`-gon with circumradius `r`, first vertex at angle `phase`.
    pub fn regular(n: usize, r: f64, phase: f64) -> Result<Self> {
        let step = std::f64::consts::TAU / n as f64;
        Polygon::new((0..n).map(|i| unit(phase + step * i as f64) * r).collect())
    }

    pub fn vertices(&self) -> &[P] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn edges(&self) -> Vec<Edge> {
        let n = self.vertices.len();
        (0..n)
            .map(|i| {
                let a = self.vertices[i];
                let d = self.vertices[(i + 1) % n] - a;
                let length = d.norm();
                let normal = P::new(d.y, -d.x) / length;
                Edge {
                    normal,
                    offset: normal.dot(&a),
                    length,
                }
            })
            .collect()
    }

    pub fn support(&self, u: &P) -> f64 {
        self.vertices.iter().map(|v| v.dot(u)).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Support values along directions sorted counterclockwise, walking the
    /// maximising vertex around the polygon.
    pub fn support_sweep(&self, dirs: &[P]) -> Vec<f64> {
        support_sweep(&self.vertices, dirs)
    }

    pub fn sample_support(&self, grid: &AngleGrid) -> Vec<f64> {
        self.support_sweep(&grid.units())
    }

    pub fn area(&self) -> f64 {
        let n = self.vertices.len();
        0.5 * (0..n)
            .map(|i| cross(&self.vertices[i], &self.vertices[(i + 1) % n]))
            .sum::<f64>()
    }

    pub fn perimeter(&self) -> f64 {
        let n = self.vertices.len();
        (0..n).map(|i| (self.vertices[(i + 1) % n] - self.vertices[i]).norm()).sum()
    }

    pub fn centroid(&self) -> P {
        let n = self.vertices.len();
        // Shift to the first vertex to keep the sums well conditioned.
        let o = self.vertices[0];
        let mut acc = P::zeros();
        let mut a2 = 0.0;
        for i in 0..n {
            let p = self.vertices[i] - o;
            let q = self.vertices[(i + 1) % n] - o;
            let c = cross(&p, &q);
            a2 += c;
            acc += (p + q) * c;
        }
        o + acc / (3.0 * a2)
    }

    /// True when every edge line passes strictly on the far side of `x`.
    pub fn contains_strictly(&self, x: &P) -> bool {
        self.edges().iter().all(|e| e.offset - e.normal.dot(x) > 0.0)
    }

    pub fn map(&self, m: &Matrix2<f64>, t: &P) -> Result<Polygon> {
        let mut v: Vec<P> = self.vertices.iter().map(|p| m * p + t).collect();
        if m.determinant() < 0.0 {
            v.reverse();
        }
        Polygon::new(v.clone()).or_else(|_| Polygon::from_points(&v))
    }

    pub fn translated(&self, t: &P) -> Polygon {
        Polygon {
            vertices: self.vertices.iter().map(|p| p + t).collect(),
        }
    }

    /// Exact polar: the edge with normal `u` at offset `h` becomes the vertex `u/h`.
    pub fn polar(&self) -> Result<Polygon> {
        let edges = self.edges();
        if edges.iter().any(|e| e.offset <= 0.0) {
            return Err(GeomError::OriginNotInterior);
        }
        let pts: Vec<P> = edges.iter().map(|e| e.normal / e.offset).collect();
        Polygon::new(pts.clone()).or_else(|_| Polygon::from_points(&pts))
    }

    /// `(normal angle, length)` for each edge.
    pub fn measure_atoms(&self) -> Vec<(f64, f64)> {
        self.edges().iter().map(|e| (e.angle(), e.length)).collect()
    }

    /// Steiner point `(1/π) ∫ h(θ) u(θ) dθ`, integrated exactly arc by arc.
    pub fn steiner_point(&self) -> P {
        let edges = self.edges();
        let n = edges.len();
        let mut acc = P::zeros();
        for j in 0..n {
            // Vertex j+1 is the maximiser between the normals of edges j and j+1.
            let v = self.vertices[(j + 1) % n];
            let a0 = edges[j].angle();
            let mut a1 = edges[(j + 1) % n].angle();
            if a1 < a0 {
                a1 += std::f64::consts::TAU;
            }
            let int_cc = |t: f64| 0.5 * t + 0.25 * (2.0 * t).sin();
            let int_ss = |t: f64| 0.5 * t - 0.25 * (2.0 * t).sin();
            let int_sc = |t: f64| 0.5 * t.sin().powi(2);
            let cc = int_cc(a1) - int_cc(a0);
            let ss = int_ss(a1) - int_ss(a0);
            let sc = int_sc(a1) - int_sc(a0);
            acc += P::new(v.x * cc + v.y * sc, v.x * sc + v.y * ss);
        }
        acc / std::f64::consts::PI
    }
}

/// Support of the convex polygon with CCW `vertices` along CCW-sorted `dirs`.
pub(crate) fn support_sweep(vertices: &[P], dirs: &[P]) -> Vec<f64> {
    let n = vertices.len();
    if dirs.is_empty() || n == 0 {
        return Vec::new();
    }
    let mut j = (0..n)
        .max_by(|&a, &b| vertices[a].dot(&dirs[0]).total_cmp(&vertices[b].dot(&dirs[0])))
        .unwrap_or(0);
    let mut out = Vec::with_capacity(dirs.len());
    for u in dirs {
        let mut steps = 0;
        while steps < n && vertices[(j + 1) % n].dot(u) >= vertices[j].dot(u) {
            j = (j + 1) % n;
            steps += 1;
        }
        out.push(vertices[j].dot(u));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_4, PI, SQRT_2};

    fn square() -> Polygon {
        Polygon::from_xy(&[(-1.0, -1.0), (1.0, -1.0), (1.0, 1.0), (-1.0, 1.0)]).unwrap()
    }

    #[test]
    fn rejects_clockwise_and_degenerate() {
        assert!(Polygon::from_xy(&[(0.0, 0.0), (0.0, 1.0), (1.0, 0.0)]).is_err());
        assert!(Polygon::from_xy(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0), (1.0, 1.0)]).is_err());
        assert!(Polygon::from_xy(&[(0.0, 0.0), (1.0, 0.0)]).is_err());
    }

    #[test]
    fn square_basics() {
        let q = square();
        assert_eq!(q.area(), 4.0);
        assert_eq!(q.perimeter(), 8.0);
        assert!((q.support(&unit(FRAC_PI_4)) - SQRT_2).abs() < 1e-15);
        assert!(q.centroid().norm() < 1e-15);
        let p = q.polar().unwrap();
        assert!((p.area() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn sweep_matches_brute_force() {
        let p = Polygon::from_xy(&[(0.0, 0.0), (3.0, 0.2), (2.0, 2.0), (-0.5, 1.0)]).unwrap();
        let g = AngleGrid::new(64).unwrap();
        let fast = p.sample_support(&g);
        for (i, u) in g.units().iter().enumerate() {
            assert!((fast[i] - p.support(u)).abs() < 1e-14);
        }
    }

    #[test]
    fn steiner_point_matches_quadrature() {
        let p = Polygon::from_xy(&[(0.0, 0.0), (3.0, 0.2), (2.0, 2.0), (-0.5, 1.0)]).unwrap();
        let g = AngleGrid::new(1 << 16).unwrap();
        let h = p.sample_support(&g);
        let mut acc = P::zeros();
        for (hi, u) in h.iter().zip(g.units()) {
            acc += u * *hi;
        }
        acc *= g.step() / PI;
        assert!((acc - p.steiner_point()).norm() < 1e-8);
    }
}
