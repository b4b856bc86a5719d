use nalgebra::{Matrix2, Vector2};

use crate::body::{Body, FourierBody, Shape};
use crate::error::Result;
use crate::grid::AngleGrid;
use crate::optim::{golden_min, local_minima};

type P = Vector2<f64>;

/// Oversampling of smooth bodies relative to their working grid.
pub const OVERSAMPLE: usize = 4;

/// Boundary points and supporting lines of a body, both in counterclockwise
/// order. For polygonal bodies the lists are exact (vertices and edges); for
/// smooth bodies they are samples on an oversampled grid.
#[derive(Debug, Clone)]
pub struct Outline {
    pub points: Vec<P>,
    pub normals: Vec<P>,
    pub offsets: Vec<f64>,
    smooth: Option<FourierBody>,
}

impl Outline {
    pub fn of(body: &Body) -> Result<Outline> {
        Ok(match body.shape() {
            Shape::Polygon(p) => {
                let edges = p.edges();
                Outline {
                    points: p.vertices().to_vec(),
                    normals: edges.iter().map(|e| e.normal).collect(),
                    offsets: edges.iter().map(|e| e.offset).collect(),
                    smooth: None,
                }
            }
            Shape::Support(s) => Outline {
                points: s.to_polygon()?.vertices().to_vec(),
                normals: s.units(),
                offsets: s.values().to_vec(),
                smooth: None,
            },
            Shape::Fourier(f) => {
                let n = f.grid().len() * OVERSAMPLE;
                Outline {
                    points: f.boundary_points(n),
                    normals: AngleGrid::raw(n).units(),
                    offsets: f.samples_on(n),
                    smooth: Some(f.clone()),
                }
            }
        })
    }

    /// `max_j |Φ(p_j - x)|`.
    pub fn outer_radius(&self, phi: &Matrix2<f64>, x: &P) -> f64 {
        self.points.iter().map(|p| (phi * (p - x)).norm()).fold(0.0, f64::max)
    }

    /// Distance from the origin to the nearest supporting line of `Φ(K - x)`;
    /// non-positive when `x` is not interior.
    pub fn inner_radius(&self, phi_inv_t: &Matrix2<f64>, x: &P) -> f64 {
        self.normals
            .iter()
            .zip(&self.offsets)
            .map(|(u, h)| (h - u.dot(x)) / (phi_inv_t * u).norm())
            .fold(f64::INFINITY, f64::min)
    }

    fn bracket(&self, j: usize) -> (f64, f64) {
        let step = std::f64::consts::TAU / self.normals.len() as f64;
        let t = self.normals[j].y.atan2(self.normals[j].x);
        (t - step, t + step)
    }

    /// [`Outline::outer_radius`] with the extremum of a smooth body located
    /// between samples.
    pub fn outer_radius_refined(&self, phi: &Matrix2<f64>, x: &P) -> f64 {
        let coarse = self.outer_radius(phi, x);
        let Some(f) = &self.smooth else { return coarse };
        let neg: Vec<f64> = self.points.iter().map(|p| -(phi * (p - x)).norm()).collect();
        local_minima(&neg)
            .map(|j| {
                let (lo, hi) = self.bracket(j);
                -golden_min(|t| -(phi * (f.boundary_point(t) - x)).norm(), lo, hi)
            })
            .fold(coarse, f64::max)
    }

    /// [`Outline::inner_radius`] with the extremum of a smooth body located
    /// between samples.
    pub fn inner_radius_refined(&self, phi_inv_t: &Matrix2<f64>, x: &P) -> f64 {
        let coarse = self.inner_radius(phi_inv_t, x);
        let Some(f) = &self.smooth else { return coarse };
        let dist = |u: &P, h: f64| (h - u.dot(x)) / (phi_inv_t * u).norm();
        let d: Vec<f64> = self.normals.iter().zip(&self.offsets).map(|(u, h)| dist(u, *h)).collect();
        local_minima(&d)
            .map(|j| {
                let (lo, hi) = self.bracket(j);
                golden_min(|t| dist(&P::new(t.cos(), t.sin()), f.eval(t)), lo, hi)
            })
            .fold(coarse, f64::min)
    }
}
