use nalgebra::Vector2;

use super::polygon::Polygon;
use crate::error::{GeomError, Result};
use crate::grid::{unit, AngleGrid};

type P = Vector2<f64>;

/// Relative tolerance on the discrete convexity test.
pub const CONVEXITY_TOL: f64 = 1e-12;

/// Support values on a uniform grid. The body it stands for is the
/// circumscribed polygon `∩_i {x : <x, u_i> <= h_i}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportVector {
    grid: AngleGrid,
    values: Vec<f64>,
}

impl SupportVector {
    pub fn new(grid: AngleGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(GeomError::InvalidBody(format!(
                "{} support values for a grid of {}",
                values.len(),
                grid.len()
            )));
        }
        if grid.len() < 3 {
            return Err(GeomError::InvalidBody("support vector needs >= 3 samples".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(GeomError::InvalidBody("non-finite support value".into()));
        }
        let sv = SupportVector { grid, values };
        let scale = sv.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let (s, c) = grid.step().sin_cos();
        for (i, l) in sv.raw_edge_terms(c).into_iter().enumerate() {
            if l < -CONVEXITY_TOL * scale {
                return Err(GeomError::ConvexityViolation {
                    index: i,
                    value: l / s,
                });
            }
        }
        Ok(sv)
    }

    /// Raw samples on an `n`-point grid; `n` only has to be >= 3 here.
    pub fn from_samples(values: Vec<f64>) -> Result<Self> {
        let n = values.len();
        SupportVector::new(AngleGrid::raw(n), values)
    }

    pub fn grid(&self) -> AngleGrid {
        self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn raw_edge_terms(&self, cos_step: f64) -> Vec<f64> {
        let n = self.values.len();
        let h = &self.values;
        (0..n)
            .map(|i| h[(i + n - 1) % n] + h[(i + 1) % n] - 2.0 * h[i] * cos_step)
            .collect()
    }

    /// Edge lengths `ℓ_i` of the circumscribed polygon, clamped at zero.
    pub fn edge_lengths(&self) -> Vec<f64> {
        let (s, c) = self.grid.step().sin_cos();
        self.raw_edge_terms(c).into_iter().map(|l| (l / s).max(0.0)).collect()
    }

    pub fn area(&self) -> f64 {
        0.5 * self
            .values
            .iter()
            .zip(self.edge_lengths())
            .map(|(h, l)| h * l)
            .sum::<f64>()
    }

    /// Vertex `i` is where support lines `i` and `i+1` meet.
    pub fn corner_points(&self) -> Vec<P> {
        let n = self.values.len();
        let s = self.grid.step().sin();
        (0..n)
            .map(|i| {
                let j = (i + 1) % n;
                let (ti, tj) = (self.grid.angle(i), self.grid.angle(j));
                let (hi, hj) = (self.values[i], self.values[j]);
                P::new(hi * tj.sin() - hj * ti.sin(), -hi * tj.cos() + hj * ti.cos()) / s
            })
            .collect()
    }

    pub fn to_polygon(&self) -> Result<Polygon> {
        Polygon::from_points(&self.corner_points())
    }

    pub fn support(&self, u: &P) -> f64 {
        self.corner_points().iter().map(|c| c.dot(u)).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn measure_atoms(&self) -> Vec<(f64, f64)> {
        self.grid.angles().zip(self.edge_lengths()).collect()
    }

    pub fn units(&self) -> Vec<P> {
        self.grid.angles().map(unit).collect()
    }
}
