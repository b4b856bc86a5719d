use std::f64::consts::{PI, TAU};

use nalgebra::Vector2;

use super::polygon::Polygon;
use crate::error::{GeomError, Result};
use crate::grid::{self, AngleGrid};

type P = Vector2<f64>;

/// Smooth body with band-limited support function
/// `h(θ) = a0 + Σ_k a_k cos kθ + b_k sin kθ`, tied to the grid it is
/// validated and integrated on.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierBody {
    a0: f64,
    cos: Vec<f64>,
    sin: Vec<f64>,
    grid: AngleGrid,
}

impl FourierBody {
    pub fn new(a0: f64, mut cos: Vec<f64>, mut sin: Vec<f64>, grid: AngleGrid) -> Result<Self> {
        let deg = cos.len().max(sin.len());
        cos.resize(deg, 0.0);
        sin.resize(deg, 0.0);
        if deg > grid.max_degree() {
            return Err(GeomError::InvalidBody(format!(
                "degree {deg} exceeds {} for a grid of {}",
                grid.max_degree(),
                grid.len()
            )));
        }
        if !a0.is_finite() || cos.iter().chain(&sin).any(|c| !c.is_finite()) {
            return Err(GeomError::InvalidBody("non-finite coefficient".into()));
        }
        let body = FourierBody { a0, cos, sin, grid };
        body.trimmed().validate()
    }

    fn trimmed(mut self) -> Self {
        let floor = 1e-17 * self.a0.abs();
        while let (Some(c), Some(s)) = (self.cos.last(), self.sin.last()) {
            if c.abs() <= floor && s.abs() <= floor {
                self.cos.pop();
                self.sin.pop();
            } else {
                break;
            }
        }
        self
    }

    fn validate(self) -> Result<Self> {
        let h = self.samples();
        if let Some(&min) = h.iter().min_by(|a, b| a.total_cmp(b)) {
            if min <= 0.0 {
                return Err(GeomError::OriginNotInterior);
            }
        }
        let f = self.curvature_values();
        if let Some((i, &v)) = f.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)) {
            if v <= 0.0 {
                return Err(GeomError::ConvexityViolation { index: i, value: v });
            }
        }
        Ok(self)
    }

    pub fn disk(radius: f64, grid: AngleGrid) -> Result<Self> {
        FourierBody::new(radius, vec![], vec![], grid)
    }

    /// `h = 1 + t cos kθ`.
    pub fn mode(k: usize, t: f64, grid: AngleGrid) -> Result<Self> {
        let mut cos = vec![0.0; k];
        if k == 0 {
            return FourierBody::new(1.0 + t, vec![], vec![], grid);
        }
        cos[k - 1] = t;
        FourierBody::new(1.0, cos, vec![0.0; k], grid)
    }

    /// Coefficients projected from samples on `grid`, capped at `grid.max_degree()`.
    pub fn from_samples(values: &[f64], grid: AngleGrid) -> Result<Self> {
        debug_assert_eq!(values.len(), grid.len());
        let (a0, cos, sin) = grid::analyze(values, grid.max_degree());
        FourierBody::new(a0, cos, sin, grid)
    }

    /// Smoothing of a polygon: its surface measure convolved with a wrapped
    /// Gaussian of angular width `1/κ`, `κ = n/32`, plus a disk of radius
    /// `rounding · (mean half-width)`. The first harmonic (Steiner point) is
    /// kept exactly.
    pub fn smoothed_polygon(poly: &Polygon, grid: AngleGrid, rounding: f64) -> Result<Self> {
        let kmax = grid.max_degree();
        let kappa = grid.len() as f64 / 32.0;
        let atoms = poly.measure_atoms();
        let perimeter: f64 = atoms.iter().map(|a| a.1).sum();
        let a0 = perimeter / TAU;
        let mut cos = vec![0.0; kmax];
        let mut sin = vec![0.0; kmax];
        let steiner = poly.steiner_point();
        if kmax >= 1 {
            cos[0] = steiner.x;
            sin[0] = steiner.y;
        }
        for k in 2..=kmax {
            let kf = k as f64;
            let damp = (-0.5 * (kf / kappa).powi(2)).exp();
            if damp < 1e-300 {
                break;
            }
            let (mut ck, mut sk) = (0.0, 0.0);
            for &(theta, len) in &atoms {
                let (s, c) = (kf * theta).sin_cos();
                ck += len * c;
                sk += len * s;
            }
            let factor = damp / (PI * (1.0 - kf * kf));
            cos[k - 1] = ck * factor;
            sin[k - 1] = sk * factor;
        }
        FourierBody::new(a0 * (1.0 + rounding), cos, sin, grid)
    }

    pub fn a0(&self) -> f64 {
        self.a0
    }

    pub fn cos_coeffs(&self) -> &[f64] {
        &self.cos
    }

    pub fn sin_coeffs(&self) -> &[f64] {
        &self.sin
    }

    pub fn degree(&self) -> usize {
        self.cos.len()
    }

    pub fn grid(&self) -> AngleGrid {
        self.grid
    }

    pub fn with_grid(&self, grid: AngleGrid) -> Result<Self> {
        FourierBody::new(self.a0, self.cos.clone(), self.sin.clone(), grid)
    }

    pub fn eval(&self, theta: f64) -> f64 {
        let z1 = (theta.cos(), theta.sin());
        let mut z = z1;
        let mut acc = self.a0;
        for (a, b) in self.cos.iter().zip(&self.sin) {
            acc += a * z.0 + b * z.1;
            z = (z.0 * z1.0 - z.1 * z1.1, z.0 * z1.1 + z.1 * z1.0);
        }
        acc
    }

    /// `(h(θ), h'(θ))`.
    pub fn eval_with_derivative(&self, theta: f64) -> (f64, f64) {
        let z1 = (theta.cos(), theta.sin());
        let mut z = z1;
        let (mut h, mut dh) = (self.a0, 0.0);
        for (j, (a, b)) in self.cos.iter().zip(&self.sin).enumerate() {
            let k = (j + 1) as f64;
            h += a * z.0 + b * z.1;
            dh += k * (b * z.0 - a * z.1);
            z = (z.0 * z1.0 - z.1 * z1.1, z.0 * z1.1 + z.1 * z1.0);
        }
        (h, dh)
    }

    /// Boundary point with outer normal at angle `theta`.
    pub fn boundary_point(&self, theta: f64) -> P {
        let (h, d) = self.eval_with_derivative(theta);
        let (s, c) = theta.sin_cos();
        P::new(h * c - d * s, h * s + d * c)
    }

    /// One-homogeneous extension `h(x) = |x| h(x/|x|)`.
    pub fn eval_vec(&self, x: &P) -> f64 {
        let r = x.norm();
        if r == 0.0 {
            return 0.0;
        }
        r * self.eval(x.y.atan2(x.x))
    }

    /// Samples of h on the body's own grid.
    pub fn samples(&self) -> Vec<f64> {
        self.samples_on(self.grid.len())
    }

    pub fn samples_on(&self, n: usize) -> Vec<f64> {
        grid::synthesize(self.a0, &self.cos, &self.sin, n)
    }

    pub fn derivative_on(&self, n: usize) -> Vec<f64> {
        let (c, s): (Vec<f64>, Vec<f64>) = self
            .cos
            .iter()
            .zip(&self.sin)
            .enumerate()
            .map(|(j, (a, b))| ((j + 1) as f64 * b, -((j + 1) as f64) * a))
            .unzip();
        grid::synthesize(0.0, &c, &s, n)
    }

    fn curvature_coeffs(&self) -> (Vec<f64>, Vec<f64>) {
        let factor = |j: usize| 1.0 - ((j + 1) * (j + 1)) as f64;
        (
            self.cos.iter().enumerate().map(|(j, a)| a * factor(j)).collect(),
            self.sin.iter().enumerate().map(|(j, b)| b * factor(j)).collect(),
        )
    }

    fn curvature_values(&self) -> Vec<f64> {
        let (c, s) = self.curvature_coeffs();
        grid::synthesize(self.a0, &c, &s, self.grid.len())
    }

    /// Radius of curvature `f = h + h''` on `grid`.
    pub fn curvature_samples(&self, grid: &AngleGrid) -> Result<Vec<f64>> {
        if self.degree() >= grid.len() / 2 {
            return Err(GeomError::InvalidBody(format!(
                "degree {} is not resolved by a grid of {}",
                self.degree(),
                grid.len()
            )));
        }
        let (c, s) = self.curvature_coeffs();
        let f = grid::synthesize(self.a0, &c, &s, grid.len());
        let min = f.iter().copied().fold(f64::INFINITY, f64::min);
        if min <= 0.0 {
            return Err(GeomError::NonConvex { min });
        }
        Ok(f)
    }

    /// `½∫ h (h + h'') dθ`, exact from the coefficients.
    pub fn area(&self) -> f64 {
        let tail: f64 = self
            .cos
            .iter()
            .zip(&self.sin)
            .enumerate()
            .map(|(j, (a, b))| {
                let k = (j + 1) as f64;
                (1.0 - k * k) * (a * a + b * b)
            })
            .sum();
        PI * self.a0 * self.a0 + 0.5 * PI * tail
    }

    /// `½∫ h_other f_self dθ`; symmetric in the two bodies.
    pub fn mixed_area(&self, other: &FourierBody) -> f64 {
        let tail: f64 = self
            .cos
            .iter()
            .zip(&self.sin)
            .zip(other.cos.iter().zip(&other.sin))
            .enumerate()
            .map(|(j, ((a, b), (c, d)))| {
                let k = (j + 1) as f64;
                (1.0 - k * k) * (a * c + b * d)
            })
            .sum();
        PI * self.a0 * other.a0 + 0.5 * PI * tail
    }

    pub fn perimeter(&self) -> f64 {
        TAU * self.a0
    }

    pub fn steiner_point(&self) -> P {
        match (self.cos.first(), self.sin.first()) {
            (Some(&a), Some(&b)) => P::new(a, b),
            _ => P::zeros(),
        }
    }

    /// Boundary points `h u + h' u⊥` on an `n`-point grid.
    pub fn boundary_points(&self, n: usize) -> Vec<P> {
        let h = self.samples_on(n);
        let dh = self.derivative_on(n);
        let g = AngleGrid::raw(n);
        g.angles()
            .zip(h.iter().zip(&dh))
            .map(|(t, (h, d))| {
                let (s, c) = t.sin_cos();
                P::new(h * c - d * s, h * s + d * c)
            })
            .collect()
    }

    pub fn translated(&self, t: &P) -> Result<Self> {
        let mut cos = self.cos.clone();
        let mut sin = self.sin.clone();
        if cos.is_empty() {
            cos.push(0.0);
            sin.push(0.0);
        }
        cos[0] += t.x;
        sin[0] += t.y;
        FourierBody::new(self.a0, cos, sin, self.grid)
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        FourierBody::new(
            self.a0 * c,
            self.cos.iter().map(|a| a * c).collect(),
            self.sin.iter().map(|b| b * c).collect(),
            self.grid,
        )
    }

    /// Largest odd-degree coefficient relative to `a0`.
    pub fn asymmetry(&self) -> f64 {
        self.cos
            .iter()
            .zip(&self.sin)
            .step_by(2)
            .map(|(a, b)| a.abs().max(b.abs()))
            .fold(0.0, f64::max)
            / self.a0.abs()
    }
}
