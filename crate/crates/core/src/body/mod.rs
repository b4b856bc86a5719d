//! Planar convex bodies and their basic functionals.
//!
//! A [`Body`] is one of three representations:
//!
//! * [`Polygon`]: exact vertices, every functional is computed in closed form;
//! * [`SupportVector`]: support values on a uniform grid, standing for the
//!   circumscribed polygon they define;
//! * [`FourierBody`]: band-limited support function, integrated spectrally.
//!
//! Polygonal inputs never go through quadrature, which is what makes the
//! square and triangle ground truths reproducible to round-off.

mod fourier;
pub(crate) mod hull;
pub mod io;
mod polygon;
mod support;

use nalgebra::{Matrix2, Vector2};
use serde::Serialize;

pub use fourier::FourierBody;
pub use polygon::{Edge, Polygon};
pub(crate) use polygon::support_sweep as polygon_support_sweep;
pub use support::{SupportVector, CONVEXITY_TOL};

use crate::error::{GeomError, Result};
use crate::grid::{unit, AngleGrid};

type P = Vector2<f64>;

/// Tolerance on `|h(θ) - h(θ+π)| / max h` for a body to count as origin-symmetric.
pub const SYMMETRY_TOL: f64 = 1e-9;

/// Relative rounding used when a polygon has to be replaced by a smooth body.
pub const DEFAULT_ROUNDING: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    Polygon(Polygon),
    Support(SupportVector),
    Fourier(FourierBody),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Body {
    shape: Shape,
    label: Option<String>,
}

impl From<Polygon> for Body {
    fn from(p: Polygon) -> Self {
        Body::new(Shape::Polygon(p))
    }
}

impl From<SupportVector> for Body {
    fn from(s: SupportVector) -> Self {
        Body::new(Shape::Support(s))
    }
}

impl From<FourierBody> for Body {
    fn from(f: FourierBody) -> Self {
        Body::new(Shape::Fourier(f))
    }
}

/// Invertible affine map `x ↦ m x + t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AffineMap {
    pub m: Matrix2<f64>,
    pub t: P,
}

impl AffineMap {
    pub fn new(m: Matrix2<f64>, t: P) -> Result<Self> {
        let det = m.determinant();
        if !det.is_finite() || det.abs() < 1e-300 || !t.x.is_finite() || !t.y.is_finite() {
            return Err(GeomError::SingularMap(det));
        }
        Ok(AffineMap { m, t })
    }

    pub fn identity() -> Self {
        AffineMap {
            m: Matrix2::identity(),
            t: P::zeros(),
        }
    }

    pub fn linear(m: Matrix2<f64>) -> Result<Self> {
        AffineMap::new(m, P::zeros())
    }

    pub fn translation(t: P) -> Self {
        AffineMap {
            m: Matrix2::identity(),
            t,
        }
    }

    pub fn rotation(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        AffineMap {
            m: Matrix2::new(c, -s, s, c),
            t: P::zeros(),
        }
    }

    pub fn det(&self) -> f64 {
        self.m.determinant()
    }

    pub fn apply(&self, x: &P) -> P {
        self.m * x + self.t
    }

    pub fn inverse(&self) -> Self {
        let mi = self.m.try_inverse().expect("AffineMap invariant: det != 0");
        AffineMap {
            m: mi,
            t: -(mi * self.t),
        }
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &AffineMap) -> Self {
        AffineMap {
            m: other.m * self.m,
            t: other.m * self.t + other.t,
        }
    }
}

/// Atomic measure on the circle: `(normal angle, weight)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceMeasure {
    pub atoms: Vec<(f64, f64)>,
}

impl SurfaceMeasure {
    pub fn total(&self) -> f64 {
        self.atoms.iter().map(|a| a.1).sum()
    }

    /// `|Σ w u(θ)| / Σ w`, zero for a closed convex curve.
    pub fn closure_defect(&self) -> f64 {
        let s: P = self.atoms.iter().map(|&(t, w)| unit(t) * w).sum();
        s.norm() / self.total()
    }

    /// `½ Σ h(θ) w`.
    pub fn pair_with<F: Fn(f64) -> f64>(&self, h: F) -> f64 {
        0.5 * self.atoms.iter().map(|&(t, w)| h(t) * w).sum::<f64>()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BodyStats {
    pub area: f64,
    pub perimeter: f64,
    /// `D(K) = 2 max h`.
    pub d_groemer: f64,
    pub h_min: f64,
    pub h_max: f64,
}

impl Body {
    pub fn new(shape: Shape) -> Self {
        Body { shape, label: None }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    fn relabel(&self, shape: Shape) -> Body {
        Body {
            shape,
            label: self.label.clone(),
        }
    }

    pub fn disk(radius: f64) -> Body {
        FourierBody::disk(radius, AngleGrid::default())
            .expect("disk of positive radius")
            .into()
    }

    /// Ellipse with semi-axes `a` along x and `b` along y, centred at the origin.
    pub fn ellipse(a: f64, b: f64, grid: AngleGrid) -> Result<Body> {
        let disk: Body = FourierBody::disk(1.0, grid)?.into();
        disk.affine_image(&AffineMap::linear(Matrix2::new(a, 0.0, 0.0, b))?)
    }

    pub fn is_polygonal(&self) -> bool {
        !matches!(self.shape, Shape::Fourier(_))
    }

    pub fn as_fourier(&self) -> Option<&FourierBody> {
        match &self.shape {
            Shape::Fourier(f) => Some(f),
            _ => None,
        }
    }

    pub fn as_polygon(&self) -> Option<&Polygon> {
        match &self.shape {
            Shape::Polygon(p) => Some(p),
            _ => None,
        }
    }

    /// The grid quadratures on this body run on.
    pub fn working_grid(&self) -> AngleGrid {
        match &self.shape {
            Shape::Polygon(_) => AngleGrid::default(),
            Shape::Support(s) => s.grid(),
            Shape::Fourier(f) => f.grid(),
        }
    }

    /// `h_K(cos θ, sin θ)`.
    pub fn support(&self, theta: f64) -> f64 {
        match &self.shape {
            Shape::Fourier(f) => f.eval(theta),
            _ => self.support_dir(&unit(theta)),
        }
    }

    /// One-homogeneous support function at an arbitrary vector.
    pub fn support_dir(&self, x: &P) -> f64 {
        match &self.shape {
            Shape::Polygon(p) => p.support(x),
            Shape::Support(s) => s.support(x),
            Shape::Fourier(f) => f.eval_vec(x),
        }
    }

    pub fn sample_support(&self, grid: &AngleGrid) -> Vec<f64> {
        match &self.shape {
            Shape::Polygon(p) => p.sample_support(grid),
            Shape::Support(s) if s.grid() == *grid => s.values().to_vec(),
            Shape::Support(s) => polygon::support_sweep(&s.corner_points(), &grid.units()),
            Shape::Fourier(f) if f.degree() < grid.len() / 2 => f.samples_on(grid.len()),
            Shape::Fourier(f) => grid.angles().map(|t| f.eval(t)).collect(),
        }
    }

    pub fn to_support_vector(&self, grid: &AngleGrid) -> Result<SupportVector> {
        SupportVector::new(*grid, self.sample_support(grid))
    }

    /// Exact polygon for polygonal bodies; inscribed polygon through the
    /// boundary points on the working grid for smooth bodies.
    pub fn polygonize(&self) -> Result<Polygon> {
        match &self.shape {
            Shape::Polygon(p) => Ok(p.clone()),
            Shape::Support(s) => s.to_polygon(),
            Shape::Fourier(f) => Polygon::from_points(&f.boundary_points(f.grid().len())),
        }
    }

    /// Smooth stand-in: Fourier bodies are returned as they are, polygonal
    /// bodies are smoothed on `grid`.
    pub fn smoothed(&self, grid: &AngleGrid, rounding: f64) -> Result<FourierBody> {
        match &self.shape {
            Shape::Fourier(f) => Ok(f.clone()),
            _ => FourierBody::smoothed_polygon(&self.polygonize()?, *grid, rounding),
        }
    }

    pub fn area(&self) -> f64 {
        match &self.shape {
            Shape::Polygon(p) => p.area(),
            Shape::Support(s) => s.area(),
            Shape::Fourier(f) => f.area(),
        }
    }

    pub fn centroid(&self) -> Result<P> {
        Ok(self.polygonize()?.centroid())
    }

    pub fn surface_measure(&self) -> SurfaceMeasure {
        let atoms = match &self.shape {
            Shape::Polygon(p) => p.measure_atoms(),
            Shape::Support(s) => s.measure_atoms(),
            Shape::Fourier(f) => {
                let g = f.grid();
                let step = g.step();
                let fvals = f
                    .curvature_samples(&g)
                    .expect("FourierBody invariant: positive curvature");
                g.angles().zip(fvals).map(|(t, v)| (t, v * step)).collect()
            }
        };
        SurfaceMeasure { atoms }
    }

    /// Mixed area `V(K, L) = ½ ∫ h_L dS_K`.
    ///
    /// Two smooth bodies use the closed coefficient form. When a polygonal
    /// body is involved its exact measure is paired with the other support
    /// function; two polygonal bodies average both orders.
    pub fn mixed_area(&self, other: &Body) -> f64 {
        match (&self.shape, &other.shape) {
            (Shape::Fourier(a), Shape::Fourier(b)) => a.mixed_area(b),
            (Shape::Fourier(_), _) => other.mixed_area_one_sided(self),
            (_, Shape::Fourier(_)) => self.mixed_area_one_sided(other),
            _ => 0.5 * (self.mixed_area_one_sided(other) + other.mixed_area_one_sided(self)),
        }
    }

    /// `½ Σ_atoms h_other(θ) w` over this body's surface measure.
    pub fn mixed_area_one_sided(&self, other: &Body) -> f64 {
        self.surface_measure().pair_with(|t| other.support(t))
    }

    /// Area of `(K - x)^*`: exact for polygonal bodies, `½∫(h - <x,u>)^{-2}` for
    /// smooth ones.
    pub fn polar_area_about(&self, x: &P) -> Result<f64> {
        match &self.shape {
            Shape::Fourier(f) => {
                let g = f.grid();
                let h = f.samples();
                let mut acc = 0.0;
                for (hi, u) in h.iter().zip(g.units()) {
                    let gap = hi - x.dot(&u);
                    if gap <= 0.0 {
                        return Err(GeomError::OriginNotInterior);
                    }
                    acc += gap.powi(-2);
                }
                Ok(0.5 * acc * g.step())
            }
            _ => {
                let p = self.polygonize()?.translated(&-x);
                Ok(p.polar()?.area())
            }
        }
    }

    pub fn polar_area(&self) -> Result<f64> {
        self.polar_area_about(&P::zeros())
    }

    /// Polar body. Polygons are dualised exactly; smooth bodies return the
    /// polygon through `u_i / h(θ_i)` on their grid.
    pub fn polar(&self) -> Result<Body> {
        let poly = match &self.shape {
            Shape::Polygon(p) => p.polar()?,
            Shape::Support(s) => polar_points(s.values(), &s.grid())?,
            Shape::Fourier(f) => polar_points(&f.samples(), &f.grid())?,
        };
        Ok(self.relabel(Shape::Polygon(poly)))
    }

    pub fn affine_image(&self, map: &AffineMap) -> Result<Body> {
        let map = AffineMap::new(map.m, map.t)?;
        let mt = map.m.transpose();
        let shape = match &self.shape {
            Shape::Polygon(p) => Shape::Polygon(p.map(&map.m, &map.t)?),
            Shape::Support(s) => {
                let image = s.to_polygon()?.map(&map.m, &map.t)?;
                Shape::Support(SupportVector::new(s.grid(), image.sample_support(&s.grid()))?)
            }
            Shape::Fourier(f) => {
                let g = f.grid();
                let values: Vec<f64> = g
                    .units()
                    .iter()
                    .map(|u| f.eval_vec(&(mt * u)) + map.t.dot(u))
                    .collect();
                Shape::Fourier(FourierBody::from_samples(&values, g)?)
            }
        };
        Ok(self.relabel(shape))
    }

    pub fn translated(&self, t: &P) -> Result<Body> {
        match &self.shape {
            Shape::Fourier(f) => Ok(self.relabel(Shape::Fourier(f.translated(t)?))),
            _ => self.affine_image(&AffineMap::translation(*t)),
        }
    }

    pub fn scaled(&self, c: f64) -> Result<Body> {
        match &self.shape {
            Shape::Fourier(f) => Ok(self.relabel(Shape::Fourier(f.scaled(c)?))),
            _ => self.affine_image(&AffineMap::linear(Matrix2::identity() * c)?),
        }
    }

    /// `max_θ |h(θ) - h(θ+π)| / max_θ |h|` on the working grid.
    pub fn symmetry_defect(&self) -> f64 {
        let g = self.working_grid();
        let h = self.sample_support(&g);
        let n = h.len();
        let scale = h.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let d = (0..n / 2).map(|i| (h[i] - h[i + n / 2]).abs()).fold(0.0, f64::max);
        d / scale
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetry_defect() <= SYMMETRY_TOL
    }

    pub fn stats(&self) -> BodyStats {
        let area = self.area();
        let perimeter = self.surface_measure().total();
        let (h_min, h_max) = match &self.shape {
            Shape::Polygon(p) => {
                let h_max = p.vertices().iter().map(|v| v.norm()).fold(0.0, f64::max);
                let offsets = p.edges().iter().map(|e| e.offset).fold(f64::INFINITY, f64::min);
                let scan = p
                    .sample_support(&AngleGrid::default())
                    .into_iter()
                    .fold(f64::INFINITY, f64::min);
                (offsets.min(scan), h_max)
            }
            Shape::Support(s) => {
                let h_max = s.corner_points().iter().map(|v| v.norm()).fold(0.0, f64::max);
                let h_min = s.values().iter().copied().fold(f64::INFINITY, f64::min);
                (h_min, h_max)
            }
            Shape::Fourier(f) => {
                let h = f.samples();
                (
                    h.iter().copied().fold(f64::INFINITY, f64::min),
                    h.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                )
            }
        };
        BodyStats {
            area,
            perimeter,
            d_groemer: 2.0 * h_max,
            h_min,
            h_max,
        }
    }
}

fn polar_points(h: &[f64], grid: &AngleGrid) -> Result<Polygon> {
    if h.iter().any(|&v| v <= 0.0) {
        return Err(GeomError::OriginNotInterior);
    }
    let pts: Vec<P> = h.iter().zip(grid.units()).map(|(v, u)| u / *v).collect();
    Polygon::from_points(&pts)
}
