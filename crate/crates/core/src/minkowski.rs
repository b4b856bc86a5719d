//! The planar Minkowski problem `h + h'' = f`, the Λ-body whose curvature
//! function is `(V(K)/V(K^s)) h_{K-s}^{-3}`, pinching bounds for
//! `h f^{1/3}` and the gap in Lutwak's inequality.

use serde::Serialize;

use crate::body::{Body, FourierBody, SupportVector, DEFAULT_ROUNDING};
use crate::error::{GeomError, Result};
use crate::grid::{self, AngleGrid};
use crate::santalo::{santalo_point, SantaloResult, DISK_AREA};

/// First harmonics of `f` allowed, relative to `∫f`.
pub const SOLVABILITY_TOL: f64 = 1e-8;

/// First harmonics of `f_Λ` allowed, relative to `∫f_Λ`.
pub const LAMBDA_CLOSURE_TOL: f64 = 1e-7;

/// Spectral energy of `f_Λ` allowed above `n/3`.
pub const TAIL_TOL: f64 = 1e-10;

/// Prescribed curvature samples on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct MinkowskiData {
    grid: AngleGrid,
    f_values: Vec<f64>,
}

impl MinkowskiData {
    pub fn new(grid: AngleGrid, f_values: Vec<f64>) -> Result<Self> {
        if f_values.len() != grid.len() {
            return Err(GeomError::InvalidBody(format!(
                "{} curvature samples for a grid of {}",
                f_values.len(),
                grid.len()
            )));
        }
        if let Some((i, &v)) = f_values.iter().enumerate().find(|(_, v)| !(**v > 0.0) || !v.is_finite()) {
            return Err(GeomError::ConvexityViolation { index: i, value: v });
        }
        Ok(MinkowskiData { grid, f_values })
    }

    pub fn from_fn(grid: AngleGrid, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = grid.angles().map(f).collect();
        MinkowskiData::new(grid, values)
    }

    pub fn grid(&self) -> AngleGrid {
        self.grid
    }

    pub fn f_values(&self) -> &[f64] {
        &self.f_values
    }

    pub fn total(&self) -> f64 {
        self.f_values.iter().sum::<f64>() * self.grid.step()
    }

    /// `max(|∫f cos θ|, |∫f sin θ|) / ∫f`.
    pub fn closure_defect(&self) -> f64 {
        let m = grid::first_harmonic(&self.f_values);
        m.x.abs().max(m.y.abs()) / self.total()
    }

    fn check_closure(&self, tol: f64) -> Result<()> {
        let d = self.closure_defect();
        if d > tol {
            return Err(GeomError::SolvabilityViolation(d));
        }
        Ok(())
    }

    /// Coefficients of the solution up to degree `kmax`, with the first
    /// harmonics set to zero.
    fn solution_coeffs(&self, kmax: usize) -> (f64, Vec<f64>, Vec<f64>) {
        let (a0, mut cos, mut sin) = grid::analyze(&self.f_values, kmax);
        for (j, (a, b)) in cos.iter_mut().zip(sin.iter_mut()).enumerate() {
            let k = (j + 1) as f64;
            if j == 0 {
                *a = 0.0;
                *b = 0.0;
            } else {
                *a /= 1.0 - k * k;
                *b /= 1.0 - k * k;
            }
        }
        (a0, cos, sin)
    }
}

/// Spectral solution of `h + h'' = f` on the data grid. The translation
/// freedom is fixed by putting the Steiner point at the origin.
pub fn solve_minkowski(data: &MinkowskiData) -> Result<SupportVector> {
    data.check_closure(SOLVABILITY_TOL)?;
    let n = data.grid.len();
    let (a0, cos, sin) = data.solution_coeffs(n / 2 - 1);
    let h = grid::synthesize(a0, &cos, &sin, n);
    SupportVector::new(data.grid, h).map_err(|e| GeomError::NonConvexSolution(e.to_string()))
}

/// `‖(h + h'') - f‖∞`, with `h''` taken spectrally.
pub fn minkowski_residual(h: &[f64], f: &[f64]) -> f64 {
    let n = h.len();
    let (a0, mut cos, mut sin) = grid::analyze(h, n / 2 - 1);
    for (j, (a, b)) in cos.iter_mut().zip(sin.iter_mut()).enumerate() {
        let k = (j + 1) as f64;
        *a *= 1.0 - k * k;
        *b *= 1.0 - k * k;
    }
    grid::synthesize(a0, &cos, &sin, n)
        .iter()
        .zip(f)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
}

/// Everything computed on the way to `ΛK`.
#[derive(Debug, Clone)]
pub struct LambdaBody {
    /// `ΛK`, with its Steiner point at the origin.
    pub body: FourierBody,
    /// The smooth body `Λ` was applied to: `K` or its smoothing, translated
    /// so that its centroid is at the origin.
    pub source: FourierBody,
    pub santalo: SantaloResult,
    /// `f_Λ` on the grid.
    pub curvature: Vec<f64>,
    pub mollified: bool,
}

/// `Λ` with full diagnostics. Polygonal bodies are smoothed on their working
/// grid first.
pub fn lambda_transform(body: &Body) -> Result<LambdaBody> {
    let grid = body.working_grid();
    let mollified = body.as_fourier().is_none();
    // Λ does not see translations; centring keeps the origin interior.
    let shift = body.centroid()?;
    let centred = body.translated(&-shift)?;
    let source = centred.smoothed(&grid, DEFAULT_ROUNDING)?;
    let smooth = Body::from(source.clone());
    let mut santalo = santalo_point(&smooth)?;
    let g = source.grid();
    let scale = source.area() / santalo.polar_area;
    let f: Vec<f64> = source
        .samples()
        .iter()
        .zip(g.units())
        .map(|(h, u)| scale * (h - santalo.point.dot(&u)).powi(-3))
        .collect();
    let tail = grid::tail_energy(&f, g.len() / 3);
    if tail > TAIL_TOL {
        return Err(GeomError::SpectralTail(tail));
    }
    let data = MinkowskiData::new(g, f)?;
    data.check_closure(LAMBDA_CLOSURE_TOL)?;
    let (a0, cos, sin) = data.solution_coeffs(g.max_degree());
    let lam = FourierBody::new(a0, cos, sin, g).map_err(|e| GeomError::NonConvexSolution(e.to_string()))?;
    santalo.point += shift;
    Ok(LambdaBody {
        body: lam,
        source,
        santalo,
        curvature: data.f_values,
        mollified,
    })
}

pub fn lambda_body(body: &Body) -> Result<Body> {
    let lam = lambda_transform(body)?.body;
    Ok(match body.label() {
        Some(l) => Body::from(lam).with_label(format!("lambda({l})")),
        None => lam.into(),
    })
}

/// Bounds `m <= h f^{1/3} <= M` on the body's grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PinchBounds {
    pub m: f64,
    #[serde(rename = "M")]
    pub big_m: f64,
}

impl PinchBounds {
    /// `(M/m)^{3/2}`, the area ratio of the enclosing and enclosed ellipses.
    pub fn ellipse_ratio(&self) -> f64 {
        (self.big_m / self.m).powf(1.5)
    }
}

pub fn pinch_bounds(body: &FourierBody) -> Result<PinchBounds> {
    let f = body.curvature_samples(&body.grid())?;
    let h = body.samples();
    if h.iter().any(|&v| v <= 0.0) {
        return Err(GeomError::OriginNotInterior);
    }
    let prod = h.iter().zip(&f).map(|(h, f)| h * f.cbrt());
    let (m, big_m) = prod.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    Ok(PinchBounds { m, big_m })
}

/// `π² V(ΛK)/V(K) - V(K)V(K^s)`. Polygonal bodies enter through their
/// smoothing on both sides.
pub fn lutwak_gap(body: &Body) -> Result<f64> {
    let lam = lambda_transform(body)?;
    let v = lam.source.area();
    Ok(DISK_AREA * DISK_AREA * lam.body.area() / v - v * lam.santalo.polar_area)
}
