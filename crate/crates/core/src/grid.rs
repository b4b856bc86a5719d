//! Uniform angle grids on the circle and the real-Fourier transforms used
//! by the smooth-body code paths.

use std::f64::consts::TAU;

use nalgebra::Vector2;
use rustfft::{num_complex::Complex, FftPlanner};

use crate::error::{GeomError, Result};

/// Default number of samples on the circle.
pub const DEFAULT_SAMPLES: usize = 1024;

/// Uniform grid `θ_i = 2πi/n` on the unit circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AngleGrid {
    n: usize,
}

impl Default for AngleGrid {
    fn default() -> Self {
        AngleGrid {
            n: DEFAULT_SAMPLES,
        }
    }
}

impl AngleGrid {
    pub fn new(n: usize) -> Result<Self> {
        if n < 8 || !n.is_power_of_two() {
            return Err(GeomError::InvalidBody(format!(
                "grid size must be a power of two >= 8, got {n}"
            )));
        }
        Ok(AngleGrid { n })
    }

    /// Interchange grid with any `n >= 3` samples, for support vectors read
    /// from files or coarse hand-written examples. Working grids come from
    /// [`AngleGrid::new`].
    pub fn coarse(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(GeomError::InvalidBody(format!("grid needs >= 3 samples, got {n}")));
        }
        Ok(AngleGrid { n })
    }

    /// Grids built from raw sample counts (e.g. a support vector read from
    /// disk) only need `n >= 4`; the power-of-two rule applies to working grids.
    pub(crate) fn raw(n: usize) -> Self {
        AngleGrid { n }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Angular spacing `Δ = 2π/n`.
    pub fn step(&self) -> f64 {
        TAU / self.n as f64
    }

    pub fn angle(&self, i: usize) -> f64 {
        TAU * i as f64 / self.n as f64
    }

    pub fn angles(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |i| self.angle(i))
    }

    pub fn units(&self) -> Vec<Vector2<f64>> {
        self.angles().map(unit).collect()
    }

    /// Largest Fourier degree a body on this grid may carry.
    pub fn max_degree(&self) -> usize {
        self.n / 4
    }

    /// The same circle sampled `factor` times more densely.
    pub fn refined(&self, factor: usize) -> AngleGrid {
        AngleGrid {
            n: self.n * factor.max(1),
        }
    }
}

#[inline]
pub fn unit(theta: f64) -> Vector2<f64> {
    Vector2::new(theta.cos(), theta.sin())
}

#[inline]
pub fn cross(a: &Vector2<f64>, b: &Vector2<f64>) -> f64 {
    a.x * b.y - a.y * b.x
}

fn fft(buf: &mut [Complex<f64>], inverse: bool) {
    let mut planner = FftPlanner::<f64>::new();
    let plan = if inverse {
        planner.plan_fft_inverse(buf.len())
    } else {
        planner.plan_fft_forward(buf.len())
    };
    plan.process(buf);
}

/// Unnormalised forward DFT of real samples.
pub fn spectrum(values: &[f64]) -> Vec<Complex<f64>> {
    let mut buf: Vec<Complex<f64>> = values.iter().map(|&v| Complex::new(v, 0.0)).collect();
    fft(&mut buf, false);
    buf
}

/// Real Fourier coefficients `(a_0, a_k, b_k)` of uniformly sampled values,
/// truncated at degree `kmax`.
pub fn analyze(values: &[f64], kmax: usize) -> (f64, Vec<f64>, Vec<f64>) {
    let n = values.len();
    let spec = spectrum(values);
    let kmax = kmax.min(n / 2 - 1);
    let scale = 2.0 / n as f64;
    let a0 = spec[0].re / n as f64;
    let cos = (1..=kmax).map(|k| spec[k].re * scale).collect();
    let sin = (1..=kmax).map(|k| -spec[k].im * scale).collect();
    (a0, cos, sin)
}

/// Samples of `a0 + Σ a_k cos kθ + b_k sin kθ` on an `n`-point grid.
pub fn synthesize(a0: f64, cos: &[f64], sin: &[f64], n: usize) -> Vec<f64> {
    debug_assert_eq!(cos.len(), sin.len());
    assert!(cos.len() < n / 2, "degree {} too high for {n} samples", cos.len());
    let mut buf = vec![Complex::new(0.0, 0.0); n];
    buf[0] = Complex::new(a0, 0.0);
    for (j, (&a, &b)) in cos.iter().zip(sin).enumerate() {
        let k = j + 1;
        let c = Complex::new(0.5 * a, -0.5 * b);
        buf[k] = c;
        buf[n - k] = c.conj();
    }
    fft(&mut buf, true);
    buf.into_iter().map(|c| c.re).collect()
}

/// Fraction of the (non-constant) spectral energy carried by modes with
/// `k > cutoff`.
pub fn tail_energy(values: &[f64], cutoff: usize) -> f64 {
    let n = values.len();
    let spec = spectrum(values);
    let mut total = 0.0;
    let mut tail = 0.0;
    for (k, c) in spec.iter().enumerate().take(n / 2 + 1).skip(1) {
        let e = c.norm_sqr();
        total += e;
        if k > cutoff {
            tail += e;
        }
    }
    let total = total + spec[0].norm_sqr();
    if total == 0.0 {
        0.0
    } else {
        tail / total
    }
}

/// `(∫ v cos θ dθ, ∫ v sin θ dθ)` by the trapezoid rule.
pub fn first_harmonic(values: &[f64]) -> Vector2<f64> {
    let n = values.len();
    let grid = AngleGrid::raw(n);
    let mut acc = Vector2::zeros();
    for (i, &v) in values.iter().enumerate() {
        acc += unit(grid.angle(i)) * v;
    }
    acc * grid.step()
}
