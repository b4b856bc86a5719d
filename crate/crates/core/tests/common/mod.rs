#![allow(dead_code)]

use std::f64::consts::PI;

use nalgebra::{Matrix2, Vector2};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use planar_santalo::lab::random_polygon;
use planar_santalo::{AffineMap, AngleGrid, Body, FourierBody, Polygon};

pub fn square() -> Body {
    Polygon::from_xy(&[(-1.0, -1.0), (1.0, -1.0), (1.0, 1.0), (-1.0, 1.0)]).unwrap().into()
}

pub fn triangle() -> Body {
    Polygon::from_xy(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]).unwrap().into()
}

/// Well-conditioned random linear map with determinant in `[0.5, 2]`.
pub fn random_linear(rng: &mut ChaCha8Rng) -> Matrix2<f64> {
    let (s, c) = rng.gen_range(0.0..PI).sin_cos();
    let rot = Matrix2::new(c, -s, s, c);
    let stretch = Matrix2::new(rng.gen_range(0.6..1.6), rng.gen_range(-0.4..0.4), 0.0, rng.gen_range(0.6..1.6));
    rot * stretch
}

pub fn random_affine(rng: &mut ChaCha8Rng) -> AffineMap {
    let t = Vector2::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5));
    AffineMap::new(random_linear(rng), t).unwrap()
}

/// Hull of `k` random points and their reflections.
pub fn random_symmetric_polygon(rng: &mut ChaCha8Rng) -> Body {
    let k = rng.gen_range(2..7);
    let mut pts = Vec::with_capacity(2 * k);
    for i in 0..k {
        let t = (i as f64 + rng.gen_range(0.1..0.9)) * PI / k as f64;
        let r = rng.gen_range(0.4..1.4);
        let p = Vector2::new(r * t.cos(), r * t.sin());
        pts.push(p);
        pts.push(-p);
    }
    Polygon::from_points(&pts).unwrap().into()
}

/// `h = 1 + Σ (a_k cos kθ + b_k sin kθ)` with strictly positive curvature.
pub fn random_fourier(rng: &mut ChaCha8Rng, symmetric: bool, grid: AngleGrid) -> Body {
    let degree = 6;
    let budget = rng.gen_range(0.05..0.8);
    let mut cos = vec![0.0; degree];
    let mut sin = vec![0.0; degree];
    let mut weights = Vec::new();
    for k in 2..=degree {
        if symmetric && k % 2 == 1 {
            continue;
        }
        weights.push((k, rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    }
    let total: f64 = weights
        .iter()
        .map(|(k, a, b): &(usize, f64, f64)| ((k * k - 1) as f64) * (a.abs() + b.abs()))
        .sum();
    for (k, a, b) in weights {
        cos[k - 1] = a * budget / total;
        sin[k - 1] = b * budget / total;
    }
    FourierBody::new(1.0, cos, sin, grid).unwrap().into()
}

pub fn random_symmetric_body(rng: &mut ChaCha8Rng) -> Body {
    if rng.gen_bool(0.5) {
        random_symmetric_polygon(rng)
    } else {
        let b = random_fourier(rng, true, AngleGrid::default());
        b.affine_image(&AffineMap::linear(random_linear(rng)).unwrap()).unwrap()
    }
}

/// A random polygon, symmetric polygon or smooth body, moved by a random
/// affine map.
pub fn random_body(rng: &mut ChaCha8Rng) -> Body {
    let b = match rng.gen_range(0..3) {
        0 => {
            let v = rng.gen_range(3..10);
            random_polygon(v, rng).unwrap().into()
        }
        1 => random_symmetric_polygon(rng),
        _ => random_fourier(rng, false, AngleGrid::default()),
    };
    let lin = b.affine_image(&AffineMap::linear(random_linear(rng)).unwrap()).unwrap();
    // Keep the origin well inside the image.
    let inner = lin.sample_support(&AngleGrid::default()).into_iter().fold(f64::INFINITY, f64::min);
    let t = Vector2::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5)) * inner;
    lin.translated(&t).unwrap()
}
