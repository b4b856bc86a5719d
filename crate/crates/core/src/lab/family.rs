use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::body::{Body, FourierBody, Polygon};
use crate::error::{GeomError, Result};
use crate::grid::AngleGrid;

/// A parametrised family of test bodies.
///
/// Text forms, as accepted by `--family`:
///
/// ```text
/// mode:K:T                 h = 1 + T cos Kθ
/// mode:K:T0:T1:COUNT       COUNT amplitudes spaced geometrically in [T0, T1]
/// polygon:V:COUNT          random convex V-gons inscribed in the unit circle
/// ngon:N:S0:S1:COUNT       (1 - s)·disk + s·(smoothed regular N-gon)
/// ellipse:A0:A1:COUNT      ellipses with semi-axes (a, 1/a)
/// ```
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilySpec {
    Mode { k: usize, amplitudes: Vec<f64> },
    Polygon { vertices: usize, count: usize },
    Ngon { n: usize, weights: Vec<f64> },
    Ellipse { aspects: Vec<f64> },
}

/// One member of a family, with its id and the parameter that generated it.
#[derive(Debug, Clone)]
pub struct Member {
    pub id: String,
    pub param: f64,
    pub body: Body,
}

fn geometric(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..count)
            .map(|i| lo * (hi / lo).powf(i as f64 / (count - 1) as f64))
            .collect(),
    }
}

fn linear(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..count)
            .map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
            .collect(),
    }
}

fn field<T: FromStr>(parts: &[&str], i: usize, what: &str) -> Result<T> {
    parts
        .get(i)
        .ok_or_else(|| GeomError::Parse(format!("family spec is missing {what}")))?
        .parse()
        .map_err(|_| GeomError::Parse(format!("cannot parse {what} from {:?}", parts[i])))
}

impl FromStr for FamilySpec {
    type Err = GeomError;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let spec = match (parts[0], parts.len()) {
            ("mode", 3) => FamilySpec::Mode {
                k: field(&parts, 1, "mode number")?,
                amplitudes: vec![field(&parts, 2, "amplitude")?],
            },
            ("mode", 5) => {
                let (t0, t1): (f64, f64) = (field(&parts, 2, "T0")?, field(&parts, 3, "T1")?);
                if !(t0 > 0.0 && t1 >= t0) {
                    return Err(GeomError::Parse("mode family needs 0 < T0 <= T1".into()));
                }
                FamilySpec::Mode {
                    k: field(&parts, 1, "mode number")?,
                    amplitudes: geometric(t0, t1, field(&parts, 4, "count")?),
                }
            }
            ("polygon", 3) => FamilySpec::Polygon {
                vertices: field(&parts, 1, "vertex count")?,
                count: field(&parts, 2, "count")?,
            },
            ("ngon", 5) => FamilySpec::Ngon {
                n: field(&parts, 1, "N")?,
                weights: linear(field(&parts, 2, "S0")?, field(&parts, 3, "S1")?, field(&parts, 4, "count")?),
            },
            ("ellipse", 4) => FamilySpec::Ellipse {
                aspects: geometric(field(&parts, 1, "A0")?, field(&parts, 2, "A1")?, field(&parts, 3, "count")?),
            },
            _ => return Err(GeomError::Parse(format!("unknown family spec {s:?}"))),
        };
        Ok(spec)
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::Mode { k, amplitudes } => write!(f, "mode{k}[{}]", amplitudes.len()),
            FamilySpec::Polygon { vertices, count } => write!(f, "polygon{vertices}[{count}]"),
            FamilySpec::Ngon { n, weights } => write!(f, "ngon{n}[{}]", weights.len()),
            FamilySpec::Ellipse { aspects } => write!(f, "ellipse[{}]", aspects.len()),
        }
    }
}

/// Origin-symmetric test families: even Fourier modes, smoothed even
/// n-gons blended with the disk, and ellipses.
pub const SYMMETRIC_CORPUS: &[&str] = &[
    "mode:2:0.02:0.05:4",
    "mode:4:0.002:0.02:6",
    "mode:6:0.001:0.02:5",
    "ngon:4:0.02:0.2:5",
    "ngon:6:0.05:0.5:5",
    "ellipse:1.0:3.0:3",
];

/// Families without a center of symmetry.
pub const GENERAL_CORPUS: &[&str] = &["mode:3:0.005:0.05:6", "polygon:3:6"];

pub fn corpus(specs: &[&str]) -> Vec<FamilySpec> {
    specs.iter().map(|s| s.parse().expect("corpus specs are well formed")).collect()
}

/// Convex polygon with `v` vertices at random angles on the unit circle.
pub fn random_polygon(v: usize, rng: &mut ChaCha8Rng) -> Result<Polygon> {
    if v < 3 {
        return Err(GeomError::InvalidBody(format!("polygon needs >= 3 vertices, got {v}")));
    }
    loop {
        let mut angles: Vec<f64> = (0..v).map(|_| rng.gen_range(0.0..TAU)).collect();
        angles.sort_by(f64::total_cmp);
        // Reject draws that leave a gap of half the circle or more: the
        // origin would not be interior.
        let max_gap = (0..v)
            .map(|i| {
                let next = if i + 1 < v { angles[i + 1] } else { angles[0] + TAU };
                next - angles[i]
            })
            .fold(0.0, f64::max);
        if max_gap >= 0.95 * std::f64::consts::PI {
            continue;
        }
        let pts: Vec<_> = angles.iter().map(|&t| crate::grid::unit(t)).collect();
        if let Ok(p) = Polygon::new(pts) {
            return Ok(p);
        }
    }
}

impl FamilySpec {
    pub fn is_symmetric(&self) -> bool {
        match self {
            FamilySpec::Mode { k, .. } => k % 2 == 0,
            FamilySpec::Polygon { .. } => false,
            FamilySpec::Ngon { n, .. } => n % 2 == 0,
            FamilySpec::Ellipse { .. } => true,
        }
    }

    /// Members of the family; deterministic given `seed`.
    pub fn generate(&self, grid: AngleGrid, seed: u64) -> Result<Vec<Member>> {
        let tag = self.to_string();
        let tag = &tag[..tag.find('[').unwrap_or(tag.len())];
        let id = |i: usize| format!("{tag}-{i:04}");
        match self {
            FamilySpec::Mode { k, amplitudes } => amplitudes
                .iter()
                .enumerate()
                .map(|(i, &t)| {
                    Ok(Member {
                        id: id(i),
                        param: t,
                        body: Body::from(FourierBody::mode(*k, t, grid)?).with_label(id(i)),
                    })
                })
                .collect(),
            FamilySpec::Polygon { vertices, count } => (0..*count)
                .map(|i| {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream(i as u64);
                    let p = random_polygon(*vertices, &mut rng)?;
                    Ok(Member {
                        id: id(i),
                        param: i as f64,
                        body: Body::from(p).with_label(id(i)),
                    })
                })
                .collect(),
            FamilySpec::Ngon { n, weights } => {
                let ngon = Polygon::regular(*n, 1.0, 0.0)?;
                let smooth = FourierBody::smoothed_polygon(&ngon, grid, crate::body::DEFAULT_ROUNDING)?;
                weights
                    .iter()
                    .enumerate()
                    .map(|(i, &s)| {
                        let disk = 1.0 - s;
                        let cos = smooth.cos_coeffs().iter().map(|c| c * s).collect();
                        let sin = smooth.sin_coeffs().iter().map(|c| c * s).collect();
                        let f = FourierBody::new(disk + s * smooth.a0(), cos, sin, grid)?;
                        Ok(Member {
                            id: id(i),
                            param: s,
                            body: Body::from(f).with_label(id(i)),
                        })
                    })
                    .collect()
            }
            FamilySpec::Ellipse { aspects } => aspects
                .iter()
                .enumerate()
                .map(|(i, &a)| {
                    Ok(Member {
                        id: id(i),
                        param: a,
                        body: Body::ellipse(a, 1.0 / a, grid)?.with_label(id(i)),
                    })
                })
                .collect(),
        }
    }
}
