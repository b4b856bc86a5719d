use std::f64::consts::{PI, SQRT_2};

use serde::Serialize;

use crate::affine::{bm_distance_disk_with, bm_distance_pair_with, john_position, BmOptions};
use crate::body::{Body, DEFAULT_ROUNDING};
use crate::error::{GeomError, Result};
use crate::minkowski::lambda_transform;
use crate::santalo::santalo_deficit;

/// Allowed violation of a chain inequality, relative to `max(1, |rhs|)`.
pub const CHAIN_TOL: f64 = 1e-9;

/// The numerical constants of the stability argument.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChainConstants {
    /// `32/π` in the scaled pointwise bound.
    pub groemer: f64,
    /// `64` in the pointwise bound on `h_ΛK / h_K`.
    pub pointwise: f64,
    /// `2^{25/6}` in the pinching oscillation bound.
    pub pinch: f64,
    /// `8 = sqrt(64)` in the ratio bound behind `d(K, ΛK)`.
    pub ratio: f64,
}

impl Default for ChainConstants {
    fn default() -> Self {
        ChainConstants {
            groemer: 32.0 / PI,
            pointwise: 64.0,
            pinch: 2f64.powf(25.0 / 6.0),
            ratio: 8.0,
        }
    }
}

impl ChainConstants {
    /// Overrides one constant from a `name=value` pair.
    pub fn set(&mut self, assignment: &str) -> Result<()> {
        let (name, value) = assignment
            .split_once('=')
            .ok_or_else(|| GeomError::Parse(format!("expected name=value, got {assignment:?}")))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| GeomError::Parse(format!("bad constant value {value:?}")))?;
        let slot = match name.trim() {
            "groemer" => &mut self.groemer,
            "pointwise" => &mut self.pointwise,
            "pinch" => &mut self.pinch,
            "ratio" => &mut self.ratio,
            other => return Err(GeomError::Parse(format!("unknown chain constant {other:?}"))),
        };
        *slot = value;
        Ok(())
    }

    /// Right side of the bound on `d(ΛK, B)`; infinite once the
    /// denominator is no longer positive.
    pub fn bm1_bound(&self, eps: f64) -> f64 {
        let c = self.pinch * eps.sqrt() * (1.0 + eps).powf(2.0 / 3.0);
        if c < 1.0 {
            ((1.0 + c) / (1.0 - c)).powf(1.5)
        } else {
            f64::INFINITY
        }
    }

    /// Right side of the bound on `d(K, ΛK)`.
    pub fn bm2_bound(&self, eps: f64) -> f64 {
        let r = self.ratio * eps.sqrt();
        let den = 1.0 / (1.0 + eps).sqrt() - r;
        if den > 0.0 {
            (1.0 + r) / den
        } else {
            f64::INFINITY
        }
    }
}

/// One inequality `lhs <= rhs` of the chain.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainCheck {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs`.
    pub slack: f64,
    pub holds: bool,
}

impl ChainCheck {
    fn new(name: &str, lhs: f64, rhs: f64) -> Self {
        let slack = rhs - lhs;
        ChainCheck {
            name: name.to_string(),
            lhs,
            rhs,
            slack,
            holds: slack >= -CHAIN_TOL * rhs.abs().max(1.0) || rhs == f64::INFINITY,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainReport {
    /// The input was polygonal and was smoothed before the chain was run.
    pub mollified: bool,
    pub epsilon: f64,
    pub john_h_min: f64,
    pub john_h_max: f64,
    /// `V(ΛK) / V(K)`.
    pub area_ratio: f64,
    /// `V(K,ΛK)² / (V(ΛK)V(K)) - 1`.
    pub mixed_excess: f64,
    /// `max |h_K / sqrt(V(K)) - h_ΛK / sqrt(V(ΛK))|`.
    pub groemer_deviation: f64,
    /// `max |sqrt(V(ΛK)/V(K)) - h_ΛK / h_K|`.
    pub max_deviation: f64,
    pub pinch_min: f64,
    pub pinch_max: f64,
    pub bm_lambda_disk: f64,
    pub bm_body_lambda: f64,
    pub bm_body_disk: f64,
    pub constants: ChainConstants,
    pub checks: Vec<ChainCheck>,
}

impl ChainReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn failures(&self) -> Vec<&ChainCheck> {
        self.checks.iter().filter(|c| !c.holds).collect()
    }
}

pub fn verify_proof_chain(body: &Body) -> Result<ChainReport> {
    verify_proof_chain_with(body, &ChainConstants::default(), &BmOptions::default())
}

/// Runs the chain on `body` after moving it to John position. Polygonal
/// input is smoothed first and the report says so.
pub fn verify_proof_chain_with(body: &Body, constants: &ChainConstants, bm: &BmOptions) -> Result<ChainReport> {
    let defect = body.symmetry_defect();
    if !body.is_symmetric() {
        return Err(GeomError::NotSymmetric(defect));
    }
    let mollified = body.as_fourier().is_none();
    let smooth = Body::from(body.smoothed(&body.working_grid(), DEFAULT_ROUNDING)?);
    let (k, _) = john_position(&smooth).map_err(|e| GeomError::NotJohnNormalizable(e.to_string()))?;
    let kf = k
        .as_fourier()
        .ok_or_else(|| GeomError::NotJohnNormalizable("John image is not smooth".into()))?
        .clone();
    let grid = kf.grid();
    let hk = kf.samples();
    let h_min = hk.iter().copied().fold(f64::INFINITY, f64::min);
    let h_max = hk.iter().copied().fold(0.0, f64::max);

    let eps = santalo_deficit(&k)?;
    let lam = lambda_transform(&k)?;
    let hl = lam.body.samples_on(grid.len());
    let (v, vl) = (kf.area(), lam.body.area());
    let ratio = vl / v;
    let mixed_excess = kf.mixed_area(&lam.body).powi(2) / (vl * v) - 1.0;

    let d = 2.0 * h_max;
    let (sv, svl) = (v.sqrt(), vl.sqrt());
    let groemer_dev = hk
        .iter()
        .zip(&hl)
        .map(|(a, b)| (a / sv - b / svl).abs())
        .fold(0.0, f64::max);
    let level = ratio.sqrt();
    let scaled = hk
        .iter()
        .zip(&hl)
        .map(|(a, b)| a * a / vl * (level - b / a).powi(2))
        .fold(0.0, f64::max);
    let max_dev = hk
        .iter()
        .zip(&hl)
        .map(|(a, b)| (level - b / a).abs())
        .fold(0.0, f64::max);
    let pinch: Vec<f64> = hl.iter().zip(&lam.curvature).map(|(h, f)| h * f.cbrt()).collect();
    let pinch_min = pinch.iter().copied().fold(f64::INFINITY, f64::min);
    let pinch_max = pinch.iter().copied().fold(f64::NEG_INFINITY, f64::max);

    let opts = BmOptions {
        translate: Some(false),
        ..*bm
    };
    let lam_body = Body::from(lam.body.clone());
    let bm_lambda_disk = bm_distance_disk_with(&lam_body, &opts)?.distance;
    // The identity map already gives an upper bound for d(K, ΛK).
    let (q_lo, q_hi) = hk
        .iter()
        .zip(&hl)
        .map(|(a, b)| b / a)
        .fold((f64::INFINITY, 0.0_f64), |(lo, hi), q| (lo.min(q), hi.max(q)));
    let bm_body_lambda = bm_distance_pair_with(&k, &lam_body, &opts)?.distance.min(q_hi / q_lo);
    let bm_body_disk = bm_distance_disk_with(&k, &opts)?.distance;

    let bm1 = constants.bm1_bound(eps);
    let bm2 = constants.bm2_bound(eps);
    let checks = vec![
        ChainCheck::new("john_lower", 1.0, h_min),
        ChainCheck::new("john_upper", h_max, SQRT_2),
        ChainCheck::new("area_ratio_upper", ratio, 1.0),
        ChainCheck::new("area_ratio_lower", 1.0 / (1.0 + eps), ratio),
        ChainCheck::new("mixed_excess", mixed_excess, eps),
        ChainCheck::new("groemer", v / (4.0 * d * d) * groemer_dev * groemer_dev, eps),
        ChainCheck::new("pointwise_scaled", scaled, constants.groemer * eps),
        ChainCheck::new("pointwise", max_dev * max_dev, constants.pointwise * eps),
        ChainCheck::new("pinch_oscillation", pinch_max - pinch_min, constants.pinch * eps.sqrt()),
        ChainCheck::new("bm_lambda_disk", bm_lambda_disk, bm1),
        ChainCheck::new("bm_body_lambda", bm_body_lambda, bm2),
        ChainCheck::new("bm_body_disk", bm_body_disk, bm1 * bm2),
    ];
    Ok(ChainReport {
        mollified,
        epsilon: eps,
        john_h_min: h_min,
        john_h_max: h_max,
        area_ratio: ratio,
        mixed_excess,
        groemer_deviation: groemer_dev,
        max_deviation: max_dev,
        pinch_min,
        pinch_max,
        bm_lambda_disk,
        bm_body_lambda,
        bm_body_disk,
        constants: *constants,
        checks,
    })
}
