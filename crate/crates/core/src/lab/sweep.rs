use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::family::{FamilySpec, Member};
use crate::affine::{bm_distance_disk_with, BmOptions};
use crate::error::{GeomError, Result};
use crate::grid::AngleGrid;
use crate::santalo::{deficit_from_product, santalo_point, DeficitRecord};

/// Upper end of the ε window used by fits.
pub const FIT_EPS_MAX: f64 = 0.05;
/// Records at or below this ε count as extremal and are left out of fits.
pub const FIT_EPS_MIN: f64 = 1e-9;
/// Empirical budget for the fitted `γ`.
pub const GAMMA_BUDGET: f64 = 10.0;
/// Smallest acceptable log-log slope for a symmetric family.
pub const SLOPE_FLOOR: f64 = 0.45;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentFit {
    pub slope: f64,
    pub intercept: f64,
    /// `max δ / ε^alpha` over the fitted records.
    pub gamma: f64,
    pub alpha: f64,
    /// Largest absolute log residual of the regression.
    pub residual_spread: f64,
    pub used: usize,
}

impl ExponentFit {
    /// Violations of the asserted stability bounds, as messages.
    pub fn violations(&self, symmetric: bool) -> Vec<String> {
        let mut out = Vec::new();
        if !(self.gamma <= GAMMA_BUDGET) {
            out.push(format!("gamma {} exceeds {GAMMA_BUDGET}", self.gamma));
        }
        if symmetric && !(self.slope >= SLOPE_FLOOR) {
            out.push(format!("slope {} is below {SLOPE_FLOOR}", self.slope));
        }
        out
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepResult {
    pub family: FamilySpec,
    pub symmetric: bool,
    pub records: Vec<DeficitRecord>,
    pub fit: ExponentFit,
}

/// `(ε, δ)` for one body. The BM search includes translations exactly when
/// the body is not origin-symmetric.
pub fn measure(member: &Member, opts: &BmOptions) -> Result<DeficitRecord> {
    let body = &member.body;
    let s = santalo_point(body)?;
    let vp = body.area() * s.polar_area;
    let symmetric = body.is_symmetric();
    let bm = bm_distance_disk_with(
        body,
        &BmOptions {
            translate: Some(!symmetric),
            ..*opts
        },
    )?;
    let mut diagnostics = BTreeMap::new();
    diagnostics.insert("family_param".to_string(), member.param);
    diagnostics.insert("bm_spread".to_string(), bm.multistart_spread);
    diagnostics.insert("santalo_residual".to_string(), s.gradient_norm);
    diagnostics.insert("symmetric".to_string(), if symmetric { 1.0 } else { 0.0 });
    Ok(DeficitRecord {
        body_id: member.id.clone(),
        epsilon: deficit_from_product(vp),
        delta: bm.distance - 1.0,
        volume_product: vp,
        diagnostics,
    })
}

/// Records for every member, computed in parallel and sorted by `body_id`.
pub fn measure_all(members: &[Member], opts: &BmOptions) -> Result<Vec<DeficitRecord>> {
    if members.is_empty() {
        return Err(GeomError::InsufficientData("empty family".into()));
    }
    let mut records = members.par_iter().map(|m| measure(m, opts)).collect::<Result<Vec<_>>>()?;
    records.sort_by(|a, b| a.body_id.cmp(&b.body_id));
    Ok(records)
}

/// Exponent of the symmetric or general stability bound.
pub fn stability_exponent(symmetric: bool) -> f64 {
    if symmetric {
        0.5
    } else {
        0.25
    }
}

pub fn stability_sweep(family: &FamilySpec, grid: AngleGrid, seed: u64) -> Result<SweepResult> {
    let members = family.generate(grid, seed)?;
    let symmetric = members.iter().all(|m| m.body.is_symmetric());
    let records = measure_all(
        &members,
        &BmOptions {
            seed,
            ..BmOptions::default()
        },
    )?;
    let fit = exponent_fit(&records, stability_exponent(symmetric))?;
    Ok(SweepResult {
        family: family.clone(),
        symmetric,
        records,
        fit,
    })
}

/// Least squares for `log δ = slope · log ε + intercept` over records with
/// `ε ∈ (FIT_EPS_MIN, FIT_EPS_MAX]` and `δ > 0`.
pub fn exponent_fit(records: &[DeficitRecord], alpha: f64) -> Result<ExponentFit> {
    let pts: Vec<(f64, f64, f64)> = records
        .iter()
        .filter(|r| r.epsilon > FIT_EPS_MIN && r.epsilon <= FIT_EPS_MAX && r.delta > 0.0)
        .map(|r| (r.epsilon.ln(), r.delta.ln(), r.delta / r.epsilon.powf(alpha)))
        .collect();
    if pts.len() < 3 {
        return Err(GeomError::InsufficientData(format!(
            "{} of {} records fall in the fit window",
            pts.len(),
            records.len()
        )));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(GeomError::InsufficientData("all fitted records share one ε".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual_spread = pts
        .iter()
        .map(|p| (p.1 - slope * p.0 - intercept).abs())
        .fold(0.0, f64::max);
    Ok(ExponentFit {
        slope,
        intercept,
        gamma: pts.iter().map(|p| p.2).fold(0.0, f64::max),
        alpha,
        residual_spread,
        used: pts.len(),
    })
}
