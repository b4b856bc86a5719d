use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use super::sweep::ExponentFit;
use crate::error::{GeomError, Result};
use crate::santalo::DeficitRecord;

/// One CSV line of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub body_id: String,
    pub epsilon: f64,
    pub delta: f64,
    pub volume_product: f64,
    pub bm_spread: f64,
    pub family_param: f64,
}

impl From<&DeficitRecord> for CsvRow {
    fn from(r: &DeficitRecord) -> Self {
        let diag = |k: &str| r.diagnostics.get(k).copied().unwrap_or(f64::NAN);
        CsvRow {
            body_id: r.body_id.clone(),
            epsilon: r.epsilon,
            delta: r.delta,
            volume_product: r.volume_product,
            bm_spread: diag("bm_spread"),
            family_param: diag("family_param"),
        }
    }
}

impl From<CsvRow> for DeficitRecord {
    fn from(row: CsvRow) -> Self {
        let mut diagnostics = BTreeMap::new();
        diagnostics.insert("bm_spread".to_string(), row.bm_spread);
        diagnostics.insert("family_param".to_string(), row.family_param);
        DeficitRecord {
            body_id: row.body_id,
            epsilon: row.epsilon,
            delta: row.delta,
            volume_product: row.volume_product,
            diagnostics,
        }
    }
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> GeomError {
    GeomError::Parse(format!("{}: {e}", path.display()))
}

pub fn write_csv(path: &Path, records: &[DeficitRecord]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| io_err(path, e))?;
    for r in records {
        w.serialize(CsvRow::from(r)).map_err(|e| io_err(path, e))?;
    }
    w.flush().map_err(|e| io_err(path, e))
}

pub fn read_csv(path: &Path) -> Result<Vec<DeficitRecord>> {
    let mut r = csv::Reader::from_path(path).map_err(|e| io_err(path, e))?;
    r.deserialize::<CsvRow>()
        .map(|row| row.map(DeficitRecord::from).map_err(|e| io_err(path, e)))
        .collect()
}

/// `run.csv` → `run.manifest.json`.
pub fn manifest_path(csv: &Path) -> PathBuf {
    csv.with_extension("manifest.json")
}

/// Configuration of a sweep run, stored next to its CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub family: String,
    pub seed: u64,
    pub grid: usize,
    pub tol: f64,
    pub bm_starts: usize,
    pub records: usize,
    pub csv: String,
    pub symmetric: bool,
    pub fit: Option<ExponentFit>,
    /// Seconds since the Unix epoch; the only field that varies between
    /// identical runs.
    pub timestamp: u64,
}

impl Manifest {
    pub fn stamp() -> u64 {
        SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self).map_err(|e| io_err(path, e))?;
        fs::write(path, text + "\n").map_err(|e| io_err(path, e))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
        serde_json::from_str(&text).map_err(|e| io_err(path, e))
    }
}

/// Log-log scatter of `(ε, δ)` with the fitted line, as a standalone SVG.
pub fn plot_svg(records: &[DeficitRecord], fit: Option<&ExponentFit>) -> String {
    const W: f64 = 640.0;
    const H: f64 = 480.0;
    const PAD: f64 = 60.0;
    let pts: Vec<(f64, f64, &str)> = records
        .iter()
        .filter(|r| r.epsilon > 0.0 && r.delta > 0.0)
        .map(|r| (r.epsilon.log10(), r.delta.log10(), r.body_id.as_str()))
        .collect();
    let range = |f: fn(&(f64, f64, &str)) -> f64| {
        let lo = pts.iter().map(f).fold(f64::INFINITY, f64::min).floor();
        let hi = pts.iter().map(f).fold(f64::NEG_INFINITY, f64::max).ceil();
        if lo.is_finite() && hi > lo {
            (lo, hi)
        } else if lo.is_finite() {
            (lo - 1.0, lo + 1.0)
        } else {
            (-1.0, 0.0)
        }
    };
    let (x0, x1) = range(|p| p.0);
    let (y0, y1) = range(|p| p.1);
    let sx = |x: f64| PAD + (x - x0) / (x1 - x0) * (W - 2.0 * PAD);
    let sy = |y: f64| H - PAD - (y - y0) / (y1 - y0) * (H - 2.0 * PAD);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<rect x="{PAD}" y="{PAD}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        W - 2.0 * PAD,
        H - 2.0 * PAD
    );
    for e in (x0 as i32)..=(x1 as i32) {
        let x = sx(e as f64);
        let _ = writeln!(
            s,
            r#"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">1e{e}</text>"#,
            H - PAD,
            H - PAD + 5.0,
            H - PAD + 20.0
        );
    }
    for e in (y0 as i32)..=(y1 as i32) {
        let y = sy(e as f64);
        let _ = writeln!(
            s,
            r#"<line x1="{:.2}" y1="{y:.2}" x2="{PAD}" y2="{y:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">1e{e}</text>"#,
            PAD - 5.0,
            PAD - 8.0,
            y + 4.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">epsilon</text><text x="15" y="{:.2}" transform="rotate(-90 15 {:.2})" text-anchor="middle">delta</text>"#,
        W / 2.0,
        H - 15.0,
        H / 2.0,
        H / 2.0
    );
    for (x, y, id) in &pts {
        let _ = writeln!(
            s,
            r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="steelblue"><title>{id}</title></circle>"#,
            sx(*x),
            sy(*y)
        );
    }
    if let Some(f) = fit {
        // log10 δ = slope log10 ε + intercept / ln 10
        let b = f.intercept / std::f64::consts::LN_10;
        let line = |x: f64| f.slope * x + b;
        let _ = writeln!(
            s,
            r#"<clipPath id="frame"><rect x="{PAD}" y="{PAD}" width="{}" height="{}"/></clipPath>"#,
            W - 2.0 * PAD,
            H - 2.0 * PAD
        );
        let _ = writeln!(
            s,
            r#"<line clip-path="url(#frame)" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="firebrick" stroke-width="1.5"/>"#,
            sx(x0),
            sy(line(x0)),
            sx(x1),
            sy(line(x1))
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" fill="firebrick">slope {:.4}, gamma {:.4}</text>"#,
            PAD + 10.0,
            PAD + 20.0,
            f.slope,
            f.gamma
        );
    }
    s.push_str("</svg>\n");
    s
}
