//! JSON body documents:
//!
//! ```text
//! {"kind":"polygon","vertices":[[x,y],...]}
//! {"kind":"fourier","a0":...,"cos":[...],"sin":[...]}
//! {"kind":"support","n":...,"values":[...]}
//! ```
//!
//! An optional `"label"` string is carried through. Numbers are written with
//! 17 significant digits so documents round-trip bit for bit.

use std::fmt::Write as _;

use nalgebra::Vector2;
use serde_json::Value;

use super::{Body, FourierBody, Polygon, Shape, SupportVector};
use crate::error::{GeomError, Result};
use crate::grid::AngleGrid;

/// Full-precision decimal form of a double.
pub fn fmt_f64(x: f64) -> String {
    if x == 0.0 {
        // Avoid "-0.0000000000000000e0" and keep zeros short.
        return "0.0".into();
    }
    format!("{x:.16e}")
}

fn fmt_list(xs: &[f64]) -> String {
    let parts: Vec<String> = xs.iter().map(|&x| fmt_f64(x)).collect();
    format!("[{}]", parts.join(","))
}

fn json_string(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialise")
}

pub fn to_json(body: &Body) -> String {
    let mut out = String::from("{");
    match body.shape() {
        Shape::Polygon(p) => {
            out.push_str("\"kind\":\"polygon\",\"vertices\":[");
            let verts: Vec<String> = p
                .vertices()
                .iter()
                .map(|v| format!("[{},{}]", fmt_f64(v.x), fmt_f64(v.y)))
                .collect();
            out.push_str(&verts.join(","));
            out.push(']');
        }
        Shape::Fourier(f) => {
            let _ = write!(
                out,
                "\"kind\":\"fourier\",\"a0\":{},\"cos\":{},\"sin\":{}",
                fmt_f64(f.a0()),
                fmt_list(f.cos_coeffs()),
                fmt_list(f.sin_coeffs())
            );
        }
        Shape::Support(s) => {
            let _ = write!(
                out,
                "\"kind\":\"support\",\"n\":{},\"values\":{}",
                s.values().len(),
                fmt_list(s.values())
            );
        }
    }
    if let Some(label) = body.label() {
        let _ = write!(out, ",\"label\":{}", json_string(label));
    }
    out.push('}');
    out
}

fn number(v: &Value, what: &str) -> Result<f64> {
    v.as_f64().ok_or_else(|| GeomError::Parse(format!("{what} must be a number")))
}

fn numbers(v: Option<&Value>, what: &str) -> Result<Vec<f64>> {
    match v {
        None => Ok(Vec::new()),
        Some(Value::Array(xs)) => xs.iter().map(|x| number(x, what)).collect(),
        Some(_) => Err(GeomError::Parse(format!("{what} must be an array"))),
    }
}

/// Parses a body document. Fourier bodies are attached to `grid`.
pub fn from_json(text: &str, grid: AngleGrid) -> Result<Body> {
    let doc: Value = serde_json::from_str(text).map_err(|e| GeomError::Parse(e.to_string()))?;
    let kind = doc
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| GeomError::Parse("missing \"kind\"".into()))?;
    let body: Body = match kind {
        "polygon" => {
            let verts = doc
                .get("vertices")
                .and_then(Value::as_array)
                .ok_or_else(|| GeomError::Parse("polygon needs \"vertices\"".into()))?;
            let pts = verts
                .iter()
                .map(|v| match v.as_array().map(Vec::as_slice) {
                    Some([x, y]) => Ok(Vector2::new(number(x, "x")?, number(y, "y")?)),
                    _ => Err(GeomError::Parse("vertex must be [x, y]".into())),
                })
                .collect::<Result<Vec<_>>>()?;
            Polygon::new(pts)?.into()
        }
        "fourier" => {
            let a0 = number(
                doc.get("a0").ok_or_else(|| GeomError::Parse("fourier needs \"a0\"".into()))?,
                "a0",
            )?;
            let cos = numbers(doc.get("cos"), "cos")?;
            let sin = numbers(doc.get("sin"), "sin")?;
            FourierBody::new(a0, cos, sin, grid)?.into()
        }
        "support" => {
            let values = numbers(doc.get("values"), "values")?;
            if let Some(n) = doc.get("n") {
                let n = n.as_u64().ok_or_else(|| GeomError::Parse("n must be an integer".into()))?;
                if n as usize != values.len() {
                    return Err(GeomError::Parse(format!(
                        "n = {n} but {} values given",
                        values.len()
                    )));
                }
            }
            SupportVector::new(AngleGrid::coarse(values.len())?, values)?.into()
        }
        other => return Err(GeomError::Parse(format!("unknown kind {other:?}"))),
    };
    Ok(match doc.get("label").and_then(Value::as_str) {
        Some(l) => body.with_label(l),
        None => body,
    })
}
