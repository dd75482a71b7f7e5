//! Curve files, JSON sidecars, run manifests and SVG output.
//!
//! A curve file is CSV with header `s,x,y[,z…]`; every float is written with
//! 17 significant digits so values round-trip exactly.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::curve::{ArcCurve, CurveKind};
use crate::error::{Error, Result};

/// Scientific notation with 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

const AXES: [&str; 3] = ["x", "y", "z"];

/// Curve as CSV text.
pub fn curve_to_csv(c: &ArcCurve) -> String {
    let d = c.dim();
    let mut out = String::from("s");
    for k in 0..d {
        out.push(',');
        out.push_str(AXES.get(k).copied().unwrap_or("w"));
        if k >= AXES.len() {
            let _ = write!(out, "{k}");
        }
    }
    out.push('\n');
    for (i, p) in c.points().enumerate() {
        out.push_str(&fmt_f64(c.params()[i]));
        for v in p {
            out.push(',');
            out.push_str(&fmt_f64(*v));
        }
        out.push('\n');
    }
    out
}

/// Parses CSV text into parameters and flat coordinates; errors carry 1-based line numbers.
pub fn parse_csv(text: &str) -> Result<(usize, Vec<f64>, Vec<f64>)> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| Error::Parse {
            line: 1,
            message: e.to_string(),
        })?
        .clone();
    if header.len() < 3 || &header[0] != "s" {
        return Err(Error::Parse {
            line: 1,
            message: format!("expected header `s,x,y[,z…]`, found `{}`", header.iter().collect::<Vec<_>>().join(",")),
        });
    }
    let dim = header.len() - 1;
    let (mut params, mut coords) = (Vec::new(), Vec::new());
    for record in reader.records() {
        let record = record.map_err(|e| Error::Parse {
            line: e.position().map_or(0, |p| p.line() as usize),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.len() != dim + 1 {
            return Err(Error::Parse {
                line,
                message: format!("expected {} fields, found {}", dim + 1, record.len()),
            });
        }
        for (k, field) in record.iter().enumerate() {
            let v: f64 = field.parse().map_err(|_| Error::Parse {
                line,
                message: format!("`{field}` is not a number"),
            })?;
            if !v.is_finite() {
                return Err(Error::Parse {
                    line,
                    message: format!("non-finite value `{field}`"),
                });
            }
            if k == 0 {
                params.push(v);
            } else {
                coords.push(v);
            }
        }
    }
    if params.len() < 2 {
        return Err(Error::Parse {
            line: params.len() + 1,
            message: "a curve needs at least two samples".into(),
        });
    }
    Ok((dim, params, coords))
}

/// Metadata stored next to a curve file.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Sidecar {
    pub kind: Option<CurveKind>,
    pub dim: usize,
    pub truncation_radius: Option<f64>,
    pub family: Option<String>,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    #[serde(default)]
    pub joints: Vec<usize>,
}

impl Sidecar {
    pub fn for_curve(c: &ArcCurve, family: Option<&str>, params: BTreeMap<String, f64>) -> Self {
        Self {
            kind: Some(c.kind()),
            dim: c.dim(),
            truncation_radius: c.truncation_radius(),
            family: family.map(str::to_string),
            params,
            joints: c.joints().to_vec(),
        }
    }
}

/// `curve.csv` → `curve.json`.
pub fn sidecar_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("json")
}

pub fn write_curve(path: &Path, c: &ArcCurve, sidecar: &Sidecar) -> Result<()> {
    fs::write(path, curve_to_csv(c))?;
    fs::write(sidecar_path(path), serde_json::to_string_pretty(sidecar)? + "\n")?;
    Ok(())
}

/// Reads a curve file; the sidecar, when present, supplies kind, radius and joints.
pub fn read_curve(path: &Path) -> Result<(ArcCurve, Option<Sidecar>)> {
    let text = fs::read_to_string(path)?;
    let (dim, params, coords) = parse_csv(&text)?;
    let side = sidecar_path(path);
    let sidecar: Option<Sidecar> = if side.exists() {
        Some(serde_json::from_str(&fs::read_to_string(side)?)?)
    } else {
        None
    };
    let kind = sidecar
        .as_ref()
        .and_then(|s| s.kind)
        .unwrap_or(CurveKind::OpenArc);
    let mut c = ArcCurve::new(dim, params, coords, kind)?;
    if let Some(s) = &sidecar {
        if s.dim != dim {
            return Err(Error::Config(format!(
                "sidecar dimension {} differs from file dimension {dim}",
                s.dim
            )));
        }
        c = c.with_joints(s.joints.clone())?;
        if let Some(r) = s.truncation_radius {
            c = c.with_truncation_radius(r);
        }
    }
    Ok((c, sidecar))
}

/// Record of one command invocation and everything it wrote.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub config: BTreeMap<String, String>,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub tool_version: String,
    pub wall_time_seconds: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stop_reason: Option<String>,
}

impl RunManifest {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            config: BTreeMap::new(),
            inputs: Vec::new(),
            outputs: Vec::new(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            wall_time_seconds: 0.0,
            stop_reason: None,
        }
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, serde_json::to_string_pretty(self)? + "\n")?;
        Ok(())
    }
}

/// Stroke-only SVG polyline of the first two coordinates, y pointing up.
pub fn curve_to_svg(c: &ArcCurve) -> String {
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in c.points() {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-12);
    let pad = 0.02 * span;
    let (w, h) = (hi[0] - lo[0] + 2.0 * pad, hi[1] - lo[1] + 2.0 * pad);
    let mut points = String::new();
    for p in c.points() {
        let _ = write!(points, "{:.6},{:.6} ", p[0] - lo[0] + pad, hi[1] - p[1] + pad);
    }
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {w:.6} {h:.6}\">\n\
         <polyline fill=\"none\" stroke=\"black\" stroke-width=\"{:.6}\" points=\"{}\"/>\n</svg>\n",
        span / 500.0,
        points.trim_end()
    )
}
