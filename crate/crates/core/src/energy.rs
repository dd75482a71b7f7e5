//! Length, direction energy, bending energy and the closed-form lower bounds.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::curve::{self, ArcCurve, CurveKind};
use crate::error::{Error, Result};
use crate::specfun;
use crate::zoo::AnalyticCurve;

/// Energies of one curve; `energy = bending + direction` and `energy_hat = bending + length`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport {
    #[serde(rename = "L")]
    pub length: f64,
    #[serde(rename = "D")]
    pub direction: f64,
    #[serde(rename = "B")]
    pub bending: f64,
    #[serde(rename = "E")]
    pub energy: f64,
    #[serde(rename = "E_hat")]
    pub energy_hat: f64,
    /// Richardson estimate of the quadrature error in `energy`.
    pub quad_error: f64,
    /// Energy of the optimal continuation past each tail end.
    pub tail_bound: f64,
}

impl EnergyReport {
    fn from_parts(length: f64, direction: f64, bending: f64, quad_error: f64, tail_bound: f64) -> Self {
        Self {
            length,
            direction,
            bending,
            energy: bending + direction,
            energy_hat: bending + length,
            quad_error,
            tail_bound,
        }
    }
}

/// Composite Simpson on uniform nodes, closing with a 3/8 panel when the interval count is odd.
pub fn composite_simpson(values: &[f64], h: f64) -> f64 {
    let n = values.len();
    match n {
        0 | 1 => 0.0,
        2 => 0.5 * h * (values[0] + values[1]),
        3 => h / 3.0 * (values[0] + 4.0 * values[1] + values[2]),
        4 => 3.0 * h / 8.0 * (values[0] + 3.0 * values[1] + 3.0 * values[2] + values[3]),
        _ => {
            let intervals = n - 1;
            let simpson_end = if intervals % 2 == 0 { n - 1 } else { n - 4 };
            let mut sum = values[0] + values[simpson_end];
            for (i, v) in values.iter().enumerate().take(simpson_end).skip(1) {
                sum += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
            }
            let mut total = h / 3.0 * sum;
            if simpson_end != n - 1 {
                let t = &values[simpson_end..];
                total += 3.0 * h / 8.0 * (t[0] + 3.0 * t[1] + 3.0 * t[2] + t[3]);
            }
            total
        }
    }
}

fn richardson(values: &[f64], h: f64) -> f64 {
    if values.len() < 9 {
        return 0.0;
    }
    let coarse: Vec<f64> = values.iter().step_by(2).copied().collect();
    let fine = composite_simpson(&values[..2 * (coarse.len() - 1) + 1], h);
    (fine - composite_simpson(&coarse, 2.0 * h)).abs() / 15.0
}

/// Energy of the optimal continuation from a tail end whose tangent makes angle δ with e₁.
pub fn tail_energy(end_angle: f64) -> f64 {
    8.0 * (end_angle / 4.0).sin().powi(2)
}

fn tail_ends(c: &ArcCurve) -> (bool, bool) {
    match (c.kind(), c.truncation_radius()) {
        (CurveKind::TruncatedComplete, _) => (true, true),
        (CurveKind::OpenArc, Some(_)) => (false, true),
        _ => (false, false),
    }
}

/// Energies by fourth-order differences and composite Simpson on each smooth piece.
///
/// Non-uniformly sampled curves are first resampled at uniform arclength.
pub fn energies(c: &ArcCurve) -> Result<EnergyReport> {
    let c = curve::ensure_uniform(c)?;
    let d = c.dim();
    let (mut length, mut direction, mut bending, mut quad_error) = (0.0, 0.0, 0.0, 0.0);
    let mut end_tangents = (Vec::new(), Vec::new());
    let pieces = c.piece_derivatives()?;
    let last_piece = pieces.len() - 1;
    for (index, piece) in pieces.iter().enumerate() {
        let frame = piece.frame(d);
        let count = frame.speed.len();
        let mut l = Vec::with_capacity(count);
        let mut dd = Vec::with_capacity(count);
        let mut b = Vec::with_capacity(count);
        for i in 0..count {
            let sigma = frame.speed[i];
            let t = frame.tangent_at(i);
            let k = frame.curvature_at(i);
            l.push(sigma);
            dd.push(0.5 * curve::dist(t, c.tail_direction()).powi(2) * sigma);
            b.push(0.5 * curve::dot(k, k) * sigma);
        }
        length += composite_simpson(&l, piece.step);
        direction += composite_simpson(&dd, piece.step);
        bending += composite_simpson(&b, piece.step);
        quad_error += richardson(&dd, piece.step) + richardson(&b, piece.step);
        if index == 0 {
            end_tangents.0 = frame.tangent_at(0).to_vec();
        }
        if index == last_piece {
            end_tangents.1 = frame.tangent_at(count - 1).to_vec();
        }
    }
    let (start_tail, end_tail) = tail_ends(&c);
    // atan2 keeps full precision for nearly aligned tangents, where acos does not.
    let angle = |t: &[f64]| {
        let along = curve::dot(t, c.tail_direction());
        let across: Vec<f64> = t.iter().zip(c.tail_direction()).map(|(a, e)| a - along * e).collect();
        curve::norm(&across).atan2(along)
    };
    let mut tail_bound = 0.0;
    if start_tail {
        tail_bound += tail_energy(angle(&end_tangents.0));
    }
    if end_tail {
        tail_bound += tail_energy(angle(&end_tangents.1));
    }
    Ok(EnergyReport::from_parts(length, direction, bending, quad_error, tail_bound))
}

/// |D − L| for a closed curve; vanishes because the net displacement is zero.
pub fn c0_closed_identity_check(c: &ArcCurve) -> Result<f64> {
    let gap = c.closure_gap();
    if c.kind() != CurveKind::C0Closed || gap > 1e-9 * c.diameter() {
        return Err(Error::NotClosed { gap });
    }
    let r = energies(c)?;
    Ok((r.direction - r.length).abs())
}

/// Lower bound on E for an arc whose tangent turns by a net angle `delta ≥ 0`.
pub fn turning_lower_bound(delta: f64) -> f64 {
    let turns = (delta / TAU).floor();
    let rest = delta - TAU * turns;
    8.0 * turns + 16.0 * (rest / 8.0).sin().powi(2)
}

/// Net turning |θ(end) − θ(start)| of a planar curve.
pub fn net_turning(c: &ArcCurve) -> Result<f64> {
    let theta = curve::tangent_angle(c)?.theta;
    Ok((theta[theta.len() - 1] - theta[0]).abs())
}

/// Outcome of the rotation-number energy bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RotationBound {
    pub bound: f64,
    pub energy: f64,
    pub tail_bound: f64,
    pub rotation: i64,
    pub satisfied: bool,
}

/// Slack added to computed energies when testing the sharp bounds.
pub const BOUND_SLACK: f64 = 1e-6;

/// `E ≥ 8|N|` on a truncated-complete planar curve.
pub fn rotation_lower_bound(c: &ArcCurve) -> Result<RotationBound> {
    let rot = curve::rotation_number(c)?;
    let report = energies(c)?;
    let bound = 8.0 * rot.rounded.unsigned_abs() as f64;
    Ok(RotationBound {
        bound,
        energy: report.energy,
        tail_bound: report.tail_bound,
        rotation: rot.rounded,
        satisfied: report.energy + report.tail_bound + BOUND_SLACK >= bound,
    })
}

/// Independent route: adaptive quadrature of the exact integrands on `[a, b]`.
///
/// Breakpoints of the family split the integration range.
pub fn analytic_energies(curve: &AnalyticCurve, a: f64, b: f64, tol: f64) -> Result<EnergyReport> {
    let mut cuts = vec![a];
    cuts.extend(curve.breakpoints().into_iter().filter(|&p| p > a && p < b));
    cuts.push(b);
    let (mut length, mut direction, mut bending, mut err) = (0.0, 0.0, 0.0, 0.0);
    for w in cuts.windows(2) {
        let mut failure = None;
        let mut integrate = |select: fn(&crate::zoo::CurvePoint) -> f64| {
            let q = specfun::adaptive_integrate(
                |s| match curve.eval(s) {
                    Ok(p) => select(&p) * p.speed,
                    Err(e) => {
                        failure.get_or_insert(e);
                        0.0
                    }
                },
                w[0],
                w[1],
                tol,
            );
            q
        };
        let ql = integrate(|_| 1.0)?;
        let qd = integrate(|p| 1.0 - p.tangent[0])?;
        let qb = integrate(|p| 0.5 * p.curvature * p.curvature)?;
        if let Some(e) = failure {
            return Err(e);
        }
        length += ql.value;
        direction += qd.value;
        bending += qb.value;
        err += qd.error_estimate + qb.error_estimate;
    }
    Ok(EnergyReport::from_parts(length, direction, bending, err, 0.0))
}
