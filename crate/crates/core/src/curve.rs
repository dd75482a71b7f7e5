//! Sampled curves in Rⁿ and their differential geometry.
//!
//! Derivatives use fourth-order finite differences on each smooth piece. A
//! piece is a maximal run of samples between stored joints (gluing points
//! where the curve is only C¹ or C²); stencils never straddle a joint.

use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spline::CubicSpline;

/// Global shape of a sampled curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurveKind {
    /// Finite window of a complete curve whose ends approach the tail line.
    TruncatedComplete,
    /// Loop whose first and last samples coincide.
    C0Closed,
    OpenArc,
}

/// Relative spacing deviation below which a piece counts as uniformly sampled.
const UNIFORM_TOL: f64 = 1e-9;
/// Minimum samples per piece for the one-sided second-derivative stencil.
pub const MIN_PIECE_SAMPLES: usize = 6;

/// A discretely sampled immersed curve.
#[derive(Clone, Debug, PartialEq)]
pub struct ArcCurve {
    dim: usize,
    params: Vec<f64>,
    coords: Vec<f64>,
    kind: CurveKind,
    tail_direction: Vec<f64>,
    truncation_radius: Option<f64>,
    joints: Vec<usize>,
}

impl ArcCurve {
    /// Validates and builds a curve from flat row-major coordinates.
    pub fn new(dim: usize, params: Vec<f64>, coords: Vec<f64>, kind: CurveKind) -> Result<Self> {
        if dim < 2 {
            return Err(Error::Domain(format!("ambient dimension {dim} < 2")));
        }
        if params.len() < 2 || coords.len() != dim * params.len() {
            return Err(Error::Domain(format!(
                "{} params and {} coordinates do not describe a {dim}-dimensional curve",
                params.len(),
                coords.len()
            )));
        }
        if coords.iter().chain(&params).any(|v| !v.is_finite()) {
            return Err(Error::Domain("non-finite sample".into()));
        }
        for (i, w) in params.windows(2).enumerate() {
            if !(w[1] > w[0]) {
                return Err(Error::Domain(format!("params not strictly increasing at {i}")));
            }
        }
        let mut tail_direction = vec![0.0; dim];
        tail_direction[0] = 1.0;
        let curve = Self {
            dim,
            params,
            coords,
            kind,
            tail_direction,
            truncation_radius: None,
            joints: Vec::new(),
        };
        for i in 0..curve.len() - 1 {
            if curve.segment_length(i) == 0.0 {
                return Err(Error::DegenerateSegment { index: i });
            }
        }
        if kind == CurveKind::C0Closed {
            let gap = curve.closure_gap();
            if gap > 1e-12 * curve.diameter().max(f64::MIN_POSITIVE) {
                return Err(Error::NotClosed { gap });
            }
        }
        Ok(curve)
    }

    /// Planar convenience constructor.
    pub fn planar(params: Vec<f64>, points: &[[f64; 2]], kind: CurveKind) -> Result<Self> {
        let coords = points.iter().flat_map(|p| p.iter().copied()).collect();
        Self::new(2, params, coords, kind)
    }

    pub fn with_truncation_radius(mut self, radius: f64) -> Self {
        self.truncation_radius = Some(radius);
        self
    }

    /// Records interior gluing indices; out-of-range or duplicate entries are rejected.
    pub fn with_joints(mut self, mut joints: Vec<usize>) -> Result<Self> {
        joints.sort_unstable();
        joints.dedup();
        if joints.iter().any(|&j| j == 0 || j + 1 >= self.len()) {
            return Err(Error::Domain(format!("joint indices {joints:?} not interior")));
        }
        self.joints = joints;
        Ok(self)
    }

    pub fn with_kind(mut self, kind: CurveKind) -> Result<Self> {
        if kind == CurveKind::C0Closed && self.closure_gap() > 1e-12 * self.diameter() {
            return Err(Error::NotClosed {
                gap: self.closure_gap(),
            });
        }
        self.kind = kind;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of samples.
    pub fn len(&self) -> usize {
        self.params.len()
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.dim)
    }

    pub fn kind(&self) -> CurveKind {
        self.kind
    }

    pub fn tail_direction(&self) -> &[f64] {
        &self.tail_direction
    }

    pub fn truncation_radius(&self) -> Option<f64> {
        self.truncation_radius
    }

    pub fn joints(&self) -> &[usize] {
        &self.joints
    }

    pub fn segment_length(&self, i: usize) -> f64 {
        dist(self.point(i), self.point(i + 1))
    }

    pub fn min_segment(&self) -> f64 {
        (0..self.len() - 1)
            .map(|i| self.segment_length(i))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn polyline_length(&self) -> f64 {
        (0..self.len() - 1).map(|i| self.segment_length(i)).sum()
    }

    /// Bounding-box diagonal, used as the length scale for tolerances.
    pub fn diameter(&self) -> f64 {
        let mut lo = vec![f64::INFINITY; self.dim];
        let mut hi = vec![f64::NEG_INFINITY; self.dim];
        for p in self.points() {
            for k in 0..self.dim {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        dist(&lo, &hi)
    }

    pub fn closure_gap(&self) -> f64 {
        dist(self.point(0), self.point(self.len() - 1))
    }

    /// Inclusive sample ranges of the smooth pieces; neighbours share their joint.
    pub fn pieces(&self) -> Vec<RangeInclusive<usize>> {
        let mut out = Vec::with_capacity(self.joints.len() + 1);
        let mut start = 0;
        for &j in &self.joints {
            out.push(start..=j);
            start = j;
        }
        out.push(start..=self.len() - 1);
        out
    }

    /// True when every piece has uniform parameter spacing.
    pub fn is_piecewise_uniform(&self) -> bool {
        self.pieces().into_iter().all(|r| {
            let p = &self.params[r];
            let h = (p[p.len() - 1] - p[0]) / (p.len() - 1) as f64;
            p.windows(2)
                .all(|w| ((w[1] - w[0]) - h).abs() <= UNIFORM_TOL * h)
        })
    }

    pub fn translated(&self, shift: &[f64]) -> Self {
        let mut out = self.clone();
        for p in out.coords.chunks_exact_mut(self.dim) {
            for (x, s) in p.iter_mut().zip(shift) {
                *x += s;
            }
        }
        out
    }

    /// Dilation about the origin; arclength parameters scale with the curve.
    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        out.coords.iter_mut().for_each(|x| *x *= factor);
        out.params.iter_mut().for_each(|s| *s *= factor);
        out.truncation_radius = self.truncation_radius.map(|r| r * factor);
        out
    }

    /// Applies a linear map to every point (row-major `dim × dim`).
    pub fn mapped(&self, matrix: &[f64]) -> Self {
        let d = self.dim;
        let mut out = self.clone();
        for (src, dst) in self.coords.chunks_exact(d).zip(out.coords.chunks_exact_mut(d)) {
            for r in 0..d {
                dst[r] = (0..d).map(|c| matrix[r * d + c] * src[c]).sum();
            }
        }
        out
    }

    /// Per-piece first and second parameter derivatives.
    pub fn piece_derivatives(&self) -> Result<Vec<PieceDerivatives>> {
        if !self.is_piecewise_uniform() {
            return Err(Error::UnderResolved(
                "non-uniform parameter spacing; resample with reparametrize_arclength".into(),
            ));
        }
        self.pieces()
            .into_iter()
            .map(|r| {
                let count = r.end() - r.start() + 1;
                if count < MIN_PIECE_SAMPLES {
                    return Err(Error::UnderResolved(format!(
                        "piece {r:?} has {count} samples, need {MIN_PIECE_SAMPLES}"
                    )));
                }
                let p = &self.params[r.clone()];
                let h = (p[count - 1] - p[0]) / (count - 1) as f64;
                let pts = &self.coords[r.start() * self.dim..(r.end() + 1) * self.dim];
                let (d1, d2) = fd4(pts, self.dim, h);
                Ok(PieceDerivatives {
                    range: r,
                    step: h,
                    first: d1,
                    second: d2,
                })
            })
            .collect()
    }

    /// Speed, unit tangent and curvature vector at each sample.
    ///
    /// At a joint the value from the later piece is reported.
    pub fn frame(&self) -> Result<Frame> {
        let n = self.len();
        let d = self.dim;
        let mut frame = Frame {
            dim: d,
            speed: vec![0.0; n],
            tangent: vec![0.0; n * d],
            curvature: vec![0.0; n * d],
        };
        for piece in self.piece_derivatives()? {
            let local = piece.frame(d);
            let off = *piece.range.start();
            frame.speed[off..off + local.speed.len()].copy_from_slice(&local.speed);
            frame.tangent[off * d..off * d + local.tangent.len()].copy_from_slice(&local.tangent);
            frame.curvature[off * d..off * d + local.curvature.len()]
                .copy_from_slice(&local.curvature);
        }
        Ok(frame)
    }
}

/// Raw parameter derivatives on one smooth piece.
#[derive(Clone, Debug)]
pub struct PieceDerivatives {
    pub range: RangeInclusive<usize>,
    pub step: f64,
    pub first: Vec<f64>,
    pub second: Vec<f64>,
}

impl PieceDerivatives {
    /// Metric-aware geometry: σ = |γ′|, T = γ′/σ, κ = (γ″ − ⟨γ″,T⟩T)/σ².
    pub fn frame(&self, dim: usize) -> Frame {
        let count = self.first.len() / dim;
        let mut speed = Vec::with_capacity(count);
        let mut tangent = Vec::with_capacity(count * dim);
        let mut curvature = Vec::with_capacity(count * dim);
        for (g1, g2) in self.first.chunks_exact(dim).zip(self.second.chunks_exact(dim)) {
            let sigma = norm(g1);
            let t: Vec<f64> = g1.iter().map(|v| v / sigma).collect();
            let along = dot(g2, &t);
            speed.push(sigma);
            curvature.extend(g2.iter().zip(&t).map(|(a, b)| (a - along * b) / (sigma * sigma)));
            tangent.extend(t);
        }
        Frame {
            dim,
            speed,
            tangent,
            curvature,
        }
    }
}

/// Pointwise first-order geometry of a sampled curve.
#[derive(Clone, Debug, PartialEq)]
pub struct Frame {
    pub dim: usize,
    pub speed: Vec<f64>,
    pub tangent: Vec<f64>,
    pub curvature: Vec<f64>,
}

impl Frame {
    pub fn tangent_at(&self, i: usize) -> &[f64] {
        &self.tangent[i * self.dim..(i + 1) * self.dim]
    }

    pub fn curvature_at(&self, i: usize) -> &[f64] {
        &self.curvature[i * self.dim..(i + 1) * self.dim]
    }

    /// Planar signed curvature det(T, κ).
    pub fn signed_curvature_at(&self, i: usize) -> f64 {
        let t = self.tangent_at(i);
        let k = self.curvature_at(i);
        t[0] * k[1] - t[1] * k[0]
    }
}

/// Fourth-order first and second differences of flat `dim`-vectors with spacing `h`.
pub(crate) fn fd4(pts: &[f64], dim: usize, h: f64) -> (Vec<f64>, Vec<f64>) {
    let n = pts.len() / dim;
    let mut d1 = vec![0.0; pts.len()];
    let mut d2 = vec![0.0; pts.len()];
    let f = |i: usize, k: usize| pts[i * dim + k];
    let (c1, c2) = (1.0 / (12.0 * h), 1.0 / (12.0 * h * h));
    for k in 0..dim {
        for i in 0..n {
            let (a, b) = if i >= 2 && i + 2 < n {
                (
                    f(i - 2, k) - 8.0 * f(i - 1, k) + 8.0 * f(i + 1, k) - f(i + 2, k),
                    -f(i - 2, k) + 16.0 * f(i - 1, k) - 30.0 * f(i, k) + 16.0 * f(i + 1, k)
                        - f(i + 2, k),
                )
            } else if i < 2 {
                one_sided(|j| f(j, k), i)
            } else {
                let (a, b) = one_sided(|j| f(n - 1 - j, k), n - 1 - i);
                (-a, b)
            };
            d1[i * dim + k] = a * c1;
            d2[i * dim + k] = b * c2;
        }
    }
    (d1, d2)
}

/// Unscaled one-sided stencils at offset `at ∈ {0, 1}` from an end sample `g(0)`.
fn one_sided<G: Fn(usize) -> f64>(g: G, at: usize) -> (f64, f64) {
    if at == 0 {
        (
            -25.0 * g(0) + 48.0 * g(1) - 36.0 * g(2) + 16.0 * g(3) - 3.0 * g(4),
            45.0 * g(0) - 154.0 * g(1) + 214.0 * g(2) - 156.0 * g(3) + 61.0 * g(4) - 10.0 * g(5),
        )
    } else {
        (
            -3.0 * g(0) - 10.0 * g(1) + 18.0 * g(2) - 6.0 * g(3) + g(4),
            10.0 * g(0) - 15.0 * g(1) - 4.0 * g(2) + 14.0 * g(3) - 6.0 * g(4) + g(5),
        )
    }
}

/// Continuous lift of the tangent angle of a planar curve.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AngleFunction {
    pub params: Vec<f64>,
    pub theta: Vec<f64>,
}

fn require_planar(c: &ArcCurve) -> Result<()> {
    if c.dim() != 2 {
        return Err(Error::Domain(format!("planar operation on a {}-dimensional curve", c.dim())));
    }
    Ok(())
}

fn lift(tangents: &[f64]) -> Result<Vec<f64>> {
    let n = tangents.len() / 2;
    let mut theta = Vec::with_capacity(n);
    theta.push(tangents[1].atan2(tangents[0]));
    for i in 1..n {
        let prev = &tangents[2 * (i - 1)..2 * i];
        let cur = &tangents[2 * i..2 * i + 2];
        let step = (prev[0] * cur[1] - prev[1] * cur[0]).atan2(prev[0] * cur[0] + prev[1] * cur[1]);
        if step.abs() >= std::f64::consts::PI - 1e-9 {
            return Err(Error::LiftFailure { index: i, step });
        }
        theta.push(theta[i - 1] + step);
    }
    Ok(theta)
}

/// Tangent angle θ with T = (cos θ, sin θ), lifted without 2π jumps; θ(0) ∈ (−π, π].
pub fn tangent_angle(c: &ArcCurve) -> Result<AngleFunction> {
    require_planar(c)?;
    let frame = c.frame()?;
    Ok(AngleFunction {
        params: c.params().to_vec(),
        theta: lift(&frame.tangent)?,
    })
}

/// Rotation number with its nearest integer and the rounding residual.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RotationNumber {
    pub value: f64,
    pub rounded: i64,
    pub residual: f64,
}

/// Total turning over 2π.
pub fn rotation_number(c: &ArcCurve) -> Result<RotationNumber> {
    let theta = tangent_angle(c)?.theta;
    let value = (theta[theta.len() - 1] - theta[0]) / std::f64::consts::TAU;
    let rounded = value.round();
    Ok(RotationNumber {
        value,
        rounded: rounded as i64,
        residual: (value - rounded).abs(),
    })
}

/// Signed curvature dθ/ds at each sample (fourth order on uniform pieces).
pub fn signed_curvature(c: &ArcCurve) -> Result<Vec<f64>> {
    require_planar(c)?;
    let mut out = vec![0.0; c.len()];
    for piece in c.piece_derivatives()? {
        let frame = piece.frame(2);
        let theta = lift(&frame.tangent)?;
        let (dtheta, _) = fd4(&theta, 1, piece.step);
        let off = *piece.range.start();
        for (i, (dt, sigma)) in dtheta.iter().zip(&frame.speed).enumerate() {
            out[off + i] = dt / sigma;
        }
    }
    Ok(out)
}

/// Discrete total variation of ⟨T, e₁⟩ over the samples.
pub fn tangent_e1_total_variation(c: &ArcCurve) -> Result<f64> {
    let frame = c.frame()?;
    let d = c.dim();
    Ok((1..c.len())
        .map(|i| (frame.tangent[i * d] - frame.tangent[(i - 1) * d]).abs())
        .sum())
}

/// Tangent defects at both ends relative to the tail direction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EndCheck {
    pub horizontal: bool,
    pub start_defect: f64,
    pub end_defect: f64,
}

pub fn ends_horizontal(c: &ArcCurve, tol: f64) -> Result<EndCheck> {
    let frame = c.frame()?;
    let start_defect = dist(frame.tangent_at(0), c.tail_direction());
    let end_defect = dist(frame.tangent_at(c.len() - 1), c.tail_direction());
    Ok(EndCheck {
        horizontal: start_defect <= tol && end_defect <= tol,
        start_defect,
        end_defect,
    })
}

// Five-point Gauss–Legendre rule on [0, 1].
const GL_NODES: [f64; 5] = [
    0.046_910_077_030_668_004,
    0.230_765_344_947_158_45,
    0.5,
    0.769_234_655_052_841_6,
    0.953_089_922_969_332,
];
const GL_WEIGHTS: [f64; 5] = [
    0.118_463_442_528_094_54,
    0.239_314_335_249_683_23,
    0.284_444_444_444_444_45,
    0.239_314_335_249_683_23,
    0.118_463_442_528_094_54,
];

/// Cubic-spline interpolant of a curve over cumulative chord length.
pub struct SplineCurve {
    coords: Vec<CubicSpline>,
    cumulative: Vec<f64>,
}

impl SplineCurve {
    pub fn through(c: &ArcCurve) -> Result<Self> {
        let n = c.len();
        let mut chord = Vec::with_capacity(n);
        chord.push(0.0);
        for i in 0..n - 1 {
            let l = c.segment_length(i);
            if l == 0.0 {
                return Err(Error::DegenerateSegment { index: i });
            }
            chord.push(chord[i] + l);
        }
        let coords = (0..c.dim())
            .map(|k| {
                let v: Vec<f64> = c.points().map(|p| p[k]).collect();
                CubicSpline::new(&chord, &v)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut out = Self {
            coords,
            cumulative: Vec::with_capacity(n),
        };
        out.cumulative.push(0.0);
        for i in 0..n - 1 {
            let l = out.arc_in(i, chord[i], chord[i + 1]);
            out.cumulative.push(out.cumulative[i] + l);
        }
        Ok(out)
    }

    pub fn length(&self) -> f64 {
        self.cumulative[self.cumulative.len() - 1]
    }

    fn speed(&self, i: usize, t: f64) -> f64 {
        self.coords
            .iter()
            .map(|s| s.eval_in(i, t).1.powi(2))
            .sum::<f64>()
            .sqrt()
    }

    fn arc_in(&self, i: usize, a: f64, b: f64) -> f64 {
        let h = b - a;
        GL_NODES
            .iter()
            .zip(&GL_WEIGHTS)
            .map(|(x, w)| w * self.speed(i, a + h * x))
            .sum::<f64>()
            * h
    }

    /// Position at spline arclength `sigma`.
    pub fn at_arclength(&self, sigma: f64) -> Vec<f64> {
        let knots = self.coords[0].knots();
        let n = knots.len();
        let i = match self.cumulative.partition_point(|&c| c <= sigma) {
            0 => 0,
            p if p >= n => n - 2,
            p => p - 1,
        };
        let (t0, t1) = (knots[i], knots[i + 1]);
        let (c0, c1) = (self.cumulative[i], self.cumulative[i + 1]);
        let target = sigma - c0;
        let mut t = t0 + (t1 - t0) * (target / (c1 - c0)).clamp(0.0, 1.0);
        for _ in 0..8 {
            let g = self.arc_in(i, t0, t) - target;
            let step = g / self.speed(i, t);
            t = (t - step).clamp(t0, t1);
            if step.abs() <= 1e-15 * (t1 - t0).max(1.0) {
                break;
            }
        }
        self.coords.iter().map(|s| s.eval_in(i, t).0).collect()
    }
}

/// Resamples `c` at `n_out` points equally spaced in arclength of its chord-length spline.
///
/// Output parameters start at `c.params()[0]` and advance by the arclength step.
/// Joints are dropped; the spline is global.
pub fn reparametrize_arclength(c: &ArcCurve, n_out: usize) -> Result<ArcCurve> {
    if n_out < 2 {
        return Err(Error::Domain(format!("n_out = {n_out} < 2")));
    }
    let spline = SplineCurve::through(c)?;
    let total = spline.length();
    let h = total / (n_out - 1) as f64;
    let s0 = c.params()[0];
    let mut params = Vec::with_capacity(n_out);
    let mut coords = Vec::with_capacity(n_out * c.dim());
    for k in 0..n_out {
        params.push(s0 + h * k as f64);
        if k == 0 {
            coords.extend_from_slice(c.point(0));
        } else if k + 1 == n_out {
            coords.extend_from_slice(c.point(c.len() - 1));
        } else {
            coords.extend(spline.at_arclength(h * k as f64));
        }
    }
    let mut out = ArcCurve::new(c.dim(), params, coords, c.kind())?;
    out.tail_direction = c.tail_direction.clone();
    out.truncation_radius = c.truncation_radius;
    Ok(out)
}

/// Returns `c` if piecewise uniform, otherwise its arclength resampling at the same count.
pub fn ensure_uniform(c: &ArcCurve) -> Result<std::borrow::Cow<'_, ArcCurve>> {
    if c.is_piecewise_uniform() {
        Ok(std::borrow::Cow::Borrowed(c))
    } else {
        Ok(std::borrow::Cow::Owned(reparametrize_arclength(c, c.len())?))
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub(crate) fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}
