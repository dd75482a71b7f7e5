//! Closed-form elastica and the curves assembled from them.
//!
//! Every family is evaluated pointwise through [`AnalyticCurve::eval`]; the
//! `*_curve` builders sample a family into an [`ArcCurve`] with gluing points
//! placed exactly on grid nodes.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2, TAU};

use serde::{Deserialize, Serialize};

use crate::curve::{self, ArcCurve, CurveKind};
use crate::error::{Error, Result};
use crate::specfun::{self, sech};

/// Position, unit tangent and signed curvature at one parameter value.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub position: [f64; 2],
    pub tangent: [f64; 2],
    pub curvature: f64,
    /// |dγ/dparameter|; 1 for arclength-parametrized families.
    pub speed: f64,
}

/// Constants of the teardrop elastica.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TeardropConstants {
    /// Modulus at which the wavelike arc closes up.
    pub m_t: f64,
    /// Half-width of the omitted parameter window, `arcsin √(1/(2m))`.
    pub alpha: f64,
    /// Dilation making bending energy equal length, `√(2m − 1)`.
    pub rescale: f64,
    /// |curvature| at the ends of the rescaled teardrop; equals √2.
    pub endpoint_curvature: f64,
    /// Length of the rescaled teardrop.
    pub l_hat: f64,
    /// `F(π − α, m)`: half the arclength of the unscaled teardrop.
    pub f_end: f64,
}

/// Signed x-displacement of the wavelike curve from its bottom point to parameter `x`.
fn closure_integral(m: f64) -> Result<f64> {
    let alpha = (1.0 / (2.0 * m)).sqrt().asin();
    let end = PI - alpha;
    Ok(2.0 * specfun::incomplete_e(end, m)? - specfun::incomplete_f(end, m)?)
}

impl TeardropConstants {
    pub fn compute() -> Result<Self> {
        let mut failure = None;
        let m_t = specfun::find_root(
            |m| match closure_integral(m) {
                Ok(v) => v,
                Err(e) => {
                    failure.get_or_insert(e);
                    f64::NAN
                }
            },
            0.6,
            0.9,
            specfun::ROOT_TOL,
        )?;
        if let Some(e) = failure {
            return Err(e);
        }
        let alpha = (1.0 / (2.0 * m_t)).sqrt().asin();
        let rescale = (2.0 * m_t - 1.0).sqrt();
        let f_end = specfun::incomplete_f(PI - alpha, m_t)?;
        Ok(Self {
            m_t,
            alpha,
            rescale,
            endpoint_curvature: (4.0 * m_t - 2.0).sqrt() / rescale,
            l_hat: 2.0 * rescale * f_end,
            f_end,
        })
    }

    /// Residual of the closure condition at `m_t`.
    pub fn closure_residual(&self) -> Result<f64> {
        closure_integral(self.m_t)
    }
}

/// Modulus of the figure-eight elastica: the root of `2E(π/2, m) = F(π/2, m)`.
pub fn figure_eight_modulus() -> Result<f64> {
    specfun::find_root(
        |m| {
            2.0 * specfun::complete_e(m).unwrap_or(f64::NAN)
                - specfun::complete_k(m).unwrap_or(f64::NAN)
        },
        0.5,
        0.95,
        specfun::ROOT_TOL,
    )
}

/// The closed-form families.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    Borderline,
    BorderlineAngle { phi: f64 },
    Serpent,
    Wavelike { m: f64 },
    Teardrop { constants: TeardropConstants },
    TeardropRescaled { constants: TeardropConstants },
    Pendant { constants: TeardropConstants },
    TwoTeardrop { constants: TeardropConstants },
    FigureEight { m: f64 },
    Line,
    Circle { radius: f64 },
    ThreeArcCompetitor,
}

/// A closed-form curve evaluator.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalyticCurve {
    pub family: Family,
}

fn borderline_point(s: f64) -> CurvePoint {
    let (sh, th) = (sech(s), s.tanh());
    CurvePoint {
        position: [s - 2.0 * th, 2.0 * sh],
        tangent: [1.0 - 2.0 * sh * sh, -2.0 * sh * th],
        curvature: 2.0 * sh,
        speed: 1.0,
    }
}

/// `log cot(φ/4)`: the borderline arclength at which the tangent makes angle −φ.
pub fn borderline_shift(phi: f64) -> f64 {
    (1.0 / (phi / 4.0).tan()).ln()
}

fn borderline_angle_point(phi: f64, s: f64) -> CurvePoint {
    let shift = borderline_shift(phi);
    let mut p = borderline_point(s + shift);
    let origin = borderline_point(shift).position;
    p.position = [p.position[0] - origin[0], p.position[1] - origin[1]];
    p
}

fn serpent_point(s: f64) -> CurvePoint {
    if s >= 0.0 {
        borderline_angle_point(FRAC_PI_2, s)
    } else {
        let p = borderline_angle_point(FRAC_PI_2, -s);
        CurvePoint {
            position: [-p.position[0], -p.position[1]],
            tangent: p.tangent,
            curvature: -p.curvature,
            speed: 1.0,
        }
    }
}

/// Wavelike elastica at parameter `x`; speed is `1/√(1 − m sin²x)`.
fn wavelike_point(m: f64, x: f64) -> Result<CurvePoint> {
    let s = x.sin();
    let delta = (1.0 - m * s * s).sqrt();
    let e = specfun::incomplete_e(x, m)?;
    let f = specfun::incomplete_f(x, m)?;
    Ok(CurvePoint {
        position: [2.0 * e - f, -2.0 * m.sqrt() * x.cos()],
        tangent: [2.0 * delta * delta - 1.0, 2.0 * m.sqrt() * delta * s],
        curvature: 2.0 * m.sqrt() * x.cos(),
        speed: 1.0 / delta,
    })
}

/// Wavelike elastica at arclength `u` measured from its bottom point.
fn wavelike_at_arclength(m: f64, u: f64) -> Result<CurvePoint> {
    let x = specfun::jacobi_amplitude(u, m)?;
    let mut p = wavelike_point(m, x)?;
    p.speed = 1.0;
    Ok(p)
}

fn teardrop_rescaled_point(c: &TeardropConstants, s: f64) -> Result<CurvePoint> {
    let lambda = c.rescale;
    let p = wavelike_at_arclength(c.m_t, -c.f_end + s / lambda)?;
    let start = wavelike_point(c.m_t, -PI + c.alpha)?.position;
    Ok(CurvePoint {
        position: [
            lambda * (p.position[0] - start[0]),
            lambda * (p.position[1] - start[1]),
        ],
        tangent: p.tangent,
        curvature: p.curvature / lambda,
        speed: 1.0,
    })
}

fn three_arc_point(s: f64) -> CurvePoint {
    let r = 1.0 / SQRT_2;
    // Arc lengths r·π/3, r·5π/3, r·π/3 with curvature signs +, −, +; start at the origin along e₁.
    let arcs = [(r * PI / 3.0, 1.0), (r * 5.0 * PI / 3.0, -1.0), (r * PI / 3.0, 1.0)];
    let mut pos = [0.0, 0.0];
    let mut theta = 0.0_f64;
    let mut rest = s;
    for (i, &(len, sign)) in arcs.iter().enumerate() {
        let run = if i + 1 == arcs.len() { rest } else { rest.min(len) };
        let k = sign / r;
        let end = theta + k * run;
        // Exact circular arc from angle `theta` to `end`.
        pos[0] += (end.sin() - theta.sin()) / k;
        pos[1] += (theta.cos() - end.cos()) / k;
        if rest <= len || i + 1 == arcs.len() {
            return CurvePoint {
                position: pos,
                tangent: [end.cos(), end.sin()],
                curvature: k,
                speed: 1.0,
            };
        }
        theta = end;
        rest -= len;
    }
    unreachable!("three arcs cover the parameter range")
}

impl AnalyticCurve {
    pub fn new(family: Family) -> Result<Self> {
        match family {
            Family::BorderlineAngle { phi } if !(phi > 0.0 && phi <= PI) => {
                Err(Error::Domain(format!("borderline angle φ = {phi} outside (0, π]")))
            }
            Family::Wavelike { m } | Family::FigureEight { m } if !(m > 0.0 && m < 1.0) => {
                Err(Error::Domain(format!("wavelike modulus m = {m} outside (0, 1)")))
            }
            Family::Circle { radius } if !(radius > 0.0) => {
                Err(Error::Domain(format!("circle radius {radius}")))
            }
            _ => Ok(Self { family }),
        }
    }

    /// Closed parameter domain; infinite ends are allowed.
    pub fn domain(&self) -> (f64, f64) {
        match self.family {
            Family::Borderline | Family::Serpent | Family::Line | Family::Wavelike { .. } => {
                (f64::NEG_INFINITY, f64::INFINITY)
            }
            Family::BorderlineAngle { .. } => (0.0, f64::INFINITY),
            Family::Pendant { .. } => (f64::NEG_INFINITY, f64::INFINITY),
            Family::Teardrop { constants: c } => (-PI + c.alpha, PI - c.alpha),
            Family::TeardropRescaled { constants: c } => (0.0, c.l_hat),
            Family::TwoTeardrop { constants: c } => (0.0, 4.0 * c.f_end),
            Family::FigureEight { m } => (0.0, 4.0 * specfun::complete_k(m).unwrap_or(f64::NAN)),
            Family::Circle { radius } => (0.0, TAU * radius),
            Family::ThreeArcCompetitor => (0.0, 7.0 * SQRT_2 * PI / 6.0),
        }
    }

    /// Interior parameters where the curve is glued from different pieces.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self.family {
            Family::Serpent => vec![0.0],
            Family::Pendant { constants: c } => vec![0.0, c.l_hat],
            Family::TwoTeardrop { constants: c } => vec![2.0 * c.f_end],
            Family::ThreeArcCompetitor => {
                let r = 1.0 / SQRT_2;
                vec![r * PI / 3.0, r * 2.0 * PI]
            }
            _ => Vec::new(),
        }
    }

    pub fn is_arclength(&self) -> bool {
        !matches!(self.family, Family::Wavelike { .. } | Family::Teardrop { .. })
    }

    /// Closed-form adapted energy E where the family has one.
    pub fn closed_form_energy(&self) -> Option<f64> {
        match self.family {
            Family::Borderline => Some(8.0),
            Family::BorderlineAngle { phi } => Some(8.0 * (phi / 4.0).sin().powi(2)),
            Family::Serpent => Some(8.0 - 4.0 * SQRT_2),
            Family::Line => Some(0.0),
            Family::Circle { radius } => Some(PI / radius + TAU * radius),
            Family::ThreeArcCompetitor => Some(7.0 * SQRT_2 * PI / 3.0),
            _ => None,
        }
    }

    pub fn eval(&self, s: f64) -> Result<CurvePoint> {
        let (a, b) = self.domain();
        if !(s >= a - 1e-12 * a.abs().max(1.0) && s <= b + 1e-12 * b.abs().max(1.0)) {
            return Err(Error::Domain(format!("parameter {s} outside [{a}, {b}]")));
        }
        match self.family {
            Family::Borderline => Ok(borderline_point(s)),
            Family::BorderlineAngle { phi } => Ok(borderline_angle_point(phi, s)),
            Family::Serpent => Ok(serpent_point(s)),
            Family::Wavelike { m } => wavelike_point(m, s),
            Family::Teardrop { constants: c } => wavelike_point(c.m_t, s),
            Family::TeardropRescaled { constants: c } => teardrop_rescaled_point(&c, s.clamp(0.0, c.l_hat)),
            Family::Pendant { constants: c } => {
                if s <= 0.0 {
                    Ok(serpent_point(s))
                } else if s < c.l_hat {
                    teardrop_rescaled_point(&c, s)
                } else {
                    let p = borderline_angle_point(FRAC_PI_2, s - c.l_hat);
                    Ok(CurvePoint {
                        position: [p.position[0], -p.position[1]],
                        tangent: [p.tangent[0], -p.tangent[1]],
                        curvature: -p.curvature,
                        speed: 1.0,
                    })
                }
            }
            Family::TwoTeardrop { constants: c } => {
                let half = 2.0 * c.f_end;
                let start = wavelike_point(c.m_t, -PI + c.alpha)?.position;
                if s <= half {
                    let p = wavelike_at_arclength(c.m_t, -c.f_end + s)?;
                    Ok(CurvePoint {
                        position: [p.position[0] - start[0], p.position[1] - start[1]],
                        ..p
                    })
                } else {
                    let p = wavelike_at_arclength(c.m_t, -c.f_end + (s - half))?;
                    // Point reflection through the shared endpoint, now at the origin.
                    Ok(CurvePoint {
                        position: [start[0] - p.position[0], start[1] - p.position[1]],
                        tangent: [-p.tangent[0], -p.tangent[1]],
                        ..p
                    })
                }
            }
            Family::FigureEight { m } => wavelike_at_arclength(m, s),
            Family::Line => Ok(CurvePoint {
                position: [s, 0.0],
                tangent: [1.0, 0.0],
                curvature: 0.0,
                speed: 1.0,
            }),
            Family::Circle { radius } => {
                let a = s / radius;
                Ok(CurvePoint {
                    position: [radius * a.sin(), radius * (1.0 - a.cos())],
                    tangent: [a.cos(), a.sin()],
                    curvature: 1.0 / radius,
                    speed: 1.0,
                })
            }
            Family::ThreeArcCompetitor => Ok(three_arc_point(s)),
        }
    }

    /// Energy integrand ½k² + (1 − ⟨T, e₁⟩) per unit parameter.
    pub fn energy_density(&self, s: f64) -> Result<f64> {
        let p = self.eval(s)?;
        Ok((0.5 * p.curvature * p.curvature + 1.0 - p.tangent[0]) * p.speed)
    }
}

/// Samples `curve` at `n` uniform parameter values on `[a, b]`.
///
/// Breakpoints that land on grid nodes become joints of the result.
pub fn sample_analytic(curve: &AnalyticCurve, a: f64, b: f64, n: usize) -> Result<ArcCurve> {
    if !(a < b) || n < 2 {
        return Err(Error::Domain(format!("sampling [{a}, {b}] with {n} samples")));
    }
    let (lo, hi) = curve.domain();
    if a < lo - 1e-12 * lo.abs().max(1.0) || b > hi + 1e-12 * hi.abs().max(1.0) {
        return Err(Error::Domain(format!(
            "[{a}, {b}] exits the family domain [{lo}, {hi}]"
        )));
    }
    let h = (b - a) / (n - 1) as f64;
    let params: Vec<f64> = (0..n).map(|i| a + h * i as f64).collect();
    let mut coords = Vec::with_capacity(2 * n);
    for &s in &params {
        coords.extend(curve.eval(s)?.position);
    }
    let joints: Vec<usize> = curve
        .breakpoints()
        .into_iter()
        .filter(|&bp| bp > a && bp < b)
        .filter_map(|bp| {
            let i = ((bp - a) / h).round() as usize;
            ((params[i] - bp).abs() <= 1e-9 * h).then_some(i)
        })
        .collect();
    ArcCurve::new(2, params, coords, CurveKind::OpenArc)?.with_joints(joints)
}

fn closed(mut c: ArcCurve, tol: f64) -> Result<ArcCurve> {
    let gap = c.closure_gap();
    if gap > tol {
        return Err(Error::Assembly(format!("closure gap {gap} exceeds {tol}")));
    }
    let first = c.point(0).to_vec();
    let n = c.len();
    let mut coords = c.coords().to_vec();
    coords[2 * (n - 1)..].copy_from_slice(&first);
    let joints = c.joints().to_vec();
    c = ArcCurve::new(2, c.params().to_vec(), coords, CurveKind::C0Closed)?;
    c.with_joints(joints)
}

pub(crate) fn complete(c: ArcCurve, radius: f64) -> Result<ArcCurve> {
    Ok(c.with_kind(CurveKind::TruncatedComplete)?.with_truncation_radius(radius))
}

/// Borderline elastica on `[−R, R]`.
pub fn borderline_curve(radius: f64, n: usize) -> Result<ArcCurve> {
    let c = sample_analytic(&AnalyticCurve::new(Family::Borderline)?, -radius, radius, n)?;
    complete(c, radius)
}

/// Borderline elastica started at tangent angle −φ, on `[0, R]`; only its far end is a tail.
pub fn borderline_angle_curve(phi: f64, radius: f64, n: usize) -> Result<ArcCurve> {
    let c = sample_analytic(&AnalyticCurve::new(Family::BorderlineAngle { phi })?, 0.0, radius, n)?;
    Ok(c.with_truncation_radius(radius))
}

/// Elastic serpent on `[−R, R]`; `n` is rounded up to odd so the inflection is a node.
pub fn serpent_curve(radius: f64, n: usize) -> Result<ArcCurve> {
    let n = n | 1;
    let c = sample_analytic(&AnalyticCurve::new(Family::Serpent)?, -radius, radius, n)?;
    complete(c, radius)
}

/// Unscaled teardrop in its wavelike parameter, closed up.
pub fn teardrop_curve(constants: &TeardropConstants, n: usize) -> Result<ArcCurve> {
    let family = AnalyticCurve::new(Family::Teardrop {
        constants: *constants,
    })?;
    let (a, b) = family.domain();
    closed(sample_analytic(&family, a, b, n)?, 1e-9)
}

/// Teardrop dilated by `√(2m_T − 1)` and parametrized by arclength from its tip.
pub fn teardrop_rescaled_curve(constants: &TeardropConstants, n: usize) -> Result<ArcCurve> {
    let family = AnalyticCurve::new(Family::TeardropRescaled {
        constants: *constants,
    })?;
    closed(sample_analytic(&family, 0.0, constants.l_hat, n)?, 1e-9)
}

/// Teardrop followed by its point reflection through the tip; `n` is rounded up to odd.
pub fn two_teardrop_curve(constants: &TeardropConstants, n: usize) -> Result<ArcCurve> {
    let family = AnalyticCurve::new(Family::TwoTeardrop {
        constants: *constants,
    })?;
    closed(sample_analytic(&family, 0.0, 4.0 * constants.f_end, n | 1)?, 1e-9)
}

/// Elastic pendant with `n_loop` samples on the teardrop and tails of length ≈ `R`.
///
/// Tail lengths are rounded up to whole grid steps so both gluing points are nodes.
pub fn pendant_curve(constants: &TeardropConstants, radius: f64, n_loop: usize) -> Result<ArcCurve> {
    if n_loop < 7 {
        return Err(Error::Domain(format!("pendant loop needs ≥ 7 samples, got {n_loop}")));
    }
    let h = constants.l_hat / (n_loop - 1) as f64;
    let k = (radius / h).ceil() as usize;
    let tail = k as f64 * h;
    let n = 2 * k + n_loop;
    let family = AnalyticCurve::new(Family::Pendant {
        constants: *constants,
    })?;
    let c = sample_analytic(&family, -tail, constants.l_hat + tail, n)?;
    if c.joints() != [k, k + n_loop - 1] {
        return Err(Error::Assembly(format!(
            "pendant gluing nodes {:?} differ from expected [{k}, {}]",
            c.joints(),
            k + n_loop - 1
        )));
    }
    complete(c, tail)
}

/// Closed figure-eight elastica from its bottom point (tangent e₁).
pub fn figure_eight_curve(n: usize) -> Result<ArcCurve> {
    let family = AnalyticCurve::new(Family::FigureEight {
        m: figure_eight_modulus()?,
    })?;
    let (a, b) = family.domain();
    closed(sample_analytic(&family, a, b, n)?, 1e-9)
}

/// Segment from the origin along e₁.
pub fn line_curve(length: f64, n: usize) -> Result<ArcCurve> {
    sample_analytic(&AnalyticCurve::new(Family::Line)?, 0.0, length, n)
}

/// Counterclockwise circle through the origin with tangent e₁ there.
pub fn circle_curve(radius: f64, n: usize) -> Result<ArcCurve> {
    let family = AnalyticCurve::new(Family::Circle { radius })?;
    closed(sample_analytic(&family, 0.0, TAU * radius, n)?, 1e-12 * radius)
}

/// Three-arc competitor; `n` is rounded to `7k + 1` so arc ends fall on nodes.
pub fn three_arc_curve(n: usize) -> Result<ArcCurve> {
    let k = n.saturating_sub(1).div_ceil(7).max(1);
    let family = AnalyticCurve::new(Family::ThreeArcCompetitor)?;
    let (a, b) = family.domain();
    closed(sample_analytic(&family, a, b, 7 * k + 1)?, 1e-9)
}

/// Tolerance on |T − e₁| at a cut-and-paste junction.
pub const JOIN_TOL: f64 = 1e-6;

/// Concatenates pieces with horizontal segments of the given lengths between them.
///
/// Each piece is translated to continue from the previous end; every junction
/// becomes a joint. Zero-length segments glue pieces directly.
pub fn cut_and_paste(pieces: &[ArcCurve], segments: &[f64]) -> Result<ArcCurve> {
    if pieces.is_empty() || segments.len() + 1 != pieces.len() {
        return Err(Error::Domain(format!(
            "{} pieces need {} segments, got {}",
            pieces.len(),
            pieces.len().saturating_sub(1),
            segments.len()
        )));
    }
    if pieces.iter().any(|p| p.dim() != 2) || segments.iter().any(|d| !(*d >= 0.0)) {
        return Err(Error::Domain("cut-and-paste needs planar pieces and segment lengths ≥ 0".into()));
    }
    let mut params: Vec<f64> = pieces[0].params().to_vec();
    let mut coords: Vec<f64> = pieces[0].coords().to_vec();
    let mut joints: Vec<usize> = pieces[0].joints().to_vec();
    let mut step = step_of(&pieces[0]);
    let frames = pieces.iter().map(|p| p.frame()).collect::<Result<Vec<_>>>()?;
    for (i, piece) in pieces.iter().enumerate().skip(1) {
        let out_t = frames[i - 1].tangent_at(pieces[i - 1].len() - 1);
        let in_t = frames[i].tangent_at(0);
        for (t, index) in [(out_t, i - 1), (in_t, i)] {
            let defect = curve::dist(t, &[1.0, 0.0]);
            if defect > JOIN_TOL {
                return Err(Error::Join { index, defect });
            }
        }
        let d = segments[i - 1];
        if d > 0.0 {
            let count = ((d / step).ceil() as usize).max(crate::curve::MIN_PIECE_SAMPLES - 1);
            let h = d / count as f64;
            let (x0, y0, s0) = (coords[coords.len() - 2], coords[coords.len() - 1], params[params.len() - 1]);
            joints.push(params.len() - 1);
            for j in 1..=count {
                params.push(s0 + h * j as f64);
                coords.extend([x0 + h * j as f64, y0]);
            }
        }
        let end = [coords[coords.len() - 2], coords[coords.len() - 1]];
        let start = piece.point(0);
        let shift = [end[0] - start[0], end[1] - start[1]];
        let s_shift = params[params.len() - 1] - piece.params()[0];
        let base = params.len() - 1;
        joints.push(base);
        joints.extend(piece.joints().iter().map(|j| base + j));
        for (j, p) in piece.points().enumerate().skip(1) {
            params.push(piece.params()[j] + s_shift);
            coords.extend([p[0] + shift[0], p[1] + shift[1]]);
        }
        step = step_of(piece);
    }
    let first_tail = pieces[0].kind() == CurveKind::TruncatedComplete;
    let last = &pieces[pieces.len() - 1];
    let kind = if first_tail && last.kind() == CurveKind::TruncatedComplete {
        CurveKind::TruncatedComplete
    } else {
        CurveKind::OpenArc
    };
    let mut out = ArcCurve::new(2, params, coords, kind)?.with_joints(joints)?;
    let radii: Vec<f64> = [pieces[0].truncation_radius(), last.truncation_radius()]
        .into_iter()
        .flatten()
        .collect();
    if let Some(r) = radii.into_iter().reduce(f64::min) {
        out = out.with_truncation_radius(r);
    }
    Ok(out)
}

fn step_of(c: &ArcCurve) -> f64 {
    let p = c.params();
    (p[p.len() - 1] - p[0]) / (p.len() - 1) as f64
}

/// Splits a curve at sample `i`; both halves keep the shared node.
pub fn split_at(c: &ArcCurve, i: usize) -> Result<(ArcCurve, ArcCurve)> {
    if i == 0 || i + 1 >= c.len() {
        return Err(Error::Domain(format!("split index {i} not interior")));
    }
    let d = c.dim();
    let make = |range: std::ops::RangeInclusive<usize>, kind: CurveKind| -> Result<ArcCurve> {
        let (a, b) = (*range.start(), *range.end());
        let joints = c
            .joints()
            .iter()
            .filter(|&&j| j > a && j < b)
            .map(|j| j - a)
            .collect();
        let mut piece = ArcCurve::new(
            d,
            c.params()[a..=b].to_vec(),
            c.coords()[a * d..(b + 1) * d].to_vec(),
            kind,
        )?
        .with_joints(joints)?;
        if let Some(r) = c.truncation_radius() {
            piece = piece.with_truncation_radius(r);
        }
        Ok(piece)
    };
    // Halves of a complete curve keep one tail each and stay tail-bearing.
    let kind = if c.kind() == CurveKind::TruncatedComplete {
        CurveKind::TruncatedComplete
    } else {
        CurveKind::OpenArc
    };
    Ok((make(0..=i, kind)?, make(i..=c.len() - 1, kind)?))
}

/// Lines of length `tail` around a figure-eight cut at its top point, where a
/// horizontal segment of length `gap` is inserted.
pub fn figure_eight_assembly(n_loop: usize, tail: f64, gap: f64) -> Result<ArcCurve> {
    let eight = figure_eight_curve(n_loop | 1)?;
    let mid = eight.len() / 2;
    let (lower, upper) = split_at(&eight, mid)?;
    let h = step_of(&eight);
    let n_tail = ((tail / h).ceil() as usize).max(6) + 1;
    let left = line_curve(tail, n_tail)?;
    let right = line_curve(tail, n_tail)?;
    let mut pieces = vec![left, lower, upper, right];
    for p in pieces.iter_mut() {
        *p = p.clone().with_truncation_radius(tail);
    }
    pieces[0] = pieces[0].clone().with_kind(CurveKind::TruncatedComplete)?;
    pieces[3] = pieces[3].clone().with_kind(CurveKind::TruncatedComplete)?;
    cut_and_paste(&pieces, &[0.0, gap, 0.0])
}

/// Borderline elastica on `[−R, R]` followed by a full circle of `radius` and a line of length `R`.
pub fn borderline_circle_assembly(radius_r: f64, n: usize, circle_radius: f64) -> Result<ArcCurve> {
    let b = borderline_curve(radius_r, n)?;
    let h = step_of(&b);
    let n_circle = ((TAU * circle_radius / h).ceil() as usize).max(12) + 1;
    let circle = circle_curve(circle_radius, n_circle)?;
    let n_line = (radius_r / h).ceil() as usize + 1;
    let line = complete(line_curve(radius_r, n_line)?, radius_r)?;
    cut_and_paste(&[b, circle, line], &[0.0, 0.0])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn borderline_closed_forms() {
        let p = borderline_point(0.0);
        assert_eq!(p.position, [0.0, 2.0]);
        assert_eq!(p.curvature, 2.0);
        for &s in &[-2.0, 0.0, 1.3] {
            let theta = 4.0 * f64::exp(s).atan();
            let t = borderline_point(s).tangent;
            assert!((t[0] - theta.cos()).abs() < 1e-14 && (t[1] - theta.sin()).abs() < 1e-14);
        }
        let far = borderline_point(40.0).tangent;
        assert!((far[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn borderline_curvature_solves_elastica_ode() {
        // k'' + k³/2 − k = 0, with k'' by central differences of the closed form.
        let k = |s: f64| borderline_point(s).curvature;
        for &s in &[-2.0, 0.0, 1.3] {
            let h = 1e-3;
            let kss = (k(s + h) - 2.0 * k(s) + k(s - h)) / (h * h);
            assert!((kss + 0.5 * k(s).powi(3) - k(s)).abs() < 1e-6);
        }
    }

    #[test]
    fn angle_shift_values() {
        assert!(borderline_shift(PI).abs() < 1e-15);
        assert!((borderline_shift(FRAC_PI_2) - (1.0 + SQRT_2).ln()).abs() < 1e-15);
        let p = borderline_angle_point(FRAC_PI_2, 0.0);
        assert_eq!(p.position, [0.0, 0.0]);
        assert!((p.curvature - SQRT_2).abs() < 1e-14);
        assert!(p.tangent[0].abs() < 1e-15 && (p.tangent[1] + 1.0).abs() < 1e-15);
        assert!(AnalyticCurve::new(Family::BorderlineAngle { phi: 0.0 }).is_err());
    }

    #[test]
    fn serpent_is_odd() {
        for &s in &[0.5, 2.0, 7.0] {
            let (a, b) = (serpent_point(s).position, serpent_point(-s).position);
            assert!((a[0] + b[0]).abs() < 1e-14 && (a[1] + b[1]).abs() < 1e-14);
        }
        assert_eq!(serpent_point(0.0).position, [0.0, 0.0]);
    }

    #[test]
    fn wavelike_values() {
        let m = 0.5;
        let p = wavelike_point(m, 0.0).unwrap();
        assert_eq!(p.position, [0.0, -2.0 * m.sqrt()]);
        assert!(wavelike_point(m, FRAC_PI_2).unwrap().curvature.abs() < 1e-16);
        assert!(AnalyticCurve::new(Family::Wavelike { m: 1.0 }).is_err());
    }

    #[test]
    fn teardrop_constants_match_reported_modulus() {
        let c = TeardropConstants::compute().unwrap();
        assert!((c.m_t - 0.731183).abs() < 1e-6);
        assert!((c.endpoint_curvature - SQRT_2).abs() < 1e-10);
        assert!(c.closure_residual().unwrap().abs() < 1e-10);
    }

    #[test]
    fn pendant_pieces_meet_with_matching_tangent_and_curvature() {
        let c = TeardropConstants::compute().unwrap();
        let f = AnalyticCurve::new(Family::Pendant { constants: c }).unwrap();
        for &s in &[0.0, c.l_hat] {
            let eps = 1e-9;
            let (a, b) = (f.eval(s - eps).unwrap(), f.eval(s + eps).unwrap());
            assert!(curve::dist(&a.position, &b.position) < 1e-8);
            assert!(curve::dist(&a.tangent, &b.tangent) < 1e-8);
            assert!((a.curvature - b.curvature).abs() < 1e-6);
        }
        let (p0, p1) = (f.eval(0.0).unwrap(), f.eval(c.l_hat).unwrap());
        assert!(curve::dist(&p0.position, &p1.position) < 1e-9);
        assert!((curve::dot(&p0.tangent, &p1.tangent) + 1.0).abs() < 1e-8);
    }

    #[test]
    fn three_arc_closes_with_opposite_tangents() {
        let f = AnalyticCurve::new(Family::ThreeArcCompetitor).unwrap();
        let (a, b) = f.domain();
        let (p, q) = (f.eval(a).unwrap(), f.eval(b).unwrap());
        assert!(curve::dist(&p.position, &q.position) < 1e-14);
        assert!((curve::dot(&p.tangent, &q.tangent) + 1.0).abs() < 1e-14);
    }

    #[test]
    fn sampling_rejects_out_of_domain() {
        let c = TeardropConstants::compute().unwrap();
        let f = AnalyticCurve::new(Family::Teardrop { constants: c }).unwrap();
        assert!(sample_analytic(&f, -PI, PI, 11).is_err());
    }
}
