//! Optimality perturbations, threshold experiments and randomized energy-bound sweeps.

use std::f64::consts::SQRT_2;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curve::{self, ArcCurve, CurveKind};
use crate::energy::{self, EnergyReport};
use crate::error::{Error, Result};
use crate::flow::{self, FlowConfig, StopCriteria, StopReason};
use crate::geometry::{self, Classification, Tolerances};
use crate::specfun;
use crate::zoo::{self, AnalyticCurve, Family, TeardropConstants};

/// Adapted energy of the elastic serpent.
pub const SERPENT_ENERGY: f64 = 8.0 - 4.0 * SQRT_2;

/// Lower quadratic constant of the serpent's graph near its inflection: 90% of the
/// curvature bound √2/2.
pub const SERPENT_BETA: f64 = 0.9 * SQRT_2 / 2.0;

fn transition(u: f64) -> f64 {
    if u > 0.0 {
        (-1.0 / u).exp()
    } else {
        0.0
    }
}

/// Even C^∞ cutoff: 1 on |x| ≤ 1/2, 0 on |x| ≥ 1, non-increasing in |x|.
pub fn cutoff(x: f64) -> f64 {
    let t = 2.0 * x.abs() - 1.0;
    if t <= 0.0 {
        1.0
    } else if t >= 1.0 {
        0.0
    } else {
        let (a, b) = (transition(1.0 - t), transition(t));
        a / (a + b)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PerturbationKind {
    /// Graph of `ρ²(z⁵ + αz)` blended into the serpent at its inflection.
    SerpentQuintic,
    /// Graphs of `±ρ²(z⁴ + α)` blended into the two pendant branches at the contact.
    PendantQuartic,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerturbationSpec {
    pub rho: f64,
    pub alpha: f64,
    pub kind: PerturbationKind,
}

impl PerturbationSpec {
    pub fn serpent(rho: f64, alpha: f64) -> Self {
        Self {
            rho,
            alpha,
            kind: PerturbationKind::SerpentQuintic,
        }
    }

    pub fn pendant(rho: f64, alpha: f64) -> Self {
        Self {
            rho,
            alpha,
            kind: PerturbationKind::PendantQuartic,
        }
    }

    fn validate(&self, kind: PerturbationKind) -> Result<()> {
        if self.kind != kind {
            return Err(Error::Config(format!("expected a {kind:?} perturbation")));
        }
        if !(self.alpha >= 0.0 && self.alpha <= 1.0) {
            return Err(Error::Config(format!("α = {} outside [0, 1]", self.alpha)));
        }
        if !(self.rho > 0.0 && self.rho <= 1.0) {
            return Err(Error::Window(format!("ρ = {} outside (0, 1]", self.rho)));
        }
        Ok(())
    }
}

/// Uniform parameter grid covering `[a, b]` with step at most `spacing`.
fn grid(a: f64, b: f64, spacing: f64) -> Result<Vec<f64>> {
    if !(spacing > 0.0 && b > a) {
        return Err(Error::Config(format!("grid [{a}, {b}] with spacing {spacing}")));
    }
    let n = ((b - a) / spacing).ceil() as usize + 1;
    let h = (b - a) / (n - 1) as f64;
    Ok((0..n).map(|i| a + h * i as f64).collect())
}

/// Parameter interval around `s0` on which the curve stays in the strip |y| < ρ.
fn strip_window(curve: &AnalyticCurve, s0: f64, rho: f64) -> Result<(f64, f64)> {
    let y = |s: f64| curve.eval(s).map(|p| p.position[1]).unwrap_or(f64::NAN);
    let exit = |dir: f64| -> Result<f64> {
        let mut far = s0 + dir * rho;
        while y(far).abs() < rho {
            far += dir * rho;
            if (far - s0).abs() > 4.0 {
                return Err(Error::Window(format!("branch at s = {s0} does not leave the strip |y| < {rho}")));
            }
        }
        let target = y(far).signum() * rho;
        specfun::find_root(|s| y(s) - target, s0, far, 1e-15)
    };
    Ok((exit(-1.0)?, exit(1.0)?))
}

/// Serpent with its inflection replaced by the graph `x = w_α(z)`, `z = −y`,
/// sampled on `[−R, R]`.
///
/// `w_α = (1 − ψ(z/ρ))v + ρ²ψ(z/ρ)(z⁵ + αz)` where `x = v(z)` is the serpent near 0.
pub fn perturb_serpent(spec: &PerturbationSpec, radius: f64, spacing: f64) -> Result<ArcCurve> {
    spec.validate(PerturbationKind::SerpentQuintic)?;
    if spec.rho >= SERPENT_BETA / 4.0 {
        return Err(Error::Window(format!(
            "ρ = {} must stay below β/4 = {}",
            spec.rho,
            SERPENT_BETA / 4.0
        )));
    }
    let serpent = AnalyticCurve::new(Family::Serpent)?;
    let (lo, hi) = strip_window(&serpent, 0.0, spec.rho)?;
    let params = grid(-radius, radius, spacing)?;
    let (rho, alpha) = (spec.rho, spec.alpha);
    let mut coords = Vec::with_capacity(2 * params.len());
    let mut window: Vec<(f64, f64)> = Vec::new();
    for &s in &params {
        let p = serpent.eval(s)?.position;
        let (mut x, y) = (p[0], p[1]);
        if s > lo && s < hi {
            let z = -y;
            let psi = cutoff(z / rho);
            if z.abs() >= 0.5 * rho && x.abs() < SERPENT_BETA * z * z {
                return Err(Error::Monotonicity(format!(
                    "serpent graph |v({z})| = {} below βz²",
                    x.abs()
                )));
            }
            x = (1.0 - psi) * x + psi * rho * rho * (z.powi(5) + alpha * z);
            window.push((z, x));
        }
        coords.extend([x, y]);
    }
    let floor = if alpha > 0.0 { 0.0 } else { -1e-14 };
    for w in window.windows(2) {
        let slope = (w[1].1 - w[0].1) / (w[1].0 - w[0].0);
        if !(slope > floor) {
            return Err(Error::Monotonicity(format!(
                "w_α' = {slope} ≤ 0 near z = {}; ρ too large for the serpent graph",
                w[0].0
            )));
        }
    }
    let c = ArcCurve::new(2, params, coords, CurveKind::OpenArc)?;
    zoo::complete(c, radius)
}

/// Pendant with both branches near the tangential contact replaced by the graphs
/// `x = ±ρ²(y⁴ + α)` through the ψ-blend, sampled on `[−R, L̂ + R]`.
///
/// The branches stay on their original sides, so the gap at `y = 0` is `2αρ²`.
pub fn perturb_pendant(
    spec: &PerturbationSpec,
    constants: &TeardropConstants,
    radius: f64,
    spacing: f64,
) -> Result<ArcCurve> {
    spec.validate(PerturbationKind::PendantQuartic)?;
    let pendant = AnalyticCurve::new(Family::Pendant {
        constants: *constants,
    })?;
    let contacts = [0.0, constants.l_hat];
    let windows = contacts
        .iter()
        .map(|&s0| strip_window(&pendant, s0, spec.rho))
        .collect::<Result<Vec<_>>>()?;
    if windows[0].1 >= windows[1].0 {
        return Err(Error::Window("the two contact windows overlap".into()));
    }
    // Side of each branch: sign of x where the branch leaves the strip.
    let mut sides = [0.0; 2];
    for (k, &(lo, hi)) in windows.iter().enumerate() {
        let a = pendant.eval(lo)?.position[0].signum();
        let b = pendant.eval(hi)?.position[0].signum();
        if a != b {
            return Err(Error::Window(format!("branch {k} crosses the contact line inside the strip")));
        }
        sides[k] = a;
    }
    if sides[0] == sides[1] {
        return Err(Error::Window("both branches lie on the same side of the contact".into()));
    }
    let (rho, alpha) = (spec.rho, spec.alpha);
    let params = grid(-radius, constants.l_hat + radius, spacing)?;
    let mut coords = Vec::with_capacity(2 * params.len());
    for &s in &params {
        let p = pendant.eval(s)?.position;
        let (mut x, y) = (p[0], p[1]);
        if let Some(k) = windows.iter().position(|&(lo, hi)| s > lo && s < hi) {
            let psi = cutoff(y / rho);
            let quartic = sides[k] * rho * rho * (y.powi(4) + alpha);
            if y.abs() >= 0.5 * rho && quartic.abs() > x.abs() {
                return Err(Error::Monotonicity(format!(
                    "quartic graph exceeds the pendant branch at y = {y}"
                )));
            }
            x = (1.0 - psi) * x + psi * quartic;
        }
        coords.extend([x, y]);
    }
    let c = ArcCurve::new(2, params, coords, CurveKind::OpenArc)?;
    zoo::complete(c, radius)
}

/// One Gaussian bump `a·exp(−((x − c)/w)²)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bump {
    pub amplitude: f64,
    pub center: f64,
    pub width: f64,
}

pub fn bump_sum(bumps: &[Bump], x: f64) -> f64 {
    bumps
        .iter()
        .map(|b| b.amplitude * (-((x - b.center) / b.width).powi(2)).exp())
        .sum()
}

/// Graph of a bump sum over `[−R, R]`, parametrized by `x`.
pub fn graph_curve(bumps: &[Bump], radius: f64, spacing: f64) -> Result<ArcCurve> {
    let params = grid(-radius, radius, spacing)?;
    let coords: Vec<f64> = params.iter().flat_map(|&x| [x, bump_sum(bumps, x)]).collect();
    let c = ArcCurve::new(2, params, coords, CurveKind::OpenArc)?;
    zoo::complete(c, radius)
}

/// Up to five bumps centred in `[−10, 10]` with widths in `[0.6, 2]` and |slope| below `max_slope`.
pub fn random_bumps(rng: &mut ChaCha8Rng, max_slope: f64) -> Vec<Bump> {
    let count = rng.gen_range(1..=5);
    (0..count)
        .map(|_| {
            let width = rng.gen_range(0.6..2.0);
            // max |d/dx a·e^{−(x/w)²}| = a·√(2/e)/w.
            let cap = max_slope * width / (2.0 / std::f64::consts::E).sqrt();
            Bump {
                amplitude: rng.gen_range(-cap..cap),
                center: rng.gen_range(-10.0..10.0),
                width,
            }
        })
        .collect()
}

/// Random bump graph with energy below `target`, shrinking amplitudes by 0.8 until it is.
pub fn random_graph_below(
    rng: &mut ChaCha8Rng,
    target: f64,
    radius: f64,
    spacing: f64,
) -> Result<(Vec<Bump>, ArcCurve, EnergyReport)> {
    let mut bumps = random_bumps(rng, 1.0);
    loop {
        let c = graph_curve(&bumps, radius, spacing)?;
        let e = energy::energies(&c)?;
        if e.energy < target {
            return Ok((bumps, c, e));
        }
        for b in bumps.iter_mut() {
            b.amplitude *= 0.8;
        }
    }
}

/// Rate ∂ₜ⟨T, e₁⟩ at the sample closest to the origin, from the flow velocity.
///
/// For a normal velocity `V`, `∂ₜT = (I − T⊗T)∂ₛV`.
pub fn origin_tangent_rate(c: &ArcCurve) -> Result<f64> {
    let vel = flow::velocity(c)?;
    let frame = c.frame()?;
    let i = (0..c.len())
        .min_by(|&a, &b| curve::norm(c.point(a)).total_cmp(&curve::norm(c.point(b))))
        .filter(|&i| i > 0 && i + 1 < c.len())
        .ok_or_else(|| Error::Window("origin is not interior to the curve".into()))?;
    let h = c.params()[1] - c.params()[0];
    let d = c.dim();
    let ds = 2.0 * h * frame.speed[i];
    let dv: Vec<f64> = (0..d).map(|k| (vel.v[(i + 1) * d + k] - vel.v[(i - 1) * d + k]) / ds).collect();
    let t = frame.tangent_at(i);
    let along = curve::dot(&dv, t);
    Ok(dv[0] - along * t[0])
}

/// Settings of the graphicality-breaking experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphicalityConfig {
    pub alphas: Vec<f64>,
    pub rho: f64,
    /// The experiment runs at this radius and at 1.5 times it.
    pub radius: f64,
    pub spacing: f64,
    pub dt: f64,
    pub t_max: f64,
    pub redistribute_every: usize,
}

impl Default for GraphicalityConfig {
    fn default() -> Self {
        Self {
            alphas: vec![0.01, 0.02, 0.05],
            rho: 0.0125,
            radius: 16.0,
            spacing: 6.25e-5,
            dt: 7.5e-19,
            t_max: 1e-15,
            redistribute_every: 5,
        }
    }
}

/// Outcome of one flow run in a threshold experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub radius: f64,
    pub stop_reason: StopReason,
    pub event_time: Option<f64>,
    /// Where the event happened.
    pub event_position: Option<Vec<f64>>,
    pub steps: usize,
    pub initial_energy: f64,
    pub final_energy: f64,
    pub max_decay_violation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphicalityEntry {
    pub alpha: f64,
    pub energy_excess: f64,
    pub runs: Vec<RunSummary>,
    /// |t(1.5R) − t(R)| / t(R) when both runs lost graphicality.
    pub relative_disagreement: Option<f64>,
    pub agrees: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphicalityReport {
    pub config: GraphicalityConfig,
    pub entries: Vec<GraphicalityEntry>,
    /// ∂ₜ⟨T, e₁⟩ at the inflection of the α = 0 datum.
    pub initial_rate_alpha0: f64,
    /// `−5! ρ²`, the fifth derivative of the blended graph at 0 with sign reversed.
    pub predicted_rate_alpha0: f64,
    /// Some α broke graphicality at both radii with agreeing times.
    pub breaking_found: bool,
}

/// Agreement threshold for event times at the two radii.
pub const RADIUS_AGREEMENT: f64 = 0.05;

fn flow_config(c: &ArcCurve, radius: f64, dt: f64, t_max: f64, redistribute_every: usize) -> FlowConfig {
    FlowConfig {
        truncation_radius: radius,
        n_grid: c.len(),
        dt: Some(dt),
        t_max,
        redistribute_every,
        ..FlowConfig::default()
    }
}

fn summarize(run: &flow::FlowRun, radius: f64, graphical: bool) -> RunSummary {
    let event = run.state.events.iter().find(|e| {
        matches!(e.event, flow::EventKind::GraphicalitySignChange { .. }) == graphical
    });
    let position = event.map(|e| match &e.event {
        flow::EventKind::GraphicalitySignChange { position, .. } => position.clone(),
        flow::EventKind::SelfIntersection { events } => events[0].point.clone(),
    });
    let h = &run.state.history;
    RunSummary {
        radius,
        stop_reason: run.stop_reason,
        event_time: event.map(|e| e.t),
        event_position: position,
        steps: run.state.step,
        initial_energy: h[0].energy.energy,
        final_energy: h[h.len() - 1].energy.energy,
        max_decay_violation: flow::energy_decay_audit(&run.state).max_violation,
    }
}

/// Flows each η_α at radii R and 1.5R until graphicality is lost.
pub fn graphicality_threshold_experiment(config: &GraphicalityConfig) -> Result<GraphicalityReport> {
    let radii = [config.radius, 1.5 * config.radius];
    let jobs: Vec<(usize, usize)> = (0..config.alphas.len())
        .flat_map(|a| (0..2).map(move |r| (a, r)))
        .collect();
    let runs = jobs
        .par_iter()
        .map(|&(a, r)| {
            let spec = PerturbationSpec::serpent(config.rho, config.alphas[a]);
            let c = perturb_serpent(&spec, radii[r], config.spacing)?;
            let cfg = flow_config(&c, radii[r], config.dt, config.t_max, config.redistribute_every);
            let stop = StopCriteria {
                graphicality: true,
                ..StopCriteria::default()
            };
            let run = flow::run(&c, &cfg, stop)?;
            Ok(summarize(&run, radii[r], true))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut entries = Vec::new();
    for (a, &alpha) in config.alphas.iter().enumerate() {
        let pair = vec![runs[2 * a].clone(), runs[2 * a + 1].clone()];
        let disagreement = match (pair[0].event_time, pair[1].event_time) {
            (Some(t0), Some(t1)) => Some((t1 - t0).abs() / t0),
            _ => None,
        };
        entries.push(GraphicalityEntry {
            alpha,
            energy_excess: pair[0].initial_energy - SERPENT_ENERGY,
            runs: pair,
            relative_disagreement: disagreement,
            agrees: disagreement.is_some_and(|d| d <= RADIUS_AGREEMENT),
        });
    }
    let eta0 = perturb_serpent(&PerturbationSpec::serpent(config.rho, 0.0), config.radius, config.spacing)?;
    let eta0 = curve::reparametrize_arclength(&eta0, eta0.len())?;
    let eta0 = zoo::complete(eta0, config.radius)?;
    let initial_rate_alpha0 = origin_tangent_rate(&eta0)?;
    Ok(GraphicalityReport {
        config: config.clone(),
        breaking_found: entries.iter().any(|e| e.agrees),
        entries,
        initial_rate_alpha0,
        predicted_rate_alpha0: -120.0 * config.rho * config.rho,
    })
}

/// Settings of the embeddedness-breaking experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmbeddednessConfig {
    pub alphas: Vec<f64>,
    pub rho: f64,
    pub radius: f64,
    pub spacing: f64,
    pub dt: f64,
    pub t_max: f64,
    pub redistribute_every: usize,
    /// Contact tolerance; must stay below the initial gap `2αρ²`.
    pub event_spatial_tol: f64,
    /// Amplitude of the Gaussian control graph `a·e^{−x²}`.
    pub control_amplitude: f64,
    pub control_spacing: f64,
    pub control_dt: f64,
    pub control_t_max: f64,
}

impl Default for EmbeddednessConfig {
    fn default() -> Self {
        Self {
            alphas: vec![0.0, 0.005, 0.01, 0.02],
            rho: 0.0125,
            radius: 16.0,
            spacing: 1.25e-4,
            dt: 3e-14,
            t_max: 3e-11,
            redistribute_every: 5,
            event_spatial_tol: 1e-8,
            control_amplitude: 2.0,
            control_spacing: 0.02,
            control_dt: 1e-4,
            control_t_max: 0.2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmbeddednessEntry {
    pub alpha: f64,
    pub energy_excess: f64,
    pub run: RunSummary,
    pub classification: Option<Classification>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmbeddednessReport {
    pub config: EmbeddednessConfig,
    pub pendant_energy: f64,
    pub entries: Vec<EmbeddednessEntry>,
    /// Gaussian graph flow with energy at least one below the pendant's.
    pub control: RunSummary,
    pub control_events: usize,
    /// Some α > 0 produced a self-intersection at positive time.
    pub breaking_found: bool,
}

/// Flows perturbed pendants until a self-intersection appears, plus a below-threshold control.
pub fn embeddedness_threshold_experiment(config: &EmbeddednessConfig) -> Result<EmbeddednessReport> {
    let constants = TeardropConstants::compute()?;
    let pendant_energy = SERPENT_ENERGY + constants.l_hat * 2.0;
    let stop = StopCriteria {
        embeddedness: true,
        ..StopCriteria::default()
    };
    let entries = config
        .alphas
        .par_iter()
        .map(|&alpha| {
            let spec = PerturbationSpec::pendant(config.rho, alpha);
            let c = perturb_pendant(&spec, &constants, config.radius, config.spacing)?;
            let mut cfg = flow_config(&c, config.radius, config.dt, config.t_max, config.redistribute_every);
            cfg.event_spatial_tol = Some(config.event_spatial_tol);
            let run = flow::run(&c, &cfg, stop)?;
            let classification = run.state.events.iter().find_map(|e| match &e.event {
                flow::EventKind::SelfIntersection { events } => Some(events[0].classification),
                _ => None,
            });
            let summary = summarize(&run, config.radius, false);
            Ok(EmbeddednessEntry {
                alpha,
                energy_excess: summary.initial_energy - pendant_energy,
                run: summary,
                classification,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let bumps = [Bump {
        amplitude: config.control_amplitude,
        center: 0.0,
        width: 1.0,
    }];
    let g = graph_curve(&bumps, config.radius, config.control_spacing)?;
    let e0 = energy::energies(&g)?.energy;
    if e0 > pendant_energy - 1.0 {
        return Err(Error::Config(format!(
            "control graph energy {e0} is not below E[pendant] − 1"
        )));
    }
    let mut cfg = flow_config(
        &g,
        config.radius,
        config.control_dt,
        config.control_t_max,
        config.redistribute_every,
    );
    cfg.monitor_embeddedness = true;
    let run = flow::run(&g, &cfg, StopCriteria::default())?;
    let control_events = run
        .state
        .events
        .iter()
        .filter(|e| matches!(e.event, flow::EventKind::SelfIntersection { .. }))
        .count();
    Ok(EmbeddednessReport {
        config: config.clone(),
        pendant_energy,
        breaking_found: entries
            .iter()
            .any(|e| e.alpha > 0.0 && e.run.event_time.is_some_and(|t| t > 0.0)),
        entries,
        control: summarize(&run, config.radius, false),
        control_events,
    })
}

/// Population a random sweep curve is drawn from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepKind {
    Graph,
    BorderlineLoop,
    CircleLoop,
    PendantLoop,
    TangentialPendant,
    Witness,
}

/// Measurements of one sweep curve.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSample {
    pub index: usize,
    pub kind: SweepKind,
    pub label: String,
    pub energy: f64,
    pub tail_bound: f64,
    pub net_turning: f64,
    pub turning_bound: f64,
    /// E and turning bound on the sub-arc between the extreme tangent angles.
    pub arc_energy: f64,
    pub arc_turning_bound: f64,
    pub rotation: i64,
    pub intersections: usize,
    pub tangential: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub seed: u64,
    pub samples: Vec<SweepSample>,
    pub violations: Vec<String>,
    pub self_intersecting: usize,
    pub below_eight: usize,
    pub tangential_unwound: usize,
}

/// Slack on the sharp lower bounds in the sweep.
pub const SWEEP_SLACK: f64 = 1e-4;
/// Margin below 8 under which curves must be embedded.
pub const EMBEDDED_MARGIN: f64 = 0.01;

const SWEEP_SPACING: f64 = 4e-3;
const SWEEP_TAIL: f64 = 16.0;

fn line_piece(length: f64, spacing: f64) -> Result<ArcCurve> {
    let n = (length / spacing).ceil() as usize + 1;
    zoo::complete(zoo::line_curve(length, n)?, length)
}

/// Adds a bump sum in the curve parameter to the y-coordinate.
fn displaced(c: &ArcCurve, bumps: &[Bump]) -> Result<ArcCurve> {
    let mut coords = c.coords().to_vec();
    for (i, &s) in c.params().iter().enumerate() {
        coords[2 * i + 1] += bump_sum(bumps, s);
    }
    let mut out = ArcCurve::new(2, c.params().to_vec(), coords, c.kind())?.with_joints(c.joints().to_vec())?;
    if let Some(r) = c.truncation_radius() {
        out = out.with_truncation_radius(r);
    }
    Ok(out)
}

/// Bumps centred inside the loop region of a curve whose parameters span `[a, b]`.
fn loop_bumps(rng: &mut ChaCha8Rng, a: f64, b: f64) -> Vec<Bump> {
    let count = rng.gen_range(0..=3);
    (0..count)
        .map(|_| {
            let width = rng.gen_range(0.5..2.0);
            let cap = 0.3 * width;
            Bump {
                amplitude: rng.gen_range(-cap..cap),
                center: rng.gen_range(a + 0.3 * (b - a)..b - 0.3 * (b - a)),
                width,
            }
        })
        .collect()
}

fn with_lines(core: ArcCurve) -> Result<ArcCurve> {
    let left = line_piece(8.0, SWEEP_SPACING)?;
    let right = line_piece(8.0, SWEEP_SPACING)?;
    let core = core.with_kind(CurveKind::OpenArc)?;
    zoo::cut_and_paste(&[left, core, right], &[0.0, 0.0])
}

fn random_curve(rng: &mut ChaCha8Rng, constants: &TeardropConstants) -> Result<(SweepKind, String, ArcCurve)> {
    let kind = match rng.gen_range(0..5) {
        0 => SweepKind::Graph,
        1 => SweepKind::BorderlineLoop,
        2 => SweepKind::CircleLoop,
        3 => SweepKind::PendantLoop,
        _ => SweepKind::TangentialPendant,
    };
    let (label, c) = match kind {
        SweepKind::Graph => {
            let slope = rng.gen_range(0.2..3.0);
            let bumps = random_bumps(rng, slope);
            (format!("graph, {} bumps, slope ≤ {slope:.3}", bumps.len()), graph_curve(&bumps, 20.0, SWEEP_SPACING)?)
        }
        SweepKind::BorderlineLoop => {
            let scale = rng.gen_range(0.4..2.0);
            let n = (2.0 * SWEEP_TAIL / (SWEEP_SPACING / scale)).ceil() as usize + 1;
            let core = with_lines(zoo::borderline_curve(SWEEP_TAIL, n)?.scaled(scale))?;
            let p = core.params();
            let bumps = loop_bumps(rng, p[0], p[p.len() - 1]);
            (format!("borderline × {scale:.3}"), displaced(&core, &bumps)?)
        }
        SweepKind::CircleLoop => {
            let radius = rng.gen_range(0.3..2.5);
            let n = (std::f64::consts::TAU * radius / SWEEP_SPACING).ceil() as usize + 1;
            let circle = zoo::circle_curve(radius, n)?.with_kind(CurveKind::OpenArc)?;
            let left = line_piece(12.0, SWEEP_SPACING)?;
            let right = line_piece(12.0, SWEEP_SPACING)?;
            let core = zoo::cut_and_paste(&[left, circle, right], &[0.0, 0.0])?;
            let p = core.params();
            let bumps = loop_bumps(rng, p[0], p[p.len() - 1]);
            (format!("circle loop r = {radius:.3}"), displaced(&core, &bumps)?)
        }
        SweepKind::PendantLoop => {
            let scale = rng.gen_range(0.4..2.0);
            let n_loop = (constants.l_hat / (SWEEP_SPACING / scale)).ceil() as usize + 1;
            let core = with_lines(zoo::pendant_curve(constants, SWEEP_TAIL, n_loop)?.scaled(scale))?;
            let p = core.params();
            let bumps = loop_bumps(rng, p[0], p[p.len() - 1]);
            (format!("pendant × {scale:.3}"), displaced(&core, &bumps)?)
        }
        _ => {
            let rho = rng.gen_range(0.04..0.15);
            let spec = PerturbationSpec::pendant(rho, 0.0);
            (format!("pendant surgery ρ = {rho:.3}, α = 0"), perturb_pendant(&spec, constants, SWEEP_TAIL, SWEEP_SPACING / 2.0)?)
        }
    };
    Ok((kind, label, c))
}

/// Energy and turning bound of the arc between the minimum and maximum of θ.
fn extreme_arc(c: &ArcCurve) -> Result<(f64, f64)> {
    let theta = curve::tangent_angle(c)?.theta;
    let arg = |better: fn(f64, f64) -> bool| {
        (0..theta.len()).fold(0, |best, i| if better(theta[i], theta[best]) { i } else { best })
    };
    let (i, j) = (arg(|a, b| a < b), arg(|a, b| a > b));
    let (lo, hi) = (i.min(j), i.max(j));
    let min_piece = c
        .pieces()
        .iter()
        .map(|r| r.end() - r.start())
        .min()
        .unwrap_or(0);
    if hi - lo < 2 * curve::MIN_PIECE_SAMPLES || min_piece < curve::MIN_PIECE_SAMPLES {
        return Ok((0.0, 0.0));
    }
    let (lo, hi) = snap_to_pieces(c, lo, hi);
    let d = c.dim();
    // Keep only joints strictly inside the arc and at least a stencil away from its ends.
    let joints = c
        .joints()
        .iter()
        .filter(|&&k| k >= lo + curve::MIN_PIECE_SAMPLES && k + curve::MIN_PIECE_SAMPLES <= hi)
        .map(|k| k - lo)
        .collect();
    let arc = ArcCurve::new(
        d,
        c.params()[lo..=hi].to_vec(),
        c.coords()[lo * d..(hi + 1) * d].to_vec(),
        CurveKind::OpenArc,
    )?
    .with_joints(joints)?;
    let delta = (theta[hi] - theta[lo]).abs();
    Ok((energy::energies(&arc)?.energy, energy::turning_lower_bound(delta)))
}

/// Moves arc ends off samples that sit within a stencil of a joint.
fn snap_to_pieces(c: &ArcCurve, lo: usize, hi: usize) -> (usize, usize) {
    let near = |k: usize| {
        c.joints()
            .iter()
            .find(|&&j| k.abs_diff(j) < curve::MIN_PIECE_SAMPLES)
            .copied()
    };
    (near(lo).unwrap_or(lo), near(hi).unwrap_or(hi))
}

fn measure(index: usize, kind: SweepKind, label: String, c: &ArcCurve) -> Result<SweepSample> {
    let report = energy::energies(c)?;
    let net = energy::net_turning(c)?;
    let (arc_energy, arc_turning_bound) = extreme_arc(c)?;
    let rotation = curve::rotation_number(c)?.rounded;
    let events = geometry::self_intersections(c, Tolerances::for_curve(c));
    Ok(SweepSample {
        index,
        kind,
        label,
        energy: report.energy,
        tail_bound: report.tail_bound,
        net_turning: net,
        turning_bound: energy::turning_lower_bound(net),
        arc_energy,
        arc_turning_bound,
        rotation,
        intersections: events.len(),
        tangential: events
            .iter()
            .any(|e| e.classification != Classification::Transversal),
    })
}

fn violations(s: &SweepSample, pendant_energy: f64) -> Vec<String> {
    let mut out = Vec::new();
    let total = s.energy + s.tail_bound;
    let tag = format!("#{} ({})", s.index, s.label);
    if s.energy + SWEEP_SLACK < s.turning_bound {
        out.push(format!("{tag}: E = {} below turning bound {}", s.energy, s.turning_bound));
    }
    if s.arc_energy + SWEEP_SLACK < s.arc_turning_bound {
        out.push(format!(
            "{tag}: arc E = {} below turning bound {}",
            s.arc_energy, s.arc_turning_bound
        ));
    }
    if total + SWEEP_SLACK < 8.0 * s.rotation.unsigned_abs() as f64 {
        out.push(format!("{tag}: E = {total} below 8|N| with N = {}", s.rotation));
    }
    if s.energy < 8.0 - EMBEDDED_MARGIN && s.intersections > 0 {
        out.push(format!("{tag}: E = {} < 8 but self-intersecting", s.energy));
    }
    if s.intersections > 0 && total + SWEEP_SLACK < 8.0 {
        out.push(format!("{tag}: self-intersecting with E = {total} < 8"));
    }
    if s.intersections > 0 && s.tangential && s.rotation == 0 && total + SWEEP_SLACK < pendant_energy {
        out.push(format!("{tag}: tangential with N = 0 and E = {total} below the pendant"));
    }
    out
}

/// Zoo curves that attain or approach the sharp bounds.
fn witnesses(constants: &TeardropConstants) -> Result<Vec<(String, ArcCurve)>> {
    Ok(vec![
        ("borderline".into(), zoo::borderline_curve(20.0, 16001)?),
        ("serpent".into(), zoo::serpent_curve(20.0, 16001)?),
        ("pendant".into(), zoo::pendant_curve(constants, 20.0, 4001)?),
        ("figure-eight assembly".into(), zoo::figure_eight_assembly(8001, 10.0, 0.0)?),
        ("borderline + circle".into(), zoo::borderline_circle_assembly(20.0, 16001, 1.0)?),
    ])
}

/// Randomized check of the Li–Yau type bounds on `n_random` curves plus zoo witnesses.
pub fn li_yau_sweep(n_random: usize, seed: u64) -> Result<SweepReport> {
    let constants = TeardropConstants::compute()?;
    let pendant_energy = SERPENT_ENERGY + 2.0 * constants.l_hat;
    let mut samples = (0..n_random)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let (kind, label, c) = random_curve(&mut rng, &constants)?;
            measure(i, kind, label, &c)
        })
        .collect::<Result<Vec<_>>>()?;
    for (k, (label, c)) in witnesses(&constants)?.into_iter().enumerate() {
        samples.push(measure(n_random + k, SweepKind::Witness, label, &c)?);
    }
    let violations = samples
        .iter()
        .flat_map(|s| violations(s, pendant_energy))
        .collect();
    Ok(SweepReport {
        seed,
        self_intersecting: samples.iter().filter(|s| s.intersections > 0).count(),
        below_eight: samples.iter().filter(|s| s.energy < 8.0 - EMBEDDED_MARGIN).count(),
        tangential_unwound: samples
            .iter()
            .filter(|s| s.tangential && s.rotation == 0)
            .count(),
        samples,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cutoff_properties() {
        assert_eq!(cutoff(0.0), 1.0);
        assert_eq!(cutoff(0.5), 1.0);
        assert_eq!(cutoff(-1.0), 0.0);
        assert!((cutoff(0.75) - 0.5).abs() < 1e-15);
        let mut prev = 1.0;
        for i in 0..=1000 {
            let x = i as f64 / 1000.0;
            assert_eq!(cutoff(x), cutoff(-x));
            assert!(cutoff(x) <= prev);
            prev = cutoff(x);
        }
    }

    #[test]
    fn serpent_perturbation_shapes() {
        // The blend edge carries an O((h/ρ)⁴) differencing error in ⟨T, e₁⟩.
        let eta0 = perturb_serpent(&PerturbationSpec::serpent(0.1, 0.0), 12.0, 5e-4).unwrap();
        let (graphical, min) = geometry::is_graphical(&eta0).unwrap();
        assert!(!graphical && min.abs() < 1e-6, "{min}");
        let eta = perturb_serpent(&PerturbationSpec::serpent(0.05, 0.5), 12.0, 1e-3).unwrap();
        assert!(geometry::is_graphical(&eta).unwrap().0);
        assert!(perturb_serpent(&PerturbationSpec::serpent(0.2, 0.5), 12.0, 1e-3).is_err());
        assert!(perturb_serpent(&PerturbationSpec::serpent(0.05, 1.5), 12.0, 1e-3).is_err());
    }

    #[test]
    fn pendant_gap_is_two_alpha_rho_squared() {
        let constants = TeardropConstants::compute().unwrap();
        let (rho, alpha) = (0.05, 0.01);
        let c = perturb_pendant(&PerturbationSpec::pendant(rho, alpha), &constants, 8.0, 1e-3).unwrap();
        // Closest approach across y = 0 between the two branches.
        let pts: Vec<&[f64]> = c.points().filter(|p| p[1].abs() < 1e-3 && p[0].abs() < 0.01).collect();
        let xs: Vec<f64> = pts.iter().map(|p| p[0]).collect();
        let gap = xs.iter().cloned().fold(f64::MIN, f64::max) - xs.iter().cloned().fold(f64::MAX, f64::min);
        assert!((gap - 2.0 * alpha * rho * rho).abs() < 1e-7, "{gap}");
        assert!(geometry::is_embedded(&c, Tolerances::for_curve(&c)));
    }

    #[test]
    fn random_bumps_respect_slope_cap() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let bumps = random_bumps(&mut rng, 0.5);
            let g = graph_curve(&bumps, 20.0, 0.01).unwrap();
            let slope = g
                .points()
                .collect::<Vec<_>>()
                .windows(2)
                .map(|w| ((w[1][1] - w[0][1]) / (w[1][0] - w[0][0])).abs())
                .fold(0.0, f64::max);
            assert!(slope <= 0.5 * bumps.len() as f64 + 1e-9);
        }
    }
}
