//! Semi-implicit integrator for the elastic flow of truncated complete curves.
//!
//! The velocity `V = −∇ₛ²κ − ½|κ|²κ + κ` is expanded as
//! `−κ_ss − (3/2)∂ₛ|κ|² T − (3/2)|κ|²κ + κ`, which is purely normal. Each step
//! treats the leading `−∂ₛ⁴γ` implicitly on the current grid spacing and the
//! rest explicitly with compact second-order stencils. End nodes stay fixed;
//! two ghost nodes per end continue the curve along the tail direction,
//! clamping position and tangent. The public [`velocity`] diagnostic uses
//! fourth-order stencils over four ghosts instead.

use serde::{Deserialize, Serialize};

use crate::banded::Pentadiagonal;
use crate::curve::{self, ArcCurve, CurveKind};
use crate::energy::{self, EnergyReport};
use crate::error::{Error, Result};
use crate::geometry::{self, IntersectionEvent, Tolerances};

/// Boundary treatment at the two truncation ends.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    #[default]
    ClampToLine,
}

/// Solver configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlowConfig {
    pub truncation_radius: f64,
    pub n_grid: usize,
    /// Time step; `None` selects `min(h^1.5, 1e-4)`.
    pub dt: Option<f64>,
    pub t_max: f64,
    pub redistribute_every: usize,
    pub energy_decay_slack: f64,
    /// Spatial event tolerance; `None` selects `1e-6 · diameter`.
    pub event_spatial_tol: Option<f64>,
    pub event_angle_tol: f64,
    pub boundary: Boundary,
    /// Self-intersection checks run every this many steps.
    pub event_check_every: usize,
    /// Bisection halvings used to time an event inside its step.
    pub event_bisections: usize,
    /// Track self-intersections even when they do not stop the run.
    pub monitor_embeddedness: bool,
    /// Abort when the minimum segment drops below this fraction of the initial spacing.
    pub immersion_floor: f64,
    /// Largest accepted |T − e₁| at the two ends of the initial curve.
    pub end_tangent_tol: f64,
}

impl Default for FlowConfig {
    fn default() -> Self {
        Self {
            truncation_radius: 20.0,
            n_grid: 4001,
            dt: None,
            t_max: 1.0,
            redistribute_every: 5,
            energy_decay_slack: 1e-7,
            event_spatial_tol: None,
            event_angle_tol: 1e-3,
            boundary: Boundary::ClampToLine,
            event_check_every: 1,
            event_bisections: 12,
            monitor_embeddedness: false,
            immersion_floor: 1e-3,
            end_tangent_tol: 1e-6,
        }
    }
}

impl FlowConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(m.to_string()));
        if !(self.truncation_radius > 0.0) {
            return bad("truncation radius must be positive");
        }
        if self.n_grid < 101 {
            return bad("n_grid must be at least 101");
        }
        if let Some(dt) = self.dt {
            if !(dt > 0.0) {
                return bad("dt must be positive");
            }
        }
        if self.redistribute_every < 1 || self.event_check_every < 1 {
            return bad("redistribute_every and event_check_every must be at least 1");
        }
        if !(self.t_max >= 0.0) {
            return bad("t_max must be non-negative");
        }
        Ok(())
    }

    /// Time step for grid spacing `h`.
    pub fn step_for(&self, h: f64) -> f64 {
        self.dt.unwrap_or_else(|| h.powf(1.5).min(1e-4))
    }
}

/// Which predicates end a run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct StopCriteria {
    pub graphicality: bool,
    pub embeddedness: bool,
    /// Stop once |ΔE| over the trailing `window` of time is below `tol`.
    pub plateau: Option<Plateau>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Plateau {
    pub tol: f64,
    pub window: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    TMax,
    Graphicality,
    Embeddedness,
    Plateau,
    ImmersionLoss,
}

impl std::fmt::Display for StopReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Self::TMax => "t_max",
            Self::Graphicality => "graphicality",
            Self::Embeddedness => "embeddedness",
            Self::Plateau => "plateau",
            Self::ImmersionLoss => "immersion_loss",
        };
        f.write_str(s)
    }
}

/// A geometric event observed during a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EventKind {
    SelfIntersection { events: Vec<IntersectionEvent> },
    GraphicalitySignChange {
        min_tangent_e1: f64,
        arclength: f64,
        position: Vec<f64>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlowEvent {
    pub t: f64,
    pub step: usize,
    pub event: EventKind,
}

/// One recorded sample of the monitored quantities.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HistoryEntry {
    pub t: f64,
    pub energy: EnergyReport,
    pub min_tangent_e1: f64,
    pub sup_curvature: f64,
    /// Σ dt ∫|V|² ds up to `t`.
    pub dissipation: f64,
}

/// Mutable state of a run.
#[derive(Clone, Debug)]
pub struct FlowState {
    pub curve: ArcCurve,
    pub t: f64,
    pub step: usize,
    pub history: Vec<HistoryEntry>,
    pub events: Vec<FlowEvent>,
    pub initial_spacing: f64,
    pub max_decay_violation: f64,
    dissipation: f64,
}

/// Velocity samples with the geometry they were computed from.
#[derive(Clone, Debug)]
pub struct Velocity {
    pub dim: usize,
    /// Flat `n × dim` velocity.
    pub v: Vec<f64>,
    /// Speed |γ_u| at the nodes, in parameter units.
    pub speed: Vec<f64>,
    pub curvature_sq: Vec<f64>,
}

impl Velocity {
    /// ∫|V|² ds by the trapezoid rule over the parameter grid.
    pub fn dissipation_rate(&self, h: f64) -> f64 {
        let n = self.speed.len();
        let d = self.dim;
        (0..n)
            .map(|i| {
                let w = if i == 0 || i + 1 == n { 0.5 } else { 1.0 };
                w * curve::dot(&self.v[i * d..(i + 1) * d], &self.v[i * d..(i + 1) * d]) * self.speed[i]
            })
            .sum::<f64>()
            * h
    }
}

fn uniform_step(c: &ArcCurve) -> Result<f64> {
    if !c.is_piecewise_uniform() || !c.joints().is_empty() {
        return Err(Error::UnderResolved(
            "flow grids must be uniform without joints; resample first".into(),
        ));
    }
    Ok(c.params()[1] - c.params()[0])
}

/// Curve with `count` ghost nodes per end.
fn with_ghosts(c: &ArcCurve, h: f64, count: usize) -> Result<Vec<f64>> {
    let d = c.dim();
    let n = c.len();
    let mut g = Vec::with_capacity((n + 2 * count) * d);
    match c.kind() {
        CurveKind::TruncatedComplete => {
            let e = c.tail_direction();
            let (p0, pn) = (c.point(0), c.point(n - 1));
            for j in (1..=count).rev() {
                g.extend((0..d).map(|k| p0[k] - j as f64 * h * e[k]));
            }
            g.extend_from_slice(c.coords());
            for j in 1..=count {
                g.extend((0..d).map(|k| pn[k] + j as f64 * h * e[k]));
            }
        }
        CurveKind::C0Closed => {
            for j in (1..=count).rev() {
                g.extend_from_slice(c.point(n - 1 - j));
            }
            g.extend_from_slice(c.coords());
            for j in 1..=count {
                g.extend_from_slice(c.point(j));
            }
        }
        CurveKind::OpenArc => {
            return Err(Error::Config(
                "the flow needs a truncated-complete or closed curve".into(),
            ))
        }
    }
    Ok(g)
}

/// Central difference stencils in the curve parameter, undivided.
#[derive(Clone, Copy)]
enum Stencil {
    Second,
    Fourth,
}

impl Stencil {
    fn half_width(self) -> usize {
        match self {
            Self::Second => 1,
            Self::Fourth => 2,
        }
    }

    fn d1(self, f: impl Fn(usize) -> f64, i: usize) -> f64 {
        match self {
            Self::Second => 0.5 * (f(i + 1) - f(i - 1)),
            Self::Fourth => (8.0 * (f(i + 1) - f(i - 1)) - (f(i + 2) - f(i - 2))) / 12.0,
        }
    }

    fn d2(self, f: impl Fn(usize) -> f64, i: usize) -> f64 {
        match self {
            Self::Second => f(i + 1) - 2.0 * f(i) + f(i - 1),
            Self::Fourth => {
                (16.0 * (f(i + 1) + f(i - 1)) - (f(i + 2) + f(i - 2)) - 30.0 * f(i)) / 12.0
            }
        }
    }
}

/// Elastic-flow velocity with fourth-order central differences in the curve parameter.
///
/// Nodes within four samples of an end read straight ghost continuations.
pub fn velocity(c: &ArcCurve) -> Result<Velocity> {
    if c.len() < 7 {
        return Err(Error::UnderResolved(format!("{} samples, need 7", c.len())));
    }
    let h = uniform_step(c)?;
    let g = with_ghosts(c, h, 4)?;
    velocity_from_ghosted(&g, c.dim(), h, Stencil::Fourth)
}

fn velocity_from_ghosted(g: &[f64], d: usize, h: f64, stencil: Stencil) -> Result<Velocity> {
    let r = stencil.half_width();
    let m = g.len() / d;
    let n = m - 4 * r;
    let at = |i: usize, k: usize| g[i * d + k];
    // Geometry on ghosted indices r..m−r.
    let mut sig = vec![0.0; m];
    let mut tan = vec![0.0; m * d];
    let mut sdot = vec![0.0; m];
    let mut kap = vec![0.0; m * d];
    let mut k2 = vec![0.0; m];
    for i in r..m - r {
        let pu: Vec<f64> = (0..d).map(|k| stencil.d1(|j| at(j, k), i)).collect();
        let puu: Vec<f64> = (0..d).map(|k| stencil.d2(|j| at(j, k), i)).collect();
        let s = curve::norm(&pu);
        if s == 0.0 {
            return Err(Error::DegenerateSegment { index: i.saturating_sub(2 * r) });
        }
        let t: Vec<f64> = pu.iter().map(|v| v / s).collect();
        let a = curve::dot(&puu, &t);
        let mut ksq = 0.0;
        for k in 0..d {
            let kv = (puu[k] - a * t[k]) / (s * s);
            kap[i * d + k] = kv;
            ksq += kv * kv;
            tan[i * d + k] = t[k];
        }
        sig[i] = s;
        sdot[i] = a;
        k2[i] = ksq;
    }
    let mut v = vec![0.0; n * d];
    let mut speed = vec![0.0; n];
    let mut curvature_sq = vec![0.0; n];
    for node in 0..n {
        let i = node + 2 * r;
        let s = sig[i];
        let dk2 = stencil.d1(|j| k2[j], i) / s;
        for k in 0..d {
            let ku = stencil.d1(|j| kap[j * d + k], i);
            let kuu = stencil.d2(|j| kap[j * d + k], i);
            let kss = (kuu - sdot[i] / s * ku) / (s * s);
            let kv = kap[i * d + k];
            v[node * d + k] = -kss - 1.5 * dk2 * tan[i * d + k] - 1.5 * k2[i] * kv + kv;
        }
        speed[node] = s / h;
        curvature_sq[node] = k2[i];
    }
    Ok(Velocity {
        dim: d,
        v,
        speed,
        curvature_sq,
    })
}

/// One semi-implicit step of size `dt`; returns the new curve and the explicit velocity.
pub fn advance(c: &ArcCurve, dt: f64) -> Result<(ArcCurve, Velocity)> {
    if c.kind() != CurveKind::TruncatedComplete {
        return Err(Error::Config("flow steps need a truncated-complete curve".into()));
    }
    let h = uniform_step(c)?;
    let d = c.dim();
    let n = c.len();
    // Compact stencils keep the explicit remainder free of high-frequency fourth differences.
    let g = with_ghosts(c, h, 2)?;
    let vel = velocity_from_ghosted(&g, d, h, Stencil::Second)?;
    let cc = dt / h.powi(4);
    let unknowns = n - 2;
    let mut a = Pentadiagonal::zeros(unknowns);
    for r in 0..unknowns {
        a.l2[r] = cc;
        a.l1[r] = -4.0 * cc;
        a.d[r] = 1.0 + 6.0 * cc;
        a.u1[r] = -4.0 * cc;
        a.u2[r] = cc;
    }
    let factor = a.factor()?;
    // Solving for the increment keeps roundoff of the stiff term out of the update;
    // end nodes and ghosts are frozen, so their increments vanish.
    let mut coords = c.coords().to_vec();
    for k in 0..d {
        let rhs: Vec<f64> = (1..n - 1).map(|node| dt * vel.v[node * d + k]).collect();
        let delta = factor.solve(&rhs);
        for (node, value) in delta.into_iter().enumerate() {
            coords[(node + 1) * d + k] += value;
        }
    }
    if coords.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonConvergence {
            what: "flow step (non-finite coordinates)",
            iterations: 1,
        });
    }
    let mut next = ArcCurve::new(d, c.params().to_vec(), coords, CurveKind::TruncatedComplete)?;
    if let Some(r) = c.truncation_radius() {
        next = next.with_truncation_radius(r);
    }
    Ok((next, vel))
}

/// Resamples at uniform arclength with the same number of nodes.
pub fn redistribute(c: &ArcCurve) -> Result<ArcCurve> {
    let mut out = curve::reparametrize_arclength(c, c.len())?;
    if let Some(r) = c.truncation_radius() {
        out = out.with_truncation_radius(r);
    }
    Ok(out)
}

fn sup_curvature(c: &ArcCurve) -> Result<f64> {
    let frame = c.frame()?;
    Ok((0..c.len())
        .map(|i| curve::norm(frame.curvature_at(i)))
        .fold(0.0, f64::max))
}

fn graphicality(c: &ArcCurve) -> Result<(f64, usize)> {
    let (_, min) = geometry::is_graphical(c)?;
    Ok((min, geometry::min_tangent_e1_index(c)?))
}

impl FlowState {
    /// Starts a run from `initial` resampled to `config.n_grid` uniform nodes.
    pub fn new(initial: &ArcCurve, config: &FlowConfig) -> Result<Self> {
        config.validate()?;
        if initial.kind() != CurveKind::TruncatedComplete {
            return Err(Error::Config("initial curve must be truncated-complete".into()));
        }
        let mut c = curve::reparametrize_arclength(initial, config.n_grid)?;
        c = c.with_truncation_radius(initial.truncation_radius().unwrap_or(config.truncation_radius));
        let spacing = c.params()[1] - c.params()[0];
        let mut state = Self {
            curve: c,
            t: 0.0,
            step: 0,
            history: Vec::new(),
            events: Vec::new(),
            initial_spacing: spacing,
            max_decay_violation: 0.0,
            dissipation: 0.0,
        };
        state.record()?;
        Ok(state)
    }

    fn record(&mut self) -> Result<()> {
        let energy = energy::energies(&self.curve)?;
        let (min_t, _) = graphicality(&self.curve)?;
        if let Some(prev) = self.history.last() {
            let increase = energy.energy - prev.energy.energy;
            self.max_decay_violation = self.max_decay_violation.max(increase);
        }
        self.history.push(HistoryEntry {
            t: self.t,
            energy,
            min_tangent_e1: min_t,
            sup_curvature: sup_curvature(&self.curve)?,
            dissipation: self.dissipation,
        });
        Ok(())
    }

    pub fn spacing(&self) -> f64 {
        self.curve.params()[1] - self.curve.params()[0]
    }

    /// One step of size `dt` (no event handling); redistributes on schedule.
    pub fn step(&mut self, config: &FlowConfig, dt: f64) -> Result<()> {
        let (next, vel) = advance(&self.curve, dt)?;
        let floor = config.immersion_floor * self.initial_spacing;
        let min_segment = next.min_segment();
        if min_segment < floor {
            return Err(Error::ImmersionLoss {
                t: self.t + dt,
                min_segment,
                floor,
            });
        }
        self.dissipation += dt * vel.dissipation_rate(self.spacing());
        self.curve = next;
        self.t += dt;
        self.step += 1;
        if self.step % config.redistribute_every == 0 {
            self.curve = redistribute(&self.curve)?;
        }
        self.record()
    }
}

/// Functional form of [`FlowState::step`] with the configured time step.
pub fn step(state: &FlowState, config: &FlowConfig) -> Result<FlowState> {
    let mut next = state.clone();
    let dt = config.step_for(state.spacing());
    next.step(config, dt)?;
    Ok(next)
}

/// Result of [`run`].
#[derive(Clone, Debug)]
pub struct FlowRun {
    pub state: FlowState,
    pub stop_reason: StopReason,
}

impl FlowRun {
    pub fn first_event_time(&self, graphical: bool) -> Option<f64> {
        self.state
            .events
            .iter()
            .find(|e| matches!(e.event, EventKind::GraphicalitySignChange { .. }) == graphical)
            .map(|e| e.t)
    }
}

fn tolerances(c: &ArcCurve, config: &FlowConfig) -> Tolerances {
    Tolerances {
        spatial: config.event_spatial_tol.unwrap_or(1e-6 * c.diameter()),
        angle: config.event_angle_tol,
    }
}

/// Bisects inside `(0, dt)` for the first time `pred` holds after stepping from `start`.
fn bisect_event<P: Fn(&ArcCurve) -> Result<bool>>(
    start: &ArcCurve,
    dt: f64,
    iterations: usize,
    pred: P,
) -> Result<f64> {
    let (mut lo, mut hi) = (0.0, dt);
    for _ in 0..iterations {
        let mid = 0.5 * (lo + hi);
        let (trial, _) = advance(start, mid)?;
        if pred(&trial)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Integrates until `t_max` or a stop criterion fires.
pub fn run(initial: &ArcCurve, config: &FlowConfig, stop: StopCriteria) -> Result<FlowRun> {
    let mut state = FlowState::new(initial, config)?;
    let ends = curve::ends_horizontal(&state.curve, config.end_tangent_tol)?;
    if !ends.horizontal {
        return Err(Error::Config(format!(
            "initial ends are not horizontal (defects {:e}, {:e})",
            ends.start_defect, ends.end_defect
        )));
    }
    let watch_embedding = stop.embeddedness || config.monitor_embeddedness;
    let tol = tolerances(&state.curve, config);
    let non_graphical = |c: &ArcCurve| -> Result<bool> { Ok(geometry::is_graphical(c)?.1 <= 0.0) };
    let crossing = |c: &ArcCurve| -> Result<bool> { Ok(!geometry::is_embedded(c, tol)) };

    let (min_t, at) = graphicality(&state.curve)?;
    let mut was_graphical = min_t > 0.0;
    if !was_graphical {
        state.events.push(FlowEvent {
            t: 0.0,
            step: 0,
            event: EventKind::GraphicalitySignChange {
                min_tangent_e1: min_t,
                arclength: state.curve.params()[at],
                position: state.curve.point(at).to_vec(),
            },
        });
        if stop.graphicality {
            return Ok(FlowRun {
                state,
                stop_reason: StopReason::Graphicality,
            });
        }
    }
    let mut was_embedded = true;
    if watch_embedding {
        let events = geometry::self_intersections(&state.curve, tol);
        if !events.is_empty() {
            was_embedded = false;
            state.events.push(FlowEvent {
                t: 0.0,
                step: 0,
                event: EventKind::SelfIntersection { events },
            });
            if stop.embeddedness {
                return Ok(FlowRun {
                    state,
                    stop_reason: StopReason::Embeddedness,
                });
            }
        }
    }

    let base_dt = config.step_for(state.spacing());
    loop {
        if state.t >= config.t_max * (1.0 - 1e-12) {
            return Ok(FlowRun {
                state,
                stop_reason: StopReason::TMax,
            });
        }
        let dt = base_dt.min(config.t_max - state.t);
        let before = state.curve.clone();
        let t_before = state.t;
        match state.step(config, dt) {
            Ok(()) => {}
            Err(Error::ImmersionLoss { .. }) => {
                return Ok(FlowRun {
                    state,
                    stop_reason: StopReason::ImmersionLoss,
                })
            }
            Err(e) => return Err(e),
        }
        let (min_t, at) = graphicality(&state.curve)?;
        if was_graphical && min_t <= 0.0 {
            was_graphical = false;
            let offset = bisect_event(&before, dt, config.event_bisections, non_graphical)?;
            state.events.push(FlowEvent {
                t: t_before + offset,
                step: state.step,
                event: EventKind::GraphicalitySignChange {
                    min_tangent_e1: min_t,
                    arclength: state.curve.params()[at],
                    position: state.curve.point(at).to_vec(),
                },
            });
            if stop.graphicality {
                return Ok(FlowRun {
                    state,
                    stop_reason: StopReason::Graphicality,
                });
            }
        } else if min_t > 0.0 {
            was_graphical = true;
        }
        if watch_embedding && state.step % config.event_check_every == 0 {
            let events = geometry::self_intersections(&state.curve, tol);
            if was_embedded && !events.is_empty() {
                was_embedded = false;
                let offset = if config.event_check_every == 1 {
                    bisect_event(&before, dt, config.event_bisections, crossing)?
                } else {
                    dt
                };
                state.events.push(FlowEvent {
                    t: t_before + offset,
                    step: state.step,
                    event: EventKind::SelfIntersection { events },
                });
                if stop.embeddedness {
                    return Ok(FlowRun {
                        state,
                        stop_reason: StopReason::Embeddedness,
                    });
                }
            } else if events.is_empty() {
                was_embedded = true;
            }
        }
        if let Some(p) = stop.plateau {
            if plateau_reached(&state.history, p) {
                return Ok(FlowRun {
                    state,
                    stop_reason: StopReason::Plateau,
                });
            }
        }
    }
}

fn plateau_reached(history: &[HistoryEntry], p: Plateau) -> bool {
    let Some(last) = history.last() else {
        return false;
    };
    if last.t < p.window {
        return false;
    }
    let cutoff = last.t - p.window;
    let idx = history.partition_point(|h| h.t < cutoff);
    (history[idx].energy.energy - last.energy.energy).abs() < p.tol
}

/// Energy-identity audit of a run.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayAudit {
    /// Largest increase of E between consecutive records.
    pub max_violation: f64,
    /// `E(τ) + Σ dt ∫|V|² ds − E(0)` at the final record.
    pub balance_defect: f64,
}

pub fn energy_decay_audit(state: &FlowState) -> DecayAudit {
    let (first, last) = match (state.history.first(), state.history.last()) {
        (Some(f), Some(l)) => (f, l),
        _ => {
            return DecayAudit {
                max_violation: 0.0,
                balance_defect: 0.0,
            }
        }
    };
    let max_violation = state
        .history
        .windows(2)
        .map(|w| w[1].energy.energy - w[0].energy.energy)
        .fold(0.0, f64::max);
    DecayAudit {
        max_violation,
        balance_defect: last.energy.energy + last.dissipation - first.energy.energy,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo;

    fn line(radius: f64, n: usize) -> ArcCurve {
        let c = zoo::line_curve(2.0 * radius, n).unwrap().translated(&[-radius, 0.0]);
        c.with_kind(CurveKind::TruncatedComplete).unwrap().with_truncation_radius(radius)
    }

    #[test]
    fn line_has_zero_velocity_and_is_fixed() {
        let c = line(5.0, 201);
        let v = velocity(&c).unwrap();
        assert!(v.v.iter().all(|x| x.abs() < 1e-12));
        let (next, _) = advance(&c, 1e-3).unwrap();
        for (a, b) in next.coords().iter().zip(c.coords()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn config_validation() {
        let mut cfg = FlowConfig::default();
        assert!(cfg.validate().is_ok());
        cfg.n_grid = 50;
        assert!(cfg.validate().is_err());
        cfg.n_grid = 101;
        cfg.redistribute_every = 0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn open_arcs_are_rejected() {
        let c = zoo::line_curve(1.0, 20).unwrap();
        assert!(velocity(&c).is_err());
    }

    #[test]
    fn unit_circle_velocity_is_half_curvature() {
        // On the unit circle κ_ss = −κ and ∂ₛ|κ|² = 0, so V = (1 − 3/2 + 1)κ = κ/2.
        let c = zoo::circle_curve(1.0, 801).unwrap();
        let v = velocity(&c).unwrap();
        for i in 0..c.len() {
            let p = c.point(i);
            let inward = [-p[0], 1.0 - p[1]];
            let along = v.v[2 * i] * inward[0] + v.v[2 * i + 1] * inward[1];
            assert!((along - 0.5).abs() < 1e-4, "{i}: {along}");
        }
    }
}
