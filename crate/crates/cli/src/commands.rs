use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::ValueEnum;
use serde::Serialize;

use elastica::curve::{ArcCurve, CurveKind};
use elastica::energy::{self, EnergyReport};
use elastica::experiments::{self, PerturbationSpec};
use elastica::flow::{self, EventKind, FlowConfig, Plateau, StopCriteria, StopReason};
use elastica::io::{self, fmt_f64, RunManifest, Sidecar};
use elastica::verify::{self, Suite, SuiteReport};
use elastica::zoo::{self, TeardropConstants};

use crate::config::Resolver;
use crate::{
    Cli, CliError, Command, ConstructArgs, CutPasteArgs, EnergyArgs, FamilyName, FlowArgs, Preset, StopName,
    SuiteName, SweepArgs, VerifyArgs,
};

/// |D − L| below which a closed curve is reported to satisfy the identity.
const CLOSED_IDENTITY_TOL: f64 = 1e-8;

struct Ctx {
    settings: Resolver,
    manifest: RunManifest,
    /// Manifest path used when `--manifest` is absent.
    manifest_path: PathBuf,
}

impl Ctx {
    fn output(&mut self, path: &Path) {
        self.manifest.outputs.push(path.display().to_string());
    }

    fn input(&mut self, path: &Path) {
        self.manifest.inputs.push(path.display().to_string());
    }

    /// The manifest sits next to the primary output.
    fn manifest_next_to(&mut self, primary: &Path) {
        self.manifest_path = primary.with_extension("manifest.json");
    }
}

pub fn dispatch(cli: Cli) -> Result<(), CliError> {
    let start = Instant::now();
    let name = match &cli.command {
        Command::Construct(_) => "construct",
        Command::Energy(_) => "energy",
        Command::Flow(_) => "flow",
        Command::Verify(_) => "verify",
        Command::Sweep(_) => "sweep",
        Command::CutPaste(_) => "cut-paste",
    };
    let mut ctx = Ctx {
        settings: Resolver::new(cli.config.as_deref())?,
        manifest: RunManifest::new(name),
        manifest_path: PathBuf::from(format!("elastica-{name}.manifest.json")),
    };
    if let Some(path) = &cli.config {
        ctx.input(path);
    }
    let outcome = match &cli.command {
        Command::Construct(a) => construct(&mut ctx, a),
        Command::Energy(a) => energy_cmd(&mut ctx, a),
        Command::Flow(a) => flow_cmd(&mut ctx, a),
        Command::Verify(a) => verify_cmd(&mut ctx, a),
        Command::Sweep(a) => sweep_cmd(&mut ctx, a),
        Command::CutPaste(a) => cut_paste(&mut ctx, a),
    };
    // Usage errors leave nothing behind; later failures still get a manifest.
    if let Err(CliError::Usage(_)) = outcome {
        return outcome;
    }
    ctx.manifest.config = std::mem::take(&mut ctx.settings.resolved);
    ctx.manifest.wall_time_seconds = start.elapsed().as_secs_f64();
    let path = cli.manifest.unwrap_or(ctx.manifest_path);
    ctx.manifest.write(&path)?;
    outcome
}

fn family_name(f: FamilyName) -> String {
    f.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default()
}

fn required<T>(value: Option<T>, flag: &str) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::Usage(format!("--{flag} is required")))
}

fn write_svg(ctx: &mut Ctx, path: Option<&PathBuf>, c: &ArcCurve) -> Result<(), CliError> {
    if let Some(p) = path {
        fs::write(p, io::curve_to_svg(c))?;
        ctx.output(p);
    }
    Ok(())
}

/// Prints a line; a closed stdout is not an error.
fn say(text: &str) {
    use std::io::Write;
    let _ = writeln!(std::io::stdout(), "{text}");
}

fn read_input(path: &Path) -> Result<(ArcCurve, Option<Sidecar>), CliError> {
    io::read_curve(path).map_err(|e| match CliError::from(e) {
        CliError::Usage(m) => CliError::Usage(format!("{}: {m}", path.display())),
        other => other,
    })
}

fn print_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Numerical(e.to_string()))?;
    say(&text);
    Ok(text)
}

fn construct(ctx: &mut Ctx, a: &ConstructArgs) -> Result<(), CliError> {
    let s = &mut ctx.settings;
    let name = family_name(a.family);
    s.note("family", &name);
    let mut params = BTreeMap::new();
    let radius = s.get("R", a.radius, 20.0)?;
    let n = s.get("n", a.n, 4001usize)?;
    let needs_constants = matches!(
        a.family,
        FamilyName::Teardrop | FamilyName::TwoTeardrop | FamilyName::Pendant | FamilyName::PendantPerturbed
    );
    let constants = if needs_constants {
        Some(TeardropConstants::compute()?)
    } else {
        None
    };
    let c = match a.family {
        FamilyName::Line => {
            let length = s.get("length", a.length, 20.0)?;
            params.insert("length".into(), length);
            let half = 0.5 * length;
            zoo::line_curve(length, n)?
                .translated(&[-half, 0.0])
                .with_kind(CurveKind::TruncatedComplete)?
                .with_truncation_radius(half)
        }
        FamilyName::Borderline => zoo::borderline_curve(radius, n)?,
        FamilyName::BorderlineAngle => {
            let phi = required(s.optional("phi", a.phi)?, "phi")?;
            params.insert("phi".into(), phi);
            zoo::borderline_angle_curve(phi, radius, n)?
        }
        FamilyName::Serpent => zoo::serpent_curve(radius, n)?,
        FamilyName::Teardrop => zoo::teardrop_rescaled_curve(constants.as_ref().unwrap(), n)?,
        FamilyName::TwoTeardrop => zoo::two_teardrop_curve(constants.as_ref().unwrap(), n)?,
        FamilyName::Pendant => {
            // `n` approximates the total count; tails round up to whole steps so they reach R.
            let k = constants.as_ref().unwrap();
            let h = (k.l_hat + 2.0 * radius) / (n.max(2) - 1) as f64;
            let n_loop = ((k.l_hat / h).round() as usize + 1).max(7);
            zoo::pendant_curve(k, radius, n_loop)?
        }
        FamilyName::FigureEight => zoo::figure_eight_curve(n)?,
        FamilyName::Circle => {
            let r = s.get("circle_radius", a.circle_radius, FRAC_1_SQRT_2)?;
            params.insert("circle_radius".into(), r);
            zoo::circle_curve(r, n)?
        }
        FamilyName::ThreeArc => zoo::three_arc_curve(n)?,
        FamilyName::Bump => {
            let bump = experiments::Bump {
                amplitude: s.get("amplitude", a.amplitude, 0.2)?,
                center: 0.0,
                width: s.get("width", a.width, 1.0)?,
            };
            params.insert("amplitude".into(), bump.amplitude);
            params.insert("width".into(), bump.width);
            experiments::graph_curve(&[bump], radius, 2.0 * radius / (n.max(2) - 1) as f64)?
        }
        FamilyName::Eta | FamilyName::PendantPerturbed => {
            let rho = s.get("rho", a.rho, 0.05)?;
            let alpha = s.get("alpha", a.alpha, 0.02)?;
            let spacing = s.get("spacing", a.spacing, rho / 100.0)?;
            params.insert("rho".into(), rho);
            params.insert("alpha".into(), alpha);
            params.insert("spacing".into(), spacing);
            if a.family == FamilyName::Eta {
                experiments::perturb_serpent(&PerturbationSpec::serpent(rho, alpha), radius, spacing)?
            } else {
                experiments::perturb_pendant(
                    &PerturbationSpec::pendant(rho, alpha),
                    constants.as_ref().unwrap(),
                    radius,
                    spacing,
                )?
            }
        }
    };
    if c.truncation_radius().is_some() {
        params.insert("R".into(), radius);
    }
    let out = s.get("out", a.out.as_ref().map(|p| p.display().to_string()), format!("{name}.csv"))?;
    let out = PathBuf::from(out);
    io::write_curve(&out, &c, &Sidecar::for_curve(&c, Some(&name), params))?;
    ctx.output(&out);
    ctx.output(&io::sidecar_path(&out));
    ctx.manifest_next_to(&out);
    write_svg(ctx, a.svg.as_ref(), &c)?;
    say(&format!("wrote {} ({} samples, {:?})", out.display(), c.len(), c.kind()));
    Ok(())
}

#[derive(Serialize)]
struct EnergyOutput {
    file: String,
    kind: CurveKind,
    samples: usize,
    #[serde(flatten)]
    report: EnergyReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    c0_closed_defect: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    c0_closed_note: Option<String>,
}

fn energy_cmd(ctx: &mut Ctx, a: &EnergyArgs) -> Result<(), CliError> {
    ctx.input(&a.input);
    let (c, _) = read_input(&a.input)?;
    let report = energy::energies(&c)?;
    let (defect, note) = if c.kind() == CurveKind::C0Closed {
        let d = energy::c0_closed_identity_check(&c)?;
        let verdict = if d <= CLOSED_IDENTITY_TOL { "holds" } else { "fails" };
        (Some(d), Some(format!("C0-closed identity {verdict}")))
    } else {
        (None, None)
    };
    let text = print_json(&EnergyOutput {
        file: a.input.display().to_string(),
        kind: c.kind(),
        samples: c.len(),
        report,
        c0_closed_defect: defect,
        c0_closed_note: note,
    })?;
    if let Some(out) = &a.out {
        fs::write(out, text + "\n")?;
        ctx.output(out);
        ctx.manifest_next_to(out);
    }
    Ok(())
}

fn event_name(e: &EventKind) -> &'static str {
    match e {
        EventKind::SelfIntersection { .. } => "self_intersection",
        EventKind::GraphicalitySignChange { .. } => "graphicality",
    }
}

#[derive(Serialize)]
struct EventSummary {
    t: f64,
    step: usize,
    kind: &'static str,
}

#[derive(Serialize)]
struct FlowSummary {
    stop_reason: String,
    t: f64,
    steps: usize,
    initial_energy: f64,
    final_energy: f64,
    max_decay_violation: f64,
    balance_defect: f64,
    events: Vec<EventSummary>,
}

fn parse_stops(text: &str) -> Result<Vec<StopName>, CliError> {
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| StopName::from_str(t, true).map_err(|e| CliError::Usage(format!("stop `{t}`: {e}"))))
        .collect()
}

fn flow_cmd(ctx: &mut Ctx, a: &FlowArgs) -> Result<(), CliError> {
    ctx.input(&a.input);
    let (mut c, sidecar) = read_input(&a.input)?;
    if sidecar.is_none() {
        c = c.with_kind(CurveKind::TruncatedComplete)?;
    }
    let s = &mut ctx.settings;
    let radius = match s.optional("R", a.radius)? {
        Some(r) => r,
        None => {
            let r = c.truncation_radius().unwrap_or(20.0);
            s.note("R", r);
            r
        }
    };
    c = c.with_truncation_radius(radius);
    let defaults = FlowConfig::default();
    let stop_flag = (!a.stop.is_empty()).then(|| {
        a.stop
            .iter()
            .map(|v| v.to_possible_value().map(|p| p.get_name().to_string()).unwrap_or_default())
            .collect::<Vec<_>>()
            .join(",")
    });
    let stops = parse_stops(&s.get("stop", stop_flag, String::new())?)?;
    let plateau = if stops.contains(&StopName::Plateau) {
        Some(Plateau {
            tol: s.get("plateau_tol", a.plateau_tol, 1e-10)?,
            window: s.get("plateau_window", a.plateau_window, 0.05)?,
        })
    } else {
        None
    };
    let stop = StopCriteria {
        graphicality: stops.contains(&StopName::Graphicality),
        embeddedness: stops.contains(&StopName::Embeddedness),
        plateau,
    };
    let monitor = a.monitor_embeddedness || s.get("monitor_embeddedness", None, false)?;
    let config = FlowConfig {
        truncation_radius: radius,
        n_grid: s.get("n", a.n, defaults.n_grid)?,
        dt: s.optional("dt", a.dt)?,
        t_max: s.get("tmax", a.tmax, defaults.t_max)?,
        redistribute_every: s.get("redistribute_every", a.redistribute_every, defaults.redistribute_every)?,
        event_spatial_tol: s.optional("event_tol", a.event_tol)?,
        monitor_embeddedness: monitor,
        ..defaults
    };
    let log = PathBuf::from(s.get("log", a.log.as_ref().map(|p| p.display().to_string()), "flow_log.csv".into())?);
    let out = PathBuf::from(s.get("out", a.out.as_ref().map(|p| p.display().to_string()), "flow_final.csv".into())?);
    config.validate()?;

    let run = flow::run(&c, &config, stop)?;
    let state = &run.state;
    if config.dt.is_none() {
        ctx.settings.note("dt", config.step_for(state.initial_spacing));
    }
    fs::write(&log, flow_log(state))?;
    ctx.output(&log);
    io::write_curve(&out, &state.curve, &Sidecar::for_curve(&state.curve, Some("flow"), BTreeMap::new()))?;
    ctx.output(&out);
    ctx.output(&io::sidecar_path(&out));
    let events_path = log.with_extension("events.json");
    fs::write(
        &events_path,
        serde_json::to_string_pretty(&state.events).map_err(|e| CliError::Numerical(e.to_string()))? + "\n",
    )?;
    ctx.output(&events_path);
    ctx.manifest_next_to(&out);
    write_svg(ctx, a.svg.as_ref(), &state.curve)?;
    ctx.manifest.stop_reason = Some(run.stop_reason.to_string());

    let audit = flow::energy_decay_audit(state);
    let history = &state.history;
    print_json(&FlowSummary {
        stop_reason: run.stop_reason.to_string(),
        t: state.t,
        steps: state.step,
        initial_energy: history[0].energy.energy,
        final_energy: history[history.len() - 1].energy.energy,
        max_decay_violation: audit.max_violation,
        balance_defect: audit.balance_defect,
        events: state
            .events
            .iter()
            .map(|e| EventSummary {
                t: e.t,
                step: e.step,
                kind: event_name(&e.event),
            })
            .collect(),
    })?;
    if run.stop_reason == StopReason::ImmersionLoss {
        return Err(CliError::Numerical(format!("immersion lost at t = {}", state.t)));
    }
    Ok(())
}

/// One row per recorded step; an event is marked on the first row at or after its time.
fn flow_log(state: &flow::FlowState) -> String {
    let mut text = String::from("t,E,B,D,min_tangent_e1,sup_curvature,event\n");
    let mut pending = state.events.iter().peekable();
    for h in &state.history {
        let mut marks = Vec::new();
        while let Some(e) = pending.next_if(|e| e.t <= h.t) {
            marks.push(event_name(&e.event));
        }
        let fields = [h.t, h.energy.energy, h.energy.bending, h.energy.direction, h.min_tangent_e1, h.sup_curvature];
        let row: Vec<String> = fields.iter().map(|v| fmt_f64(*v)).collect();
        text.push_str(&row.join(","));
        text.push(',');
        text.push_str(&marks.join(";"));
        text.push('\n');
    }
    text
}

fn verify_cmd(ctx: &mut Ctx, a: &VerifyArgs) -> Result<(), CliError> {
    let suites: Vec<Suite> = match a.suite {
        SuiteName::Constants => vec![Suite::Constants],
        SuiteName::Identities => vec![Suite::Identities],
        SuiteName::Bounds => vec![Suite::Bounds],
        SuiteName::FlowSmoke => vec![Suite::FlowSmoke],
        SuiteName::All => vec![Suite::Constants, Suite::Identities, Suite::Bounds, Suite::FlowSmoke],
    };
    ctx.settings.note("suite", format!("{:?}", a.suite).to_lowercase());
    let reports = suites
        .into_iter()
        .map(verify::run_suite)
        .collect::<elastica::Result<Vec<SuiteReport>>>()?;
    for r in &reports {
        say(&format!("[{:?}]\n{}", r.suite, r.table().trim_end()));
    }
    if let Some(out) = &a.out {
        fs::write(out, serde_json::to_string_pretty(&reports).map_err(|e| CliError::Numerical(e.to_string()))? + "\n")?;
        ctx.output(out);
        ctx.manifest_next_to(out);
    }
    let failed: Vec<&str> = reports
        .iter()
        .flat_map(|r| r.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()))
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Verification(failed.join("; ")))
    }
}

#[derive(Serialize)]
struct SweepSummary {
    seed: u64,
    samples: usize,
    self_intersecting: usize,
    below_eight: usize,
    tangential_unwound: usize,
    violations: Vec<String>,
}

fn sweep_cmd(ctx: &mut Ctx, a: &SweepArgs) -> Result<(), CliError> {
    let n = ctx.settings.get("n", a.n, 500usize)?;
    let seed = ctx.settings.get("seed", a.seed, 0u64)?;
    let report = experiments::li_yau_sweep(n, seed)?;
    print_json(&SweepSummary {
        seed,
        samples: report.samples.len(),
        self_intersecting: report.self_intersecting,
        below_eight: report.below_eight,
        tangential_unwound: report.tangential_unwound,
        violations: report.violations.clone(),
    })?;
    if let Some(out) = &a.out {
        fs::write(out, serde_json::to_string_pretty(&report).map_err(|e| CliError::Numerical(e.to_string()))? + "\n")?;
        ctx.output(out);
        ctx.manifest_next_to(out);
    }
    if report.violations.is_empty() {
        Ok(())
    } else {
        Err(CliError::Verification(format!("{} bound violations", report.violations.len())))
    }
}

#[derive(Serialize)]
struct AssemblySummary {
    samples: usize,
    kind: CurveKind,
    #[serde(rename = "E")]
    energy: f64,
    #[serde(rename = "E_hat")]
    energy_hat: f64,
    /// Sum of the pieces' energies; horizontal segments contribute nothing.
    parts_energy: f64,
    additivity_defect: f64,
}

fn cut_paste(ctx: &mut Ctx, a: &CutPasteArgs) -> Result<(), CliError> {
    let (assembled, parts_energy) = match a.preset {
        Some(preset) => {
            if !a.inputs.is_empty() {
                return Err(CliError::Usage("--preset and --input are exclusive".into()));
            }
            let s = &mut ctx.settings;
            let n = s.get("n", a.n, 4001usize)?;
            match preset {
                Preset::FigureEight => {
                    s.note("preset", "figure-eight");
                    let tail = s.get("R", a.radius, 10.0)?;
                    let gap = s.get("gap", a.gap, 0.0)?;
                    let eight = energy::energies(&zoo::figure_eight_curve(n)?)?;
                    // The closed figure-eight has D = L, so its E equals Ê.
                    (zoo::figure_eight_assembly(n, tail, gap)?, eight.energy_hat)
                }
                Preset::BorderlineCircle => {
                    s.note("preset", "borderline-circle");
                    let radius = s.get("R", a.radius, 20.0)?;
                    let border = energy::energies(&zoo::borderline_curve(radius, n)?)?;
                    let circle = energy::energies(&zoo::circle_curve(FRAC_1_SQRT_2, n)?)?;
                    (
                        zoo::borderline_circle_assembly(radius, n, FRAC_1_SQRT_2)?,
                        border.energy + circle.energy,
                    )
                }
            }
        }
        None => {
            if a.inputs.len() < 2 {
                return Err(CliError::Usage("cut-paste needs --preset or at least two --input files".into()));
            }
            let gaps = if a.gaps.is_empty() {
                vec![0.0; a.inputs.len() - 1]
            } else {
                a.gaps.clone()
            };
            ctx.settings.note(
                "gaps",
                gaps.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(","),
            );
            let mut pieces = Vec::new();
            let mut total = 0.0;
            for path in &a.inputs {
                ctx.input(path);
                let (c, _) = read_input(path)?;
                total += energy::energies(&c)?.energy;
                pieces.push(c);
            }
            (zoo::cut_and_paste(&pieces, &gaps)?, total)
        }
    };
    let report = energy::energies(&assembled)?;
    let out = PathBuf::from(ctx.settings.get(
        "out",
        a.out.as_ref().map(|p| p.display().to_string()),
        "assembly.csv".into(),
    )?);
    io::write_curve(&out, &assembled, &Sidecar::for_curve(&assembled, Some("cut-paste"), BTreeMap::new()))?;
    ctx.output(&out);
    ctx.output(&io::sidecar_path(&out));
    ctx.manifest_next_to(&out);
    write_svg(ctx, a.svg.as_ref(), &assembled)?;
    print_json(&AssemblySummary {
        samples: assembled.len(),
        kind: assembled.kind(),
        energy: report.energy,
        energy_hat: report.energy_hat,
        parts_energy,
        additivity_defect: (report.energy - parts_energy).abs(),
    })?;
    Ok(())
}
