//! Acceptance criteria 1–12, one test each. Every test prints a single
//! `criterion N: PASS|FAIL ...` line before asserting.

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use elastica::energy::{self, EnergyReport};
use elastica::experiments::{self, EmbeddednessConfig, GraphicalityConfig, SERPENT_ENERGY};
use elastica::flow::{self, FlowConfig, FlowState, StopCriteria, StopReason};
use elastica::zoo::{self, TeardropConstants};
use elastica::ArcCurve;

const DECAY_SLACK: f64 = 1e-7;

fn report(criterion: u32, pass: bool, detail: String) {
    println!("criterion {criterion}: {} {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {criterion}: {detail}");
}

fn within(got: f64, expected: f64, tol: f64) -> bool {
    (got - expected).abs() <= tol
}

fn energies(c: &ArcCurve) -> EnergyReport {
    energy::energies(c).unwrap()
}

#[test]
fn criterion_01_teardrop_modulus() {
    let start = Instant::now();
    let m = TeardropConstants::compute().unwrap().m_t;
    let elapsed = start.elapsed();
    let pass = within(m, 0.731183, 1e-6) && elapsed < Duration::from_secs(1);
    report(1, pass, format!("m_T = {m:.9} in {elapsed:.2?}"));
}

#[test]
fn criterion_02_teardrop_energy() {
    let start = Instant::now();
    let k = TeardropConstants::compute().unwrap();
    let r = energies(&zoo::teardrop_rescaled_curve(&k, 16001).unwrap());
    let elapsed = start.elapsed();
    let pass = within(r.energy_hat, 8.563436, 1e-5)
        && within(r.energy, r.energy_hat, 1e-8)
        && within(r.bending, r.length, 1e-6)
        && elapsed < Duration::from_secs(5);
    report(
        2,
        pass,
        format!("Ê = {:.9}, E = {:.9}, B − L = {:.1e}, {elapsed:.2?}", r.energy_hat, r.energy, r.bending - r.length),
    );
}

#[test]
fn criterion_03_pendant_threshold() {
    let k = TeardropConstants::compute().unwrap();
    let pendant = energies(&zoo::pendant_curve(&k, 20.0, 4001).unwrap()).energy;
    let teardrop = energies(&zoo::teardrop_rescaled_curve(&k, 16001).unwrap()).energy_hat;
    let split = SERPENT_ENERGY + teardrop;
    let pass = within(pendant, 10.906581, 1e-5) && within(pendant, split, 1e-8);
    report(3, pass, format!("E[pendant] = {pendant:.10}, (8 − 4√2) + Ê = {split:.10}"));
}

#[test]
fn criterion_04_two_teardrop_constant() {
    let k = TeardropConstants::compute().unwrap();
    let two = energies(&zoo::two_teardrop_curve(&k, 16001).unwrap());
    let one = energies(&zoo::teardrop_rescaled_curve(&k, 16001).unwrap());
    let lb2 = 2.0 * two.length * two.bending;
    let square = 2.0 * one.energy_hat.powi(2);
    let pass = within(lb2, 146.664860, 1e-3) && (lb2 - square).abs() <= 1e-6 * square;
    report(4, pass, format!("2LB = {lb2:.7}, 2Ê² = {square:.7}"));
}

#[test]
fn criterion_05_borderline_energies() {
    let mut pass = true;
    let mut detail = Vec::new();
    let e = energies(&zoo::borderline_curve(20.0, 16001).unwrap()).energy;
    pass &= within(e, 8.0, 1e-8);
    detail.push(format!("E[b] − 8 = {:.1e}", e - 8.0));
    for phi in [PI / 6.0, PI / 3.0, PI / 2.0, 2.0 * PI / 3.0, PI] {
        let e = energies(&zoo::borderline_angle_curve(phi, 20.0, 16001).unwrap()).energy;
        let exact = 8.0 * (phi / 4.0).sin().powi(2);
        pass &= within(e, exact, 1e-8);
        detail.push(format!("φ = {phi:.4}: {:.1e}", e - exact));
    }
    let e = energies(&zoo::serpent_curve(20.0, 16001).unwrap()).energy;
    pass &= within(e, 8.0 - 4.0 * SQRT_2, 1e-8);
    detail.push(format!("serpent: {:.1e}", e - (8.0 - 4.0 * SQRT_2)));
    report(5, pass, detail.join(", "));
}

#[test]
fn criterion_06_comparison_chain() {
    let k = TeardropConstants::compute().unwrap();
    let serpent = energies(&zoo::serpent_curve(20.0, 16001).unwrap()).energy;
    let border = energies(&zoo::borderline_curve(20.0, 16001).unwrap()).energy;
    let pendant = energies(&zoo::pendant_curve(&k, 20.0, 4001).unwrap()).energy;
    let eight = energies(&zoo::figure_eight_curve(16001).unwrap());
    let eight_lb = 2.0 * (eight.length * eight.bending).sqrt();
    let assembly = energies(&zoo::borderline_circle_assembly(20.0, 16001, FRAC_1_SQRT_2).unwrap()).energy;
    let three_arc = energies(&zoo::three_arc_curve(16001).unwrap()).energy_hat;
    let teardrop = energies(&zoo::teardrop_rescaled_curve(&k, 16001).unwrap()).energy_hat;
    let chain = [serpent, border, pendant, eight_lb, assembly];
    let pass = chain.windows(2).all(|w| w[0] < w[1])
        && within(eight_lb, 14.995973, 1e-5)
        && within(assembly, 16.885766, 1e-5)
        && within(three_arc, 7.0 * SQRT_2 * PI / 3.0, 1e-10)
        && three_arc > teardrop;
    report(
        6,
        pass,
        format!(
            "{serpent:.6} < {border:.6} < {pendant:.6} < {eight_lb:.6} < {assembly:.6}; three-arc Ê − 7√2π/3 = {:.1e} > Ê[T] = {teardrop:.6}",
            three_arc - 7.0 * SQRT_2 * PI / 3.0
        ),
    );
}

#[test]
fn criterion_07_cut_and_paste_neutrality() {
    // Figure-eight: lines carry no energy and the closed loop has D = L, so E equals Ê of the loop.
    let eight = energies(&zoo::figure_eight_curve(16001).unwrap()).energy_hat;
    let glued = energies(&zoo::figure_eight_assembly(16001, 10.0, 0.0).unwrap()).energy;
    let spread = energies(&zoo::figure_eight_assembly(16001, 10.0, 2.0).unwrap()).energy;
    // Borderline followed by a circle: energies add.
    let parts = energies(&zoo::borderline_curve(20.0, 16001).unwrap()).energy
        + energies(&zoo::circle_curve(FRAC_1_SQRT_2, 16001).unwrap()).energy;
    let assembly = energies(&zoo::borderline_circle_assembly(20.0, 16001, FRAC_1_SQRT_2).unwrap()).energy;
    let defects = [glued - eight, spread - glued, assembly - parts];
    let pass = defects.iter().all(|d| d.abs() <= 1e-8);
    report(7, pass, format!("defects {:.1e} {:.1e} {:.1e}", defects[0], defects[1], defects[2]));
}

#[test]
fn criterion_08_lower_bound_sweep() {
    let start = Instant::now();
    let r = experiments::li_yau_sweep(500, 2024).unwrap();
    let elapsed = start.elapsed();
    let pass = r.samples.len() >= 500
        && r.violations.is_empty()
        && r.self_intersecting > 0
        && r.below_eight > 0
        && r.tangential_unwound > 0
        && elapsed < Duration::from_secs(120);
    report(
        8,
        pass,
        format!(
            "{} curves, {} violations, {} self-intersecting, {} below 8, {} tangential N = 0, {elapsed:.1?}",
            r.samples.len(),
            r.violations.len(),
            r.self_intersecting,
            r.below_eight,
            r.tangential_unwound
        ),
    );
}

fn max_displacement(a: &ArcCurve, b: &ArcCurve) -> f64 {
    a.coords().iter().zip(b.coords()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn flow_config(radius: f64, n: usize, dt: f64, t_max: f64) -> FlowConfig {
    FlowConfig {
        truncation_radius: radius,
        n_grid: n,
        dt: Some(dt),
        t_max,
        ..FlowConfig::default()
    }
}

fn bump_graph() -> ArcCurve {
    let bumps = [experiments::Bump {
        amplitude: 0.3,
        center: 0.0,
        width: 1.0,
    }];
    experiments::graph_curve(&bumps, 10.0, 0.01).unwrap()
}

#[test]
fn criterion_09_equilibria_and_decay() {
    let start = Instant::now();
    let mut pass = true;
    let mut detail = Vec::new();

    // Line: every step, including redistribution, leaves the nodes in place.
    let line = experiments::graph_curve(&[], 10.0, 0.02).unwrap();
    let cfg = flow_config(10.0, line.len(), 1e-4, 1.0);
    let mut state = FlowState::new(&line, &cfg).unwrap();
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let before = state.curve.clone();
        state.step(&cfg, 1e-4).unwrap();
        worst = worst.max(max_displacement(&before, &state.curve));
    }
    pass &= worst <= 1e-12;
    detail.push(format!("line step displacement {worst:.1e}"));

    // Borderline: drift over a fixed time shrinks like h².
    let drift = |n: usize| {
        let b = zoo::borderline_curve(20.0, n).unwrap();
        let run = flow::run(&b, &flow_config(20.0, n, 1e-4, 0.01), StopCriteria::default()).unwrap();
        (max_displacement(&b, &run.state.curve), run.state.max_decay_violation)
    };
    let (coarse, v1) = drift(1001);
    let (fine, v2) = drift(2001);
    let ratio = coarse / fine;
    pass &= (3.0..=5.0).contains(&ratio);
    detail.push(format!("borderline drift {coarse:.2e} → {fine:.2e} (ratio {ratio:.2})"));

    // Dissipation balance improves under (dt, h) refinement.
    let graph = bump_graph();
    let audit = |n: usize, dt: f64| {
        let run = flow::run(&graph, &flow_config(10.0, n, dt, 0.02), StopCriteria::default()).unwrap();
        (flow::energy_decay_audit(&run.state), run.state.max_decay_violation)
    };
    let (a1, v3) = audit(1001, 1e-4);
    let (a2, v4) = audit(2001, 2.5e-5);
    pass &= a2.balance_defect.abs() < a1.balance_defect.abs();
    detail.push(format!(
        "balance defect {:.2e} → {:.2e}",
        a1.balance_defect.abs(),
        a2.balance_defect.abs()
    ));

    let violation = [v1, v2, v3, v4, a1.max_violation, a2.max_violation].into_iter().fold(0.0, f64::max);
    pass &= violation <= DECAY_SLACK;
    let elapsed = start.elapsed();
    pass &= elapsed < Duration::from_secs(300);
    detail.push(format!("max energy increase {violation:.1e}, {elapsed:.1?}"));
    report(9, pass, detail.join("; "));
}

#[test]
fn criterion_10_graphicality_breaking() {
    let start = Instant::now();
    let r = experiments::graphicality_threshold_experiment(&GraphicalityConfig::default()).unwrap();
    let elapsed = start.elapsed();
    let decay = r
        .entries
        .iter()
        .flat_map(|e| e.runs.iter().map(|run| run.max_decay_violation))
        .fold(0.0, f64::max);
    let agreeing: Vec<String> = r
        .entries
        .iter()
        .filter(|e| e.agrees)
        .map(|e| {
            let times: Vec<String> = e.runs.iter().map(|run| format!("{:.3e}", run.event_time.unwrap())).collect();
            format!("α = {} at t = {}", e.alpha, times.join(" / "))
        })
        .collect();
    let rate_error = (r.initial_rate_alpha0 / r.predicted_rate_alpha0 - 1.0).abs();
    let pass = r.breaking_found
        && decay <= DECAY_SLACK
        && rate_error < 1e-6
        && elapsed < Duration::from_secs(600);
    report(
        10,
        pass,
        format!(
            "{}; origin rate error {rate_error:.1e}; max energy increase {decay:.1e}; {elapsed:.1?}",
            agreeing.join(", ")
        ),
    );
}

#[test]
fn criterion_11_embeddedness_breaking() {
    let start = Instant::now();
    let r = experiments::embeddedness_threshold_experiment(&EmbeddednessConfig::default()).unwrap();
    let elapsed = start.elapsed();
    let decay = r
        .entries
        .iter()
        .map(|e| e.run.max_decay_violation)
        .chain([r.control.max_decay_violation])
        .fold(0.0, f64::max);
    let breaking: Vec<String> = r
        .entries
        .iter()
        .filter_map(|e| e.run.event_time.map(|t| format!("α = {} at t = {t:.3e}", e.alpha)))
        .collect();
    let pass = r.breaking_found
        && r.control.initial_energy <= r.pendant_energy - 1.0
        && r.control_events == 0
        && r.control.stop_reason == StopReason::TMax
        && decay <= DECAY_SLACK
        && elapsed < Duration::from_secs(600);
    report(
        11,
        pass,
        format!(
            "{}; control E = {:.4} with {} events; max energy increase {decay:.1e}; {elapsed:.1?}",
            breaking.join(", "),
            r.control.initial_energy,
            r.control_events
        ),
    );
}

#[test]
fn criterion_12_graphicality_preserved_below_threshold() {
    let target = SERPENT_ENERGY - 0.1;
    let (radius, spacing) = (20.0, 0.04);
    let results: Vec<(f64, f64, bool, bool, f64)> = (0..10u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(1200 + i);
            let (_, graph, _) = experiments::random_graph_below(&mut rng, target, radius, spacing).unwrap();
            let cfg = flow_config(radius, graph.len(), 1e-4, 1.0);
            let stop = StopCriteria {
                graphicality: true,
                ..StopCriteria::default()
            };
            let run = flow::run(&graph, &cfg, stop).unwrap();
            let h = &run.state.history;
            let min_tangent = h.iter().map(|e| e.min_tangent_e1).fold(f64::INFINITY, f64::min);
            // Late times: the second half of the horizon.
            let late = &h[h.len() / 2..];
            let decreasing = late.windows(2).all(|w| w[1].sup_curvature <= w[0].sup_curvature * (1.0 + 1e-9));
            let kept = run.stop_reason == StopReason::TMax && min_tangent > 0.0 && run.state.events.is_empty();
            (h[0].energy.energy, min_tangent, kept, decreasing, run.state.max_decay_violation)
        })
        .collect();
    let pass = results
        .iter()
        .all(|&(e, _, kept, decreasing, v)| e < target && kept && decreasing && v <= DECAY_SLACK);
    let worst = results.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
    let top = results.iter().map(|r| r.0).fold(0.0, f64::max);
    report(
        12,
        pass,
        format!(
            "10 graphs with E ≤ {top:.4} < {target:.4}; min ⟨T, e₁⟩ = {worst:.4}; sup|κ| non-increasing on the late half: {}",
            results.iter().filter(|r| r.3).count()
        ),
    );
}
