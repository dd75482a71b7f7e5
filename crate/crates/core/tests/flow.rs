use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};

use elastica::curve::{ArcCurve, CurveKind};
use elastica::energy;
use elastica::experiments::{self, Bump};
use elastica::flow::{self, FlowConfig, FlowState, StopCriteria, StopReason};
use elastica::zoo;

/// Counterclockwise ellipse sampled uniformly in its angle parameter.
fn ellipse(a: f64, b: f64, n: usize) -> ArcCurve {
    let params: Vec<f64> = (0..n).map(|i| TAU * i as f64 / (n - 1) as f64).collect();
    let mut points: Vec<[f64; 2]> = params.iter().map(|&u| [a * u.cos(), b * u.sin()]).collect();
    points[n - 1] = points[0];
    ArcCurve::planar(params, &points, CurveKind::C0Closed).unwrap()
}

/// Exact velocity `(−k_ss − k³/2 + k) N` of the ellipse at angle `u`, N the inward normal.
fn ellipse_velocity(a: f64, b: f64, u: f64) -> [f64; 2] {
    let q = a * a * u.sin().powi(2) + b * b * u.cos().powi(2);
    let dq = (a * a - b * b) * (2.0 * u).sin();
    let ddq = 2.0 * (a * a - b * b) * (2.0 * u).cos();
    let k = a * b * q.powf(-1.5);
    let k_u = -1.5 * a * b * q.powf(-2.5) * dq;
    let k_uu = 3.75 * a * b * q.powf(-3.5) * dq * dq - 1.5 * a * b * q.powf(-2.5) * ddq;
    let speed = q.sqrt();
    let speed_u = dq / (2.0 * speed);
    let k_ss = (k_uu - speed_u / speed * k_u) / q;
    let magnitude = -k_ss - 0.5 * k.powi(3) + k;
    let tangent = [-a * u.sin() / speed, b * u.cos() / speed];
    [-magnitude * tangent[1], magnitude * tangent[0]]
}

fn velocity_error(a: f64, b: f64, n: usize) -> f64 {
    let c = ellipse(a, b, n);
    let v = flow::velocity(&c).unwrap();
    c.params()
        .iter()
        .enumerate()
        .map(|(i, &u)| {
            let exact = ellipse_velocity(a, b, u);
            (v.v[2 * i] - exact[0]).hypot(v.v[2 * i + 1] - exact[1])
        })
        .fold(0.0, f64::max)
}

#[test]
fn velocity_matches_the_ellipse_closed_form() {
    let sup = (0..1000)
        .map(|i| {
            let v = ellipse_velocity(2.0, 1.0, TAU * i as f64 / 1000.0);
            v[0].hypot(v[1])
        })
        .fold(0.0, f64::max);
    let err = velocity_error(2.0, 1.0, 1001);
    assert!(err < 1e-6 * sup, "{err} against sup {sup}");
}

#[test]
fn velocity_is_fourth_order() {
    let coarse = velocity_error(2.0, 1.0, 201);
    let fine = velocity_error(2.0, 1.0, 401);
    let order = (coarse / fine).log2();
    assert!((3.5..4.5).contains(&order), "observed order {order}");
}

#[test]
fn borderline_is_stationary_in_the_interior() {
    let c = zoo::borderline_curve(20.0, 8001).unwrap();
    let v = flow::velocity(&c).unwrap();
    let n = c.len();
    let sup = v.v.chunks(2).take(n - 4).skip(4).map(|p| p[0].hypot(p[1])).fold(0.0, f64::max);
    assert!(sup <= 1e-4, "{sup}");
}

#[test]
fn redistribution_preserves_energy() {
    // Circle with nodes bunched toward one side, then spread evenly.
    let (r, n) = (FRAC_1_SQRT_2, 4001);
    let u: Vec<f64> = (0..n)
        .map(|i| {
            let t = TAU * i as f64 / (n - 1) as f64;
            t - 0.3 * t.sin()
        })
        .collect();
    let params: Vec<f64> = u.iter().map(|t| r * t).collect();
    let mut points: Vec<[f64; 2]> = u.iter().map(|t| [r * t.sin(), r * (1.0 - t.cos())]).collect();
    points[n - 1] = points[0];
    let bunched = ArcCurve::planar(params, &points, CurveKind::C0Closed).unwrap();
    let even = flow::redistribute(&bunched).unwrap();
    let e = energy::energies(&even).unwrap().energy;
    let exact = PI / r + TAU * r;
    assert!((e - exact).abs() <= 1e-8, "{e} vs {exact}");

    let again = energy::energies(&flow::redistribute(&even).unwrap()).unwrap().energy;
    assert!((again - e).abs() <= 1e-8);
}

#[test]
fn graph_flow_decreases_energy_and_balances_dissipation() {
    let bumps = [Bump {
        amplitude: 0.4,
        center: 1.0,
        width: 0.8,
    }];
    let graph = experiments::graph_curve(&bumps, 10.0, 0.02).unwrap();
    let config = FlowConfig {
        truncation_radius: 10.0,
        n_grid: graph.len(),
        dt: Some(1e-4),
        t_max: 0.05,
        ..FlowConfig::default()
    };
    let run = flow::run(&graph, &config, StopCriteria::default()).unwrap();
    assert_eq!(run.stop_reason, StopReason::TMax);
    let h = &run.state.history;
    for w in h.windows(2) {
        assert!(w[1].energy.energy <= w[0].energy.energy + config.energy_decay_slack);
    }
    let audit = flow::energy_decay_audit(&run.state);
    assert!(audit.balance_defect.abs() < 0.05 * (h[0].energy.energy - h[h.len() - 1].energy.energy));
}

#[test]
fn ends_stay_clamped() {
    let graph = experiments::graph_curve(
        &[Bump {
            amplitude: 0.3,
            center: 0.0,
            width: 1.0,
        }],
        8.0,
        0.02,
    )
    .unwrap();
    let config = FlowConfig {
        truncation_radius: 8.0,
        n_grid: graph.len(),
        dt: Some(1e-4),
        ..FlowConfig::default()
    };
    let mut state = FlowState::new(&graph, &config).unwrap();
    let (first, last) = (state.curve.point(0).to_vec(), state.curve.point(graph.len() - 1).to_vec());
    for _ in 0..50 {
        state.step(&config, 1e-4).unwrap();
    }
    assert_eq!(state.curve.point(0), &first[..]);
    assert_eq!(state.curve.point(graph.len() - 1), &last[..]);
}

#[test]
fn initial_events_stop_at_time_zero() {
    let k = zoo::TeardropConstants::compute().unwrap();
    let pendant = zoo::pendant_curve(&k, 16.0, 401).unwrap();
    let config = FlowConfig {
        truncation_radius: 16.0,
        n_grid: 4001,
        t_max: 1e-6,
        ..FlowConfig::default()
    };
    let stop = StopCriteria {
        graphicality: true,
        ..StopCriteria::default()
    };
    let run = flow::run(&pendant, &config, stop).unwrap();
    assert_eq!(run.stop_reason, StopReason::Graphicality);
    assert_eq!(run.first_event_time(true), Some(0.0));
    assert_eq!(run.state.step, 0);
}

#[test]
fn sloped_ends_are_rejected() {
    let c = zoo::borderline_curve(3.0, 601).unwrap();
    let config = FlowConfig {
        truncation_radius: 3.0,
        n_grid: 601,
        ..FlowConfig::default()
    };
    assert!(flow::run(&c, &config, StopCriteria::default()).is_err());
}

#[test]
fn borderline_barely_moves_over_a_hundred_steps() {
    let c = zoo::borderline_curve(20.0, 16001).unwrap();
    let config = FlowConfig {
        truncation_radius: 20.0,
        n_grid: 16001,
        dt: Some(1e-5),
        redistribute_every: 1000,
        ..FlowConfig::default()
    };
    let mut state = FlowState::new(&c, &config).unwrap();
    let start = state.curve.coords().to_vec();
    for _ in 0..100 {
        state.step(&config, 1e-5).unwrap();
    }
    let moved = start
        .chunks(2)
        .zip(state.curve.coords().chunks(2))
        .map(|(p, q)| (p[0] - q[0]).hypot(p[1] - q[1]))
        .fold(0.0, f64::max);
    assert!(moved <= 1e-3, "{moved}");
}
