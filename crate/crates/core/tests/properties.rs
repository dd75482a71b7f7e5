use std::f64::consts::{FRAC_PI_2, TAU};

use proptest::prelude::*;

use elastica::curve::{self, ArcCurve, CurveKind};
use elastica::energy::{self, turning_lower_bound};
use elastica::experiments::{self, Bump};
use elastica::{io, specfun};

fn ellipse(a: f64, b: f64, n: usize) -> ArcCurve {
    let params: Vec<f64> = (0..n).map(|i| TAU * i as f64 / (n - 1) as f64).collect();
    let mut points: Vec<[f64; 2]> = params.iter().map(|&u| [a * u.cos(), b * u.sin()]).collect();
    points[n - 1] = points[0];
    let c = ArcCurve::planar(params, &points, CurveKind::C0Closed).unwrap();
    curve::reparametrize_arclength(&c, n).unwrap()
}

fn bump() -> impl Strategy<Value = Bump> {
    (-0.6f64..0.6, -3.0f64..3.0, 0.6f64..1.5).prop_map(|(amplitude, center, width)| Bump {
        amplitude,
        center,
        width,
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn turning_bound_is_monotone_and_adds_eight_per_turn(delta in 0.0f64..20.0, extra in 0.0f64..3.0) {
        prop_assert!(turning_lower_bound(delta + extra) >= turning_lower_bound(delta) - 1e-12);
        let shifted = turning_lower_bound(delta + TAU) - turning_lower_bound(delta);
        prop_assert!((shifted - 8.0).abs() < 1e-10);
    }

    #[test]
    fn energy_report_is_consistent_on_graphs(bumps in prop::collection::vec(bump(), 1..4)) {
        let c = experiments::graph_curve(&bumps, 10.0, 0.02).unwrap();
        let r = energy::energies(&c).unwrap();
        for v in [r.length, r.direction, r.bending, r.energy, r.energy_hat, r.tail_bound] {
            prop_assert!(v >= 0.0);
        }
        prop_assert_eq!(r.energy, r.bending + r.direction);
        prop_assert_eq!(r.energy_hat, r.bending + r.length);
        let variation = curve::tangent_e1_total_variation(&c).unwrap();
        prop_assert!(variation <= r.energy + 1e-6, "{} > {}", variation, r.energy);
        let turning = energy::net_turning(&c).unwrap();
        prop_assert!(r.energy + r.tail_bound + 1e-4 >= turning_lower_bound(turning));
    }

    #[test]
    fn energy_is_translation_invariant(bumps in prop::collection::vec(bump(), 1..3), dx in -5.0f64..5.0, dy in -5.0f64..5.0) {
        let c = experiments::graph_curve(&bumps, 8.0, 0.02).unwrap();
        let a = energy::energies(&c).unwrap();
        let b = energy::energies(&c.translated(&[dx, dy])).unwrap();
        prop_assert!((a.energy - b.energy).abs() <= 1e-9 * a.length);
        prop_assert!((a.length - b.length).abs() <= 1e-12 * a.length);
    }

    #[test]
    fn closed_curves_scale_and_rotate_as_expected(
        a in 0.8f64..2.0, b in 0.8f64..2.0, scale in 0.5f64..3.0, angle in 0.0f64..TAU,
    ) {
        let c = ellipse(a, b, 2001);
        let base = energy::energies(&c).unwrap();
        let big = energy::energies(&c.scaled(scale)).unwrap();
        prop_assert!((big.length - scale * base.length).abs() <= 1e-9 * big.length);
        prop_assert!((big.bending - base.bending / scale).abs() <= 1e-8 * base.bending / scale);
        prop_assert!((big.length * big.bending - base.length * base.bending).abs() <= 1e-8 * base.length * base.bending);

        let (s, co) = angle.sin_cos();
        let turned = energy::energies(&c.mapped(&[co, -s, s, co])).unwrap();
        prop_assert!((turned.energy - base.energy).abs() <= 1e-8 * base.energy);
        prop_assert!(energy::c0_closed_identity_check(&c).unwrap() <= 1e-8 * base.length);
    }

    #[test]
    fn csv_round_trip_is_exact(bumps in prop::collection::vec(bump(), 1..3)) {
        let c = experiments::graph_curve(&bumps, 4.0, 0.05).unwrap();
        let (dim, params, coords) = io::parse_csv(&io::curve_to_csv(&c)).unwrap();
        prop_assert_eq!(dim, 2);
        prop_assert_eq!(params.as_slice(), c.params());
        prop_assert_eq!(coords.as_slice(), c.coords());
    }

    #[test]
    fn arclength_resampling_is_idempotent(a in 0.8f64..2.0, b in 0.8f64..2.0) {
        let once = ellipse(a, b, 2001);
        let twice = curve::reparametrize_arclength(&once, 2001).unwrap();
        let gap = once
            .coords()
            .iter()
            .zip(twice.coords())
            .map(|(p, q)| (p - q).abs())
            .fold(0.0, f64::max);
        prop_assert!(gap <= 1e-10, "{}", gap);
    }

    #[test]
    fn amplitude_inverts_the_incomplete_integral(phi in -3.0f64..3.0, m in 0.0f64..0.95) {
        let u = specfun::incomplete_f(phi, m).unwrap();
        let back = specfun::jacobi_amplitude(u, m).unwrap();
        prop_assert!((back - phi).abs() <= 1e-10, "{} vs {}", back, phi);
        let quarter = specfun::incomplete_f(FRAC_PI_2, m).unwrap();
        prop_assert!((quarter - specfun::complete_k(m).unwrap()).abs() <= 1e-12 * quarter);
    }
}

#[test]
fn resampling_is_idempotent_at_the_most_eccentric_corner() {
    for (a, b) in [(0.8, 2.0), (2.0, 0.8)] {
        let once = ellipse(a, b, 2001);
        let twice = curve::reparametrize_arclength(&once, 2001).unwrap();
        let gap = once.coords().iter().zip(twice.coords()).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
        assert!(gap <= 1e-10, "{gap}");
    }
}
