use proptest::prelude::*;
use vwave::free_motion::{free_params, node_trajectory, wave_value};
use vwave::nodes::{find_profile_nodes, superposition_grid, track_superposition_nodes, DEFAULT_TOLERANCE};
use vwave::series::build_series;
use vwave::wronskian::{sample_wave, u_minus, RadialGrid};
use vwave::{AtomSpec, BoundWave, Constants};

fn wave(n: u32) -> BoundWave {
    let s = build_series(AtomSpec::new(1, n).unwrap(), Constants::ATOMIC);
    sample_wave(&s, &RadialGrid::for_state(&s, 3.0, 600, 1e-3).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn detector_ignores_positive_rescaling(n in 1u32..=3, log_scale in -30.0f64..30.0) {
        let w = wave(n);
        let profile = w.radial_profile();
        let base = find_profile_nodes(&profile, w.r_o(), DEFAULT_TOLERANCE).unwrap();
        let scaled = find_profile_nodes(&profile.scaled(log_scale.exp()), w.r_o(), DEFAULT_TOLERANCE).unwrap();
        prop_assert_eq!(base.nodes.len(), scaled.nodes.len());
        for (a, b) in base.nodes.iter().zip(&scaled.nodes) {
            prop_assert_eq!(a.kind, b.kind);
            prop_assert!((a.radius - b.radius).abs() <= 1e-6 * w.r_o());
        }
    }

    #[test]
    fn free_wave_vanishes_on_node_trajectories(
        v in prop_oneof![0.1f64..3.0, -3.0f64..-0.1],
        m in 0.1f64..2.0,
        branch in 0i64..=5,
        t in 0.0f64..10.0,
    ) {
        let p = free_params(v, m, Constants::ATOMIC).unwrap();
        let x = node_trajectory(&p, branch, t);
        prop_assert!(wave_value(x, t, &p).abs() <= 1e-12 * p.amplitude);
        prop_assert!((p.lambda * p.m * p.v.abs() - Constants::ATOMIC.h).abs() <= 4.0 * f64::EPSILON * Constants::ATOMIC.h);
    }

    #[test]
    fn charge_scaling_of_u_minus(z in 2u32..=3, n in 1u32..=3, x in 0.02f64..2.9) {
        let r_o1 = 2.0 * f64::from(n * n);
        let r = x * r_o1;
        let s1 = build_series(AtomSpec::new(1, n).unwrap(), Constants::ATOMIC);
        let sz = build_series(AtomSpec::new(z, n).unwrap(), Constants::ATOMIC);
        let zeros = s1.all_zeros();
        prop_assume!(zeros.iter().all(|c| (r - c).abs() > 1e-3 * r_o1));
        let a = u_minus(r, &s1).unwrap();
        let b = u_minus(r / f64::from(z), &sz).unwrap();
        prop_assert!(((a - b) / a).abs() < 1e-8, "{} vs {}", a, b);
    }
}

#[test]
fn stationary_nodes_do_not_move() {
    for n in 1..=3 {
        let s = build_series(AtomSpec::new(1, n).unwrap(), Constants::ATOMIC);
        let omega = s.state.omega;
        let grid = superposition_grid(std::slice::from_ref(&s), 3.0, 600, 1e-3).unwrap();
        let quarter = 0.5 * std::f64::consts::PI / omega;
        let times = [0.0, 0.3 / omega, quarter, 2.0 / omega];
        let res =
            track_superposition_nodes(std::slice::from_ref(&s), &[1.0], &times, &grid, DEFAULT_TOLERANCE).unwrap();
        assert!(res.slices[2].degenerate && res.slices[2].report.nodes.is_empty());
        let first = res.slices[0].report.radii();
        assert_eq!(first.len(), n as usize);
        for i in [1, 3] {
            let radii = res.slices[i].report.radii();
            assert_eq!(radii.len(), first.len());
            for (a, b) in radii.iter().zip(&first) {
                assert!((a - b).abs() <= 1e-6 * s.r_o());
            }
        }
    }
}
