use proptest::prelude::*;

use ecdsep::benchmarks::QuadraticBasin;
use ecdsep::ecdsep::rotate_momentum;
use ecdsep::theory::{concentration_radius_sq, BasinSpec};
use ecdsep::{
    dot, EcdHyperParams, Ecdsep, ParamVector, RngStream, TrajectoryLog, TrajectoryRecord,
};

fn vector(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1e3..1e3f64, 1..max_len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn norm_squared_is_self_dot(v in vector(64)) {
        let p = ParamVector::new(v).unwrap();
        let d = dot(&p, &p).unwrap();
        prop_assert!((p.norm_sq() - d).abs() <= 1e-12 * d.max(1.0));
        prop_assert!((p.norm() * p.norm() - d).abs() <= 1e-12 * d.max(1.0));
    }

    #[test]
    fn rotation_preserves_norm(
        v in vector(32),
        nu in 0.0..10.0f64,
        seed in any::<u64>(),
    ) {
        let pi = ParamVector::new(v).unwrap();
        prop_assume!(pi.norm() > 0.0);
        let rotated = rotate_momentum(&pi, nu, &mut RngStream::new(seed));
        prop_assert!((rotated.norm() / pi.norm() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn rotation_preserves_norm_in_high_dimension(nu in 0.0..10.0f64, seed in any::<u64>()) {
        let mut rng = RngStream::new(seed);
        let pi = rng.draw_standard_normal(10_000).unwrap();
        let rotated = rotate_momentum(&pi, nu, &mut rng);
        prop_assert!((rotated.norm() / pi.norm() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn positive_potential_and_momentum_always_move(
        n in 1usize..8,
        f_min in -1.0..2.0f64,
        gap in 0.01..2.0f64,
        eta in 1.0..5.0f64,
        dt in 1e-3..1.0f64,
        delta_e in 0.01..3.0f64,
        scale in 0.1..10.0f64,
        seed in any::<u64>(),
    ) {
        let basin = QuadraticBasin::new(n, 1.0, f_min).unwrap();
        let mut rng = RngStream::new(seed);
        let theta0: Vec<f64> = (0..n).map(|_| scale * rng.standard_normal()).collect();
        let hp = EcdHyperParams { dt, delta_e, f0: f_min - gap, nu: 1e-3, ..EcdHyperParams::new(eta) };
        let mut opt = Ecdsep::new(&basin, ParamVector::new(theta0).unwrap(), hp, rng).unwrap();
        for _ in 0..5 {
            let before = opt.state().theta().clone();
            let report = opt.step_report(&basin, None).unwrap();
            if report.potential > 0.0 && report.pi_sq_after_projection > 0.0 {
                prop_assert_ne!(opt.state().theta(), &before);
            }
        }
    }

    #[test]
    fn concentration_radius_shrinks_with_eta(
        n in 2usize..1000,
        f2 in 0.1..10.0f64,
        gap in 0.01..10.0f64,
        eta in 1.0..20.0f64,
        step in 0.01..5.0f64,
    ) {
        let b = BasinSpec { n, f2, f_min: gap, f0: 0.0, eta, energy: 1.0, f_init: 1.0 };
        let wider = concentration_radius_sq(&b).unwrap();
        let narrower = concentration_radius_sq(&BasinSpec { eta: eta + step, ..b }).unwrap();
        prop_assert!(narrower < wider);
    }

    #[test]
    fn trajectory_csv_round_trips(
        rows in prop::collection::vec((any::<f64>(), -1e6..1e6f64, 0.0..1e6f64, 0.0..1e6f64), 0..40),
        start in 0u64..1000,
    ) {
        let mut log = TrajectoryLog::new();
        for (k, (f, e, p, t)) in rows.into_iter().enumerate() {
            log.push(TrajectoryRecord {
                step: start + 3 * k as u64 + 1,
                f,
                energy_measured: e,
                pi_norm: p,
                theta_norm: t,
            }).unwrap();
        }
        let csv = log.to_csv_string();
        let back = TrajectoryLog::read_csv(csv.as_bytes()).unwrap();
        prop_assert_eq!(back.len(), log.len());
        for (a, b) in log.records().iter().zip(back.records()) {
            prop_assert_eq!(a.step, b.step);
            prop_assert!(a.f.to_bits() == b.f.to_bits() || (a.f.is_nan() && b.f.is_nan()));
            prop_assert_eq!(a.energy_measured.to_bits(), b.energy_measured.to_bits());
            prop_assert_eq!(a.pi_norm.to_bits(), b.pi_norm.to_bits());
            prop_assert_eq!(a.theta_norm.to_bits(), b.theta_norm.to_bits());
        }
        prop_assert_eq!(back.to_csv_string(), csv);
    }
}
