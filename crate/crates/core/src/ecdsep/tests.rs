use super::*;
use crate::driver::RunOptions;
use crate::objective::FnObjective;

fn pv(v: &[f64]) -> ParamVector {
    ParamVector::new(v.to_vec()).unwrap()
}

/// F = sum(theta^2) + offset
fn quadratic(n: usize, offset: f64) -> FnObjective<impl Fn(&[f64]) -> (f64, Vec<f64>) + Sync> {
    FnObjective::new(n, move |x: &[f64]| {
        (
            x.iter().map(|v| v * v).sum::<f64>() + offset,
            x.iter().map(|v| 2.0 * v).collect(),
        )
    })
}

fn quiet(eta: f64) -> EcdHyperParams {
    EcdHyperParams {
        nu: 0.0,
        ..EcdHyperParams::new(eta)
    }
}

#[test]
fn effective_potential_examples() {
    let hp = EcdHyperParams::new(1.0);
    assert_eq!(
        effective_potential(&pv(&[3.0, -7.0]), 1.0, &hp, 0.0).unwrap(),
        1.0
    );

    let hp = EcdHyperParams {
        wd: 0.5,
        ..EcdHyperParams::new(3.0)
    };
    // |theta|^2 = 4 -> (2 + 0.25 * 4)^3
    let v = effective_potential(&pv(&[2.0, 0.0]), 2.0, &hp, 0.0).unwrap();
    assert_eq!(v, 27.0);

    let hp = EcdHyperParams {
        f0: 1.0,
        ..EcdHyperParams::new(3.0)
    };
    assert_eq!(
        effective_potential(&pv(&[0.0]), 0.5, &hp, 0.0).unwrap(),
        -0.125
    );

    let hp = EcdHyperParams {
        f0: 1.0,
        ..EcdHyperParams::new(1.5)
    };
    assert!(matches!(
        effective_potential(&pv(&[0.0]), 0.5, &hp, 0.0),
        Err(Error::Domain(_))
    ));

    // the self-tuning shift lowers the offset
    let hp = EcdHyperParams::new(1.0);
    assert_eq!(
        effective_potential(&pv(&[0.0]), 1.0, &hp, -0.5).unwrap(),
        1.5
    );
}

#[test]
fn init_regularized_zero_kinetic() {
    let obj = quadratic(2, 0.0);
    let theta0 = pv(&[1.0, 1.0]); // F = 2
    let state = init(&obj, theta0, &EcdHyperParams::new(2.0)).unwrap();
    assert_eq!(state.energy(), 4.0);
    assert_eq!(state.pi().norm(), 0.0);
    assert_eq!(state.step(), 0);
    assert_eq!(state.delta_f0(), 0.0);
}

#[test]
fn init_unregularized_unit_momentum() {
    let e = std::f64::consts::E;
    let obj = FnObjective::new(2, move |x: &[f64]| (e, vec![x[0] + 1.0, 2.0]));
    let state = init(&obj, pv(&[0.3, 0.4]), &EcdHyperParams::unregularized(1.0)).unwrap();
    assert_eq!(state.energy(), e);
    assert!((state.pi().norm() - 1.0).abs() < 1e-15);
}

#[test]
fn init_momentum_points_against_gradient() {
    let obj = FnObjective::new(2, |_: &[f64]| (1.0, vec![0.0, -3.0]));
    let hp = EcdHyperParams {
        delta_e: 1.0,
        ..EcdHyperParams::new(1.0)
    };
    let state = init(&obj, pv(&[0.0, 0.0]), &hp).unwrap();
    assert_eq!(state.pi().as_slice(), &[0.0, 1.0]);
    assert_eq!(state.energy(), 2.0);
}

#[test]
fn init_zero_gradient_falls_back_to_uniform_direction() {
    let obj = quadratic(4, 1.0);
    let hp = EcdHyperParams {
        delta_e: 2.0,
        ..EcdHyperParams::new(1.0)
    };
    let state = init(&obj, ParamVector::zeros(4).unwrap(), &hp).unwrap();
    let expected = (2.0f64 / 4.0).sqrt();
    assert!(state.pi().iter().all(|&p| p == expected));
    assert!((state.pi().norm_sq() - 2.0).abs() < 1e-14);
}

#[test]
fn init_rejects_degenerate_energy() {
    let obj = quadratic(1, 0.0);
    // F(theta0) = F0 gives a zero energy surface
    assert!(matches!(
        init(&obj, pv(&[0.0]), &EcdHyperParams::new(1.0)),
        Err(Error::Init(_))
    ));
    // below the offset with even eta would be positive; odd eta is negative
    let hp = EcdHyperParams {
        f0: 2.0,
        ..EcdHyperParams::new(3.0)
    };
    assert!(matches!(init(&obj, pv(&[1.0]), &hp), Err(Error::Init(_))));
    assert!(matches!(
        init(&obj, pv(&[1.0, 2.0]), &EcdHyperParams::new(1.0)),
        Err(Error::Dimension { .. })
    ));
}

fn state_with(pi: &[f64], energy: f64) -> EcdState {
    EcdState {
        theta: ParamVector::zeros(pi.len()).unwrap(),
        pi: pv(pi),
        energy,
        delta_f0: 0.0,
        step: 0,
        termination: None,
    }
}

#[test]
fn projection_rescales_onto_surface() {
    let hp = EcdHyperParams::new(1.0);
    let pi0 = 0.5f64.sqrt();
    let mut state = state_with(&[pi0], 2.0);
    assert_eq!(
        project_energy(&mut state, 1.0, &hp),
        ProjectionOutcome::Rescaled
    );
    assert!((state.pi().norm_sq() - 1.0).abs() < 1e-15);
    assert!((state.pi()[0] / pi0 - 2f64.sqrt()).abs() < 1e-15);
}

#[test]
fn projection_guards() {
    let hp = EcdHyperParams::new(1.0);
    let mut state = state_with(&[0.3], 0.5);
    assert_eq!(
        project_energy(&mut state, 1.0, &hp),
        ProjectionOutcome::NegativeTarget
    );
    assert_eq!(state.pi()[0], 0.3);

    let mut state = state_with(&[1.0], 2.0);
    assert_eq!(
        project_energy(&mut state, 1.0, &hp),
        ProjectionOutcome::WithinTolerance
    );

    let mut state = state_with(&[0.0, 0.0], 5.0);
    assert_eq!(
        project_energy(&mut state, 1.0, &hp),
        ProjectionOutcome::ZeroMomentum
    );
    assert_eq!(state.pi().norm(), 0.0);

    let mut state = state_with(&[0.2], 5.0);
    assert_eq!(
        project_energy(&mut state, -1.0, &hp),
        ProjectionOutcome::NonPositivePotential
    );
    let off = EcdHyperParams {
        conserve_energy: false,
        ..hp
    };
    assert_eq!(
        project_energy(&mut state, 1.0, &off),
        ProjectionOutcome::Disabled
    );
    assert_eq!(state.pi()[0], 0.2);
}

#[test]
fn one_step_hand_trace() {
    let obj = quadratic(1, 0.0);
    let hp = quiet(1.0);
    let mut state = init(&obj, pv(&[1.0]), &hp).unwrap();
    assert_eq!(state.energy(), 1.0);
    let mut rng = RngStream::new(0);
    let report = step(&mut state, &obj, &hp, &mut rng, None).unwrap();
    assert_eq!(report.projection, ProjectionOutcome::NegativeTarget);
    assert_eq!(report.potential, 1.0);
    assert!((state.pi()[0] + 0.8).abs() < 1e-15);
    // frozen from an independent scripted trace
    assert!((state.theta()[0] - 0.609_756_097_560_975_5).abs() < 1e-12);
    assert_eq!(state.step(), 1);
}

fn max_relative_drift(theta0: f64, dt: f64, steps: u64) -> f64 {
    let obj = quadratic(1, 0.0);
    let hp = EcdHyperParams {
        dt,
        conserve_energy: false,
        ..quiet(1.0)
    };
    let mut state = init(&obj, pv(&[theta0]), &hp).unwrap();
    let mut rng = RngStream::new(0);
    let mut worst: f64 = 0.0;
    for _ in 0..steps {
        step(&mut state, &obj, &hp, &mut rng, None).unwrap();
        let f = obj.value(state.theta(), None).unwrap();
        let e = measured_energy(&state, f, &hp);
        worst = worst.max((e - state.energy()).abs() / state.energy());
    }
    worst
}

#[test]
fn energy_error_scaling_of_first_order_scheme() {
    // Over a fixed number of steps on a short horizon the error is ~dt^2.
    let ratio = max_relative_drift(1.0, 0.1, 2) / max_relative_drift(1.0, 0.05, 2);
    assert!(
        (3.0..5.0).contains(&ratio),
        "fixed step count ratio {ratio}"
    );
    // Over a fixed physical horizon the first-order scheme gives ~dt.
    let ratio = max_relative_drift(1.0, 0.1, 2) / max_relative_drift(1.0, 0.05, 4);
    assert!((1.5..2.5).contains(&ratio), "fixed horizon ratio {ratio}");
}

#[test]
fn tiny_potential_terminates_and_freezes() {
    let obj = quadratic(1, 0.0);
    let hp = quiet(1.0);
    let theta0 = pv(&[1e-21]); // V = 1e-42 < eps2
    let mut opt = Ecdsep::new(&obj, theta0, hp, RngStream::new(0)).unwrap();
    let outcome = drive(&mut opt, &obj, &RunOptions::new(10), |_, _| {}).unwrap();
    assert_eq!(outcome.steps, 1);
    assert!(outcome.terminated);
    assert_eq!(
        opt.state().termination(),
        Some(Termination::PotentialBelowThreshold)
    );
    let frozen = opt.state().theta().clone();
    drive(&mut opt, &obj, &RunOptions::new(10), |_, _| {}).unwrap();
    assert_eq!(opt.state().theta(), &frozen);
    let mut state = opt.into_state();
    assert!(step(&mut state, &obj, &quiet(1.0), &mut RngStream::new(0), None).is_err());
}

#[test]
fn crossing_the_offset_terminates_without_moving() {
    let obj = quadratic(1, -1.0);
    let hp = quiet(3.0);
    let mut state = init(&obj, pv(&[2.0]), &hp).unwrap();
    state.theta = pv(&[0.5]); // F = -0.75 < F0
    let report = step(&mut state, &obj, &hp, &mut RngStream::new(0), None).unwrap();
    assert_eq!(state.termination(), Some(Termination::CrossedF0));
    assert_eq!(state.theta()[0], 0.5);
    assert_eq!(report.potential, -0.421875);
    assert_eq!(state.step(), 0);

    let mut state = init(&obj, pv(&[2.0]), &hp).unwrap();
    state.theta = pv(&[1.0]);
    step(&mut state, &obj, &hp, &mut RngStream::new(0), None).unwrap();
    assert_eq!(state.termination(), Some(Termination::ReachedF0));
}

#[test]
fn non_finite_objective_is_a_hard_error() {
    let obj = FnObjective::new(1, |x: &[f64]| {
        if x[0] < 0.9 {
            (f64::NAN, vec![0.0])
        } else {
            (x[0] * x[0], vec![2.0 * x[0]])
        }
    });
    let hp = quiet(1.0);
    let mut state = init(&obj, pv(&[1.0]), &hp).unwrap();
    let mut rng = RngStream::new(0);
    step(&mut state, &obj, &hp, &mut rng, None).unwrap();
    assert!(matches!(
        step(&mut state, &obj, &hp, &mut rng, None),
        Err(Error::NonFinite { step: 2 })
    ));
    let err = run(
        &obj,
        pv(&[1.0]),
        &hp,
        &RunOptions::new(5),
        RngStream::new(0),
    )
    .unwrap_err();
    assert!(matches!(err, Error::NonFinite { step: 2 }));
}

#[test]
fn rotation_identity_and_norm() {
    let pi = pv(&[0.3, -1.2, 4.0]);
    let mut rng = RngStream::new(9);
    assert_eq!(rotate_momentum(&pi, 0.0, &mut rng), pi);
    for nu in [1e-3, 0.1, 1.0, 10.0] {
        let rotated = rotate_momentum(&pi, nu, &mut rng);
        assert!((rotated.norm() / pi.norm() - 1.0).abs() < 1e-12);
        assert_ne!(rotated, pi);
    }
    let zero = ParamVector::zeros(3).unwrap();
    assert_eq!(rotate_momentum(&zero, 1.0, &mut rng), zero);
}

#[test]
fn rotation_small_angle_law() {
    // nu * sqrt(n) = 0.01 -> mean angle close to 0.01 rad
    let n = 10_000;
    let nu = 1e-4;
    let mut rng = RngStream::new(11);
    let mut pi = vec![0.0; n];
    pi[0] = 2.0;
    let pi = pv(&pi);
    let trials = 2_000;
    let mut total = 0.0;
    for _ in 0..trials {
        let r = rotate_momentum(&pi, nu, &mut rng);
        let cos = (pi.dot(&r).unwrap() / (pi.norm() * r.norm())).clamp(-1.0, 1.0);
        total += cos.acos();
    }
    let mean = total / trials as f64;
    assert!((mean / 0.01 - 1.0).abs() < 0.2, "mean angle {mean}");
}

#[test]
fn self_tuning_shift_branch() {
    let obj = quadratic(1, -1.0);
    let hp = EcdHyperParams {
        self_tune_f0: true,
        ..quiet(3.0)
    };
    let mut state = init(&obj, pv(&[2.0]), &hp).unwrap();
    state.theta = pv(&[0.5]); // F - F0 = -0.75
    let report = step(&mut state, &obj, &hp, &mut RngStream::new(0), None).unwrap();
    assert!(report.shifted_f0);
    assert_eq!(state.delta_f0(), 5.0 * -0.421875);
    assert_eq!(state.theta()[0], 0.5);
    assert_eq!(state.step(), 1);
    assert!(!state.is_terminated());
    // the offset now sits below F, so the next step moves
    let report = step(&mut state, &obj, &hp, &mut RngStream::new(0), None).unwrap();
    assert!(!report.shifted_f0);
    assert_ne!(state.theta()[0], 0.5);
}

#[test]
fn self_tuning_small_overshoot_contracts_towards_zero() {
    // With d = F - F0_eff < 0 the shift maps d -> d (1 - 5 d^2). Small
    // overshoots stay negative, so the loop keeps shifting in place.
    let obj = quadratic(1, -1.0);
    let hp = EcdHyperParams {
        self_tune_f0: true,
        ..quiet(3.0)
    };
    let mut state = init(&obj, pv(&[2.0]), &hp).unwrap();
    state.theta = pv(&[0.9f64.sqrt()]); // F = -0.1
    let mut rng = RngStream::new(0);
    let mut d = -0.1f64;
    for _ in 0..50 {
        let report = step(&mut state, &obj, &hp, &mut rng, None).unwrap();
        assert!(report.shifted_f0);
        d *= 1.0 - 5.0 * d * d;
    }
    let f = obj.value(state.theta(), None).unwrap();
    let d_impl = f - state.delta_f0();
    assert!((d_impl - d).abs() < 1e-12, "{d_impl} vs {d}");
    assert!(d_impl < 0.0);
}

#[test]
fn regularized_reach_bound() {
    let obj = quadratic(3, 0.5);
    let theta0 = pv(&[1.0, -2.0, 0.5]);
    let f_init = obj.value(&theta0, None).unwrap();
    let hp = quiet(2.0);
    let (_, log) = run(&obj, theta0, &hp, &RunOptions::new(2000), RngStream::new(1)).unwrap();
    let bound = f_init * (1.0 + 10.0 * hp.dt * hp.dt);
    assert!(log.records().iter().all(|r| r.f <= bound));
}

#[test]
fn run_rejects_zero_steps_and_matches_trace() {
    let obj = quadratic(1, 0.0);
    let hp = quiet(1.0);
    assert!(matches!(
        run(
            &obj,
            pv(&[1.0]),
            &hp,
            &RunOptions::new(0),
            RngStream::new(0)
        ),
        Err(Error::Parameter(_))
    ));
    let (_, log) = run(
        &obj,
        pv(&[1.0]),
        &hp,
        &RunOptions::new(3),
        RngStream::new(0),
    )
    .unwrap();
    let first = log.records()[0];
    assert_eq!(first.step, 1);
    assert!((first.theta_norm - 0.609_756_097_560_975_5).abs() < 1e-12);
    assert!((first.pi_norm - 0.8).abs() < 1e-15);
}

#[test]
fn identical_seeds_give_identical_logs() {
    let obj = quadratic(5, 1.0);
    let hp = EcdHyperParams {
        nu: 0.3,
        ..EcdHyperParams::new(2.0)
    };
    let theta0 = pv(&[1.0, 2.0, 3.0, 4.0, 5.0]);
    let a = run(
        &obj,
        theta0.clone(),
        &hp,
        &RunOptions::new(500),
        RngStream::new(3),
    )
    .unwrap();
    let b = run(
        &obj,
        theta0.clone(),
        &hp,
        &RunOptions::new(500),
        RngStream::new(3),
    )
    .unwrap();
    assert_eq!(a.1.to_csv_string(), b.1.to_csv_string());
    assert_eq!(a.0, b.0);
    let c = run(&obj, theta0, &hp, &RunOptions::new(500), RngStream::new(4)).unwrap();
    assert_ne!(a.1.to_csv_string(), c.1.to_csv_string());
}

#[test]
fn checkpoint_resume_matches_uninterrupted_run() {
    let obj = quadratic(2, 0.2);
    let hp = EcdHyperParams {
        wd: 0.01,
        ..quiet(2.0)
    };
    let theta0 = pv(&[1.5, -0.5]);
    let (full, _) = run(
        &obj,
        theta0.clone(),
        &hp,
        &RunOptions::new(40),
        RngStream::new(0),
    )
    .unwrap();

    let (half, _) = run(&obj, theta0, &hp, &RunOptions::new(20), RngStream::new(0)).unwrap();
    let json = serde_json::to_string(&half).unwrap();
    let restored: EcdState = serde_json::from_str(&json).unwrap();
    let mut opt = Ecdsep::from_state(hp, restored, RngStream::new(0)).unwrap();
    drive(&mut opt, &obj, &RunOptions::new(20), |_, _| {}).unwrap();
    assert_eq!(opt.state(), &full);
}

#[test]
fn weight_decay_enters_potential_and_force() {
    // F = 0 everywhere: only the decay term drives the motion.
    let obj = FnObjective::new(1, |_: &[f64]| (1.0, vec![0.0]));
    let hp = EcdHyperParams {
        wd: 2.0,
        ..quiet(1.0)
    };
    let mut state = init(&obj, pv(&[1.0]), &hp).unwrap();
    assert_eq!(state.energy(), 2.0); // (1 + 0.5 * 2 * 1)
    step(&mut state, &obj, &hp, &mut RngStream::new(0), None).unwrap();
    // kick = -0.4 / 2 * (0 + 2 * 1) = -0.4
    assert!((state.pi()[0] + 0.4).abs() < 1e-15);
}
