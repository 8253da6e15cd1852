use super::*;
use crate::recipes::{band_vorticity, random_smooth_vorticity};
use approx::assert_relative_eq;
use std::f64::consts::PI;

fn sin_x2_shifted(k_max: usize, shift: f64, amp: f64) -> SpectralField {
    // amp * sin(x2 - shift)
    let mut w = SpectralField::zeros_scalar(k_max);
    let c = Complex64::new(0.0, -0.5) * Complex64::from_polar(amp, -shift);
    w.set_pair(0, WaveVector::new(0, 1), c);
    w
}

#[test]
fn heat_decay_of_parallel_shear() {
    let cfg = SolverConfig::new(8, Reynolds::Finite(100.0), 1e-2, 1.0);
    let traj = run(&cfg, &sin_x2_vorticity(8)).unwrap();
    let exact = sin_x2_shifted(8, 0.0, (-1.0f64 / 100.0).exp());
    let err = traj.final_state().omega.max_abs_diff(&exact).unwrap();
    assert!(err < 1e-10, "error {err}");
    assert_eq!(traj.final_state().t, 1.0);
}

#[test]
fn zero_duration_gives_single_checkpoint() {
    let w = random_smooth_vorticity(8, 1, 3.0, 1.0);
    let cfg = SolverConfig::new(8, Reynolds::Finite(50.0), 1e-2, 0.0);
    let traj = run(&cfg, &w).unwrap();
    assert_eq!(traj.checkpoints.len(), 1);
    assert_eq!(traj.checkpoints[0].omega, w);
}

#[test]
fn checkpoint_interval_and_partial_last_step() {
    let w = random_smooth_vorticity(8, 1, 3.0, 1.0);
    let mut cfg = SolverConfig::new(8, Reynolds::Finite(50.0), 0.1, 0.55);
    cfg.checkpoint_interval = 2;
    let traj = run(&cfg, &w).unwrap();
    let times: Vec<f64> = traj.checkpoints.iter().map(|s| s.t).collect();
    assert_eq!(times.len(), 4);
    assert_relative_eq!(times[1], 0.2, max_relative = 1e-14);
    assert_eq!(*times.last().unwrap(), 0.55);
    assert_eq!(step_plan(1.0, 1e-3), (1000, 1e-3));
}

#[test]
fn translated_decay_converges_fourth_order() {
    // a uniform mean flow advects sin x2; exact: e^{-t/Re} sin(x2 - c t)
    let c = 2.0;
    let re = 100.0;
    let t_end = 1.0;
    let exact = sin_x2_shifted(4, c * t_end, (-t_end / re).exp());
    let mut errs = vec![];
    for dt in [0.1, 0.05, 0.025] {
        let cfg = SolverConfig::new(4, Reynolds::Finite(re), dt, t_end).with_mean_flow([0.0, c]);
        let traj = run(&cfg, &sin_x2_vorticity(4)).unwrap();
        errs.push(traj.final_state().omega.max_abs_diff(&exact).unwrap());
    }
    for w in errs.windows(2) {
        let order = (w[0] / w[1]).log2();
        assert!(order > 3.8, "observed order {order} from {errs:?}");
    }
}

#[test]
fn inviscid_invariants_conserved() {
    let w = random_smooth_vorticity(16, 5, 3.0, 1.0);
    let cfg = SolverConfig::new(16, Reynolds::Infinite, 2e-3, 0.5);
    let traj = run(&cfg, &w).unwrap();
    let d0 = diagnostics(&traj.checkpoints[0], [0.0; 2]).unwrap();
    let d1 = diagnostics(traj.final_state(), [0.0; 2]).unwrap();
    assert!(((d1.energy - d0.energy) / d0.energy).abs() < 1e-9);
    assert!(((d1.enstrophy - d0.enstrophy) / d0.enstrophy).abs() < 1e-9);
    assert_eq!(traj.final_state().omega.mean()[0], 0.0);
}

#[test]
fn viscous_energy_decreases_every_step() {
    let w = random_smooth_vorticity(16, 8, 4.0, 1.0);
    let cfg = SolverConfig::new(16, Reynolds::Finite(200.0), 5e-3, 0.3);
    let traj = run(&cfg, &w).unwrap();
    let energies: Vec<f64> = traj
        .checkpoints
        .iter()
        .map(|s| diagnostics(s, [0.0; 2]).unwrap().energy)
        .collect();
    for e in energies.windows(2) {
        assert!(e[1] < e[0]);
    }
}

#[test]
fn reruns_are_bit_identical() {
    let w = random_smooth_vorticity(12, 2, 3.0, 1.0);
    let cfg = SolverConfig::new(12, Reynolds::Finite(1000.0), 1e-2, 0.2);
    assert_eq!(run(&cfg, &w).unwrap(), run(&cfg, &w).unwrap());
}

#[test]
fn pure_step_matches_solver() {
    let w = random_smooth_vorticity(8, 2, 3.0, 1.0);
    let cfg = SolverConfig::new(8, Reynolds::Finite(100.0), 1e-2, 1.0);
    let s0 = SimulationState::new(w);
    let s1 = step(&s0, &cfg).unwrap();
    let mut solver = Solver::new(cfg).unwrap();
    let mut s = s0;
    solver.step(&mut s).unwrap();
    assert_eq!(s, s1);
    assert_eq!(s.step_count, 1);
}

#[test]
fn vorticity_and_velocity_forms_agree() {
    let w = random_smooth_vorticity(10, 4, 3.0, 1.0);
    let mean = [0.3, -0.2];
    let re = Reynolds::Finite(300.0);
    let mut cfg = SolverConfig::new(10, re, 1e-2, 1.0);
    cfg.mean_flow = mean;
    let mut solver = Solver::new(cfg).unwrap();
    let a = solver.vorticity_rate(&w).unwrap();
    let b = vorticity_rate_via_velocity(&w, mean, re).unwrap();
    assert!(a.max_abs_diff(&b).unwrap() < 1e-12 * a.max_abs());
}

#[test]
fn coupled_step_is_derivative_of_step() {
    let k = 10;
    let w = random_smooth_vorticity(k, 4, 3.0, 1.0);
    let mut dw = band_vorticity(k, 9, 5.0);
    dw.scale(0.1);
    let cfg = SolverConfig::new(k, Reynolds::Finite(500.0), 1e-2, 1.0);
    let mut solver = Solver::new(cfg).unwrap();
    let mut base = SimulationState::new(w.clone());
    let mut tan = dw.clone();
    solver.step_coupled(&mut base, &mut tan, 1e-2).unwrap();

    let mut plain = SimulationState::new(w.clone());
    solver.step(&mut plain).unwrap();
    assert!(plain.omega.max_abs_diff(&base.omega).unwrap() < 1e-15);

    let mut errs = vec![];
    for eps in [1e-3, 1e-4] {
        let mut pert = SimulationState::new(w.add(&dw.scaled(eps)).unwrap());
        solver.step(&mut pert).unwrap();
        let mut fd = pert.omega.sub(&plain.omega).unwrap();
        fd.scale(1.0 / eps);
        errs.push(fd.max_abs_diff(&tan).unwrap());
    }
    let order = (errs[0] / errs[1]).log10();
    assert!(order > 0.9, "order {order} from {errs:?}");
}

#[test]
fn prescribed_base_matches_coupled_on_steady_base() {
    // sin x2 at Re = inf is steady, so the prescribed and coupled runs coincide
    let k = 8;
    let base = sin_x2_vorticity(k);
    let cfg = SolverConfig::new(k, Reynolds::Infinite, 1e-2, 1.0);
    let mut solver = Solver::new(cfg).unwrap();
    let dw0 = band_vorticity(k, 1, 3.0);
    let mut a = dw0.clone();
    let mut b = dw0;
    let mut st = SimulationState::new(base.clone());
    for _ in 0..10 {
        solver.step_coupled(&mut st, &mut a, 1e-2).unwrap();
        solver
            .tangent_step_prescribed([&base, &base, &base], &mut b, 1e-2)
            .unwrap();
    }
    assert!(a.max_abs_diff(&b).unwrap() < 1e-13);
}

#[test]
fn blowup_is_reported() {
    let mut w = random_smooth_vorticity(8, 3, 4.0, 1.0);
    w.scale(1e4);
    let cfg = SolverConfig::new(8, Reynolds::Infinite, 1.0, 500.0);
    match run(&cfg, &w) {
        Err(Error::Numerical { t, .. }) => assert!(t > 0.0),
        other => panic!("expected numerical failure, got {other:?}"),
    }
}

#[test]
fn nonzero_mean_vorticity_rejected() {
    let mut w = sin_x2_vorticity(4);
    w.set_pair(0, WaveVector::new(0, 0), Complex64::new(1.0, 0.0));
    let cfg = SolverConfig::new(4, Reynolds::Finite(10.0), 0.1, 1.0);
    assert!(matches!(run(&cfg, &w), Err(Error::NonzeroMeanVorticity(_))));
}

#[test]
fn invalid_config_rejected() {
    let w = sin_x2_vorticity(4);
    for cfg in [
        SolverConfig::new(4, Reynolds::Finite(10.0), 0.0, 1.0),
        SolverConfig::new(4, Reynolds::Finite(10.0), 0.1, -1.0),
        SolverConfig::new(4, Reynolds::Finite(-3.0), 0.1, 1.0),
    ] {
        assert!(run(&cfg, &w).is_err());
    }
    let cfg = SolverConfig::new(5, Reynolds::Finite(10.0), 0.1, 1.0);
    assert!(matches!(run(&cfg, &w), Err(Error::TruncationMismatch { .. })));
}

#[test]
fn diagnostics_by_hand() {
    let zero = SimulationState::new(SpectralField::zeros_scalar(4));
    let d = diagnostics(&zero, [0.0; 2]).unwrap();
    assert_eq!(d.energy, 0.0);
    assert_eq!(d.enstrophy, 0.0);
    assert_eq!(d.palinstrophy, 0.0);
    assert_eq!(d.velocity_norms, [0.0; 5]);

    let s = SimulationState::new(sin_x2_vorticity(4));
    let d = diagnostics(&s, [0.0; 2]).unwrap();
    let pi2 = PI * PI;
    assert_relative_eq!(d.energy, pi2, max_relative = 1e-14);
    assert_relative_eq!(d.enstrophy, pi2, max_relative = 1e-14);
    assert_relative_eq!(d.palinstrophy, pi2, max_relative = 1e-14);
    for (n, v) in d.velocity_norms.iter().enumerate() {
        let expect = 2.0 * PI * ((n as f64 + 1.0) / 2.0).sqrt();
        assert_relative_eq!(*v, expect, max_relative = 1e-14);
    }
    for w in d.velocity_norms.windows(2) {
        assert!(w[1] >= w[0]);
    }
}

#[test]
fn reynolds_encoding() {
    assert_eq!(Reynolds::from_f64(0.0), Reynolds::Infinite);
    assert_eq!(Reynolds::from_f64(-1.0), Reynolds::Infinite);
    assert_eq!(Reynolds::from_f64(f64::INFINITY), Reynolds::Infinite);
    assert_eq!(Reynolds::from_f64(250.0), Reynolds::Finite(250.0));
    assert_eq!(Reynolds::Infinite.to_f64(), 0.0);
    assert_eq!(Reynolds::Infinite.viscosity(), 0.0);
}
