//! Linearized dynamics along a base flow, amplification curves and
//! finite-increment remainder experiments.
//!
//! The perturbation obeys `dω_t − (1/Re)Δdω = −u·∇dω − du·∇ω` with
//! `du` recovered from `dω` by Biot–Savart. Growth is reported on the
//! velocity, `Λₙ(t) = ‖du(t)‖ₙ / ‖du(0)‖ₙ`.

use std::io::Write;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::solver::{step_plan, SimulationState, Solver, SolverConfig, Trajectory};
use crate::spectral::{velocity_from_vorticity, SpectralField};

/// Stored base checkpoints, immutable once built, with exact lookup at
/// checkpoint times and cubic interpolation in between.
#[derive(Clone, Debug, PartialEq)]
pub struct BaseTrajectory {
    id: String,
    states: Vec<SimulationState>,
}

impl BaseTrajectory {
    pub fn new(id: impl Into<String>, trajectory: Trajectory) -> Result<Self> {
        let states = trajectory.checkpoints;
        if states.is_empty() {
            return Err(Error::InvalidArgument("empty trajectory".into()));
        }
        if states.windows(2).any(|w| w[1].t <= w[0].t) {
            return Err(Error::InvalidArgument(
                "checkpoint times must increase".into(),
            ));
        }
        Ok(BaseTrajectory {
            id: id.into(),
            states,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn k_max(&self) -> usize {
        self.states[0].omega.k_max()
    }

    pub fn span(&self) -> (f64, f64) {
        (self.states[0].t, self.states.last().unwrap().t)
    }

    pub fn states(&self) -> &[SimulationState] {
        &self.states
    }

    /// Base vorticity at `t`.
    pub fn at(&self, t: f64) -> Result<SpectralField> {
        let (start, end) = self.span();
        let slack = 1e-12 * (end - start).abs().max(1.0);
        if !(t >= start - slack && t <= end + slack) {
            return Err(Error::OutsideTrajectory { t, start, end });
        }
        let pos = self.states.partition_point(|s| s.t < t);
        for p in [pos.saturating_sub(1), pos] {
            if let Some(s) = self.states.get(p) {
                if (s.t - t).abs() <= slack {
                    return Ok(s.omega.clone());
                }
            }
        }
        // four nearest nodes, two on each side where possible
        let n = self.states.len();
        let lo = pos.saturating_sub(2).min(n.saturating_sub(4));
        let hi = (lo + 4).min(n);
        let nodes = &self.states[lo..hi];
        let mut out = SpectralField::zeros_scalar(self.k_max());
        for (i, si) in nodes.iter().enumerate() {
            let mut w = 1.0;
            for (j, sj) in nodes.iter().enumerate() {
                if i != j {
                    w *= (t - sj.t) / (si.t - sj.t);
                }
            }
            out.axpy(w, &si.omega)?;
        }
        Ok(out)
    }
}

/// Where the base flow of a tangent run comes from.
#[derive(Clone, Debug)]
pub enum BaseFlow {
    /// The rest state `u = 0`.
    Trivial,
    /// Integrated together with the perturbation from this initial
    /// vorticity; the tangent is then the exact derivative of the
    /// discrete flow map.
    Coupled { id: String, omega0: SpectralField },
    /// Read from stored checkpoints.
    Stored(Arc<BaseTrajectory>),
}

impl BaseFlow {
    pub fn id(&self) -> String {
        match self {
            BaseFlow::Trivial => "trivial".into(),
            BaseFlow::Coupled { id, .. } => id.clone(),
            BaseFlow::Stored(b) => b.id().to_string(),
        }
    }

    /// Base vorticity at `t = 0` (or the first checkpoint).
    pub fn initial(&self, k_max: usize) -> SpectralField {
        match self {
            BaseFlow::Trivial => SpectralField::zeros_scalar(k_max),
            BaseFlow::Coupled { omega0, .. } => omega0.clone(),
            BaseFlow::Stored(b) => b.states[0].omega.clone(),
        }
    }

    fn start_time(&self) -> f64 {
        match self {
            BaseFlow::Stored(b) => b.span().0,
            _ => 0.0,
        }
    }
}

/// Advances perturbations along a trivial or stored base.
pub struct TangentStepper {
    solver: Solver,
    zero: SpectralField,
}

impl TangentStepper {
    pub fn new(config: SolverConfig) -> Result<Self> {
        let zero = SpectralField::zeros_scalar(config.k_max);
        Ok(TangentStepper {
            solver: Solver::new(config)?,
            zero,
        })
    }

    pub fn config(&self) -> &SolverConfig {
        self.solver.config()
    }

    /// One step of length `dt` from `t`. `base = None` is the rest state.
    pub fn step(
        &mut self,
        base: Option<&BaseTrajectory>,
        domega: &mut SpectralField,
        t: f64,
        dt: f64,
    ) -> Result<()> {
        match base {
            None => {
                let z = &self.zero;
                self.solver.tangent_step_prescribed([z, z, z], domega, dt)
            }
            Some(b) => {
                let (s0, s1, s2) = (b.at(t)?, b.at(t + dt / 2.0)?, b.at(t + dt)?);
                self.solver.tangent_step_prescribed([&s0, &s1, &s2], domega, dt)
            }
        }
        .map_err(|e| match e {
            Error::Numerical { reason, .. } => Error::Numerical { t: t + dt, reason },
            other => other,
        })
    }
}

/// Single tangent step as a free function; see [`TangentStepper`] for
/// repeated use.
pub fn tangent_step(
    base: Option<&BaseTrajectory>,
    domega: &SpectralField,
    t: f64,
    dt: f64,
    config: &SolverConfig,
) -> Result<SpectralField> {
    let mut stepper = TangentStepper::new(config.clone())?;
    let mut out = domega.clone();
    stepper.step(base, &mut out, t, dt)?;
    Ok(out)
}

/// Evolves a perturbation along `base`, calling `observe(t, base, dω)` at
/// each requested time. `times` must be nondecreasing and not before the
/// base start.
pub fn evolve_perturbation(
    base: &BaseFlow,
    config: &SolverConfig,
    domega0: &SpectralField,
    times: &[f64],
    mut observe: impl FnMut(f64, &SpectralField, &SpectralField) -> Result<()>,
) -> Result<()> {
    let t0 = base.start_time();
    if times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidArgument("sample times must be sorted".into()));
    }
    if let Some(&first) = times.first() {
        if !(first >= t0) {
            return Err(Error::InvalidArgument(format!(
                "sample time {first} precedes the base start {t0}"
            )));
        }
    }
    if let (BaseFlow::Stored(b), Some(&last)) = (base, times.last()) {
        let (start, end) = b.span();
        if last > end + 1e-12 * end.abs().max(1.0) {
            return Err(Error::OutsideTrajectory { t: last, start, end });
        }
    }
    let mut dw = domega0.clone();
    let mut t = t0;
    match base {
        BaseFlow::Coupled { omega0, .. } => {
            let mut solver = Solver::new(config.clone())?;
            let mut state = SimulationState::new(omega0.clone());
            for &target in times {
                let (n, last) = step_plan(target - t, config.dt);
                for s in 1..=n {
                    let h = if s == n { last } else { config.dt };
                    solver.step_coupled(&mut state, &mut dw, h)?;
                }
                t = target;
                state.t = t;
                observe(t, &state.omega, &dw)?;
            }
        }
        BaseFlow::Trivial | BaseFlow::Stored(_) => {
            let stored = match base {
                BaseFlow::Stored(b) => Some(b.as_ref()),
                _ => None,
            };
            let mut stepper = TangentStepper::new(config.clone())?;
            let zero = SpectralField::zeros_scalar(config.k_max);
            for &target in times {
                let (n, last) = step_plan(target - t, config.dt);
                let mut tau = t;
                for s in 1..=n {
                    let h = if s == n { last } else { config.dt };
                    stepper.step(stored, &mut dw, tau, h)?;
                    tau = t + s as f64 * config.dt;
                }
                t = target;
                let b = match stored {
                    Some(b) => b.at(t)?,
                    None => zero.clone(),
                };
                observe(t, &b, &dw)?;
            }
        }
    }
    Ok(())
}

/// `Λₙ(t)` samples for several norm indices.
#[derive(Clone, Debug, PartialEq)]
pub struct GrowthRecord {
    pub times: Vec<f64>,
    pub norm_indices: Vec<u32>,
    /// `lambdas[i][j]` is `Λ_{norm_indices[i]}(times[j])`.
    pub lambdas: Vec<Vec<f64>>,
    /// `base_norms[i][j]` is `‖u(times[j])‖` of the base velocity in the
    /// same norm; empty when not recorded.
    pub base_norms: Vec<Vec<f64>>,
    pub reynolds: f64,
    pub base_id: String,
}

impl GrowthRecord {
    pub fn series(&self, n: u32) -> Option<&[f64]> {
        let i = self.norm_indices.iter().position(|&m| m == n)?;
        Some(&self.lambdas[i])
    }

    /// Largest recorded base velocity norm of index `n`.
    pub fn max_base_norm(&self, n: u32) -> Option<f64> {
        let i = self.norm_indices.iter().position(|&m| m == n)?;
        self.base_norms.get(i)?.iter().copied().reduce(f64::max)
    }

    /// `(t, Λₙ(t))` pairs for one norm index.
    pub fn samples(&self, n: u32) -> Option<Vec<(f64, f64)>> {
        let s = self.series(n)?;
        Some(self.times.iter().copied().zip(s.iter().copied()).collect())
    }

    /// Columns `t, Lambda_<n>...`.
    pub fn write_csv(&self, mut w: impl Write) -> std::io::Result<()> {
        write!(w, "t")?;
        for n in &self.norm_indices {
            write!(w, ",Lambda_{n}")?;
        }
        writeln!(w)?;
        for (j, t) in self.times.iter().enumerate() {
            write!(w, "{t:?}")?;
            for s in &self.lambdas {
                write!(w, ",{:?}", s[j])?;
            }
            writeln!(w)?;
        }
        Ok(())
    }
}

fn perturbation_velocity(domega: &SpectralField) -> Result<SpectralField> {
    velocity_from_vorticity(domega, None)
}

/// Amplification of `domega0` along `base` at `sample_times`.
pub fn amplification_curve(
    base: &BaseFlow,
    config: &SolverConfig,
    domega0: &SpectralField,
    norm_indices: &[u32],
    sample_times: &[f64],
) -> Result<GrowthRecord> {
    if norm_indices.is_empty() {
        return Err(Error::InvalidArgument("no norm indices requested".into()));
    }
    let du0 = perturbation_velocity(domega0)?;
    let norms0: Vec<f64> = norm_indices.iter().map(|&n| du0.sobolev_norm(n)).collect();
    if norms0.iter().any(|&v| !(v > 0.0)) {
        return Err(Error::InvalidArgument("initial perturbation is zero".into()));
    }
    let mut lambdas = vec![Vec::with_capacity(sample_times.len()); norm_indices.len()];
    let mut base_norms = lambdas.clone();
    let mean = config.mean_flow;
    evolve_perturbation(base, config, domega0, sample_times, |_, b, dw| {
        let du = perturbation_velocity(dw)?;
        let u = velocity_from_vorticity(b, Some(mean))?;
        for (i, &n) in norm_indices.iter().enumerate() {
            lambdas[i].push(du.sobolev_norm(n) / norms0[i]);
            base_norms[i].push(u.sobolev_norm(n));
        }
        Ok(())
    })?;
    Ok(GrowthRecord {
        times: sample_times.to_vec(),
        norm_indices: norm_indices.to_vec(),
        lambdas,
        base_norms,
        reynolds: config.reynolds.to_f64(),
        base_id: base.id(),
    })
}

/// One row of a remainder experiment.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RemainderRow {
    pub eps: f64,
    pub remainder: f64,
    pub over_eps: f64,
    pub over_eps2: f64,
    /// The nonlinear run from `base + ε dv0` did not finish.
    pub failed: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RemainderTable {
    pub norm_index: u32,
    pub t: f64,
    pub rows: Vec<RemainderRow>,
}

impl RemainderTable {
    /// Columns `eps, remainder_norm, remainder_over_eps, remainder_over_eps2`;
    /// failed rows carry `NaN`.
    pub fn write_csv(&self, mut w: impl Write) -> std::io::Result<()> {
        writeln!(w, "eps,remainder_norm,remainder_over_eps,remainder_over_eps2")?;
        for r in &self.rows {
            writeln!(w, "{:?},{:?},{:?},{:?}", r.eps, r.remainder, r.over_eps, r.over_eps2)?;
        }
        Ok(())
    }
}

fn nonlinear_final(config: &SolverConfig, omega0: &SpectralField, t: f64) -> Result<SpectralField> {
    let mut solver = Solver::new(config.clone())?;
    let mut state = SimulationState::new(omega0.clone());
    let (n, last) = step_plan(t, config.dt);
    for s in 1..=n {
        let h = if s == n { last } else { config.dt };
        solver.step_by(&mut state, h)?;
    }
    Ok(state.omega)
}

/// Compares finite increments with the linearization:
/// `‖(S(b + ε v) − S(b)) − ε DS(b) v‖ₙ` at time `t`, measured on velocity.
///
/// Nonlinear and tangent runs share `config.dt`, and the tangent is the
/// exact derivative of the discrete step, so time-discretization bias
/// cancels in the difference.
pub fn remainder_experiment(
    base: &BaseFlow,
    config: &SolverConfig,
    dv0: &SpectralField,
    epsilons: &[f64],
    t: f64,
    n: u32,
) -> Result<RemainderTable> {
    if epsilons.is_empty() {
        return Err(Error::InvalidArgument("no increments given".into()));
    }
    if epsilons.iter().any(|&e| !(e > 0.0 && e.is_finite()))
        || epsilons.windows(2).any(|w| w[1] >= w[0])
    {
        return Err(Error::InvalidArgument(
            "increments must be positive and strictly decreasing".into(),
        ));
    }
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidArgument(format!("time {t}")));
    }
    let b0 = base.initial(config.k_max);
    let coupled = BaseFlow::Coupled {
        id: base.id(),
        omega0: b0.clone(),
    };
    let mut base_t = None;
    let mut tangent_t = None;
    evolve_perturbation(&coupled, config, dv0, &[t], |_, b, dw| {
        base_t = Some(b.clone());
        tangent_t = Some(dw.clone());
        Ok(())
    })?;
    let (base_t, tangent_t) = (base_t.unwrap(), tangent_t.unwrap());
    let mut rows = Vec::with_capacity(epsilons.len());
    for &eps in epsilons {
        let mut start = b0.clone();
        start.axpy(eps, dv0)?;
        let row = match nonlinear_final(config, &start, t) {
            Ok(end) => {
                let mut diff = end.sub(&base_t)?;
                diff.axpy(-eps, &tangent_t)?;
                let r = perturbation_velocity(&diff)?.sobolev_norm(n);
                RemainderRow {
                    eps,
                    remainder: r,
                    over_eps: r / eps,
                    over_eps2: r / (eps * eps),
                    failed: false,
                }
            }
            Err(Error::Numerical { t: tf, reason }) => {
                log::warn!("run with eps = {eps} failed at t = {tf}: {reason}");
                RemainderRow {
                    eps,
                    remainder: f64::NAN,
                    over_eps: f64::NAN,
                    over_eps2: f64::NAN,
                    failed: true,
                }
            }
            Err(e) => return Err(e),
        };
        rows.push(row);
    }
    Ok(RemainderTable {
        norm_index: n,
        t,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::heat_semigroup;
    use crate::recipes::{band_vorticity, normalize_velocity_norm, random_smooth_vorticity};
    use crate::solver::{run, Reynolds};
    use crate::spectral::WaveVector;
    use approx::assert_relative_eq;
    use num_complex::Complex64;

    fn b0_of(base: &BaseFlow) -> SpectralField {
        base.initial(12)
    }

    fn single_mode(k: usize) -> SpectralField {
        let mut w = SpectralField::zeros_scalar(k);
        w.set_pair(0, WaveVector::new(1, 0), Complex64::new(0.3, 0.1));
        w
    }

    #[test]
    fn trivial_base_is_heat_flow() {
        let cfg = SolverConfig::new(12, Reynolds::Finite(100.0), 1e-2, 1.0);
        let dw0 = band_vorticity(12, 3, 8.0);
        let mut got = None;
        evolve_perturbation(&BaseFlow::Trivial, &cfg, &dw0, &[0.37, 1.0], |t, _, dw| {
            let exact = heat_semigroup(&dw0, t, cfg.reynolds);
            assert!(dw.max_abs_diff(&exact).unwrap() < 1e-12 * dw0.max_abs());
            got = Some(t);
            Ok(())
        })
        .unwrap();
        assert_eq!(got, Some(1.0));
    }

    #[test]
    fn trivial_inviscid_is_identity() {
        let cfg = SolverConfig::new(8, Reynolds::Infinite, 0.1, 1.0);
        let dw0 = band_vorticity(8, 4, 6.0);
        let out = tangent_step(None, &dw0, 0.0, 0.1, &cfg).unwrap();
        assert_eq!(out, dw0);
        let rec =
            amplification_curve(&BaseFlow::Trivial, &cfg, &dw0, &[0, 3], &[0.0, 0.5, 2.0]).unwrap();
        for s in &rec.lambdas {
            for &l in s {
                assert_relative_eq!(l, 1.0, max_relative = 1e-15);
            }
        }
    }

    #[test]
    fn single_mode_heat_factor() {
        let cfg = SolverConfig::new(6, Reynolds::Finite(100.0), 0.05, 1.0);
        let times = [0.0, 0.5, 1.0, 3.0];
        let rec =
            amplification_curve(&BaseFlow::Trivial, &cfg, &single_mode(6), &[0, 2], &times).unwrap();
        for (j, &t) in times.iter().enumerate() {
            assert_relative_eq!(rec.lambdas[0][j], (-t / 100.0).exp(), max_relative = 1e-13);
        }
        assert_eq!(rec.lambdas[0][0], 1.0);
        assert_eq!(rec.base_id, "trivial");
        assert_eq!(rec.max_base_norm(2), Some(0.0));
    }

    #[test]
    fn tangent_step_is_linear() {
        let k = 10;
        let w = random_smooth_vorticity(k, 1, 3.0, 1.0);
        let cfg = SolverConfig::new(k, Reynolds::Finite(500.0), 1e-2, 0.1);
        let base = BaseTrajectory::new("b", run(&cfg, &w).unwrap()).unwrap();
        let dw = band_vorticity(k, 2, 6.0);
        let a = tangent_step(Some(&base), &dw, 0.02, 1e-2, &cfg).unwrap();
        let b = tangent_step(Some(&base), &dw.scaled(10.0), 0.02, 1e-2, &cfg).unwrap();
        assert!(b.max_abs_diff(&a.scaled(10.0)).unwrap() < 1e-14 * b.max_abs());
    }

    #[test]
    fn outside_trajectory_rejected() {
        let k = 6;
        let cfg = SolverConfig::new(k, Reynolds::Finite(50.0), 0.1, 0.3);
        let base = BaseTrajectory::new("b", run(&cfg, &random_smooth_vorticity(k, 1, 2.0, 1.0)).unwrap())
            .unwrap();
        let dw = band_vorticity(k, 1, 3.0);
        assert!(matches!(
            tangent_step(Some(&base), &dw, 0.25, 0.1, &cfg),
            Err(Error::OutsideTrajectory { .. })
        ));
        let stored = BaseFlow::Stored(Arc::new(base));
        assert!(amplification_curve(&stored, &cfg, &dw, &[0], &[0.0, 0.5]).is_err());
    }

    #[test]
    fn interpolation_is_exact_at_nodes_and_cubic_between() {
        let k = 8;
        let w = random_smooth_vorticity(k, 7, 3.0, 1.0);
        let cfg = SolverConfig::new(k, Reynolds::Finite(100.0), 1e-2, 0.5);
        let traj = run(&cfg, &w).unwrap();
        let mid = traj.checkpoints[20].clone();
        let mut coarse_cfg = cfg.clone();
        coarse_cfg.checkpoint_interval = 4;
        let coarse = BaseTrajectory::new("c", run(&coarse_cfg, &w).unwrap()).unwrap();
        assert_eq!(coarse.at(0.2).unwrap(), mid.omega);
        // halfway between nodes spaced 0.04 apart
        let between = coarse.at(0.22).unwrap();
        let exact = &traj.checkpoints[22].omega;
        assert!(between.max_abs_diff(exact).unwrap() < 1e-5 * exact.max_abs());
    }

    #[test]
    fn stored_base_matches_coupled() {
        let k = 12;
        let w = random_smooth_vorticity(k, 3, 3.0, 1.0);
        let cfg = SolverConfig::new(k, Reynolds::Finite(300.0), 5e-3, 0.5);
        let base = BaseTrajectory::new("s", run(&cfg, &w).unwrap()).unwrap();
        let mut dw = band_vorticity(k, 5, 6.0);
        normalize_velocity_norm(&mut dw, 3);
        let times = [0.0, 0.25, 0.5];
        let a = amplification_curve(&BaseFlow::Stored(Arc::new(base)), &cfg, &dw, &[3], &times)
            .unwrap();
        let coupled = BaseFlow::Coupled {
            id: "s".into(),
            omega0: w,
        };
        let b = amplification_curve(&coupled, &cfg, &dw, &[3], &times).unwrap();
        for j in 0..3 {
            assert_relative_eq!(a.lambdas[0][j], b.lambdas[0][j], max_relative = 1e-6);
            assert_relative_eq!(a.base_norms[0][j], b.base_norms[0][j], max_relative = 1e-6);
        }
        let u0 = velocity_from_vorticity(&b0_of(&coupled), None).unwrap();
        assert_eq!(b.base_norms[0][0], u0.sobolev_norm(3));
        let top = b.base_norms[0].iter().copied().fold(0.0, f64::max);
        assert_eq!(b.max_base_norm(3), Some(top));
        assert_eq!(b.max_base_norm(0), None);
    }

    #[test]
    fn zero_perturbation_rejected() {
        let cfg = SolverConfig::new(4, Reynolds::Finite(10.0), 0.1, 1.0);
        let z = SpectralField::zeros_scalar(4);
        assert!(amplification_curve(&BaseFlow::Trivial, &cfg, &z, &[0], &[0.0]).is_err());
    }

    #[test]
    fn remainder_is_quadratic_on_trivial_base() {
        let k = 12;
        let cfg = SolverConfig::new(k, Reynolds::Finite(100.0), 1e-2, 0.5);
        let mut v = band_vorticity(k, 11, 4.0);
        normalize_velocity_norm(&mut v, 3);
        let tab =
            remainder_experiment(&BaseFlow::Trivial, &cfg, &v, &[1e-2, 1e-3, 1e-4], 0.5, 3).unwrap();
        let r: Vec<f64> = tab.rows.iter().map(|r| r.over_eps2).collect();
        for x in &r {
            assert!((x / r[0] - 1.0).abs() < 0.1, "{r:?}");
        }
        assert!(tab.rows.iter().all(|r| !r.failed));
    }

    #[test]
    fn zero_direction_gives_zero_rows() {
        let cfg = SolverConfig::new(6, Reynolds::Finite(100.0), 1e-2, 0.1);
        let z = SpectralField::zeros_scalar(6);
        let tab = remainder_experiment(&BaseFlow::Trivial, &cfg, &z, &[1e-1, 1e-2], 0.1, 3).unwrap();
        for r in &tab.rows {
            assert_eq!(r.remainder, 0.0);
            assert_eq!(r.over_eps2, 0.0);
        }
        assert!(remainder_experiment(&BaseFlow::Trivial, &cfg, &z, &[1e-2, 1e-1], 0.1, 3).is_err());
    }

    #[test]
    fn blowup_marks_row_failed() {
        let k = 8;
        let cfg = SolverConfig::new(k, Reynolds::Infinite, 0.5, 50.0);
        let mut v = random_smooth_vorticity(k, 3, 4.0, 1.0);
        v.scale(1.0);
        let tab = remainder_experiment(&BaseFlow::Trivial, &cfg, &v, &[1e4, 1e-6], 50.0, 0);
        let tab = tab.unwrap();
        assert!(tab.rows[0].failed);
        assert!(tab.rows[0].remainder.is_nan());
        assert!(!tab.rows[1].failed);
    }

    #[test]
    fn csv_layout() {
        let rec = GrowthRecord {
            times: vec![0.0, 0.5],
            norm_indices: vec![0, 3],
            lambdas: vec![vec![1.0, 2.0], vec![1.0, 0.25]],
            base_norms: vec![],
            reynolds: 100.0,
            base_id: "x".into(),
        };
        let mut buf = Vec::new();
        rec.write_csv(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "t,Lambda_0,Lambda_3\n0.0,1.0,1.0\n0.5,2.0,0.25\n"
        );
        assert_eq!(rec.samples(3).unwrap(), vec![(0.0, 1.0), (0.5, 0.25)]);
    }
}
