//! Pseudo-spectral solver for 2D Navier–Stokes/Euler in vorticity form,
//!
//! ```text
//! ω_t − (1/Re) Δω = −u·∇ω,   u = (∂₂ψ, −∂₁ψ) + ū,   ω = −Δψ
//! ```
//!
//! on the periodic box, with `ū` a uniform mean flow (conserved by the
//! dynamics and invisible to the vorticity). Time stepping is classical
//! fourth-order Runge–Kutta in Lawson form: the viscous term is absorbed by
//! the exact factor `e^{−|k|² dt/Re}` and only advection is integrated
//! explicitly. `Re = ∞` is a first-class case (factor 1).
//!
//! The same stage loop advances a perturbation `dω` under the linearization
//! `dω_t − (1/Re)Δdω = −u·∇dω − du·∇ω`. Running it jointly with the base
//! produces exactly the derivative of the discrete base step, see
//! [`Solver::step_coupled`].

mod checkpoint;

pub use checkpoint::{read_checkpoint, write_checkpoint, CHECKPOINT_MAGIC, CHECKPOINT_VERSION};

use log::warn;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::{
    biot_savart_into, leray_project, vorticity_of, SpectralField, Transformer, WaveVector,
};

type Coeffs = Vec<Complex64>;

/// Reynolds number; `Infinite` selects the Euler equations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Reynolds {
    Finite(f64),
    Infinite,
}

impl Reynolds {
    /// Non-positive or infinite values map to `Infinite`.
    pub fn from_f64(value: f64) -> Self {
        if value <= 0.0 || value.is_infinite() {
            Reynolds::Infinite
        } else {
            Reynolds::Finite(value)
        }
    }

    /// Checkpoint encoding: `Infinite` is stored as 0.
    pub fn to_f64(self) -> f64 {
        match self {
            Reynolds::Finite(r) => r,
            Reynolds::Infinite => 0.0,
        }
    }

    /// `1/Re`, zero for Euler.
    pub fn viscosity(self) -> f64 {
        match self {
            Reynolds::Finite(r) => 1.0 / r,
            Reynolds::Infinite => 0.0,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Reynolds::Infinite)
    }

    /// Finite value, or `f64::INFINITY`.
    pub fn value(self) -> f64 {
        match self {
            Reynolds::Finite(r) => r,
            Reynolds::Infinite => f64::INFINITY,
        }
    }
}

impl std::fmt::Display for Reynolds {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Reynolds::Finite(r) => write!(f, "{r}"),
            Reynolds::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig {
    pub k_max: usize,
    pub reynolds: Reynolds,
    pub dt: f64,
    pub t_end: f64,
    /// Compute products on the padded 2/3-rule grid.
    pub dealias: bool,
    /// Steps between stored checkpoints in [`run`].
    pub checkpoint_interval: usize,
    /// Uniform background velocity `ū`.
    pub mean_flow: [f64; 2],
}

impl SolverConfig {
    pub fn new(k_max: usize, reynolds: Reynolds, dt: f64, t_end: f64) -> Self {
        SolverConfig {
            k_max,
            reynolds,
            dt,
            t_end,
            dealias: true,
            checkpoint_interval: 1,
            mean_flow: [0.0, 0.0],
        }
    }

    pub fn with_mean_flow(mut self, mean_flow: [f64; 2]) -> Self {
        self.mean_flow = mean_flow;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidArgument(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "t_end must be nonnegative, got {}",
                self.t_end
            )));
        }
        if self.checkpoint_interval == 0 {
            return Err(Error::InvalidArgument("checkpoint_interval must be ≥ 1".into()));
        }
        if let Reynolds::Finite(r) = self.reynolds {
            if !r.is_finite() || r <= 0.0 {
                return Err(Error::InvalidArgument(format!("bad Reynolds number {r}")));
            }
        }
        if self.mean_flow.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("mean flow must be finite".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimulationState {
    pub t: f64,
    pub omega: SpectralField,
    pub step_count: u64,
}

impl SimulationState {
    pub fn new(omega: SpectralField) -> Self {
        SimulationState {
            t: 0.0,
            omega,
            step_count: 0,
        }
    }
}

/// Grid-side kernels: velocity inversion and dealiased products.
struct Kernel {
    tr: Transformer,
    mean_flow: [f64; 2],
    u: [Coeffs; 2],
    g: [Coeffs; 2],
    du: [Coeffs; 2],
    dg: [Coeffs; 2],
    grid_u: Coeffs,
    grid_g: Coeffs,
    grid_du: Coeffs,
    grid_dg: Coeffs,
}

impl Kernel {
    fn new(k_max: usize, dealias: bool, mean_flow: [f64; 2]) -> Self {
        let tr = if dealias {
            Transformer::dealiased(k_max)
        } else {
            Transformer::minimal(k_max)
        };
        let side = 2 * k_max + 1;
        let c = || vec![Complex64::default(); side * side];
        let g = || vec![Complex64::default(); tr.grid_len()];
        Kernel {
            mean_flow,
            u: [c(), c()],
            g: [c(), c()],
            du: [c(), c()],
            dg: [c(), c()],
            grid_u: g(),
            grid_g: g(),
            grid_du: g(),
            grid_dg: g(),
            tr,
        }
    }

    fn k_max(&self) -> usize {
        self.tr.k_max()
    }

    /// Velocity (plus `mean`, when given) and vorticity gradient.
    fn velocity_and_gradient(
        k_max: usize,
        omega: &[Complex64],
        mean: Option<[f64; 2]>,
        u: &mut [Coeffs; 2],
        g: &mut [Coeffs; 2],
    ) {
        let (u1, u2) = u.split_at_mut(1);
        biot_savart_into(k_max, omega, &mut u1[0], &mut u2[0]);
        let mid = omega.len() / 2;
        if let Some([a, b]) = mean {
            u[0][mid] = Complex64::new(a, 0.0);
            u[1][mid] = Complex64::new(b, 0.0);
        }
        for (i, k) in SpectralField::mode_iter(k_max) {
            let [k1, k2] = k.0;
            let iw = omega[i] * Complex64::i();
            g[0][i] = iw * k1 as f64;
            g[1][i] = iw * k2 as f64;
        }
    }

    /// `out = −u·∇ω`, zero mean.
    fn advection_rate(&mut self, omega: &[Complex64], out: &mut [Complex64]) {
        let k_max = self.k_max();
        Self::velocity_and_gradient(k_max, omega, Some(self.mean_flow), &mut self.u, &mut self.g);
        self.tr
            .synthesize_pair(&self.u[0], Some(&self.u[1]), &mut self.grid_u);
        self.tr
            .synthesize_pair(&self.g[0], Some(&self.g[1]), &mut self.grid_g);
        for (p, q) in self.grid_u.iter_mut().zip(&self.grid_g) {
            *p = Complex64::new(-(p.re * q.re + p.im * q.im), 0.0);
        }
        self.tr.analyze_pair(&mut self.grid_u, out, None);
        out[out.len() / 2] = Complex64::default();
    }

    /// Base rate `−u·∇ω` and linearized rate `−u·∇dω − du·∇ω` from one
    /// shared set of transforms.
    fn coupled_rate(
        &mut self,
        omega: &[Complex64],
        domega: &[Complex64],
        out_base: &mut [Complex64],
        out_tan: &mut [Complex64],
    ) {
        let k_max = self.k_max();
        Self::velocity_and_gradient(k_max, omega, Some(self.mean_flow), &mut self.u, &mut self.g);
        Self::velocity_and_gradient(k_max, domega, None, &mut self.du, &mut self.dg);
        self.tr
            .synthesize_pair(&self.u[0], Some(&self.u[1]), &mut self.grid_u);
        self.tr
            .synthesize_pair(&self.g[0], Some(&self.g[1]), &mut self.grid_g);
        self.tr
            .synthesize_pair(&self.du[0], Some(&self.du[1]), &mut self.grid_du);
        self.tr
            .synthesize_pair(&self.dg[0], Some(&self.dg[1]), &mut self.grid_dg);
        for i in 0..self.grid_u.len() {
            let (u, g) = (self.grid_u[i], self.grid_g[i]);
            let (du, dg) = (self.grid_du[i], self.grid_dg[i]);
            let base = u.re * g.re + u.im * g.im;
            let tan = u.re * dg.re + u.im * dg.im + du.re * g.re + du.im * g.im;
            self.grid_u[i] = Complex64::new(-base, -tan);
        }
        self.tr
            .analyze_pair(&mut self.grid_u, out_base, Some(out_tan));
        out_base[out_base.len() / 2] = Complex64::default();
        out_tan[out_tan.len() / 2] = Complex64::default();
    }
}

/// Viscous integrating factors for one step size.
struct Factors {
    dt: f64,
    half: Vec<f64>,
    full: Vec<f64>,
}

impl Factors {
    fn new(k_max: usize, reynolds: Reynolds, dt: f64) -> Self {
        let nu = reynolds.viscosity();
        let (half, full) = SpectralField::mode_iter(k_max)
            .map(|(_, k)| {
                let rate = k.norm_sq() * nu;
                ((-rate * dt * 0.5).exp(), (-rate * dt).exp())
            })
            .unzip();
        Factors { dt, half, full }
    }
}

/// Evolves vorticity fields for one fixed configuration.
pub struct Solver {
    config: SolverConfig,
    kernel: Kernel,
    factors: Factors,
}

/// How a tangent stage obtains the base vorticity.
enum StageMode<'a> {
    Base,
    Coupled,
    /// Base vorticity at `t`, `t + dt/2`, `t + dt`.
    Prescribed([&'a [Complex64]; 3]),
}

impl Solver {
    pub fn new(config: SolverConfig) -> Result<Self> {
        config.validate()?;
        let kernel = Kernel::new(config.k_max, config.dealias, config.mean_flow);
        let factors = Factors::new(config.k_max, config.reynolds, config.dt);
        Ok(Solver {
            config,
            kernel,
            factors,
        })
    }

    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    fn check(&self, f: &SpectralField) -> Result<()> {
        f.require_scalar()?;
        if f.k_max() != self.config.k_max {
            return Err(Error::TruncationMismatch {
                left: f.k_max(),
                right: self.config.k_max,
            });
        }
        let mean = f.mean()[0].abs();
        if mean > 1e-13 * f.max_abs().max(1.0) {
            return Err(Error::NonzeroMeanVorticity(mean));
        }
        Ok(())
    }

    fn factors_for(&mut self, dt: f64) {
        if dt != self.factors.dt {
            self.factors = Factors::new(self.config.k_max, self.config.reynolds, dt);
        }
    }

    /// Advection rate `−u·∇ω` plus viscous term, `∂ω/∂t`.
    pub fn vorticity_rate(&mut self, omega: &SpectralField) -> Result<SpectralField> {
        self.check(omega)?;
        let mut out = SpectralField::zeros_scalar(self.config.k_max);
        self.kernel
            .advection_rate(omega.component(0), out.component_mut(0));
        let nu = self.config.reynolds.viscosity();
        let w = omega.component(0);
        for (i, k) in SpectralField::mode_iter(self.config.k_max) {
            out.component_mut(0)[i] -= w[i] * (nu * k.norm_sq());
        }
        Ok(out)
    }

    /// One Lawson–RK4 step on a stack of fields. `fields[0]` is the base;
    /// `fields[1]`, if present, is a perturbation.
    fn lawson_step(&mut self, fields: &mut [Coeffs], dt: f64, mode: StageMode) {
        self.factors_for(dt);
        let len = fields[0].len();
        let nf = fields.len();
        let zeros = || vec![vec![Complex64::default(); len]; nf];
        let (mut k1, mut k2, mut k3, mut k4) = (zeros(), zeros(), zeros(), zeros());
        let mut stage = zeros();

        let mut junk = vec![Complex64::default(); len];
        let mut eval = |kern: &mut Kernel, s: usize, x: &[Coeffs], out: &mut [Coeffs]| match &mode {
            StageMode::Base => kern.advection_rate(&x[0], &mut out[0]),
            StageMode::Coupled => {
                let (o0, o1) = out.split_at_mut(1);
                kern.coupled_rate(&x[0], &x[1], &mut o0[0], &mut o1[0]);
            }
            StageMode::Prescribed(base) => {
                kern.coupled_rate(base[s], &x[0], &mut junk, &mut out[0]);
            }
        };
        let f = &self.factors;
        let h = dt;

        eval(&mut self.kernel, 0, fields, &mut k1);
        for j in 0..nf {
            for i in 0..len {
                stage[j][i] = (fields[j][i] + k1[j][i] * (0.5 * h)) * f.half[i];
            }
        }
        eval(&mut self.kernel, 1, &stage, &mut k2);
        for j in 0..nf {
            for i in 0..len {
                stage[j][i] = fields[j][i] * f.half[i] + k2[j][i] * (0.5 * h);
            }
        }
        eval(&mut self.kernel, 1, &stage, &mut k3);
        for j in 0..nf {
            for i in 0..len {
                stage[j][i] = fields[j][i] * f.full[i] + k3[j][i] * (f.half[i] * h);
            }
        }
        eval(&mut self.kernel, 2, &stage, &mut k4);
        for j in 0..nf {
            for i in 0..len {
                let incr = k1[j][i] * f.full[i]
                    + (k2[j][i] + k3[j][i]) * (2.0 * f.half[i])
                    + k4[j][i];
                fields[j][i] = fields[j][i] * f.full[i] + incr * (h / 6.0);
            }
        }
    }

    fn commit(
        state: &mut SimulationState,
        omega: Coeffs,
        dt: f64,
    ) -> Result<()> {
        let k_max = state.omega.k_max();
        let next = SpectralField::from_components(k_max, vec![omega])?;
        let t = state.t + dt;
        if !next.is_finite() {
            return Err(Error::Numerical {
                t,
                reason: "non-finite vorticity coefficients (blowup or instability)".into(),
            });
        }
        state.omega = next;
        state.t = t;
        state.step_count += 1;
        Ok(())
    }

    /// Advances `state` by the configured `dt`.
    pub fn step(&mut self, state: &mut SimulationState) -> Result<()> {
        self.step_by(state, self.config.dt)
    }

    /// Advances `state` by an arbitrary positive `dt`.
    pub fn step_by(&mut self, state: &mut SimulationState, dt: f64) -> Result<()> {
        self.check(&state.omega)?;
        let mut fields = vec![state.omega.component(0).to_vec()];
        self.lawson_step(&mut fields, dt, StageMode::Base);
        Self::commit(state, fields.pop().unwrap(), dt)
    }

    /// Advances the base and a perturbation together. The perturbation
    /// update is the exact derivative of the base update, so
    /// `step(ω + ε dω) − step(ω) − ε dω_new = O(ε²)`.
    pub fn step_coupled(
        &mut self,
        state: &mut SimulationState,
        domega: &mut SpectralField,
        dt: f64,
    ) -> Result<()> {
        self.check(&state.omega)?;
        self.check(domega)?;
        let mut fields = vec![
            state.omega.component(0).to_vec(),
            domega.component(0).to_vec(),
        ];
        self.lawson_step(&mut fields, dt, StageMode::Coupled);
        let tan = fields.pop().unwrap();
        let next = SpectralField::from_components(state.omega.k_max(), vec![tan])?;
        if !next.is_finite() {
            return Err(Error::Numerical {
                t: state.t + dt,
                reason: "non-finite perturbation coefficients".into(),
            });
        }
        Self::commit(state, fields.pop().unwrap(), dt)?;
        *domega = next;
        Ok(())
    }

    /// Advances a perturbation along a prescribed base, given at the
    /// start, midpoint and end of the step.
    pub fn tangent_step_prescribed(
        &mut self,
        base: [&SpectralField; 3],
        domega: &mut SpectralField,
        dt: f64,
    ) -> Result<()> {
        for b in base {
            self.check(b)?;
        }
        self.check(domega)?;
        let mut fields = vec![domega.component(0).to_vec()];
        let b = [
            base[0].component(0),
            base[1].component(0),
            base[2].component(0),
        ];
        self.lawson_step(&mut fields, dt, StageMode::Prescribed(b));
        let next = SpectralField::from_components(domega.k_max(), fields)?;
        if !next.is_finite() {
            return Err(Error::Numerical {
                t: f64::NAN,
                reason: "non-finite perturbation coefficients".into(),
            });
        }
        *domega = next;
        Ok(())
    }

    /// Upper bound on `dt · max|u| · K` from the coefficient sum.
    pub fn cfl_estimate(&self, omega: &SpectralField) -> f64 {
        let mut u1 = vec![Complex64::default(); omega.component(0).len()];
        let mut u2 = u1.clone();
        biot_savart_into(self.config.k_max, omega.component(0), &mut u1, &mut u2);
        let sum: f64 = u1.iter().chain(&u2).map(|z| z.norm()).sum();
        let mean = self.config.mean_flow[0].abs() + self.config.mean_flow[1].abs();
        self.config.dt * (sum + mean) * self.config.k_max as f64
    }
}

/// Safety constant for the CFL warning.
pub const CFL_WARN: f64 = 2.0;

/// Sequence of checkpoints produced by [`run`].
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub config: SolverConfig,
    pub checkpoints: Vec<SimulationState>,
}

impl Trajectory {
    pub fn final_state(&self) -> &SimulationState {
        self.checkpoints.last().unwrap()
    }

    pub fn span(&self) -> (f64, f64) {
        (self.checkpoints[0].t, self.final_state().t)
    }
}

/// Number of steps and size of the (possibly shortened) last one.
pub(crate) fn step_plan(t_span: f64, dt: f64) -> (u64, f64) {
    if t_span <= 0.0 {
        return (0, dt);
    }
    let ratio = t_span / dt;
    let nearest = ratio.round();
    if (ratio - nearest).abs() <= 1e-9 * ratio.max(1.0) {
        (nearest as u64, dt)
    } else {
        let full = ratio.floor();
        (full as u64 + 1, t_span - full * dt)
    }
}

/// Single step as a pure function of state and configuration.
pub fn step(state: &SimulationState, config: &SolverConfig) -> Result<SimulationState> {
    let mut solver = Solver::new(config.clone())?;
    let mut next = state.clone();
    solver.step(&mut next)?;
    Ok(next)
}

/// Integrates from `omega0` at `t = 0` to `config.t_end`, keeping every
/// `checkpoint_interval`-th state plus the first and last.
pub fn run(config: &SolverConfig, omega0: &SpectralField) -> Result<Trajectory> {
    let mut solver = Solver::new(config.clone())?;
    solver.check(omega0)?;
    let cfl = solver.cfl_estimate(omega0);
    if cfl > CFL_WARN {
        warn!("CFL estimate {cfl:.3} exceeds {CFL_WARN}; the run may be unstable");
    }
    let mut state = SimulationState::new(omega0.clone());
    let mut checkpoints = vec![state.clone()];
    let (n_steps, last_dt) = step_plan(config.t_end, config.dt);
    for s in 1..=n_steps {
        let dt = if s == n_steps { last_dt } else { config.dt };
        solver.step_by(&mut state, dt)?;
        if s == n_steps {
            state.t = config.t_end;
        } else {
            state.t = s as f64 * config.dt;
        }
        if s % config.checkpoint_interval as u64 == 0 || s == n_steps {
            checkpoints.push(state.clone());
        }
    }
    Ok(Trajectory {
        config: config.clone(),
        checkpoints,
    })
}

/// Norm readouts of a vorticity state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Diagnostics {
    /// `½ ‖u‖²₀`, mean flow included.
    pub energy: f64,
    /// `½ ‖ω‖²₀`.
    pub enstrophy: f64,
    /// `½ ‖∇ω‖²₀`.
    pub palinstrophy: f64,
    /// `‖u‖ₙ` for `n = 0..=4`.
    pub velocity_norms: [f64; 5],
}

pub fn diagnostics(state: &SimulationState, mean_flow: [f64; 2]) -> Result<Diagnostics> {
    let u = crate::spectral::velocity_from_vorticity(&state.omega, Some(mean_flow))?;
    let grad = state.omega.gradient()?;
    let mut velocity_norms = [0.0; 5];
    for (n, v) in velocity_norms.iter_mut().enumerate() {
        *v = u.sobolev_norm(n as u32);
    }
    Ok(Diagnostics {
        energy: 0.5 * u.sobolev_norm_sq(0),
        enstrophy: 0.5 * state.omega.sobolev_norm_sq(0),
        palinstrophy: 0.5 * grad.sobolev_norm_sq(0),
        velocity_norms,
    })
}

/// Velocity-form rate `−P(u·∇u) + (1/Re) Δu`, the Leray-projected
/// equations. Only used to cross-check the vorticity form.
pub fn leray_velocity_rate(u: &SpectralField, reynolds: Reynolds) -> Result<SpectralField> {
    u.require_vector()?;
    let mut tr = Transformer::dealiased(u.k_max());
    let mut adv = SpectralField::zeros_vector(u.k_max());
    for c in 0..2 {
        let comp = SpectralField::from_components(u.k_max(), vec![u.component(c).to_vec()])?;
        let a = tr.advection(u, &comp)?;
        adv.component_mut(c).copy_from_slice(a.component(0));
    }
    let mut rate = leray_project(&adv)?;
    rate.scale(-1.0);
    let nu = reynolds.viscosity();
    for (i, k) in u.modes() {
        for c in 0..2 {
            let v = u.component(c)[i] * (nu * k.norm_sq());
            rate.component_mut(c)[i] -= v;
        }
    }
    Ok(rate)
}

/// Vorticity rate recomputed through the velocity form, for comparison
/// with [`Solver::vorticity_rate`].
pub fn vorticity_rate_via_velocity(
    omega: &SpectralField,
    mean_flow: [f64; 2],
    reynolds: Reynolds,
) -> Result<SpectralField> {
    let u = crate::spectral::velocity_from_vorticity(omega, Some(mean_flow))?;
    vorticity_of(&leray_velocity_rate(&u, reynolds)?)
}

/// Vorticity of `sin x₂` (`u = (cos x₂, 0)`).
pub fn sin_x2_vorticity(k_max: usize) -> SpectralField {
    let mut w = SpectralField::zeros_scalar(k_max);
    w.set_pair(0, WaveVector::new(0, 1), Complex64::new(0.0, -0.5));
    w
}

#[cfg(test)]
mod tests;
