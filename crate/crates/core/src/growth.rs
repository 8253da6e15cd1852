//! Growth-law fits, the amplification envelope `e^{σ√Re√t + σ₁t}`, and
//! Reynolds-number sweeps.
//!
//! Every fit is an unweighted least-squares line in the log domain:
//! `ln Λ` against `√t` or `t`, or `ln y` against `ln x` for power laws.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::recipes::{band_vorticity, normalize_velocity_norm, random_smooth_vorticity, rms_velocity};
use crate::solver::{run, Reynolds, SolverConfig};
use crate::spectral::{velocity_from_vorticity, NormConvention, SpectralField};
use crate::tangent::{amplification_curve, BaseFlow, GrowthRecord};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GrowthModel {
    /// `Λ = A e^{σ√t}`
    SqrtExp,
    /// `Λ = A e^{λt}`
    Exp,
    /// `y = C xᵖ`
    Power,
}

impl GrowthModel {
    fn rate_name(self) -> &'static str {
        match self {
            GrowthModel::SqrtExp => "sigma",
            GrowthModel::Exp => "lambda",
            GrowthModel::Power => "exponent",
        }
    }

    fn scale_name(self) -> &'static str {
        match self {
            GrowthModel::Power => "prefactor",
            _ => "amplitude",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub model: GrowthModel,
    /// `amplitude`/`prefactor` and `sigma`/`lambda`/`exponent`.
    pub params: BTreeMap<String, f64>,
    /// Sum of squared log-domain residuals.
    pub residual: f64,
    pub n_samples: usize,
    /// Standard error of the rate parameter (`NaN` with two samples).
    pub rate_stderr: f64,
}

impl FitResult {
    /// `σ`, `λ` or `p`.
    pub fn rate(&self) -> f64 {
        self.params[self.model.rate_name()]
    }

    pub fn scale(&self) -> f64 {
        self.params[self.model.scale_name()]
    }

    /// Two-sided 95% interval for the rate.
    pub fn rate_ci95(&self) -> (f64, f64) {
        let q = student_t95(self.n_samples.saturating_sub(2));
        let r = self.rate();
        (r - q * self.rate_stderr, r + q * self.rate_stderr)
    }

    pub fn predict(&self, x: f64) -> f64 {
        let (a, r) = (self.scale(), self.rate());
        match self.model {
            GrowthModel::SqrtExp => a * (r * x.sqrt()).exp(),
            GrowthModel::Exp => a * (r * x).exp(),
            GrowthModel::Power => a * x.powf(r),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("fit results serialize")
    }
}

/// 97.5% quantile of Student's t with `df` degrees of freedom.
fn student_t95(df: usize) -> f64 {
    use statrs::distribution::{ContinuousCDF, StudentsT};
    match StudentsT::new(0.0, 1.0, df as f64) {
        Ok(d) if df > 0 => d.inverse_cdf(0.975),
        _ => f64::NAN,
    }
}

/// Options shared by the time-growth fits.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct FitOptions {
    /// Keep `t = 0` samples (the `ln Λ(0) = 0` anchor); they are dropped
    /// by default.
    pub anchor: bool,
}

struct Line {
    intercept: f64,
    slope: f64,
    residual: f64,
    slope_stderr: f64,
}

fn least_squares(points: &[(f64, f64)]) -> Result<Line> {
    let n = points.len();
    if n < 3 {
        return Err(Error::DegenerateFit(format!("{n} samples; at least 3 needed")));
    }
    let nf = n as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / nf;
    let my = points.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let scale = points.iter().map(|p| p.0.abs()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    if !(sxx > (1e-12 * scale).powi(2) * nf) {
        return Err(Error::DegenerateFit("all abscissae coincide".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual: f64 = points
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum();
    let slope_stderr = (residual / (nf - 2.0) / sxx).sqrt();
    Ok(Line {
        intercept,
        slope,
        residual,
        slope_stderr,
    })
}

fn check_finite_positive(x: f64, y: f64, what: &str) -> Result<()> {
    if !(y > 0.0 && y.is_finite() && x.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "{what} sample ({x}, {y}) must be finite with positive value"
        )));
    }
    Ok(())
}

fn fit_time_model(
    samples: &[(f64, f64)],
    opts: FitOptions,
    model: GrowthModel,
) -> Result<FitResult> {
    let mut pts = Vec::with_capacity(samples.len());
    for &(t, lam) in samples {
        check_finite_positive(t, lam, "growth")?;
        if t < 0.0 {
            return Err(Error::InvalidArgument(format!("negative time {t}")));
        }
        if t == 0.0 && !opts.anchor {
            continue;
        }
        let x = if model == GrowthModel::SqrtExp { t.sqrt() } else { t };
        pts.push((x, lam.ln()));
    }
    let line = least_squares(&pts)?;
    Ok(make_result(model, line, pts.len()))
}

fn make_result(model: GrowthModel, line: Line, n: usize) -> FitResult {
    let mut params = BTreeMap::new();
    params.insert(model.scale_name().to_string(), line.intercept.exp());
    params.insert(model.rate_name().to_string(), line.slope);
    FitResult {
        model,
        params,
        residual: line.residual,
        n_samples: n,
        rate_stderr: line.slope_stderr,
    }
}

/// `ln Λ = ln A + σ√t`.
pub fn fit_sqrt_exponential(samples: &[(f64, f64)], opts: FitOptions) -> Result<FitResult> {
    fit_time_model(samples, opts, GrowthModel::SqrtExp)
}

/// `ln Λ = ln A + λt`.
pub fn fit_exponential(samples: &[(f64, f64)], opts: FitOptions) -> Result<FitResult> {
    fit_time_model(samples, opts, GrowthModel::Exp)
}

/// `ln y = ln C + p ln x`; requires `x > 0`.
pub fn fit_power(samples: &[(f64, f64)]) -> Result<FitResult> {
    let mut pts = Vec::with_capacity(samples.len());
    for &(x, y) in samples {
        check_finite_positive(x, y, "power-law")?;
        if !(x > 0.0) {
            return Err(Error::InvalidArgument(format!("abscissa {x} must be positive")));
        }
        pts.push((x.ln(), y.ln()));
    }
    let line = least_squares(&pts)?;
    Ok(make_result(GrowthModel::Power, line, pts.len()))
}

/// Both time models, best (smallest log residual) first; ties keep
/// `sqrt_exp` first.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelComparison {
    pub ranking: Vec<FitResult>,
}

impl ModelComparison {
    pub fn best(&self) -> &FitResult {
        &self.ranking[0]
    }
}

pub fn compare_models(samples: &[(f64, f64)], opts: FitOptions) -> Result<ModelComparison> {
    let mut ranking = vec![
        fit_sqrt_exponential(samples, opts)?,
        fit_exponential(samples, opts)?,
    ];
    ranking.sort_by(|a, b| a.residual.total_cmp(&b.residual));
    Ok(ModelComparison { ranking })
}

/// Constants of the envelope `ln Λ ≤ σ√Re√t + σ₁t`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnvelopeParams {
    /// Domain constant; not known in closed form, so supplied or calibrated.
    pub c: f64,
    /// `max_τ ‖u(τ)‖ₙ` over the base trajectory.
    pub max_base_norm: f64,
    pub reynolds: Reynolds,
}

impl EnvelopeParams {
    /// `σ = 8c/√(2e) · max ‖u‖ₙ`.
    pub fn sigma(&self) -> f64 {
        8.0 * self.c / (2.0 * std::f64::consts::E).sqrt() * self.max_base_norm
    }

    /// `σ₁ = (√(2e)/2) σ`.
    pub fn sigma1(&self) -> f64 {
        (2.0 * std::f64::consts::E).sqrt() / 2.0 * self.sigma()
    }

    /// `σ√Re√t + σ₁t`, the log of the envelope.
    pub fn log_bound(&self, t: f64) -> f64 {
        let s = self.sigma();
        let lead = if t == 0.0 || s == 0.0 {
            0.0
        } else {
            s * self.reynolds.value().sqrt() * t.sqrt()
        };
        lead + self.sigma1() * t
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EnvelopeMargin {
    pub t: f64,
    pub ln_lambda: f64,
    pub log_bound: f64,
    /// `log_bound − ln Λ`; negative entries violate the envelope.
    pub margin: f64,
}

/// Margins of one norm index of `record` under `env`.
pub fn envelope_check(
    record: &GrowthRecord,
    norm_index: u32,
    env: &EnvelopeParams,
) -> Result<Vec<EnvelopeMargin>> {
    let samples = record.samples(norm_index).ok_or_else(|| {
        Error::InvalidArgument(format!("record has no norm index {norm_index}"))
    })?;
    Ok(samples
        .iter()
        .map(|&(t, lam)| {
            let ln_lambda = lam.ln();
            let log_bound = env.log_bound(t);
            EnvelopeMargin {
                t,
                ln_lambda,
                log_bound,
                margin: log_bound - ln_lambda,
            }
        })
        .collect())
}

/// Smallest `c` (to relative tolerance `1e-10`) for which every margin is
/// nonnegative, found by bracketing and bisection.
pub fn calibrate_c(
    record: &GrowthRecord,
    norm_index: u32,
    max_base_norm: f64,
    reynolds: Reynolds,
) -> Result<f64> {
    if !(max_base_norm > 0.0) {
        return Err(Error::InvalidArgument("base norm must be positive".into()));
    }
    let admissible = |c: f64| -> Result<bool> {
        let env = EnvelopeParams {
            c,
            max_base_norm,
            reynolds,
        };
        Ok(envelope_check(record, norm_index, &env)?
            .iter()
            .all(|m| m.margin >= 0.0))
    };
    if admissible(0.0)? {
        return Ok(0.0);
    }
    let mut hi = 1.0;
    let mut guard = 0;
    while !admissible(hi)? {
        hi *= 2.0;
        guard += 1;
        if guard > 1100 {
            return Err(Error::DegenerateFit(
                "no finite envelope constant covers the record".into(),
            ));
        }
    }
    let mut lo = 0.0;
    while hi - lo > 1e-10 * hi {
        let mid = 0.5 * (lo + hi);
        if admissible(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// How a sweep condenses `Λ(t_probe)` into one number.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AmplificationMeasure {
    /// `Λ(t_probe)`.
    #[default]
    Ratio,
    /// `ln Λ(t_probe)`, the exponent of the envelope.
    LogRatio,
}

impl AmplificationMeasure {
    pub fn apply(self, lambda: f64) -> f64 {
        match self {
            AmplificationMeasure::Ratio => lambda,
            AmplificationMeasure::LogRatio => lambda.ln(),
        }
    }
}

/// Seeded turbulence-like experiment: a smooth random base and a random
/// band-limited perturbation, both fixed across Reynolds numbers.
///
/// The base is first spun up at the target Reynolds number so that its
/// small scales carry the Re-dependent gradients by the time the
/// perturbation is inserted. All times below are measured from insertion.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TurbulenceRecipe {
    pub k_max: usize,
    pub dt: f64,
    pub seed: u64,
    /// Base energy is concentrated near this wavenumber.
    pub peak_wavenumber: f64,
    pub u_rms: f64,
    /// Perturbation modes fill the disc `|k| ≤ perturbation_cutoff`.
    pub perturbation_cutoff: f64,
    /// Spin-up duration as a fraction of the initial turnover time.
    pub spinup_fraction: f64,
    /// Probe time as a fraction of the turnover time at insertion.
    pub probe_fraction: f64,
    /// Overrides the turnover time at insertion.
    pub turnover_time: Option<f64>,
    pub norm_index: u32,
    pub measure: AmplificationMeasure,
}

impl Default for TurbulenceRecipe {
    fn default() -> Self {
        TurbulenceRecipe {
            k_max: 64,
            dt: 8e-3,
            seed: 0,
            peak_wavenumber: 4.0,
            u_rms: 1.0,
            perturbation_cutoff: 16.0,
            spinup_fraction: 0.5,
            probe_fraction: 0.3,
            turnover_time: None,
            norm_index: 1,
            measure: AmplificationMeasure::Ratio,
        }
    }
}

/// Base vorticity at the moment the perturbation is inserted.
#[derive(Clone, Debug, PartialEq)]
pub struct PreparedBase {
    pub reynolds: Reynolds,
    pub omega: SpectralField,
    pub turnover_time: f64,
}

/// Box size over the rms speed of `omega`.
pub fn turnover_time_of(omega: &SpectralField) -> Result<f64> {
    let u = velocity_from_vorticity(omega, None)?;
    let rms = rms_velocity(&u);
    if !(rms > 0.0) {
        return Err(Error::InvalidArgument("turnover time of a resting flow".into()));
    }
    Ok(NormConvention::BOX_MEASURE.sqrt() / rms)
}

impl TurbulenceRecipe {
    /// Base before spin-up.
    pub fn initial_vorticity(&self) -> SpectralField {
        random_smooth_vorticity(self.k_max, self.seed, self.peak_wavenumber, self.u_rms)
    }

    /// Perturbation with unit velocity norm of index `norm_index`; the seed
    /// is decorrelated from the base.
    pub fn perturbation(&self) -> SpectralField {
        let mut dw = band_vorticity(
            self.k_max,
            self.seed ^ 0x9e37_79b9_7f4a_7c15,
            self.perturbation_cutoff,
        );
        normalize_velocity_norm(&mut dw, self.norm_index);
        dw
    }

    /// Spins the base up at `reynolds` and measures its turnover time.
    pub fn prepare(&self, reynolds: Reynolds) -> Result<PreparedBase> {
        let w0 = self.initial_vorticity();
        let spin = self.spinup_fraction * turnover_time_of(&w0)?;
        let omega = if spin > 0.0 {
            let mut cfg = SolverConfig::new(self.k_max, reynolds, self.dt, spin);
            cfg.checkpoint_interval = usize::MAX;
            run(&cfg, &w0)?.final_state().omega.clone()
        } else {
            w0
        };
        let turnover_time = match self.turnover_time {
            Some(t0) => t0,
            None => turnover_time_of(&omega)?,
        };
        Ok(PreparedBase { reynolds, omega, turnover_time })
    }

    pub fn probe_time(&self, base: &PreparedBase) -> f64 {
        self.probe_fraction * base.turnover_time
    }

    /// `Λ` for the given indices at `times` after insertion.
    pub fn growth(&self, base: &PreparedBase, norm_indices: &[u32], times: &[f64]) -> Result<GrowthRecord> {
        let end = times.iter().copied().fold(0.0, f64::max);
        let cfg = SolverConfig::new(self.k_max, base.reynolds, self.dt, end);
        let flow = BaseFlow::Coupled {
            id: format!("smooth-seed{}", self.seed),
            omega0: base.omega.clone(),
        };
        amplification_curve(&flow, &cfg, &self.perturbation(), norm_indices, times)
    }

    /// Measured amplification at the probe time.
    pub fn amplification(&self, reynolds: Reynolds) -> Result<f64> {
        let base = self.prepare(reynolds)?;
        let rec = self.growth(&base, &[self.norm_index], &[self.probe_time(&base)])?;
        Ok(self.measure.apply(rec.lambdas[0][0]))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub reynolds: f64,
    pub amplification: Option<f64>,
    /// Why the run was excluded.
    pub failure: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepResult {
    /// Sorted by Reynolds number.
    pub rows: Vec<SweepRow>,
    /// Power law of amplification against Re over surviving runs.
    pub fit: FitResult,
}

impl SweepResult {
    /// Amplification strictly increasing along the surviving rows.
    pub fn is_monotone_increasing(&self) -> bool {
        let vals: Vec<f64> = self.rows.iter().filter_map(|r| r.amplification).collect();
        vals.windows(2).all(|w| w[1] > w[0])
    }

    /// Columns `Re, amplification, status`.
    pub fn write_csv(&self, mut w: impl std::io::Write) -> std::io::Result<()> {
        writeln!(w, "Re,amplification,status")?;
        for r in &self.rows {
            match (&r.amplification, &r.failure) {
                (Some(a), _) => writeln!(w, "{:?},{:?},ok", r.reynolds, a)?,
                (None, f) => writeln!(
                    w,
                    "{:?},NaN,failed: {}",
                    r.reynolds,
                    f.as_deref().unwrap_or("").replace(',', ";")
                )?,
            }
        }
        Ok(())
    }
}

/// Runs `measure` for each Reynolds number in parallel and fits a power
/// law over the runs that succeed. Failed runs and nonpositive
/// amplifications are excluded; at least three must survive.
pub fn reynolds_sweep<F>(re_list: &[f64], measure: F) -> Result<SweepResult>
where
    F: Fn(Reynolds) -> Result<f64> + Sync,
{
    let mut sorted = re_list.to_vec();
    if sorted.iter().any(|&r| !(r > 0.0 && r.is_finite())) {
        return Err(Error::InvalidArgument(
            "sweep Reynolds numbers must be finite and positive".into(),
        ));
    }
    sorted.sort_by(f64::total_cmp);
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidArgument("duplicate Reynolds numbers".into()));
    }
    let rows: Vec<SweepRow> = sorted
        .par_iter()
        .map(|&re| match measure(Reynolds::Finite(re)) {
            Ok(a) if a > 0.0 && a.is_finite() => SweepRow {
                reynolds: re,
                amplification: Some(a),
                failure: None,
            },
            Ok(a) => SweepRow {
                reynolds: re,
                amplification: None,
                failure: Some(format!("amplification {a} cannot enter a log-log fit")),
            },
            Err(e) => {
                log::warn!("Re = {re} excluded: {e}");
                SweepRow {
                    reynolds: re,
                    amplification: None,
                    failure: Some(e.to_string()),
                }
            }
        })
        .collect();
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter_map(|r| r.amplification.map(|a| (r.reynolds, a)))
        .collect();
    if pts.len() < 3 {
        return Err(Error::DegenerateFit(format!(
            "{} of {} sweep runs survived; at least 3 needed",
            pts.len(),
            rows.len()
        )));
    }
    let fit = fit_power(&pts)?;
    Ok(SweepResult { rows, fit })
}
