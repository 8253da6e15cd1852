//! The `roughdep` command-line front end.
//!
//! Every subcommand reads a TOML configuration (`--config`), applies
//! `--override key=value` pairs and `--seed`, writes the resolved
//! configuration to `<out>/manifest.toml`, and then its outputs. Running a
//! subcommand again with `--config <out>/manifest.toml` reproduces them.
//!
//! Exit codes: 0 on success, 2 for configuration or input errors, 3 for
//! numerical failures, 1 for I/O failures.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::growth::{
    compare_models, fit_exponential, fit_power, fit_sqrt_exponential, reynolds_sweep, FitOptions,
    TurbulenceRecipe,
};
use crate::oracles::{
    couette_h0_identity, couette_inviscid_evolve_sampled, dsigma_h3_norm,
    exact_family_lower_bound, exact_family_vorticity, heat_semigroup, CouetteModal,
    ExactFamilyParams, PlaneField, PlaneGrid, SeriesNorm,
};
use crate::recipes::{band_vorticity, random_smooth_vorticity, rough_vorticity};
use crate::solver::{
    diagnostics, read_checkpoint, run, sin_x2_vorticity, write_checkpoint, Reynolds,
    SimulationState, SolverConfig, Trajectory,
};
use crate::spectral::velocity_from_vorticity;
use crate::tangent::{amplification_curve, remainder_experiment, BaseFlow, BaseTrajectory};
use crate::theorem::{divergence_scan, TailSpectrumSpec};

#[derive(Parser, Debug)]
#[command(name = "roughdep", version, about = "Perturbation growth in 2D Euler/Navier-Stokes")]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    /// TOML configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    /// Seed for every random field of the run.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Configuration override; repeatable. Values are TOML literals, bare
    /// words are taken as strings.
    #[arg(long = "override", value_name = "KEY=VALUE", global = true)]
    pub overrides: Vec<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Integrate the vorticity equation and write checkpoints.
    Simulate,
    /// Amplification curves (and optional remainder table) of a perturbation.
    Tangent,
    /// Truncation scan of the translation-family derivative norm.
    TheoremScan,
    /// Evaluate a closed-form oracle.
    Oracle {
        #[arg(value_enum)]
        name: OracleName,
    },
    /// Amplification against Reynolds number with a power-law fit.
    SweepRe,
    /// Fit a growth law to two columns of a CSV file.
    Fit {
        /// CSV input (overrides `input` in the configuration).
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, value_enum)]
        model: Option<FitModel>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleName {
    Trivial,
    Couette,
    ExactFamily,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum FitModel {
    SqrtExp,
    Exp,
    Power,
    #[default]
    Compare,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitialKind {
    #[default]
    Random,
    SinX2,
    ExactFamily,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimulateConfig {
    pub k_max: usize,
    /// `0` or `inf` selects the Euler equations.
    pub reynolds: f64,
    pub dt: f64,
    pub t_end: f64,
    pub seed: u64,
    pub initial: InitialKind,
    pub peak_wavenumber: f64,
    pub u_rms: f64,
    pub checkpoint_interval: usize,
    pub dealias: bool,
    /// Exact-family parameters.
    pub gamma: f64,
    pub sigma: f64,
    pub n_trunc: Option<usize>,
}

impl Default for SimulateConfig {
    fn default() -> Self {
        SimulateConfig {
            k_max: 32,
            reynolds: 1000.0,
            dt: 1e-3,
            t_end: 1.0,
            seed: 0,
            initial: InitialKind::Random,
            peak_wavenumber: 4.0,
            u_rms: 1.0,
            checkpoint_interval: 100,
            dealias: true,
            gamma: 1.0,
            sigma: 0.5,
            n_trunc: None,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BaseKind {
    #[default]
    Trivial,
    Random,
    Trajectory,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TangentConfig {
    pub k_max: usize,
    pub reynolds: f64,
    pub dt: f64,
    pub t_end: f64,
    pub seed: u64,
    pub base: BaseKind,
    /// Directory of checkpoints written by `simulate` (for `base = "trajectory"`).
    pub base_path: Option<PathBuf>,
    pub peak_wavenumber: f64,
    pub u_rms: f64,
    pub perturbation_cutoff: f64,
    /// Replaces the flat band with the rough profile `(1+|k|²)^{−decay/2}`.
    pub perturbation_decay: Option<f64>,
    pub norm_indices: Vec<u32>,
    /// Number of equal intervals between sample times.
    pub samples: usize,
    /// Increments of the remainder experiment; empty skips it.
    pub remainder_eps: Vec<f64>,
    pub remainder_norm: u32,
}

impl Default for TangentConfig {
    fn default() -> Self {
        TangentConfig {
            k_max: 32,
            reynolds: 1000.0,
            dt: 5e-3,
            t_end: 1.0,
            seed: 0,
            base: BaseKind::Trivial,
            base_path: None,
            peak_wavenumber: 4.0,
            u_rms: 1.0,
            perturbation_cutoff: 8.0,
            perturbation_decay: None,
            norm_indices: vec![0, 3],
            samples: 20,
            remainder_eps: Vec::new(),
            remainder_norm: 3,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectrumKind {
    #[default]
    Borderline,
    Convergent,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TheoremScanConfig {
    pub n: u32,
    pub t: f64,
    pub k_list: Vec<usize>,
    pub spectrum: SpectrumKind,
    /// Overrides the decay exponent implied by `spectrum`.
    pub decay: Option<f64>,
    pub amplitude: f64,
    pub seed: u64,
}

impl Default for TheoremScanConfig {
    fn default() -> Self {
        TheoremScanConfig {
            n: 3,
            t: 1.0,
            k_list: vec![16, 32, 64, 128],
            spectrum: SpectrumKind::Borderline,
            decay: None,
            amplitude: 1.0,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TrivialOracleConfig {
    pub k_max: usize,
    pub reynolds: f64,
    pub dt: f64,
    pub times: Vec<f64>,
    pub perturbation_cutoff: f64,
    pub seed: u64,
}

impl Default for TrivialOracleConfig {
    fn default() -> Self {
        TrivialOracleConfig {
            k_max: 16,
            reynolds: 100.0,
            dt: 1e-2,
            times: vec![0.0, 0.5, 1.0, 2.0],
            perturbation_cutoff: 8.0,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CouetteOracleConfig {
    pub t_min: f64,
    pub t_max: f64,
    pub samples: usize,
    pub k_list: Vec<u32>,
    pub n1: usize,
    pub n2: usize,
    pub half_width: f64,
    /// Finite values add the viscous `H⁰` identity column.
    pub reynolds: f64,
    pub xi_max: f64,
    pub xi_count: usize,
}

impl Default for CouetteOracleConfig {
    fn default() -> Self {
        CouetteOracleConfig {
            t_min: 5.0,
            t_max: 50.0,
            samples: 46,
            k_list: vec![1, 2],
            n1: 8,
            n2: 1024,
            half_width: 8.0,
            reynolds: 0.0,
            xi_max: 20.0,
            xi_count: 401,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExactFamilyOracleConfig {
    pub gammas: Vec<f64>,
    pub times: Vec<f64>,
    pub reynolds_list: Vec<f64>,
}

impl Default for ExactFamilyOracleConfig {
    fn default() -> Self {
        ExactFamilyOracleConfig {
            gammas: vec![0.6, 0.75, 1.0],
            times: vec![0.25, 0.5, 1.0],
            reynolds_list: vec![1e2, 1e3, 1e4],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    pub re_list: Vec<f64>,
    pub recipe: TurbulenceRecipe,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            re_list: vec![250.0, 500.0, 1000.0, 2000.0],
            recipe: TurbulenceRecipe::default(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FitConfig {
    pub input: Option<PathBuf>,
    pub model: FitModel,
    /// Defaults to the first column.
    pub x_column: Option<String>,
    /// Defaults to the second column.
    pub y_column: Option<String>,
    pub anchor: bool,
}

/// Reads the configuration file, applies `--seed` under `seed_key`, then
/// the overrides, and deserializes.
pub fn resolve_config<T: DeserializeOwned>(
    common: &CommonArgs,
    seed_key: Option<&str>,
    extra: &[(String, toml::Value)],
) -> Result<T> {
    let mut table = match &common.config {
        Some(p) => {
            let text = fs::read_to_string(p)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", p.display())))?;
            text.parse::<toml::Table>()
                .map_err(|e| Error::Config(format!("{}: {e}", p.display())))?
        }
        None => toml::Table::new(),
    };
    if let (Some(seed), Some(key)) = (common.seed, seed_key) {
        insert_dotted(&mut table, key, toml::Value::Integer(seed as i64))?;
    }
    for (k, v) in extra {
        insert_dotted(&mut table, k, v.clone())?;
    }
    for ov in &common.overrides {
        let (k, v) = ov
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("override '{ov}' is not key=value")))?;
        insert_dotted(&mut table, k.trim(), parse_value(v.trim()))?;
    }
    T::deserialize(toml::Value::Table(table)).map_err(|e| Error::Config(e.to_string()))
}

fn parse_value(text: &str) -> toml::Value {
    format!("v = {text}")
        .parse::<toml::Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(text.to_string()))
}

fn insert_dotted(table: &mut toml::Table, key: &str, value: toml::Value) -> Result<()> {
    let mut parts: Vec<&str> = key.split('.').collect();
    let last = parts.pop().unwrap();
    let mut cur = table;
    for p in parts {
        let entry = cur
            .entry(p.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()));
        cur = entry
            .as_table_mut()
            .ok_or_else(|| Error::Config(format!("key '{p}' is not a table")))?;
    }
    cur.insert(last.to_string(), value);
    Ok(())
}

fn write_manifest<T: Serialize>(out: &Path, command: &str, config: &T) -> Result<()> {
    fs::create_dir_all(out)?;
    let body = toml::to_string(config).map_err(|e| Error::Config(e.to_string()))?;
    fs::write(
        out.join("manifest.toml"),
        format!("# roughdep {command}\n{body}"),
    )?;
    Ok(())
}

fn create(out: &Path, name: &str) -> Result<BufWriter<fs::File>> {
    Ok(BufWriter::new(fs::File::create(out.join(name))?))
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Numerical { .. } => 3,
        Error::Io(_) => 1,
        _ => 2,
    }
}

pub fn execute(cli: &Cli) -> Result<()> {
    let common = &cli.common;
    let out = &common.out;
    match &cli.command {
        Command::Simulate => {
            let cfg: SimulateConfig = resolve_config(common, Some("seed"), &[])?;
            write_manifest(out, "simulate", &cfg)?;
            cmd_simulate(&cfg, out)
        }
        Command::Tangent => {
            let cfg: TangentConfig = resolve_config(common, Some("seed"), &[])?;
            write_manifest(out, "tangent", &cfg)?;
            cmd_tangent(&cfg, out)
        }
        Command::TheoremScan => {
            let cfg: TheoremScanConfig = resolve_config(common, Some("seed"), &[])?;
            write_manifest(out, "theorem-scan", &cfg)?;
            cmd_theorem_scan(&cfg, out)
        }
        Command::Oracle { name } => match name {
            OracleName::Trivial => {
                let cfg: TrivialOracleConfig = resolve_config(common, Some("seed"), &[])?;
                write_manifest(out, "oracle trivial", &cfg)?;
                cmd_oracle_trivial(&cfg, out)
            }
            OracleName::Couette => {
                let cfg: CouetteOracleConfig = resolve_config(common, None, &[])?;
                write_manifest(out, "oracle couette", &cfg)?;
                cmd_oracle_couette(&cfg, out)
            }
            OracleName::ExactFamily => {
                let cfg: ExactFamilyOracleConfig = resolve_config(common, None, &[])?;
                write_manifest(out, "oracle exact-family", &cfg)?;
                cmd_oracle_exact_family(&cfg, out)
            }
        },
        Command::SweepRe => {
            let cfg: SweepConfig = resolve_config(common, Some("recipe.seed"), &[])?;
            write_manifest(out, "sweep-re", &cfg)?;
            cmd_sweep_re(&cfg, out)
        }
        Command::Fit { input, model } => {
            let mut extra = Vec::new();
            if let Some(p) = input {
                extra.push((
                    "input".to_string(),
                    toml::Value::String(p.display().to_string()),
                ));
            }
            if let Some(m) = model {
                let v = toml::Value::try_from(m).map_err(|e| Error::Config(e.to_string()))?;
                extra.push(("model".to_string(), v));
            }
            let cfg: FitConfig = resolve_config(common, None, &extra)?;
            write_manifest(out, "fit", &cfg)?;
            cmd_fit(&cfg, out)
        }
    }
}

fn checkpoint_name(index: usize) -> String {
    format!("ckpt_{index:06}.rdf")
}

pub fn cmd_simulate(cfg: &SimulateConfig, out: &Path) -> Result<()> {
    let re = Reynolds::from_f64(cfg.reynolds);
    let mut solver_cfg = SolverConfig::new(cfg.k_max, re, cfg.dt, cfg.t_end);
    solver_cfg.dealias = cfg.dealias;
    solver_cfg.checkpoint_interval = cfg.checkpoint_interval;
    let mut family = None;
    let omega0 = match cfg.initial {
        InitialKind::Random => {
            random_smooth_vorticity(cfg.k_max, cfg.seed, cfg.peak_wavenumber, cfg.u_rms)
        }
        InitialKind::SinX2 => sin_x2_vorticity(cfg.k_max),
        InitialKind::ExactFamily => {
            let p = ExactFamilyParams::new(
                cfg.gamma,
                cfg.sigma,
                re,
                cfg.n_trunc.unwrap_or(cfg.k_max),
            )?;
            solver_cfg.mean_flow = [0.0, p.sigma];
            family = Some(p);
            exact_family_vorticity(&p, 0.0, cfg.k_max)?
        }
    };
    let traj = run(&solver_cfg, &omega0)?;
    let dir = out.join("checkpoints");
    fs::create_dir_all(&dir)?;
    for (i, s) in traj.checkpoints.iter().enumerate() {
        let mut w = create(&dir, &checkpoint_name(i))?;
        write_checkpoint(&mut w, s, re)?;
        w.flush()?;
    }
    let mut w = create(out, "diagnostics.csv")?;
    write!(w, "t,step,energy,enstrophy,palinstrophy,u_H0,u_H1,u_H2,u_H3,u_H4")?;
    if family.is_some() {
        write!(w, ",oracle_max_error")?;
    }
    writeln!(w)?;
    for s in &traj.checkpoints {
        let d = diagnostics(s, solver_cfg.mean_flow)?;
        write!(
            w,
            "{:?},{},{:?},{:?},{:?}",
            s.t, s.step_count, d.energy, d.enstrophy, d.palinstrophy
        )?;
        for v in d.velocity_norms {
            write!(w, ",{v:?}")?;
        }
        if let Some(p) = &family {
            let exact = exact_family_vorticity(p, s.t, cfg.k_max)?;
            write!(w, ",{:?}", s.omega.max_abs_diff(&exact)?)?;
        }
        writeln!(w)?;
    }
    w.flush()?;
    Ok(())
}

/// Loads every `*.rdf` file of `dir` in name order.
pub fn load_trajectory(dir: &Path, config: SolverConfig) -> Result<Trajectory> {
    let entries = fs::read_dir(dir)
        .map_err(|e| Error::Config(format!("base trajectory {}: {e}", dir.display())))?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "rdf"))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(Error::Config(format!(
            "no checkpoints in {}",
            dir.display()
        )));
    }
    let mut checkpoints: Vec<SimulationState> = Vec::with_capacity(paths.len());
    for p in &paths {
        let (s, _) = read_checkpoint(std::io::BufReader::new(fs::File::open(p)?))?;
        checkpoints.push(s);
    }
    Ok(Trajectory {
        config,
        checkpoints,
    })
}

pub fn cmd_tangent(cfg: &TangentConfig, out: &Path) -> Result<()> {
    let re = Reynolds::from_f64(cfg.reynolds);
    let solver_cfg = SolverConfig::new(cfg.k_max, re, cfg.dt, cfg.t_end);
    let (base, t_start) = match cfg.base {
        BaseKind::Trivial => (BaseFlow::Trivial, 0.0),
        BaseKind::Random => (
            BaseFlow::Coupled {
                id: format!("smooth-seed{}", cfg.seed),
                omega0: random_smooth_vorticity(
                    cfg.k_max,
                    cfg.seed,
                    cfg.peak_wavenumber,
                    cfg.u_rms,
                ),
            },
            0.0,
        ),
        BaseKind::Trajectory => {
            let path = cfg.base_path.as_ref().ok_or_else(|| {
                Error::Config("base = \"trajectory\" needs base_path".into())
            })?;
            let traj = load_trajectory(path, solver_cfg.clone())?;
            let k = traj.checkpoints[0].omega.k_max();
            if k != cfg.k_max {
                return Err(Error::Config(format!(
                    "base trajectory has K={k} but k_max = {}",
                    cfg.k_max
                )));
            }
            let b = BaseTrajectory::new(path.display().to_string(), traj)?;
            let start = b.span().0;
            (BaseFlow::Stored(Arc::new(b)), start)
        }
    };
    if cfg.samples == 0 {
        return Err(Error::Config("samples must be positive".into()));
    }
    let pseed = cfg.seed ^ 0x5eed;
    let dw0 = match cfg.perturbation_decay {
        Some(d) => rough_vorticity(cfg.k_max, pseed, d, cfg.perturbation_cutoff),
        None => band_vorticity(cfg.k_max, pseed, cfg.perturbation_cutoff),
    };
    let times: Vec<f64> = (0..=cfg.samples)
        .map(|i| t_start + (cfg.t_end - t_start) * i as f64 / cfg.samples as f64)
        .collect();
    let rec = amplification_curve(&base, &solver_cfg, &dw0, &cfg.norm_indices, &times)?;
    let mut w = create(out, "growth.csv")?;
    rec.write_csv(&mut w)?;
    w.flush()?;
    if !cfg.remainder_eps.is_empty() {
        let tab = remainder_experiment(
            &base,
            &solver_cfg,
            &dw0,
            &cfg.remainder_eps,
            cfg.t_end,
            cfg.remainder_norm,
        )?;
        let mut w = create(out, "remainder.csv")?;
        tab.write_csv(&mut w)?;
        w.flush()?;
    }
    Ok(())
}

pub fn cmd_theorem_scan(cfg: &TheoremScanConfig, out: &Path) -> Result<()> {
    let mut spec = match cfg.spectrum {
        SpectrumKind::Borderline => TailSpectrumSpec::borderline(cfg.n, cfg.seed),
        SpectrumKind::Convergent => TailSpectrumSpec::convergent(cfg.n, cfg.seed),
    };
    if let Some(d) = cfg.decay {
        spec.decay = d;
    }
    spec.amplitude = cfg.amplitude;
    let rows = divergence_scan(&spec, cfg.n, cfg.t, &cfg.k_list)?;
    let mut w = create(out, "scan.csv")?;
    writeln!(w, "K,norm_total,norm_sq_increment_per_lnK")?;
    for r in rows {
        let inc = r
            .norm_sq_increment_per_ln_k
            .map(|v| format!("{v:?}"))
            .unwrap_or_default();
        writeln!(w, "{},{:?},{}", r.k_max, r.norm_total, inc)?;
    }
    w.flush()?;
    Ok(())
}

pub fn cmd_oracle_trivial(cfg: &TrivialOracleConfig, out: &Path) -> Result<()> {
    let re = Reynolds::from_f64(cfg.reynolds);
    let solver_cfg = SolverConfig::new(cfg.k_max, re, cfg.dt, 0.0);
    let dw0 = band_vorticity(cfg.k_max, cfg.seed, cfg.perturbation_cutoff);
    let u0 = velocity_from_vorticity(&dw0, None)?.sobolev_norm(0);
    let mut rows = Vec::new();
    crate::tangent::evolve_perturbation(&BaseFlow::Trivial, &solver_cfg, &dw0, &cfg.times, |t, _, dw| {
        let exact = heat_semigroup(&dw0, t, re);
        let l_solver = velocity_from_vorticity(dw, None)?.sobolev_norm(0) / u0;
        let l_oracle = velocity_from_vorticity(&exact, None)?.sobolev_norm(0) / u0;
        rows.push((t, l_solver, l_oracle, dw.max_abs_diff(&exact)?));
        Ok(())
    })?;
    let mut w = create(out, "trivial.csv")?;
    writeln!(w, "t,lambda0_solver,lambda0_oracle,max_coeff_error")?;
    for (t, a, b, e) in rows {
        writeln!(w, "{t:?},{a:?},{b:?},{e:?}")?;
    }
    w.flush()?;
    Ok(())
}

/// Initial condition of the Couette oracle, `sin x₁ e^{−x₂²}`.
pub fn couette_initial(x1: f64, x2: f64) -> f64 {
    x1.sin() * (-x2 * x2).exp()
}

pub fn cmd_oracle_couette(cfg: &CouetteOracleConfig, out: &Path) -> Result<()> {
    let grid = PlaneGrid::new(cfg.n1, cfg.n2, cfg.half_width)?;
    if cfg.samples < 2 || !(cfg.t_max > cfg.t_min) {
        return Err(Error::Config("need samples >= 2 and t_max > t_min".into()));
    }
    let f0 = PlaneField::from_fn(grid, couette_initial);
    let times: Vec<f64> = (0..cfg.samples)
        .map(|i| cfg.t_min + (cfg.t_max - cfg.t_min) * i as f64 / (cfg.samples - 1) as f64)
        .collect();
    let re = Reynolds::from_f64(cfg.reynolds);
    let modals = if re.is_infinite() {
        None
    } else {
        let m = CouetteModal::from_spectrum(1, cfg.xi_max, cfg.xi_count, |xi| {
            num_complex::Complex64::new(0.0, -0.5) * (-xi * xi / 4.0).exp()
                / (2.0 * std::f64::consts::PI.sqrt())
        })?;
        Some(vec![m.conjugate(), m])
    };
    let mut norms: Vec<Vec<f64>> = vec![Vec::new(); cfg.k_list.len()];
    let mut w = create(out, "couette.csv")?;
    write!(w, "t")?;
    for k in &cfg.k_list {
        write!(w, ",H{k}")?;
    }
    if modals.is_some() {
        write!(w, ",H0_viscous")?;
    }
    writeln!(w)?;
    for &t in &times {
        let ft = couette_inviscid_evolve_sampled(&f0, t);
        write!(w, "{t:?}")?;
        for (i, &k) in cfg.k_list.iter().enumerate() {
            let v = ft.sobolev_norm(k);
            norms[i].push(v);
            write!(w, ",{v:?}")?;
        }
        if let Some(m) = &modals {
            write!(w, ",{:?}", couette_h0_identity(m, t, re).sqrt())?;
        }
        writeln!(w)?;
    }
    w.flush()?;
    let mut w = create(out, "couette_fit.csv")?;
    writeln!(w, "k,fitted_exponent,expected_exponent")?;
    for (i, &k) in cfg.k_list.iter().enumerate() {
        let pts: Vec<(f64, f64)> = times.iter().copied().zip(norms[i].iter().copied()).collect();
        let fit = fit_power(&pts)?;
        writeln!(w, "{k},{:?},{k}", fit.rate())?;
    }
    w.flush()?;
    Ok(())
}

pub fn cmd_oracle_exact_family(cfg: &ExactFamilyOracleConfig, out: &Path) -> Result<()> {
    let mut w = create(out, "exact_family.csv")?;
    writeln!(
        w,
        "gamma,t,Re,dsigma_h3_norm,remainder_bound,lower_bound,margin"
    )?;
    for &gamma in &cfg.gammas {
        for &t in &cfg.times {
            for &re in &cfg.reynolds_list {
                let re = Reynolds::from_f64(re);
                let p = ExactFamilyParams::new(gamma, 0.0, re, 1)?;
                let norm = dsigma_h3_norm(&p, t)?;
                let bound = match re {
                    Reynolds::Finite(_) => exact_family_lower_bound(gamma, t, re)?,
                    Reynolds::Infinite => f64::INFINITY,
                };
                let (v, r) = match norm {
                    SeriesNorm::Finite {
                        value,
                        remainder_bound,
                    } => (value, remainder_bound),
                    SeriesNorm::Divergent => (f64::INFINITY, 0.0),
                };
                let margin = if v.is_infinite() { f64::INFINITY } else { v - bound };
                writeln!(
                    w,
                    "{gamma:?},{t:?},{:?},{v:?},{r:?},{bound:?},{margin:?}",
                    re.value()
                )?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

pub fn cmd_sweep_re(cfg: &SweepConfig, out: &Path) -> Result<()> {
    let recipe = &cfg.recipe;
    let res = reynolds_sweep(&cfg.re_list, |re| recipe.amplification(re))?;
    let mut w = create(out, "sweep.csv")?;
    res.write_csv(&mut w)?;
    w.flush()?;
    fs::write(out.join("fit.json"), res.fit.to_json())?;
    println!("{}", res.fit.to_json());
    Ok(())
}

/// Two numeric columns of a CSV file with a header row.
pub fn read_columns(path: &Path, x: Option<&str>, y: Option<&str>) -> Result<Vec<(f64, f64)>> {
    let mut rdr = csv::Reader::from_path(path)
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    let headers = rdr
        .headers()
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?
        .clone();
    let find = |name: Option<&str>, default: usize| -> Result<usize> {
        match name {
            Some(n) => headers
                .iter()
                .position(|h| h == n)
                .ok_or_else(|| Error::Config(format!("no column '{n}' in {}", path.display()))),
            None if default < headers.len() => Ok(default),
            None => Err(Error::Config(format!(
                "{} has fewer than two columns",
                path.display()
            ))),
        }
    };
    let (ix, iy) = (find(x, 0)?, find(y, 1)?);
    let mut pts = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| Error::Config(e.to_string()))?;
        let parse = |i: usize| -> Result<f64> {
            rec.get(i)
                .unwrap_or("")
                .trim()
                .parse::<f64>()
                .map_err(|e| Error::Config(format!("row {}: {e}", line + 2)))
        };
        pts.push((parse(ix)?, parse(iy)?));
    }
    if pts.is_empty() {
        return Err(Error::Config(format!("{} has no data rows", path.display())));
    }
    Ok(pts)
}

pub fn cmd_fit(cfg: &FitConfig, out: &Path) -> Result<()> {
    let input = cfg
        .input
        .as_ref()
        .ok_or_else(|| Error::Config("no input CSV given".into()))?;
    let pts = read_columns(input, cfg.x_column.as_deref(), cfg.y_column.as_deref())?;
    let opts = FitOptions { anchor: cfg.anchor };
    let json = match cfg.model {
        FitModel::SqrtExp => fit_sqrt_exponential(&pts, opts)?.to_json(),
        FitModel::Exp => fit_exponential(&pts, opts)?.to_json(),
        FitModel::Power => fit_power(&pts)?.to_json(),
        FitModel::Compare => serde_json::to_string_pretty(&compare_models(&pts, opts)?)
            .expect("comparisons serialize"),
    };
    fs::write(out.join("fit.json"), &json)?;
    println!("{json}");
    Ok(())
}
