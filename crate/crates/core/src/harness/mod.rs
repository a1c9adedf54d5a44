//! Monte-Carlo experiments comparing movable antennas against a
//! fixed-position uniform linear array.
//!
//! Trial `i` of an experiment uses seed `trial_seed(base_seed, i)` (see
//! [`crate::rng`]), so every sweep point sees the same channel draws and
//! results do not depend on execution order. Trials run in parallel and are
//! collected by index.

pub mod config;
pub mod output;

use rayon::prelude::*;

use crate::channel::ChannelRealization;
use crate::channel::{channel_correlation, channel_vector, sample_path_set, AntennaLayout, PathSet, Position};
use crate::error::{Error, Result};
use crate::optimizer1d::{initialize_linear_layout, optimize_linear};
use crate::optimizer2d::{initialize_layout, optimize_positions};
use crate::rng::{split_seed, trial_seed, STREAM_BOB, STREAM_EVE, STREAM_LAYOUT};
use crate::security::{secrecy_rate_simulated, SecureDesign};

pub use config::{Axis, ExperimentConfig, OptimizerKind, PhysicalParams, PowerScale, Sweep};

/// Uniform linear array on the x-axis, spacing `λ/2`, centred on the origin.
/// The region is the smallest square that holds it with a `λ/4` margin.
pub fn fpa_baseline_layout(n: usize, wavelength: f64) -> Result<AntennaLayout> {
    if n == 0 {
        return Err(Error::InvalidArgument("need at least one antenna".into()));
    }
    let spacing = wavelength / 2.0;
    let centre = (n as f64 - 1.0) / 2.0;
    let positions = (0..n)
        .map(|i| Position::new((i as f64 - centre) * spacing, 0.0))
        .collect();
    AntennaLayout::new(positions, n as f64 * spacing, spacing)
}

/// Outcome of one transmission scheme on one channel draw.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeOutcome {
    /// `‖h_b‖²`.
    pub channel_power: f64,
    /// Minimum MRT power `P_T*`, reported even when it exceeds the budget.
    pub signal_power: f64,
    pub feasible: bool,
    /// Zero when infeasible: the transmission fails.
    pub rate: f64,
    pub correlation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub seed: u64,
    pub ma_positions: Vec<[f64; 2]>,
    pub ma: SchemeOutcome,
    pub fpa: SchemeOutcome,
    /// Outer iterations (gradient) or sweeps (BSUM) used by the optimizer.
    pub iterations: usize,
    /// Single transmit antenna: no null space, no artificial noise.
    pub an_disabled: bool,
}

/// Bob's and Eve's path sets for a trial seed.
pub fn trial_paths(cfg: &ExperimentConfig, seed: u64) -> Result<(PathSet, PathSet)> {
    let lambda = cfg.wavelength_m;
    let b = sample_path_set(split_seed(seed, STREAM_BOB), cfg.l_b, cfg.path_loss_db, lambda)?;
    let e = sample_path_set(split_seed(seed, STREAM_EVE), cfg.l_e, cfg.path_loss_db, lambda)?;
    Ok((b, e))
}

/// Optimized MA layout for Bob's channel with the configured optimizer.
pub fn optimize_ma_layout(
    cfg: &ExperimentConfig,
    params: &PhysicalParams,
    paths_b: &PathSet,
    seed: u64,
) -> Result<(AntennaLayout, usize)> {
    let layout_seed = split_seed(seed, STREAM_LAYOUT);
    match cfg.optimizer {
        OptimizerKind::Gradient2d => {
            let init = initialize_layout(layout_seed, cfg.n, params.region_size, params.min_distance)?;
            let trace = optimize_positions(paths_b, &init, &cfg.gradient_config())?;
            Ok((trace.layout, trace.iterations))
        }
        OptimizerKind::Bsum1d => {
            let init = initialize_linear_layout(layout_seed, cfg.n, params.region_size, params.min_distance)?;
            let trace = optimize_linear(paths_b, &init, cfg.bsum_max_sweeps, cfg.bsum_tol)?;
            Ok((trace.layout.to_layout()?, trace.sweeps))
        }
    }
}

fn evaluate_scheme(
    params: &PhysicalParams,
    paths_b: &PathSet,
    paths_e: &PathSet,
    layout: &AntennaLayout,
) -> Result<(SchemeOutcome, bool)> {
    let realization = ChannelRealization {
        h_b: channel_vector(paths_b, layout.positions()),
        h_e: channel_vector(paths_e, layout.positions()),
        noise_power_b: params.noise_power_b,
        noise_power_e: params.noise_power_e,
    };
    let channel_power = realization.h_b.norm_squared();
    let correlation = channel_correlation(&realization.h_b, &realization.h_e)?;
    let signal_power = params.target_snr * params.noise_power_b / channel_power;
    match SecureDesign::build(
        &realization.h_b,
        params.target_snr,
        params.total_power,
        params.noise_power_b,
    ) {
        Ok(design) => {
            let rate = secrecy_rate_simulated(&realization, &design)?;
            Ok((
                SchemeOutcome {
                    channel_power,
                    signal_power: design.signal_power,
                    feasible: true,
                    rate,
                    correlation,
                },
                design.an_disabled,
            ))
        }
        Err(Error::Infeasible { .. }) => Ok((
            SchemeOutcome {
                channel_power,
                signal_power,
                feasible: false,
                rate: 0.0,
                correlation,
            },
            layout.len() < 2,
        )),
        Err(e) => Err(e),
    }
}

/// One channel draw: optimize the MA layout, then design and score both the
/// MA and the FPA schemes on the same path sets. Infeasibility is recorded,
/// not returned as an error.
pub fn run_trial(cfg: &ExperimentConfig, seed: u64) -> Result<TrialRecord> {
    let params = cfg.physical()?;
    let (paths_b, paths_e) = trial_paths(cfg, seed)?;
    let (ma_layout, iterations) = optimize_ma_layout(cfg, &params, &paths_b, seed)?;
    let fpa_layout = fpa_baseline_layout(cfg.n, params.wavelength)?;
    let (ma, an_disabled) = evaluate_scheme(&params, &paths_b, &paths_e, &ma_layout)?;
    let (fpa, _) = evaluate_scheme(&params, &paths_b, &paths_e, &fpa_layout)?;
    Ok(TrialRecord {
        seed,
        ma_positions: ma_layout.positions().iter().map(|p| [p.x, p.y]).collect(),
        ma,
        fpa,
        iterations,
        an_disabled,
    })
}

/// Run `cfg.trials` trials at a single point, in parallel, ordered by index.
pub fn run_trials(cfg: &ExperimentConfig) -> Result<Vec<TrialRecord>> {
    (0..cfg.trials as u64)
        .into_par_iter()
        .map(|i| run_trial(cfg, trial_seed(cfg.base_seed, i)))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SummaryRow {
    pub axis_value: f64,
    pub ma_mean: f64,
    pub ma_std: f64,
    pub fpa_mean: f64,
    pub fpa_std: f64,
    /// Fraction of trials where the MA scheme cannot meet the SNR target.
    pub infeasible_frac: f64,
}

/// Mean and sample standard deviation (zero for a single value).
pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

pub fn summarize(axis_value: f64, trials: &[TrialRecord]) -> SummaryRow {
    let ma: Vec<f64> = trials.iter().map(|t| t.ma.rate).collect();
    let fpa: Vec<f64> = trials.iter().map(|t| t.fpa.rate).collect();
    let (ma_mean, ma_std) = mean_std(&ma);
    let (fpa_mean, fpa_std) = mean_std(&fpa);
    let infeasible = trials.iter().filter(|t| !t.ma.feasible).count();
    SummaryRow {
        axis_value,
        ma_mean,
        ma_std,
        fpa_mean,
        fpa_std,
        infeasible_frac: infeasible as f64 / trials.len() as f64,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub axis_value: f64,
    pub trials: Vec<TrialRecord>,
    pub summary: SummaryRow,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub axis: Axis,
    pub points: Vec<SweepPoint>,
}

impl SweepResult {
    pub fn rows(&self) -> Vec<SummaryRow> {
        self.points.iter().map(|p| p.summary).collect()
    }
}

/// Run every value of `axis` (the configured list, or the default grid
/// when the config holds a single value).
pub fn sweep(cfg: &ExperimentConfig, axis: Axis) -> Result<SweepResult> {
    cfg.validate()?;
    let points = cfg
        .axis_values(axis)
        .into_iter()
        .map(|v| {
            let trials = run_trials(&cfg.at(axis, v))?;
            let summary = summarize(v, &trials);
            Ok(SweepPoint {
                axis_value: v,
                trials,
                summary,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult { axis, points })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceTrace {
    pub seed: u64,
    pub a_over_lambda: f64,
    /// `‖h_b‖²` at the initial layout and after each outer iteration.
    pub objective: Vec<f64>,
    pub converged: bool,
}

impl ConvergenceTrace {
    /// First iteration whose objective is within `frac` of the final value.
    pub fn iterations_to_within(&self, frac: f64) -> usize {
        let last = *self.objective.last().unwrap();
        self.objective
            .iter()
            .position(|&v| v >= last * (1.0 - frac))
            .unwrap_or(self.objective.len() - 1)
    }
}

/// Gradient-ascent traces for every trial seed and every configured region
/// size.
pub fn convergence_report(cfg: &ExperimentConfig) -> Result<Vec<ConvergenceTrace>> {
    cfg.validate()?;
    if cfg.optimizer != OptimizerKind::Gradient2d {
        return Err(Error::Config("convergence report needs optimizer = gradient2d".into()));
    }
    let mut out = Vec::new();
    for a in cfg.a_over_lambda.values() {
        let point = cfg.at(Axis::RegionSize, a);
        let point = ExperimentConfig {
            gamma_db: Sweep::Single(cfg.gamma_db.values()[0]),
            ..point
        };
        let params = point.physical()?;
        let traces: Result<Vec<_>> = (0..cfg.trials as u64)
            .into_par_iter()
            .map(|i| {
                let seed = trial_seed(cfg.base_seed, i);
                let (paths_b, _) = trial_paths(&point, seed)?;
                let init = initialize_layout(
                    split_seed(seed, STREAM_LAYOUT),
                    cfg.n,
                    params.region_size,
                    params.min_distance,
                )?;
                let tr = optimize_positions(&paths_b, &init, &cfg.gradient_config())?;
                Ok(ConvergenceTrace {
                    seed,
                    a_over_lambda: a,
                    objective: tr.objective,
                    converged: tr.converged,
                })
            })
            .collect();
        out.extend(traces?);
    }
    Ok(out)
}
