//! C ABI over `ma-secrecy`.
//!
//! Every fallible function returns a [`MasStatus`]; on failure a message is
//! available from [`mas_last_error_message`] on the same thread. Objects
//! created by the library are opaque handles released with the matching
//! `*_free` function. Interleaved arrays hold `x0, y0, x1, y1, …` for
//! positions and `re0, im0, re1, im1, …` for complex vectors.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ma_secrecy::channel::{evaluate_channel, sample_path_set, AntennaLayout, PathSet, Position};
use ma_secrecy::harness::{self, Axis, ExperimentConfig, SweepResult};
use ma_secrecy::nalgebra::DVector;
use ma_secrecy::optimizer2d::{channel_power, optimize_positions, GradientConfig};
use ma_secrecy::rng::trial_seed;
use ma_secrecy::security::secrecy_rate_closed_form;
use ma_secrecy::{Error, C64};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MasStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ConstraintViolation = 3,
    DegenerateInput = 4,
    NoNullSpace = 5,
    Infeasible = 6,
    PackingInfeasible = 7,
    Config = 8,
    Io = 9,
    Panic = 10,
}

impl From<&Error> for MasStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::InvalidArgument(_) => MasStatus::InvalidArgument,
            Error::ConstraintViolation(_) => MasStatus::ConstraintViolation,
            Error::DegenerateInput(_) => MasStatus::DegenerateInput,
            Error::NoNullSpace => MasStatus::NoNullSpace,
            Error::Infeasible { .. } => MasStatus::Infeasible,
            Error::PackingInfeasible { .. } => MasStatus::PackingInfeasible,
            Error::Config(_) => MasStatus::Config,
            Error::Io(_) => MasStatus::Io,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MasAxis {
    Gamma = 0,
    RegionSize = 1,
}

/// Opaque experiment configuration.
pub struct MasConfig(ExperimentConfig);

/// Opaque multipath description.
pub struct MasPathSet(PathSet);

/// Opaque sweep result.
pub struct MasSweep(SweepResult);

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct MasTrialSummary {
    pub seed: u64,
    pub ma_channel_power: f64,
    pub fpa_channel_power: f64,
    pub ma_signal_power: f64,
    pub fpa_signal_power: f64,
    pub ma_rate: f64,
    pub fpa_rate: f64,
    pub ma_correlation: f64,
    pub fpa_correlation: f64,
    pub ma_feasible: bool,
    pub fpa_feasible: bool,
    pub an_disabled: bool,
    pub iterations: u32,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct MasSummaryRow {
    pub axis_value: f64,
    pub ma_mean: f64,
    pub ma_std: f64,
    pub fpa_mean: f64,
    pub fpa_std: f64,
    pub infeasible_frac: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct MasGradientConfig {
    pub max_iterations: u32,
    pub initial_step: f64,
    pub min_step: f64,
    pub convergence_tol: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn guard<F>(f: F) -> MasStatus
where
    F: FnOnce() -> Result<(), MasStatus>,
{
    set_last_error("");
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => MasStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => {
            set_last_error("panic inside ma-secrecy");
            MasStatus::Panic
        }
    }
}

fn fail(e: Error) -> MasStatus {
    set_last_error(&e.to_string());
    MasStatus::from(&e)
}

fn null(what: &str) -> MasStatus {
    set_last_error(&format!("{what} is null"));
    MasStatus::NullPointer
}

unsafe fn as_ref<'a, T>(p: *const T, what: &str) -> Result<&'a T, MasStatus> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn as_mut<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, MasStatus> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn slice<'a>(p: *const f64, len: usize, what: &str) -> Result<&'a [f64], MasStatus> {
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

fn complex_vec(interleaved: &[f64]) -> DVector<C64> {
    DVector::from_iterator(
        interleaved.len() / 2,
        interleaved.chunks_exact(2).map(|c| C64::new(c[0], c[1])),
    )
}

/// Message of the last failed call on this thread; empty after success.
/// The pointer stays valid until the next library call on this thread.
#[no_mangle]
pub extern "C" fn mas_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Configuration with every field at its default.
#[no_mangle]
pub extern "C" fn mas_config_default() -> *mut MasConfig {
    Box::into_raw(Box::new(MasConfig(ExperimentConfig::default())))
}

/// Parse a JSON configuration.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mas_config_from_json(json: *const c_char, out: *mut *mut MasConfig) -> MasStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        let out = as_mut(out, "out")?;
        *out = ptr::null_mut();
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|e| fail(Error::Config(format!("config is not UTF-8: {e}"))))?;
        let cfg = ExperimentConfig::from_json(text).map_err(fail)?;
        *out = Box::into_raw(Box::new(MasConfig(cfg)));
        Ok(())
    })
}

/// # Safety
/// `cfg` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn mas_config_free(cfg: *mut MasConfig) {
    if !cfg.is_null() {
        drop(Box::from_raw(cfg));
    }
}

/// Run trial `trial_index` of the configured experiment.
///
/// # Safety
/// `cfg` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn mas_run_trial(
    cfg: *const MasConfig,
    trial_index: u64,
    out: *mut MasTrialSummary,
) -> MasStatus {
    guard(|| {
        let cfg = &as_ref(cfg, "cfg")?.0;
        let out = as_mut(out, "out")?;
        let r = harness::run_trial(cfg, trial_seed(cfg.base_seed, trial_index)).map_err(fail)?;
        *out = MasTrialSummary {
            seed: r.seed,
            ma_channel_power: r.ma.channel_power,
            fpa_channel_power: r.fpa.channel_power,
            ma_signal_power: r.ma.signal_power,
            fpa_signal_power: r.fpa.signal_power,
            ma_rate: r.ma.rate,
            fpa_rate: r.fpa.rate,
            ma_correlation: r.ma.correlation,
            fpa_correlation: r.fpa.correlation,
            ma_feasible: r.ma.feasible,
            fpa_feasible: r.fpa.feasible,
            an_disabled: r.an_disabled,
            iterations: r.iterations as u32,
        };
        Ok(())
    })
}

/// Run a sweep over `axis`.
///
/// # Safety
/// `cfg` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn mas_sweep(cfg: *const MasConfig, axis: MasAxis, out: *mut *mut MasSweep) -> MasStatus {
    guard(|| {
        let cfg = &as_ref(cfg, "cfg")?.0;
        let out = as_mut(out, "out")?;
        *out = ptr::null_mut();
        let axis = match axis {
            MasAxis::Gamma => Axis::Gamma,
            MasAxis::RegionSize => Axis::RegionSize,
        };
        let result = harness::sweep(cfg, axis).map_err(fail)?;
        *out = Box::into_raw(Box::new(MasSweep(result)));
        Ok(())
    })
}

/// Number of summary rows; zero for a null handle.
///
/// # Safety
/// `sweep` must be null or a valid handle.
#[no_mangle]
pub unsafe extern "C" fn mas_sweep_len(sweep: *const MasSweep) -> usize {
    sweep.as_ref().map_or(0, |s| s.0.points.len())
}

/// # Safety
/// `sweep` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn mas_sweep_row(sweep: *const MasSweep, index: usize, out: *mut MasSummaryRow) -> MasStatus {
    guard(|| {
        let sweep = &as_ref(sweep, "sweep")?.0;
        let out = as_mut(out, "out")?;
        let p = sweep.points.get(index).ok_or_else(|| {
            fail(Error::InvalidArgument(format!(
                "row {index} out of range ({} rows)",
                sweep.points.len()
            )))
        })?;
        let r = p.summary;
        *out = MasSummaryRow {
            axis_value: r.axis_value,
            ma_mean: r.ma_mean,
            ma_std: r.ma_std,
            fpa_mean: r.fpa_mean,
            fpa_std: r.fpa_std,
            infeasible_frac: r.infeasible_frac,
        };
        Ok(())
    })
}

/// # Safety
/// `sweep` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn mas_sweep_free(sweep: *mut MasSweep) {
    if !sweep.is_null() {
        drop(Box::from_raw(sweep));
    }
}

/// Draw a random path set.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mas_path_set_sample(
    seed: u64,
    num_paths: usize,
    path_loss_db: f64,
    wavelength: f64,
    out: *mut *mut MasPathSet,
) -> MasStatus {
    guard(|| {
        let out = as_mut(out, "out")?;
        *out = ptr::null_mut();
        let p = sample_path_set(seed, num_paths, path_loss_db, wavelength).map_err(fail)?;
        *out = Box::into_raw(Box::new(MasPathSet(p)));
        Ok(())
    })
}

/// # Safety
/// `paths` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn mas_path_set_free(paths: *mut MasPathSet) {
    if !paths.is_null() {
        drop(Box::from_raw(paths));
    }
}

/// Channel coefficient at `(x, y)`.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mas_evaluate_channel(
    paths: *const MasPathSet,
    x: f64,
    y: f64,
    re: *mut f64,
    im: *mut f64,
) -> MasStatus {
    guard(|| {
        let paths = &as_ref(paths, "paths")?.0;
        let re = as_mut(re, "re")?;
        let im = as_mut(im, "im")?;
        let h = evaluate_channel(paths, &Position::new(x, y));
        *re = h.re;
        *im = h.im;
        Ok(())
    })
}

fn positions(xy: &[f64]) -> Vec<Position> {
    xy.chunks_exact(2).map(|c| Position::new(c[0], c[1])).collect()
}

/// `Σ_n |h(t_n)|²` for `n` interleaved positions.
///
/// # Safety
/// `xy` must hold `2 n` doubles; other pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mas_channel_power(
    paths: *const MasPathSet,
    xy: *const f64,
    n: usize,
    out: *mut f64,
) -> MasStatus {
    guard(|| {
        let paths = &as_ref(paths, "paths")?.0;
        let xy = slice(xy, 2 * n, "xy")?;
        let out = as_mut(out, "out")?;
        *out = positions(xy)
            .iter()
            .map(|t| evaluate_channel(paths, t).norm_sqr())
            .sum();
        Ok(())
    })
}

/// Gradient-ascent position optimization. `xy` holds the initial layout
/// and receives the optimized one. `cfg` may be null for defaults.
///
/// # Safety
/// `xy` must hold `2 n` writable doubles; `paths` must be valid; the
/// output pointers may be null.
#[no_mangle]
pub unsafe extern "C" fn mas_optimize_positions(
    paths: *const MasPathSet,
    xy: *mut f64,
    n: usize,
    region_size: f64,
    min_distance: f64,
    cfg: *const MasGradientConfig,
    objective_out: *mut f64,
    iterations_out: *mut u32,
) -> MasStatus {
    guard(|| {
        let paths = &as_ref(paths, "paths")?.0;
        if xy.is_null() {
            return Err(null("xy"));
        }
        let xy = std::slice::from_raw_parts_mut(xy, 2 * n);
        let gcfg = match cfg.as_ref() {
            Some(c) => GradientConfig {
                max_iterations: c.max_iterations as usize,
                initial_step: c.initial_step,
                min_step: c.min_step,
                convergence_tol: c.convergence_tol,
            },
            None => GradientConfig::default(),
        };
        let layout = AntennaLayout::new(positions(xy), region_size, min_distance).map_err(fail)?;
        let trace = optimize_positions(paths, &layout, &gcfg).map_err(fail)?;
        for (chunk, p) in xy.chunks_exact_mut(2).zip(trace.layout.positions()) {
            chunk[0] = p.x;
            chunk[1] = p.y;
        }
        if let Some(o) = objective_out.as_mut() {
            *o = channel_power(paths, &trace.layout);
        }
        if let Some(i) = iterations_out.as_mut() {
            *i = trace.iterations as u32;
        }
        Ok(())
    })
}

/// Closed-form secrecy rate for interleaved complex channels of length `n`.
/// Returns `MasStatus::Infeasible` when the SNR target exceeds the budget.
///
/// # Safety
/// `h_b` and `h_e` must hold `2 n` doubles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn mas_secrecy_rate_closed_form(
    h_b: *const f64,
    h_e: *const f64,
    n: usize,
    target_snr: f64,
    total_power: f64,
    noise_power_b: f64,
    noise_power_e: f64,
    out: *mut f64,
) -> MasStatus {
    guard(|| {
        let hb = complex_vec(slice(h_b, 2 * n, "h_b")?);
        let he = complex_vec(slice(h_e, 2 * n, "h_e")?);
        let out = as_mut(out, "out")?;
        *out =
            secrecy_rate_closed_form(&hb, &he, target_snr, total_power, noise_power_b, noise_power_e).map_err(fail)?;
        Ok(())
    })
}
