//! CSV writers. Floats use 12 significant digits.

use std::fmt::Write as _;
use std::path::Path;

use super::{ConvergenceTrace, SweepResult, TrialRecord};
use crate::error::Result;

/// Format with 12 significant digits, `%g` style: fixed notation for
/// decimal exponents in `[-5, 12)`, scientific otherwise, trailing zeros
/// removed.
pub fn fmt_float(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

pub const TRIALS_HEADER: &str = "axis_value,trial,seed,ma_feasible,fpa_feasible,ma_channel_power,fpa_channel_power,\
ma_signal_power,fpa_signal_power,ma_rate,fpa_rate,ma_correlation,fpa_correlation,iterations,an_disabled,ma_positions";

pub const SUMMARY_HEADER: &str = "axis_value,ma_mean,ma_std,fpa_mean,fpa_std,infeasible_frac";

pub const TRACE_HEADER: &str = "seed,iteration,objective";

fn positions_field(r: &TrialRecord) -> String {
    r.ma_positions
        .iter()
        .map(|p| format!("{} {}", fmt_float(p[0]), fmt_float(p[1])))
        .collect::<Vec<_>>()
        .join(";")
}

pub fn trial_row(axis_value: f64, index: usize, r: &TrialRecord) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
        fmt_float(axis_value),
        index,
        r.seed,
        r.ma.feasible as u8,
        r.fpa.feasible as u8,
        fmt_float(r.ma.channel_power),
        fmt_float(r.fpa.channel_power),
        fmt_float(r.ma.signal_power),
        fmt_float(r.fpa.signal_power),
        fmt_float(r.ma.rate),
        fmt_float(r.fpa.rate),
        fmt_float(r.ma.correlation),
        fmt_float(r.fpa.correlation),
        r.iterations,
        r.an_disabled as u8,
        positions_field(r),
    )
}

pub fn trials_csv(result: &SweepResult) -> String {
    let mut s = String::new();
    writeln!(s, "{TRIALS_HEADER}").unwrap();
    for point in &result.points {
        for (i, r) in point.trials.iter().enumerate() {
            writeln!(s, "{}", trial_row(point.axis_value, i, r)).unwrap();
        }
    }
    s
}

pub fn summary_csv(result: &SweepResult) -> String {
    let mut s = String::new();
    writeln!(s, "{SUMMARY_HEADER}").unwrap();
    for p in &result.points {
        let r = &p.summary;
        writeln!(
            s,
            "{},{},{},{},{},{}",
            fmt_float(r.axis_value),
            fmt_float(r.ma_mean),
            fmt_float(r.ma_std),
            fmt_float(r.fpa_mean),
            fmt_float(r.fpa_std),
            fmt_float(r.infeasible_frac)
        )
        .unwrap();
    }
    s
}

pub fn trace_csv(traces: &[ConvergenceTrace]) -> String {
    let mut s = String::new();
    writeln!(s, "{TRACE_HEADER}").unwrap();
    for t in traces {
        for (i, v) in t.objective.iter().enumerate() {
            writeln!(s, "{},{},{}", t.seed, i, fmt_float(*v)).unwrap();
        }
    }
    s
}

/// Write `trials.csv` and `summary.csv` into `dir`.
pub fn write_sweep(dir: &Path, result: &SweepResult) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join("trials.csv"), trials_csv(result))?;
    std::fs::write(dir.join("summary.csv"), summary_csv(result))?;
    Ok(())
}

pub fn write_traces(dir: &Path, traces: &[ConvergenceTrace]) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join("trace.csv"), trace_csv(traces))?;
    Ok(())
}
