use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ma_secrecy::harness::output::{fmt_float, write_sweep, write_traces};
use ma_secrecy::harness::{self, Axis, ExperimentConfig};
use ma_secrecy::optimizer2d::channel_power;
use ma_secrecy::rng::trial_seed;
use ma_secrecy::Error;

#[derive(Parser)]
#[command(
    name = "ma-secrecy",
    version,
    about = "Movable-antenna secure transmission experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// JSON experiment config; defaults are used for missing keys.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory for CSV files.
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Optimize one scenario (trial 0) and print the layout and channel powers.
    Optimize(Common),
    /// Per-iteration channel power traces of the gradient method.
    Convergence(Common),
    /// Secrecy rate versus Bob's SNR target.
    SweepGamma(Common),
    /// Secrecy rate versus region size A/λ.
    SweepRegion(Common),
}

fn load(common: &Common) -> Result<ExperimentConfig, Error> {
    match &common.config {
        Some(path) => ExperimentConfig::from_file(path),
        None => Ok(ExperimentConfig::default()),
    }
}

fn optimize(cfg: &ExperimentConfig, out: &Path) -> Result<(), Error> {
    let params = cfg.physical()?;
    let seed = trial_seed(cfg.base_seed, 0);
    let (paths_b, _) = harness::trial_paths(cfg, seed)?;
    let (layout, iterations) = harness::optimize_ma_layout(cfg, &params, &paths_b, seed)?;
    let fpa = harness::fpa_baseline_layout(cfg.n, params.wavelength)?;
    let record = harness::run_trial(cfg, seed)?;

    let mut csv = String::from("antenna,x_m,y_m\n");
    println!("seed {seed}, {iterations} iterations");
    for (n, p) in layout.positions().iter().enumerate() {
        println!("  antenna {n}: ({}, {}) m", fmt_float(p.x), fmt_float(p.y));
        csv.push_str(&format!("{n},{},{}\n", fmt_float(p.x), fmt_float(p.y)));
    }
    println!("MA  channel power  {}", fmt_float(channel_power(&paths_b, &layout)));
    println!("FPA channel power  {}", fmt_float(channel_power(&paths_b, &fpa)));
    println!(
        "MA  secrecy rate   {} bit/s/Hz{}",
        fmt_float(record.ma.rate),
        if record.ma.feasible { "" } else { " (infeasible)" }
    );
    println!(
        "FPA secrecy rate   {} bit/s/Hz{}",
        fmt_float(record.fpa.rate),
        if record.fpa.feasible { "" } else { " (infeasible)" }
    );
    std::fs::create_dir_all(out)?;
    std::fs::write(out.join("layout.csv"), csv)?;
    Ok(())
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Optimize(c) => optimize(&load(&c)?, &c.out),
        Command::Convergence(c) => {
            let traces = harness::convergence_report(&load(&c)?)?;
            write_traces(&c.out, &traces)?;
            let converged = traces.iter().filter(|t| t.converged).count();
            println!(
                "{} traces, {converged} converged; wrote {}",
                traces.len(),
                c.out.join("trace.csv").display()
            );
            Ok(())
        }
        Command::SweepGamma(c) => sweep(&load(&c)?, Axis::Gamma, &c.out),
        Command::SweepRegion(c) => sweep(&load(&c)?, Axis::RegionSize, &c.out),
    }
}

fn sweep(cfg: &ExperimentConfig, axis: Axis, out: &Path) -> Result<(), Error> {
    let result = harness::sweep(cfg, axis)?;
    write_sweep(out, &result)?;
    println!(
        "{:>14} {:>10} {:>10} {:>10}",
        axis.name(),
        "ma_mean",
        "fpa_mean",
        "infeasible"
    );
    for r in result.rows() {
        println!(
            "{:>14.3} {:>10.4} {:>10.4} {:>10.3}",
            r.axis_value, r.ma_mean, r.fpa_mean, r.infeasible_frac
        );
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Config(_) => 2,
                Error::PackingInfeasible { .. } => 3,
                _ => 1,
            })
        }
    }
}
