use serde::{Deserialize, Serialize};

use crate::db_to_linear;
use crate::error::{Error, Result};
use crate::optimizer2d::GradientConfig;

/// Default target-SNR grid (dB) for `sweep-gamma` when the config holds a
/// single value.
pub const DEFAULT_GAMMA_GRID_DB: [f64; 21] = [
    0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0, 11.0, 12.0, 13.0, 14.0, 15.0, 16.0, 17.0, 18.0, 19.0, 20.0,
];

/// Default `A/λ` grid for `sweep-region` when the config holds a single value.
pub const DEFAULT_REGION_GRID: [f64; 6] = [1.0, 2.0, 3.0, 4.0, 6.0, 8.0];

/// A scalar or a list of values. Deserializes from either a JSON number or
/// an array of numbers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Sweep {
    Single(f64),
    List(Vec<f64>),
}

impl Sweep {
    pub fn values(&self) -> Vec<f64> {
        match self {
            Sweep::Single(v) => vec![*v],
            Sweep::List(v) => v.clone(),
        }
    }

    pub fn single(&self) -> Option<f64> {
        match self {
            Sweep::Single(v) => Some(*v),
            Sweep::List(v) if v.len() == 1 => Some(v[0]),
            Sweep::List(_) => None,
        }
    }

    fn check(&self, name: &str) -> Result<()> {
        let v = self.values();
        if v.is_empty() {
            return Err(Error::Config(format!("{name} must not be empty")));
        }
        if !v.iter().all(|x| x.is_finite()) {
            return Err(Error::Config(format!("{name} must be finite")));
        }
        if !v.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::Config(format!("{name} must be sorted in increasing order")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PowerScale {
    Db,
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OptimizerKind {
    /// Per-antenna gradient ascent over the square region.
    Gradient2d,
    /// BSUM over a linear array on the x-axis.
    Bsum1d,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Gamma,
    RegionSize,
}

impl Axis {
    pub fn name(&self) -> &'static str {
        match self {
            Axis::Gamma => "gamma_db",
            Axis::RegionSize => "a_over_lambda",
        }
    }
}

/// Experiment definition. Every field has a default; unknown keys are
/// rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    /// Transmit antennas.
    pub n: usize,
    pub l_b: usize,
    pub l_e: usize,
    pub a_over_lambda: Sweep,
    pub d_over_lambda: f64,
    /// Bob's SNR target.
    pub gamma_db: Sweep,
    /// Total transmit power over Bob's noise power, measured after the
    /// large-scale path loss: `P μ_b / σ_b²`.
    pub p_over_sigma_db: f64,
    /// How `p_over_sigma_db` is read.
    pub power_ratio_scale: PowerScale,
    pub path_loss_db: f64,
    pub n0_dbm_per_hz: f64,
    /// Eve's noise density; Bob's when absent.
    pub eve_n0_dbm_per_hz: Option<f64>,
    pub bandwidth_hz: f64,
    pub wavelength_m: f64,
    pub trials: usize,
    pub base_seed: u64,
    pub optimizer: OptimizerKind,
    pub max_iterations: usize,
    pub initial_step: f64,
    pub min_step: f64,
    pub convergence_tol: f64,
    /// Sweep cap for the BSUM optimizer.
    pub bsum_max_sweeps: usize,
    pub bsum_tol: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let g = GradientConfig::default();
        Self {
            n: 4,
            l_b: 4,
            l_e: 4,
            a_over_lambda: Sweep::Single(4.0),
            d_over_lambda: 0.5,
            gamma_db: Sweep::Single(10.0),
            p_over_sigma_db: 10.0,
            power_ratio_scale: PowerScale::Db,
            path_loss_db: -110.0,
            n0_dbm_per_hz: -174.0,
            eve_n0_dbm_per_hz: None,
            bandwidth_hz: 1e6,
            wavelength_m: 0.1,
            trials: 200,
            base_seed: 1,
            optimizer: OptimizerKind::Gradient2d,
            max_iterations: g.max_iterations,
            initial_step: g.initial_step,
            min_step: g.min_step,
            convergence_tol: g.convergence_tol,
            bsum_max_sweeps: 100,
            bsum_tol: 1e-6,
        }
    }
}

/// Linear-scale quantities of one sweep point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    pub wavelength: f64,
    pub region_size: f64,
    pub min_distance: f64,
    pub path_loss: f64,
    pub noise_power_b: f64,
    pub noise_power_e: f64,
    pub total_power: f64,
    pub target_snr: f64,
}

fn dbm_to_watts(dbm: f64) -> f64 {
    db_to_linear(dbm - 30.0)
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &std::path::Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::Config(format!("{name} must be positive, got {v}")))
            }
        };
        if self.n == 0 || self.l_b == 0 || self.l_e == 0 {
            return Err(Error::Config("n, l_b and l_e must be at least 1".into()));
        }
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        self.a_over_lambda.check("a_over_lambda")?;
        self.gamma_db.check("gamma_db")?;
        for a in self.a_over_lambda.values() {
            positive("a_over_lambda", a)?;
        }
        if !(self.d_over_lambda >= 0.0 && self.d_over_lambda.is_finite()) {
            return Err(Error::Config("d_over_lambda must be non-negative".into()));
        }
        positive("bandwidth_hz", self.bandwidth_hz)?;
        positive("wavelength_m", self.wavelength_m)?;
        for (name, v) in [
            ("p_over_sigma_db", self.p_over_sigma_db),
            ("path_loss_db", self.path_loss_db),
            ("n0_dbm_per_hz", self.n0_dbm_per_hz),
        ] {
            if !v.is_finite() {
                return Err(Error::Config(format!("{name} must be finite")));
            }
        }
        if self.power_ratio_scale == PowerScale::Linear {
            positive("p_over_sigma_db (linear)", self.p_over_sigma_db)?;
        }
        if self.eve_n0_dbm_per_hz.is_some_and(|v| !v.is_finite()) {
            return Err(Error::Config("eve_n0_dbm_per_hz must be finite".into()));
        }
        self.gradient_config()
            .validate()
            .map_err(|e| Error::Config(e.to_string()))?;
        if self.bsum_max_sweeps == 0 {
            return Err(Error::Config("bsum_max_sweeps must be at least 1".into()));
        }
        positive("bsum_tol", self.bsum_tol)?;
        Ok(())
    }

    pub fn gradient_config(&self) -> GradientConfig {
        GradientConfig {
            max_iterations: self.max_iterations,
            initial_step: self.initial_step,
            min_step: self.min_step,
            convergence_tol: self.convergence_tol,
        }
    }

    /// Copy of the config with `axis` pinned to `value`.
    pub fn at(&self, axis: Axis, value: f64) -> Self {
        let mut c = self.clone();
        match axis {
            Axis::Gamma => c.gamma_db = Sweep::Single(value),
            Axis::RegionSize => c.a_over_lambda = Sweep::Single(value),
        }
        c
    }

    /// Values of `axis`, falling back to the default grid when the config
    /// holds a single value.
    pub fn axis_values(&self, axis: Axis) -> Vec<f64> {
        let (sweep, grid): (&Sweep, &[f64]) = match axis {
            Axis::Gamma => (&self.gamma_db, &DEFAULT_GAMMA_GRID_DB),
            Axis::RegionSize => (&self.a_over_lambda, &DEFAULT_REGION_GRID),
        };
        match sweep {
            Sweep::Single(_) => grid.to_vec(),
            Sweep::List(v) => v.clone(),
        }
    }

    fn power_ratio(&self) -> f64 {
        match self.power_ratio_scale {
            PowerScale::Db => db_to_linear(self.p_over_sigma_db),
            PowerScale::Linear => self.p_over_sigma_db,
        }
    }

    /// Linear quantities; both sweep axes must hold a single value.
    pub fn physical(&self) -> Result<PhysicalParams> {
        let a = self
            .a_over_lambda
            .single()
            .ok_or_else(|| Error::Config("a_over_lambda must be a single value here".into()))?;
        let gamma_db = self
            .gamma_db
            .single()
            .ok_or_else(|| Error::Config("gamma_db must be a single value here".into()))?;
        let lambda = self.wavelength_m;
        let path_loss = db_to_linear(self.path_loss_db);
        let noise_power_b = dbm_to_watts(self.n0_dbm_per_hz) * self.bandwidth_hz;
        let noise_power_e = dbm_to_watts(self.eve_n0_dbm_per_hz.unwrap_or(self.n0_dbm_per_hz)) * self.bandwidth_hz;
        Ok(PhysicalParams {
            wavelength: lambda,
            region_size: a * lambda,
            min_distance: self.d_over_lambda * lambda,
            path_loss,
            noise_power_b,
            noise_power_e,
            total_power: self.power_ratio() * noise_power_b / path_loss,
            target_snr: db_to_linear(gamma_db),
        })
    }
}
