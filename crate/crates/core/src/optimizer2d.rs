//! Channel-power maximization over a square region by per-antenna gradient
//! ascent with step-halving line search.
//!
//! For antenna `n` the block objective is `f_n(t) = |h_b(t)|²`, which
//! expands over ordered path pairs `ℓ ≠ ℓ'` as
//!
//! ```text
//! f_n(t) = (μ/L) [ Σ_ℓ |σ_ℓ|² + Σ_{ℓ≠ℓ'} |σ_ℓ σ_ℓ'| cos(k tᵀΔρ + Δθ) ]
//! Δρ = ρ_ℓ − ρ_ℓ',   Δθ = ∠σ_ℓ' − ∠σ_ℓ,   k = 2π/λ
//! ```
//!
//! The line search works on a scale-free copy of the gradient (objective
//! divided by `μ`, positions measured in wavelengths), so the step sizes in
//! [`GradientConfig`] do not depend on path loss or carrier frequency.

use nalgebra::Vector2;
use rand::Rng;

use crate::channel::{evaluate_channel, AntennaLayout, PathSet, Position};
use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

/// Total number of candidate draws [`initialize_layout`] makes before giving up.
pub const MAX_PLACEMENT_DRAWS: usize = 100_000;

/// Consecutive rejected draws for one antenna before the partial layout is
/// discarded and placement restarts.
const RESTART_AFTER: usize = 1_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradientConfig {
    /// Outer sweeps over all antennas.
    pub max_iterations: usize,
    pub initial_step: f64,
    pub min_step: f64,
    /// Stop once a full sweep improves `‖h_b‖²` by less than this fraction.
    pub convergence_tol: f64,
}

impl Default for GradientConfig {
    fn default() -> Self {
        Self {
            max_iterations: 30,
            initial_step: 10.0,
            min_step: 1e-3,
            convergence_tol: 1e-6,
        }
    }
}

impl GradientConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_iterations == 0 {
            return Err(Error::InvalidArgument("max_iterations must be at least 1".into()));
        }
        if !(self.min_step > 0.0 && self.min_step < self.initial_step && self.initial_step.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "need 0 < min_step < initial_step, got {} and {}",
                self.min_step, self.initial_step
            )));
        }
        if !(self.convergence_tol > 0.0) {
            return Err(Error::InvalidArgument("convergence_tol must be positive".into()));
        }
        Ok(())
    }
}

/// Result of [`optimize_positions`].
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationTrace {
    /// `‖h_b‖²` at the initial layout followed by its value after each sweep.
    pub objective: Vec<f64>,
    pub layout: AntennaLayout,
    pub iterations: usize,
    pub converged: bool,
}

impl OptimizationTrace {
    pub fn final_objective(&self) -> f64 {
        *self.objective.last().expect("trace holds the initial objective")
    }

    /// First sweep index whose objective is within `frac` of the final value.
    pub fn iterations_to_within(&self, frac: f64) -> usize {
        let target = self.final_objective() * (1.0 - frac);
        self.objective
            .iter()
            .position(|&v| v >= target)
            .unwrap_or(self.objective.len() - 1)
    }
}

/// `‖h_b‖² = Σ_n |h_b(t_n)|²`.
pub fn channel_power(paths_b: &PathSet, layout: &AntennaLayout) -> f64 {
    positions_power(paths_b, layout.positions())
}

pub(crate) fn positions_power(paths_b: &PathSet, positions: &[Position]) -> f64 {
    positions.iter().map(|t| evaluate_channel(paths_b, t).norm_sqr()).sum()
}

/// Gradient of `|h_b(t)|²/μ` with respect to `t/λ`.
fn scaled_gradient(paths_b: &PathSet, t: &Position) -> Vector2<f64> {
    let k = paths_b.wavenumber();
    let gains = paths_b.gains();
    let dirs = paths_b.directions();
    let l = gains.len();
    let mut g = Vector2::zeros();
    for a in 0..l {
        for b in 0..l {
            if a == b {
                continue;
            }
            let drho = dirs[a].0 - dirs[b].0;
            let weight = gains[a].norm() * gains[b].norm();
            let dtheta = gains[b].arg() - gains[a].arg();
            g -= drho * (weight * (k * t.dot(&drho) + dtheta).sin());
        }
    }
    g * (2.0 * std::f64::consts::PI / l as f64)
}

/// Gradient `∇_t |h_b(t)|²` in W/m (physical units).
pub fn objective_gradient(paths_b: &PathSet, t: &Position) -> Vector2<f64> {
    scaled_gradient(paths_b, t) * (paths_b.path_loss() / paths_b.wavelength())
}

/// Whether antenna `n` may sit at `t`: inside the square and `D` away from
/// every other antenna of `layout`. The boundary `‖t − t_n'‖ = D` is allowed.
pub fn feasible(t: &Position, layout: &AntennaLayout, n: usize) -> bool {
    layout.in_region(t) && layout.separated_from_others(t, Some(n))
}

/// Uniform random layout of `n` antennas in the `A × A` square with
/// pairwise distance at least `D`, by sequential rejection sampling.
pub fn initialize_layout(seed: u64, n: usize, region_size: f64, min_distance: f64) -> Result<AntennaLayout> {
    if n == 0 {
        return Err(Error::InvalidArgument("need at least one antenna".into()));
    }
    if !(region_size > 0.0 && region_size.is_finite() && min_distance >= 0.0 && min_distance.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "bad region size {region_size} or minimum distance {min_distance}"
        )));
    }
    let mut rng = rng_from_seed(seed);
    let half = region_size / 2.0;
    let mut placed: Vec<Position> = Vec::with_capacity(n);
    let mut draws = 0;
    let mut misses = 0;
    while placed.len() < n {
        if draws >= MAX_PLACEMENT_DRAWS {
            return Err(Error::PackingInfeasible {
                antennas: n,
                region_size,
                min_distance,
                attempts: draws,
            });
        }
        draws += 1;
        let t = Position::new(rng.random_range(-half..=half), rng.random_range(-half..=half));
        if placed.iter().all(|p| (t - p).norm() >= min_distance) {
            placed.push(t);
            misses = 0;
        } else {
            misses += 1;
            if misses >= RESTART_AFTER {
                placed.clear();
                misses = 0;
            }
        }
    }
    AntennaLayout::new(placed, region_size, min_distance)
}

/// Maximize `‖h_b‖²` over the layout, cycling through antennas.
pub fn optimize_positions(
    paths_b: &PathSet,
    initial: &AntennaLayout,
    cfg: &GradientConfig,
) -> Result<OptimizationTrace> {
    optimize_positions_observed(paths_b, initial, cfg, |_, _| {})
}

/// Same as [`optimize_positions`], calling `observer(layout, antenna)` after
/// every accepted single-antenna move.
pub fn optimize_positions_observed<F>(
    paths_b: &PathSet,
    initial: &AntennaLayout,
    cfg: &GradientConfig,
    mut observer: F,
) -> Result<OptimizationTrace>
where
    F: FnMut(&AntennaLayout, usize),
{
    cfg.validate()?;
    initial.validate()?;
    let lambda = paths_b.wavelength();
    let mut layout = initial.clone();
    let mut objective = vec![channel_power(paths_b, &layout)];
    let mut converged = false;
    let mut iterations = 0;

    while iterations < cfg.max_iterations {
        for n in 0..layout.len() {
            let current = layout.positions()[n];
            let g = scaled_gradient(paths_b, &current);
            if g.norm_squared() == 0.0 {
                continue;
            }
            let f_current = evaluate_channel(paths_b, &current).norm_sqr();
            let mut u = cfg.initial_step;
            loop {
                let candidate = current + g * (u * lambda);
                u /= 2.0;
                if feasible(&candidate, &layout, n) && evaluate_channel(paths_b, &candidate).norm_sqr() > f_current {
                    layout.set_position(n, candidate);
                    observer(&layout, n);
                    break;
                }
                if u < cfg.min_step {
                    break;
                }
            }
        }
        iterations += 1;
        let prev = *objective.last().unwrap();
        let now = channel_power(paths_b, &layout);
        objective.push(now);
        if now - prev <= cfg.convergence_tol * prev.abs() {
            converged = true;
            break;
        }
    }

    Ok(OptimizationTrace {
        objective,
        layout,
        iterations,
        converged,
    })
}
