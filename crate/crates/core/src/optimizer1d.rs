//! Linear-array position design by block successive upper-bound
//! minimization.
//!
//! With antennas on the x-axis, the block objective for antenna `n` is
//!
//! ```text
//! F(x) = Σ_{ℓ≠ℓ'} |σ_ℓ σ_ℓ'| cos(ρ_ℓℓ' x + θ_ℓℓ'),   ρ_ℓℓ' = k (sin θ_ℓ cos φ_ℓ − sin θ_ℓ' cos φ_ℓ')
//! ```
//!
//! up to the constant `Σ|σ_ℓ|²` and the factor `μ/L`. Each sweep minimizes
//! `−F(x) = Σ w sin(ρ x + θ − π/2)` blockwise: every sine term is replaced
//! by its convex quadratic majorizer at the current position and the
//! resulting 1-D quadratic is minimized exactly over the feasible set.
//! The channel power therefore never decreases between sweeps.

use std::f64::consts::FRAC_PI_2;

use crate::channel::{AntennaLayout, PathSet, Position, SEPARATION_RTOL};
use crate::error::{Error, Result};
use crate::optimizer2d::positions_power;

/// Below this |ρ| a surrogate is treated as constant.
const FLAT_RHO: f64 = 1e-12;

/// `a (x − b)² + c`, a quadratic upper bound of `sin(ρx + θ)` that is
/// tangent at the expansion point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticSurrogate {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl QuadraticSurrogate {
    pub fn value(&self, x: f64) -> f64 {
        self.a * (x - self.b).powi(2) + self.c
    }

    pub fn derivative(&self, x: f64) -> f64 {
        2.0 * self.a * (x - self.b)
    }
}

/// Majorizer of `sin(ρx + θ)` at `x0` with curvature `ρ²/2`:
/// `sin(y0) + ρ cos(y0)(x − x0) + (ρ²/2)(x − x0)²`, `y0 = ρx0 + θ`.
pub fn build_surrogate(rho: f64, theta: f64, x0: f64) -> QuadraticSurrogate {
    let y0 = rho * x0 + theta;
    let (s, c) = y0.sin_cos();
    if rho.abs() < FLAT_RHO {
        return QuadraticSurrogate { a: 0.0, b: x0, c: s };
    }
    QuadraticSurrogate {
        a: 0.5 * rho * rho,
        b: x0 - c / rho,
        c: s - 0.5 * c * c,
    }
}

/// `q2 x² + q1 x + q0`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct QuadraticSum {
    pub q2: f64,
    pub q1: f64,
    pub q0: f64,
}

impl QuadraticSum {
    /// Accumulate `weight · surrogate`.
    pub fn add(&mut self, weight: f64, s: &QuadraticSurrogate) {
        self.q2 += weight * s.a;
        self.q1 -= weight * 2.0 * s.a * s.b;
        self.q0 += weight * (s.a * s.b * s.b + s.c);
    }

    pub fn value(&self, x: f64) -> f64 {
        (self.q2 * x + self.q1) * x + self.q0
    }
}

/// The interval `[lo, hi]` with the open balls `(c − r, c + r)` around each
/// center removed.
#[derive(Debug, Clone, PartialEq)]
pub struct FeasibleSet {
    pub lo: f64,
    pub hi: f64,
    pub centers: Vec<f64>,
    pub radius: f64,
}

impl FeasibleSet {
    pub fn contains(&self, x: f64) -> bool {
        let r = self.radius * (1.0 - SEPARATION_RTOL);
        x >= self.lo && x <= self.hi && self.centers.iter().all(|c| (x - c).abs() >= r)
    }
}

/// Global minimizer of `q` over `set`. Candidates are the vertex (when the
/// quadratic is convex and the vertex is feasible), the box ends and the
/// ends of every exclusion interval; ties go to the smallest `x`.
pub fn minimize_quadratic_1d(q: &QuadraticSum, set: &FeasibleSet) -> Result<f64> {
    let mut candidates = vec![set.lo, set.hi];
    if q.q2 > 0.0 {
        candidates.push(-q.q1 / (2.0 * q.q2));
    }
    for &c in &set.centers {
        candidates.push(c - set.radius);
        candidates.push(c + set.radius);
    }
    candidates.retain(|&x| x.is_finite() && set.contains(x));
    candidates.sort_by(f64::total_cmp);
    let mut best: Option<(f64, f64)> = None;
    for x in candidates {
        let v = q.value(x);
        if best.is_none_or(|(_, bv)| v < bv) {
            best = Some((x, v));
        }
    }
    best.map(|(x, _)| x)
        .ok_or_else(|| Error::ConstraintViolation("feasible set is empty".into()))
}

/// Antenna x-coordinates on a line segment `[-A/2, A/2]`, pairwise at
/// least `D` apart.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearLayout {
    xs: Vec<f64>,
    region_size: f64,
    min_distance: f64,
}

impl LinearLayout {
    pub fn new(xs: Vec<f64>, region_size: f64, min_distance: f64) -> Result<Self> {
        if xs.is_empty() {
            return Err(Error::InvalidArgument("layout needs at least one antenna".into()));
        }
        if !(region_size > 0.0 && min_distance >= 0.0) {
            return Err(Error::InvalidArgument(
                "region size must be positive and distance non-negative".into(),
            ));
        }
        let layout = Self {
            xs,
            region_size,
            min_distance,
        };
        layout.validate()?;
        Ok(layout)
    }

    pub fn new_unchecked(xs: Vec<f64>, region_size: f64, min_distance: f64) -> Self {
        Self {
            xs,
            region_size,
            min_distance,
        }
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn region_size(&self) -> f64 {
        self.region_size
    }

    pub fn min_distance(&self) -> f64 {
        self.min_distance
    }

    pub fn validate(&self) -> Result<()> {
        let half = self.region_size / 2.0;
        for (n, &x) in self.xs.iter().enumerate() {
            if !(x.is_finite() && x.abs() <= half) {
                return Err(Error::ConstraintViolation(format!(
                    "antenna {n} at x = {x} is outside the segment"
                )));
            }
            for (m, &y) in self.xs.iter().enumerate().skip(n + 1) {
                if (x - y).abs() < self.min_distance * (1.0 - SEPARATION_RTOL) {
                    return Err(Error::ConstraintViolation(format!(
                        "antennas {n} and {m} are {} apart, minimum is {}",
                        (x - y).abs(),
                        self.min_distance
                    )));
                }
            }
        }
        Ok(())
    }

    /// Feasible set for antenna `n` given all others.
    pub fn block_set(&self, n: usize) -> FeasibleSet {
        let half = self.region_size / 2.0;
        FeasibleSet {
            lo: -half,
            hi: half,
            centers: self
                .xs
                .iter()
                .enumerate()
                .filter(|(m, _)| *m != n)
                .map(|(_, &x)| x)
                .collect(),
            radius: self.min_distance,
        }
    }

    pub fn positions(&self) -> Vec<Position> {
        self.xs.iter().map(|&x| Position::new(x, 0.0)).collect()
    }

    /// The same antennas as a 2-D layout in the `A × A` square.
    pub fn to_layout(&self) -> Result<AntennaLayout> {
        AntennaLayout::new(self.positions(), self.region_size, self.min_distance)
    }
}

/// `‖h_b‖²` for antennas at `[x_n, 0]ᵀ`.
pub fn linear_channel_power(paths_b: &PathSet, layout: &LinearLayout) -> f64 {
    positions_power(paths_b, &layout.positions())
}

/// One cosine term `w cos(ρ x + θ)` of the block objective.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairTerm {
    pub weight: f64,
    pub rho: f64,
    pub theta: f64,
}

/// Ordered-pair terms of the linear-array block objective.
pub fn pair_terms(paths_b: &PathSet) -> Vec<PairTerm> {
    let k = paths_b.wavenumber();
    let g = paths_b.gains();
    let dirs = paths_b.directions();
    let mut out = Vec::with_capacity(g.len() * g.len().saturating_sub(1));
    for a in 0..g.len() {
        for b in 0..g.len() {
            if a != b {
                out.push(PairTerm {
                    weight: g[a].norm() * g[b].norm(),
                    rho: k * (dirs[a].x() - dirs[b].x()),
                    theta: g[b].arg() - g[a].arg(),
                });
            }
        }
    }
    out
}

/// The reduced block objective `Σ w cos(ρx + θ)` (constant dropped, not
/// scaled by `μ/L`).
pub fn reduced_objective(terms: &[PairTerm], x: f64) -> f64 {
    terms.iter().map(|t| t.weight * (t.rho * x + t.theta).cos()).sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearTrace {
    pub layout: LinearLayout,
    /// `‖h_b‖²` before the first sweep and after each sweep.
    pub objective: Vec<f64>,
    pub sweeps: usize,
    pub converged: bool,
}

impl LinearTrace {
    pub fn final_objective(&self) -> f64 {
        *self.objective.last().expect("trace holds the initial objective")
    }
}

fn block_step(terms: &[PairTerm], layout: &LinearLayout, n: usize) -> Result<Option<f64>> {
    let x0 = layout.xs[n];
    let mut q = QuadraticSum::default();
    for t in terms {
        // −cos(y) = sin(y − π/2)
        q.add(t.weight, &build_surrogate(t.rho, t.theta - FRAC_PI_2, x0));
    }
    let x = minimize_quadratic_1d(&q, &layout.block_set(n))?;
    if q.value(x) < q.value(x0) && reduced_objective(terms, x) >= reduced_objective(terms, x0) {
        Ok(Some(x))
    } else {
        Ok(None)
    }
}

/// Maximize `‖h_b‖²` over a linear array by BSUM sweeps.
pub fn optimize_linear(paths_b: &PathSet, initial: &LinearLayout, max_outer: usize, tol: f64) -> Result<LinearTrace> {
    optimize_linear_observed(paths_b, initial, max_outer, tol, |_| {})
}

/// [`optimize_linear`] with a callback after every block update that moved.
pub fn optimize_linear_observed<F>(
    paths_b: &PathSet,
    initial: &LinearLayout,
    max_outer: usize,
    tol: f64,
    mut observer: F,
) -> Result<LinearTrace>
where
    F: FnMut(&LinearLayout),
{
    if max_outer == 0 {
        return Err(Error::InvalidArgument("need at least one sweep".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    initial.validate()?;
    let terms = pair_terms(paths_b);
    let mut layout = initial.clone();
    let mut objective = vec![linear_channel_power(paths_b, &layout)];
    let mut sweeps = 0;
    let mut converged = false;
    while sweeps < max_outer {
        for n in 0..layout.len() {
            if let Some(x) = block_step(&terms, &layout, n)? {
                layout.xs[n] = x;
                observer(&layout);
            }
        }
        sweeps += 1;
        let prev = *objective.last().unwrap();
        let now = linear_channel_power(paths_b, &layout);
        objective.push(now);
        if now - prev <= tol * prev.abs() {
            converged = true;
            break;
        }
    }
    Ok(LinearTrace {
        layout,
        objective,
        sweeps,
        converged,
    })
}

/// Random linear layout by sequential rejection sampling on the segment.
pub fn initialize_linear_layout(seed: u64, n: usize, region_size: f64, min_distance: f64) -> Result<LinearLayout> {
    use rand::Rng;
    if n == 0 {
        return Err(Error::InvalidArgument("need at least one antenna".into()));
    }
    let mut rng = crate::rng::rng_from_seed(seed);
    let half = region_size / 2.0;
    let mut xs: Vec<f64> = Vec::with_capacity(n);
    let mut draws = 0;
    let mut misses = 0;
    while xs.len() < n {
        if draws >= crate::optimizer2d::MAX_PLACEMENT_DRAWS {
            return Err(Error::PackingInfeasible {
                antennas: n,
                region_size,
                min_distance,
                attempts: draws,
            });
        }
        draws += 1;
        let x = rng.random_range(-half..=half);
        if xs.iter().all(|y| (x - y).abs() >= min_distance) {
            xs.push(x);
            misses = 0;
        } else {
            misses += 1;
            if misses >= 1_000 {
                xs.clear();
                misses = 0;
            }
        }
    }
    LinearLayout::new(xs, region_size, min_distance)
}
