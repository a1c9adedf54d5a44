//! Field-response multipath channel model.
//!
//! A node's channel at transmit position `t` is a coherent sum of `L`
//! plane-wave paths,
//!
//! ```text
//! h(t) = Σ_ℓ sqrt(μ/L) · σ_ℓ · exp(-j (2π/λ) tᵀρ_ℓ),   ρ_ℓ = [sin θ_ℓ cos φ_ℓ, cos θ_ℓ]ᵀ
//! ```
//!
//! where `θ_ℓ, φ_ℓ` are elevation and azimuth, `σ_ℓ ~ CN(0, 1)` the
//! small-scale fading and `μ` the (linear) path loss.

use std::f64::consts::PI;

use nalgebra::{DVector, Vector2};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::rng::rng_from_seed;
use crate::{db_to_linear, C64};

/// A 2-D transmit position in meters.
pub type Position = Vector2<f64>;

/// Relative slack applied to the `‖t_n − t_n'‖ ≥ D` test so that points
/// placed exactly on the exclusion boundary survive rounding.
pub const SEPARATION_RTOL: f64 = 1e-12;

/// Direction vector `[sin θ cos φ, cos θ]ᵀ` of a single path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveVector(pub Vector2<f64>);

impl WaveVector {
    pub fn x(&self) -> f64 {
        self.0.x
    }

    pub fn y(&self) -> f64 {
        self.0.y
    }
}

pub fn wave_vector(theta: f64, phi: f64) -> WaveVector {
    WaveVector(Vector2::new(theta.sin() * phi.cos(), theta.cos()))
}

/// Multipath description of the link from the transmitter to one receiver.
#[derive(Debug, Clone, PartialEq)]
pub struct PathSet {
    elevation: Vec<f64>,
    azimuth: Vec<f64>,
    gains: Vec<C64>,
    directions: Vec<WaveVector>,
    path_loss: f64,
    wavelength: f64,
}

impl PathSet {
    /// Build a path set, checking that angles lie in `[0, π]` and that the
    /// path loss (linear) and wavelength are positive.
    pub fn new(
        elevation: Vec<f64>,
        azimuth: Vec<f64>,
        gains: Vec<C64>,
        path_loss: f64,
        wavelength: f64,
    ) -> Result<Self> {
        let l = gains.len();
        if l == 0 {
            return Err(Error::InvalidArgument("path set needs at least one path".into()));
        }
        if elevation.len() != l || azimuth.len() != l {
            return Err(Error::InvalidArgument(format!(
                "angle lists must have {l} entries (got {} elevations, {} azimuths)",
                elevation.len(),
                azimuth.len()
            )));
        }
        let in_range = |a: &f64| a.is_finite() && (0.0..=PI).contains(a);
        if !elevation.iter().all(in_range) || !azimuth.iter().all(in_range) {
            return Err(Error::InvalidArgument("path angles must lie in [0, π]".into()));
        }
        if !gains.iter().all(|g| g.re.is_finite() && g.im.is_finite()) {
            return Err(Error::InvalidArgument("path gains must be finite".into()));
        }
        if !(path_loss > 0.0 && path_loss.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "path loss must be positive, got {path_loss}"
            )));
        }
        if !(wavelength > 0.0 && wavelength.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "wavelength must be positive, got {wavelength}"
            )));
        }
        let directions = elevation
            .iter()
            .zip(&azimuth)
            .map(|(&t, &p)| wave_vector(t, p))
            .collect();
        Ok(Self {
            elevation,
            azimuth,
            gains,
            directions,
            path_loss,
            wavelength,
        })
    }

    pub fn num_paths(&self) -> usize {
        self.gains.len()
    }

    pub fn elevation(&self) -> &[f64] {
        &self.elevation
    }

    pub fn azimuth(&self) -> &[f64] {
        &self.azimuth
    }

    pub fn gains(&self) -> &[C64] {
        &self.gains
    }

    pub fn directions(&self) -> &[WaveVector] {
        &self.directions
    }

    /// Linear path loss `μ`.
    pub fn path_loss(&self) -> f64 {
        self.path_loss
    }

    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }

    /// Wavenumber `2π/λ`.
    pub fn wavenumber(&self) -> f64 {
        2.0 * PI / self.wavelength
    }

    /// Per-path amplitude scale `sqrt(μ/L)`.
    pub fn amplitude(&self) -> f64 {
        (self.path_loss / self.num_paths() as f64).sqrt()
    }

    /// `sqrt(μ/L) · Σ_ℓ |σ_ℓ|`, an upper bound on `|h(t)|` for every `t`.
    pub fn magnitude_bound(&self) -> f64 {
        self.amplitude() * self.gains.iter().map(|g| g.norm()).sum::<f64>()
    }
}

/// Draw a random path set: angles i.i.d. uniform on `[0, π]`, gains i.i.d.
/// `CN(0, 1)`. The path loss is given in dB and converted once here.
pub fn sample_path_set(seed: u64, num_paths: usize, path_loss_db: f64, wavelength: f64) -> Result<PathSet> {
    if num_paths == 0 {
        return Err(Error::InvalidArgument("number of paths must be positive".into()));
    }
    if !(wavelength > 0.0 && wavelength.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "wavelength must be positive, got {wavelength}"
        )));
    }
    if !path_loss_db.is_finite() {
        return Err(Error::InvalidArgument("path loss must be finite".into()));
    }
    let mut rng = rng_from_seed(seed);
    let mut elevation = Vec::with_capacity(num_paths);
    let mut azimuth = Vec::with_capacity(num_paths);
    let mut gains = Vec::with_capacity(num_paths);
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    for _ in 0..num_paths {
        elevation.push(rng.random_range(0.0..=PI));
        azimuth.push(rng.random_range(0.0..=PI));
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        gains.push(C64::new(scale * re, scale * im));
    }
    PathSet::new(elevation, azimuth, gains, db_to_linear(path_loss_db), wavelength)
}

/// Channel coefficient `h(t)` of `paths` at transmit position `t`.
pub fn evaluate_channel(paths: &PathSet, position: &Position) -> C64 {
    let k = paths.wavenumber();
    let sum: C64 = paths
        .gains
        .iter()
        .zip(&paths.directions)
        .map(|(g, rho)| g * C64::from_polar(1.0, -k * position.dot(&rho.0)))
        .sum();
    sum * paths.amplitude()
}

/// `N` antenna positions inside the square `[-A/2, A/2]²`, pairwise at
/// least `D` apart.
#[derive(Debug, Clone, PartialEq)]
pub struct AntennaLayout {
    positions: Vec<Position>,
    region_size: f64,
    min_distance: f64,
}

impl AntennaLayout {
    pub fn new(positions: Vec<Position>, region_size: f64, min_distance: f64) -> Result<Self> {
        if positions.is_empty() {
            return Err(Error::InvalidArgument("layout needs at least one antenna".into()));
        }
        if !(region_size > 0.0 && region_size.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "region size must be positive, got {region_size}"
            )));
        }
        if !(min_distance >= 0.0 && min_distance.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "minimum distance must be non-negative, got {min_distance}"
            )));
        }
        let layout = Self {
            positions,
            region_size,
            min_distance,
        };
        layout.validate()?;
        Ok(layout)
    }

    /// Build without checking the invariants. Only meant for tests that
    /// need deliberately infeasible layouts.
    pub fn new_unchecked(positions: Vec<Position>, region_size: f64, min_distance: f64) -> Self {
        Self {
            positions,
            region_size,
            min_distance,
        }
    }

    pub fn positions(&self) -> &[Position] {
        &self.positions
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn region_size(&self) -> f64 {
        self.region_size
    }

    pub fn min_distance(&self) -> f64 {
        self.min_distance
    }

    pub(crate) fn set_position(&mut self, n: usize, t: Position) {
        self.positions[n] = t;
    }

    pub fn in_region(&self, t: &Position) -> bool {
        let half = self.region_size / 2.0;
        t.x.is_finite() && t.y.is_finite() && t.x.abs() <= half && t.y.abs() <= half
    }

    /// Whether `t` keeps distance `D` to every antenna except `skip`.
    pub fn separated_from_others(&self, t: &Position, skip: Option<usize>) -> bool {
        let d = self.min_distance * (1.0 - SEPARATION_RTOL);
        self.positions
            .iter()
            .enumerate()
            .filter(|(m, _)| Some(*m) != skip)
            .all(|(_, p)| (t - p).norm() >= d)
    }

    /// Check region and separation constraints.
    pub fn validate(&self) -> Result<()> {
        for (n, t) in self.positions.iter().enumerate() {
            if !self.in_region(t) {
                return Err(Error::ConstraintViolation(format!(
                    "antenna {n} at ({}, {}) lies outside the {} m square",
                    t.x, t.y, self.region_size
                )));
            }
            for m in (n + 1)..self.positions.len() {
                let dist = (t - self.positions[m]).norm();
                if dist < self.min_distance * (1.0 - SEPARATION_RTOL) {
                    return Err(Error::ConstraintViolation(format!(
                        "antennas {n} and {m} are {dist} m apart, minimum is {}",
                        self.min_distance
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Bob's and Eve's channel vectors at one layout, plus receiver noise powers.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    pub h_b: DVector<C64>,
    pub h_e: DVector<C64>,
    pub noise_power_b: f64,
    pub noise_power_e: f64,
}

/// Channel vector `[h(t_1), …, h(t_N)]ᵀ` of `paths` at every antenna.
pub fn channel_vector(paths: &PathSet, positions: &[Position]) -> DVector<C64> {
    DVector::from_iterator(positions.len(), positions.iter().map(|t| evaluate_channel(paths, t)))
}

pub fn assemble_channel(
    paths_b: &PathSet,
    paths_e: &PathSet,
    layout: &AntennaLayout,
    noise_power_b: f64,
    noise_power_e: f64,
) -> Result<ChannelRealization> {
    layout.validate()?;
    if !(noise_power_b > 0.0 && noise_power_e > 0.0) {
        return Err(Error::InvalidArgument("noise powers must be positive".into()));
    }
    Ok(ChannelRealization {
        h_b: channel_vector(paths_b, layout.positions()),
        h_e: channel_vector(paths_e, layout.positions()),
        noise_power_b,
        noise_power_e,
    })
}

/// Squared normalized inner product `|h_bᴴh_e|² / (‖h_b‖²‖h_e‖²)`.
pub fn channel_correlation(h_b: &DVector<C64>, h_e: &DVector<C64>) -> Result<f64> {
    if h_b.len() != h_e.len() {
        return Err(Error::InvalidArgument(format!(
            "channel lengths differ: {} vs {}",
            h_b.len(),
            h_e.len()
        )));
    }
    let nb = h_b.norm_squared();
    let ne = h_e.norm_squared();
    if nb == 0.0 || ne == 0.0 {
        return Err(Error::DegenerateInput("channel correlation of a zero vector".into()));
    }
    let inner = h_b.dotc(h_e);
    Ok(inner.norm_sqr() / (nb * ne))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const LAMBDA: f64 = 0.1;

    #[test]
    #[allow(clippy::approx_constant)]
    fn wave_vector_cases() {
        let r = wave_vector(PI / 2.0, 0.0);
        assert!((r.x() - 1.0).abs() < 1e-15 && r.y().abs() < 1e-15);
        let r = wave_vector(0.0, 1.234);
        assert!(r.x().abs() < 1e-15 && (r.y() - 1.0).abs() < 1e-15);
        let r = wave_vector(PI / 4.0, PI / 3.0);
        assert!((r.x() - 0.353_553_390_593_273_8).abs() < 1e-12);
        assert!((r.y() - 0.707_106_781_186_547_6).abs() < 1e-12);
    }

    #[test]
    fn sample_path_set_contract() {
        let p = sample_path_set(7, 4, -110.0, LAMBDA).unwrap();
        assert_eq!(p.num_paths(), 4);
        assert!((p.path_loss() - 1e-11).abs() < 1e-24);
        let p1 = sample_path_set(7, 1, 0.0, LAMBDA).unwrap();
        assert_eq!(p1.num_paths(), 1);
        assert_eq!(p1.path_loss(), 1.0);
        assert_eq!(sample_path_set(7, 4, -110.0, LAMBDA).unwrap(), p);
        assert_ne!(sample_path_set(8, 4, -110.0, LAMBDA).unwrap(), p);
    }

    #[test]
    fn sample_path_set_rejects_bad_args() {
        assert!(matches!(
            sample_path_set(1, 0, 0.0, LAMBDA),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            sample_path_set(1, 2, 0.0, 0.0),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            sample_path_set(1, 2, 0.0, -1.0),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn gains_have_unit_variance() {
        let mut acc = 0.0;
        let mut mean = C64::new(0.0, 0.0);
        let count = 20_000;
        let p = sample_path_set(99, count, 0.0, LAMBDA).unwrap();
        for g in p.gains() {
            acc += g.norm_sqr();
            mean += g;
        }
        assert!((acc / count as f64 - 1.0).abs() < 0.03);
        assert!((mean / count as f64).norm() < 0.03);
        assert!(p.elevation().iter().chain(p.azimuth()).all(|a| (0.0..=PI).contains(a)));
    }

    #[test]
    fn evaluate_at_origin_is_scaled_gain() {
        let p = sample_path_set(3, 1, -20.0, LAMBDA).unwrap();
        let h = evaluate_channel(&p, &Position::zeros());
        let want = p.gains()[0] * 0.1;
        assert!((h - want).norm() < 1e-15);
    }

    #[test]
    fn evaluate_matches_resummation() {
        let p = sample_path_set(11, 2, -3.0, LAMBDA).unwrap();
        let t = Position::new(0.037, -0.121);
        // reverse order, explicit cos/sin, amplitude inside the sum
        let amp = (p.path_loss() / 2.0).sqrt();
        let (mut re, mut im) = (0.0, 0.0);
        for l in (0..2).rev() {
            let (th, ph) = (p.elevation()[l], p.azimuth()[l]);
            let arg = -2.0 * PI / LAMBDA * (t.x * th.sin() * ph.cos() + t.y * th.cos());
            let g = p.gains()[l];
            re += amp * (g.re * arg.cos() - g.im * arg.sin());
            im += amp * (g.re * arg.sin() + g.im * arg.cos());
        }
        let h = evaluate_channel(&p, &t);
        assert!((h.re - re).abs() < 1e-14 && (h.im - im).abs() < 1e-14);
    }

    #[test]
    fn single_path_phase_periodicity() {
        for seed in 0..20 {
            let p = sample_path_set(seed, 1, 0.0, LAMBDA).unwrap();
            let rho = p.directions()[0].0;
            if rho.norm() < 1e-3 {
                continue;
            }
            let t = Position::new(0.013, -0.07);
            // (2π/λ) Δtᵀρ = 2π  ⇔  Δt = λ ρ / ‖ρ‖²
            let shifted = t + rho * (LAMBDA / rho.norm_squared());
            let a = evaluate_channel(&p, &t);
            let b = evaluate_channel(&p, &shifted);
            assert!((a - b).norm() <= 1e-12 * a.norm().max(1e-300), "seed {seed}");
        }
    }

    #[test]
    fn assemble_cases() {
        let p = sample_path_set(5, 1, -10.0, LAMBDA).unwrap();
        let layout = AntennaLayout::new(vec![Position::zeros()], LAMBDA, LAMBDA / 2.0).unwrap();
        let r = assemble_channel(&p, &p, &layout, 1.0, 1.0).unwrap();
        assert!((r.h_b[0] - p.gains()[0] * 0.1f64.sqrt()).norm() < 1e-15);
        assert_eq!(r.h_b, r.h_e);

        let pb = sample_path_set(21, 4, -110.0, LAMBDA).unwrap();
        let pe = sample_path_set(22, 4, -110.0, LAMBDA).unwrap();
        let pos = vec![
            Position::new(-0.1, -0.1),
            Position::new(0.1, -0.1),
            Position::new(-0.1, 0.1),
            Position::new(0.1, 0.1),
        ];
        let layout = AntennaLayout::new(pos.clone(), 4.0 * LAMBDA, LAMBDA / 2.0).unwrap();
        let r = assemble_channel(&pb, &pe, &layout, 1e-14, 2e-14).unwrap();
        for (n, t) in pos.iter().enumerate() {
            assert_eq!(r.h_b[n], evaluate_channel(&pb, t));
            assert_eq!(r.h_e[n], evaluate_channel(&pe, t));
        }
    }

    #[test]
    fn assemble_rejects_infeasible_layout() {
        let p = sample_path_set(5, 2, 0.0, LAMBDA).unwrap();
        let bad = AntennaLayout::new_unchecked(vec![Position::zeros(), Position::new(0.01, 0.0)], 0.4, 0.05);
        assert!(matches!(
            assemble_channel(&p, &p, &bad, 1.0, 1.0),
            Err(Error::ConstraintViolation(_))
        ));
        let outside = AntennaLayout::new_unchecked(vec![Position::new(0.3, 0.0)], 0.4, 0.05);
        assert!(matches!(
            assemble_channel(&p, &p, &outside, 1.0, 1.0),
            Err(Error::ConstraintViolation(_))
        ));
    }

    #[test]
    fn correlation_cases() {
        let h = DVector::from_vec(vec![C64::new(1.0, 2.0), C64::new(-0.5, 0.3), C64::new(0.0, 1.0)]);
        let c = C64::new(-2.0, 0.7);
        assert!((channel_correlation(&h, &h.map(|x| x * c)).unwrap() - 1.0).abs() < 1e-14);

        let a = DVector::from_vec(vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
        let b = DVector::from_vec(vec![C64::new(0.0, 0.0), C64::new(3.0, -1.0)]);
        assert_eq!(channel_correlation(&a, &b).unwrap(), 0.0);

        let zero = DVector::from_element(2, C64::new(0.0, 0.0));
        assert!(matches!(channel_correlation(&a, &zero), Err(Error::DegenerateInput(_))));
    }

    #[test]
    fn correlation_matches_loop() {
        let pb = sample_path_set(31, 4, 0.0, LAMBDA).unwrap();
        let pe = sample_path_set(32, 4, 0.0, LAMBDA).unwrap();
        let pos: Vec<_> = (0..4)
            .map(|n| Position::new(0.06 * n as f64, -0.02 * n as f64))
            .collect();
        let hb = channel_vector(&pb, &pos);
        let he = channel_vector(&pe, &pos);
        let (mut ire, mut iim, mut nb, mut ne) = (0.0, 0.0, 0.0, 0.0);
        for n in 0..4 {
            // conj(b) * e
            ire += hb[n].re * he[n].re + hb[n].im * he[n].im;
            iim += hb[n].re * he[n].im - hb[n].im * he[n].re;
            nb += hb[n].re * hb[n].re + hb[n].im * hb[n].im;
            ne += he[n].re * he[n].re + he[n].im * he[n].im;
        }
        let want = (ire * ire + iim * iim) / (nb * ne);
        assert!((channel_correlation(&hb, &he).unwrap() - want).abs() < 1e-14);
    }

    fn cvec(n: usize) -> impl Strategy<Value = DVector<C64>> {
        proptest::collection::vec((-10.0..10.0f64, -10.0..10.0f64), n)
            .prop_map(|v| DVector::from_iterator(v.len(), v.into_iter().map(|(a, b)| C64::new(a, b))))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn correlation_in_unit_interval((a, b) in (1usize..8).prop_flat_map(|n| (cvec(n), cvec(n)))) {
            prop_assume!(a.norm() > 1e-6 && b.norm() > 1e-6);
            let r = channel_correlation(&a, &b).unwrap();
            prop_assert!((-1e-15..=1.0 + 1e-12).contains(&r));
        }
    }

    proptest! {
        #[test]
        fn magnitude_bound_holds(seed in any::<u64>(), l in 1usize..6, x in -1.0..1.0f64, y in -1.0..1.0f64) {
            let p = sample_path_set(seed, l, -30.0, LAMBDA).unwrap();
            let h = evaluate_channel(&p, &Position::new(x, y));
            prop_assert!(h.norm() <= p.magnitude_bound() * (1.0 + 1e-12));
        }

        #[test]
        fn deterministic_realization(seed in any::<u64>()) {
            let pb = sample_path_set(seed, 3, -50.0, LAMBDA).unwrap();
            let pe = sample_path_set(seed ^ 1, 3, -50.0, LAMBDA).unwrap();
            let layout = AntennaLayout::new(vec![Position::new(0.0, 0.0), Position::new(0.1, 0.0)], 0.4, 0.05).unwrap();
            let a = assemble_channel(&pb, &pe, &layout, 1.0, 1.0).unwrap();
            let b = assemble_channel(
                &sample_path_set(seed, 3, -50.0, LAMBDA).unwrap(),
                &sample_path_set(seed ^ 1, 3, -50.0, LAMBDA).unwrap(),
                &layout, 1.0, 1.0).unwrap();
            prop_assert_eq!(a, b);
        }
    }
}
