//! Joint beamforming and jamming without Eve's channel.
//!
//! Alice spends the least signal power that meets Bob's SNR target with an
//! MRT beamformer and puts everything left into isotropic artificial noise
//! confined to the null space of `h_b`:
//!
//! ```text
//! w   = sqrt(P_T) h_b / ‖h_b‖,        P_T = γ σ_b² / ‖h_b‖²
//! C   = (P − P_T)/(N − 1) · (I − h_b h_bᴴ / ‖h_b‖²)
//! γ_i = |h_iᴴ w|² / (σ_i² + h_iᴴ C h_i)
//! R_s = max(log2(1 + γ_b) − log2(1 + γ_e), 0)
//! ```

use nalgebra::{DMatrix, DVector};

use crate::channel::ChannelRealization;
use crate::error::{Error, Result};
use crate::C64;

/// Relative tolerance for the PSD check in [`snr`].
const PSD_RTOL: f64 = 1e-9;

fn nonzero_norm_sq(h: &DVector<C64>, what: &str) -> Result<f64> {
    let n2 = h.norm_squared();
    if n2 > 0.0 && n2.is_finite() {
        Ok(n2)
    } else {
        Err(Error::DegenerateInput(format!("{what} channel is zero")))
    }
}

/// `sqrt(P_T) h_b / ‖h_b‖`.
pub fn mrt_beamformer(h_b: &DVector<C64>, signal_power: f64) -> Result<DVector<C64>> {
    let n2 = nonzero_norm_sq(h_b, "Bob's")?;
    if !(signal_power >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "signal power must be non-negative, got {signal_power}"
        )));
    }
    Ok(h_b * C64::from(signal_power.sqrt() / n2.sqrt()))
}

/// Smallest MRT power meeting Bob's SNR target, `γ σ_b² / ‖h_b‖²`.
pub fn min_signal_power(h_b: &DVector<C64>, target_snr: f64, noise_power_b: f64) -> Result<f64> {
    let n2 = nonzero_norm_sq(h_b, "Bob's")?;
    if !(target_snr > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "target SNR must be positive, got {target_snr}"
        )));
    }
    if !(noise_power_b > 0.0) {
        return Err(Error::InvalidArgument("noise power must be positive".into()));
    }
    Ok(target_snr * noise_power_b / n2)
}

/// Isotropic AN covariance on the null space of `h_b` with trace
/// `residual_power`. Needs `N ≥ 2`.
pub fn an_covariance(h_b: &DVector<C64>, residual_power: f64) -> Result<DMatrix<C64>> {
    let n = h_b.len();
    if n < 2 {
        return Err(Error::NoNullSpace);
    }
    let n2 = nonzero_norm_sq(h_b, "Bob's")?;
    if !(residual_power >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "residual power must be non-negative, got {residual_power}"
        )));
    }
    let scale = residual_power / (n - 1) as f64;
    let mut c = DMatrix::from_fn(n, n, |i, j| -h_b[i] * h_b[j].conj() / n2);
    for i in 0..n {
        c[(i, i)] += C64::from(1.0);
        // exact Hermitian diagonal
        c[(i, i)].im = 0.0;
    }
    Ok(c * C64::from(scale))
}

/// `|hᴴw|² / (σ² + hᴴCh)`.
pub fn snr(h: &DVector<C64>, w: &DVector<C64>, c: &DMatrix<C64>, noise_power: f64) -> Result<f64> {
    let n = h.len();
    if w.len() != n || c.nrows() != n || c.ncols() != n {
        return Err(Error::InvalidArgument("dimension mismatch in SNR".into()));
    }
    if !(noise_power > 0.0) {
        return Err(Error::InvalidArgument("noise power must be positive".into()));
    }
    let signal = h.dotc(w).norm_sqr();
    let quad = h.dotc(&(c * h)).re;
    let scale = c.iter().map(|z| z.norm()).sum::<f64>() * h.norm_squared();
    if quad < -PSD_RTOL * scale {
        return Err(Error::InvalidArgument(format!(
            "covariance is not PSD: hᴴCh = {quad:e}"
        )));
    }
    Ok(signal / (noise_power + quad.max(0.0)))
}

/// `max(log2(1 + γ_b) − log2(1 + γ_e), 0)`.
pub fn secrecy_rate_from_snrs(snr_b: f64, snr_e: f64) -> f64 {
    ((1.0 + snr_b).log2() - (1.0 + snr_e).log2()).max(0.0)
}

/// Beamformer, power split and AN covariance for one layout.
#[derive(Debug, Clone, PartialEq)]
pub struct SecureDesign {
    pub beamformer: DVector<C64>,
    pub signal_power: f64,
    pub an_covariance: DMatrix<C64>,
    pub total_power: f64,
    pub target_snr: f64,
    /// Set for single-antenna transmitters, where no null space exists and
    /// the residual power goes unused.
    pub an_disabled: bool,
}

impl SecureDesign {
    /// Design for Bob's channel `h_b`. Fails with [`Error::Infeasible`] when
    /// the minimum signal power exceeds `total_power`.
    pub fn build(h_b: &DVector<C64>, target_snr: f64, total_power: f64, noise_power_b: f64) -> Result<Self> {
        if !(total_power > 0.0) {
            return Err(Error::InvalidArgument("total power must be positive".into()));
        }
        let p_t = min_signal_power(h_b, target_snr, noise_power_b)?;
        if p_t > total_power {
            return Err(Error::Infeasible {
                required: p_t,
                available: total_power,
            });
        }
        let beamformer = mrt_beamformer(h_b, p_t)?;
        let n = h_b.len();
        let (an_covariance, an_disabled) = match an_covariance(h_b, total_power - p_t) {
            Ok(c) => (c, false),
            Err(Error::NoNullSpace) => (DMatrix::zeros(n, n), true),
            Err(e) => return Err(e),
        };
        Ok(Self {
            beamformer,
            signal_power: p_t,
            an_covariance,
            total_power,
            target_snr,
            an_disabled,
        })
    }

    /// Power actually radiated as artificial noise, `tr(C)`.
    pub fn an_power(&self) -> f64 {
        self.an_covariance.trace().re
    }
}

/// Secrecy rate with both SNRs computed from the design matrices.
pub fn secrecy_rate_simulated(realization: &ChannelRealization, design: &SecureDesign) -> Result<f64> {
    let w = &design.beamformer;
    let c = &design.an_covariance;
    let gb = snr(&realization.h_b, w, c, realization.noise_power_b)?;
    let ge = snr(&realization.h_e, w, c, realization.noise_power_e)?;
    Ok(secrecy_rate_from_snrs(gb, ge))
}

/// Closed-form secrecy rate of the MRT + null-space AN scheme in terms of
/// `‖h_b‖²`, `‖h_e‖²` and `|h_bᴴh_e|²` only. General noise powers.
pub fn secrecy_rate_closed_form(
    h_b: &DVector<C64>,
    h_e: &DVector<C64>,
    target_snr: f64,
    total_power: f64,
    noise_power_b: f64,
    noise_power_e: f64,
) -> Result<f64> {
    if h_b.len() != h_e.len() {
        return Err(Error::InvalidArgument("channel lengths differ".into()));
    }
    if !(noise_power_e > 0.0) {
        return Err(Error::InvalidArgument("noise power must be positive".into()));
    }
    let nb = nonzero_norm_sq(h_b, "Bob's")?;
    let p_t = min_signal_power(h_b, target_snr, noise_power_b)?;
    if p_t > total_power {
        return Err(Error::Infeasible {
            required: p_t,
            available: total_power,
        });
    }
    let ne = h_e.norm_squared();
    let cross = h_b.dotc(h_e).norm_sqr();
    let n = h_b.len();
    let jamming = if n > 1 {
        (total_power - p_t) / (n - 1) as f64 * (ne - cross / nb).max(0.0)
    } else {
        0.0
    };
    let leak = p_t / nb * cross / (noise_power_e + jamming);
    Ok(secrecy_rate_from_snrs(p_t * nb / noise_power_b, leak))
}

/// Equal-noise specialization written with the correlation factor
/// `ρ = |h_bᴴh_e|²/(‖h_b‖²‖h_e‖²)` and `ratio = ‖h_e‖²/‖h_b‖²`.
pub fn secrecy_rate_correlation_form(
    target_snr: f64,
    correlation: f64,
    eve_gain: f64,
    gain_ratio: f64,
    residual_power: f64,
    num_antennas: usize,
    noise_power: f64,
) -> Result<f64> {
    if num_antennas == 0 || !(noise_power > 0.0) || !(target_snr > 0.0) {
        return Err(Error::InvalidArgument("bad correlation-form arguments".into()));
    }
    let jam = if num_antennas > 1 {
        residual_power * eve_gain * (1.0 - correlation) / ((num_antennas - 1) as f64 * noise_power)
    } else {
        0.0
    };
    let leak = target_snr * correlation * gain_ratio / (1.0 + jam);
    Ok(secrecy_rate_from_snrs(target_snr, leak))
}
