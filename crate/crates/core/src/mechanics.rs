//! Single-mode mechanical response: susceptibility, damping, thermal noise
//! and thermal decoherence.
//!
//! The Fourier convention is chosen so that the susceptibility reads
//! `χ(ω) = 1 / (m [ω_m² − ω² + iγ(ω)ω])`, which makes `Im χ ≤ 0` for a
//! dissipative mode.
//!
//! The structure-model damping rate diverges as `1/ω` towards DC; nothing is
//! clamped, so grids must start above zero.

use num_complex::Complex64;

use crate::error::{require_frequency, Error, Result};
use crate::model::{DampingModel, MechanicalOscillator, HBAR, K_B};

impl DampingModel {
    /// Energy damping rate at Fourier frequency `omega`, rad/s.
    pub fn rate(self, omega_m: f64, q: f64, omega: f64) -> f64 {
        match self {
            DampingModel::Viscous => omega_m / q,
            DampingModel::Structure => omega_m * omega_m / (omega * q),
        }
    }
}

impl MechanicalOscillator {
    /// `γ_m(ω)` for this oscillator's damping model.
    pub fn damping_rate(&self, omega: f64) -> f64 {
        self.damping.rate(self.omega_m, self.q, omega)
    }

    /// `γ_m` evaluated at the mechanical resonance, which is `ω_m/Q_m` for
    /// both models.
    pub fn damping_rate_at_resonance(&self) -> f64 {
        self.damping_rate(self.omega_m)
    }

    /// Mean thermal occupation in the high-temperature limit,
    /// `k_B T / (ħ ω_m)` (not the full Bose factor).
    pub fn thermal_occupancy(&self) -> f64 {
        K_B * self.temperature / (HBAR * self.omega_m)
    }
}

/// Response of a harmonic mode with inertia `inertia` (mass or moment of
/// inertia) to a force (or torque).
pub(crate) fn harmonic_response(
    inertia: f64,
    omega_m: f64,
    gamma: f64,
    omega: f64,
) -> Complex64 {
    let denom = Complex64::new(omega_m * omega_m - omega * omega, gamma * omega) * inertia;
    denom.inv()
}

/// Mechanical susceptibility `χ_m(ω)`, m/N.
pub fn susceptibility(osc: &MechanicalOscillator, omega: f64) -> Result<Complex64> {
    let omega = require_frequency(omega)?;
    Ok(harmonic_response(
        osc.mass,
        osc.omega_m,
        osc.damping_rate(omega),
        omega,
    ))
}

/// Thermal force noise `S_th^F = 4 k_B T m γ_m(ω)`, N²/Hz.
pub fn thermal_force_psd(osc: &MechanicalOscillator, omega: f64) -> Result<f64> {
    let omega = require_frequency(omega)?;
    Ok(4.0 * K_B * osc.temperature * osc.mass * osc.damping_rate(omega))
}

/// Thermal displacement noise `|χ_m|² S_th^F`, m²/Hz.
pub fn thermal_displacement_psd(osc: &MechanicalOscillator, omega: f64) -> Result<f64> {
    let chi = susceptibility(osc, omega)?;
    Ok(chi.norm_sqr() * thermal_force_psd(osc, omega)?)
}

/// Thermal decoherence rate `Γ_th = n̄_th γ_m(ω_m)`, s⁻¹.
pub fn thermal_decoherence_rate(osc: &MechanicalOscillator) -> f64 {
    osc.thermal_occupancy() * osc.damping_rate_at_resonance()
}

/// Mean phonon number at time `t` after starting in the ground state.
pub fn phonon_reheating(osc: &MechanicalOscillator, t: f64) -> Result<f64> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::Domain(format!("time must be >= 0, got {t}")));
    }
    let gamma = osc.damping_rate_at_resonance();
    Ok(osc.thermal_occupancy() * -(-gamma * t).exp_m1())
}

/// Zero-point motion `√(ħ / (2 m ω_m))`, m.
pub fn zero_point_fluctuation(osc: &MechanicalOscillator) -> f64 {
    (HBAR / (2.0 * osc.mass * osc.omega_m)).sqrt()
}
