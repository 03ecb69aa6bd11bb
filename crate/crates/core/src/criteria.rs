//! Criteria for reaching the quantum regime: cooperativity, measurement
//! rate, the f·Q product and the effective occupancy after optical dilution.

use crate::coupling::{coupling_params, CoupledSystem, EffectiveDynamics};
use crate::error::{Error, Result};
use crate::mechanics::{thermal_decoherence_rate, thermal_force_psd, zero_point_fluctuation};
use crate::model::{rad_to_hz, DampingModel, MechanicalOscillator, H, HBAR, K_B};
use crate::quantum_noise::{radiation_pressure_force_psd, shot_noise_psd, QuantumNoiseInput, ReducedMass};

/// Measurement-rate threshold as a fraction of the thermal decoherence rate.
pub const MEASUREMENT_RATE_FRACTION: f64 = 1.0 / 8.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cooperativity {
    /// `C = 2g²/(γ_m κ)`.
    pub c: f64,
    /// `C/n̄_th`; infinite when the bath is at zero temperature.
    pub c_qu: f64,
    pub unbounded: bool,
}

/// Cooperativity with `γ_m` taken at the mechanical resonance.
pub fn cooperativity(system: &CoupledSystem) -> Result<Cooperativity> {
    let g_sq = coupling_params(system)?.g_squared();
    let c = 2.0 * g_sq / (system.osc.damping_rate_at_resonance() * system.kappa());
    let n_th = system.osc.thermal_occupancy();
    let unbounded = n_th == 0.0;
    Ok(Cooperativity {
        c,
        c_qu: if unbounded { f64::INFINITY } else { c / n_th },
        unbounded,
    })
}

/// Ratio of radiation-pressure to thermal force noise at `omega`. Below the
/// cavity pole and at the mechanical resonance this is the quantum
/// cooperativity.
pub fn force_noise_ratio(system: &CoupledSystem, omega: f64) -> Result<f64> {
    let input = QuantumNoiseInput::from_system(system, ReducedMass::SingleMirror)?;
    let rad = radiation_pressure_force_psd(&input, omega)?;
    let th = thermal_force_psd(&system.osc, omega)?;
    Ok(if th == 0.0 { f64::INFINITY } else { rad / th })
}

/// `Γ_meas = x_zpf² / (2 S_imp)` for imprecision noise `s_imp` (m²/Hz) at
/// the mechanical resonance.
pub fn measurement_rate(osc: &MechanicalOscillator, s_imp: f64) -> Result<f64> {
    if !(s_imp.is_finite() && s_imp > 0.0) {
        return Err(Error::Domain(format!("imprecision noise must be > 0, got {s_imp}")));
    }
    Ok(zero_point_fluctuation(osc).powi(2) / (2.0 * s_imp))
}

/// Measurement rate when the imprecision is the cavity's shot noise.
pub fn shot_limited_measurement_rate(system: &CoupledSystem) -> Result<f64> {
    let input = QuantumNoiseInput::from_system(system, ReducedMass::SingleMirror)?;
    measurement_rate(&system.osc, shot_noise_psd(&input, system.osc.omega_m)?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FqCriterion {
    /// `f_m Q_m`, Hz.
    pub product: f64,
    /// `(k_B T/h)(ω_m/ω_eff)^α`, Hz.
    pub threshold: f64,
    /// Bare `k_B T/h`, Hz.
    pub bare_threshold: f64,
    /// `f_eff Q_eff` with `Q_eff = ω_eff/γ_m(ω_eff)`, Hz. Compared against
    /// the bare threshold it gives the same verdict as `product` against
    /// `threshold`.
    pub effective_product: f64,
    pub alpha: i32,
    /// `product / threshold`.
    pub margin: f64,
    pub pass: bool,
}

pub fn thermal_frequency(temperature: f64) -> f64 {
    K_B * temperature / H
}

/// f·Q test for a mode whose frequency has been raised to `omega_eff`.
pub fn fq_criterion(osc: &MechanicalOscillator, omega_eff: f64) -> Result<FqCriterion> {
    if !(omega_eff.is_finite() && omega_eff >= osc.omega_m) {
        return Err(Error::Domain(format!(
            "f.Q criterion needs omega_eff >= omega_m ({}), got {omega_eff}",
            osc.omega_m
        )));
    }
    let alpha = osc.damping.dilution_exponent();
    let bare = thermal_frequency(osc.temperature);
    let threshold = bare * (osc.omega_m / omega_eff).powi(alpha);
    let product = rad_to_hz(osc.omega_m) * osc.q;
    let effective_product = rad_to_hz(omega_eff) * omega_eff / osc.damping_rate(omega_eff);
    Ok(FqCriterion {
        product,
        threshold,
        bare_threshold: bare,
        effective_product,
        alpha,
        margin: product / threshold,
        pass: product > threshold,
    })
}

/// f·Q test stated directly in terms of an effective frequency and quality
/// factor.
pub fn fq_criterion_effective(f_eff_hz: f64, q_eff: f64, temperature: f64) -> FqCriterion {
    let bare = thermal_frequency(temperature);
    let product = f_eff_hz * q_eff;
    FqCriterion {
        product,
        threshold: bare,
        bare_threshold: bare,
        effective_product: product,
        alpha: 0,
        margin: product / bare,
        pass: product > bare,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveOccupancy {
    pub n_eff: f64,
    /// `γ_eff ≥ ω_eff`: the mode is over-damped and the estimate is not
    /// meaningful.
    pub overdamped: bool,
}

/// Occupancy of a mode with resonance `omega_eff` and total damping
/// `γ_m(ω_eff) + γ_opt`, in contact with the mechanical bath only.
pub fn effective_occupancy(osc: &MechanicalOscillator, effective: &EffectiveDynamics) -> Result<EffectiveOccupancy> {
    let w = effective.omega_eff;
    if !(w.is_finite() && w > 0.0) {
        return Err(Error::Unstable(format!("effective frequency {w} is not positive")));
    }
    let gamma_m = osc.damping_rate(w);
    let gamma_eff = gamma_m + effective.gamma_opt;
    if !(gamma_eff > 0.0) {
        return Err(Error::Unstable(format!("effective damping {gamma_eff} is not positive")));
    }
    Ok(EffectiveOccupancy {
        n_eff: K_B * osc.temperature / (HBAR * w) * gamma_m / gamma_eff,
        overdamped: gamma_eff >= w,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Verdicts {
    pub quantum_cooperativity: bool,
    pub measurement_rate: bool,
    pub fq: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriteriaReport {
    pub cooperativity: Cooperativity,
    /// Shot-limited measurement rate, s⁻¹.
    pub measurement_rate: f64,
    /// Thermal decoherence rate, s⁻¹.
    pub decoherence_rate: f64,
    pub fq: FqCriterion,
    pub occupancy: EffectiveOccupancy,
    pub damping: DampingModel,
    pub verdicts: Verdicts,
}

/// All criteria for a coupled system whose mode has been shifted to the
/// given effective dynamics.
pub fn evaluate_criteria(system: &CoupledSystem, effective: &EffectiveDynamics) -> Result<CriteriaReport> {
    let osc = &system.osc;
    let cooperativity = cooperativity(system)?;
    let measurement_rate = shot_limited_measurement_rate(system)?;
    let decoherence_rate = thermal_decoherence_rate(osc);
    let fq = fq_criterion(osc, effective.omega_eff)?;
    let occupancy = effective_occupancy(osc, effective)?;
    Ok(CriteriaReport {
        cooperativity,
        measurement_rate,
        decoherence_rate,
        fq,
        occupancy,
        damping: osc.damping,
        verdicts: Verdicts {
            quantum_cooperativity: cooperativity.c_qu > 1.0,
            measurement_rate: measurement_rate >= MEASUREMENT_RATE_FRACTION * decoherence_rate,
            fq: fq.pass,
        },
    })
}
