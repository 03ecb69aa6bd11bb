//! Radiation-pressure coupling between the cavity field and the mirror:
//! coupling strength, optical spring and damping, effective dynamics and the
//! angular (Sidles-Sigg) stiffness.
//!
//! The cavity resonance is taken equal to the laser frequency when forming
//! `G = ω_cav/L`, since the detuning is many orders of magnitude below the
//! optical frequency. Spring formulas are evaluated at the mechanical
//! resonance.

use crate::cavity::{cavity_response, circulating_power, intracavity_photon_number, CavityResponse};
use crate::error::{require_non_negative, Error, Result};
use crate::mechanics::zero_point_fluctuation;
use crate::model::{LaserDrive, MechanicalOscillator, OpticalCavity, C};

/// Oscillator, cavity and laser with a known circulating power.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoupledSystem {
    pub osc: MechanicalOscillator,
    pub cavity: OpticalCavity,
    pub drive: LaserDrive,
    /// Circulating power, W.
    pub circulating_power: f64,
}

impl CoupledSystem {
    /// Circulating power follows from the drive's input power and detuning.
    pub fn from_drive(osc: MechanicalOscillator, cavity: OpticalCavity, drive: LaserDrive) -> Self {
        let circulating_power = circulating_power(&cavity, &drive);
        Self {
            osc,
            cavity,
            drive,
            circulating_power,
        }
    }

    /// Circulating power given directly; the drive's input power is ignored.
    pub fn with_circulating_power(
        osc: MechanicalOscillator,
        cavity: OpticalCavity,
        drive: LaserDrive,
        circulating: f64,
    ) -> Result<Self> {
        Ok(Self {
            osc,
            cavity,
            drive,
            circulating_power: require_non_negative("circulating_power", circulating)?,
        })
    }

    pub fn cavity_response(&self) -> CavityResponse {
        cavity_response(&self.cavity)
    }

    pub fn kappa(&self) -> f64 {
        self.cavity_response().kappa
    }

    pub fn photon_number(&self) -> f64 {
        intracavity_photon_number(&self.cavity, &self.drive, self.circulating_power)
            .expect("circulating power validated at construction")
    }

    /// Cavity frequency pull per unit displacement, `G = ω_L / L`.
    pub fn frequency_pull(&self) -> f64 {
        self.drive.omega_laser() / self.cavity.length
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingParams {
    /// `G`, rad/s per m.
    pub frequency_pull: f64,
    /// Optomechanical coupling strength `g`, rad/s.
    pub g: f64,
    pub photon_number: f64,
}

impl CouplingParams {
    pub fn g_squared(&self) -> f64 {
        self.g * self.g
    }
}

const COUPLING_CONSISTENCY: f64 = 1e-9;

/// `g² = P_circ ω_L / (m L c ω_m)` from circulating power.
pub fn coupling_strength_squared_from_power(system: &CoupledSystem) -> f64 {
    let o = &system.osc;
    system.circulating_power * system.drive.omega_laser()
        / (o.mass * system.cavity.length * C * o.omega_m)
}

/// `g² = (G x_zpf)² n̄_circ` from the photon number.
pub fn coupling_strength_squared_from_photons(system: &CoupledSystem) -> f64 {
    let gx = system.frequency_pull() * zero_point_fluctuation(&system.osc);
    gx * gx * system.photon_number()
}

/// Coupling strength, cross-checked between the power and photon-number forms.
pub fn coupling_params(system: &CoupledSystem) -> Result<CouplingParams> {
    let from_power = coupling_strength_squared_from_power(system);
    let from_photons = coupling_strength_squared_from_photons(system);
    let scale = from_power.abs().max(from_photons.abs());
    if scale > 0.0 && (from_power - from_photons).abs() > COUPLING_CONSISTENCY * scale {
        return Err(Error::Internal(format!(
            "g^2 from power ({from_power:e}) and from photon number ({from_photons:e}) disagree"
        )));
    }
    Ok(CouplingParams {
        frequency_pull: system.frequency_pull(),
        g: from_power.sqrt(),
        photon_number: system.photon_number(),
    })
}

/// Frequency shift and damping contributed by one optical beam.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct OpticalSpring {
    /// `δω_opt`, rad/s. Positive stiffens the mode.
    pub frequency_shift: f64,
    /// `γ_opt`, rad/s. Positive damps the mode.
    pub damping: f64,
}

/// Two-sideband optical spring and damping, no regime approximation.
pub fn spring_full(g_sq: f64, kappa: f64, omega_m: f64, detuning: f64) -> OpticalSpring {
    let k2 = kappa * kappa;
    let up = detuning + omega_m;
    let down = detuning - omega_m;
    let lu = k2 + up * up;
    let ld = k2 + down * down;
    OpticalSpring {
        frequency_shift: g_sq * (up / lu + down / ld),
        damping: g_sq * (2.0 * kappa / lu - 2.0 * kappa / ld),
    }
}

/// Bad-cavity (`κ ≫ ω_m`) limit of [`spring_full`].
pub fn spring_doppler(g_sq: f64, kappa: f64, omega_m: f64, detuning: f64) -> OpticalSpring {
    let l = kappa * kappa + detuning * detuning;
    OpticalSpring {
        frequency_shift: g_sq * 2.0 * detuning / l,
        damping: -g_sq * 8.0 * kappa * detuning * omega_m / (l * l),
    }
}

pub fn optical_spring_full(system: &CoupledSystem, detuning: f64) -> Result<OpticalSpring> {
    let p = coupling_params(system)?;
    Ok(spring_full(p.g_squared(), system.kappa(), system.osc.omega_m, detuning))
}

pub fn optical_spring_doppler(system: &CoupledSystem, detuning: f64) -> Result<OpticalSpring> {
    let p = coupling_params(system)?;
    Ok(spring_doppler(p.g_squared(), system.kappa(), system.osc.omega_m, detuning))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveDynamics {
    /// `ω_m + Σ δω_opt`, rad/s.
    pub omega_eff: f64,
    /// `γ_m(ω_m) + Σ γ_opt`, rad/s.
    pub gamma_eff: f64,
    /// `Σ γ_opt` on its own, so that `γ_eff` can be re-evaluated with the
    /// mechanical damping taken at another frequency.
    pub gamma_opt: f64,
    pub stable: bool,
}

/// Combine the oscillator with any number of optical beams. Contributions
/// from independent beams add linearly.
pub fn effective_dynamics(osc: &MechanicalOscillator, springs: &[OpticalSpring]) -> EffectiveDynamics {
    let shift: f64 = springs.iter().map(|s| s.frequency_shift).sum();
    let gamma_opt: f64 = springs.iter().map(|s| s.damping).sum();
    let omega_eff = osc.omega_m + shift;
    let gamma_eff = osc.damping_rate_at_resonance() + gamma_opt;
    EffectiveDynamics {
        omega_eff,
        gamma_eff,
        gamma_opt,
        stable: omega_eff > 0.0 && gamma_eff > 0.0,
    }
}

/// Lowest occupancy reachable by optomechanical cooling alone in the bad
/// cavity regime, `κ/(2ω_m)`.
pub fn minimum_phonon_doppler(cav: &CavityResponse, osc: &MechanicalOscillator) -> f64 {
    cav.kappa / (2.0 * osc.omega_m)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mirror {
    /// Mirror 1, the input mirror.
    Input,
    /// Mirror 2, the suspended mirror.
    Movable,
}

/// Radiation-pressure torsional stiffness on one cavity mirror, N·m/rad.
/// Negative values are anti-restoring.
pub fn sidles_sigg_stiffness(cav: &OpticalCavity, circulating: f64, mirror: Mirror) -> Result<f64> {
    let (g1, g2) = (cav.g1(), cav.g2());
    let product = g1 * g2;
    if !(0.0..1.0).contains(&product) {
        return Err(Error::Unstable(format!(
            "torsional stiffness requires 0 <= g1*g2 < 1, got {product}"
        )));
    }
    let own = match mirror {
        Mirror::Input => g1,
        Mirror::Movable => g2,
    };
    Ok(-(2.0 * circulating * cav.length / C) * own / (1.0 - product))
}
