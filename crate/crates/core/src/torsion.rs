//! Torsion pendulums read out at the end of a bar: angular susceptibility,
//! quantum noise, torsional stiffness, damping compared with the pendulum
//! mode, and the optical-lever alternative.
//!
//! Torque, angle and moment of inertia replace force, displacement and mass,
//! and the optical coupling becomes `G_tor = (d/2) G`. The quantum-noise
//! formulas are therefore reused from the linear case with that substitution.

use num_complex::Complex64;

use crate::coupling::CoupledSystem;
use crate::error::{require_frequency, require_positive, Error, Result};
use crate::mechanics::harmonic_response;
use crate::model::{DampingModel, LaserDrive, MechanicalOscillator, C, G_GRAV, K_B};
use crate::quantum_noise::{
    quantum_noise_displacement_psd, radiation_pressure_force_psd, sql_touching_frequency, QuantumNoiseInput,
    ReducedMass,
};
use crate::suspension::Suspension;

/// Mass distributed uniformly along the bar.
pub const UNIFORM_BAR: f64 = 1.0 / 12.0;
/// Mass concentrated at both ends; the largest possible factor.
pub const END_LOADED: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorsionBar {
    pub mass: f64,
    /// Bar length `d`, m.
    pub length: f64,
    /// Mass-distribution factor `a` in `I = a m d²`.
    pub distribution: f64,
}

impl TorsionBar {
    pub fn new(mass: f64, length: f64, distribution: f64) -> Result<Self> {
        require_positive("mass", mass)?;
        require_positive("d", length)?;
        if !(distribution > 0.0 && distribution <= END_LOADED) {
            return Err(Error::invalid("a", format!("must lie in (0, 1/4], got {distribution}")));
        }
        Ok(Self {
            mass,
            length,
            distribution,
        })
    }

    pub fn moment_of_inertia(&self) -> f64 {
        self.distribution * self.mass * self.length * self.length
    }
}

/// Torsional eigenmode of a bar.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorsionOscillator {
    pub bar: TorsionBar,
    pub omega_m: f64,
    pub q: f64,
    pub damping: DampingModel,
    pub temperature: f64,
}

impl TorsionOscillator {
    pub fn new(bar: TorsionBar, omega_m: f64, q: f64, damping: DampingModel, temperature: f64) -> Result<Self> {
        // reuse the oscillator validation with the moment of inertia as mass
        MechanicalOscillator::new(bar.moment_of_inertia(), omega_m, q, damping, temperature)?;
        Ok(Self {
            bar,
            omega_m,
            q,
            damping,
            temperature,
        })
    }

    /// Linear oscillator obtained by the substitution `m → I`.
    pub fn as_linear(&self) -> MechanicalOscillator {
        MechanicalOscillator {
            mass: self.bar.moment_of_inertia(),
            omega_m: self.omega_m,
            q: self.q,
            damping: self.damping,
            temperature: self.temperature,
        }
    }

    pub fn damping_rate(&self, omega: f64) -> f64 {
        self.damping.rate(self.omega_m, self.q, omega)
    }
}

/// `χ_I(ω) = 1/(I[ω_m² − ω² + iγω])`, rad/(N·m).
pub fn torsion_susceptibility(osc: &TorsionOscillator, omega: f64) -> Result<Complex64> {
    let omega = require_frequency(omega)?;
    Ok(harmonic_response(
        osc.bar.moment_of_inertia(),
        osc.omega_m,
        osc.damping_rate(omega),
        omega,
    ))
}

/// Thermal torque noise `4 k_B T I γ(ω)`, (N·m)²/Hz.
pub fn thermal_torque_psd(osc: &TorsionOscillator, omega: f64) -> Result<f64> {
    let omega = require_frequency(omega)?;
    Ok(4.0 * K_B * osc.temperature * osc.bar.moment_of_inertia() * osc.damping_rate(omega))
}

/// Quantum-noise input for a cavity that reads the bar at one end. The
/// cavity's circulating power and linewidth come from `system`.
pub fn torsion_quantum_input(osc: &TorsionOscillator, system: &CoupledSystem) -> Result<QuantumNoiseInput> {
    let linear = QuantumNoiseInput::from_system(system, ReducedMass::SingleMirror)?;
    let inertia = osc.bar.moment_of_inertia();
    Ok(QuantumNoiseInput {
        reduced_mass: inertia,
        osc: osc.as_linear(),
        frequency_pull: osc.bar.length / 2.0 * linear.frequency_pull,
        ..linear
    })
}

/// Angular quantum noise `S_qn^θ`, rad²/Hz.
pub fn torsion_quantum_noise(osc: &TorsionOscillator, system: &CoupledSystem, omega: f64) -> Result<f64> {
    quantum_noise_displacement_psd(&torsion_quantum_input(osc, system)?, omega)
}

/// SQL touching frequency of the torsional readout, rad/s.
pub fn torsion_sql_frequency(osc: &TorsionOscillator, system: &CoupledSystem) -> Result<f64> {
    Ok(sql_touching_frequency(&torsion_quantum_input(osc, system)?).omega)
}

/// Quantum cooperativity of the torsional mode,
/// `(1/4a) S_rad^F / (4 k_B T m γ_tor)`, with the radiation-pressure force of
/// the cavity in `system` evaluated at the system's mechanical resonance.
pub fn torsion_cooperativity(bar: &TorsionBar, system: &CoupledSystem, gamma_tor: f64) -> Result<f64> {
    require_positive("gamma_tor", gamma_tor)?;
    let linear = QuantumNoiseInput::from_system(system, ReducedMass::SingleMirror)?;
    let s_rad = radiation_pressure_force_psd(&linear, system.osc.omega_m)?;
    let thermal = 4.0 * K_B * system.osc.temperature * bar.mass * gamma_tor;
    Ok(if thermal == 0.0 {
        f64::INFINITY
    } else {
        s_rad / (4.0 * bar.distribution * thermal)
    })
}

/// Complex torsional stiffness of a single wire, N·m/rad. The loss angle is
/// the wire's own, `1/Q_el` plus any bond loss, with no dilution.
pub fn torsion_spring(susp: &Suspension) -> Result<Complex64> {
    susp.validate()?;
    let m = &susp.material;
    let k = std::f64::consts::PI * m.young_modulus * susp.radius.powi(4)
        / (4.0 * (1.0 + m.poisson_ratio) * susp.length);
    let phi = 1.0 / susp.q_el() + susp.bond_loss;
    Ok(Complex64::new(k, k * phi))
}

/// Natural angular frequency `√(Re K / I)`, rad/s.
pub fn torsion_frequency(susp: &Suspension, bar: &TorsionBar) -> Result<f64> {
    Ok((torsion_spring(susp)?.re / bar.moment_of_inertia()).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DampingRatio {
    /// `l r²/(a(1+ν)d²) √(πE/(mg))`.
    pub geometric: f64,
    /// Same ratio with the wire radius eliminated through the tensile limit,
    /// `l s/(a(1+ν)H d²) √(mgE/π)`.
    pub tensile: f64,
}

/// Torsional over pendulum damping rate for a bar hung from one wire with a
/// common structural loss angle.
pub fn damping_ratio(bar: &TorsionBar, susp: &Suspension) -> Result<DampingRatio> {
    susp.validate()?;
    let m = &susp.material;
    let mg = bar.mass * G_GRAV;
    let base = susp.length / (bar.distribution * (1.0 + m.poisson_ratio) * bar.length.powi(2));
    let pi = std::f64::consts::PI;
    Ok(DampingRatio {
        geometric: base * susp.radius.powi(2) * (pi * m.young_modulus / mg).sqrt(),
        tensile: base * susp.safety_factor / m.tensile_strength * (mg * m.young_modulus / pi).sqrt(),
    })
}

/// Amplitude common-mode rejection the differential readout needs so that
/// pendulum thermal noise does not leak into the torsion signal.
pub fn common_mode_rejection_requirement(ratio: f64) -> Result<f64> {
    Ok(require_positive("damping ratio", ratio)?.sqrt())
}

/// Optical lever with a π/2 Gouy phase between mirror and detector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpticalLever {
    /// W
    pub power: f64,
    /// Beam radius at the mirror, m.
    pub beam_radius: f64,
    pub wavelength: f64,
}

impl OpticalLever {
    pub fn new(power: f64, beam_radius: f64, wavelength: f64) -> Result<Self> {
        crate::error::require_non_negative("p_oplev", power)?;
        require_positive("w", beam_radius)?;
        require_positive("wavelength", wavelength)?;
        Ok(Self {
            power,
            beam_radius,
            wavelength,
        })
    }

    fn omega_laser(&self) -> f64 {
        LaserDrive {
            wavelength: self.wavelength,
            input_power: self.power,
            detuning: 0.0,
            efficiency: 1.0,
        }
        .omega_laser()
    }
}

/// Back-action to shot-noise balance of the optical lever,
/// `2 ω_L P w² |χ_I| / c²`.
pub fn optical_lever_kappa(lever: &OpticalLever, osc: &TorsionOscillator, omega: f64) -> Result<f64> {
    let chi = torsion_susceptibility(osc, omega)?.norm();
    Ok(2.0 * lever.omega_laser() * lever.power * lever.beam_radius.powi(2) * chi / (C * C))
}
