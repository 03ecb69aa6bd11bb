//! Shared domain types and physical constants.
//!
//! Every frequency inside the library is angular (rad/s). Conversion from Hz
//! happens once, at the configuration/CLI boundary. All spectral densities
//! are single-sided.

use std::f64::consts::PI;
use std::fmt;

use crate::error::{require_non_negative, require_positive, Error, Result};

/// Planck constant, J·s (exact, SI 2019).
pub const H: f64 = 6.626_070_15e-34;
/// Reduced Planck constant, J·s.
pub const HBAR: f64 = H / (2.0 * PI);
/// Boltzmann constant, J/K (exact).
pub const K_B: f64 = 1.380_649e-23;
/// Speed of light in vacuum, m/s (exact).
pub const C: f64 = 299_792_458.0;
/// Standard gravity, m/s².
pub const G_GRAV: f64 = 9.806_65;
/// Atomic mass unit, kg.
pub const AMU: f64 = 1.660_539_066_60e-27;

/// Bundle of the constants used throughout the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    pub hbar: f64,
    pub k_b: f64,
    pub c: f64,
    pub h: f64,
    pub g_grav: f64,
}

impl PhysicalConstants {
    pub const CODATA_2018: PhysicalConstants = PhysicalConstants {
        hbar: HBAR,
        k_b: K_B,
        c: C,
        h: H,
        g_grav: G_GRAV,
    };
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::CODATA_2018
    }
}

/// Convert a frequency in Hz to rad/s.
pub fn hz_to_rad(f_hz: f64) -> f64 {
    2.0 * PI * f_hz
}

/// Convert an angular frequency in rad/s to Hz.
pub fn rad_to_hz(omega: f64) -> f64 {
    omega / (2.0 * PI)
}

/// How the mechanical energy damping rate depends on Fourier frequency.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DampingModel {
    /// Velocity-proportional damping; `γ(ω) = ω_m / Q_m`.
    Viscous,
    /// Frequency-independent loss angle; `γ(ω) = ω_m² / (ω Q_m)`.
    Structure,
}

impl DampingModel {
    /// Exponent of the dilution factor `(ω_m/ω_eff)^α` in the f·Q test.
    pub fn dilution_exponent(self) -> i32 {
        match self {
            DampingModel::Viscous => 2,
            DampingModel::Structure => 3,
        }
    }
}

impl fmt::Display for DampingModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DampingModel::Viscous => f.write_str("viscous"),
            DampingModel::Structure => f.write_str("structure"),
        }
    }
}

/// A single mechanical eigenmode coupled to a thermal bath.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MechanicalOscillator {
    /// Mass, kg.
    pub mass: f64,
    /// Natural resonance, rad/s.
    pub omega_m: f64,
    /// Quality factor at resonance.
    pub q: f64,
    pub damping: DampingModel,
    /// Bath temperature, K.
    pub temperature: f64,
}

impl MechanicalOscillator {
    pub fn new(
        mass: f64,
        omega_m: f64,
        q: f64,
        damping: DampingModel,
        temperature: f64,
    ) -> Result<Self> {
        Ok(Self {
            mass: require_positive("mass", mass)?,
            omega_m: require_positive("omega_m", omega_m)?,
            q: require_positive("q", q)?,
            damping,
            temperature: require_non_negative("temperature", temperature)?,
        })
    }

    /// Same mode with a different mass (e.g. the reduced mass of a
    /// differential readout).
    pub fn with_mass(self, mass: f64) -> Result<Self> {
        Self::new(mass, self.omega_m, self.q, self.damping, self.temperature)
    }

    pub fn with_temperature(self, temperature: f64) -> Result<Self> {
        Self::new(self.mass, self.omega_m, self.q, self.damping, temperature)
    }
}

/// Mirror radius of curvature. A flat mirror is its own variant rather than
/// an infinite float.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Curvature {
    Flat,
    /// Signed radius of curvature, m. Positive is concave as seen from inside
    /// the cavity.
    Radius(f64),
}

impl Curvature {
    /// Mirror g-factor `1 - L/R` for a cavity of length `length`.
    pub fn g_factor(self, length: f64) -> f64 {
        match self {
            Curvature::Flat => 1.0,
            Curvature::Radius(r) => 1.0 - length / r,
        }
    }
}

/// Two-mirror Fabry-Pérot cavity. Mirror 1 is the fixed input mirror and
/// mirror 2 the movable one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpticalCavity {
    /// Length, m.
    pub length: f64,
    /// Intensity transmission of the input mirror.
    pub input_transmission: f64,
    /// Round-trip intensity loss other than input coupling.
    pub extra_loss: f64,
    pub r1: Curvature,
    pub r2: Curvature,
}

impl OpticalCavity {
    pub fn new(
        length: f64,
        input_transmission: f64,
        extra_loss: f64,
        r1: Curvature,
        r2: Curvature,
    ) -> Result<Self> {
        let length = require_positive("length", length)?;
        if !(input_transmission > 0.0 && input_transmission <= 1.0) {
            return Err(Error::invalid(
                "input_transmission",
                format!("must lie in (0, 1], got {input_transmission}"),
            ));
        }
        let extra_loss = require_non_negative("extra_loss", extra_loss)?;
        for (name, r) in [("r1", r1), ("r2", r2)] {
            if let Curvature::Radius(v) = r {
                if !v.is_finite() || v == 0.0 {
                    return Err(Error::invalid(name, format!("radius must be finite and nonzero, got {v}")));
                }
            }
        }
        Ok(Self {
            length,
            input_transmission,
            extra_loss,
            r1,
            r2,
        })
    }

    /// Cavity with a given finesse, splitting the total round-trip loss so
    /// that `κ_in/κ = coupling_ratio`. A ratio of 1 is a lossless cavity
    /// whose linewidth is set entirely by the input mirror.
    pub fn from_finesse(
        length: f64,
        finesse: f64,
        coupling_ratio: f64,
        r1: Curvature,
        r2: Curvature,
    ) -> Result<Self> {
        require_positive("finesse", finesse)?;
        if !(coupling_ratio > 0.0 && coupling_ratio <= 1.0) {
            return Err(Error::invalid(
                "coupling_ratio",
                format!("must lie in (0, 1], got {coupling_ratio}"),
            ));
        }
        // F = ω_FSR/(2κ) and κ = (T_in + loss)·c/(4L) give T_in + loss = 2π/F.
        let total = 2.0 * PI / finesse;
        Self::new(
            length,
            total * coupling_ratio,
            total * (1.0 - coupling_ratio),
            r1,
            r2,
        )
    }

    pub fn g1(&self) -> f64 {
        self.r1.g_factor(self.length)
    }

    pub fn g2(&self) -> f64 {
        self.r2.g_factor(self.length)
    }
}

/// Pump laser.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaserDrive {
    /// Wavelength, m.
    pub wavelength: f64,
    /// Input power, W.
    pub input_power: f64,
    /// Laser minus cavity resonance frequency, rad/s.
    pub detuning: f64,
    /// Photon collection efficiency of the readout.
    pub efficiency: f64,
}

impl LaserDrive {
    pub fn new(wavelength: f64, input_power: f64, detuning: f64, efficiency: f64) -> Result<Self> {
        let wavelength = require_positive("wavelength", wavelength)?;
        let input_power = require_non_negative("input_power", input_power)?;
        if !detuning.is_finite() {
            return Err(Error::invalid("detuning", "must be finite"));
        }
        if !(efficiency > 0.0 && efficiency <= 1.0) {
            return Err(Error::invalid(
                "efficiency",
                format!("must lie in (0, 1], got {efficiency}"),
            ));
        }
        Ok(Self {
            wavelength,
            input_power,
            detuning,
            efficiency,
        })
    }

    /// Optical angular frequency `2πc/λ`.
    pub fn omega_laser(&self) -> f64 {
        2.0 * PI * C / self.wavelength
    }
}

/// Residual gas species.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gas {
    Hydrogen,
    Helium,
    Nitrogen,
    Argon,
    Air,
}

impl Gas {
    /// Mass of one molecule, kg.
    pub fn molecule_mass(self) -> f64 {
        let amu = match self {
            Gas::Hydrogen => 2.016,
            Gas::Helium => 4.002_602,
            Gas::Nitrogen => 28.014,
            Gas::Argon => 39.948,
            Gas::Air => 28.97,
        };
        amu * AMU
    }

    pub fn name(self) -> &'static str {
        match self {
            Gas::Hydrogen => "hydrogen",
            Gas::Helium => "helium",
            Gas::Nitrogen => "nitrogen",
            Gas::Argon => "argon",
            Gas::Air => "air",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "hydrogen" => Some(Gas::Hydrogen),
            "helium" => Some(Gas::Helium),
            "nitrogen" => Some(Gas::Nitrogen),
            "argon" => Some(Gas::Argon),
            "air" => Some(Gas::Air),
            _ => None,
        }
    }
}

/// Vacuum environment around the oscillator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Environment {
    /// Pressure, Pa.
    pub pressure: f64,
    /// Mass of one gas molecule, kg.
    pub gas_molecule_mass: f64,
    /// Order-unity shape constant of the damped body.
    pub shape_constant: f64,
    /// Exposed surface area, m².
    pub area: f64,
}

impl Environment {
    pub fn new(pressure: f64, gas_molecule_mass: f64, shape_constant: f64, area: f64) -> Result<Self> {
        Ok(Self {
            pressure: require_non_negative("pressure", pressure)?,
            gas_molecule_mass: require_non_negative("gas_molecule_mass", gas_molecule_mass)?,
            shape_constant: require_positive("shape_constant", shape_constant)?,
            area: require_non_negative("area", area)?,
        })
    }

    /// Total surface of a disk-shaped mirror, `2πr² + 2πr·t`, with `C = 1`.
    pub fn disk(pressure: f64, gas: Gas, diameter: f64, thickness: f64) -> Result<Self> {
        Self::new(pressure, gas.molecule_mass(), 1.0, disk_area(diameter, thickness)?)
    }
}

/// Total surface area of a cylinder of the given diameter and thickness.
pub fn disk_area(diameter: f64, thickness: f64) -> Result<f64> {
    let r = 0.5 * require_positive("diameter", diameter)?;
    let t = require_non_negative("thickness", thickness)?;
    Ok(2.0 * PI * r * r + 2.0 * PI * r * t)
}

/// Strictly increasing set of positive angular frequencies.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyGrid {
    points: Vec<f64>,
}

impl FrequencyGrid {
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::invalid("grid", "must contain at least one point"));
        }
        if points.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::invalid("grid", "all points must be finite and > 0"));
        }
        if points.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid("grid", "points must be strictly increasing"));
        }
        Ok(Self { points })
    }

    /// `n` log-spaced points between `f_min_hz` and `f_max_hz` inclusive,
    /// stored in rad/s. A single point sits at `f_min_hz`.
    pub fn log_spaced_hz(f_min_hz: f64, f_max_hz: f64, n: usize) -> Result<Self> {
        require_positive("f_min_hz", f_min_hz)?;
        require_positive("f_max_hz", f_max_hz)?;
        if n == 0 {
            return Err(Error::invalid("points", "must be >= 1"));
        }
        if n > 1 && f_max_hz <= f_min_hz {
            return Err(Error::invalid("f_max_hz", "must exceed f_min_hz"));
        }
        if n == 1 {
            return Self::new(vec![hz_to_rad(f_min_hz)]);
        }
        let (lo, hi) = (f_min_hz.ln(), f_max_hz.ln());
        let step = (hi - lo) / (n - 1) as f64;
        let mut points: Vec<f64> = (0..n)
            .map(|i| hz_to_rad((lo + step * i as f64).exp()))
            .collect();
        // pin the endpoints exactly
        points[0] = hz_to_rad(f_min_hz);
        points[n - 1] = hz_to_rad(f_max_hz);
        Self::new(points)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Severity {
    Warning,
    Violation,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Finding {
    pub severity: Severity,
    pub message: String,
}

/// Outcome of [`validate_system`]. Empty means nothing to report.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationReport {
    pub findings: Vec<Finding>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.findings.is_empty()
    }

    pub fn violations(&self) -> impl Iterator<Item = &Finding> {
        self.findings.iter().filter(|f| f.severity == Severity::Violation)
    }

    pub fn warnings(&self) -> impl Iterator<Item = &Finding> {
        self.findings.iter().filter(|f| f.severity == Severity::Warning)
    }

    pub fn has_violations(&self) -> bool {
        self.violations().next().is_some()
    }

    fn push(&mut self, severity: Severity, message: impl Into<String>) {
        self.findings.push(Finding {
            severity,
            message: message.into(),
        });
    }
}

/// Check a system for physically inconsistent parameters. Never fails; all
/// problems end up in the report.
pub fn validate_system(
    osc: &MechanicalOscillator,
    cav: &OpticalCavity,
    drive: &LaserDrive,
) -> ValidationReport {
    let mut report = ValidationReport::default();
    let positive = |v: f64| v.is_finite() && v > 0.0;

    if !positive(osc.mass) {
        report.push(Severity::Violation, format!("non-positive mass: {}", osc.mass));
    }
    if !positive(osc.omega_m) {
        report.push(Severity::Violation, format!("non-positive resonance: {}", osc.omega_m));
    }
    if !positive(osc.q) {
        report.push(Severity::Violation, format!("non-positive Q: {}", osc.q));
    }
    if !(osc.temperature.is_finite() && osc.temperature >= 0.0) {
        report.push(Severity::Violation, format!("negative temperature: {}", osc.temperature));
    }

    if !positive(cav.length) {
        report.push(Severity::Violation, format!("non-positive cavity length: {}", cav.length));
    } else {
        let g = cav.g1() * cav.g2();
        if !(0.0..=1.0).contains(&g) || !g.is_finite() {
            report.push(
                Severity::Violation,
                format!("cavity unstable: g1*g2 = {g} outside [0, 1]"),
            );
        } else if g == 1.0 {
            report.push(
                Severity::Warning,
                format!("cavity marginally stable: g1*g2 = {g}"),
            );
        }
    }
    if !(cav.input_transmission > 0.0 && cav.input_transmission <= 1.0) {
        report.push(
            Severity::Violation,
            format!("input transmission {} outside (0, 1]", cav.input_transmission),
        );
    }
    if !(cav.extra_loss.is_finite() && cav.extra_loss >= 0.0) {
        report.push(Severity::Violation, format!("negative extra loss: {}", cav.extra_loss));
    }

    if !positive(drive.wavelength) {
        report.push(Severity::Violation, format!("non-positive wavelength: {}", drive.wavelength));
    }
    if !(drive.input_power.is_finite() && drive.input_power >= 0.0) {
        report.push(Severity::Violation, format!("negative input power: {}", drive.input_power));
    }
    if !(drive.efficiency > 0.0 && drive.efficiency <= 1.0) {
        report.push(
            Severity::Violation,
            format!("collection efficiency {} outside (0, 1]", drive.efficiency),
        );
    }
    report
}
