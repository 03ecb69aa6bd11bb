//! Quantum noise of a cavity readout on resonance (shot noise and
//! radiation-pressure back action), the standard quantum limit, and noise
//! budgets that add thermal noise on top.
//!
//! Quantum noise is evaluated for zero detuning. Budgets for detuned systems
//! still use these formulas and say so in their metadata.

use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::coupling::{coupling_params, CoupledSystem};
use crate::error::{require_frequency, require_positive, Error, Result};
use crate::mechanics::{harmonic_response, susceptibility, thermal_force_psd};
use crate::model::{DampingModel, FrequencyGrid, MechanicalOscillator, HBAR};

/// Which mass enters the back-action susceptibility.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ReducedMass {
    /// One movable mirror against a much heavier input mirror, `M = m`.
    SingleMirror,
    /// Differential readout of two identical cavities, `M = m/2`.
    Michelson,
    Custom(f64),
}

impl ReducedMass {
    pub fn resolve(self, mass: f64) -> f64 {
        match self {
            ReducedMass::SingleMirror => mass,
            ReducedMass::Michelson => mass / 2.0,
            ReducedMass::Custom(m) => m,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantumNoiseInput {
    /// Reduced mass `M`, kg.
    pub reduced_mass: f64,
    /// Mechanical mode; only `omega_m`, `q` and the damping model are used
    /// together with `reduced_mass`.
    pub osc: MechanicalOscillator,
    /// `G`, rad/s per m.
    pub frequency_pull: f64,
    pub photon_number: f64,
    /// Cavity amplitude decay rate, rad/s.
    pub kappa: f64,
    /// Photon collection efficiency.
    pub efficiency: f64,
}

impl QuantumNoiseInput {
    pub fn from_system(system: &CoupledSystem, mass: ReducedMass) -> Result<Self> {
        let p = coupling_params(system)?;
        Ok(Self {
            reduced_mass: require_positive("reduced_mass", mass.resolve(system.osc.mass))?,
            osc: system.osc,
            frequency_pull: p.frequency_pull,
            photon_number: p.photon_number,
            kappa: system.kappa(),
            efficiency: system.drive.efficiency,
        })
    }

    /// `4ħ²G²n̄/κ`, the low-frequency back-action force PSD.
    fn back_action_scale(&self) -> f64 {
        4.0 * HBAR * HBAR * self.frequency_pull.powi(2) * self.photon_number / self.kappa
    }

    fn cavity_pole(&self, omega: f64) -> f64 {
        1.0 + (omega / self.kappa).powi(2)
    }
}

/// Susceptibility of the reduced mass, `χ_M(ω)`.
pub fn reduced_susceptibility(input: &QuantumNoiseInput, omega: f64) -> Result<Complex64> {
    let omega = require_frequency(omega)?;
    let o = &input.osc;
    Ok(harmonic_response(
        input.reduced_mass,
        o.omega_m,
        o.damping_rate(omega),
        omega,
    ))
}

/// Back-action to shot-noise balance `𝒦(ω)`; the SQL is touched where it
/// equals one.
pub fn kappa_factor(input: &QuantumNoiseInput, omega: f64) -> Result<f64> {
    let chi = reduced_susceptibility(input, omega)?.norm();
    Ok(4.0 * HBAR * input.frequency_pull.powi(2) * input.photon_number * chi
        / input.kappa
        / input.cavity_pole(omega))
}

/// `x_SQL² = 2ħ|χ_M|`, m²/Hz.
pub fn sql_psd(input: &QuantumNoiseInput, omega: f64) -> Result<f64> {
    Ok(2.0 * HBAR * reduced_susceptibility(input, omega)?.norm())
}

/// Total quantum noise in displacement, with shot noise divided by the
/// collection efficiency.
pub fn quantum_noise_displacement_psd(input: &QuantumNoiseInput, omega: f64) -> Result<f64> {
    Ok(shot_noise_psd(input, omega)? + radiation_pressure_psd(input, omega)?)
}

/// Radiation-pressure noise in displacement, m²/Hz.
pub fn radiation_pressure_psd(input: &QuantumNoiseInput, omega: f64) -> Result<f64> {
    let chi = reduced_susceptibility(input, omega)?.norm_sqr();
    Ok(chi * radiation_pressure_force_psd(input, omega)?)
}

/// Radiation-pressure force noise, N²/Hz; flat below the cavity pole.
pub fn radiation_pressure_force_psd(input: &QuantumNoiseInput, omega: f64) -> Result<f64> {
    let omega = require_frequency(omega)?;
    Ok(input.back_action_scale() / input.cavity_pole(omega))
}

/// Shot noise in displacement, m²/Hz, including the collection efficiency.
pub fn shot_noise_psd(input: &QuantumNoiseInput, omega: f64) -> Result<f64> {
    let omega = require_frequency(omega)?;
    let gain = 4.0 * input.frequency_pull.powi(2) * input.photon_number;
    if gain <= 0.0 {
        return Err(Error::NoLight);
    }
    Ok(input.kappa * input.cavity_pole(omega) / gain / input.efficiency)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqlTouch {
    /// `ω_SQL`, rad/s.
    pub omega: f64,
    /// `true` when `ω_m ≪ ω_SQL ≪ κ` holds with a factor of ten margin on
    /// both sides; outside that range the closed form is only indicative.
    pub free_mass_regime: bool,
}

const REGIME_MARGIN: f64 = 10.0;

/// Free-mass SQL touching frequency `√(4ħG²n̄/(Mκ))`.
pub fn sql_touching_frequency(input: &QuantumNoiseInput) -> SqlTouch {
    let omega = (4.0 * HBAR * input.frequency_pull.powi(2) * input.photon_number
        / (input.reduced_mass * input.kappa))
        .sqrt();
    SqlTouch {
        omega,
        free_mass_regime: omega > REGIME_MARGIN * input.osc.omega_m
            && omega * REGIME_MARGIN < input.kappa,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mechanism {
    Shot,
    RadiationPressure,
    Thermal,
}

impl Mechanism {
    pub const ALL: [Mechanism; 3] = [Mechanism::Shot, Mechanism::RadiationPressure, Mechanism::Thermal];

    pub fn name(self) -> &'static str {
        match self {
            Mechanism::Shot => "shot",
            Mechanism::RadiationPressure => "rad",
            Mechanism::Thermal => "thermal",
        }
    }
}

impl fmt::Display for Mechanism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One noise mechanism on the budget grid.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseColumn {
    /// m²/Hz
    pub displacement: Vec<f64>,
    /// N²/Hz
    pub force: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BudgetMetadata {
    pub system: CoupledSystem,
    pub damping: DampingModel,
    /// The system is detuned but quantum noise was evaluated on resonance.
    pub detuning_approximated: bool,
    pub sql: SqlTouch,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NoiseBudget {
    pub grid: FrequencyGrid,
    pub columns: Vec<(Mechanism, NoiseColumn)>,
    /// Incoherent sum of all selected columns.
    pub total: NoiseColumn,
    pub metadata: BudgetMetadata,
}

impl NoiseBudget {
    pub fn column(&self, mechanism: Mechanism) -> Option<&NoiseColumn> {
        self.columns
            .iter()
            .find(|(m, _)| *m == mechanism)
            .map(|(_, c)| c)
    }
}

/// Evaluate the selected mechanisms on `grid` for a single movable mirror.
/// Independent mechanisms add in power.
pub fn build_budget(
    system: &CoupledSystem,
    grid: &FrequencyGrid,
    mechanisms: &[Mechanism],
) -> Result<NoiseBudget> {
    let mut selected: Vec<Mechanism> = mechanisms.to_vec();
    selected.sort();
    selected.dedup();
    if selected.is_empty() {
        return Err(Error::Config("noise budget needs at least one mechanism".into()));
    }
    let input = QuantumNoiseInput::from_system(system, ReducedMass::SingleMirror)?;
    let osc = system.osc;

    let rows: Vec<Vec<(f64, f64)>> = grid
        .points()
        .par_iter()
        .map(|&omega| {
            let chi2 = susceptibility(&osc, omega)?.norm_sqr();
            selected
                .iter()
                .map(|m| {
                    let x = match m {
                        Mechanism::Shot => shot_noise_psd(&input, omega)?,
                        Mechanism::RadiationPressure => radiation_pressure_psd(&input, omega)?,
                        Mechanism::Thermal => chi2 * thermal_force_psd(&osc, omega)?,
                    };
                    Ok((x, x / chi2))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;

    let n = grid.len();
    let mut columns: Vec<(Mechanism, NoiseColumn)> = selected
        .iter()
        .map(|&m| {
            (
                m,
                NoiseColumn {
                    displacement: Vec::with_capacity(n),
                    force: Vec::with_capacity(n),
                },
            )
        })
        .collect();
    let mut total = NoiseColumn {
        displacement: vec![0.0; n],
        force: vec![0.0; n],
    };
    for (i, row) in rows.iter().enumerate() {
        for ((_, col), &(x, f)) in columns.iter_mut().zip(row) {
            col.displacement.push(x);
            col.force.push(f);
            total.displacement[i] += x;
            total.force[i] += f;
        }
    }

    Ok(NoiseBudget {
        grid: grid.clone(),
        columns,
        total,
        metadata: BudgetMetadata {
            system: *system,
            damping: osc.damping,
            detuning_approximated: system.drive.detuning != 0.0,
            sql: sql_touching_frequency(&input),
        },
    })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::model::{hz_to_rad, Curvature, LaserDrive, OpticalCavity};

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    fn reference(p_circ: f64, model: DampingModel) -> CoupledSystem {
        let osc = MechanicalOscillator::new(1e-6, 2.0 * PI, 1e9, model, 300.0).unwrap();
        let cav = OpticalCavity::from_finesse(0.1, 100.0, 1.0, Curvature::Flat, Curvature::Flat).unwrap();
        let drive = LaserDrive::new(1064e-9, 0.0, 0.0, 1.0).unwrap();
        CoupledSystem::with_circulating_power(osc, cav, drive, p_circ).unwrap()
    }

    fn input(p_circ: f64) -> QuantumNoiseInput {
        QuantumNoiseInput::from_system(&reference(p_circ, DampingModel::Structure), ReducedMass::SingleMirror).unwrap()
    }

    #[test]
    fn sql_frequency_reference() {
        let touch = sql_touching_frequency(&input(1.0));
        assert!(rel(touch.omega, hz_to_rad(504.097)) < 1e-5, "{}", touch.omega / (2.0 * PI));
        assert!(rel(touch.omega, hz_to_rad(500.0)) < 0.02);
        assert!(touch.free_mass_regime);
    }

    #[test]
    fn sql_frequency_scalings() {
        let base = sql_touching_frequency(&input(1.0)).omega;
        assert!(rel(sql_touching_frequency(&input(4.0)).omega, 2.0 * base) < 1e-12);
        let mich = QuantumNoiseInput::from_system(&reference(1.0, DampingModel::Structure), ReducedMass::Michelson).unwrap();
        assert!(rel(sql_touching_frequency(&mich).omega, 2f64.sqrt() * base) < 1e-12);
    }

    #[test]
    fn kappa_factor_is_one_at_sql() {
        let q = input(1.0);
        let w = sql_touching_frequency(&q).omega;
        // free-mass and cavity-pole corrections are O((ω_m/ω)²) and O((ω/κ)²)
        assert!((kappa_factor(&q, w).unwrap() - 1.0).abs() < 1e-4);
        assert!(kappa_factor(&q, 1e12).unwrap() < 1e-20);
        assert!(kappa_factor(&q, 0.0).is_err());
    }

    #[test]
    fn kappa_factor_fixture_50hz() {
        // K = 4ħG²n̄|χ|/κ/(1+(ω/κ)²) evaluated independently for the
        // reference system at 50 Hz
        let hbar = 6.626_070_15e-34 / (2.0 * PI);
        let c = 299_792_458.0;
        let omega_l = 2.0 * PI * c / 1064e-9;
        let big_g = omega_l / 0.1;
        let n = 2.0 * 0.1 / c / (hbar * omega_l);
        let kappa = PI * c / 0.1 / 200.0;
        let w = 2.0 * PI * 50.0;
        let wm = 2.0 * PI;
        let gamma = wm * wm / (w * 1e9);
        let chi = 1.0 / (1e-6 * ((wm * wm - w * w).powi(2) + (gamma * w).powi(2)).sqrt());
        let expected = 4.0 * hbar * big_g * big_g * n * chi / kappa / (1.0 + (w / kappa).powi(2));
        let k = kappa_factor(&input(1.0), w).unwrap();
        assert!(rel(k, expected) < 1e-12);
        assert!(rel(k, 101.63) < 1e-3, "{k}");
    }

    #[test]
    fn components_and_identities() {
        let q = input(1.0);
        for w in [1.0, 30.0, 3e3, 1e6] {
            let shot = shot_noise_psd(&q, w).unwrap();
            let rad = radiation_pressure_psd(&q, w).unwrap();
            let chi = reduced_susceptibility(&q, w).unwrap().norm();
            // uncertainty product √(S_rad S_shot) = ħ|χ| at η = 1
            assert!(rel((shot * rad).sqrt(), HBAR * chi) < 1e-12);
            let total = quantum_noise_displacement_psd(&q, w).unwrap();
            assert!(total >= sql_psd(&q, w).unwrap() * (1.0 - 1e-12));
        }
    }

    #[test]
    fn efficiency_scales_shot_only() {
        let q = input(1.0);
        let half = QuantumNoiseInput { efficiency: 0.5, ..q };
        let w = 100.0;
        assert!(rel(shot_noise_psd(&half, w).unwrap(), 2.0 * shot_noise_psd(&q, w).unwrap()) < 1e-15);
        assert_eq!(radiation_pressure_psd(&half, w).unwrap(), radiation_pressure_psd(&q, w).unwrap());
    }

    #[test]
    fn power_scaling() {
        let (a, b) = (input(1.0), input(3.0));
        let w = 200.0;
        assert!(rel(radiation_pressure_psd(&b, w).unwrap(), 3.0 * radiation_pressure_psd(&a, w).unwrap()) < 1e-12);
        assert!(rel(shot_noise_psd(&b, w).unwrap(), shot_noise_psd(&a, w).unwrap() / 3.0) < 1e-12);
    }

    #[test]
    fn dark_cavity_has_no_shot_noise() {
        let q = input(0.0);
        assert!(matches!(shot_noise_psd(&q, 10.0), Err(Error::NoLight)));
        assert!(matches!(quantum_noise_displacement_psd(&q, 10.0), Err(Error::NoLight)));
        assert_eq!(radiation_pressure_psd(&q, 10.0).unwrap(), 0.0);
    }

    #[test]
    fn cavity_pole_rolloff() {
        let q = input(1.0);
        let low = radiation_pressure_force_psd(&q, 1e-3).unwrap();
        for w in [q.kappa * 0.1, q.kappa, q.kappa * 7.0] {
            let ratio = radiation_pressure_force_psd(&q, w).unwrap() / q.back_action_scale();
            assert!(rel(ratio, 1.0 / (1.0 + (w / q.kappa).powi(2))) < 1e-14);
        }
        assert!(rel(low, q.back_action_scale()) < 1e-12);
    }

    #[test]
    fn budget_composition() {
        let sys = reference(1.0, DampingModel::Structure);
        let grid = FrequencyGrid::log_spaced_hz(1.0, 1e4, 200).unwrap();
        let all = build_budget(&sys, &grid, &Mechanism::ALL).unwrap();
        let quantum = build_budget(&sys, &grid, &[Mechanism::Shot, Mechanism::RadiationPressure]).unwrap();
        let q = QuantumNoiseInput::from_system(&sys, ReducedMass::SingleMirror).unwrap();
        for (i, &w) in grid.points().iter().enumerate() {
            for (_, col) in &all.columns {
                assert!(all.total.displacement[i] >= col.displacement[i]);
                assert!(col.displacement[i] >= 0.0);
            }
            let qn = quantum_noise_displacement_psd(&q, w).unwrap();
            assert!(rel(quantum.total.displacement[i], qn) < 1e-12);
            let chi2 = susceptibility(&sys.osc, w).unwrap().norm_sqr();
            assert!(rel(all.total.force[i], all.total.displacement[i] / chi2) < 1e-12);
        }
        assert!(!all.metadata.detuning_approximated);
        assert!(build_budget(&sys, &grid, &[]).is_err());
    }

    #[test]
    fn structure_thermal_meets_back_action_below_sql() {
        let sys = reference(1.0, DampingModel::Structure);
        let grid = FrequencyGrid::log_spaced_hz(0.01, 1e4, 600).unwrap();
        let b = build_budget(&sys, &grid, &Mechanism::ALL).unwrap();
        let th = &b.column(Mechanism::Thermal).unwrap().force;
        let rad = &b.column(Mechanism::RadiationPressure).unwrap().force;
        let crossing = (1..grid.len())
            .find(|&i| (th[i - 1] - rad[i - 1]).signum() != (th[i] - rad[i]).signum())
            .map(|i| grid.points()[i])
            .expect("thermal and back-action curves cross");
        assert!(crossing < b.metadata.sql.omega);
        assert!(th[0] > rad[0]);
    }

    #[test]
    fn detuned_budget_is_flagged() {
        let mut sys = reference(1.0, DampingModel::Viscous);
        sys.drive.detuning = 1e3;
        let grid = FrequencyGrid::log_spaced_hz(1.0, 10.0, 3).unwrap();
        assert!(build_budget(&sys, &grid, &[Mechanism::Thermal]).unwrap().metadata.detuning_approximated);
    }
}
