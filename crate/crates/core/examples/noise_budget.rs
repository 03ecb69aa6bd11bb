//! Displacement noise budget of a 1 mg mirror in a 10 cm cavity, written as
//! CSV to stdout.

use optomech::cli::write_budget_csv;
use optomech::coupling::CoupledSystem;
use optomech::model::{hz_to_rad, rad_to_hz, Curvature, DampingModel, FrequencyGrid, LaserDrive, MechanicalOscillator, OpticalCavity};
use optomech::quantum_noise::{build_budget, Mechanism};

fn main() -> optomech::Result<()> {
    let osc = MechanicalOscillator::new(1e-6, hz_to_rad(1.0), 1e5, DampingModel::Viscous, 300.0)?;
    let cavity = OpticalCavity::from_finesse(0.1, 100.0, 1.0, Curvature::Flat, Curvature::Radius(0.2))?;
    let drive = LaserDrive::new(1064e-9, 0.0, 0.0, 1.0)?;
    let system = CoupledSystem::with_circulating_power(osc, cavity, drive, 1.0)?;

    let grid = FrequencyGrid::log_spaced_hz(1.0, 1e4, 200)?;
    let budget = build_budget(&system, &grid, &Mechanism::ALL)?;
    eprintln!(
        "SQL touched at {:.1} Hz (free-mass regime: {})",
        rad_to_hz(budget.metadata.sql.omega),
        budget.metadata.sql.free_mass_regime
    );
    write_budget_csv(&budget, std::io::stdout().lock())
}
