//! Optical spring and damping across the detuning, comparing the full
//! two-sideband result with its bad-cavity limit.

use optomech::coupling::{effective_dynamics, optical_spring_doppler, optical_spring_full, CoupledSystem};
use optomech::model::{hz_to_rad, rad_to_hz, Curvature, DampingModel, LaserDrive, MechanicalOscillator, OpticalCavity};

fn main() -> optomech::Result<()> {
    let osc = MechanicalOscillator::new(1e-6, hz_to_rad(100.0), 1e6, DampingModel::Viscous, 300.0)?;
    let cavity = OpticalCavity::from_finesse(0.1, 1e4, 1.0, Curvature::Flat, Curvature::Flat)?;
    let drive = LaserDrive::new(1064e-9, 0.0, 0.0, 1.0)?;
    let system = CoupledSystem::with_circulating_power(osc, cavity, drive, 1e-3)?;
    let kappa = system.kappa();

    println!("kappa/2pi = {:.1} kHz, f_m = 100 Hz", rad_to_hz(kappa) / 1e3);
    println!("{:>8} {:>14} {:>14} {:>14} {:>9}", "D/kappa", "df_opt (Hz)", "gamma_opt", "doppler", "stable");
    for d in [-2.0, -1.0, -0.5, -0.1, 0.1, 0.5, 1.0, 2.0] {
        let full = optical_spring_full(&system, d * kappa)?;
        let approx = optical_spring_doppler(&system, d * kappa)?;
        let eff = effective_dynamics(&osc, &[full]);
        println!(
            "{d:>8.1} {:>14.4e} {:>14.4e} {:>14.4e} {:>9}",
            rad_to_hz(full.frequency_shift),
            full.damping,
            approx.damping,
            eff.stable
        );
    }
    Ok(())
}
