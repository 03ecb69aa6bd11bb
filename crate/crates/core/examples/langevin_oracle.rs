//! Check the analytic thermal noise against a simulated Brownian oscillator,
//! then watch a mode reheat from rest.

use optomech::langevin::{psd_estimate, reheating_experiment, simulate, SimConfig};
use optomech::mechanics::{thermal_decoherence_rate, thermal_displacement_psd};
use optomech::model::{hz_to_rad, DampingModel, MechanicalOscillator, K_B};

fn main() -> optomech::Result<()> {
    let osc = MechanicalOscillator::new(1e-6, hz_to_rad(1.0), 20.0, DampingModel::Viscous, 300.0)?;
    let cfg = SimConfig::new(osc, 0.01, 20_000.0, 7);
    let traj = simulate(&cfg)?;
    let expected = K_B * osc.temperature / (osc.mass * osc.omega_m.powi(2));
    println!("<x^2> = {:.4e} m^2, equipartition {expected:.4e} m^2", traj.variance());
    println!("T_eff = {:.2} K", traj.effective_temperature());

    let psd = psd_estimate(&traj, 64)?;
    println!("\n f (Hz)   simulated    analytic");
    for target in [0.3, 0.8, 1.0, 1.2, 3.0] {
        let i = psd.f_hz.iter().position(|&f| f >= target).unwrap();
        let f = psd.f_hz[i];
        println!("{f:>7.3}  {:.4e}  {:.4e}", psd.psd[i], thermal_displacement_psd(&osc, hz_to_rad(f))?);
    }

    // start every trial at rest, as if the mode had just been cooled
    let curve = reheating_experiment(&SimConfig::new(osc, 0.01, 30.0, 11), 256)?;
    println!(
        "\nreheating: n_th = {:.3e}, initial rate {:.3e}/s, thermal decoherence rate {:.3e}/s",
        curve.fit.n_th,
        curve.fit.initial_slope(),
        thermal_decoherence_rate(&osc)
    );
    Ok(())
}
