//! Highest-Q fused silica suspension for a 1 mg mirror, and the damping it
//! faces from gas and thermoelastic loss.

use optomech::model::{Environment, Gas};
use optomech::suspension::{max_q_design, total_pendulum_damping, DesignConstraints, IntrinsicLoss, WireMaterial};

fn main() -> optomech::Result<()> {
    let mass = 1e-6;
    let material = WireMaterial::FUSED_SILICA;
    for f_v in [100.0, 300.0, 1000.0] {
        let d = max_q_design(mass, &material, IntrinsicLoss::Constant(1e6), &DesignConstraints::new(f_v))?;
        println!(
            "f_v >= {f_v:>6.0} Hz: r = {:.3} um, l = {:.3} m, dilution {:.3e}, Q = {:.3e} (radius: {}, length: {})",
            d.suspension.radius * 1e6,
            d.suspension.length,
            d.springs.dilution,
            d.q(),
            d.radius_limit.name(),
            d.length_limit.name()
        );
    }

    let design = max_q_design(mass, &material, IntrinsicLoss::Constant(1e6), &DesignConstraints::new(300.0))?;
    let env = Environment::disk(1e-5, Gas::Helium, 2e-3, mass / (2200.0 * std::f64::consts::PI * 1e-6))?;
    let omega = design.springs.omega(mass);
    let b = total_pendulum_damping(mass, &design.suspension, &env, 300.0, omega)?;
    println!("\ndamping at the pendulum frequency: {b:#?}");
    Ok(())
}
