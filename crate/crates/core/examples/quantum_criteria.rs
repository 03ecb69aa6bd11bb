//! Quantum cooperativity, measurement rate and the f*Q criterion for a 1 Hz
//! mirror stiffened by a blue-detuned beam, with a weaker red-detuned beam
//! supplying the damping the blue one removes.

use optomech::coupling::{effective_dynamics, optical_spring_full, CoupledSystem};
use optomech::criteria::{evaluate_criteria, fq_criterion_effective};
use optomech::model::{hz_to_rad, rad_to_hz, Curvature, DampingModel, LaserDrive, MechanicalOscillator, OpticalCavity};

fn main() -> optomech::Result<()> {
    let osc = MechanicalOscillator::new(1e-6, hz_to_rad(1.0), 1e5, DampingModel::Structure, 300.0)?;
    let cavity = OpticalCavity::from_finesse(0.1, 1e4, 1.0, Curvature::Flat, Curvature::Flat)?;
    let drive = LaserDrive::new(1064e-9, 0.0, 0.0, 1.0)?;
    let beam = |p: f64| CoupledSystem::with_circulating_power(osc, cavity, drive, p);

    let blue_sys = beam(2e-4)?;
    let kappa = blue_sys.kappa();
    let blue = optical_spring_full(&blue_sys, 3.0 * kappa)?;
    // red power scales linearly; pick it to give twice the blue anti-damping back
    let red_per_watt = optical_spring_full(&beam(1.0)?, -0.3 * kappa)?;
    let red_power = -2.0 * blue.damping / red_per_watt.damping;
    let red = optical_spring_full(&beam(red_power)?, -0.3 * kappa)?;

    let eff = effective_dynamics(&osc, &[blue, red]);
    let report = evaluate_criteria(&blue_sys, &eff)?;

    println!("red beam {:.3e} W, f_eff = {:.1} Hz, stable: {}", red_power, rad_to_hz(eff.omega_eff), eff.stable);
    println!(
        "C = {:.3e}, C_qu = {:.3e} ({})",
        report.cooperativity.c,
        report.cooperativity.c_qu,
        verdict(report.verdicts.quantum_cooperativity)
    );
    println!(
        "Gamma_meas = {:.3e} /s vs Gamma_th = {:.3e} /s ({})",
        report.measurement_rate,
        report.decoherence_rate,
        verdict(report.verdicts.measurement_rate)
    );
    println!("f Q = {:.3e} Hz, threshold {:.3e} Hz ({})", report.fq.product, report.fq.threshold, verdict(report.fq.pass));
    println!("n_eff = {:.3e}", report.occupancy.n_eff);

    // a trapped mode specified directly by its effective frequency and Q
    let trapped = fq_criterion_effective(280.0, 3e10, 300.0);
    println!("trapped 280 Hz, Q 3e10: margin {:.3} ({})", trapped.margin, verdict(trapped.pass));
    Ok(())
}

fn verdict(pass: bool) -> &'static str {
    if pass { "PASS" } else { "FAIL" }
}
