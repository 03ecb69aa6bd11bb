//! A 10 mg bar on one silica fibre: how much weaker torsional damping is
//! than pendulum damping, and what that asks of a differential readout.

use optomech::model::{hz_to_rad, DampingModel};
use optomech::suspension::{pendulum_springs, tensile_status, IntrinsicLoss, Suspension, WireMaterial};
use optomech::torsion::{
    common_mode_rejection_requirement, damping_ratio, optical_lever_kappa, torsion_frequency, OpticalLever, TorsionBar,
    TorsionOscillator,
};

fn main() -> optomech::Result<()> {
    let bar = TorsionBar::new(1e-5, 0.01, 1.0 / 12.0)?;
    let fibre = Suspension::new(WireMaterial::FUSED_SILICA, IntrinsicLoss::Constant(1e6), 1.5e-6, 0.01, 1)?;

    let omega_tor = torsion_frequency(&fibre, &bar)?;
    println!("torsion frequency {:.4} Hz", omega_tor / (2.0 * std::f64::consts::PI));
    match pendulum_springs(bar.mass, &fibre) {
        Ok(p) => println!("pendulum Q {:.3e}", p.q_pendulum),
        Err(e) => println!("pendulum Q unavailable: {e}"),
    }

    let ratio = damping_ratio(&bar, &fibre)?;
    println!("gamma_tor/gamma_p = {:.4} (geometric), {:.4} (at the tensile limit)", ratio.geometric, ratio.tensile);
    println!("common-mode rejection needed: {:.3}", common_mode_rejection_requirement(ratio.geometric)?);
    let load = tensile_status(bar.mass, &fibre);
    if load.utilization > 1.0 {
        println!("warning: fibre stress is {:.2}x its safe limit", load.utilization);
    }

    let osc = TorsionOscillator::new(bar, hz_to_rad(0.06), 1e6, DampingModel::Structure, 300.0)?;
    let lever = OpticalLever::new(1e-3, 1e-3, 1064e-9)?;
    for f in [0.06, 1.0, 10.0] {
        println!("optical lever kappa at {f:>5} Hz: {:.3e}", optical_lever_kappa(&lever, &osc, hz_to_rad(f))?);
    }
    Ok(())
}
