//! Linewidth, coupling regime and the detuning response of a Fabry-Perot
//! cavity.

use optomech::cavity::{cavity_response, circulating_power, intracavity_photon_number};
use optomech::model::{rad_to_hz, Curvature, LaserDrive, OpticalCavity};

fn main() -> optomech::Result<()> {
    for (t_in, loss) in [(1e-3, 0.0), (1e-3, 1e-3), (1e-3, 4e-3)] {
        let cav = OpticalCavity::new(0.1, t_in, loss, Curvature::Flat, Curvature::Flat)?;
        let r = cavity_response(&cav);
        println!(
            "T_in {t_in:.0e} loss {loss:.0e}: F = {:.0}, kappa/2pi = {:.1} kHz, {:?} coupled, {:.0} round trips",
            r.finesse,
            rad_to_hz(r.kappa) / 1e3,
            r.regime,
            r.round_trips()
        );
    }

    let cav = OpticalCavity::from_finesse(0.1, 1e4, 1.0, Curvature::Flat, Curvature::Flat)?;
    let kappa = cavity_response(&cav).kappa;
    println!("\ndetuning/kappa  P_circ (W)  photons");
    for d in [0.0, 0.5, 1.0, 2.0, 5.0] {
        let drive = LaserDrive::new(1064e-9, 1e-3, d * kappa, 1.0)?;
        let p = circulating_power(&cav, &drive);
        let n = intracavity_photon_number(&cav, &drive, p)?;
        println!("{d:>14.1}  {p:>10.4}  {n:.3e}");
    }
    Ok(())
}
