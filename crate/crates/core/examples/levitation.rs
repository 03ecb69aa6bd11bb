//! Optical levitation of a 1 mg mirror: the power needed, where the SQL can
//! be reached, and whether a two-cavity sandwich traps every degree of
//! freedom.

use optomech::levitation::{finesse_advisory, levitation_power, levitation_sql_frequency, sandwich_stability_check, Sandwich};
use optomech::model::{Curvature, OpticalCavity};

fn main() -> optomech::Result<()> {
    let mass = 1e-6;
    let wavelength = 1064e-9;
    let p_lev = levitation_power(mass)?;
    println!("levitation needs {p_lev:.1} W circulating");

    for finesse in [10.0, 100.0, 1000.0] {
        let f_sql = levitation_sql_frequency(finesse, wavelength)? / (2.0 * std::f64::consts::PI);
        let adv = finesse_advisory(finesse, 0.1, wavelength)?;
        println!(
            "F = {finesse:>6}: SQL reached at {f_sql:.1} Hz, F/F_max = {:.3e}{}",
            adv.ratio,
            if adv.comfortable { "" } else { " (too close to the bound)" }
        );
    }

    // lower cavity nearly flat at the levitated mirror, upper cavity near
    // concentric so its torque restores
    let lower = OpticalCavity::from_finesse(0.1, 100.0, 1.0, Curvature::Flat, Curvature::Radius(0.1111))?;
    let upper = OpticalCavity::from_finesse(0.1, 100.0, 1.0, Curvature::Radius(0.05128), Curvature::Radius(0.05128))?;
    for upper_power in [0.0, 150.0] {
        let report = sandwich_stability_check(&Sandwich {
            mass,
            lower,
            lower_power: p_lev + upper_power + 330.0,
            upper: (upper_power > 0.0).then_some((upper, upper_power)),
            convex_downward: true,
        })?;
        println!("\nupper cavity at {upper_power} W: all trapped = {}", report.all_pass());
        for note in &report.notes {
            println!("  {note}");
        }
    }
    Ok(())
}
