//! Mirrors held up by radiation pressure: the power needed, the resulting
//! SQL frequency, the finesse ceiling that keeps that frequency below the
//! cavity pole, and sign checks for a two-cavity sandwich trap.

use std::f64::consts::PI;

use crate::coupling::{sidles_sigg_stiffness, Mirror};
use crate::error::{require_non_negative, require_positive, Result};
use crate::model::{OpticalCavity, C, G_GRAV};

/// Default advisory ratio `F / F_max` below which the finesse counts as
/// "much smaller" than the ceiling.
pub const FINESSE_ADVISORY_RATIO: f64 = 0.1;

/// Vertically projected circulating power needed to hold up `mass`,
/// `mgc/2`, W.
pub fn levitation_power(mass: f64) -> Result<f64> {
    Ok(require_positive("mass", mass)? * G_GRAV * C / 2.0)
}

/// SQL frequency when the supporting cavity also reads out the vertical
/// motion, `√(16 F g/λ)`; independent of the mass. rad/s.
pub fn levitation_sql_frequency(finesse: f64, wavelength: f64) -> Result<f64> {
    let f = require_positive("finesse", finesse)?;
    let l = require_positive("wavelength", wavelength)?;
    Ok((16.0 * f * G_GRAV / l).sqrt())
}

/// Finesse at which the levitation SQL frequency reaches the cavity
/// linewidth, `(π²c²λ/(64L²g))^(1/3)`.
pub fn finesse_bound(length: f64, wavelength: f64) -> Result<f64> {
    let len = require_positive("length", length)?;
    let l = require_positive("wavelength", wavelength)?;
    Ok((PI * PI * C * C * l / (64.0 * len * len * G_GRAV)).cbrt())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FinesseAdvisory {
    pub bound: f64,
    /// `F / F_max`
    pub ratio: f64,
    /// `ratio` is at or below [`FINESSE_ADVISORY_RATIO`].
    pub comfortable: bool,
}

pub fn finesse_advisory(finesse: f64, length: f64, wavelength: f64) -> Result<FinesseAdvisory> {
    let bound = finesse_bound(length, wavelength)?;
    let ratio = require_positive("finesse", finesse)? / bound;
    Ok(FinesseAdvisory {
        bound,
        ratio,
        comfortable: ratio <= FINESSE_ADVISORY_RATIO,
    })
}

/// Two vertical cavities around a levitated mirror. In both cavities the
/// levitated mirror is mirror 2 and the curvatures are as seen from inside
/// that cavity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sandwich {
    pub mass: f64,
    pub lower: OpticalCavity,
    /// Circulating power of the lower cavity, W; pushes the mirror up.
    pub lower_power: f64,
    /// Upper cavity and its circulating power; pushes the mirror down.
    pub upper: Option<(OpticalCavity, f64)>,
    /// Mirror curved convex side down, so gravity restores rotations about
    /// its centre of curvature.
    pub convex_downward: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SandwichReport {
    /// An optical spring exists for the vertical motion.
    pub vertical: bool,
    /// Gravity restores the rotational motion.
    pub rotational: bool,
    /// The net radiation-pressure angular stiffness restores.
    pub horizontal: bool,
    /// Net upward radiation force carries the weight.
    pub weight_supported: bool,
    /// Summed angular stiffness on the levitated mirror, N·m/rad, when both
    /// cavities are geometrically stable.
    pub net_stiffness: Option<f64>,
    /// `(P_lower − P_upper) / P_lev`
    pub support_ratio: f64,
    pub notes: Vec<String>,
}

impl SandwichReport {
    pub fn all_pass(&self) -> bool {
        self.vertical && self.rotational && self.horizontal && self.weight_supported
    }
}

/// Sign checks for trapping all degrees of freedom of a levitated mirror.
pub fn sandwich_stability_check(s: &Sandwich) -> Result<SandwichReport> {
    let p_lev = levitation_power(s.mass)?;
    let lower_power = require_non_negative("lower_power", s.lower_power)?;
    let mut notes = Vec::new();

    let mut net = Some(0.0);
    let mut upper_power = 0.0;
    let mut add = |name: &str, cav: &OpticalCavity, p: f64, notes: &mut Vec<String>| match sidles_sigg_stiffness(
        cav,
        p,
        Mirror::Movable,
    ) {
        Ok(k) => {
            notes.push(format!("{name} cavity g1*g2 = {:.4}, angular stiffness {k:.4e} N m/rad", cav.g1() * cav.g2()));
            net = net.map(|n| n + k);
        }
        Err(e) => {
            notes.push(format!("{name} cavity: {e}"));
            net = None;
        }
    };
    add("lower", &s.lower, lower_power, &mut notes);
    match &s.upper {
        Some((cav, p)) => {
            upper_power = require_non_negative("upper_power", *p)?;
            add("upper", cav, upper_power, &mut notes);
        }
        None => notes.push("no upper cavity".into()),
    }
    if s.lower.g2() > 0.0 && s.lower.g1() > 0.0 {
        notes.push("lower cavity is positive-g: anti-restoring on its own".into());
    }

    Ok(SandwichReport {
        vertical: lower_power > 0.0,
        rotational: s.convex_downward,
        horizontal: matches!(net, Some(k) if k > 0.0),
        weight_supported: lower_power - upper_power >= p_lev,
        net_stiffness: net,
        support_ratio: (lower_power - upper_power) / p_lev,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coupling::CoupledSystem;
    use crate::criteria::{cooperativity, fq_criterion_effective};
    use crate::model::{hz_to_rad, Curvature, DampingModel, LaserDrive, MechanicalOscillator};
    use crate::quantum_noise::{sql_touching_frequency, QuantumNoiseInput, ReducedMass};

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn power_reference() {
        let p = levitation_power(1e-6).unwrap();
        assert!(rel(p, 1470.0) < 2e-3, "{p}");
        // quoted to two significant figures as 1.5 kW
        assert_eq!((p / 100.0).round(), 15.0);
        assert!(rel(levitation_power(0.2e-6).unwrap(), 294.0) < 2e-3);
        assert!(rel(levitation_power(3e-6).unwrap(), 3.0 * p) < 1e-15);
        assert!(levitation_power(0.0).is_err());
    }

    #[test]
    fn sql_reference() {
        let w = levitation_sql_frequency(100.0, 1064e-9).unwrap();
        assert!(rel(w, hz_to_rad(19e3)) < 0.03, "{}", w / (2.0 * PI));
        assert!(rel(levitation_sql_frequency(400.0, 1064e-9).unwrap(), 2.0 * w) < 1e-12);
    }

    fn levitated_system(mass: f64, finesse: f64, length: f64) -> CoupledSystem {
        let osc = MechanicalOscillator::new(mass, hz_to_rad(340.0), 1e10, DampingModel::Viscous, 300.0).unwrap();
        let cav = OpticalCavity::from_finesse(length, finesse, 1.0, Curvature::Flat, Curvature::Radius(0.2)).unwrap();
        let drive = LaserDrive::new(1064e-9, 0.0, 0.0, 1.0).unwrap();
        CoupledSystem::with_circulating_power(osc, cav, drive, levitation_power(mass).unwrap()).unwrap()
    }

    #[test]
    fn sql_two_routes_for_any_mass() {
        let direct = levitation_sql_frequency(100.0, 1064e-9).unwrap();
        for mass in [1e-9, 1e-7, 2e-7, 1e-6, 1e-4, 1e-2] {
            let sys = levitated_system(mass, 100.0, 0.1);
            let q = QuantumNoiseInput::from_system(&sys, ReducedMass::SingleMirror).unwrap();
            assert!(rel(sql_touching_frequency(&q).omega, direct) < 1e-9);
        }
    }

    #[test]
    fn finesse_bound_reference_and_scalings() {
        let f = finesse_bound(0.1, 1064e-9).unwrap();
        assert!(rel(f, 5.32e3) < 2e-3, "{f}");
        assert!(rel(finesse_bound(0.8, 1064e-9).unwrap(), f / 4.0) < 1e-12);
        assert!(rel(finesse_bound(0.1, 8.0 * 1064e-9).unwrap(), 2.0 * f) < 1e-12);
        let adv = finesse_advisory(100.0, 0.1, 1064e-9).unwrap();
        assert!(adv.comfortable && adv.ratio < 0.02);
        assert!(!finesse_advisory(2000.0, 0.1, 1064e-9).unwrap().comfortable);
    }

    #[test]
    fn finesse_bound_is_where_sql_meets_linewidth() {
        let (len, lambda) = (0.1, 1064e-9);
        let kappa = |f: f64| PI * C / (2.0 * len * f);
        let gap = |f: f64| levitation_sql_frequency(f, lambda).unwrap() - kappa(f);
        let (mut lo, mut hi) = (1.0f64, 1e6);
        for _ in 0..200 {
            let mid = (lo * hi).sqrt();
            if gap(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert!(rel(lo, finesse_bound(len, lambda).unwrap()) < 1e-9);
    }

    #[test]
    fn levitated_cooperativity_scale() {
        // 0.2 mg mirror at 1e-5 Pa: gas damping 7e-8 s^-1, f_eff 340 Hz
        let mut sys = levitated_system(0.2e-6, 100.0, 0.1);
        sys.osc.q = sys.osc.omega_m / 7e-8;
        let c_qu = cooperativity(&sys).unwrap().c_qu;
        assert!((1e3..4e3).contains(&c_qu), "{c_qu}");
        let fq = fq_criterion_effective(340.0, hz_to_rad(340.0) / 7e-8, 300.0);
        assert!(rel(fq.product, 1e13) < 0.05);
        assert!(fq.pass);
    }

    fn concave_lower() -> OpticalCavity {
        // g1 = 1 (flat input), g2 = 0.1: positive-g, stable
        OpticalCavity::new(0.1, 0.01, 0.0, Curvature::Flat, Curvature::Radius(0.1 / 0.9)).unwrap()
    }

    fn negative_g_upper() -> OpticalCavity {
        // g1 = g2 = -0.95
        OpticalCavity::new(0.1, 0.01, 0.0, Curvature::Radius(0.1 / 1.95), Curvature::Radius(0.1 / 1.95)).unwrap()
    }

    #[test]
    fn sandwich_traps_everything() {
        let m = 0.2e-6;
        let p = levitation_power(m).unwrap();
        let s = Sandwich {
            mass: m,
            lower: concave_lower(),
            lower_power: 1.2 * p,
            upper: Some((negative_g_upper(), 0.1 * p)),
            convex_downward: true,
        };
        let r = sandwich_stability_check(&s).unwrap();
        assert!(r.all_pass(), "{r:?}");
        assert!(r.net_stiffness.unwrap() > 0.0);
    }

    #[test]
    fn lower_cavity_alone_is_anti_restoring() {
        let m = 0.2e-6;
        let p = levitation_power(m).unwrap();
        let s = Sandwich {
            mass: m,
            lower: concave_lower(),
            lower_power: p,
            upper: None,
            convex_downward: true,
        };
        let r = sandwich_stability_check(&s).unwrap();
        assert!(r.vertical && r.rotational && r.weight_supported);
        assert!(!r.horizontal);
        assert!(r.net_stiffness.unwrap() < 0.0);
    }

    #[test]
    fn dark_sandwich_fails_optical_checks() {
        let s = Sandwich {
            mass: 0.2e-6,
            lower: concave_lower(),
            lower_power: 0.0,
            upper: Some((negative_g_upper(), 0.0)),
            convex_downward: true,
        };
        let r = sandwich_stability_check(&s).unwrap();
        assert!(!r.vertical && !r.horizontal && !r.weight_supported);
    }
}
