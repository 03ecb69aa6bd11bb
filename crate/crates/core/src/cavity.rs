//! Static Fabry-Pérot quantities: free spectral range, linewidth, finesse,
//! circulating power and intracavity photon number.

use std::f64::consts::PI;

use crate::error::{require_non_negative, Result};
use crate::model::{LaserDrive, OpticalCavity, C, HBAR};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CouplingRegime {
    Over,
    Critical,
    Under,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityResponse {
    /// Free spectral range, rad/s.
    pub omega_fsr: f64,
    pub finesse: f64,
    /// Total amplitude decay rate, rad/s.
    pub kappa: f64,
    /// Amplitude decay rate through the input mirror, rad/s.
    pub kappa_in: f64,
    pub regime: CouplingRegime,
}

impl CavityResponse {
    /// Mean number of round trips before a photon leaves, `2F/π`.
    pub fn round_trips(&self) -> f64 {
        2.0 * self.finesse / PI
    }
}

// relative tolerance for calling a cavity critically coupled
const CRITICAL_TOL: f64 = 1e-9;

pub fn cavity_response(cav: &OpticalCavity) -> CavityResponse {
    let per_loss = C / (4.0 * cav.length);
    let omega_fsr = PI * C / cav.length;
    let kappa_in = cav.input_transmission * per_loss;
    let kappa = kappa_in + cav.extra_loss * per_loss;
    let ratio = kappa_in / kappa;
    let regime = if (ratio - 0.5).abs() <= CRITICAL_TOL {
        CouplingRegime::Critical
    } else if ratio > 0.5 {
        CouplingRegime::Over
    } else {
        CouplingRegime::Under
    };
    CavityResponse {
        omega_fsr,
        finesse: omega_fsr / (2.0 * kappa),
        kappa,
        kappa_in,
        regime,
    }
}

/// Circulating power for the drive's input power and detuning, W.
pub fn circulating_power(cav: &OpticalCavity, drive: &LaserDrive) -> f64 {
    let r = cavity_response(cav);
    let lorentz = 1.0 + (drive.detuning / r.kappa).powi(2);
    r.round_trips() * (r.kappa_in / r.kappa) * drive.input_power / lorentz
}

/// Mean number of photons stored in the cavity, `(2L/c) P_circ / (ħ ω_L)`.
pub fn intracavity_photon_number(
    cav: &OpticalCavity,
    drive: &LaserDrive,
    circulating: f64,
) -> Result<f64> {
    let p = require_non_negative("circulating_power", circulating)?;
    Ok(2.0 * cav.length / C * p / (HBAR * drive.omega_laser()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Curvature;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    fn cavity(t_in: f64, loss: f64) -> OpticalCavity {
        OpticalCavity::new(0.1, t_in, loss, Curvature::Flat, Curvature::Radius(1.0)).unwrap()
    }

    #[test]
    fn fsr_and_linewidth() {
        let cav = OpticalCavity::from_finesse(0.1, 100.0, 1.0, Curvature::Flat, Curvature::Flat).unwrap();
        let r = cavity_response(&cav);
        assert!(rel(r.omega_fsr, 9.42e9) < 1e-3);
        assert!(rel(r.kappa, 4.71e7) < 1e-3);
        assert!(rel(r.finesse, 100.0) < 1e-12);
        assert!(rel(r.kappa_in, cav.input_transmission * C / 0.4) < 1e-15);
        assert!(r.round_trips() > 0.0);
    }

    #[test]
    fn regimes() {
        assert_eq!(cavity_response(&cavity(0.01, 0.01)).regime, CouplingRegime::Critical);
        assert_eq!(cavity_response(&cavity(0.02, 0.01)).regime, CouplingRegime::Over);
        assert_eq!(cavity_response(&cavity(0.01, 0.02)).regime, CouplingRegime::Under);
    }

    #[test]
    fn critical_resonant_power() {
        let cav = OpticalCavity::from_finesse(0.1, 100.0, 0.5, Curvature::Flat, Curvature::Flat).unwrap();
        let drive = LaserDrive::new(1064e-9, 1.0, 0.0, 1.0).unwrap();
        let p = circulating_power(&cav, &drive);
        assert!(rel(p, 100.0 / PI) < 1e-12);
        assert!(rel(p, 31.8) < 1e-3);
    }

    #[test]
    fn detuning_lorentzian() {
        let cav = cavity(0.01, 0.01);
        let kappa = cavity_response(&cav).kappa;
        let on = circulating_power(&cav, &LaserDrive::new(1064e-9, 1.0, 0.0, 1.0).unwrap());
        let half = circulating_power(&cav, &LaserDrive::new(1064e-9, 1.0, kappa, 1.0).unwrap());
        let far = circulating_power(&cav, &LaserDrive::new(1064e-9, 1.0, 1e6 * kappa, 1.0).unwrap());
        assert!(rel(half, on / 2.0) < 1e-12);
        assert!(far < on * 1e-11);
        let minus = circulating_power(&cav, &LaserDrive::new(1064e-9, 1.0, -0.3 * kappa, 1.0).unwrap());
        let plus = circulating_power(&cav, &LaserDrive::new(1064e-9, 1.0, 0.3 * kappa, 1.0).unwrap());
        assert_eq!(minus, plus);
    }

    #[test]
    fn critical_coupling_maximizes_power() {
        let loss = 0.01;
        let drive = LaserDrive::new(1064e-9, 1.0, 0.0, 1.0).unwrap();
        let best = circulating_power(&cavity(loss, loss), &drive);
        for i in 1..200 {
            let t_in = 0.0005 * i as f64;
            assert!(circulating_power(&cavity(t_in, loss), &drive) <= best * (1.0 + 1e-12));
        }
    }

    #[test]
    fn photon_number() {
        let cav = cavity(0.01, 0.0);
        let drive = LaserDrive::new(1064e-9, 1.0, 0.0, 1.0).unwrap();
        let n = intracavity_photon_number(&cav, &drive, 1.0).unwrap();
        assert!(rel(n, 3.573e9) < 1e-3, "{n}");
        assert_eq!(intracavity_photon_number(&cav, &drive, 0.0).unwrap(), 0.0);
        let long = OpticalCavity { length: 0.2, ..cav };
        assert!(rel(intracavity_photon_number(&long, &drive, 1.0).unwrap(), 2.0 * n) < 1e-12);
        assert!(intracavity_photon_number(&cav, &drive, -1.0).is_err());
    }
}
