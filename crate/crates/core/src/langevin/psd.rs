//! Averaged-periodogram (Welch) spectral estimates.
//!
//! Segments overlap by half and are Hann-windowed and mean-subtracted. The
//! one-sided estimate is `2|X_k|² Δt / Σw²`, so that integrating it over
//! frequency returns the variance of the record. Averaging `K` segments
//! brings the per-bin standard deviation down to roughly `1/√K` of the
//! value; the window spreads a narrow peak over about two bins, which biases
//! a resonance sampled with fewer than a few bins per linewidth.

use num_complex::Complex64;
use rustfft::FftPlanner;

use super::sim::Trajectory;
use crate::error::{Error, Result};

pub const MIN_SEGMENTS: usize = 8;
const MIN_SEGMENT_LEN: usize = 16;
/// Record length required for a spectral estimate, in units of the longer
/// of the relaxation time and the mechanical period.
pub const MIN_RELAXATION_TIMES: f64 = 100.0;

#[derive(Debug, Clone, PartialEq)]
pub struct Psd {
    pub f_hz: Vec<f64>,
    /// One-sided PSD, units² per Hz.
    pub psd: Vec<f64>,
    pub segments: usize,
}

impl Psd {
    pub fn df(&self) -> f64 {
        self.f_hz[1] - self.f_hz[0]
    }

    /// `∫ S df` by the rectangle rule, excluding the DC bin.
    pub fn integral(&self) -> f64 {
        self.psd.iter().skip(1).sum::<f64>() * self.df()
    }
}

/// Welch estimate of a uniformly sampled series.
pub fn welch(samples: &[f64], dt: f64, segments: usize) -> Result<Psd> {
    if segments < MIN_SEGMENTS {
        return Err(Error::Simulation(format!(
            "need at least {MIN_SEGMENTS} segments, got {segments}"
        )));
    }
    let n = 2 * samples.len() / (segments + 1);
    if n < MIN_SEGMENT_LEN {
        return Err(Error::Simulation(format!(
            "{} samples are too few for {segments} segments",
            samples.len()
        )));
    }
    let hop = n / 2;
    let window: Vec<f64> = (0..n)
        .map(|i| {
            let s = (std::f64::consts::PI * i as f64 / n as f64).sin();
            s * s
        })
        .collect();
    let norm = window.iter().map(|w| w * w).sum::<f64>();
    let fft = FftPlanner::new().plan_fft_forward(n);
    let bins = n / 2 + 1;
    let mut acc = vec![0.0; bins];
    let mut buf = vec![Complex64::default(); n];
    for k in 0..segments {
        let seg = &samples[k * hop..k * hop + n];
        let mean = seg.iter().sum::<f64>() / n as f64;
        for ((b, s), w) in buf.iter_mut().zip(seg).zip(&window) {
            *b = Complex64::new((s - mean) * w, 0.0);
        }
        fft.process(&mut buf);
        for (a, b) in acc.iter_mut().zip(&buf) {
            *a += b.norm_sqr();
        }
    }
    let scale = dt / (norm * segments as f64);
    let psd = acc
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let one_sided = if i == 0 || (n.is_multiple_of(2) && i == n / 2) { 1.0 } else { 2.0 };
            one_sided * a * scale
        })
        .collect();
    let df = 1.0 / (n as f64 * dt);
    Ok(Psd {
        f_hz: (0..bins).map(|i| i as f64 * df).collect(),
        psd,
        segments,
    })
}

/// Displacement PSD of a simulated trajectory. The record must cover
/// [`MIN_RELAXATION_TIMES`] relaxation times or mechanical periods,
/// whichever is longer.
pub fn psd_estimate(traj: &Trajectory, segments: usize) -> Result<Psd> {
    let cfg = &traj.config;
    let scale = (1.0 / cfg.gamma_eff()).max(2.0 * std::f64::consts::PI / cfg.osc.omega_m);
    let needed = MIN_RELAXATION_TIMES * scale;
    let have = (traj.len().saturating_sub(1)) as f64 * cfg.dt;
    if have < needed * (1.0 - 1e-12) {
        return Err(Error::Simulation(format!(
            "trajectory of {have:.4e} s is shorter than the {needed:.4e} s needed for a spectral estimate"
        )));
    }
    welch(&traj.x, cfg.dt, segments)
}

#[cfg(test)]
mod tests {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    use super::*;
    use crate::langevin::sim::variance;

    fn white(n: usize, sigma: f64, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| sigma * rng.sample::<f64, _>(StandardNormal)).collect()
    }

    #[test]
    fn white_noise_level() {
        // variance σ² spread over [0, 1/(2Δt)] gives 2σ²Δt
        let dt = 1e-3;
        let x = white(1 << 20, 2.0, 5);
        let p = welch(&x, dt, 64).unwrap();
        let level = 2.0 * 4.0 * dt;
        let inner = &p.psd[1..p.psd.len() - 1];
        let mean = inner.iter().sum::<f64>() / inner.len() as f64;
        assert!((10.0 * (mean / level).log10()).abs() < 0.5);
        for chunk in inner.chunks(inner.len() / 8) {
            let m = chunk.iter().sum::<f64>() / chunk.len() as f64;
            assert!((10.0 * (m / level).log10()).abs() < 0.5);
        }
    }

    #[test]
    fn parseval() {
        let x = white(100_000, 1.0, 6);
        let p = welch(&x, 0.01, 16).unwrap();
        assert!((p.integral() / variance(&x) - 1.0).abs() < 0.05);
    }

    #[test]
    fn sinusoid_power_lands_in_its_bin() {
        let dt = 1e-3;
        let f0 = 50.0;
        let x: Vec<f64> = (0..80_000).map(|i| (2.0 * std::f64::consts::PI * f0 * i as f64 * dt).sin()).collect();
        let p = welch(&x, dt, 9).unwrap();
        let peak = p.psd.iter().cloned().enumerate().fold((0, 0.0), |a, b| if b.1 > a.1 { b } else { a });
        assert!((p.f_hz[peak.0] - f0).abs() <= p.df());
        assert!((p.integral() - 0.5).abs() < 0.01);
    }

    #[test]
    fn guards() {
        let x = white(1000, 1.0, 1);
        assert!(welch(&x, 1.0, 4).is_err());
        assert!(welch(&x[..50], 1.0, 8).is_err());
    }
}
