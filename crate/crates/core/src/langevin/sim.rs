//! Exact discrete-time update of a viscously damped oscillator driven by
//! white force noise.
//!
//! Over one step the state `(x, v)` evolves as `s' = Φ s + w`, where `Φ` is
//! the matrix exponential of the drift and `w` is Gaussian with covariance
//! `Σ∞ − Φ Σ∞ Φᵀ`. Both are exact for any step size, so the only error is
//! sampling noise.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{DampingModel, MechanicalOscillator, HBAR, K_B};

/// Minimum number of samples per mechanical period.
pub const SAMPLES_PER_PERIOD: f64 = 50.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    /// Must use the viscous damping model.
    pub osc: MechanicalOscillator,
    /// s
    pub dt: f64,
    /// s
    pub duration: f64,
    pub seed: u64,
    /// Velocity feedback rate `g_fb`, s⁻¹; the feedback force is
    /// `−g_fb m v`.
    pub feedback_gain: f64,
    /// Additional white force noise, single-sided N²/Hz. Can stand in for
    /// radiation-pressure noise below the cavity pole.
    pub extra_force_psd: f64,
    /// `(x₀, v₀)` in m and m/s.
    pub initial: (f64, f64),
}

impl SimConfig {
    pub fn new(osc: MechanicalOscillator, dt: f64, duration: f64, seed: u64) -> Self {
        Self {
            osc,
            dt,
            duration,
            seed,
            feedback_gain: 0.0,
            extra_force_psd: 0.0,
            initial: (0.0, 0.0),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.osc.damping != DampingModel::Viscous {
            return Err(Error::Config(
                "time-domain simulation supports the viscous damping model only".into(),
            ));
        }
        let max_dt = 2.0 * std::f64::consts::PI / (SAMPLES_PER_PERIOD * self.osc.omega_m);
        if !(self.dt > 0.0 && self.dt < max_dt) {
            return Err(Error::Config(format!(
                "dt = {} s must be positive and below 2 pi/(50 omega_m) = {max_dt:.4e} s",
                self.dt
            )));
        }
        if !(self.duration.is_finite() && self.duration >= self.dt) {
            return Err(Error::Config(format!("duration {} s is shorter than one step", self.duration)));
        }
        if !(self.feedback_gain >= 0.0 && self.feedback_gain.is_finite()) {
            return Err(Error::Config(format!("feedback gain must be >= 0, got {}", self.feedback_gain)));
        }
        if !(self.extra_force_psd >= 0.0 && self.extra_force_psd.is_finite()) {
            return Err(Error::Config("extra force PSD must be >= 0".into()));
        }
        if !(self.initial.0.is_finite() && self.initial.1.is_finite()) {
            return Err(Error::Config("initial state must be finite".into()));
        }
        Ok(())
    }

    /// Mechanical plus feedback damping, s⁻¹.
    pub fn gamma_eff(&self) -> f64 {
        self.osc.damping_rate_at_resonance() + self.feedback_gain
    }

    /// Total single-sided force noise, N²/Hz.
    pub fn force_psd(&self) -> f64 {
        let o = &self.osc;
        4.0 * K_B * o.temperature * o.mass * o.damping_rate_at_resonance() + self.extra_force_psd
    }

    pub fn steps(&self) -> usize {
        (self.duration / self.dt).round() as usize
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub config: SimConfig,
    /// m, one sample per step including the initial state.
    pub x: Vec<f64>,
    /// m/s
    pub v: Vec<f64>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn time(&self, i: usize) -> f64 {
        i as f64 * self.config.dt
    }

    /// Sample variance of the displacement, m².
    pub fn variance(&self) -> f64 {
        variance(&self.x)
    }

    /// Mechanical energy at each sample, J.
    pub fn energy(&self) -> Vec<f64> {
        let o = &self.config.osc;
        self.x
            .iter()
            .zip(&self.v)
            .map(|(x, v)| 0.5 * o.mass * (v * v + o.omega_m * o.omega_m * x * x))
            .collect()
    }

    /// Temperature implied by equipartition of the displacement variance.
    pub fn effective_temperature(&self) -> f64 {
        let o = &self.config.osc;
        o.mass * o.omega_m * o.omega_m * self.variance() / K_B
    }
}

pub(crate) fn variance(data: &[f64]) -> f64 {
    let n = data.len() as f64;
    let mean = data.iter().sum::<f64>() / n;
    data.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / n
}

/// One-step propagator and noise factor.
#[derive(Debug, Clone, Copy)]
struct Step {
    phi: [[f64; 2]; 2],
    /// Lower-triangular Cholesky factor of the step noise covariance.
    chol: [[f64; 2]; 2],
}

impl Step {
    fn new(cfg: &SimConfig) -> Self {
        let w0 = cfg.osc.omega_m;
        let gamma = cfg.gamma_eff();
        let t = cfg.dt;
        let half = gamma / 2.0;
        let disc = w0 * w0 - half * half;
        // c = cos(ω_d t), s = sin(ω_d t)/ω_d, continued analytically through
        // critical damping into the over-damped branch
        let (c, s) = if disc.abs() < 1e-12 * w0 * w0 {
            (1.0, t)
        } else if disc > 0.0 {
            let wd = disc.sqrt();
            ((wd * t).cos(), (wd * t).sin() / wd)
        } else {
            let wd = (-disc).sqrt();
            ((wd * t).cosh(), (wd * t).sinh() / wd)
        };
        let decay = (-half * t).exp();
        let phi = [
            [decay * (c + half * s), decay * s],
            [-decay * w0 * w0 * s, decay * (c - half * s)],
        ];

        // stationary covariance for velocity diffusion D = S_F/(2m²)
        let d = cfg.force_psd() / (2.0 * cfg.osc.mass * cfg.osc.mass);
        let svv = d / (2.0 * gamma);
        let sxx = svv / (w0 * w0);
        let p = &phi;
        let a = sxx - (p[0][0] * p[0][0] * sxx + p[0][1] * p[0][1] * svv);
        let b = -(p[0][0] * p[1][0] * sxx + p[0][1] * p[1][1] * svv);
        let cc = svv - (p[1][0] * p[1][0] * sxx + p[1][1] * p[1][1] * svv);
        let l11 = a.max(0.0).sqrt();
        let l21 = if l11 > 0.0 { b / l11 } else { 0.0 };
        let l22 = (cc - l21 * l21).max(0.0).sqrt();
        Self {
            phi,
            chol: [[l11, 0.0], [l21, l22]],
        }
    }

    #[inline]
    fn advance(&self, x: f64, v: f64, z: (f64, f64)) -> (f64, f64) {
        let p = &self.phi;
        let l = &self.chol;
        (
            p[0][0] * x + p[0][1] * v + l[0][0] * z.0,
            p[1][0] * x + p[1][1] * v + l[1][0] * z.0 + l[1][1] * z.1,
        )
    }
}

fn run(cfg: &SimConfig, rng: &mut ChaCha8Rng) -> Trajectory {
    let step = Step::new(cfg);
    let n = cfg.steps();
    let mut x = Vec::with_capacity(n + 1);
    let mut v = Vec::with_capacity(n + 1);
    let (mut xi, mut vi) = cfg.initial;
    x.push(xi);
    v.push(vi);
    let noisy = step.chol[0][0] > 0.0 || step.chol[1][1] > 0.0;
    for _ in 0..n {
        let z = if noisy {
            (rng.sample(StandardNormal), rng.sample(StandardNormal))
        } else {
            (0.0, 0.0)
        };
        (xi, vi) = step.advance(xi, vi, z);
        x.push(xi);
        v.push(vi);
    }
    Trajectory { config: *cfg, x, v }
}

fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Integrate one trajectory. Identical configurations give bit-identical
/// output.
pub fn simulate(cfg: &SimConfig) -> Result<Trajectory> {
    cfg.validate()?;
    Ok(run(cfg, &mut trial_rng(cfg.seed, 0)))
}

/// Ensemble-averaged occupancy after starting at rest, with a fit of
/// `n̄(t) = n̄_th (1 − e^{−γt})`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReheatingCurve {
    /// s
    pub time: Vec<f64>,
    /// Mean `E/(ħω_m)` over trials.
    pub occupancy: Vec<f64>,
    pub trials: usize,
    pub fit: ReheatingFit,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReheatingFit {
    pub n_th: f64,
    /// s⁻¹
    pub gamma: f64,
}

impl ReheatingFit {
    /// `dn̄/dt` at `t = 0`, comparable to the thermal decoherence rate.
    pub fn initial_slope(&self) -> f64 {
        self.n_th * self.gamma
    }
}

const TRIAL_BLOCK: usize = 16;

/// Run `trials` independent trajectories from `x = v = 0` in parallel. Trial
/// `k` draws from stream `k + 1` of the configured seed, so results do not
/// depend on scheduling.
pub fn reheating_experiment(cfg: &SimConfig, trials: usize) -> Result<ReheatingCurve> {
    let cfg = SimConfig {
        initial: (0.0, 0.0),
        ..*cfg
    };
    cfg.validate()?;
    if trials == 0 {
        return Err(Error::Config("reheating experiment needs at least one trial".into()));
    }
    let quantum = HBAR * cfg.osc.omega_m;
    // Fixed blocks summed in order keep the floating-point result independent
    // of how rayon schedules the work.
    let blocks: Vec<Vec<f64>> = (0..trials.div_ceil(TRIAL_BLOCK))
        .into_par_iter()
        .map(|b| {
            let mut acc = vec![0.0; cfg.steps() + 1];
            for k in b * TRIAL_BLOCK..((b + 1) * TRIAL_BLOCK).min(trials) {
                let traj = run(&cfg, &mut trial_rng(cfg.seed, k as u64 + 1));
                acc.iter_mut().zip(traj.energy()).for_each(|(a, e)| *a += e);
            }
            acc
        })
        .collect();
    let mut sum = vec![0.0; cfg.steps() + 1];
    for b in &blocks {
        sum.iter_mut().zip(b).for_each(|(s, x)| *s += x);
    }
    let occupancy: Vec<f64> = sum.iter().map(|e| e / trials as f64 / quantum).collect();
    let time: Vec<f64> = (0..occupancy.len()).map(|i| i as f64 * cfg.dt).collect();
    let fit = fit_saturating_exponential(&time, &occupancy)?;
    Ok(ReheatingCurve {
        time,
        occupancy,
        trials,
        fit: ReheatingFit {
            n_th: fit.0,
            gamma: fit.1,
        },
    })
}

/// Least-squares fit of `a (1 − e^{−b t})`. For fixed `b` the amplitude is
/// linear; `b` is found by golden-section search on `ln b`.
pub fn fit_saturating_exponential(t: &[f64], y: &[f64]) -> Result<(f64, f64)> {
    if t.len() != y.len() || t.len() < 3 {
        return Err(Error::Simulation("need at least three samples to fit".into()));
    }
    let span = t[t.len() - 1] - t[0];
    if !(span > 0.0) {
        return Err(Error::Simulation("samples span no time".into()));
    }
    if y.iter().all(|v| *v == 0.0) {
        return Ok((0.0, 0.0));
    }
    let amplitude = |b: f64| {
        let (mut num, mut den) = (0.0, 0.0);
        for (ti, yi) in t.iter().zip(y) {
            let u = -(-b * ti).exp_m1();
            num += u * yi;
            den += u * u;
        }
        num / den
    };
    let cost = |lnb: f64| {
        let b = lnb.exp();
        let a = amplitude(b);
        t.iter()
            .zip(y)
            .map(|(ti, yi)| (yi + a * (-b * ti).exp_m1()).powi(2))
            .sum::<f64>()
    };
    let dt_min = t.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    let (mut lo, mut hi) = ((0.01 / span).ln(), (1.0 / dt_min).ln());
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - ratio * (hi - lo);
    let mut d = lo + ratio * (hi - lo);
    let (mut fc, mut fd) = (cost(c), cost(d));
    for _ in 0..200 {
        if fc < fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - ratio * (hi - lo);
            fc = cost(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + ratio * (hi - lo);
            fd = cost(d);
        }
    }
    let b = (0.5 * (lo + hi)).exp();
    Ok((amplitude(b), b))
}

/// Energy decay rate from a noise-free ring-down, by linear regression of
/// `ln E` on time.
pub fn fit_energy_decay(traj: &Trajectory) -> Result<f64> {
    let e = traj.energy();
    let pts: Vec<(f64, f64)> = e
        .iter()
        .enumerate()
        .filter(|(_, v)| **v > 0.0)
        .map(|(i, v)| (traj.time(i), v.ln()))
        .collect();
    if pts.len() < 3 {
        return Err(Error::Simulation("ring-down has no energy to fit".into()));
    }
    let n = pts.len() as f64;
    let mt = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mt) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mt).powi(2)).sum();
    Ok(-sxy / sxx)
}
