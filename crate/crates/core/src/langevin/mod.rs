//! Time-domain oracle for the frequency-domain results: a thermally driven,
//! viscously damped oscillator with optional velocity feedback, plus the
//! spectral estimator used to compare the two.
//!
//! The simulation is classical. Occupancy means mechanical energy in units
//! of `ħω_m`, and quantum back action can only be mimicked by extra white
//! force noise.

mod psd;
mod sim;

use std::io::Write;

pub use psd::{psd_estimate, welch, Psd, MIN_RELAXATION_TIMES, MIN_SEGMENTS};
pub use sim::{
    fit_energy_decay, fit_saturating_exponential, reheating_experiment, simulate, ReheatingCurve, ReheatingFit,
    SimConfig, Trajectory, SAMPLES_PER_PERIOD,
};

use crate::error::{Error, Result};

fn csv_writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out)
}

fn csv_err(e: csv::Error) -> Error {
    Error::Output(e.into())
}

/// Write `t,x,v` rows.
pub fn write_trajectory_csv<W: Write>(traj: &Trajectory, out: W) -> Result<()> {
    let mut w = csv_writer(out);
    w.write_record(["t", "x", "v"]).map_err(csv_err)?;
    for i in 0..traj.len() {
        w.write_record([
            format!("{:.6e}", traj.time(i)),
            format!("{:.6e}", traj.x[i]),
            format!("{:.6e}", traj.v[i]),
        ])
        .map_err(csv_err)?;
    }
    w.flush().map_err(Error::Output)
}

/// Write `f_hz,psd` rows.
pub fn write_psd_csv<W: Write>(psd: &Psd, out: W) -> Result<()> {
    let mut w = csv_writer(out);
    w.write_record(["f_hz", "psd"]).map_err(csv_err)?;
    for (f, p) in psd.f_hz.iter().zip(&psd.psd) {
        w.write_record([format!("{f:.6e}"), format!("{p:.6e}")]).map_err(csv_err)?;
    }
    w.flush().map_err(Error::Output)
}
