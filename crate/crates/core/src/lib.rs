//! Noise budgets, quantum-regime criteria and suspension design for
//! milligram-scale optomechanical systems.
//!
//! Frequencies are angular (rad/s) everywhere inside the library. Hz only
//! appears at the configuration and command-line boundary, and in the few
//! outputs that are conventionally quoted in Hz (violin modes, f·Q products).
//! Power spectral densities are single-sided.

pub mod cavity;
pub mod cli;
pub mod coupling;
pub mod criteria;
pub mod config;
pub mod error;
pub mod langevin;
pub mod levitation;
pub mod mechanics;
pub mod model;
pub mod quantum_noise;
pub mod suspension;
pub mod torsion;

pub use error::{Error, Result};
