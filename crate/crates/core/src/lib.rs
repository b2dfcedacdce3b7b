//! Design toolkit for coherent Stokes Raman frequency conversion in
//! hydrogen-filled antiresonant hollow-core fiber: 863 nm probe photons are
//! shifted to the telecom O-band near 1346 nm by pumps at 942 nm and 1550 nm
//! beating on the H₂ Q₁(1) vibration.
//!
//! The modules build on one another:
//!
//! - [`spectral`]: wavelength/frequency bookkeeping and the four-wave set
//! - [`gas`]: H₂ refractivity versus wavelength, pressure and temperature
//! - [`fiber`]: effective index, capillary resonances, loss envelope
//! - [`phasematch`]: Δβ(p), sinc², optimum pressure, radius calibration
//! - [`conversion`]: efficiency scaling, power surfaces, bandwidth, length
//! - [`noise`]: background count budget and SNR
//! - [`config`], [`table`], [`cli`]: the `csrs` command-line front end
//!
//! ```
//! use csrs_fiber::phasematch::{optimal_pressure, PhaseMatchProblem};
//!
//! let problem = PhaseMatchProblem::default();
//! let opt = optimal_pressure(&problem, 1.0, 300.0).unwrap();
//! assert!(opt.delta_beta.abs() < 1e-3);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod config;
pub mod conversion;
pub mod error;
pub mod fiber;
pub mod gas;
pub mod noise;
pub mod phasematch;
mod solve;
pub mod spectral;
pub mod table;

pub use error::{Error, Result};
