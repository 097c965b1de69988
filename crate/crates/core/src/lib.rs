//! Frequency-domain models of linear quantum detector networks with
//! PT-symmetric coherent feedback.
//!
//! A [`model::NetworkSpec`] lists modes, bilinear couplings, ports and a signal
//! injection. [`model::assemble_system`] compiles it into a real quadrature
//! state-space model from which [`response`], [`spectra`] and [`metrics`]
//! compute transfer functions, poles, noise spectra and integrated figures of
//! merit. [`detectors`] holds ready-made networks and [`sweep`] the parameter
//! sweeps and scan-rate optimizer.
//!
//! Units: ħ = 1, rates and frequencies in rad/s.

#![no_std]

extern crate alloc;
#[cfg(feature = "std")]
extern crate std;

pub mod detectors;
pub mod error;
pub mod kalman;
pub mod linalg;
pub mod metrics;
pub mod model;
pub mod quad;
pub mod response;
pub mod simplex;
pub mod spectra;
pub mod sweep;
pub mod units;

pub use error::Error;
pub use num_complex::Complex64;

pub type Result<T> = core::result::Result<T, Error>;
