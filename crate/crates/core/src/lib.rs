//! Near-field physical-layer security toolkit.
//!
//! Models the spherical-wavefront channel of an extremely large uniform linear
//! array, evaluates secrecy rates with artificial noise (AN), derives the
//! closed-form secure conditions and power splits of the single-user case,
//! builds interference domains and sets from beam width and beam depth, and
//! provides two multi-user beamformer designs: a semidefinite-relaxation SCA
//! optimizer and a low-complexity interference-set driven pipeline.
//!
//! All internal quantities are linear scale (watts, linear gains). Use
//! [`units`] to convert dB/dBm values at the boundary.

pub mod beamformer;
pub mod channel;
pub mod complexity;
pub mod fresnel;
pub mod geometry;
pub mod rng;
pub mod secrecy;
pub mod units;

mod error;

pub use error::{Error, Result};

pub use channel::{ArrayGeometry, CorrelationValue, NearFieldChannel, PolarPosition};
pub use geometry::{BeamSpec, InterferenceDomain, InterferenceSets, UserDistribution};
pub use secrecy::{LinkPair, PowerSplit, SecrecyCase, SecrecyDiagnosis};

/// Speed of light in vacuum (m/s).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

pub type Complex64 = num_complex::Complex<f64>;
pub type CVector = nalgebra::DVector<Complex64>;
pub type CMatrix = nalgebra::DMatrix<Complex64>;
