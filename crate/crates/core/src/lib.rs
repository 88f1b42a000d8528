//! Finite-temperature dynamics of uniformly accelerated two-level detectors.
//!
//! The crate provides thermal two-point kernels, the first-order detector
//! response, the two-level master equation, fermion-bath rate coefficients,
//! and the vacuum-fluctuation / radiation-reaction energy decomposition.
//! Closed forms are paired with independent image-sum and quadrature oracles.

pub mod error;
pub mod images;
pub mod fermion;
pub mod kernels;
pub mod master;
pub mod params;
pub mod ode;
pub mod quad;
pub mod rates;
pub mod response;
pub mod special;
pub mod verify;

pub use error::{Error, Result};
pub use params::{
    validate, AtomState, DetectorParams, OrderingParam, Regularization, ThermalState, Trajectory, ValidatedConfig,
};
