//! Dynamics and stability analysis of three-level Λ-systems driven by a
//! pump/dump pulse pair.
//!
//! Two models share the same level scheme: the linear Schrödinger system,
//! where the excited level couples two ground levels, and the nonlinear
//! mean-field system describing photoassociation of atoms into molecules,
//! where the pump coupling is quadratic in the atomic amplitude.
//!
//! The crate provides
//!
//! - pulse schedules with analytic derivatives ([`model`]),
//! - right-hand sides, CPT (dark) states and eigensystems for both models
//!   ([`linear`], [`nonlinear`]),
//! - linearization around the nonlinear CPT branch: normal modes, driven
//!   mode amplitudes and adiabaticity parameters ([`stability`]),
//! - a fixed-step RK4 integrator over complex three-component states
//!   ([`integrate`]).
//!
//! Everything is `no_std` (with `alloc`); all types are plain values and
//! all operations are pure functions.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod error;
pub mod integrate;
pub mod linear;
pub mod model;
pub mod nonlinear;
pub mod stability;

pub use error::Error;
pub use integrate::{IntegrationConfig, TimeGrid, Trajectory, TrajectorySample};
pub use model::{
    effective_rabi_linear, effective_rabi_nonlinear, mixing_ratio, GaussianPulsePair, PulseSample,
    PulseSchedule, StateVector, SystemParams,
};

/// Complex scalar used throughout: double-precision amplitudes.
pub type C64 = num_complex::Complex64;
