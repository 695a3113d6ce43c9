//! Error conditions shared by every module.

use core::fmt;

/// Failure modes of the Λ-system computations.
#[derive(Copy, Clone, Debug, PartialEq)]
pub enum Error {
    /// The dump Rabi frequency is below the underflow guard, so the CPT
    /// branch (and any quantity dividing by `Ω_d + Ω_eff`) is undefined.
    DegeneratePulse,
    /// The requested quantity is only defined on one-photon resonance
    /// (Δ = 0).
    UnsupportedDetuning,
    /// A state component became NaN or infinite during integration.
    NonFiniteState {
        /// Time at which the non-finite component was first observed.
        t: f64,
    },
    /// The linearization discriminant went negative: complex
    /// eigenfrequencies, deviations can grow without a source term.
    /// Cannot occur for real nonnegative pulse amplitudes.
    DynamicalInstability,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DegeneratePulse => {
                write!(
                    f,
                    "pulse amplitudes below the underflow guard; CPT branch undefined"
                )
            }
            Error::UnsupportedDetuning => {
                write!(f, "operation requires zero one-photon detuning")
            }
            Error::NonFiniteState { t } => {
                write!(f, "state became non-finite at t = {t}")
            }
            Error::DynamicalInstability => {
                write!(
                    f,
                    "negative linearization discriminant: complex eigenfrequencies"
                )
            }
        }
    }
}

impl core::error::Error for Error {}
