//! The linear three-level Λ-system: Schrödinger dynamics, instantaneous
//! eigensystem and the linear adiabaticity parameter.
//!
//! In the (a, e, g) basis the Hamiltonian (ħ = 1) is
//!
//! ```text
//!         ⎛   0     Ω_p/2    0   ⎞
//!   H  =  ⎜ Ω_p/2    −Δ    Ω_d/2 ⎟ ,      i ψ̇ = H ψ .
//!         ⎝   0     Ω_d/2    0   ⎠
//! ```
//!
//! The zero-frequency eigenstate (Ω_d, 0, −Ω_p)/Ω_eff is the CPT (dark)
//! state; it has no excited-level amplitude and decouples from |e⟩.

#[allow(unused_imports)] // inherent f64 math shadows the trait when dev builds link std
use num_traits::Float;

use crate::error::Error;
use crate::model::{effective_rabi_linear, PulseSample, StateVector, SystemParams};
use crate::C64;

/// Time derivative dψ/dt = −i H ψ.
pub fn linear_rhs(state: &StateVector, sample: &PulseSample, params: &SystemParams) -> StateVector {
    let minus_i = C64::new(0.0, -1.0);
    let p = 0.5 * sample.omega_p;
    let d = 0.5 * sample.omega_d;
    StateVector::new(
        minus_i * (p * state.psi_e),
        minus_i * (p * state.psi_a - params.delta * state.psi_e + d * state.psi_g),
        minus_i * (d * state.psi_e),
    )
}

/// The instantaneous dark state (Ω_d, 0, −Ω_p)/Ω_eff.
///
/// The direction is scale invariant, so the only degenerate case is both
/// amplitudes underflowing to (sub)normal zero.
pub fn linear_cpt_state(sample: &PulseSample) -> Result<StateVector, Error> {
    let omega_eff = effective_rabi_linear(sample);
    if omega_eff <= f64::MIN_POSITIVE {
        return Err(Error::DegeneratePulse);
    }
    Ok(StateVector::from_reals(
        sample.omega_d / omega_eff,
        0.0,
        -sample.omega_p / omega_eff,
    ))
}

/// One (frequency, eigenvector) pair of the instantaneous Hamiltonian.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct EigenPair {
    pub frequency: f64,
    pub state: StateVector,
}

/// The three instantaneous eigenpairs: the dark state at frequency zero
/// and the two bright states. `bright_plus` is the positive root; the
/// bright frequencies always have opposite signs.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct LinearEigenSet {
    pub dark: EigenPair,
    pub bright_plus: EigenPair,
    pub bright_minus: EigenPair,
}

impl LinearEigenSet {
    pub fn pairs(&self) -> [&EigenPair; 3] {
        [&self.dark, &self.bright_plus, &self.bright_minus]
    }
}

/// Scale a real-component eigenvector to unit norm with its first
/// component above noise made positive.
fn normalize_phase_fixed(v: [f64; 3]) -> StateVector {
    let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    let mut sign = 1.0;
    for &c in &v {
        if c.abs() > 1e-14 * norm {
            if c < 0.0 {
                sign = -1.0;
            }
            break;
        }
    }
    StateVector::from_reals(sign * v[0] / norm, sign * v[1] / norm, sign * v[2] / norm)
}

/// Diagonalize the instantaneous Hamiltonian.
///
/// One frequency is exactly zero (the dark state); the bright pair solves
/// ω² + Δω − Ω_eff²/4 = 0, i.e. ω_± = [−Δ ± √(Δ² + Ω_eff²)]/2, reducing
/// to ±Ω_eff/2 on resonance. The bright eigenvectors are proportional to
/// (Ω_p/2, ω_±, Ω_d/2).
pub fn linear_eigensystem(
    sample: &PulseSample,
    params: &SystemParams,
) -> Result<LinearEigenSet, Error> {
    let dark = EigenPair {
        frequency: 0.0,
        state: linear_cpt_state(sample)?,
    };

    let omega_eff = effective_rabi_linear(sample);
    let half_sq = 0.25 * omega_eff * omega_eff;
    let root = params.delta.hypot(omega_eff);
    // Evaluate the well-conditioned root first to avoid cancellation,
    // then use ω₊ω₋ = −Ω_eff²/4.
    let (omega_plus, omega_minus) = if params.delta >= 0.0 {
        let minus = 0.5 * (-params.delta - root);
        (-half_sq / minus, minus)
    } else {
        let plus = 0.5 * (-params.delta + root);
        (plus, -half_sq / plus)
    };

    let bright = |omega: f64| EigenPair {
        frequency: omega,
        state: normalize_phase_fixed([0.5 * sample.omega_p, omega, 0.5 * sample.omega_d]),
    };
    Ok(LinearEigenSet {
        dark,
        bright_plus: bright(omega_plus),
        bright_minus: bright(omega_minus),
    })
}

/// Linear adiabaticity parameter
/// r_lin = |Ω̇_p Ω_d − Ω̇_d Ω_p| / Ω_eff³ = |χ̇|/(1 + χ²) · 1/Ω_eff.
///
/// Adiabatic following of the dark state requires r_lin ≪ 1.
pub fn r_lin(sample: &PulseSample) -> Result<f64, Error> {
    sample.guard_omega_d()?;
    let omega_eff = effective_rabi_linear(sample);
    let det = sample.omega_p_dot * sample.omega_d - sample.omega_d_dot * sample.omega_p;
    Ok(det.abs() / (omega_eff * omega_eff * omega_eff))
}
