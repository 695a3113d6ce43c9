//! Shared domain types: system parameters, pulse schedules and the
//! complex three-component state.
//!
//! Conventions: ħ = 1, time is measured in pulse widths, Rabi frequencies
//! in inverse pulse widths. Pulse amplitudes are real and nonnegative.

use core::ops::{Add, Mul, Sub};

#[allow(unused_imports)] // inherent f64 math shadows the trait when dev builds link std
use num_traits::Float;

use crate::error::Error;
use crate::C64;

/// Relative underflow guard for the dump amplitude. A sample whose Ω_d is
/// at or below `GUARD_REL` times its own amplitude scale trips
/// [`Error::DegeneratePulse`] in ratio and CPT-branch constructions.
pub const GUARD_REL: f64 = 1e-12;

/// Model parameters beyond the pulse schedule.
///
/// Two-photon detuning is fixed to zero; `delta` is the one-photon
/// detuning Δ of the excited level, in inverse pulse widths.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct SystemParams {
    pub delta: f64,
}

impl SystemParams {
    pub fn new(delta: f64) -> Self {
        assert!(delta.is_finite(), "detuning must be finite");
        Self { delta }
    }

    /// One-photon resonance, Δ = 0.
    pub fn resonant() -> Self {
        Self { delta: 0.0 }
    }
}

/// Two equal-amplitude, equal-width Gaussian pulses,
/// Ω_{p,d}(t) = Ω₀ exp(−(t − t_{p,d})²), width fixed to 1.
///
/// A counter-intuitive (STIRAP) ordering has `t_d < t_p`.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct GaussianPulsePair {
    /// Peak Rabi frequency Ω₀ shared by both pulses.
    pub omega0: f64,
    /// Center of the pump pulse.
    pub t_p: f64,
    /// Center of the dump pulse.
    pub t_d: f64,
}

impl GaussianPulsePair {
    pub fn new(omega0: f64, t_p: f64, t_d: f64) -> Self {
        assert!(
            omega0 > 0.0 && omega0.is_finite(),
            "peak Rabi frequency must be positive"
        );
        assert!(
            t_p.is_finite() && t_d.is_finite(),
            "pulse centers must be finite"
        );
        Self { omega0, t_p, t_d }
    }
}

/// Rabi frequencies and their time derivatives at one instant.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct PulseSample {
    pub omega_p: f64,
    pub omega_d: f64,
    pub omega_p_dot: f64,
    pub omega_d_dot: f64,
}

impl PulseSample {
    /// A frozen sample with vanishing derivatives.
    pub fn constant(omega_p: f64, omega_d: f64) -> Self {
        Self {
            omega_p,
            omega_d,
            omega_p_dot: 0.0,
            omega_d_dot: 0.0,
        }
    }

    /// Amplitude scale used by the underflow guard.
    fn scale(&self) -> f64 {
        self.omega_p.abs().max(self.omega_d.abs())
    }

    /// Errors with [`Error::DegeneratePulse`] unless Ω_d is safely above
    /// the underflow guard.
    pub fn guard_omega_d(&self) -> Result<(), Error> {
        if self.omega_d <= GUARD_REL * self.scale() {
            Err(Error::DegeneratePulse)
        } else {
            Ok(())
        }
    }

    /// As [`Self::guard_omega_d`], for the pump amplitude.
    pub fn guard_omega_p(&self) -> Result<(), Error> {
        if self.omega_p <= GUARD_REL * self.scale() {
            Err(Error::DegeneratePulse)
        } else {
            Ok(())
        }
    }
}

/// A time-dependent pulse pair: any mapping t ↦ sample with analytic
/// derivatives. Only the Gaussian pair is shipped; the analysis never
/// assumes the shape.
pub trait PulseSchedule {
    fn sample(&self, t: f64) -> PulseSample;
}

impl PulseSchedule for GaussianPulsePair {
    fn sample(&self, t: f64) -> PulseSample {
        let omega_p = self.omega0 * (-(t - self.t_p) * (t - self.t_p)).exp();
        let omega_d = self.omega0 * (-(t - self.t_d) * (t - self.t_d)).exp();
        PulseSample {
            omega_p,
            omega_d,
            omega_p_dot: -2.0 * (t - self.t_p) * omega_p,
            omega_d_dot: -2.0 * (t - self.t_d) * omega_d,
        }
    }
}

/// A bare sample acts as a time-independent schedule (frozen pulses).
impl PulseSchedule for PulseSample {
    fn sample(&self, _t: f64) -> PulseSample {
        *self
    }
}

/// Pulse ratio χ = Ω_p/Ω_d and its time derivative.
///
/// χ̇ is the quotient-rule combination (Ω̇_p Ω_d − Ω_p Ω̇_d)/Ω_d².
pub fn mixing_ratio(sample: &PulseSample) -> Result<(f64, f64), Error> {
    sample.guard_omega_d()?;
    let chi = sample.omega_p / sample.omega_d;
    let chi_dot = (sample.omega_p_dot * sample.omega_d - sample.omega_p * sample.omega_d_dot)
        / (sample.omega_d * sample.omega_d);
    Ok((chi, chi_dot))
}

/// Ω_eff = √(Ω_p² + Ω_d²), the bright-state splitting scale of the
/// linear system.
pub fn effective_rabi_linear(sample: &PulseSample) -> f64 {
    sample.omega_p.hypot(sample.omega_d)
}

/// Ω_eff of the nonlinear system, √(Ω_d² + 8Ω_p²).
pub fn effective_rabi_nonlinear(sample: &PulseSample) -> f64 {
    sample.omega_d.hypot(8.0f64.sqrt() * sample.omega_p)
}

/// Ordered triple of complex amplitudes (ψ_a, ψ_e, ψ_g).
///
/// Under linear evolution the Euclidean norm is conserved; under the
/// mean-field evolution the conserved quantity is the atom number
/// |ψ_a|² + 2(|ψ_e|² + |ψ_g|²), molecules counting twice.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct StateVector {
    pub psi_a: C64,
    pub psi_e: C64,
    pub psi_g: C64,
}

impl StateVector {
    pub fn new(psi_a: C64, psi_e: C64, psi_g: C64) -> Self {
        Self {
            psi_a,
            psi_e,
            psi_g,
        }
    }

    /// State with real components.
    pub fn from_reals(psi_a: f64, psi_e: f64, psi_g: f64) -> Self {
        Self {
            psi_a: C64::new(psi_a, 0.0),
            psi_e: C64::new(psi_e, 0.0),
            psi_g: C64::new(psi_g, 0.0),
        }
    }

    pub fn zero() -> Self {
        Self::from_reals(0.0, 0.0, 0.0)
    }

    /// All population in the atomic level: (1, 0, 0).
    pub fn all_atoms() -> Self {
        Self::from_reals(1.0, 0.0, 0.0)
    }

    /// Squared Euclidean norm Σ|ψ_i|².
    pub fn norm_sqr(&self) -> f64 {
        self.psi_a.norm_sqr() + self.psi_e.norm_sqr() + self.psi_g.norm_sqr()
    }

    /// Euclidean norm.
    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Euclidean distance to another state.
    pub fn distance(&self, other: &StateVector) -> f64 {
        (*self - *other).norm()
    }

    pub fn is_finite(&self) -> bool {
        self.psi_a.is_finite() && self.psi_e.is_finite() && self.psi_g.is_finite()
    }

    /// Componentwise scaling by a complex factor.
    pub fn scale_c(&self, factor: C64) -> Self {
        Self::new(
            self.psi_a * factor,
            self.psi_e * factor,
            self.psi_g * factor,
        )
    }

    /// Hermitian inner product ⟨self|other⟩ (conjugate on self).
    pub fn inner(&self, other: &StateVector) -> C64 {
        self.psi_a.conj() * other.psi_a
            + self.psi_e.conj() * other.psi_e
            + self.psi_g.conj() * other.psi_g
    }
}

impl Add for StateVector {
    type Output = StateVector;
    fn add(self, rhs: StateVector) -> StateVector {
        StateVector::new(
            self.psi_a + rhs.psi_a,
            self.psi_e + rhs.psi_e,
            self.psi_g + rhs.psi_g,
        )
    }
}

impl Sub for StateVector {
    type Output = StateVector;
    fn sub(self, rhs: StateVector) -> StateVector {
        StateVector::new(
            self.psi_a - rhs.psi_a,
            self.psi_e - rhs.psi_e,
            self.psi_g - rhs.psi_g,
        )
    }
}

impl Mul<f64> for StateVector {
    type Output = StateVector;
    fn mul(self, rhs: f64) -> StateVector {
        self.scale_c(C64::new(rhs, 0.0))
    }
}
