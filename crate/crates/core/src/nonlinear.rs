//! The nonlinear atom–molecule mean-field system.
//!
//! The amplitudes (ψ_a, ψ_e, ψ_g) of the atomic, excited-molecular and
//! ground-molecular levels obey
//!
//! ```text
//!   i ψ̇_a = Ω_p ψ_a* ψ_e
//!   i ψ̇_e = Δ ψ_e + (Ω_p/2) ψ_a² + (Ω_d/2) ψ_g
//!   i ψ̇_g = (Ω_d/2) ψ_e
//! ```
//!
//! with the atom number |ψ_a|² + 2(|ψ_e|² + |ψ_g|²) conserved (each
//! molecule contains two atoms). The quadratic pump coupling makes the
//! system nonlinear: eigenstates are fixed points of the flow rather than
//! vectors of an orthonormal basis, and their count can exceed the
//! dimension of the state space.

#[allow(unused_imports)] // inherent f64 math shadows the trait when dev builds link std
use num_traits::Float;

use crate::error::Error;
use crate::model::{effective_rabi_nonlinear, PulseSample, StateVector, SystemParams};
use crate::C64;

/// Time derivative of the mean-field equations.
pub fn meanfield_rhs(
    state: &StateVector,
    sample: &PulseSample,
    params: &SystemParams,
) -> StateVector {
    let minus_i = C64::new(0.0, -1.0);
    StateVector::new(
        minus_i * (sample.omega_p * state.psi_a.conj() * state.psi_e),
        minus_i
            * (params.delta * state.psi_e
                + 0.5 * sample.omega_p * state.psi_a * state.psi_a
                + 0.5 * sample.omega_d * state.psi_g),
        minus_i * (0.5 * sample.omega_d * state.psi_e),
    )
}

/// Conserved atom number |ψ_a|² + 2(|ψ_e|² + |ψ_g|²).
pub fn atom_number(state: &StateVector) -> f64 {
    state.psi_a.norm_sqr() + 2.0 * (state.psi_e.norm_sqr() + state.psi_g.norm_sqr())
}

/// Conserved energy functional generating the mean-field flow:
/// E = Δ|ψ_e|² + Re[Ω_p ψ_e* ψ_a²] + Re[Ω_d ψ_e* ψ_g].
///
/// Constant along trajectories of [`meanfield_rhs`] with frozen pulses.
pub fn meanfield_energy(state: &StateVector, sample: &PulseSample, params: &SystemParams) -> f64 {
    params.delta * state.psi_e.norm_sqr()
        + (sample.omega_p * state.psi_e.conj() * state.psi_a * state.psi_a).re
        + (sample.omega_d * state.psi_e.conj() * state.psi_g).re
}

/// The instantaneous nonlinear CPT point: the zero-frequency fixed point
/// with no excited-level amplitude, together with its motion along the
/// pulse schedule.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct CptPoint {
    /// Fixed-point state: real components, ψ_a ≥ 0, ψ_e = 0, ψ_g ≤ 0.
    pub state: StateVector,
    /// Time derivative of the branch, from analytic derivatives of the
    /// pulse amplitudes.
    pub state_dot: StateVector,
    /// √(Ω_d² + 8Ω_p²) at the same instant.
    pub omega_eff_nl: f64,
}

/// Evaluate the CPT branch
///
/// ```text
///   ψ_a⁰ = √(2Ω_d / (Ω_d + W)),  ψ_e⁰ = 0,  ψ_g⁰ = −2Ω_p / (Ω_d + W),
/// ```
///
/// with W = √(Ω_d² + 8Ω_p²), and its time derivative by the chain rule
/// through (Ω̇_p, Ω̇_d).
pub fn nonlinear_cpt(sample: &PulseSample) -> Result<CptPoint, Error> {
    sample.guard_omega_d()?;
    let w = effective_rabi_nonlinear(sample);
    let denom = sample.omega_d + w;

    let psi_a = (2.0 * sample.omega_d / denom).sqrt();
    let psi_g = -2.0 * sample.omega_p / denom;

    let w_dot =
        (sample.omega_d * sample.omega_d_dot + 8.0 * sample.omega_p * sample.omega_p_dot) / w;
    let denom_dot = sample.omega_d_dot + w_dot;
    let psi_a_dot =
        (sample.omega_d_dot * denom - sample.omega_d * denom_dot) / (denom * denom * psi_a);
    let psi_g_dot =
        -2.0 * (sample.omega_p_dot * denom - sample.omega_p * denom_dot) / (denom * denom);

    Ok(CptPoint {
        state: StateVector::from_reals(psi_a, 0.0, psi_g),
        state_dot: StateVector::from_reals(psi_a_dot, 0.0, psi_g_dot),
        omega_eff_nl: w,
    })
}

/// Which family a fixed point of the frozen mean-field flow belongs to.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum FixedPointFamily {
    /// The dark state: ψ_e = 0, frequency 0.
    Cpt,
    /// All-molecular pair (0, ±½, ½) at frequencies ±Ω_d/2.
    MolecularPair,
    /// Atom–molecule pair at frequencies ±Ω_p/2; exists only for
    /// Ω_d < Ω_p.
    MixedPair,
}

/// A stationary state of the frozen flow, `i d/dt ↦ ω`.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct FixedPoint {
    pub frequency: f64,
    pub state: StateVector,
    pub family: FixedPointFamily,
}

/// Residual of the stationary equations, ‖i ψ̇ − ω ψ‖, for a candidate
/// fixed point. Zero in exact arithmetic for true fixed points.
pub fn stationary_residual(
    state: &StateVector,
    frequency: f64,
    sample: &PulseSample,
    params: &SystemParams,
) -> f64 {
    let h_psi = meanfield_rhs(state, sample, params).scale_c(C64::new(0.0, 1.0));
    (h_psi - *state * frequency).norm()
}

/// Enumerate all fixed points of the frozen flow on resonance (Δ = 0),
/// gauge fixed and normalized to unit atom number.
///
/// The U(1) orbit (e^{iθ}ψ_a, e^{2iθ}ψ_e, e^{2iθ}ψ_g) of each point is
/// collapsed to the representative with ψ_a real ≥ 0, and ψ_g real ≥ 0
/// where ψ_a = 0. This yields three points (CPT plus the molecular pair),
/// or five once Ω_d < Ω_p admits the mixed pair; a count exceeding the
/// state-space dimension is possible only because the flow is nonlinear.
pub fn enumerate_fixed_points(
    sample: &PulseSample,
    params: &SystemParams,
) -> Result<alloc::vec::Vec<FixedPoint>, Error> {
    if params.delta != 0.0 {
        return Err(Error::UnsupportedDetuning);
    }
    sample.guard_omega_d()?;
    sample.guard_omega_p()?;

    let mut points = alloc::vec::Vec::with_capacity(5);
    points.push(FixedPoint {
        frequency: 0.0,
        state: nonlinear_cpt(sample)?.state,
        family: FixedPointFamily::Cpt,
    });

    // The printed molecular pair (0, ±1, 1)/√2 carries atom number 2;
    // the ψ_e/ψ_g subsystem is linear in these states, so rescaling to
    // (0, ±½, ½) keeps them stationary at the same frequencies.
    for sign in [1.0, -1.0] {
        points.push(FixedPoint {
            frequency: sign * 0.5 * sample.omega_d,
            state: StateVector::from_reals(0.0, sign * 0.5, 0.5),
            family: FixedPointFamily::MolecularPair,
        });
    }

    if sample.omega_d < sample.omega_p {
        let ratio = sample.omega_d / sample.omega_p;
        let psi_a = (0.5 * (1.0 - ratio * ratio)).sqrt();
        for sign in [1.0, -1.0] {
            points.push(FixedPoint {
                frequency: sign * 0.5 * sample.omega_p,
                state: StateVector::from_reals(psi_a, sign * 0.5, 0.5 * ratio),
                family: FixedPointFamily::MixedPair,
            });
        }
    }
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{GaussianPulsePair, PulseSchedule};

    #[test]
    fn rhs_from_pure_atomic_state() {
        let s = PulseSample::constant(2.0, 3.0);
        let d = meanfield_rhs(&StateVector::all_atoms(), &s, &SystemParams::resonant());
        assert_eq!(d.psi_a, C64::new(0.0, 0.0));
        assert_eq!(d.psi_e, C64::new(0.0, -1.0));
        assert_eq!(d.psi_g, C64::new(0.0, 0.0));
    }

    #[test]
    fn rhs_from_pure_molecular_state() {
        let s = PulseSample::constant(2.0, 3.0);
        let half_inv_sqrt2 = 0.5 / 2.0f64.sqrt();
        let d = meanfield_rhs(
            &StateVector::from_reals(0.0, 0.0, 1.0 / 2.0f64.sqrt()),
            &s,
            &SystemParams::resonant(),
        );
        assert_eq!(d.psi_a, C64::new(0.0, 0.0));
        assert!((d.psi_e - C64::new(0.0, -3.0 * half_inv_sqrt2)).norm() < 1e-16);
        assert_eq!(d.psi_g, C64::new(0.0, 0.0));
    }

    #[test]
    fn cpt_point_is_stationary() {
        let s = PulseSample::constant(1.7, 2.4);
        let cpt = nonlinear_cpt(&s).unwrap();
        let d = meanfield_rhs(&cpt.state, &s, &SystemParams::new(1.2));
        assert!(d.norm() < 1e-15);
    }

    #[test]
    fn cpt_point_values() {
        // χ = 0: all atoms.
        let cpt = nonlinear_cpt(&PulseSample::constant(0.0, 2.0)).unwrap();
        assert_eq!(cpt.state, StateVector::from_reals(1.0, 0.0, 0.0));
        assert_eq!(cpt.omega_eff_nl, 2.0);

        // Equal amplitudes: (√½, 0, −½) and Ω_eff = 3Ω.
        let cpt = nonlinear_cpt(&PulseSample::constant(2.0, 2.0)).unwrap();
        assert!((cpt.state.psi_a.re - 0.5f64.sqrt()).abs() < 1e-15);
        assert!((cpt.state.psi_g.re + 0.5).abs() < 1e-15);
        assert!((cpt.omega_eff_nl - 6.0).abs() < 1e-14);
    }

    #[test]
    fn cpt_atom_number_is_unity() {
        let pulses = GaussianPulsePair::new(5.0, 3.8, 3.0);
        for k in 0..50 {
            let cpt = nonlinear_cpt(&pulses.sample(0.5 + 0.14 * k as f64)).unwrap();
            assert!((atom_number(&cpt.state) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn cpt_degenerate_dump_rejected() {
        assert_eq!(
            nonlinear_cpt(&PulseSample::constant(1.0, 0.0)),
            Err(Error::DegeneratePulse)
        );
    }

    #[test]
    fn energy_values() {
        let s = PulseSample::constant(1.3, 2.1);
        let params = SystemParams::resonant();
        let cpt = nonlinear_cpt(&s).unwrap();
        assert_eq!(meanfield_energy(&cpt.state, &s, &params), 0.0);
        for sign in [1.0f64, -1.0] {
            let molecular = StateVector::from_reals(0.0, sign * 0.5, 0.5);
            let e = meanfield_energy(&molecular, &s, &params);
            assert!((e - sign * s.omega_d / 4.0).abs() < 1e-15);
        }
    }

    #[test]
    fn fixed_point_census() {
        let params = SystemParams::resonant();
        let three = enumerate_fixed_points(&PulseSample::constant(3.0, 4.0), &params).unwrap();
        assert_eq!(three.len(), 3);
        assert!(three
            .iter()
            .all(|p| p.family != FixedPointFamily::MixedPair));

        let five = enumerate_fixed_points(&PulseSample::constant(4.0, 3.0), &params).unwrap();
        assert_eq!(five.len(), 5);
        let mixed: alloc::vec::Vec<_> = five
            .iter()
            .filter(|p| p.family == FixedPointFamily::MixedPair)
            .collect();
        assert_eq!(mixed.len(), 2);
        assert!((mixed[0].frequency - 2.0).abs() < 1e-15);
        assert!((mixed[1].frequency + 2.0).abs() < 1e-15);
        let expected_a = (0.5 * (1.0 - 9.0 / 16.0)).sqrt();
        for p in &mixed {
            assert!((p.state.psi_a.re - expected_a).abs() < 1e-15);
            assert!((p.state.psi_g.re - 3.0 / 8.0).abs() < 1e-15);
            assert!((p.state.psi_e.re.abs() - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn fixed_points_satisfy_stationary_equations() {
        let params = SystemParams::resonant();
        for &(p, d) in &[(3.0, 4.0), (4.0, 3.0), (1.0, 1.0001), (7.3, 0.2)] {
            let sample = PulseSample::constant(p, d);
            for point in enumerate_fixed_points(&sample, &params).unwrap() {
                assert!(
                    stationary_residual(&point.state, point.frequency, &sample, &params) < 1e-10,
                    "family {:?} at ({p}, {d})",
                    point.family
                );
                assert!((atom_number(&point.state) - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn fixed_points_require_resonance() {
        let sample = PulseSample::constant(3.0, 4.0);
        assert_eq!(
            enumerate_fixed_points(&sample, &SystemParams::new(0.5)),
            Err(Error::UnsupportedDetuning)
        );
    }

    #[test]
    fn atom_number_examples() {
        assert_eq!(atom_number(&StateVector::all_atoms()), 1.0);
        let molecules = StateVector::from_reals(0.0, 0.0, 1.0 / 2.0f64.sqrt());
        assert!((atom_number(&molecules) - 1.0).abs() <= f64::EPSILON);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn cpt_normalization_identity(
                omega_p in 1e-3f64..10.0,
                omega_d in 1e-3f64..10.0,
            ) {
                // 2Ω_d/(Ω_d + W) + 8Ω_p²/(Ω_d + W)² = 1 with W = √(Ω_d² + 8Ω_p²).
                let w = crate::model::effective_rabi_nonlinear(
                    &PulseSample::constant(omega_p, omega_d),
                );
                let denom = omega_d + w;
                let total = 2.0 * omega_d / denom + 8.0 * omega_p * omega_p / (denom * denom);
                prop_assert!((total - 1.0).abs() <= 1e-12);
            }

            #[test]
            fn census_count_follows_amplitude_ordering(
                omega_p in 1e-2f64..10.0,
                omega_d in 1e-2f64..10.0,
            ) {
                prop_assume!(omega_p != omega_d);
                let points = enumerate_fixed_points(
                    &PulseSample::constant(omega_p, omega_d),
                    &SystemParams::resonant(),
                ).unwrap();
                let expected = if omega_d < omega_p { 5 } else { 3 };
                prop_assert_eq!(points.len(), expected);
            }
        }
    }
}
