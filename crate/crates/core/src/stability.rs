//! Linearization around the nonlinear CPT branch.
//!
//! Writing ψ_i = ψ_i⁰ + δψ_i with Ψ₀ the instantaneous CPT point, the
//! deviations obey i δψ̇ = M δψ − i Ψ̇₀ with the real symmetric matrix
//!
//! ```text
//!         ⎛    0      Ω_p ψ_a⁰    0   ⎞
//!   M  =  ⎜ Ω_p ψ_a⁰     Δ      Ω_d/2 ⎟ .
//!         ⎝    0       Ω_d/2     0    ⎠
//! ```
//!
//! M always has a zero eigenvalue; the matching mode w₀ is orthogonal to
//! the source Ψ̇₀ everywhere on the CPT branch, so the zero-mode amplitude
//! never moves and adiabaticity is controlled by the two modes ω_± alone.
//! Their driven amplitudes c_±(t) are computed two independent ways
//! (cumulative quadrature of the phased integral, and direct integration
//! of the amplitude equations) and condensed into the adiabaticity
//! parameter r_nl = ½√(|c₊|² + |c₋|²), with a closed form available on
//! resonance.

use alloc::vec::Vec;

#[allow(unused_imports)] // inherent f64 math shadows the trait when dev builds link std
use num_traits::Float;

use crate::error::Error;
use crate::integrate::{rk4_step, RkVector, TimeGrid};
use crate::model::{
    effective_rabi_nonlinear, mixing_ratio, PulseSample, PulseSchedule, StateVector, SystemParams,
};
use crate::nonlinear::{nonlinear_cpt, CptPoint};
use crate::C64;

/// The linearization matrix around the CPT point: real, symmetric, with
/// zero corners.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct StabilityMatrix {
    entries: [[f64; 3]; 3],
}

impl StabilityMatrix {
    pub fn entries(&self) -> &[[f64; 3]; 3] {
        &self.entries
    }

    /// M v for a real vector.
    pub fn apply_real(&self, v: [f64; 3]) -> [f64; 3] {
        let m = &self.entries;
        [
            m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
            m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
            m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
        ]
    }

    /// M ψ for a complex state.
    pub fn apply(&self, v: &StateVector) -> StateVector {
        let m = &self.entries;
        StateVector::new(
            m[0][1] * v.psi_e,
            m[1][0] * v.psi_a + m[1][1] * v.psi_e + m[1][2] * v.psi_g,
            m[2][1] * v.psi_e,
        )
    }
}

/// Build M from the instantaneous pulse sample; ψ_a⁰ comes from the CPT
/// branch.
pub fn build_stability_matrix(
    sample: &PulseSample,
    params: &SystemParams,
) -> Result<StabilityMatrix, Error> {
    let cpt = nonlinear_cpt(sample)?;
    let coupling = sample.omega_p * cpt.state.psi_a.re;
    let half_d = 0.5 * sample.omega_d;
    Ok(StabilityMatrix {
        entries: [
            [0.0, coupling, 0.0],
            [coupling, params.delta, half_d],
            [0.0, half_d, 0.0],
        ],
    })
}

/// Eigenfrequencies and orthonormal eigenvectors of M, ordered (0, +, −).
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct NormalModeSet {
    /// Always exactly zero.
    pub omega_zero: f64,
    /// ω_± = ½[Δ ± √(Δ² + Ω_d Ω_eff_nl)]; always real for nonnegative
    /// amplitudes, and of opposite signs.
    pub omega_plus: f64,
    pub omega_minus: f64,
    /// Unit-norm modes: w₀ ∝ (−Ω_d/2, 0, Ω_p ψ_a⁰), w_± ∝ (Ω_p ψ_a⁰, ω_±, Ω_d/2).
    pub w_zero: [f64; 3],
    pub w_plus: [f64; 3],
    pub w_minus: [f64; 3],
    /// Normalization constants 𝒩_± = 1/√((Ω_p ψ_a⁰)² + ω_±² + (Ω_d/2)²).
    pub n_plus: f64,
    pub n_minus: f64,
}

fn normalized(v: [f64; 3]) -> ([f64; 3], f64) {
    let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    ([v[0] / norm, v[1] / norm, v[2] / norm], 1.0 / norm)
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Diagonalize M in closed form.
pub fn normal_modes(sample: &PulseSample, params: &SystemParams) -> Result<NormalModeSet, Error> {
    let w_eff = effective_rabi_nonlinear(sample);
    let disc = params.delta * params.delta + sample.omega_d * w_eff;
    if disc < 0.0 {
        return Err(Error::DynamicalInstability);
    }
    let cpt = nonlinear_cpt(sample)?;
    let coupling = sample.omega_p * cpt.state.psi_a.re;
    let half_d = 0.5 * sample.omega_d;

    // ω² − Δω − q = 0 with q = (Ω_p ψ_a⁰)² + (Ω_d/2)² = Ω_d Ω_eff_nl / 4.
    // Take the well-conditioned root first, then use ω₊ω₋ = −q.
    let q = coupling * coupling + half_d * half_d;
    let root = disc.sqrt();
    let (omega_plus, omega_minus) = if params.delta >= 0.0 {
        let plus = 0.5 * (params.delta + root);
        (plus, -q / plus)
    } else {
        let minus = 0.5 * (params.delta - root);
        (-q / minus, minus)
    };

    let (w_zero, _) = normalized([-half_d, 0.0, coupling]);
    let (w_plus, n_plus) = normalized([coupling, omega_plus, half_d]);
    let (w_minus, n_minus) = normalized([coupling, omega_minus, half_d]);
    Ok(NormalModeSet {
        omega_zero: 0.0,
        omega_plus,
        omega_minus,
        w_zero,
        w_plus,
        w_minus,
        n_plus,
        n_minus,
    })
}

/// Projection of the branch motion onto the zero mode,
/// w₀†Ψ̇₀ = 𝒩₀(−(Ω_d/2) ψ̇_a⁰ + Ω_p ψ_a⁰ ψ̇_g⁰).
///
/// Identically zero along the CPT branch: the zero mode is resonant with
/// the branch but not driven by its motion.
pub fn zero_mode_source(cpt: &CptPoint, modes: &NormalModeSet) -> f64 {
    dot(
        modes.w_zero,
        [
            cpt.state_dot.psi_a.re,
            cpt.state_dot.psi_e.re,
            cpt.state_dot.psi_g.re,
        ],
    )
}

fn mode_sources(cpt: &CptPoint, modes: &NormalModeSet) -> (f64, f64) {
    let dot_vec = [
        cpt.state_dot.psi_a.re,
        cpt.state_dot.psi_e.re,
        cpt.state_dot.psi_g.re,
    ];
    (dot(modes.w_plus, dot_vec), dot(modes.w_minus, dot_vec))
}

/// Driven amplitude of one ± mode at one grid node.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct ModeAmplitudeSample {
    pub t: f64,
    pub c_plus: C64,
    pub c_minus: C64,
}

/// Amplitudes from the direct integration route, including the zero mode.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct ModalOdeSample {
    pub t: f64,
    pub c_zero: C64,
    pub c_plus: C64,
    pub c_minus: C64,
}

/// How the oscillatory kernel of the amplitude integral treats the
/// time-varying eigenfrequencies.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Default)]
pub enum PhaseKernel {
    /// Accumulate the phase as ∫ω_± dt′ across sub-intervals. Consistent
    /// with the amplitude equations when ω_± drifts with the pulses; the
    /// default.
    #[default]
    Accumulated,
    /// Freeze ω_± at the evaluation time over the whole history, reading
    /// the kernel literally as e^{iω_±(t′−t)}. Quadratic cost in the grid
    /// size.
    Frozen,
}

struct BranchNode {
    omega_plus: f64,
    omega_minus: f64,
    s_plus: f64,
    s_minus: f64,
}

fn branch_nodes<S: PulseSchedule>(
    schedule: &S,
    params: &SystemParams,
    grid: &TimeGrid,
) -> Result<Vec<BranchNode>, Error> {
    grid.iter()
        .map(|t| {
            let sample = schedule.sample(t);
            let cpt = nonlinear_cpt(&sample)?;
            let modes = normal_modes(&sample, params)?;
            let (s_plus, s_minus) = mode_sources(&cpt, &modes);
            Ok(BranchNode {
                omega_plus: modes.omega_plus,
                omega_minus: modes.omega_minus,
                s_plus,
                s_minus,
            })
        })
        .collect()
}

/// Mode amplitudes c_±(t) by cumulative quadrature of
/// c_±(t) = −∫₀ᵗ e^{iφ_±(t′) − iφ_±(t)} w_±†(t′) Ψ̇₀(t′) dt′
/// over a uniform grid, with c_±(t₀) = 0.
///
/// The trapezoidal rule is applied to the phased integrand, so the result
/// converges at O(h²); halving the step is a cheap self-check.
pub fn mode_amplitudes_quadrature<S: PulseSchedule>(
    schedule: &S,
    params: &SystemParams,
    grid: &TimeGrid,
    kernel: PhaseKernel,
) -> Result<Vec<ModeAmplitudeSample>, Error> {
    let nodes = branch_nodes(schedule, params, grid)?;
    let h = grid.step();
    let mut out = Vec::with_capacity(grid.len());

    match kernel {
        PhaseKernel::Accumulated => {
            let mut phase_plus = 0.0;
            let mut phase_minus = 0.0;
            let mut integral_plus = C64::new(0.0, 0.0);
            let mut integral_minus = C64::new(0.0, 0.0);
            out.push(ModeAmplitudeSample {
                t: grid.node(0),
                c_plus: C64::new(0.0, 0.0),
                c_minus: C64::new(0.0, 0.0),
            });
            for k in 1..grid.len() {
                let (prev, cur) = (&nodes[k - 1], &nodes[k]);
                let prev_phase_plus = phase_plus;
                let prev_phase_minus = phase_minus;
                phase_plus += 0.5 * h * (prev.omega_plus + cur.omega_plus);
                phase_minus += 0.5 * h * (prev.omega_minus + cur.omega_minus);
                integral_plus += 0.5
                    * h
                    * (prev.s_plus * (C64::i() * prev_phase_plus).exp()
                        + cur.s_plus * (C64::i() * phase_plus).exp());
                integral_minus += 0.5
                    * h
                    * (prev.s_minus * (C64::i() * prev_phase_minus).exp()
                        + cur.s_minus * (C64::i() * phase_minus).exp());
                out.push(ModeAmplitudeSample {
                    t: grid.node(k),
                    c_plus: -(C64::i() * -phase_plus).exp() * integral_plus,
                    c_minus: -(C64::i() * -phase_minus).exp() * integral_minus,
                });
            }
        }
        PhaseKernel::Frozen => {
            for k in 0..grid.len() {
                let mut c_plus = C64::new(0.0, 0.0);
                let mut c_minus = C64::new(0.0, 0.0);
                if k > 0 {
                    // Rotating phasor for e^{iω_k (t_j − t_k)}, stepped by
                    // e^{iω_k h} along the history.
                    let step_plus = (C64::i() * nodes[k].omega_plus * h).exp();
                    let step_minus = (C64::i() * nodes[k].omega_minus * h).exp();
                    let mut phasor_plus =
                        (C64::i() * nodes[k].omega_plus * (grid.node(0) - grid.node(k))).exp();
                    let mut phasor_minus =
                        (C64::i() * nodes[k].omega_minus * (grid.node(0) - grid.node(k))).exp();
                    for j in 0..k {
                        let weight = 0.5 * h;
                        c_plus -= weight * nodes[j].s_plus * phasor_plus;
                        c_minus -= weight * nodes[j].s_minus * phasor_minus;
                        phasor_plus *= step_plus;
                        phasor_minus *= step_minus;
                        c_plus -= weight * nodes[j + 1].s_plus * phasor_plus;
                        c_minus -= weight * nodes[j + 1].s_minus * phasor_minus;
                    }
                }
                out.push(ModeAmplitudeSample {
                    t: grid.node(k),
                    c_plus,
                    c_minus,
                });
            }
        }
    }
    Ok(out)
}

#[derive(Copy, Clone)]
struct ModalVec([C64; 3]);

impl RkVector for ModalVec {
    fn add_scaled(self, coef: f64, k: Self) -> Self {
        ModalVec([
            self.0[0] + coef * k.0[0],
            self.0[1] + coef * k.0[1],
            self.0[2] + coef * k.0[2],
        ])
    }
}

/// Mode amplitudes by direct integration of the amplitude equations
/// i ċ_α = ω_α(t) c_α − i w_α†(t) Ψ̇₀(t), α ∈ {0, +, −}, from c_α = 0,
/// with the same RK4 stepper as the main dynamics.
///
/// The zero-mode source vanishes identically on the branch, so c₀ stays
/// at its initial value; it is returned so that this can be checked
/// rather than assumed.
pub fn mode_amplitudes_ode<S: PulseSchedule>(
    schedule: &S,
    params: &SystemParams,
    grid: &TimeGrid,
) -> Result<Vec<ModalOdeSample>, Error> {
    let h = grid.step();
    let failure: core::cell::Cell<Option<Error>> = core::cell::Cell::new(None);
    let mut rhs = |t: f64, c: &ModalVec| -> ModalVec {
        let sample = schedule.sample(t);
        let branch = nonlinear_cpt(&sample).and_then(|cpt| {
            let modes = normal_modes(&sample, params)?;
            Ok((cpt, modes))
        });
        match branch {
            Ok((cpt, modes)) => {
                let s_zero = zero_mode_source(&cpt, &modes);
                let (s_plus, s_minus) = mode_sources(&cpt, &modes);
                ModalVec([
                    -C64::i() * modes.omega_zero * c.0[0] - s_zero,
                    -C64::i() * modes.omega_plus * c.0[1] - s_plus,
                    -C64::i() * modes.omega_minus * c.0[2] - s_minus,
                ])
            }
            Err(e) => {
                if failure.get().is_none() {
                    failure.set(Some(e));
                }
                ModalVec([C64::new(0.0, 0.0); 3])
            }
        }
    };

    let mut state = ModalVec([C64::new(0.0, 0.0); 3]);
    let mut out = Vec::with_capacity(grid.len());
    out.push(ModalOdeSample {
        t: grid.node(0),
        c_zero: state.0[0],
        c_plus: state.0[1],
        c_minus: state.0[2],
    });
    for k in 0..grid.len() - 1 {
        state = rk4_step(&mut rhs, grid.node(k), state, h);
        if let Some(e) = failure.get() {
            return Err(e);
        }
        out.push(ModalOdeSample {
            t: grid.node(k + 1),
            c_zero: state.0[0],
            c_plus: state.0[1],
            c_minus: state.0[2],
        });
    }
    Ok(out)
}

/// Diagnostic route: integrate the full linearized deviation equation
/// δψ̇ = −i M(t) δψ − Ψ̇₀(t) from δψ = 0 and project onto w_±(t) at the
/// grid nodes.
///
/// Unlike [`mode_amplitudes_ode`], the projections pick up the rotation
/// of the mode frame itself (terms in ẇ_α that the amplitude equations
/// drop), so agreement with the quadrature route is only as good as that
/// neglect.
pub fn deviation_mode_projections<S: PulseSchedule>(
    schedule: &S,
    params: &SystemParams,
    grid: &TimeGrid,
) -> Result<Vec<ModeAmplitudeSample>, Error> {
    let h = grid.step();
    let failure: core::cell::Cell<Option<Error>> = core::cell::Cell::new(None);
    let mut rhs = |t: f64, dev: &StateVector| -> StateVector {
        let sample = schedule.sample(t);
        let branch = nonlinear_cpt(&sample).and_then(|cpt| {
            let matrix = build_stability_matrix(&sample, params)?;
            Ok((cpt, matrix))
        });
        match branch {
            Ok((cpt, matrix)) => matrix.apply(dev).scale_c(C64::new(0.0, -1.0)) - cpt.state_dot,
            Err(e) => {
                if failure.get().is_none() {
                    failure.set(Some(e));
                }
                StateVector::zero()
            }
        }
    };

    let project = |t: f64, dev: &StateVector| -> Result<ModeAmplitudeSample, Error> {
        let sample = schedule.sample(t);
        let modes = normal_modes(&sample, params)?;
        let project_onto = |w: [f64; 3]| w[0] * dev.psi_a + w[1] * dev.psi_e + w[2] * dev.psi_g;
        Ok(ModeAmplitudeSample {
            t,
            c_plus: project_onto(modes.w_plus),
            c_minus: project_onto(modes.w_minus),
        })
    };

    let mut dev = StateVector::zero();
    let mut out = Vec::with_capacity(grid.len());
    out.push(project(grid.node(0), &dev)?);
    for k in 0..grid.len() - 1 {
        dev = rk4_step(&mut rhs, grid.node(k), dev, h);
        if let Some(e) = failure.get() {
            return Err(e);
        }
        out.push(project(grid.node(k + 1), &dev)?);
    }
    Ok(out)
}

/// Adiabaticity parameter from mode amplitudes, r_nl = ½√(|c₊|² + |c₋|²):
/// the population sitting in fluctuations above the CPT solution.
pub fn r_nl_exact(c_plus: C64, c_minus: C64) -> f64 {
    0.5 * (c_plus.norm_sqr() + c_minus.norm_sqr()).sqrt()
}

/// Closed-form adiabaticity parameter on resonance,
/// r_nl = |χ̇| / (1 + √(1 + 8χ²)) · 2/Ω_eff_nl.
///
/// Algebraically identical to assembling the stationary-phase amplitudes
/// through the 𝒩_±/ω_± form; compared with the linear parameter, the χ²
/// in the denominator is replaced by √(1 + 8χ²), so late-stage adiabatic
/// following (χ ≫ 1) is harder for the nonlinear system.
pub fn r_nl_closed(sample: &PulseSample, params: &SystemParams) -> Result<f64, Error> {
    if params.delta != 0.0 {
        return Err(Error::UnsupportedDetuning);
    }
    let (chi, chi_dot) = mixing_ratio(sample)?;
    let w_eff = effective_rabi_nonlinear(sample);
    Ok(chi_dot.abs() / (1.0 + (1.0 + 8.0 * chi * chi).sqrt()) * 2.0 / w_eff)
}

/// Stationary-phase approximation of the amplitude integral:
/// c_± ≈ −𝒩_± (Ω̇_p Ω_d − Ω_p Ω̇_d)/(Ω_d + Ω_eff_nl) · (1 − e^{−iω_± t})/(iω_±).
///
/// Valid where the kernel oscillates fast (|ω_±| ≫ 1 in pulse-width
/// units); elsewhere it is only an order-of-magnitude estimate.
pub fn stationary_phase_amplitudes(
    sample: &PulseSample,
    modes: &NormalModeSet,
    t: f64,
) -> Result<(C64, C64), Error> {
    sample.guard_omega_d()?;
    let w_eff = effective_rabi_nonlinear(sample);
    let source = (sample.omega_p_dot * sample.omega_d - sample.omega_p * sample.omega_d_dot)
        / (sample.omega_d + w_eff);
    let one_mode = |n: f64, omega: f64| -> C64 {
        let oscillation =
            (C64::new(1.0, 0.0) - (C64::i() * -omega * t).exp()) / C64::new(0.0, omega);
        -n * source * oscillation
    };
    Ok((
        one_mode(modes.n_plus, modes.omega_plus),
        one_mode(modes.n_minus, modes.omega_minus),
    ))
}

/// One row of an adiabaticity trace: both exact routes to r_nl next to
/// the closed forms for the nonlinear and linear systems.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct AdiabaticitySample {
    pub t: f64,
    /// Quadrature mode amplitudes behind `r_nl_exact`.
    pub c_plus: C64,
    pub c_minus: C64,
    /// ½√(|c₊|² + |c₋|²) from the quadrature amplitudes.
    pub r_nl_exact: f64,
    /// Same quantity from the amplitude-equation integration.
    pub r_nl_ode: f64,
    pub r_nl_closed: f64,
    pub r_lin: f64,
}

/// Sampled adiabaticity comparison over a window (Δ = 0 only, since the
/// closed form is included).
pub fn adiabaticity_trace<S: PulseSchedule>(
    schedule: &S,
    params: &SystemParams,
    grid: &TimeGrid,
    kernel: PhaseKernel,
) -> Result<Vec<AdiabaticitySample>, Error> {
    if params.delta != 0.0 {
        return Err(Error::UnsupportedDetuning);
    }
    let quadrature = mode_amplitudes_quadrature(schedule, params, grid, kernel)?;
    let ode = mode_amplitudes_ode(schedule, params, grid)?;
    quadrature
        .iter()
        .zip(&ode)
        .map(|(q, o)| {
            let sample = schedule.sample(q.t);
            Ok(AdiabaticitySample {
                t: q.t,
                c_plus: q.c_plus,
                c_minus: q.c_minus,
                r_nl_exact: r_nl_exact(q.c_plus, q.c_minus),
                r_nl_ode: r_nl_exact(o.c_plus, o.c_minus),
                r_nl_closed: r_nl_closed(&sample, params)?,
                r_lin: crate::linear::r_lin(&sample)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::GaussianPulsePair;

    fn reference_pulses() -> GaussianPulsePair {
        GaussianPulsePair::new(5.0, 3.8, 3.0)
    }

    #[test]
    fn matrix_entries_without_pump() {
        let m = build_stability_matrix(&PulseSample::constant(0.0, 2.0), &SystemParams::resonant())
            .unwrap();
        assert_eq!(
            m.entries(),
            &[[0.0, 0.0, 0.0], [0.0, 0.0, 1.0], [0.0, 1.0, 0.0]]
        );
    }

    #[test]
    fn matrix_coupling_equal_amplitudes() {
        // ψ_a⁰ = √½ at χ = 1, so the a–e entry is Ω √½.
        let m = build_stability_matrix(&PulseSample::constant(2.0, 2.0), &SystemParams::resonant())
            .unwrap();
        assert!((m.entries()[0][1] - 2.0 * 0.5f64.sqrt()).abs() < 1e-14);
        assert_eq!(m.entries()[0][1], m.entries()[1][0]);
    }

    #[test]
    fn matrix_is_symmetric_with_zero_corners() {
        let m = build_stability_matrix(&PulseSample::constant(1.3, 0.8), &SystemParams::new(2.0))
            .unwrap();
        let e = m.entries();
        for (i, row) in e.iter().enumerate() {
            for (j, value) in row.iter().enumerate() {
                assert_eq!(*value, e[j][i]);
            }
        }
        assert_eq!(e[0][0], 0.0);
        assert_eq!(e[0][2], 0.0);
        assert_eq!(e[2][0], 0.0);
        assert_eq!(e[2][2], 0.0);
    }

    #[test]
    fn resonant_frequencies_equal_amplitudes() {
        // Ω_eff_nl = 3Ω, so ω_± = ±(√3/2)Ω.
        let modes =
            normal_modes(&PulseSample::constant(2.0, 2.0), &SystemParams::resonant()).unwrap();
        let expected = 3.0f64.sqrt();
        assert!((modes.omega_plus - expected).abs() < 1e-14);
        assert!((modes.omega_minus + expected).abs() < 1e-14);
        assert_eq!(modes.omega_zero, 0.0);
    }

    #[test]
    fn modes_are_orthonormal_eigenvectors() {
        for &(p, d, delta) in &[
            (3.0, 4.0, 0.0),
            (3.0, 4.0, 2.0),
            (0.3, 6.0, -4.0),
            (6.0, 0.3, 1.0),
        ] {
            let sample = PulseSample::constant(p, d);
            let params = SystemParams::new(delta);
            let m = build_stability_matrix(&sample, &params).unwrap();
            let modes = normal_modes(&sample, &params).unwrap();
            for (w, omega) in [
                (modes.w_zero, modes.omega_zero),
                (modes.w_plus, modes.omega_plus),
                (modes.w_minus, modes.omega_minus),
            ] {
                let mv = m.apply_real(w);
                for i in 0..3 {
                    assert!((mv[i] - omega * w[i]).abs() < 1e-10);
                }
                assert!((dot(w, w) - 1.0).abs() < 1e-12);
            }
            assert!(dot(modes.w_zero, modes.w_plus).abs() < 1e-12);
            assert!(dot(modes.w_zero, modes.w_minus).abs() < 1e-12);
            assert!(dot(modes.w_plus, modes.w_minus).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_mode_source_vanishes_on_branch() {
        let pulses = reference_pulses();
        for k in 0..=80 {
            let t = 0.5 + 7.0 * k as f64 / 80.0;
            let sample = pulses.sample(t);
            let cpt = nonlinear_cpt(&sample).unwrap();
            let modes = normal_modes(&sample, &SystemParams::resonant()).unwrap();
            assert!(zero_mode_source(&cpt, &modes).abs() < 1e-10);
        }
    }

    #[test]
    fn zero_mode_source_frozen_is_exactly_zero() {
        let sample = PulseSample::constant(1.5, 2.5);
        let cpt = nonlinear_cpt(&sample).unwrap();
        let modes = normal_modes(&sample, &SystemParams::resonant()).unwrap();
        assert_eq!(zero_mode_source(&cpt, &modes), 0.0);
    }

    #[test]
    fn zero_mode_source_detects_perturbed_branch_motion() {
        // Deliberately corrupt ψ̇_g⁰ to confirm the identity is not vacuous.
        let sample = reference_pulses().sample(3.1);
        let mut cpt = nonlinear_cpt(&sample).unwrap();
        let modes = normal_modes(&sample, &SystemParams::resonant()).unwrap();
        cpt.state_dot.psi_g += C64::new(0.1, 0.0);
        assert!(zero_mode_source(&cpt, &modes).abs() > 1e-3);
    }

    #[test]
    fn negative_discriminant_reports_instability() {
        // Requires an invariant-violating sample; impossible for real
        // nonnegative pulse amplitudes.
        let bad = PulseSample::constant(0.1, -9.0);
        assert_eq!(
            normal_modes(&bad, &SystemParams::resonant()),
            Err(Error::DynamicalInstability)
        );
    }

    #[test]
    fn frozen_pulses_leave_amplitudes_at_zero() {
        let sample = PulseSample::constant(1.5, 2.5);
        let params = SystemParams::resonant();
        let grid = TimeGrid::from_step(0.0, 4.0, 1e-2);
        for kernel in [PhaseKernel::Accumulated, PhaseKernel::Frozen] {
            let quad = mode_amplitudes_quadrature(&sample, &params, &grid, kernel).unwrap();
            assert!(quad
                .iter()
                .all(|a| a.c_plus.norm() == 0.0 && a.c_minus.norm() == 0.0));
        }
        let ode = mode_amplitudes_ode(&sample, &params, &grid).unwrap();
        assert!(ode.iter().all(|a| {
            a.c_zero.norm() < 1e-15 && a.c_plus.norm() < 1e-15 && a.c_minus.norm() < 1e-15
        }));
        let dev = deviation_mode_projections(&sample, &params, &grid).unwrap();
        assert!(dev
            .iter()
            .all(|a| a.c_plus.norm() < 1e-15 && a.c_minus.norm() < 1e-15));
    }

    #[test]
    fn r_nl_exact_values() {
        assert_eq!(r_nl_exact(C64::new(0.0, 0.0), C64::new(0.0, 0.0)), 0.0);
        assert_eq!(r_nl_exact(C64::new(1.0, 0.0), C64::new(0.0, 0.0)), 0.5);
        assert!((r_nl_exact(C64::new(0.0, 3.0), C64::new(4.0, 0.0)) - 2.5).abs() < 1e-15);
    }

    #[test]
    fn r_nl_closed_frozen_and_detuned() {
        let sample = PulseSample::constant(1.0, 2.0);
        assert_eq!(
            r_nl_closed(&sample, &SystemParams::resonant()).unwrap(),
            0.0
        );
        assert_eq!(
            r_nl_closed(&sample, &SystemParams::new(0.1)),
            Err(Error::UnsupportedDetuning)
        );
    }

    #[test]
    fn r_nl_equals_r_lin_without_pump() {
        let sample = PulseSample {
            omega_p: 0.0,
            omega_d: 2.0,
            omega_p_dot: 0.7,
            omega_d_dot: 0.0,
        };
        let nl = r_nl_closed(&sample, &SystemParams::resonant()).unwrap();
        let lin = crate::linear::r_lin(&sample).unwrap();
        assert!((nl - lin).abs() < 1e-15);
        assert!((nl - 0.7 / 4.0).abs() < 1e-15);
    }

    #[test]
    fn r_nl_to_r_lin_ratio_grows_with_chi() {
        // Equal-Gaussian schedule at the instant where χ = 10.
        let pulses = reference_pulses();
        let t = 0.5 * (pulses.t_p + pulses.t_d) + 10.0f64.ln() / (2.0 * (pulses.t_p - pulses.t_d));
        let sample = pulses.sample(t);
        let (chi, _) = mixing_ratio(&sample).unwrap();
        assert!((chi - 10.0).abs() < 1e-9);
        let ratio = r_nl_closed(&sample, &SystemParams::resonant()).unwrap()
            / crate::linear::r_lin(&sample).unwrap();
        let expected = (1.0 + chi * chi) / (1.0 + (1.0 + 8.0 * chi * chi).sqrt())
            * 2.0
            * crate::model::effective_rabi_linear(&sample)
            / effective_rabi_nonlinear(&sample);
        assert!((ratio - expected).abs() < 1e-12 * expected);
        assert!((ratio - 2.45).abs() < 0.01);
    }

    #[test]
    fn stationary_phase_reassembles_closed_form() {
        let params = SystemParams::resonant();
        for &t_probe in &[2.0, 3.4, 5.0] {
            let sample = reference_pulses().sample(t_probe);
            let modes = normal_modes(&sample, &params).unwrap();
            let (c_plus, c_minus) = stationary_phase_amplitudes(&sample, &modes, t_probe).unwrap();
            // Divide out the oscillating factors, then assemble r_nl.
            let strip = |c: C64, omega: f64| {
                c / ((C64::new(1.0, 0.0) - (C64::i() * -omega * t_probe).exp())
                    / C64::new(0.0, omega))
            };
            let bare_plus = strip(c_plus, modes.omega_plus) / modes.omega_plus;
            let bare_minus = strip(c_minus, modes.omega_minus) / modes.omega_minus;
            let assembled = r_nl_exact(bare_plus, bare_minus);
            let closed = r_nl_closed(&sample, &params).unwrap();
            assert!((assembled - closed).abs() < 1e-12 * closed);
        }
    }

    #[test]
    fn stationary_phase_frozen_pulses_vanish() {
        let sample = PulseSample::constant(1.0, 2.0);
        let modes = normal_modes(&sample, &SystemParams::resonant()).unwrap();
        let (c_plus, c_minus) = stationary_phase_amplitudes(&sample, &modes, 3.0).unwrap();
        assert_eq!(c_plus, C64::new(0.0, 0.0));
        assert_eq!(c_minus, C64::new(0.0, 0.0));
    }

    #[test]
    fn trace_rows_are_self_consistent() {
        let pulses = reference_pulses();
        let params = SystemParams::resonant();
        let grid = TimeGrid::from_step(0.5, 7.5, 5e-3);
        let trace = adiabaticity_trace(&pulses, &params, &grid, PhaseKernel::Accumulated).unwrap();
        assert_eq!(trace.len(), grid.len());
        for row in &trace {
            assert!((row.r_nl_exact - r_nl_exact(row.c_plus, row.c_minus)).abs() < 1e-15);
            assert!(row.r_nl_closed >= 0.0 && row.r_lin >= 0.0);
        }
        assert_eq!(
            adiabaticity_trace(
                &pulses,
                &SystemParams::new(1.0),
                &grid,
                PhaseKernel::Accumulated
            ),
            Err(Error::UnsupportedDetuning)
        );
    }
}
