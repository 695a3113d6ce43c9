//! Deterministic fixed-step integration of complex-state ODEs.
//!
//! Classical fourth-order Runge–Kutta over the complex triple. The state
//! is never renormalized in flight: norm drift is an accuracy diagnostic,
//! not something to correct silently.

use alloc::vec::Vec;

#[allow(unused_imports)] // inherent f64 math shadows the trait when dev builds link std
use num_traits::Float;

use crate::error::Error;
use crate::model::StateVector;

/// Integration window and sampling controls.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct IntegrationConfig {
    pub t0: f64,
    pub t1: f64,
    /// Requested step; the actual step is (t1 − t0)/n with n chosen so the
    /// last node lands exactly on t1.
    pub step: f64,
    /// Keep every k-th step in the trajectory (the endpoints are always
    /// kept).
    pub record_every: usize,
}

impl IntegrationConfig {
    pub fn new(t0: f64, t1: f64, step: f64, record_every: usize) -> Self {
        assert!(t1 > t0, "window must have positive length");
        assert!(
            step > 0.0 && step <= t1 - t0,
            "step must be positive and fit the window"
        );
        assert!(record_every > 0, "record_every must be positive");
        Self {
            t0,
            t1,
            step,
            record_every,
        }
    }

    /// Uniform node grid covering the window at (approximately) the
    /// configured step.
    pub fn grid(&self) -> TimeGrid {
        TimeGrid::from_step(self.t0, self.t1, self.step)
    }
}

/// Uniform time grid: `len` nodes from `t0` to `t0 + (len−1)·step`.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct TimeGrid {
    t0: f64,
    step: f64,
    len: usize,
}

impl TimeGrid {
    /// Grid over [t0, t1] with the number of intervals rounded so the
    /// last node lands exactly on t1.
    pub fn from_step(t0: f64, t1: f64, step: f64) -> Self {
        assert!(t1 > t0 && step > 0.0);
        let intervals = (((t1 - t0) / step).round() as usize).max(1);
        Self {
            t0,
            step: (t1 - t0) / intervals as f64,
            len: intervals + 1,
        }
    }

    pub fn node(&self, k: usize) -> f64 {
        debug_assert!(k < self.len);
        self.t0 + self.step * k as f64
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len).map(move |k| self.node(k))
    }
}

/// Minimal vector-space surface RK4 needs.
pub(crate) trait RkVector: Copy {
    fn add_scaled(self, coef: f64, k: Self) -> Self;
}

impl RkVector for StateVector {
    fn add_scaled(self, coef: f64, k: Self) -> Self {
        self + k * coef
    }
}

/// One classical RK4 step from (t, y) with step h.
pub(crate) fn rk4_step<S, F>(rhs: &mut F, t: f64, y: S, h: f64) -> S
where
    S: RkVector,
    F: FnMut(f64, &S) -> S,
{
    let k1 = rhs(t, &y);
    let k2 = rhs(t + 0.5 * h, &y.add_scaled(0.5 * h, k1));
    let k3 = rhs(t + 0.5 * h, &y.add_scaled(0.5 * h, k2));
    let k4 = rhs(t + h, &y.add_scaled(h, k3));
    y.add_scaled(h / 6.0, k1)
        .add_scaled(h / 3.0, k2)
        .add_scaled(h / 3.0, k3)
        .add_scaled(h / 6.0, k4)
}

/// One recorded point of a trajectory.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct TrajectorySample {
    pub t: f64,
    pub state: StateVector,
}

impl TrajectorySample {
    /// |ψ_a|²
    pub fn pop_a(&self) -> f64 {
        self.state.psi_a.norm_sqr()
    }

    /// |ψ_e|²
    pub fn pop_e(&self) -> f64 {
        self.state.psi_e.norm_sqr()
    }

    /// |ψ_g|²
    pub fn pop_g(&self) -> f64 {
        self.state.psi_g.norm_sqr()
    }
}

/// Recorded time series of the integrated state, strictly increasing in
/// t, first sample at t0 and last at t1.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    samples: Vec<TrajectorySample>,
}

impl Trajectory {
    pub fn samples(&self) -> &[TrajectorySample] {
        &self.samples
    }

    pub fn first(&self) -> &TrajectorySample {
        self.samples.first().expect("trajectory is never empty")
    }

    pub fn last(&self) -> &TrajectorySample {
        self.samples.last().expect("trajectory is never empty")
    }

    /// Largest deviation of an observable from its initial value over the
    /// recorded samples.
    pub fn max_drift<F: Fn(&StateVector) -> f64>(&self, observable: F) -> f64 {
        let reference = observable(&self.first().state);
        self.samples
            .iter()
            .map(|s| (observable(&s.state) - reference).abs())
            .fold(0.0, f64::max)
    }
}

/// Integrate `rhs` from `initial` over the configured window.
///
/// Deterministic for a fixed config; global error O(step⁴) for smooth
/// right-hand sides. Fails with [`Error::NonFiniteState`] the first time
/// a state component stops being finite.
pub fn integrate<F>(
    mut rhs: F,
    initial: StateVector,
    config: &IntegrationConfig,
) -> Result<Trajectory, Error>
where
    F: FnMut(f64, &StateVector) -> StateVector,
{
    let grid = config.grid();
    let h = grid.step();
    let steps = grid.len() - 1;

    let mut samples = Vec::with_capacity(steps / config.record_every + 2);
    let mut state = initial;
    if !state.is_finite() {
        return Err(Error::NonFiniteState { t: grid.node(0) });
    }
    samples.push(TrajectorySample {
        t: grid.node(0),
        state,
    });

    for k in 0..steps {
        state = rk4_step(&mut rhs, grid.node(k), state, h);
        let t_next = grid.node(k + 1);
        if !state.is_finite() {
            return Err(Error::NonFiniteState { t: t_next });
        }
        if (k + 1) % config.record_every == 0 || k + 1 == steps {
            samples.push(TrajectorySample { t: t_next, state });
        }
    }
    Ok(Trajectory { samples })
}
