//! Canned demonstration scenarios producing plottable data.
//!
//! All scenarios are deterministic: pseudo-random initial data comes from
//! [`crate::rng::SplitMix64`] with a fixed seed, so repeated runs emit
//! byte-identical artifacts on one platform.

use num_complex::Complex;

use crate::decay::{build_counterexample, CounterexampleCertificate};
use crate::energy::energy;
use crate::error::Result;
use crate::filter::FilterSpectrum;
use crate::propagator::propagate_state;
use crate::rng::SplitMix64;
use crate::scalar::Scalar;
use crate::splitting::{project, Component, ProjectionFilter};
use crate::state::{GridField, ModeVector, SpectralState};

/// Seed of the band-limited random initial datum.
pub const FIGURE1_SEED: u64 = 20;
/// Truncation order of the demonstration datum (modes 0..=20 populated).
pub const FIGURE1_K_MAX: usize = 20;
/// Damping acts on `|k| >= FIGURE1_DAMPED_FROM`; lower modes evolve freely.
pub const FIGURE1_DAMPED_FROM: usize = 3;

/// Random band-limited initial state: `|u_k| = 1/(1 + |k|)` with random
/// phases (random sign on the zero mode), zero velocity. Drawn from
/// [`SplitMix64`] seeded with `seed`, one draw per mode in ascending `k`.
pub fn random_band_limited_state<T: Scalar>(
    l: T,
    k_max: usize,
    seed: u64,
    decay: T,
) -> SpectralState<T> {
    let mut rng = SplitMix64::new(seed);
    let mut half = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        let mag = (T::one() + T::from_usize(k)).powf(-decay);
        if k == 0 {
            let sign = if rng.next_unit() < 0.5 {
                -T::one()
            } else {
                T::one()
            };
            half.push(Complex::new(sign * mag, T::zero()));
        } else {
            let theta = T::from_f64(rng.next_unit()) * T::two() * T::PI();
            half.push(Complex::new(mag * theta.cos(), mag * theta.sin()));
        }
    }
    let u = ModeVector::from_half(k_max, &half).expect("construction is Hermitian");
    SpectralState::at_rest(l, u).expect("valid state")
}

/// The demonstration initial state (seed 20, modes up to 20, unit domain).
pub fn figure1_initial_state<T: Scalar>() -> SpectralState<T> {
    random_band_limited_state(T::one(), FIGURE1_K_MAX, FIGURE1_SEED, T::one())
}

/// The demonstration damping filter: indicator of `|k| >= 3`.
pub fn figure1_filter<T: Scalar>() -> ProjectionFilter<T> {
    ProjectionFilter::damp_above(FIGURE1_K_MAX, FIGURE1_DAMPED_FROM)
}

/// Trajectory data of the band-damped demonstration run.
#[derive(Debug, Clone)]
pub struct Figure1Bundle<T> {
    pub state0: SpectralState<T>,
    pub filter: ProjectionFilter<T>,
    /// Displacement snapshots `(t, u(t, .))` on the synthesis grid.
    pub snapshots: Vec<(T, GridField<T>)>,
    /// Grid samples of the conservative component of the initial datum.
    pub initial_conserved: GridField<T>,
    /// `(t, ||u(t) - Q[u(t)]||_{H1})`.
    pub distance: Vec<(T, T)>,
    /// `(t, E(Q-part))`; constant along the trajectory.
    pub conserved_energy: Vec<(T, T)>,
}

/// Runs the band-damped demonstration: random datum on modes up to 20,
/// zero initial velocity, damping on `|k| >= 3`.
pub fn scenario_figure1<T: Scalar>(
    snapshot_times: &[T],
    series_times: &[T],
    grid_n: usize,
) -> Result<Figure1Bundle<T>> {
    let state0 = figure1_initial_state::<T>();
    let filter = figure1_filter::<T>();

    let mut snapshots = Vec::with_capacity(snapshot_times.len());
    for &t in snapshot_times {
        let st = propagate_state(&state0, filter.as_filter(), t)?;
        snapshots.push((t, st.synthesize_u(grid_n)?));
    }
    let initial_conserved =
        project(&state0, &filter, Component::Conservative).synthesize_u(grid_n)?;

    let mut distance = Vec::with_capacity(series_times.len());
    let mut conserved_energy = Vec::with_capacity(series_times.len());
    for &t in series_times {
        let st = propagate_state(&state0, filter.as_filter(), t)?;
        let p = project(&st, &filter, Component::Dissipative);
        let q = project(&st, &filter, Component::Conservative);
        distance.push((t, p.u().h1_norm_sq(state0.l()).sqrt()));
        conserved_energy.push((t, energy(&q).total()));
    }

    Ok(Figure1Bundle {
        state0,
        filter,
        snapshots,
        initial_conserved,
        distance,
        conserved_energy,
    })
}

/// Default sampling for [`scenario_figure1`]: snapshots at t = 0, 1, 2, 4
/// and series on `t = 0, 0.1, ..., 30` with a 256-point grid.
pub fn scenario_figure1_default<T: Scalar>() -> Result<Figure1Bundle<T>> {
    let snapshot_times: Vec<T> = [0.0, 1.0, 2.0, 4.0]
        .iter()
        .map(|&t| T::from_f64(t))
        .collect();
    let series_times: Vec<T> = (0..=300).map(|i| T::from_f64(i as f64 * 0.1)).collect();
    scenario_figure1(&snapshot_times, &series_times, 256)
}

/// Single critically damped mode pair driven from rest by `v0 = 2 cos(2 pi x)`.
#[derive(Debug, Clone)]
pub struct Example33Bundle<T> {
    pub state0: SpectralState<T>,
    pub filter: FilterSpectrum<T>,
    pub times: Vec<T>,
    /// `u_1(t)`; equals `t e^{-2 pi t}` (real) for this datum.
    pub mode_value: Vec<Complex<T>>,
    /// `||u(t) - Q[u(t)]||^2_{H1} = 2 (1 + (2 pi)^2) |u_1(t)|^2`.
    pub distance_h1_sq: Vec<T>,
}

/// Runs the critical-mode scenario: damping 4 pi on `|k| = 1` only,
/// `u0 = 0`, `v_{+-1}(0) = 1`, unit domain.
pub fn scenario_example33<T: Scalar>(times: &[T]) -> Result<Example33Bundle<T>> {
    let k_max = 1;
    let four_pi = T::from_f64(4.0) * T::PI();
    let filter = FilterSpectrum::from_fn(k_max, |k| if k == 1 { four_pi } else { T::zero() })?;
    let zero = Complex::new(T::zero(), T::zero());
    let one = Complex::new(T::one(), T::zero());
    let v = ModeVector::from_half(k_max, &[zero, one])?;
    let state0 = SpectralState::new(T::one(), ModeVector::zeros(k_max), v)?;

    let two_pi = T::two() * T::PI();
    let weight = T::two() * (T::one() + two_pi * two_pi);
    let mut mode_value = Vec::with_capacity(times.len());
    let mut distance_h1_sq = Vec::with_capacity(times.len());
    for &t in times {
        let st = propagate_state(&state0, &filter, t)?;
        let u1 = st.u().get(1);
        mode_value.push(u1);
        distance_h1_sq.push(weight * u1.norm_sqr());
    }
    Ok(Example33Bundle {
        state0,
        filter,
        times: times.to_vec(),
        mode_value,
        distance_h1_sq,
    })
}

/// Default sampling for [`scenario_example33`]: `t = 0, 0.01, ..., 8`.
pub fn scenario_example33_default<T: Scalar>() -> Result<Example33Bundle<T>> {
    let times: Vec<T> = (0..=800).map(|i| T::from_f64(i as f64 * 0.01)).collect();
    scenario_example33(&times)
}

/// Truncation order used by the no-uniform-decay scenario.
pub const EXAMPLE34_K_MAX: usize = 64;

/// Builds the no-uniform-decay certificate for the default vanishing-tail
/// filter `phi_k = 1 / (1 + |k|)` at truncation order 64.
pub fn scenario_example34<T: Scalar>(gamma: T, m: T) -> Result<CounterexampleCertificate<T>> {
    let filter = FilterSpectrum::power_tail(EXAMPLE34_K_MAX, T::one())?;
    build_counterexample(gamma, m, &filter, 11)
}
