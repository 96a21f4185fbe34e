//! Orthogonal splitting of the solution for indicator filters.
//!
//! When the filter symbol is an indicator (`phi_k` equal to 0 or 1), the
//! damping operator is an orthogonal projection commuting with the Laplacian
//! (both are diagonal in the Fourier basis). The solution then decomposes
//! into a dissipative part supported on the damped band, which itself solves
//! the uniformly damped wave equation, and a conservative part on the
//! complement, which solves the undamped wave equation and conserves energy.
//! For non-indicator symbols this decomposition does not apply and the
//! constructors here refuse the filter.

use serde::{Deserialize, Serialize};

use crate::decay::{fit_decay, DecayFit};
use crate::error::{Error, Result};
use crate::filter::FilterSpectrum;
use crate::propagator::propagate_state;
use crate::scalar::Scalar;
use crate::state::{ModeVector, SpectralState};

/// Per-mode tolerance of the split verification.
pub const SPLIT_TOL: f64 = 1e-10;

/// An indicator filter (`phi_k` in {0, 1}), usable as an orthogonal projection.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionFilter<T> {
    filter: FilterSpectrum<T>,
}

impl<T: Scalar> ProjectionFilter<T> {
    /// Wraps a filter whose values are exactly 0 or 1; anything else is refused.
    pub fn new(filter: FilterSpectrum<T>) -> Result<Self> {
        if !filter.is_idempotent() {
            return Err(Error::NonIdempotentFilter);
        }
        Ok(Self { filter })
    }

    /// Projection damping the band `|k| >= k0`.
    pub fn damp_above(k_max: usize, k0: usize) -> Self {
        Self {
            filter: FilterSpectrum::indicator_above(k_max, k0),
        }
    }

    pub fn as_filter(&self) -> &FilterSpectrum<T> {
        &self.filter
    }

    pub fn k_max(&self) -> usize {
        self.filter.k_max()
    }

    /// True when mode `k` is damped (lies in the support of the symbol).
    pub fn damps(&self, k: i64) -> bool {
        self.filter.phi(k) == T::one()
    }

    /// True when no mode is damped.
    pub fn support_is_empty(&self) -> bool {
        self.filter.values().iter().all(|&v| v == T::zero())
    }
}

/// Which component of the splitting to keep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Component {
    /// Modes inside the damped band (the projection `P`).
    Dissipative,
    /// Modes outside the damped band (the complement `Q = Id - P`).
    Conservative,
}

/// Keeps the selected component of the state and zeroes the other, so that
/// the two components always sum to the original state exactly.
///
/// Panics when state and filter disagree on `K_max`.
pub fn project<T: Scalar>(
    state: &SpectralState<T>,
    pf: &ProjectionFilter<T>,
    which: Component,
) -> SpectralState<T> {
    assert_eq!(state.k_max(), pf.k_max(), "projection K_max mismatch");
    let k_max = state.k_max();
    let keep = |k: i64| match which {
        Component::Dissipative => pf.damps(k),
        Component::Conservative => !pf.damps(k),
    };
    let zero = num_complex::Complex::new(T::zero(), T::zero());
    let u = state
        .u()
        .iter()
        .map(|(k, c)| if keep(k) { c } else { zero })
        .collect();
    let v = state
        .v()
        .iter()
        .map(|(k, c)| if keep(k) { c } else { zero })
        .collect();
    SpectralState::from_raw(
        state.l(),
        ModeVector::from_raw(k_max, u),
        ModeVector::from_raw(k_max, v),
    )
}

/// Worst per-mode deviations of the two split components from their
/// reference evolutions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeSplitError {
    pub k: i64,
    /// Conservative part vs undamped evolution of the projected data.
    pub q_err: f64,
    /// Dissipative part vs uniformly damped evolution of the projected data.
    pub p_err: f64,
}

/// Report of the splitting verification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitReport {
    pub q_max_err: f64,
    pub p_max_err: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub per_mode: Vec<ModeSplitError>,
}

/// Checks, at each requested time, that the conservative part of the
/// trajectory equals the undamped evolution of the conservative initial data
/// and the dissipative part equals the uniformly damped (`phi = 1`)
/// evolution of the dissipative initial data.
pub fn verify_split<T: Scalar>(
    state0: &SpectralState<T>,
    pf: &ProjectionFilter<T>,
    times: &[T],
) -> Result<SplitReport> {
    if state0.k_max() != pf.k_max() {
        return Err(Error::DimensionMismatch(format!(
            "state K_max = {} but filter K_max = {}",
            state0.k_max(),
            pf.k_max()
        )));
    }
    let k_max = state0.k_max();
    let undamped = FilterSpectrum::zero(k_max);
    let fully_damped = FilterSpectrum::constant(k_max, T::one())?;
    let q0 = project(state0, pf, Component::Conservative);
    let p0 = project(state0, pf, Component::Dissipative);

    let mut per_mode: Vec<ModeSplitError> = (-(k_max as i64)..=(k_max as i64))
        .map(|k| ModeSplitError {
            k,
            q_err: 0.0,
            p_err: 0.0,
        })
        .collect();

    for &t in times {
        let full = propagate_state(state0, pf.as_filter(), t)?;
        let q_part = project(&full, pf, Component::Conservative);
        let p_part = project(&full, pf, Component::Dissipative);
        let q_ref = propagate_state(&q0, &undamped, t)?;
        let p_ref = propagate_state(&p0, &fully_damped, t)?;
        for (i, k) in (-(k_max as i64)..=(k_max as i64)).enumerate() {
            let qe = (q_part.u().get(k) - q_ref.u().get(k))
                .norm()
                .max((q_part.v().get(k) - q_ref.v().get(k)).norm());
            let pe = (p_part.u().get(k) - p_ref.u().get(k))
                .norm()
                .max((p_part.v().get(k) - p_ref.v().get(k)).norm());
            per_mode[i].q_err = per_mode[i].q_err.max(qe.to_f64());
            per_mode[i].p_err = per_mode[i].p_err.max(pe.to_f64());
        }
    }

    let q_max_err = per_mode.iter().map(|m| m.q_err).fold(0.0, f64::max);
    let p_max_err = per_mode.iter().map(|m| m.p_err).fold(0.0, f64::max);
    Ok(SplitReport {
        q_max_err,
        p_max_err,
        tolerance: SPLIT_TOL,
        passed: q_max_err <= SPLIT_TOL && p_max_err <= SPLIT_TOL,
        per_mode,
    })
}

/// Fitted exponential bound `M e^{-gamma t}` on the dissipative part's
/// squared energy norm `||P u||^2_{H1} + ||P v||^2_{L2}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectedDecay<T> {
    pub m_hat: T,
    pub gamma_hat: T,
    pub fit: DecayFit<T>,
}

/// Least-squares fit of the dissipative part's squared norm along the
/// trajectory. Fails with [`Error::EmptyProjection`] when the projected
/// part carries no data.
pub fn projected_decay_bound<T: Scalar>(
    state0: &SpectralState<T>,
    pf: &ProjectionFilter<T>,
    times: &[T],
) -> Result<ProjectedDecay<T>> {
    if times.len() < 2 {
        return Err(Error::FitWindow("need at least two sample times".into()));
    }
    let p0 = project(state0, pf, Component::Dissipative);
    if p0.u().l2_norm_sq() == T::zero() && p0.v().l2_norm_sq() == T::zero() {
        return Err(Error::EmptyProjection);
    }
    let samples: Vec<(T, T)> = times
        .iter()
        .map(|&t| {
            let st = propagate_state(state0, pf.as_filter(), t)?;
            let p = project(&st, pf, Component::Dissipative);
            Ok((t, p.u().h1_norm_sq(state0.l()) + p.v().l2_norm_sq()))
        })
        .collect::<Result<_>>()?;
    // Fit on the late half of the horizon to suppress transient bias.
    let t_end = times[times.len() - 1];
    let window = (t_end * T::half(), t_end);
    let fit = fit_decay(&samples, window)?;
    Ok(ProjectedDecay {
        m_hat: fit.log_prefactor.exp(),
        gamma_hat: fit.gamma_hat,
        fit,
    })
}
