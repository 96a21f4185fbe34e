//! Fixed-step RK4 reference integrator for the per-mode ODE.
//!
//! Integrates `u'' + (2 pi k / L)^2 u + phi_k u' = 0` as the first-order
//! system `(u, v)' = (v, -(2 pi k / L)^2 u - phi_k v)` with classical RK4.
//! This module exists solely to cross-check the closed-form propagator and
//! deliberately shares no formulas with it; keep it that way.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::filter::FilterSpectrum;
use crate::scalar::Scalar;
use crate::state::SpectralState;

/// Outcome of an analytic-vs-RK4 comparison over a full state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    /// Largest `max(|du|, |dv|)` over all modes and both components.
    pub max_discrepancy: f64,
    /// Mode index attaining the maximum.
    pub worst_mode: i64,
    /// Number of RK4 steps taken per mode.
    pub steps: usize,
    /// Step actually used (the requested step rounded so that
    /// `steps * dt` lands exactly on the horizon).
    pub dt: f64,
}

/// Conservative RK4 stability bound for a single mode:
/// `dt <= 0.5 / (2 pi |k| / L + phi_k)`.
pub fn mode_stability_bound<T: Scalar>(k: i64, phi: T, l: T) -> T {
    let omega = T::two() * T::PI() * T::from_f64(k.unsigned_abs() as f64) / l;
    T::half() / (omega + phi)
}

/// Stability bound for a full state: `dt <= 0.5 / (2 pi K_max / L + sup phi)`.
pub fn state_stability_bound<T: Scalar>(k_max: usize, filter: &FilterSpectrum<T>, l: T) -> T {
    let omega = T::two() * T::PI() * T::from_usize(k_max) / l;
    T::half() / (omega + filter.sup())
}

fn rhs<T: Scalar>(u: Complex<T>, v: Complex<T>, omega_sq: T, phi: T) -> (Complex<T>, Complex<T>) {
    (v, -(u * omega_sq) - v * phi)
}

fn validate_step<T: Scalar>(t_end: T, dt: T, bound: T) -> Result<()> {
    if !(t_end.is_finite() && t_end >= T::zero()) {
        return Err(Error::InvalidInput(
            "horizon must be finite and >= 0".into(),
        ));
    }
    if !(dt.is_finite() && dt > T::zero()) {
        return Err(Error::InvalidInput("dt must be finite and positive".into()));
    }
    if dt > bound {
        return Err(Error::StabilityBound {
            dt: dt.to_f64(),
            bound: bound.to_f64(),
        });
    }
    Ok(())
}

/// Integrates one mode from 0 to `t_end`. The step is shrunk to
/// `t_end / ceil(t_end / dt)` so the grid lands exactly on the horizon.
pub fn rk4_mode<T: Scalar>(
    u0: Complex<T>,
    v0: Complex<T>,
    k: i64,
    phi: T,
    l: T,
    t_end: T,
    dt: T,
) -> Result<(Complex<T>, Complex<T>)> {
    validate_step(t_end, dt, mode_stability_bound(k, phi, l))?;
    Ok(rk4_mode_unchecked(u0, v0, k, phi, l, t_end, dt).0)
}

fn rk4_mode_unchecked<T: Scalar>(
    u0: Complex<T>,
    v0: Complex<T>,
    k: i64,
    phi: T,
    l: T,
    t_end: T,
    dt: T,
) -> ((Complex<T>, Complex<T>), usize, T) {
    if t_end == T::zero() {
        return ((u0, v0), 0, dt);
    }
    let omega = T::two() * T::PI() * T::from_f64(k.unsigned_abs() as f64) / l;
    let omega_sq = omega * omega;
    let steps = (t_end / dt).ceil().to_f64() as usize;
    let steps = steps.max(1);
    let h = t_end / T::from_usize(steps);
    let h2 = h * T::half();
    let sixth = h / T::from_f64(6.0);

    let mut u = u0;
    let mut v = v0;
    for _ in 0..steps {
        let (ku1, kv1) = rhs(u, v, omega_sq, phi);
        let (ku2, kv2) = rhs(u + ku1 * h2, v + kv1 * h2, omega_sq, phi);
        let (ku3, kv3) = rhs(u + ku2 * h2, v + kv2 * h2, omega_sq, phi);
        let (ku4, kv4) = rhs(u + ku3 * h, v + kv3 * h, omega_sq, phi);
        let two = T::two();
        u = u + (ku1 + ku2 * two + ku3 * two + ku4) * sixth;
        v = v + (kv1 + kv2 * two + kv3 * two + kv4) * sixth;
    }
    ((u, v), steps, h)
}

/// Compares the closed-form propagator against RK4 over every mode of a
/// state and reports the worst absolute discrepancy.
pub fn cross_validate<T: Scalar>(
    state: &SpectralState<T>,
    filter: &FilterSpectrum<T>,
    t_end: T,
    dt: T,
) -> Result<OracleReport> {
    if state.k_max() != filter.k_max() {
        return Err(Error::DimensionMismatch(format!(
            "state K_max = {} but filter K_max = {}",
            state.k_max(),
            filter.k_max()
        )));
    }
    let bound = state_stability_bound(state.k_max(), filter, state.l());
    validate_step(t_end, dt, bound)?;

    let mut worst = T::zero();
    let mut worst_mode = 0i64;
    let mut steps = 0usize;
    let mut used_dt = dt;
    let k_max = state.k_max() as i64;
    for k in -k_max..=k_max {
        let u0 = state.u().get(k);
        let v0 = state.v().get(k);
        let phi = filter.phi(k);
        let (ua, va) = crate::propagator::propagate_mode(u0, v0, k, phi, state.l(), t_end);
        let ((un, vn), n, h) = rk4_mode_unchecked(u0, v0, k, phi, state.l(), t_end, dt);
        steps = n;
        used_dt = h;
        let diff = (ua - un).norm().max((va - vn).norm());
        if diff > worst {
            worst = diff;
            worst_mode = k;
        }
    }
    Ok(OracleReport {
        max_discrepancy: worst.to_f64(),
        worst_mode,
        steps,
        dt: used_dt.to_f64(),
    })
}
