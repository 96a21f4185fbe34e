//! Energy, dissipation and the elliptic resolvent solve.
//!
//! The energy of a state is `E = 1/2 sum_k |v_k|^2 + 1/2 sum_k (2 pi k / L)^2 |u_k|^2`
//! (unweighted-sum convention, see [`crate::state`]). Along a trajectory the
//! balance `E(t) + \int_0^t sum_k phi_k |v_k(s)|^2 ds = E(0)` holds; the
//! integral is evaluated by adaptive Simpson quadrature against the analytic
//! trajectory and the per-record closure defect is reported as a residual.

use crate::error::{Error, Result};
use crate::filter::FilterSpectrum;
use crate::propagator::propagate_state;
use crate::scalar::Scalar;
use crate::state::{ModeVector, SpectralState};

/// Quadrature refinement stops once successive Simpson estimates differ by
/// less than `QUADRATURE_REL_TOL * E(0)`.
pub const QUADRATURE_REL_TOL: f64 = 1e-11;

/// Maximum bisection depth of the adaptive quadrature.
pub const QUADRATURE_MAX_DEPTH: u32 = 20;

/// Kinetic/potential split of the energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Energy<T> {
    pub kinetic: T,
    pub potential: T,
}

impl<T: Scalar> Energy<T> {
    pub fn total(&self) -> T {
        self.kinetic + self.potential
    }
}

/// `E = 1/2 sum |v_k|^2 + 1/2 sum (2 pi k / L)^2 |u_k|^2`.
pub fn energy<T: Scalar>(state: &SpectralState<T>) -> Energy<T> {
    let half = T::half();
    let two_pi = T::two() * T::PI();
    let kinetic = state.v().l2_norm_sq() * half;
    let potential = state.u().iter().fold(T::zero(), |acc, (k, c)| {
        let w = two_pi * T::from_f64(k as f64) / state.l();
        acc + w * w * c.norm_sqr()
    }) * half;
    Energy { kinetic, potential }
}

/// Instantaneous dissipation `sum_k phi_k |v_k|^2 >= 0`.
pub fn dissipation_rate<T: Scalar>(
    state: &SpectralState<T>,
    filter: &FilterSpectrum<T>,
) -> Result<T> {
    if state.k_max() != filter.k_max() {
        return Err(Error::DimensionMismatch(format!(
            "state K_max = {} but filter K_max = {}",
            state.k_max(),
            filter.k_max()
        )));
    }
    Ok(state
        .v()
        .iter()
        .fold(T::zero(), |acc, (k, c)| acc + filter.phi(k) * c.norm_sqr()))
}

/// One row of the energy ledger.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyRecord<T> {
    pub t: T,
    pub kinetic: T,
    pub potential: T,
    pub total: T,
    /// Cumulative dissipation `\int_0^t sum_k phi_k |v_k(s)|^2 ds`.
    pub dissipated: T,
    /// Balance defect `total + dissipated - E(0)`.
    pub residual: T,
}

/// Bisection levels always performed before the convergence test may accept;
/// guards against spurious early acceptance on oscillatory integrands.
const QUADRATURE_MIN_DEPTH: u32 = 6;

/// Adaptive Simpson quadrature with Richardson correction.
fn adaptive_simpson<T: Scalar>(f: &mut impl FnMut(T) -> T, a: T, b: T, tol: T) -> Result<T> {
    let half = T::half();
    let m = (a + b) * half;
    let fa = f(a);
    let fm = f(m);
    let fb = f(b);
    let whole = simpson_rule(a, b, fa, fm, fb);
    simpson_rec(
        f,
        a,
        b,
        fa,
        fm,
        fb,
        whole,
        tol,
        QUADRATURE_MAX_DEPTH,
        QUADRATURE_MIN_DEPTH,
    )
}

fn simpson_rule<T: Scalar>(a: T, b: T, fa: T, fm: T, fb: T) -> T {
    (b - a) / T::from_f64(6.0) * (fa + T::from_f64(4.0) * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec<T: Scalar>(
    f: &mut impl FnMut(T) -> T,
    a: T,
    b: T,
    fa: T,
    fm: T,
    fb: T,
    whole: T,
    tol: T,
    depth: u32,
    force: u32,
) -> Result<T> {
    let half = T::half();
    let m = (a + b) * half;
    let lm = (a + m) * half;
    let rm = (m + b) * half;
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson_rule(a, m, fa, flm, fm);
    let right = simpson_rule(m, b, fm, frm, fb);
    let refined = left + right;
    let diff = refined - whole;
    if force == 0 && diff.abs() <= T::from_f64(15.0) * tol {
        return Ok(refined + diff / T::from_f64(15.0));
    }
    if depth == 0 {
        return Err(Error::QuadratureNonConvergence {
            levels: QUADRATURE_MAX_DEPTH,
        });
    }
    let next_force = force.saturating_sub(1);
    let lt = simpson_rec(
        f,
        a,
        m,
        fa,
        flm,
        fm,
        left,
        tol * half,
        depth - 1,
        next_force,
    )?;
    let rt = simpson_rec(
        f,
        m,
        b,
        fm,
        frm,
        fb,
        right,
        tol * half,
        depth - 1,
        next_force,
    )?;
    Ok(lt + rt)
}

/// Energy ledger along the analytic trajectory at the given (sorted,
/// nonnegative) times. Cumulative dissipation is integrated segment by
/// segment, refined until successive Simpson estimates differ by less than
/// `1e-11 * E(0)`.
pub fn trajectory_ledger<T: Scalar>(
    state0: &SpectralState<T>,
    filter: &FilterSpectrum<T>,
    times: &[T],
) -> Result<Vec<EnergyRecord<T>>> {
    if state0.k_max() != filter.k_max() {
        return Err(Error::DimensionMismatch(format!(
            "state K_max = {} but filter K_max = {}",
            state0.k_max(),
            filter.k_max()
        )));
    }
    if times.iter().any(|t| !(t.is_finite() && *t >= T::zero())) {
        return Err(Error::InvalidInput(
            "ledger times must be finite and >= 0".into(),
        ));
    }
    if times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidInput("ledger times must be sorted".into()));
    }

    let e0 = energy(state0).total();
    let tol = T::from_f64(QUADRATURE_REL_TOL) * e0;
    let mut rate = |s: T| -> T {
        let st = propagate_state(state0, filter, s).expect("validated above");
        dissipation_rate(&st, filter).expect("validated above")
    };

    let mut records = Vec::with_capacity(times.len());
    let mut prev_t = T::zero();
    let mut dissipated = T::zero();
    for &t in times {
        if t > prev_t {
            // The rate is nonnegative, so the cumulative integral is too;
            // the Richardson correction may undershoot a near-zero segment
            // by rounding, hence the clamp.
            dissipated =
                (dissipated + adaptive_simpson(&mut rate, prev_t, t, tol)?).max(T::zero());
            prev_t = t;
        }
        let st = propagate_state(state0, filter, t)?;
        let e = energy(&st);
        records.push(EnergyRecord {
            t,
            kinetic: e.kinetic,
            potential: e.potential,
            total: e.total(),
            dissipated,
            residual: e.total() + dissipated - e0,
        });
    }
    Ok(records)
}

/// Perturbed energy `E_lambda = E + lambda sum_k Re(u_k conj(v_k))`,
/// for `lambda` in `(0, 1/2)`.
pub fn perturbed_energy<T: Scalar>(state: &SpectralState<T>, lambda: T) -> Result<T> {
    if !(lambda > T::zero() && lambda < T::half()) {
        return Err(Error::InvalidInput(format!(
            "perturbation parameter must lie in (0, 1/2), got {lambda}"
        )));
    }
    let cross = state
        .u()
        .iter()
        .zip(state.v().iter())
        .fold(T::zero(), |acc, ((_, u), (_, v))| acc + (u * v.conj()).re);
    Ok(energy(state).total() + lambda * cross)
}

/// Applies the elliptic operator `(-Laplace + P + Id)` mode-wise:
/// `u_k -> ((2 pi k / L)^2 + phi_k + 1) u_k`.
pub fn apply_elliptic_operator<T: Scalar>(
    filter: &FilterSpectrum<T>,
    u: &ModeVector<T>,
    l: T,
) -> Result<ModeVector<T>> {
    if u.k_max() != filter.k_max() {
        return Err(Error::DimensionMismatch(format!(
            "operand K_max = {} but filter K_max = {}",
            u.k_max(),
            filter.k_max()
        )));
    }
    let two_pi = T::two() * T::PI();
    let coeffs = u
        .iter()
        .map(|(k, c)| {
            let w = two_pi * T::from_f64(k as f64) / l;
            c * (w * w + filter.phi(k) + T::one())
        })
        .collect();
    Ok(ModeVector::from_raw(u.k_max(), coeffs))
}

/// Solves `(-Laplace + P + Id) u = h` mode-wise:
/// `u_k = h_k / ((2 pi k / L)^2 + phi_k + 1)`. The denominator is >= 1,
/// so the solve never degenerates.
pub fn resolvent_solve<T: Scalar>(
    filter: &FilterSpectrum<T>,
    h: &ModeVector<T>,
    l: T,
) -> Result<ModeVector<T>> {
    if h.k_max() != filter.k_max() {
        return Err(Error::DimensionMismatch(format!(
            "rhs K_max = {} but filter K_max = {}",
            h.k_max(),
            filter.k_max()
        )));
    }
    let two_pi = T::two() * T::PI();
    let coeffs = h
        .iter()
        .map(|(k, c)| {
            let w = two_pi * T::from_f64(k as f64) / l;
            c / (w * w + filter.phi(k) + T::one())
        })
        .collect();
    Ok(ModeVector::from_raw(h.k_max(), coeffs))
}
