//! Decay-rate estimation and the construction showing that no uniform
//! exponential decay bound exists when the filter symbol has a vanishing tail.
//!
//! `fit_decay` is a log-linear least-squares fit. `build_counterexample`
//! takes a target bound (`gamma`, `M`) and a strictly positive, symmetric
//! filter whose symbol dips below `gamma / 2` somewhere in the truncated
//! range, and produces single-pair initial data together with a sequence of
//! times at which the solution provably exceeds `M e^{-gamma t}` times the
//! initial data size. The construction lives on the unit domain `L = 1`.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::filter::FilterSpectrum;
use crate::oracle::rk4_mode;
use crate::propagator::propagate_mode;
use crate::scalar::Scalar;
use crate::state::{ModeVector, SpectralState};

/// Result of a log-linear least-squares fit `value ~ exp(log_prefactor - gamma_hat t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(
    serialize = "T: Serialize",
    deserialize = "T: serde::de::DeserializeOwned"
))]
pub struct DecayFit<T> {
    pub gamma_hat: T,
    pub log_prefactor: T,
    pub rms_residual: T,
    pub window: (T, T),
}

/// Ordinary least squares on `(t, log value)` over the samples falling in
/// `window`. Requires at least 5 in-window samples, all strictly positive.
pub fn fit_decay<T: Scalar>(samples: &[(T, T)], window: (T, T)) -> Result<DecayFit<T>> {
    let (lo, hi) = window;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::FitWindow(format!("degenerate window [{lo}, {hi}]")));
    }
    let in_window: Vec<(T, T)> = samples
        .iter()
        .copied()
        .filter(|&(t, _)| t >= lo && t <= hi)
        .collect();
    if in_window.len() < 5 {
        return Err(Error::FitWindow(format!(
            "need at least 5 samples in window, found {}",
            in_window.len()
        )));
    }
    if in_window.iter().any(|&(_, v)| v.is_nan() || v <= T::zero()) {
        return Err(Error::FitWindow(
            "all values in window must be strictly positive".into(),
        ));
    }
    let n = T::from_usize(in_window.len());
    let mut st = T::zero();
    let mut sy = T::zero();
    for &(t, v) in &in_window {
        st = st + t;
        sy = sy + v.ln();
    }
    let tbar = st / n;
    let ybar = sy / n;
    let mut stt = T::zero();
    let mut sty = T::zero();
    for &(t, v) in &in_window {
        let dt = t - tbar;
        stt = stt + dt * dt;
        sty = sty + dt * (v.ln() - ybar);
    }
    if stt == T::zero() {
        return Err(Error::FitWindow("all sample times coincide".into()));
    }
    let slope = sty / stt;
    let intercept = ybar - slope * tbar;
    let mut ss = T::zero();
    for &(t, v) in &in_window {
        let r = v.ln() - (intercept + slope * t);
        ss = ss + r * r;
    }
    Ok(DecayFit {
        gamma_hat: -slope,
        log_prefactor: intercept,
        rms_residual: (ss / n).sqrt(),
        window,
    })
}

/// One witnessed violation of the uniform decay bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarginSample<T> {
    pub n: u64,
    pub t: T,
    /// `||u(t_n)||^2_{H1}`.
    pub lhs: T,
    /// `M e^{-gamma t_n} (||u0||^2_{H1} + ||v0||^2_{L2})`.
    pub rhs: T,
    /// `lhs - rhs`, positive for a valid witness.
    pub margin: T,
}

/// Certificate that the uniform bound `(gamma, M)` fails for the given filter.
#[derive(Debug, Clone, PartialEq)]
pub struct CounterexampleCertificate<T> {
    /// Mode index carrying the witness data.
    pub k0: i64,
    pub gamma: T,
    pub m: T,
    /// Filter value at the witness mode.
    pub phi_k0: T,
    /// First index of the time sequence at which the bound is violated.
    pub n0: u64,
    /// Witness initial data: `u0 = 2 sin(2 pi k0 x)`, `v0 = -(phi/2) u0` mode-wise.
    pub initial: SpectralState<T>,
    pub margins: Vec<MarginSample<T>>,
}

fn check_counterexample_preconditions<T: Scalar>(
    gamma: T,
    m: T,
    filter: &FilterSpectrum<T>,
) -> Result<()> {
    if !(gamma > T::zero() && gamma.is_finite()) {
        return Err(Error::InvalidInput("gamma must be positive".into()));
    }
    if !(m > T::zero() && m.is_finite()) {
        return Err(Error::InvalidInput("M must be positive".into()));
    }
    let k_max = filter.k_max();
    if filter.values().iter().any(|&p| p <= T::zero()) {
        return Err(Error::NoAdmissibleMode {
            k_max,
            reason: "filter must be strictly positive on the truncated range".into(),
        });
    }
    let four_pi = T::from_f64(4.0) * T::PI();
    for k in 1..=k_max {
        let p = filter.phi(k as i64);
        let w = four_pi * T::from_usize(k);
        if p * p >= w * w {
            return Err(Error::NoAdmissibleMode {
                k_max,
                reason: format!("phi_{k}^2 must stay below (4 pi {k})^2"),
            });
        }
    }
    Ok(())
}

/// Builds the counterexample certificate with `n_samples` witness times
/// `t_n`, `n = n0 .. n0 + n_samples`. The domain is `(0, 1)`.
pub fn build_counterexample<T: Scalar>(
    gamma: T,
    m: T,
    filter: &FilterSpectrum<T>,
    n_samples: usize,
) -> Result<CounterexampleCertificate<T>> {
    check_counterexample_preconditions(gamma, m, filter)?;
    if n_samples == 0 {
        return Err(Error::InvalidInput("need at least one witness time".into()));
    }
    let k_max = filter.k_max();
    let two_pi = T::two() * T::PI();
    let half_gamma = gamma * T::half();

    // Smallest admissible mode: phi_k < gamma/2 and 2 (1 + (2 pi k)^2) > gamma^2 / 2.
    let k0 = (1..=k_max)
        .find(|&k| {
            let p = filter.phi(k as i64);
            let w = two_pi * T::from_usize(k);
            p < half_gamma && T::two() * (T::one() + w * w) > gamma * gamma * T::half()
        })
        .ok_or_else(|| Error::NoAdmissibleMode {
            k_max,
            reason: format!("no k with phi_k < gamma/2 = {}", (half_gamma).to_f64()),
        })? as i64;
    let phi = filter.phi(k0);

    // u0 = 2 sin(2 pi k0 x): coefficient -i at +k0 and +i at -k0.
    // v0 = -(phi_k / 2) u0 mode-wise, cancelling the sine branch of the
    // underdamped solution so that u_k(t) = e^{-t phi/2} cos(...) u_k(0).
    let mut hu = vec![Complex::new(T::zero(), T::zero()); k_max + 1];
    let mut hv = vec![Complex::new(T::zero(), T::zero()); k_max + 1];
    hu[k0 as usize] = Complex::new(T::zero(), -T::one());
    hv[k0 as usize] = hu[k0 as usize] * (-phi * T::half());
    let initial = SpectralState::new(
        T::one(),
        ModeVector::from_half(k_max, &hu)?,
        ModeVector::from_half(k_max, &hv)?,
    )?;

    let u0_h1_sq = initial.u().h1_norm_sq(T::one());
    let v0_l2_sq = initial.v().l2_norm_sq();
    let data_size = u0_h1_sq + v0_l2_sq;

    // t_n = 2 pi n / sqrt((4 pi k0)^2 - phi^2); the oscillatory factor is
    // cos^2(pi n) = 1 at every t_n.
    let four_pi_k = T::from_f64(4.0) * T::PI() * T::from_f64(k0 as f64);
    let omega0 = (four_pi_k * four_pi_k - phi * phi).sqrt();
    let t_of = |n: u64| two_pi * T::from_f64(n as f64) / omega0;

    // Smallest n with (1/4) e^{gamma t_n / 2} > M.
    let quarter = T::from_f64(0.25);
    let mut n0 = ((omega0 * (T::from_f64(4.0) * m).ln() / (T::PI() * gamma))
        .floor()
        .to_f64() as u64)
        .saturating_sub(1);
    while quarter * (half_gamma * t_of(n0)).exp() <= m {
        n0 += 1;
    }

    let mut margins = Vec::with_capacity(n_samples);
    for n in n0..n0 + n_samples as u64 {
        let t = t_of(n);
        let st = crate::propagator::propagate_state(&initial, filter, t)?;
        let lhs = st.u().h1_norm_sq(T::one());
        let rhs = m * (-gamma * t).exp() * data_size;
        margins.push(MarginSample {
            n,
            t,
            lhs,
            rhs,
            margin: lhs - rhs,
        });
    }
    if let Some(bad) = margins
        .iter()
        .find(|s| s.margin.is_nan() || s.margin <= T::zero())
    {
        return Err(Error::InvalidInput(format!(
            "certificate construction failed: margin {} at n = {}",
            bad.margin.to_f64(),
            bad.n
        )));
    }

    Ok(CounterexampleCertificate {
        k0,
        gamma,
        m,
        phi_k0: phi,
        n0,
        initial,
        margins,
    })
}

/// Exact squared-`H1` envelope of the certificate's solution:
/// `||u(t)||^2_{H1} = 2 (1 + (2 pi k0)^2) e^{-t phi} cos^2(t/2 sqrt((4 pi k0)^2 - phi^2))`.
pub fn certificate_envelope<T: Scalar>(cert: &CounterexampleCertificate<T>, t: T) -> T {
    let two_pi_k = T::two() * T::PI() * T::from_f64(cert.k0 as f64);
    let four_pi_k = T::from_f64(4.0) * T::PI() * T::from_f64(cert.k0 as f64);
    let amp = T::two() * (T::one() + two_pi_k * two_pi_k);
    let osc = ((four_pi_k * four_pi_k - cert.phi_k0 * cert.phi_k0).sqrt() * t * T::half()).cos();
    amp * (-t * cert.phi_k0).exp() * osc * osc
}

/// Re-evaluation of a certificate's margins.
#[derive(Debug, Clone, PartialEq)]
pub struct NoDecayReport<T> {
    /// True when every recomputed margin is strictly positive.
    pub passed: bool,
    pub margins: Vec<MarginSample<T>>,
    /// `|analytic - RK4|` for the witness mode at the first witness time.
    pub rk4_spot_error: T,
}

/// Independently re-evaluates every margin with the closed-form propagator
/// and spot-checks the first witness time against the RK4 integrator.
pub fn verify_no_uniform_decay<T: Scalar>(
    cert: &CounterexampleCertificate<T>,
) -> Result<NoDecayReport<T>> {
    let u0 = cert.initial.u().get(cert.k0);
    let v0 = cert.initial.v().get(cert.k0);
    let data_size = cert.initial.u().h1_norm_sq(T::one()) + cert.initial.v().l2_norm_sq();
    let two_pi_k = T::two() * T::PI() * T::from_f64(cert.k0 as f64);
    let weight = T::one() + two_pi_k * two_pi_k;

    let mut margins = Vec::with_capacity(cert.margins.len());
    for s in &cert.margins {
        let (u, _) = propagate_mode(u0, v0, cert.k0, cert.phi_k0, T::one(), s.t);
        // Both +-k0 modes carry the same magnitude.
        let lhs = T::two() * weight * u.norm_sqr();
        let rhs = cert.m * (-cert.gamma * s.t).exp() * data_size;
        margins.push(MarginSample {
            n: s.n,
            t: s.t,
            lhs,
            rhs,
            margin: lhs - rhs,
        });
    }

    let first = &cert.margins[0];
    let dt = T::from_f64(2e-5);
    let (u_rk, _) = rk4_mode(u0, v0, cert.k0, cert.phi_k0, T::one(), first.t, dt)?;
    let (u_an, _) = propagate_mode(u0, v0, cert.k0, cert.phi_k0, T::one(), first.t);
    let rk4_spot_error = (u_rk - u_an).norm();

    Ok(NoDecayReport {
        passed: margins.iter().all(|s| s.margin > T::zero()),
        margins,
        rk4_spot_error,
    })
}
