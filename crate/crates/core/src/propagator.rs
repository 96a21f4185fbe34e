//! Exact closed-form time evolution of each Fourier mode.
//!
//! Mode `k` of the filtered-damping wave equation solves
//! `u'' + (2 pi k / L)^2 u + phi_k u' = 0`. With `delta = phi_k^2 - (4 pi k / L)^2`
//! the characteristic roots are `lambda_+- = (-phi_k +- sqrt(delta)) / 2` and the
//! solution is hyperbolic (`delta > 0`), oscillatory (`delta < 0`) or
//! degenerate (`delta = 0`). All three cases are evaluated through a common
//! pair of real kernels `(C(t), S(t))` with
//!
//! `u(t) = C(t) u(0) + S(t) (phi_k/2 u(0) + v(0))`,
//!
//! and the velocity is the exact time derivative, using
//! `C' = -a C + (delta/4) S` and `S' = C - a S` where `a = phi_k / 2`.
//!
//! The hyperbolic branch is computed from the two exponentials
//! `e^{t lambda_+-}` (both exponents nonpositive) rather than
//! `e^{-a t} cosh(...)`, which would overflow for large `t sqrt(delta)`
//! even though the product stays bounded.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::filter::FilterSpectrum;
use crate::scalar::Scalar;
use crate::state::{ModeVector, SpectralState};

/// Relative scale of the dead band around `delta = 0` inside which the
/// degenerate formula is used: `|delta| <= 1e-12 * max(phi^2, (4 pi k / L)^2)`.
pub const CRITICAL_REL_TOL: f64 = 1e-12;

/// The three qualitative regimes of a damped mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DampingRegime {
    Overdamped,
    Underdamped,
    Critical,
}

/// Classification of one mode, with the discriminant that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DampingCase<T> {
    pub regime: DampingRegime,
    pub delta: T,
}

/// `4 pi k / L` (twice the mode's natural frequency).
fn four_pi_k_over_l<T: Scalar>(k: i64, l: T) -> T {
    T::from_f64(4.0) * T::PI() * T::from_f64(k.unsigned_abs() as f64) / l
}

/// Discriminant `delta_k = phi_k^2 - (4 pi k / L)^2`.
pub fn discriminant<T: Scalar>(k: i64, phi: T, l: T) -> T {
    let w = four_pi_k_over_l(k, l);
    phi * phi - w * w
}

/// Absolute dead-band width for the critical case at these parameters.
pub fn critical_tolerance<T: Scalar>(k: i64, phi: T, l: T) -> T {
    let w = four_pi_k_over_l(k, l);
    T::from_f64(CRITICAL_REL_TOL) * (phi * phi).max(w * w)
}

/// Classifies mode `k` under damping coefficient `phi` on the domain `(0, L)`.
pub fn classify<T: Scalar>(k: i64, phi: T, l: T) -> DampingCase<T> {
    let delta = discriminant(k, phi, l);
    let eps = critical_tolerance(k, phi, l);
    let regime = if delta > eps {
        DampingRegime::Overdamped
    } else if delta < -eps {
        DampingRegime::Underdamped
    } else {
        DampingRegime::Critical
    };
    DampingCase { regime, delta }
}

/// Roots of `lambda^2 + phi lambda + (2 pi k / L)^2 = 0`, principal square
/// root convention. Both roots have nonpositive real part.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharacteristicRoots<T> {
    pub lambda_plus: Complex<T>,
    pub lambda_minus: Complex<T>,
}

pub fn characteristic_roots<T: Scalar>(k: i64, phi: T, l: T) -> CharacteristicRoots<T> {
    let delta = discriminant(k, phi, l);
    let half = T::half();
    if delta >= T::zero() {
        // sqrt(phi^2 - w^2) <= phi mathematically; clamp the rounding spill
        // so Re(lambda_plus) <= 0 holds exactly.
        let s = delta.sqrt().min(phi);
        CharacteristicRoots {
            lambda_plus: Complex::new((-phi + s) * half, T::zero()),
            lambda_minus: Complex::new((-phi - s) * half, T::zero()),
        }
    } else {
        let s = (-delta).sqrt();
        CharacteristicRoots {
            lambda_plus: Complex::new(-phi * half, s * half),
            lambda_minus: Complex::new(-phi * half, -s * half),
        }
    }
}

/// Real solution kernels for one mode at time `t`:
/// `(C, S, C', S')` with `u = C u0 + S (a u0 + v0)` and `v = C' u0 + S' (a u0 + v0)`.
fn kernels<T: Scalar>(k: i64, phi: T, l: T, t: T) -> (T, T, T, T) {
    let a = phi * T::half();
    let case = classify(k, phi, l);
    match case.regime {
        DampingRegime::Critical => {
            let e = (-a * t).exp();
            let cv = e;
            let sv = t * e;
            (cv, sv, -a * cv, cv - a * sv)
        }
        DampingRegime::Underdamped => {
            let mu = (-case.delta).sqrt() * T::half();
            let e = (-a * t).exp();
            let (s, c) = (mu * t).sin_cos();
            let cv = e * c;
            let sv = e * s / mu;
            (cv, sv, -a * cv - mu * mu * sv, cv - a * sv)
        }
        DampingRegime::Overdamped => {
            let nu = case.delta.sqrt() * T::half();
            // lambda_+ <= 0 mathematically; clamp rounding spill.
            let lp = (nu - a).min(T::zero());
            let lm = -a - nu;
            let ep = (lp * t).exp();
            let em = (lm * t).exp();
            let half = T::half();
            let cv = (ep + em) * half;
            let sv = (ep - em) * half / nu;
            (cv, sv, -a * cv + nu * nu * sv, cv - a * sv)
        }
    }
}

/// Evolves one mode by time `t >= 0`. At `t = 0` the inputs are returned
/// unchanged.
pub fn propagate_mode<T: Scalar>(
    u0: Complex<T>,
    v0: Complex<T>,
    k: i64,
    phi: T,
    l: T,
    t: T,
) -> (Complex<T>, Complex<T>) {
    debug_assert!(t >= T::zero() && t.is_finite());
    if t == T::zero() {
        return (u0, v0);
    }
    let a = phi * T::half();
    let c = u0 * a + v0;
    let (cv, sv, cdot, sdot) = kernels(k, phi, l, t);
    (u0 * cv + c * sv, u0 * cdot + c * sdot)
}

/// Evolves every mode of a state by time `t >= 0` under the given filter.
pub fn propagate_state<T: Scalar>(
    state: &SpectralState<T>,
    filter: &FilterSpectrum<T>,
    t: T,
) -> Result<SpectralState<T>> {
    if state.k_max() != filter.k_max() {
        return Err(Error::DimensionMismatch(format!(
            "state K_max = {} but filter K_max = {}",
            state.k_max(),
            filter.k_max()
        )));
    }
    if !(t.is_finite() && t >= T::zero()) {
        return Err(Error::InvalidInput("time must be finite and >= 0".into()));
    }
    let k_max = state.k_max();
    let mut u = Vec::with_capacity(2 * k_max + 1);
    let mut v = Vec::with_capacity(2 * k_max + 1);
    for k in -(k_max as i64)..=(k_max as i64) {
        let (uk, vk) = propagate_mode(
            state.u().get(k),
            state.v().get(k),
            k,
            filter.phi(k),
            state.l(),
            t,
        );
        u.push(uk);
        v.push(vk);
    }
    // Per-mode evolution multiplies by real kernels that are even in k, so
    // the reality condition is preserved exactly.
    Ok(SpectralState::from_raw(
        state.l(),
        ModeVector::from_raw(k_max, u),
        ModeVector::from_raw(k_max, v),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::energy::energy;
    use crate::oracle::rk4_mode;
    use crate::state::ModeVector;
    use std::f64::consts::PI;

    type C = Complex<f64>;

    #[test]
    fn classify_matches_sign_conditions() {
        // phi = 4 pi at k = 1, L = 1 sits exactly on the degenerate boundary.
        let c = classify(1, 4.0 * PI, 1.0);
        assert_eq!(c.regime, DampingRegime::Critical);
        assert!(c.delta.abs() <= critical_tolerance(1, 4.0 * PI, 1.0));

        // phi = 1 at k = 1: 1 - 16 pi^2 < 0.
        assert_eq!(classify(1, 1.0, 1.0).regime, DampingRegime::Underdamped);

        // Zero mode with phi = 2 has no restoring term: delta = 4 > 0.
        let c0 = classify(0, 2.0, 1.0);
        assert_eq!(c0.regime, DampingRegime::Overdamped);
        assert_eq!(c0.delta, 4.0);

        // Free zero mode: delta = 0 exactly.
        assert_eq!(classify(0, 0.0, 1.0).regime, DampingRegime::Critical);
    }

    #[test]
    fn roots_at_degenerate_point_coincide() {
        let r = characteristic_roots(1, 4.0 * PI, 1.0);
        let expect = C::new(-2.0 * PI, 0.0);
        assert!((r.lambda_plus - expect).norm() < 1e-12);
        assert!((r.lambda_minus - expect).norm() < 1e-12);
    }

    #[test]
    fn roots_of_undamped_mode_are_imaginary() {
        let r = characteristic_roots(1, 0.0, 1.0);
        assert!((r.lambda_plus - C::new(0.0, 2.0 * PI)).norm() < 1e-12);
        assert!((r.lambda_minus - C::new(0.0, -2.0 * PI)).norm() < 1e-12);
    }

    /// Independent quadratic solver (complex arithmetic throughout) used as
    /// the oracle for the root formulas.
    fn quadratic_oracle(phi: f64, omega_sq: f64) -> (C, C) {
        let disc = C::new(phi * phi - 4.0 * omega_sq, 0.0).sqrt();
        (
            (C::new(-phi, 0.0) + disc) / 2.0,
            (C::new(-phi, 0.0) - disc) / 2.0,
        )
    }

    #[test]
    fn roots_match_quadratic_oracle_and_residual_vanishes() {
        for &(k, phi, l) in &[
            (2i64, 100.0, 1.0),
            (1, 1.0, 1.0),
            (3, 4.0 * PI, 2.0),
            (0, 0.7, 1.0),
            (7, 0.0, 3.0),
        ] {
            let omega = 2.0 * PI * k.abs() as f64 / l;
            let (op, om) = quadratic_oracle(phi, omega * omega);
            let r = characteristic_roots(k, phi, l);
            let scale = (phi * phi).max(omega * omega).max(1.0);
            assert!((r.lambda_plus - op).norm() <= 1e-12 * scale.sqrt());
            assert!((r.lambda_minus - om).norm() <= 1e-12 * scale.sqrt());
            for lam in [r.lambda_plus, r.lambda_minus] {
                let residual = lam * lam + lam * phi + C::new(omega * omega, 0.0);
                assert!(
                    residual.norm() <= 1e-12 * scale,
                    "residual {residual} at k={k}"
                );
                assert!(lam.re <= 0.0);
            }
        }
    }

    #[test]
    fn critical_mode_from_rest_velocity() {
        // k = 1, phi = 4 pi, u0 = 0, v0 = 1: u(t) = t e^{-2 pi t}.
        let phi = 4.0 * PI;
        for &t in &[0.1, 0.5, 1.0, 2.0, 5.0] {
            let (u, _) = propagate_mode(C::new(0.0, 0.0), C::new(1.0, 0.0), 1, phi, 1.0, t);
            let expect = t * (-2.0 * PI * t).exp();
            assert!((u.re - expect).abs() <= 1e-12 * expect.max(1e-30));
            assert_eq!(u.im, 0.0);
        }
        // RK4 confirmation at t = 1.
        let (u_rk, _) =
            rk4_mode(C::new(0.0, 0.0), C::new(1.0, 0.0), 1, phi, 1.0, 1.0, 1e-5).unwrap();
        let (u_an, _) = propagate_mode(C::new(0.0, 0.0), C::new(1.0, 0.0), 1, phi, 1.0, 1.0);
        assert!((u_rk - u_an).norm() < 1e-9);
    }

    #[test]
    fn undamped_mode_is_a_cosine() {
        for &t in &[0.3, 1.0, 2.7] {
            let (u, v) = propagate_mode(C::new(1.0, 0.0), C::new(0.0, 0.0), 1, 0.0, 1.0, t);
            let w = 2.0 * PI;
            assert!((u.re - (w * t).cos()).abs() < 1e-13);
            assert!((v.re + w * (w * t).sin()).abs() < 1e-12);
            assert_eq!(u.im, 0.0);
            assert_eq!(v.im, 0.0);
        }
    }

    #[test]
    fn complex_data_matches_rk4() {
        let u0 = C::new(1.0, 0.5);
        let v0 = C::new(0.0, -0.2);
        let (ua, va) = propagate_mode(u0, v0, 3, 1.0, 1.0, 2.0);
        let (un, vn) = rk4_mode(u0, v0, 3, 1.0, 1.0, 2.0, 1e-5).unwrap();
        assert!((ua - un).norm() <= 1e-9, "u diff {}", (ua - un).norm());
        assert!((va - vn).norm() <= 1e-9, "v diff {}", (va - vn).norm());
    }

    #[test]
    fn velocity_is_derivative_of_displacement() {
        // Central finite difference of u with h = 1e-6 recovers v to 1e-6
        // relative in every regime.
        let u0 = C::new(0.8, -0.3);
        let v0 = C::new(-0.25, 0.6);
        let h = 1e-6;
        let cases = [
            (1i64, 1.0, 1.0, 0.7),   // underdamped
            (1, 4.0 * PI, 1.0, 0.7), // critical
            (1, 20.0, 1.0, 0.7),     // overdamped
            (0, 2.0, 1.0, 0.7),      // overdamped zero mode
            (0, 0.0, 1.0, 0.7),      // free zero mode
            (2, 0.5, 2.0, 1.3),      // underdamped, L != 1
        ];
        for &(k, phi, l, t) in &cases {
            let (_, v) = propagate_mode(u0, v0, k, phi, l, t);
            let (up, _) = propagate_mode(u0, v0, k, phi, l, t + h);
            let (um, _) = propagate_mode(u0, v0, k, phi, l, t - h);
            let fd = (up - um) / (2.0 * h);
            let scale = v.norm().max(1e-3);
            assert!(
                (v - fd).norm() <= 1e-6 * scale,
                "velocity mismatch at k={k}, phi={phi}: {} vs {}",
                v,
                fd
            );
        }
    }

    #[test]
    fn overdamped_tail_stays_finite_at_huge_times() {
        // e^{-a t} cosh(nu t) would overflow here; the two-exponential form
        // must give a finite (tiny) answer.
        let (u, v) = propagate_mode(C::new(1.0, 0.0), C::new(1.0, 0.0), 2, 1000.0, 1.0, 1e4);
        assert!(u.re.is_finite() && v.re.is_finite());
        assert!(u.norm() < 1e-300 || u.norm() == 0.0);
    }

    #[test]
    fn time_zero_is_identity_bitwise() {
        let u0 = C::new(0.1234567890123, -0.9876);
        let v0 = C::new(-3.25, 1e-7);
        let (u, v) = propagate_mode(u0, v0, 5, 2.5, 1.0, 0.0);
        assert_eq!(u, u0);
        assert_eq!(v, v0);
    }

    #[test]
    fn case_boundary_formulas_agree() {
        // delta = +-1e-8 around the degenerate point at k = 1, L = 1.
        let w2 = (4.0 * PI) * (4.0 * PI);
        let u0 = C::new(1.0, 0.0);
        let v0 = C::new(1.0, 0.0);
        for &dd in &[1e-8, -1e-8] {
            let phi = (w2 + dd).sqrt();
            for &t in &[1.0, 5.0, 10.0] {
                let (u_near, _) = propagate_mode(u0, v0, 1, phi, 1.0, t);
                let (u_crit, _) = propagate_mode(u0, v0, 1, 4.0 * PI, 1.0, t);
                assert!(
                    (u_near - u_crit).norm() <= 1e-6,
                    "case boundary jump {} at delta = {dd}, t = {t}",
                    (u_near - u_crit).norm()
                );
            }
        }
    }

    fn random_hermitian_state(k_max: usize, seed: u64) -> SpectralState<f64> {
        let mut s = crate::rng::SplitMix64::new(seed);
        let mut hu = Vec::new();
        let mut hv = Vec::new();
        for k in 0..=k_max {
            let mag = 1.0 / (1.0 + k as f64);
            if k == 0 {
                hu.push(C::new(mag * (2.0 * s.next_unit() - 1.0), 0.0));
                hv.push(C::new(mag * (2.0 * s.next_unit() - 1.0), 0.0));
            } else {
                let a = 2.0 * PI * s.next_unit();
                let b = 2.0 * PI * s.next_unit();
                hu.push(C::new(mag * a.cos(), mag * a.sin()));
                hv.push(C::new(mag * b.cos(), mag * b.sin()));
            }
        }
        SpectralState::new(
            1.0,
            ModeVector::from_half(k_max, &hu).unwrap(),
            ModeVector::from_half(k_max, &hv).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn propagate_state_at_zero_is_identity() {
        let state = random_hermitian_state(6, 11);
        let filter = FilterSpectrum::indicator_above(6, 2);
        let out = propagate_state(&state, &filter, 0.0).unwrap();
        assert_eq!(out.u().coeffs(), state.u().coeffs());
        assert_eq!(out.v().coeffs(), state.v().coeffs());
    }

    #[test]
    fn undamped_evolution_conserves_energy() {
        let state = random_hermitian_state(8, 5);
        let filter = FilterSpectrum::zero(8);
        let e0 = energy(&state).total();
        for &t in &[0.5, 3.0, 17.0, 60.0] {
            let st = propagate_state(&state, &filter, t).unwrap();
            let e = energy(&st).total();
            assert!(
                (e - e0).abs() <= 1e-10 * e0,
                "energy drift {} at t = {t}",
                (e - e0).abs() / e0
            );
        }
    }

    #[test]
    fn hermitian_symmetry_survives_propagation_exactly() {
        let state = random_hermitian_state(10, 42);
        let filter = FilterSpectrum::power_tail(10, 1.0).unwrap();
        let out = propagate_state(&state, &filter, 3.7).unwrap();
        for k in 0..=10i64 {
            assert_eq!(out.u().get(-k), out.u().get(k).conj());
            assert_eq!(out.v().get(-k), out.v().get(k).conj());
        }
    }

    #[test]
    fn semigroup_composition_matches_direct() {
        let state = random_hermitian_state(8, 97);
        let filter = FilterSpectrum::indicator_above(8, 3);
        for &(t1, t2) in &[(0.5, 0.25), (1.0, 2.0), (3.3, 0.0), (0.0, 4.1)] {
            let direct = propagate_state(&state, &filter, t1 + t2).unwrap();
            let mid = propagate_state(&state, &filter, t1).unwrap();
            let composed = propagate_state(&mid, &filter, t2).unwrap();
            let scale = direct.sup_abs().max(1e-30);
            for k in -8..=8i64 {
                let du = (direct.u().get(k) - composed.u().get(k)).norm();
                let dv = (direct.v().get(k) - composed.v().get(k)).norm();
                assert!(du <= 1e-10 * scale && dv <= 1e-10 * scale);
            }
        }
    }

    #[test]
    fn kernels_run_in_single_precision() {
        let u0 = Complex::new(1.0f32, 0.0);
        let v0 = Complex::new(0.0f32, 0.0);
        let (u, v) = propagate_mode(u0, v0, 1, 0.0f32, 1.0, 0.25);
        assert!((u.re - (std::f32::consts::PI / 2.0).cos()).abs() < 1e-5);
        assert!((v.re + 2.0 * std::f32::consts::PI).abs() < 1e-4);
        let case = classify(1i64, 4.0f32 * std::f32::consts::PI, 1.0f32);
        assert_eq!(case.regime, DampingRegime::Critical);
    }

    #[test]
    fn high_frequency_content_decays_like_half_rate() {
        // Damping on |k| >= 3 with phi = 1: every damped mode is underdamped
        // and carries the envelope e^{-t/2}. With v0 = 0 the projected H1
        // norm stays below 1.03 e^{-t/2} times its initial value.
        let state = crate::scenario::figure1_initial_state::<f64>();
        let pf = crate::scenario::figure1_filter::<f64>();
        let p0 = crate::splitting::project(&state, &pf, crate::splitting::Component::Dissipative);
        let h0 = p0.u().h1_norm_sq(1.0).sqrt();
        for &t in &[0.0, 1.0, 2.0, 4.0] {
            let st = propagate_state(&state, pf.as_filter(), t).unwrap();
            let p = crate::splitting::project(&st, &pf, crate::splitting::Component::Dissipative);
            let h = p.u().h1_norm_sq(1.0).sqrt();
            assert!(
                h <= 1.03 * h0 * (-t / 2.0).exp(),
                "projected H1 norm {h} above envelope at t = {t}"
            );
        }
    }
}
