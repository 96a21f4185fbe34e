//! Damping multiplier sequences (the symbol of the frequency filter).
//!
//! The damping operator acts diagonally on Fourier modes: mode `k` is damped
//! with coefficient `phi_k >= 0`. Symmetry `phi_{-k} = phi_k` is required so
//! that real fields stay real; it is guaranteed structurally by storing only
//! the half-spectrum `k = 0 ..= K_max`.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Nonnegative, symmetric, bounded damping multipliers `phi_k`, `|k| <= K_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterSpectrum<T> {
    values: Vec<T>, // phi_k for k = 0 ..= K_max
}

impl<T: Scalar> FilterSpectrum<T> {
    /// Builds a filter from the half-spectrum `values[k] = phi_k`, `k = 0 ..= K_max`.
    pub fn from_symmetric_values(values: Vec<T>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidInput(
                "filter needs at least the zero mode".into(),
            ));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("non-finite filter value".into()));
        }
        if values.iter().any(|&v| v < T::zero()) {
            return Err(Error::InvalidInput(
                "filter values must be nonnegative".into(),
            ));
        }
        Ok(Self { values })
    }

    /// Constant symbol `phi_k = value` for all modes.
    pub fn constant(k_max: usize, value: T) -> Result<Self> {
        Self::from_symmetric_values(vec![value; k_max + 1])
    }

    /// Zero symbol (undamped evolution).
    pub fn zero(k_max: usize) -> Self {
        Self {
            values: vec![T::zero(); k_max + 1],
        }
    }

    /// Indicator of the high-frequency band: `phi_k = 1` for `|k| >= k0`,
    /// `phi_k = 0` for `|k| < k0`.
    pub fn indicator_above(k_max: usize, k0: usize) -> Self {
        let values = (0..=k_max)
            .map(|k| if k >= k0 { T::one() } else { T::zero() })
            .collect();
        Self { values }
    }

    /// Power-law tail `phi_k = (1 + |k|)^(-exponent)`; with `exponent = 1`
    /// this is `1 / (1 + |k|)`.
    pub fn power_tail(k_max: usize, exponent: T) -> Result<Self> {
        if !exponent.is_finite() {
            return Err(Error::InvalidInput(
                "power-tail exponent must be finite".into(),
            ));
        }
        let values = (0..=k_max)
            .map(|k| (T::one() + T::from_usize(k)).powf(-exponent))
            .collect();
        Self::from_symmetric_values(values)
    }

    /// Builds from a function of the mode index.
    pub fn from_fn(k_max: usize, f: impl Fn(usize) -> T) -> Result<Self> {
        Self::from_symmetric_values((0..=k_max).map(f).collect())
    }

    pub fn k_max(&self) -> usize {
        self.values.len() - 1
    }

    /// Multiplier at mode `k`. Panics if `|k| > K_max`.
    pub fn phi(&self, k: i64) -> T {
        self.values[k.unsigned_abs() as usize]
    }

    /// Half-spectrum values `k = 0 ..= K_max`.
    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// `sup_k phi_k`.
    pub fn sup(&self) -> T {
        self.values.iter().copied().fold(T::zero(), T::max)
    }

    /// True when every value is exactly 0 or 1 (the symbol of an orthogonal
    /// projection).
    pub fn is_idempotent(&self) -> bool {
        self.values.iter().all(|&v| v == T::zero() || v == T::one())
    }
}
