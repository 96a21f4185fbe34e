//! Run configuration: JSON schema and builders.
//!
//! A configuration pins the domain, truncation order, damping filter and
//! initial data:
//!
//! ```json
//! {
//!   "L": 1.0,
//!   "K_max": 20,
//!   "filter": {"kind": "indicator", "k0": 3},
//!   "initial": {"kind": "random", "seed": 20, "decay": 1.0}
//! }
//! ```
//!
//! Filter kinds: `indicator` (1 on `|k| >= k0`), `table` (explicit values
//! for `k = 0 ..= K_max`, applied symmetrically), `powertail`
//! (`(1 + |k|)^-exponent`). Initial kinds: `modes` (explicit coefficients
//! for `k >= 0`; negative modes are filled by conjugation) and `random`
//! (magnitudes `(1 + k)^-decay`, random phases, zero velocity, seeded).

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::filter::FilterSpectrum;
use crate::scenario::random_band_limited_state;
use crate::state::{ModeVector, SpectralState};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimConfig {
    #[serde(rename = "L")]
    pub l: f64,
    #[serde(rename = "K_max")]
    pub k_max: usize,
    pub filter: FilterConfig,
    pub initial: InitialConfig,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FilterConfig {
    /// `phi_k = 1` for `|k| >= k0`, else 0.
    Indicator { k0: usize },
    /// Explicit half-spectrum `values[k] = phi_k`, `k = 0 ..= K_max`.
    Table { values: Vec<f64> },
    /// `phi_k = (1 + |k|)^-exponent`.
    Powertail { exponent: f64 },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum InitialConfig {
    /// Explicit coefficients for `k >= 0`; negative modes by conjugation.
    Modes { coeffs: Vec<ModeCoeff> },
    /// Seeded random datum with magnitudes `(1 + k)^-decay`, zero velocity.
    Random { seed: u64, decay: f64 },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModeCoeff {
    pub k: i64,
    /// Displacement coefficient `[re, im]`.
    pub u: [f64; 2],
    /// Velocity coefficient `[re, im]`.
    #[serde(default)]
    pub v: [f64; 2],
}

impl SimConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: SimConfig =
            serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.l.is_finite() && self.l > 0.0) {
            return Err(Error::Config("L must be positive".into()));
        }
        if let FilterConfig::Table { values } = &self.filter {
            if values.len() != self.k_max + 1 {
                return Err(Error::Config(format!(
                    "filter table must list {} values (k = 0 ..= K_max), got {}",
                    self.k_max + 1,
                    values.len()
                )));
            }
        }
        if let InitialConfig::Modes { coeffs } = &self.initial {
            let mut seen = vec![false; self.k_max + 1];
            for c in coeffs {
                if c.k < 0 || c.k as usize > self.k_max {
                    return Err(Error::Config(format!(
                        "mode index {} outside 0 ..= {}",
                        c.k, self.k_max
                    )));
                }
                if seen[c.k as usize] {
                    return Err(Error::Config(format!("duplicate mode index {}", c.k)));
                }
                seen[c.k as usize] = true;
                if c.k == 0 && (c.u[1] != 0.0 || c.v[1] != 0.0) {
                    return Err(Error::Config("zero-mode coefficients must be real".into()));
                }
                if c.u.iter().chain(c.v.iter()).any(|x| !x.is_finite()) {
                    return Err(Error::Config("non-finite coefficient".into()));
                }
            }
        }
        Ok(())
    }

    pub fn build_filter(&self) -> Result<FilterSpectrum<f64>> {
        match &self.filter {
            FilterConfig::Indicator { k0 } => Ok(FilterSpectrum::indicator_above(self.k_max, *k0)),
            FilterConfig::Table { values } => {
                if values.len() != self.k_max + 1 {
                    return Err(Error::Config(format!(
                        "filter table must list {} values, got {}",
                        self.k_max + 1,
                        values.len()
                    )));
                }
                FilterSpectrum::from_symmetric_values(values.clone())
                    .map_err(|e| Error::Config(e.to_string()))
            }
            FilterConfig::Powertail { exponent } => {
                FilterSpectrum::power_tail(self.k_max, *exponent)
                    .map_err(|e| Error::Config(e.to_string()))
            }
        }
    }

    pub fn build_state(&self) -> Result<SpectralState<f64>> {
        match &self.initial {
            InitialConfig::Random { seed, decay } => {
                if !decay.is_finite() {
                    return Err(Error::Config("decay must be finite".into()));
                }
                Ok(random_band_limited_state(self.l, self.k_max, *seed, *decay))
            }
            InitialConfig::Modes { coeffs } => {
                let zero = Complex::new(0.0, 0.0);
                let mut hu = vec![zero; self.k_max + 1];
                let mut hv = vec![zero; self.k_max + 1];
                for c in coeffs {
                    hu[c.k as usize] = Complex::new(c.u[0], c.u[1]);
                    hv[c.k as usize] = Complex::new(c.v[0], c.v[1]);
                }
                let u = ModeVector::from_half(self.k_max, &hu)
                    .map_err(|e| Error::Config(e.to_string()))?;
                let v = ModeVector::from_half(self.k_max, &hv)
                    .map_err(|e| Error::Config(e.to_string()))?;
                SpectralState::new(self.l, u, v).map_err(|e| Error::Config(e.to_string()))
            }
        }
    }
}

/// Parses a time list: either comma-separated values (`0,1,2.5`) or an
/// inclusive range `start:step:end`. Times must be strictly increasing.
pub fn parse_times(text: &str) -> Result<Vec<f64>> {
    let parse_one = |s: &str| -> Result<f64> {
        s.trim()
            .parse::<f64>()
            .map_err(|_| Error::Config(format!("bad time value '{s}'")))
    };
    let times: Vec<f64> = if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::Config(format!(
                "range must be start:step:end, got '{text}'"
            )));
        }
        let start = parse_one(parts[0])?;
        let step = parse_one(parts[1])?;
        let end = parse_one(parts[2])?;
        if !(step > 0.0 && start <= end) {
            return Err(Error::Config(
                "range needs step > 0 and start <= end".into(),
            ));
        }
        let n = ((end - start) / step + 1e-9).floor() as usize;
        (0..=n).map(|i| start + i as f64 * step).collect()
    } else {
        text.split(',')
            .map(parse_one)
            .collect::<Result<Vec<f64>>>()?
    };
    if times.is_empty() {
        return Err(Error::Config("empty time list".into()));
    }
    if times.iter().any(|t| !t.is_finite() || *t < 0.0) {
        return Err(Error::Config("times must be finite and >= 0".into()));
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Config("times must be strictly increasing".into()));
    }
    Ok(times)
}

/// Parses a fit window `t_lo,t_hi`.
pub fn parse_window(text: &str) -> Result<(f64, f64)> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 2 {
        return Err(Error::Config(format!(
            "window must be t_lo,t_hi, got '{text}'"
        )));
    }
    let lo = parts[0]
        .trim()
        .parse::<f64>()
        .map_err(|_| Error::Config(format!("bad window bound '{}'", parts[0])))?;
    let hi = parts[1]
        .trim()
        .parse::<f64>()
        .map_err(|_| Error::Config(format!("bad window bound '{}'", parts[1])))?;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::Config("window needs t_lo < t_hi".into()));
    }
    Ok((lo, hi))
}
