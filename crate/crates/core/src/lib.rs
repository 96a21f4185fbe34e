//! Spectral solver for the 1D wave equation with frequency-filtered damping
//! on a periodic domain `(0, L)`.
//!
//! The damping operator is a Fourier multiplier with nonnegative symmetric
//! symbol `phi_k`, so each mode evolves by an independent second-order ODE
//! with an exact closed-form solution. On top of the per-mode propagator the
//! crate provides:
//!
//! - grid/coefficient transforms and Sobolev norms ([`state`]);
//! - mode classification, characteristic roots and exact propagation
//!   ([`propagator`]);
//! - an independent fixed-step RK4 oracle for cross-validation ([`oracle`]);
//! - energy, dissipation and balance-residual ledgers, the perturbed energy,
//!   and the elliptic resolvent solve ([`mod@energy`]);
//! - the dissipative/conservative splitting for indicator filters
//!   ([`splitting`]);
//! - exponential-rate fitting and the constructive refutation of uniform
//!   exponential decay for vanishing-tail symbols ([`decay`]);
//! - reproducible demonstration scenarios ([`scenario`]) and external
//!   CSV/JSON formats ([`io`], [`config`]).
//!
//! Kernels are generic over the floating-point type through [`Scalar`];
//! `f64` aliases are exported at the crate root.

pub mod config;
pub mod decay;
pub mod energy;
pub mod error;
pub mod filter;
pub mod io;
pub mod oracle;
pub mod propagator;
pub mod rng;
pub mod scalar;
pub mod scenario;
pub mod splitting;
pub mod state;

pub use decay::{
    build_counterexample, fit_decay, verify_no_uniform_decay, CounterexampleCertificate, DecayFit,
    MarginSample, NoDecayReport,
};
pub use energy::{
    apply_elliptic_operator, dissipation_rate, energy, perturbed_energy, resolvent_solve,
    trajectory_ledger, Energy, EnergyRecord,
};
pub use error::{Error, Result};
pub use filter::FilterSpectrum;
pub use oracle::{cross_validate, rk4_mode, OracleReport};
pub use propagator::{
    characteristic_roots, classify, propagate_mode, propagate_state, CharacteristicRoots,
    DampingCase, DampingRegime,
};
pub use scalar::Scalar;
pub use splitting::{
    project, projected_decay_bound, verify_split, Component, ProjectedDecay, ProjectionFilter,
    SplitReport,
};
pub use state::{analyze, synthesize, GridField, ModeVector, SpectralState};

/// Working-precision aliases.
pub type SpectralState64 = SpectralState<f64>;
pub type ModeVector64 = ModeVector<f64>;
pub type GridField64 = GridField<f64>;
pub type FilterSpectrum64 = FilterSpectrum<f64>;
pub type ProjectionFilter64 = ProjectionFilter<f64>;

/// Single-precision aliases (same kernels, looser accuracy).
pub type SpectralState32 = SpectralState<f32>;
pub type ModeVector32 = ModeVector<f32>;
pub type GridField32 = GridField<f32>;
pub type FilterSpectrum32 = FilterSpectrum<f32>;
pub type ProjectionFilter32 = ProjectionFilter<f32>;
