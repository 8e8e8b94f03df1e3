//! Frequency-response solvers for a spinning whispering-gallery optomechanical
//! resonator containing a degenerate optical parametric amplifier (OPA).
//!
//! The crate computes the classical steady state, first- and second-order
//! probe sidebands, and the derived observables (sideband efficiencies,
//! group delay, transparency-window width) for three regimes:
//!
//! * sum-frequency OPA pump (the pump beats against the control at the
//!   probe-control detuning),
//! * static OPA pump at twice the control frequency,
//! * a structured (Lorentzian) bath with finite spectral width instead of the
//!   flat Markovian one.
//!
//! An independent time-domain integrator ([`oracle`]) drives the full coupled
//! mean-field equations to their periodic attractor and extracts harmonic
//! amplitudes, cross-checking every frequency-domain solver. The [`sweep`]
//! module evaluates observables over parameter grids (in parallel when the
//! `parallel` feature is enabled) and [`validate`] runs the acceptance suite.

pub mod constants;
pub mod error;
pub mod model;
pub mod observables;
pub mod oracle;
pub mod sidebands;
pub mod steadystate;
pub mod sweep;
pub mod validate;

pub use error::Error;
pub use model::{derive, Bath, DerivedParams, PhysParams, PumpMode};
pub use sidebands::{ChiConvention, SidebandSolution};
pub use steadystate::{NmSteadyForm, OperatingPoint, SteadyRegime, SteadyState};
pub use sweep::{Conventions, SpectrumRecord, SweepSpec};

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
