//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by the solvers, the time-domain integrator, and the
/// sweep engine.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A parameter violates its domain invariant.
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParams { field: &'static str, reason: String },

    /// The steady-state fixed point did not converge within the iteration
    /// budget; carries the last residual (relative to the mechanical
    /// frequency).
    #[error(
        "steady state did not converge: residual {residual:.3e} after {iterations} iterations"
    )]
    NoConvergence { residual: f64, iterations: usize },

    /// The steady-state self-consistency has more than one real root
    /// (optical bistability); the solver refuses to pick one silently.
    #[error("steady state is multivalued (optical bistability): {} candidate detunings {roots:?}", roots.len())]
    MultipleRoots { roots: Vec<f64> },

    /// The parametric gain reaches or exceeds the instability threshold
    /// 4G² ≥ κ² + Δ².
    #[error("parametric gain above threshold: 4G² = {gain_sq:.3e} ≥ κ² + Δ² = {bound:.3e}")]
    AboveThreshold { gain_sq: f64, bound: f64 },

    /// A sideband system matrix is numerically singular.
    #[error("sideband system numerically singular (condition estimate {cond:.3e})")]
    SingularSystem { cond: f64 },

    /// Sideband efficiency requested with zero probe amplitude.
    #[error("sideband efficiency undefined for zero probe amplitude")]
    UndefinedEfficiency,

    /// The group-delay phase difference could not be disambiguated even at
    /// the smallest differentiation step.
    #[error("phase wrap in group-delay stencil: |Δφ| = {delta:.3} rad at step floor")]
    PhaseWrap { delta: f64 },

    /// Time-domain state exceeded the blow-up bound (parametric instability
    /// or unphysical parameters).
    #[error("time-domain integration blew up at t = {time:.3e} s")]
    BlowUp { time: f64 },

    /// Adaptive step size underflowed.
    #[error("integration step underflow at t = {time:.3e} s")]
    StepUnderflow { time: f64 },

    /// Harmonic coefficients still drift between consecutive windows; the
    /// trajectory has not reached a periodic attractor.
    #[error("trajectory not periodic: window-to-window drift {drift:.3e}")]
    NonPeriodic { drift: f64 },

    /// Unknown figure preset name.
    #[error("unknown preset `{name}`")]
    UnknownPreset { name: String },

    /// Invalid sweep specification.
    #[error("invalid sweep spec: {0}")]
    InvalidSweep(String),
}
