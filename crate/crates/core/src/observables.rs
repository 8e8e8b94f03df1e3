//! Measurable quantities built from sideband amplitudes: conversion
//! efficiencies, output-field components, group delay, and the width of the
//! transparency window.

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::Error;
use crate::model::{Bath, DerivedParams, PhysParams};
use crate::sidebands::{self, ChiConvention, SidebandSolution};
use crate::steadystate::{solve_steady, SteadyOptions, SteadyRegime, SteadyState};
use crate::Result;

/// Default central-difference step for the group delay, in units of ω_m.
pub const GROUP_DELAY_STEP: f64 = 1e-6;
/// Smallest step the phase-wrap refinement is allowed to reach.
const GROUP_DELAY_STEP_FLOOR: f64 = 1e-10;

/// Second-order sideband conversion efficiencies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Efficiencies {
    /// Upper-sideband efficiency η₁ = |−√κ_ex A₂⁺/ε_p| (structured bath:
    /// the emitted amplitude carries the bath response filter).
    pub eta1: f64,
    /// Lower-sideband efficiency η₂; not defined for the structured bath.
    pub eta2: Option<f64>,
    pub regime: SteadyRegime,
}

/// Output-field components at the five emitted frequencies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutputSpectrum {
    /// Control line: C₁ = ε_l − √κ_ex a_s.
    pub c1: C64,
    /// Probe (anti-Stokes) line: C₂ = ε_p − √κ_ex A₁⁺.
    pub c2: C64,
    /// Stokes line −√κ_ex A₁⁻.
    pub stokes: C64,
    /// Second-order upper line −√κ_ex A₂⁺.
    pub up2: C64,
    /// Second-order lower line −√κ_ex A₂⁻.
    pub low2: C64,
}

impl OutputSpectrum {
    /// Normalized probe-line power |C₂/ε_p|², the transparency-window trace.
    pub fn probe_transmission(&self, eps_p: f64) -> f64 {
        (self.c2 / eps_p).norm_sqr()
    }
}

/// Group delay of the second-order upper sideband at Δ_p = ω_m.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GroupDelay {
    /// Signed delay (s); positive is slow light, negative fast light.
    pub tau1: f64,
    /// Differentiation step actually used (rad/s).
    pub step: f64,
}

/// Efficiencies per the regime recorded in the solution.
pub fn efficiencies(
    sol: &SidebandSolution,
    p: &PhysParams,
    d: &DerivedParams,
) -> Result<Efficiencies> {
    let eps_p = d.eps_p(sol.delta_p);
    if eps_p == 0.0 {
        return Err(Error::UndefinedEfficiency);
    }
    let root_kex = p.kappa_ex.sqrt();
    match sol.regime {
        SteadyRegime::NonMarkovian => {
            let (lambda1, mu) = match p.bath {
                Bath::NonMarkovian { lambda1, mu } => (lambda1, mu),
                Bath::Markovian => {
                    return Err(Error::InvalidParams {
                        field: "bath",
                        reason: "non-Markovian efficiency requires a structured bath".into(),
                    })
                }
            };
            let filter = lambda1 / C64::new(lambda1, mu - 2.0 * sol.delta_p);
            let eta1 = (root_kex * filter * sol.a2_plus / eps_p).norm();
            Ok(Efficiencies {
                eta1,
                eta2: None,
                regime: sol.regime,
            })
        }
        _ => Ok(Efficiencies {
            eta1: (root_kex * sol.a2_plus / eps_p).norm(),
            eta2: Some((root_kex * sol.a2_minus / eps_p).norm()),
            regime: sol.regime,
        }),
    }
}

/// Output field components via a_out = a_in − √κ_ex a (Markovian regimes).
pub fn output_spectrum(
    sol: &SidebandSolution,
    steady: &SteadyState,
    p: &PhysParams,
    d: &DerivedParams,
) -> OutputSpectrum {
    let root_kex = p.kappa_ex.sqrt();
    OutputSpectrum {
        c1: C64::new(d.eps_l, 0.0) - root_kex * steady.a_s,
        c2: C64::new(d.eps_p(sol.delta_p), 0.0) - root_kex * sol.a1_plus,
        stokes: -root_kex * sol.a1_minus,
        up2: -root_kex * sol.a2_plus,
        low2: -root_kex * sol.a2_minus,
    }
}

/// Phase of the normalized upper-sideband output −√κ_ex A₂⁺/ε_p.
fn sideband_phase(
    delta_p: f64,
    p: &PhysParams,
    d: &DerivedParams,
    steady_opts: SteadyOptions,
    chi_conv: ChiConvention,
) -> Result<f64> {
    let steady = solve_steady(d, p, steady_opts)?;
    let sol = sidebands::solve_sidebands(&steady, delta_p, p, d, chi_conv)?;
    let eps_p = d.eps_p(delta_p);
    if eps_p == 0.0 {
        return Err(Error::UndefinedEfficiency);
    }
    Ok((-(p.kappa_ex.sqrt()) * sol.a2_plus / eps_p).arg())
}

/// Slope dφ/dΔ_p of the upper-sideband phase at Δ_p = ω_m by central
/// difference, with the step refined whenever the raw jump is too close to
/// the ±π branch cut to unwrap safely.
pub fn phase_slope(
    p: &PhysParams,
    d: &DerivedParams,
    steady_opts: SteadyOptions,
    chi_conv: ChiConvention,
) -> Result<(f64, f64)> {
    let mut h = GROUP_DELAY_STEP * p.omega_m;
    let floor = GROUP_DELAY_STEP_FLOOR * p.omega_m;
    loop {
        let lo = sideband_phase(p.omega_m - h, p, d, steady_opts, chi_conv)?;
        let hi = sideband_phase(p.omega_m + h, p, d, steady_opts, chi_conv)?;
        let mut dphi = hi - lo;
        while dphi > std::f64::consts::PI {
            dphi -= 2.0 * std::f64::consts::PI;
        }
        while dphi < -std::f64::consts::PI {
            dphi += 2.0 * std::f64::consts::PI;
        }
        // Principal-value differences near ±π are ambiguous; refine.
        if dphi.abs() > 0.5 * std::f64::consts::PI {
            if h <= floor {
                return Err(Error::PhaseWrap { delta: dphi });
            }
            h *= 0.5;
            continue;
        }
        return Ok((dphi / (2.0 * h), h));
    }
}

/// Group delay τ₁ = (dφ/dΔ_p)/2 at Δ_p = ω_m.
pub fn group_delay(
    p: &PhysParams,
    d: &DerivedParams,
    steady_opts: SteadyOptions,
    chi_conv: ChiConvention,
) -> Result<GroupDelay> {
    let (slope, step) = phase_slope(p, d, steady_opts, chi_conv)?;
    Ok(GroupDelay {
        tau1: 0.5 * slope,
        step,
    })
}

/// Analytic width of the transparency window:
/// Γ = Γ_m + ξ²x_zpf²|a_s|²/κ.
pub fn omit_linewidth(steady: &SteadyState, p: &PhysParams, d: &DerivedParams) -> f64 {
    p.gamma_m + d.xi * d.xi * d.x_zpf * d.x_zpf * steady.photon_number() / d.kappa
}
