//! Acceptance-criteria runner.
//!
//! Every criterion is pinned here with its stated tolerance and produces a
//! measured-vs-expected record; nothing is deferred to later calibration.
//! Criteria that quote figure-derived values run under the figure
//! conventions ([`Conventions::figure`]); the time-domain equivalence
//! criterion pairs the self-consistent solver with the integrator, which
//! embodies the same full dynamics.

use serde::Serialize;

use crate::model::{derive, Bath, PhysParams, PumpMode};
use crate::observables;
use crate::oracle;
use crate::sidebands;
use crate::steadystate::solve_steady;
use crate::sweep::Conventions;
use crate::Result;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// One measured-vs-expected comparison.
#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub label: String,
    pub measured: f64,
    pub expected: f64,
    /// Relative tolerance unless the label says otherwise.
    pub tolerance: f64,
    pub passed: bool,
}

impl CheckResult {
    fn rel(label: impl Into<String>, measured: f64, expected: f64, tol: f64) -> Self {
        let passed = measured.is_finite() && (measured - expected).abs() <= tol * expected.abs();
        CheckResult {
            label: label.into(),
            measured,
            expected,
            tolerance: tol,
            passed,
        }
    }

    fn at_least(label: impl Into<String>, measured: f64, bound: f64) -> Self {
        CheckResult {
            label: label.into(),
            measured,
            expected: bound,
            tolerance: 0.0,
            passed: measured.is_finite() && measured >= bound,
        }
    }

    fn at_most(label: impl Into<String>, measured: f64, bound: f64) -> Self {
        CheckResult {
            label: label.into(),
            measured,
            expected: bound,
            tolerance: 0.0,
            passed: measured.is_finite() && measured <= bound,
        }
    }

    /// Peak-position check: quoted positions carry three decimals, so the
    /// window is the quote's rounding half-width plus one grid step.
    fn position(label: impl Into<String>, measured: f64, expected: f64, grid_step: f64) -> Self {
        let tol = 5e-4 + grid_step;
        CheckResult {
            label: label.into(),
            measured,
            expected,
            tolerance: tol,
            passed: measured.is_finite() && (measured - expected).abs() <= tol,
        }
    }
}

/// Result of one acceptance criterion.
#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: String,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
    /// Measurement context for criteria that do not meet their stated
    /// targets; records what the solvers and the time-domain integration
    /// actually give.
    pub analysis: Option<String>,
}

impl CriterionResult {
    fn new(id: u8, name: &str, checks: Vec<CheckResult>, analysis: Option<String>) -> Self {
        let passed = checks.iter().all(|c| c.passed);
        CriterionResult {
            id,
            name: name.to_string(),
            passed,
            checks,
            analysis,
        }
    }
}

/// Full acceptance report.
#[derive(Debug, Clone, Serialize)]
pub struct AcceptanceReport {
    pub criteria: Vec<CriterionResult>,
    pub passed: bool,
    pub arbitration: Option<oracle::ArbitrationReport>,
}

const GRID_POINTS: usize = 2001;
const GRID_LO: f64 = 0.98;
const GRID_HI: f64 = 1.02;

fn grid_step() -> f64 {
    (GRID_HI - GRID_LO) / (GRID_POINTS - 1) as f64
}

/// η₁ and η₂ over the standard probe grid (η₂ is NaN for the structured
/// bath, which defines only the upper-sideband efficiency).
fn eta_spectra(
    p: &PhysParams,
    conv: Conventions,
    count: usize,
) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    let d = derive(p)?;
    let steady = solve_steady(&d, p, conv.steady_options())?;
    let grid: Vec<f64> = (0..count)
        .map(|i| p.omega_m * (GRID_LO + (GRID_HI - GRID_LO) * i as f64 / (count - 1) as f64))
        .collect();
    let eval = |&dp: &f64| -> Result<(f64, f64)> {
        let sol = sidebands::solve_sidebands(&steady, dp, p, &d, conv.chi)?;
        let e = observables::efficiencies(&sol, p, &d)?;
        Ok((e.eta1, e.eta2.unwrap_or(f64::NAN)))
    };
    #[cfg(feature = "parallel")]
    let pairs: Result<Vec<(f64, f64)>> = grid.par_iter().map(eval).collect();
    #[cfg(not(feature = "parallel"))]
    let pairs: Result<Vec<(f64, f64)>> = grid.iter().map(eval).collect();
    let pairs = pairs?;
    Ok((
        grid,
        pairs.iter().map(|p| p.0).collect(),
        pairs.iter().map(|p| p.1).collect(),
    ))
}

fn eta1_at(p: &PhysParams, conv: Conventions, dp: f64) -> Result<f64> {
    let d = derive(p)?;
    let steady = solve_steady(&d, p, conv.steady_options())?;
    let sol = sidebands::solve_sidebands(&steady, dp, p, &d, conv.chi)?;
    Ok(observables::efficiencies(&sol, p, &d)?.eta1)
}

fn local_maxima(grid: &[f64], vals: &[f64]) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for i in 1..vals.len() - 1 {
        if vals[i] > vals[i - 1] && vals[i] >= vals[i + 1] {
            out.push((grid[i], vals[i]));
        }
    }
    out
}

fn global_max(grid: &[f64], vals: &[f64]) -> (f64, f64) {
    let mut best = (grid[0], vals[0]);
    for (g, v) in grid.iter().zip(vals) {
        if *v > best.1 {
            best = (*g, *v);
        }
    }
    best
}

/// Criterion 1: rotation-induced resonance shift at 20 kHz spin.
pub fn criterion_1() -> CriterionResult {
    let mut p = PhysParams::default_profile();
    p.omega_spin = 2e4;
    let measured = derive(&p).map(|d| d.delta_s).unwrap_or(f64::NAN);
    CriterionResult::new(
        1,
        "sagnac-shift",
        vec![CheckResult::rel(
            "delta_s at 20 kHz spin",
            measured,
            1.5082e7,
            1e-3,
        )],
        None,
    )
}

/// Criterion 2: baseline spectra, no spin, no OPA.
pub fn criterion_2() -> CriterionResult {
    let p = PhysParams::default_profile();
    let conv = Conventions::figure();
    let (grid, e1, e2) = match eta_spectra(&p, conv, GRID_POINTS) {
        Ok(v) => v,
        Err(e) => return error_result(2, "baseline-efficiencies", e),
    };
    let peaks = local_maxima(&grid, &e1);
    let mut checks = Vec::new();
    let two_peaks = peaks.len() == 2;
    checks.push(CheckResult {
        label: "eta1 has two peaks with a local minimum near omega_m".into(),
        measured: peaks.len() as f64,
        expected: 2.0,
        tolerance: 0.0,
        passed: two_peaks && {
            let dip = grid
                .iter()
                .zip(&e1)
                .filter(|(g, _)| **g > peaks[0].0 && **g < peaks[1].0)
                .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
                .map(|(g, _)| *g)
                .unwrap_or(f64::NAN);
            (dip / p.omega_m - 1.0).abs() < 0.005
        },
    });
    for (i, (_, v)) in peaks.iter().take(2).enumerate() {
        checks.push(CheckResult::rel(
            format!("eta1 peak {} value", i + 1),
            *v,
            0.196,
            0.05,
        ));
    }
    let (_, e2max) = global_max(&grid, &e2);
    checks.push(CheckResult::rel("eta2 peak value", e2max, 0.0082, 0.05));
    let analysis = Some(format!(
        "static-resonator eta1 peaks measure {:.4}/{:.4}; the independent time-domain \
         integration gives the same level (truncation-limited ~0.097 at the peak), while the \
         spinning curves at ±20 kHz peak at ~0.196 — the quoted static value matches the \
         spinning-curve peak height, not the static spectrum",
        peaks.first().map(|p| p.1).unwrap_or(f64::NAN),
        peaks.get(1).map(|p| p.1).unwrap_or(f64::NAN)
    ));
    CriterionResult::new(2, "baseline-efficiencies", checks, analysis)
}

/// Criterion 3: OPA enhancement of the upper sideband with spin.
pub fn criterion_3() -> CriterionResult {
    let conv = Conventions::figure();
    let base = PhysParams::default_profile();
    let kappa = derive(&base).unwrap().kappa;
    let mut checks = Vec::new();

    let mut p = base.clone();
    p.opa_gain = 0.2 * kappa;
    p.omega_spin = 2e4;
    let m = eta1_at(&p, conv, 0.997 * p.omega_m).unwrap_or(f64::NAN);
    checks.push(CheckResult::rel(
        "eta1(0.997 wm) at +20 kHz, gain 0.2k",
        m,
        0.272,
        0.05,
    ));

    p.omega_spin = -2e4;
    let m = eta1_at(&p, conv, 1.004 * p.omega_m).unwrap_or(f64::NAN);
    checks.push(CheckResult::rel(
        "eta1(1.004 wm) at -20 kHz, gain 0.2k",
        m,
        0.216,
        0.05,
    ));

    p.opa_phase = 1.5 * std::f64::consts::PI;
    p.omega_spin = 2e4;
    let (_, e1, _) = eta_spectra(&p, conv, GRID_POINTS).unwrap();
    checks.push(CheckResult::rel(
        "max eta1 at +20 kHz, phase 3pi/2",
        e1.iter().cloned().fold(f64::NAN, f64::max),
        0.374,
        0.05,
    ));
    p.omega_spin = -2e4;
    let (_, e1, _) = eta_spectra(&p, conv, GRID_POINTS).unwrap();
    checks.push(CheckResult::rel(
        "max eta1 at -20 kHz, phase 3pi/2",
        e1.iter().cloned().fold(f64::NAN, f64::max),
        0.292,
        0.05,
    ));
    CriterionResult::new(3, "opa-enhancement", checks, None)
}

/// Criterion 4: gain scaling at a fixed detuning.
pub fn criterion_4() -> CriterionResult {
    let conv = Conventions::figure();
    let mut p = PhysParams::default_profile();
    let kappa = derive(&p).unwrap().kappa;
    let dp = 1.002 * p.omega_m;
    let e0 = eta1_at(&p, conv, dp).unwrap_or(f64::NAN);
    p.opa_gain = 0.6 * kappa;
    let e6 = eta1_at(&p, conv, dp).unwrap_or(f64::NAN);
    let ratio = e6 / e0;
    let analysis = Some(format!(
        "eta1 rises from {:.4} to {:.4} (x{:.2}) at 1.002 wm; the five-fold mark is reached \
         only for detunings at or below 1.0005 wm on the same curve family",
        e0, e6, ratio
    ));
    CriterionResult::new(
        4,
        "gain-scaling",
        vec![CheckResult::at_least(
            "eta1(G=0.6k)/eta1(G=0) at 1.002 wm",
            ratio,
            5.0,
        )],
        analysis,
    )
}

/// Criterion 5: lower-sideband nonreciprocity at ±60 kHz.
pub fn criterion_5() -> CriterionResult {
    let conv = Conventions::figure();
    let mut checks = Vec::new();
    let mut p = PhysParams::default_profile();

    p.omega_spin = -6e4;
    let (grid, _, e2) = eta_spectra(&p, conv, GRID_POINTS).unwrap();
    let (pos, val) = global_max(&grid, &e2);
    checks.push(CheckResult::rel("max eta2 at -60 kHz", val, 0.0304, 0.05));
    checks.push(CheckResult::position(
        "eta2 peak position at -60 kHz (units of omega_m)",
        pos / p.omega_m,
        1.003,
        grid_step(),
    ));

    p.omega_spin = 6e4;
    let (grid, _, e2) = eta_spectra(&p, conv, GRID_POINTS).unwrap();
    let (pos, val) = global_max(&grid, &e2);
    checks.push(CheckResult::rel("max eta2 at +60 kHz", val, 0.0097, 0.05));
    checks.push(CheckResult::position(
        "eta2 peak position at +60 kHz (units of omega_m)",
        pos / p.omega_m,
        0.999,
        grid_step(),
    ));
    CriterionResult::new(5, "lower-sideband-nonreciprocity", checks, None)
}

/// Criterion 6: OPA gains of the lower sideband at -20 kHz.
pub fn criterion_6() -> CriterionResult {
    let conv = Conventions::figure();
    let base = PhysParams::default_profile();
    let kappa = derive(&base).unwrap().kappa;
    let mut checks = Vec::new();
    let mut p = base.clone();
    p.omega_spin = -2e4;

    let (grid, _, e2) = eta_spectra(&p, conv, GRID_POINTS).unwrap();
    let (_, val) = global_max(&grid, &e2);
    checks.push(CheckResult::rel("max eta2, OPA off", val, 0.0108, 0.05));

    p.opa_gain = 0.2 * kappa;
    let (grid, _, e2) = eta_spectra(&p, conv, GRID_POINTS).unwrap();
    let (pos, val) = global_max(&grid, &e2);
    checks.push(CheckResult::rel("max eta2, gain 0.2k", val, 0.0175, 0.05));
    checks.push(CheckResult::position(
        "eta2 peak position, gain 0.2k (units of omega_m)",
        pos / p.omega_m,
        1.001,
        grid_step(),
    ));

    p.opa_phase = 1.5 * std::f64::consts::PI;
    let (grid, _, e2) = eta_spectra(&p, conv, GRID_POINTS).unwrap();
    let (_, val) = global_max(&grid, &e2);
    checks.push(CheckResult::rel(
        "max eta2, gain 0.2k, phase 3pi/2",
        val,
        0.0251,
        0.05,
    ));
    CriterionResult::new(6, "lower-sideband-opa-gains", checks, None)
}

/// Criterion 7: static-pump regime values (10% tolerance; this regime
/// carries the drive-normalized steady-amplitude correction).
pub fn criterion_7() -> CriterionResult {
    let conv = Conventions::figure();
    let mut p = PhysParams::default_profile();
    p.pump_mode = PumpMode::DoubleControl;
    let kappa = derive(&p).unwrap().kappa;
    p.opa_gain = 0.2 * kappa;
    let mut checks = Vec::new();

    p.opa_phase = 0.0;
    let (_, e1, _) = eta_spectra(&p, conv, GRID_POINTS).unwrap();
    checks.push(CheckResult::rel(
        "peak eta1, phase 0",
        e1.iter().cloned().fold(f64::NAN, f64::max),
        0.0952,
        0.10,
    ));

    p.opa_phase = 0.5 * std::f64::consts::PI;
    let (_, e1, _) = eta_spectra(&p, conv, GRID_POINTS).unwrap();
    checks.push(CheckResult::rel(
        "peak eta1, phase pi/2",
        e1.iter().cloned().fold(f64::NAN, f64::max),
        0.1153,
        0.10,
    ));

    p.opa_phase = 0.64 * std::f64::consts::PI;
    let (grid, e1, _) = eta_spectra(&p, conv, GRID_POINTS).unwrap();
    let (pos, val) = global_max(&grid, &e1);
    checks.push(CheckResult::rel(
        "global max eta1 at phase 0.64pi",
        val,
        0.1173,
        0.10,
    ));
    checks.push(CheckResult::position(
        "global-max position (units of omega_m)",
        pos / p.omega_m,
        1.003,
        grid_step(),
    ));

    // Lower sideband: maximum over the pump phase.
    let mut best = f64::NAN;
    for i in 0..51 {
        p.opa_phase = 2.0 * std::f64::consts::PI * i as f64 / 50.0;
        let (_, _, e2) = eta_spectra(&p, conv, GRID_POINTS).unwrap();
        let m = e2.iter().cloned().fold(f64::NAN, f64::max);
        best = best.max(m);
    }
    checks.push(CheckResult::rel(
        "max eta2 over pump phase",
        best,
        0.0095,
        0.10,
    ));
    CriterionResult::new(7, "static-pump-regime", checks, None)
}

fn tau1_at_spin(p_base: &PhysParams, omega_spin: f64, conv: Conventions) -> Result<f64> {
    let mut p = p_base.clone();
    p.omega_spin = omega_spin;
    let d = derive(&p)?;
    Ok(observables::group_delay(&p, &d, conv.steady_options(), conv.chi)?.tau1)
}

/// First sign change of τ₁ along |Ω|, refined by bisection; NaN if none.
fn first_crossing(p: &PhysParams, sign: f64, conv: Conventions) -> f64 {
    let mut prev: Option<(f64, f64)> = None;
    for k in 1..=150 {
        let spin = sign * 1e3 * k as f64;
        let tau = match tau1_at_spin(p, spin, conv) {
            Ok(t) => t,
            Err(_) => return f64::NAN,
        };
        if let Some((s0, t0)) = prev {
            if t0.signum() != tau.signum() {
                let (mut lo, mut hi, mut tlo) = (s0, spin, t0);
                for _ in 0..25 {
                    let mid = 0.5 * (lo + hi);
                    let tm = match tau1_at_spin(p, mid, conv) {
                        Ok(t) => t,
                        Err(_) => return f64::NAN,
                    };
                    if tm.signum() == tlo.signum() {
                        lo = mid;
                        tlo = tm;
                    } else {
                        hi = mid;
                    }
                }
                return 0.5 * (lo + hi).abs();
            }
        }
        prev = Some((spin, tau));
    }
    f64::NAN
}

/// Criterion 8: group-delay sign transitions vs spin rate.
pub fn criterion_8() -> CriterionResult {
    let conv = Conventions::figure();
    let mut p = PhysParams::default_profile();
    let kappa = derive(&p).unwrap().kappa;
    p.opa_gain = 0.4 * kappa;
    p.p_control = 1e-3;

    let left = first_crossing(&p, 1.0, conv);
    let right = first_crossing(&p, -1.0, conv);
    let checks = vec![
        CheckResult::rel(
            "tau1 zero crossing, drive from the left (rad/s)",
            left,
            1.01e5,
            0.10,
        ),
        CheckResult::rel(
            "tau1 zero crossing, drive from the right (rad/s)",
            right,
            3.0e4,
            0.10,
        ),
    ];
    let analysis = Some(format!(
        "first crossings measure {:.1} kHz (left) and {:.1} kHz (right); the right-drive \
         crossing sits well below the quoted 30 kHz under every convention tried, while a \
         second right-drive crossing exists near 138 kHz",
        left / 1e3,
        right / 1e3
    ));
    CriterionResult::new(8, "group-delay-sign-transitions", checks, analysis)
}

/// Criterion 9: wideband limit of the structured bath.
pub fn criterion_9() -> CriterionResult {
    let conv = Conventions::figure();
    let base = PhysParams::default_profile();
    let mut checks = Vec::new();

    for spin in [-2e4, 0.0, 2e4] {
        let mut p = base.clone();
        p.omega_spin = spin;
        let (_, e_mk, _) = eta_spectra(&p, conv, GRID_POINTS).unwrap();
        p.bath = Bath::NonMarkovian {
            lambda1: 200.0 * p.omega_m,
            mu: 0.0,
        };
        let (_, e_nm, _) = eta_spectra(&p, conv, GRID_POINTS).unwrap();
        let max_rel = e_mk
            .iter()
            .zip(&e_nm)
            .map(|(m, n)| (n - m).abs() / m)
            .fold(0.0f64, f64::max);
        checks.push(CheckResult::at_most(
            format!("max pointwise relative gap at spin {spin:+.0} (width 200 wm)"),
            max_rel,
            0.01,
        ));
    }

    let mut gaps = Vec::new();
    let (_, e_mk, _) = eta_spectra(&base, conv, GRID_POINTS).unwrap();
    for width in [20.0, 50.0, 200.0] {
        let mut p = base.clone();
        p.bath = Bath::NonMarkovian {
            lambda1: width * p.omega_m,
            mu: 0.0,
        };
        let (_, e_nm, _) = eta_spectra(&p, conv, GRID_POINTS).unwrap();
        let max_rel = e_mk
            .iter()
            .zip(&e_nm)
            .map(|(m, n)| (n - m).abs() / m)
            .fold(0.0f64, f64::max);
        gaps.push(max_rel);
    }
    checks.push(CheckResult {
        label: format!(
            "monotone approach over widths 20/50/200 wm ({:.4}/{:.4}/{:.4})",
            gaps[0], gaps[1], gaps[2]
        ),
        measured: gaps[2],
        expected: gaps[0],
        tolerance: 0.0,
        passed: gaps[0] > gaps[1] && gaps[1] > gaps[2],
    });
    CriterionResult::new(9, "markovian-limit", checks, None)
}

/// Criterion 10: sensitivity to the reservoir decay μ.
pub fn criterion_10() -> CriterionResult {
    let conv = Conventions::figure();
    let base = PhysParams::default_profile();
    let gap_at = |width: f64| -> f64 {
        let mut p = base.clone();
        p.bath = Bath::NonMarkovian {
            lambda1: width * p.omega_m,
            mu: 0.0,
        };
        let (_, e0, _) = eta_spectra(&p, conv, GRID_POINTS).unwrap();
        p.bath = Bath::NonMarkovian {
            lambda1: width * p.omega_m,
            mu: 5.0 * p.omega_m,
        };
        let (_, e5, _) = eta_spectra(&p, conv, GRID_POINTS).unwrap();
        e0.iter()
            .zip(&e5)
            .map(|(a, b)| (b - a).abs() / a.max(1e-300))
            .fold(0.0f64, f64::max)
    };
    let narrow = gap_at(2.0);
    let wide = gap_at(200.0);
    let checks = vec![
        CheckResult::at_least("max relative change, width 2 wm", narrow, 0.10),
        CheckResult::at_most("max relative change, width 200 wm", wide, 0.01),
    ];
    let analysis = Some(format!(
        "decay mu = 5 wm changes the wideband (200 wm) spectrum by up to {:.3} in relative \
         terms: mu enters the response as an effective detuning shift of order \
         kappa*(n*delta_p - mu)/lambda1, comparable to the transparency-window width even \
         at width 200 wm",
        wide
    ));
    CriterionResult::new(10, "mu-sensitivity", checks, analysis)
}

/// Criterion 11: solver vs time-domain extraction at spectral peaks.
pub fn criterion_11() -> CriterionResult {
    let base = PhysParams::default_profile();
    let kappa = derive(&base).unwrap().kappa;
    let mut checks = Vec::new();
    for (pump, g, spin) in oracle::equivalence_configs(kappa) {
        let cmp = match oracle::compare_config(&base, pump, g, spin, 21) {
            Ok(c) => c,
            Err(e) => {
                return error_result(11, "oracle-equivalence", e);
            }
        };
        let peak = cmp
            .iter()
            .max_by(|a, b| a.eta1_solver.partial_cmp(&b.eta1_solver).unwrap())
            .unwrap();
        checks.push(CheckResult::at_most(
            format!(
                "relative gap at the eta1 peak ({:?}, G/k={:.1}, spin {:+.0})",
                pump,
                g / kappa,
                spin
            ),
            peak.rel_error,
            0.03,
        ));
    }
    let worst = checks.iter().map(|c| c.measured).fold(0.0f64, f64::max);
    let analysis = Some(format!(
        "worst peak gap {:.3}: the gap is the perturbative truncation at the default probe \
         power (probe at 5% of control power) — quartering the probe power shrinks it \
         roughly fourfold (see the scaling criterion), and the sum-frequency pump adds a \
         control-scale drive that widens it further at G = 0.2k",
        worst
    ));
    CriterionResult::new(11, "oracle-equivalence", checks, analysis)
}

/// Criterion 12: perturbative scaling of the sideband orders.
pub fn criterion_12() -> CriterionResult {
    let p = PhysParams::default_profile();
    let d = derive(&p).unwrap();
    let dp = 0.997 * p.omega_m;
    let steady = solve_steady(&d, &p, Default::default()).unwrap();
    let f1 = sidebands::solve_first_order(&steady, dp, &p, &d).unwrap();
    let s1 = sidebands::solve_second_order(&steady, &f1, dp, &p, &d).unwrap();

    let mut ph = p.clone();
    ph.p_probe = p.p_probe / 4.0; // halves eps_p exactly
    let dh = derive(&ph).unwrap();
    let steady_h = solve_steady(&dh, &ph, Default::default()).unwrap();
    let f2 = sidebands::solve_first_order(&steady_h, dp, &ph, &dh).unwrap();
    let s2 = sidebands::solve_second_order(&steady_h, &f2, dp, &ph, &dh).unwrap();

    let lin = (f1.a1_plus / f2.a1_plus - 2.0).norm();
    let quad = (s1.a2_plus / s2.a2_plus - 4.0).norm();
    let checks = vec![
        CheckResult::at_most(
            "first-order linearity residual under probe halving",
            lin,
            1e-8,
        ),
        CheckResult::at_most(
            "second-order quadratic residual under probe halving",
            quad,
            1e-8,
        ),
    ];
    CriterionResult::new(12, "perturbative-scaling", checks, None)
}

fn error_result(id: u8, name: &str, e: crate::Error) -> CriterionResult {
    CriterionResult {
        id,
        name: name.to_string(),
        passed: false,
        checks: vec![],
        analysis: Some(format!("criterion aborted: {e}")),
    }
}

/// Runs all twelve criteria plus the variant arbitration.
pub fn run_acceptance() -> AcceptanceReport {
    let criteria = vec![
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
        criterion_9(),
        criterion_10(),
        criterion_11(),
        criterion_12(),
    ];
    let passed = criteria.iter().all(|c| c.passed);
    let arbitration = oracle::arbitrate_variants(&PhysParams::default_profile()).ok();
    AcceptanceReport {
        criteria,
        passed,
        arbitration,
    }
}

/// Cheap subset used when the caller wants to skip the time-domain grid
/// (everything except criterion 11 and the arbitration block).
pub fn run_acceptance_fast() -> AcceptanceReport {
    let criteria = vec![
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
        criterion_9(),
        criterion_10(),
        criterion_12(),
    ];
    let passed = criteria.iter().all(|c| c.passed);
    AcceptanceReport {
        criteria,
        passed,
        arbitration: None,
    }
}
