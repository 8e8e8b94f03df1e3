//! Independent time-domain verification.
//!
//! Integrates the coupled mean-field equations for the cavity amplitude and
//! the mechanical mode directly with an adaptive embedded Runge-Kutta 7(8)
//! scheme, drives them to the periodic attractor, and projects the last
//! windows onto the probe-beat harmonics. The extracted coefficients
//! cross-check the frequency-domain solvers without sharing any code path
//! with them.

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::constants::HBAR;
use crate::error::Error;
use crate::model::{derive, DerivedParams, PhysParams, PumpMode};
use crate::sidebands::{self, ChiConvention};
use crate::steadystate::{self, SteadyOptions};
use crate::Result;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Probe drive settings for one integration.
#[derive(Debug, Clone, Copy)]
pub struct DriveControls {
    /// Probe-control detuning (rad/s).
    pub delta_p: f64,
    /// Whether the probe tone is applied at all.
    pub probe_on: bool,
}

/// Integrator options.
#[derive(Debug, Clone, Copy)]
pub struct OracleOptions {
    /// Relative tolerance of the embedded pair.
    pub rtol: f64,
    /// Settling horizon in units of 1/Γ_m.
    pub settle_lifetimes: f64,
    /// Beat periods per extraction window.
    pub periods_per_window: usize,
    /// Samples per beat period (uniform).
    pub samples_per_period: usize,
    /// Extra windows allowed while the drift criterion is not yet met.
    pub max_extra_windows: usize,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            rtol: 1e-10,
            settle_lifetimes: 50.0,
            periods_per_window: 32,
            samples_per_period: 64,
            max_extra_windows: 8,
        }
    }
}

/// Window-to-window drift bound for accepting the attractor as periodic.
pub const DRIFT_TOL: f64 = 1e-6;

/// Integration statistics.
#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct IntegrationStats {
    pub accepted_steps: u64,
    pub rejected_steps: u64,
    pub rhs_evals: u64,
    pub extra_windows: usize,
}

/// Sampled periodic orbit: the last two extraction windows.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub delta_p: f64,
    pub times: Vec<f64>,
    pub field: Vec<C64>,
    pub displacement: Vec<f64>,
    pub samples_per_period: usize,
    pub periods_per_window: usize,
    /// Relative drift of the harmonic coefficients between the two windows.
    pub drift: f64,
    pub stats: IntegrationStats,
}

/// Harmonic content of the cavity field over the final window.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct HarmonicExtract {
    /// Mean (carrier) component.
    pub c0: C64,
    /// Coefficient of e^{−iΔ_p t}: the first-order upper amplitude.
    pub a1_plus: C64,
    /// Coefficient of e^{+iΔ_p t}.
    pub a1_minus: C64,
    /// Coefficient of e^{−2iΔ_p t}: the second-order upper amplitude.
    pub a2_plus: C64,
    /// Coefficient of e^{+2iΔ_p t}.
    pub a2_minus: C64,
    /// Power fraction outside the five extracted lines.
    pub residual_fraction: f64,
}

// Fehlberg 7(8) tableau, 13 stages.
const STAGES: usize = 13;
const C: [f64; STAGES] = [
    0.0,
    2.0 / 27.0,
    1.0 / 9.0,
    1.0 / 6.0,
    5.0 / 12.0,
    0.5,
    5.0 / 6.0,
    1.0 / 6.0,
    2.0 / 3.0,
    1.0 / 3.0,
    1.0,
    0.0,
    1.0,
];
const A: [[f64; STAGES - 1]; STAGES - 1] = [
    [
        2.0 / 27.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
    ],
    [
        1.0 / 36.0,
        1.0 / 12.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
    ],
    [
        1.0 / 24.0,
        0.0,
        1.0 / 8.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
    ],
    [
        5.0 / 12.0,
        0.0,
        -25.0 / 16.0,
        25.0 / 16.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
    ],
    [
        1.0 / 20.0,
        0.0,
        0.0,
        0.25,
        0.2,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
    ],
    [
        -25.0 / 108.0,
        0.0,
        0.0,
        125.0 / 108.0,
        -65.0 / 27.0,
        125.0 / 54.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
    ],
    [
        31.0 / 300.0,
        0.0,
        0.0,
        0.0,
        61.0 / 225.0,
        -2.0 / 9.0,
        13.0 / 900.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
    ],
    [
        2.0,
        0.0,
        0.0,
        -53.0 / 6.0,
        704.0 / 45.0,
        -107.0 / 9.0,
        67.0 / 90.0,
        3.0,
        0.0,
        0.0,
        0.0,
        0.0,
    ],
    [
        -91.0 / 108.0,
        0.0,
        0.0,
        23.0 / 108.0,
        -976.0 / 135.0,
        311.0 / 54.0,
        -19.0 / 60.0,
        17.0 / 6.0,
        -1.0 / 12.0,
        0.0,
        0.0,
        0.0,
    ],
    [
        2383.0 / 4100.0,
        0.0,
        0.0,
        -341.0 / 164.0,
        4496.0 / 1025.0,
        -301.0 / 82.0,
        2133.0 / 4100.0,
        45.0 / 82.0,
        45.0 / 164.0,
        18.0 / 41.0,
        0.0,
        0.0,
    ],
    [
        3.0 / 205.0,
        0.0,
        0.0,
        0.0,
        0.0,
        -6.0 / 41.0,
        -3.0 / 205.0,
        -3.0 / 41.0,
        3.0 / 41.0,
        6.0 / 41.0,
        0.0,
        0.0,
    ],
    [
        -1777.0 / 4100.0,
        0.0,
        0.0,
        -341.0 / 164.0,
        4496.0 / 1025.0,
        -289.0 / 82.0,
        2193.0 / 4100.0,
        51.0 / 82.0,
        33.0 / 164.0,
        12.0 / 41.0,
        0.0,
        1.0,
    ],
];
const B8: [f64; STAGES] = [
    0.0,
    0.0,
    0.0,
    0.0,
    0.0,
    34.0 / 105.0,
    9.0 / 35.0,
    9.0 / 35.0,
    9.0 / 280.0,
    9.0 / 280.0,
    0.0,
    41.0 / 840.0,
    41.0 / 840.0,
];
const ERR_COEF: f64 = 41.0 / 840.0;

type State = [f64; 4]; // [Re a, Im a, x, v]

struct Stepper<'a, F: Fn(f64, &State) -> State> {
    rhs: &'a F,
    rtol: f64,
    atol: State,
    h: f64,
    stats: IntegrationStats,
    blowup_bound: f64,
}

impl<F: Fn(f64, &State) -> State> Stepper<'_, F> {
    /// One accepted adaptive step from (t, y); returns the new (t, y).
    fn step(&mut self, t: f64, y: &State, h_max: f64) -> Result<(f64, State)> {
        let mut h = self.h.min(h_max);
        loop {
            if h < 1e-15 * t.abs().max(1.0 / self.rtol.max(1e-16)).max(1e-12) && h < 1e-18 {
                return Err(Error::StepUnderflow { time: t });
            }
            let mut k = [[0.0f64; 4]; STAGES];
            k[0] = (self.rhs)(t, y);
            for s in 1..STAGES {
                let mut ys = *y;
                for j in 0..s {
                    let a = A[s - 1][j];
                    if a != 0.0 {
                        for c in 0..4 {
                            ys[c] += h * a * k[j][c];
                        }
                    }
                }
                k[s] = (self.rhs)(t + C[s] * h, &ys);
            }
            self.stats.rhs_evals += STAGES as u64;

            let mut y8 = *y;
            for s in 0..STAGES {
                if B8[s] != 0.0 {
                    for c in 0..4 {
                        y8[c] += h * B8[s] * k[s][c];
                    }
                }
            }
            let mut err_norm = 0.0f64;
            for c in 0..4 {
                let err = ERR_COEF * h * (k[0][c] + k[10][c] - k[11][c] - k[12][c]);
                let tol = self.atol[c] + self.rtol * y[c].abs().max(y8[c].abs());
                let r = err / tol;
                err_norm += r * r;
            }
            err_norm = (err_norm / 4.0).sqrt();

            if err_norm <= 1.0 {
                self.stats.accepted_steps += 1;
                let grow = if err_norm == 0.0 {
                    5.0
                } else {
                    (0.9 * err_norm.powf(-1.0 / 8.0)).clamp(0.2, 5.0)
                };
                self.h = h * grow;
                let t_new = t + h;
                if y8[0] * y8[0] + y8[1] * y8[1] > self.blowup_bound || !y8[0].is_finite() {
                    return Err(Error::BlowUp { time: t_new });
                }
                return Ok((t_new, y8));
            }
            self.stats.rejected_steps += 1;
            h *= (0.9 * err_norm.powf(-1.0 / 8.0)).clamp(0.1, 0.9);
        }
    }

    /// Advances to exactly `t_target`.
    fn advance_to(&mut self, t: &mut f64, y: &mut State, t_target: f64) -> Result<()> {
        while *t < t_target {
            let (tn, yn) = self.step(*t, y, t_target - *t)?;
            *t = tn;
            *y = yn;
        }
        Ok(())
    }
}

fn window_coeffs(times: &[f64], field: &[C64], delta_p: f64) -> [C64; 5] {
    // Coefficient of e^{-ik Δp t} for k = -2..=2 via uniform projection
    // over an integer number of beat periods.
    let n = field.len() as f64;
    let mut out = [C64::new(0.0, 0.0); 5];
    for (idx, k) in (-2i32..=2).enumerate() {
        let mut acc = C64::new(0.0, 0.0);
        for (t, a) in times.iter().zip(field) {
            acc += a * C64::from_polar(1.0, k as f64 * delta_p * t);
        }
        out[idx] = acc / n;
    }
    out
}

/// Integrates the mean-field equations to the periodic attractor and samples
/// the final two beat windows.
///
/// Starts from an empty cavity at the rotation-only displacement, settles
/// for `settle_lifetimes`/Γ_m, then extends window pairs until the harmonic
/// coefficients drift less than [`DRIFT_TOL`] between consecutive windows.
pub fn integrate(
    p: &PhysParams,
    d: &DerivedParams,
    regime: PumpMode,
    controls: DriveControls,
    opts: OracleOptions,
) -> Result<Trajectory> {
    let kappa = d.kappa;
    let base_detuning = p.delta_0 + d.delta_s;
    let xi = d.xi;
    let root_kex = p.kappa_ex.sqrt();
    let eps_l = d.eps_l;
    let eps_p = if controls.probe_on {
        d.eps_p(controls.delta_p)
    } else {
        0.0
    };
    let g2 = 2.0 * p.opa_gain;
    let pump_phase = C64::from_polar(1.0, p.opa_phase);
    let hbar_xi_over_m = HBAR * xi / p.mass;
    let gamma_m = p.gamma_m;
    let omega_m2 = p.omega_m * p.omega_m;
    let r_omega2 = p.radius * p.omega_spin * p.omega_spin;
    let delta_p = controls.delta_p;

    let rhs = move |t: f64, y: &State| -> State {
        let a = C64::new(y[0], y[1]);
        let beat = C64::from_polar(1.0, -delta_p * t);
        let opa = match regime {
            PumpMode::SumFreq => g2 * a.conj() * pump_phase * beat,
            PumpMode::DoubleControl => g2 * a.conj() * pump_phase,
        };
        let da = -C64::new(kappa, base_detuning - xi * y[2]) * a
            + root_kex * (C64::new(eps_l, 0.0) + eps_p * beat)
            + opa;
        [
            da.re,
            da.im,
            y[3],
            -gamma_m * y[3] - omega_m2 * y[2]
                + hbar_xi_over_m * (y[0] * y[0] + y[1] * y[1])
                + r_omega2,
        ]
    };

    // Tolerance scales follow the driven steady magnitudes.
    let a_scale = (p.kappa_ex * (eps_l * eps_l + eps_p * eps_p)).sqrt() / kappa.max(1.0) + 1.0;
    let x_rot = p.radius * (p.omega_spin / p.omega_m).powi(2);
    let x_scale = hbar_xi_over_m * a_scale * a_scale / omega_m2 + x_rot + d.x_zpf;
    let atol = [
        opts.rtol * a_scale,
        opts.rtol * a_scale,
        opts.rtol * x_scale,
        opts.rtol * x_scale * p.omega_m,
    ];
    let blowup_bound = 1e3 * (a_scale * a_scale) + 10.0;

    let mut stepper = Stepper {
        rhs: &rhs,
        rtol: opts.rtol,
        atol,
        h: 0.05 / p.omega_m.max(kappa),
        stats: IntegrationStats::default(),
        blowup_bound,
    };

    let settle = if gamma_m > 0.0 {
        opts.settle_lifetimes / gamma_m
    } else {
        opts.settle_lifetimes / kappa
    };
    let mut t = 0.0;
    let mut y: State = [0.0, 0.0, x_rot, 0.0];
    stepper.advance_to(&mut t, &mut y, settle)?;

    let beat_period = 2.0 * std::f64::consts::PI / delta_p;
    let n_per = opts.samples_per_period;
    let n_win = opts.periods_per_window * n_per;
    let dt = beat_period / n_per as f64;

    let sample_window = |stepper: &mut Stepper<_>,
                         t: &mut f64,
                         y: &mut State,
                         t0: f64|
     -> Result<(Vec<f64>, Vec<C64>, Vec<f64>)> {
        let mut times = Vec::with_capacity(n_win);
        let mut field = Vec::with_capacity(n_win);
        let mut disp = Vec::with_capacity(n_win);
        for j in 0..n_win {
            let target = t0 + j as f64 * dt;
            stepper.advance_to(t, y, target)?;
            times.push(*t);
            field.push(C64::new(y[0], y[1]));
            disp.push(y[2]);
        }
        Ok((times, field, disp))
    };

    let t0 = t;
    let (mut t1s, mut f1s, mut d1s) = sample_window(&mut stepper, &mut t, &mut y, t0)?;
    let mut extra = 0usize;
    loop {
        let t_next = t0 + (extra as f64 + 1.0) * opts.periods_per_window as f64 * beat_period;
        let (t2s, f2s, d2s) = sample_window(&mut stepper, &mut t, &mut y, t_next)?;
        let c1 = window_coeffs(&t1s, &f1s, delta_p);
        let c2 = window_coeffs(&t2s, &f2s, delta_p);
        let scale = c2.iter().map(|c| c.norm()).fold(0.0, f64::max).max(1e-300);
        let drift = c1
            .iter()
            .zip(&c2)
            .map(|(a, b)| (a - b).norm() / b.norm().max(1e-9 * scale))
            .fold(0.0, f64::max);
        if drift < DRIFT_TOL || extra >= opts.max_extra_windows {
            let mut times = t1s;
            times.extend_from_slice(&t2s);
            let mut field = f1s;
            field.extend_from_slice(&f2s);
            let mut displacement = d1s;
            displacement.extend_from_slice(&d2s);
            let mut stats = stepper.stats;
            stats.extra_windows = extra;
            return Ok(Trajectory {
                delta_p,
                times,
                field,
                displacement,
                samples_per_period: n_per,
                periods_per_window: opts.periods_per_window,
                drift,
                stats,
            });
        }
        extra += 1;
        t1s = t2s;
        f1s = f2s;
        d1s = d2s;
    }
}

/// Projects the final window of `traj` onto the beat harmonics k = 0, ±1, ±2.
pub fn extract_harmonics(traj: &Trajectory, delta_p: f64) -> Result<HarmonicExtract> {
    if traj.drift > DRIFT_TOL {
        return Err(Error::NonPeriodic { drift: traj.drift });
    }
    let n_win = traj.periods_per_window * traj.samples_per_period;
    let start = traj.field.len() - n_win;
    let times = &traj.times[start..];
    let field = &traj.field[start..];
    let c = window_coeffs(times, field, delta_p);
    // c[k+2] is the coefficient of e^{-ik Δp t}.
    let extract = HarmonicExtract {
        a2_minus: c[0],
        a1_minus: c[1],
        c0: c[2],
        a1_plus: c[3],
        a2_plus: c[4],
        residual_fraction: {
            let mut res = 0.0;
            let mut tot = 0.0;
            for (t, a) in times.iter().zip(field) {
                let mut model = C64::new(0.0, 0.0);
                for (idx, k) in (-2i32..=2).enumerate() {
                    model += c[idx] * C64::from_polar(1.0, -(k as f64) * delta_p * t);
                }
                res += (a - model).norm_sqr();
                tot += a.norm_sqr();
            }
            if tot > 0.0 {
                res / tot
            } else {
                0.0
            }
        },
    };
    Ok(extract)
}

/// One grid point of the frequency-domain vs time-domain comparison.
#[derive(Debug, Clone, Serialize)]
pub struct PointComparison {
    pub pump_mode: String,
    pub opa_gain_over_kappa: f64,
    pub omega_spin: f64,
    pub delta_p_over_omega_m: f64,
    pub eta1_solver: f64,
    pub eta1_extracted: f64,
    pub rel_error: f64,
}

/// Variant-arbitration verdicts from the time-domain integrator.
#[derive(Debug, Clone, Serialize)]
pub struct ArbitrationReport {
    /// Relative |A₂⁺| error of the response-frequency χ convention.
    pub chi_response_frequency_err: f64,
    /// Relative |A₂⁺| error of the probe-pinned quadratic variant.
    pub chi_probe_quadratic_err: f64,
    pub chi_verdict: String,
    /// Static-pump steady amplitude: drive-normalized closed form vs the
    /// long-time limit of the integration.
    pub static_pump_steady_err: f64,
    pub static_pump_verdict: String,
    /// Plain steady state vs the probe-off long-time limit.
    pub plain_steady_err: f64,
}

/// Runs the variant arbitration at the default operating point.
///
/// The χ comparison runs at a quarter of the default probe power: the
/// perturbative truncation bias then sits near 1%, far below the ~30–50%
/// by which the two conventions differ around the mechanical resonance,
/// so the verdict is unambiguous. Both second-order lines enter the score.
pub fn arbitrate_variants(p_base: &PhysParams) -> Result<ArbitrationReport> {
    let mut p = p_base.clone();
    p.opa_gain = 0.0;
    p.omega_spin = 0.0;
    let d = derive(&p)?;

    // Probe-off long-time limit against the plain fixed point.
    let steady = steadystate::solve_steady_plain(&d, &p)?;
    let traj = integrate(
        &p,
        &d,
        PumpMode::SumFreq,
        DriveControls {
            delta_p: p.omega_m,
            probe_on: false,
        },
        OracleOptions::default(),
    )?;
    let tail = *traj.field.last().unwrap();
    let plain_steady_err = (tail - steady.a_s).norm() / steady.a_s.norm();

    let mut p_weak = p.clone();
    p_weak.p_probe = p.p_probe / 4.0;
    let d_weak = derive(&p_weak)?;
    let steady_weak = steadystate::solve_steady_plain(&d_weak, &p_weak)?;
    let mut err_rf = 0.0;
    let mut err_pq = 0.0;
    for frac in [0.997, 0.9995, 1.0] {
        let delta_p = frac * p_weak.omega_m;
        let traj = integrate(
            &p_weak,
            &d_weak,
            PumpMode::SumFreq,
            DriveControls {
                delta_p,
                probe_on: true,
            },
            OracleOptions::default(),
        )?;
        let ext = extract_harmonics(&traj, delta_p)?;
        let score = |conv: ChiConvention| -> Result<f64> {
            let f =
                sidebands::solve_first_order_with(&steady_weak, delta_p, &p_weak, &d_weak, conv)?;
            let s = sidebands::solve_second_order_with(
                &steady_weak,
                &f,
                delta_p,
                &p_weak,
                &d_weak,
                conv,
            )?;
            Ok(
                (s.a2_plus.norm() - ext.a2_plus.norm()).abs() / ext.a2_plus.norm()
                    + (s.a2_minus.norm() - ext.a2_minus.norm()).abs() / ext.a2_minus.norm(),
            )
        };
        err_rf += score(ChiConvention::ResponseFrequency)?;
        err_pq += score(ChiConvention::ProbeQuadratic)?;
    }
    let chi_response_frequency_err = err_rf / 6.0;
    let chi_probe_quadratic_err = err_pq / 6.0;

    // Static-pump steady amplitude with the drive factor restored.
    let mut p2 = p_base.clone();
    p2.pump_mode = PumpMode::DoubleControl;
    p2.omega_spin = 0.0;
    let d2a = derive(&p2)?;
    p2.opa_gain = 0.2 * d2a.kappa;
    let d2 = derive(&p2)?;
    let steady2 = steadystate::solve_steady_2wl(&d2, &p2)?;
    let traj2 = integrate(
        &p2,
        &d2,
        PumpMode::DoubleControl,
        DriveControls {
            delta_p: p2.omega_m,
            probe_on: false,
        },
        OracleOptions::default(),
    )?;
    let tail2 = *traj2.field.last().unwrap();
    let static_pump_steady_err = (tail2 - steady2.a_s).norm() / steady2.a_s.norm();

    Ok(ArbitrationReport {
        chi_response_frequency_err,
        chi_probe_quadratic_err,
        chi_verdict: if chi_response_frequency_err < chi_probe_quadratic_err {
            "response-frequency quadratic term matches the time domain".into()
        } else {
            "probe-pinned quadratic term matches the time domain".into()
        },
        static_pump_steady_err,
        static_pump_verdict: if static_pump_steady_err < 1e-6 {
            "drive-normalized static-pump steady amplitude confirmed".into()
        } else {
            format!("static-pump steady amplitude off by {static_pump_steady_err:.2e}")
        },
        plain_steady_err,
    })
}

/// Full comparison report: arbitration plus a per-point solver-vs-extraction
/// table over the equivalence grid.
#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub arbitration: ArbitrationReport,
    pub grid: Vec<PointComparison>,
}

/// Grid configurations used by the equivalence check: both pump schemes,
/// OPA off and at 0.2κ, spin −20/0/+20 kHz.
pub fn equivalence_configs(kappa: f64) -> Vec<(PumpMode, f64, f64)> {
    let mut out = Vec::new();
    for pump in [PumpMode::SumFreq, PumpMode::DoubleControl] {
        for g in [0.0, 0.2 * kappa] {
            for spin in [-2e4, 0.0, 2e4] {
                out.push((pump, g, spin));
            }
        }
    }
    out
}

/// Solver vs extraction over `points` detunings in [0.98, 1.02] ω_m for one
/// configuration.
pub fn compare_config(
    p_base: &PhysParams,
    pump: PumpMode,
    opa_gain: f64,
    omega_spin: f64,
    points: usize,
) -> Result<Vec<PointComparison>> {
    let mut p = p_base.clone();
    p.pump_mode = pump;
    p.opa_gain = opa_gain;
    p.omega_spin = omega_spin;
    let d = derive(&p)?;
    let steady = steadystate::solve_steady(&d, &p, SteadyOptions::default())?;
    let grid: Vec<f64> = (0..points)
        .map(|i| p.omega_m * (0.98 + 0.04 * i as f64 / (points - 1) as f64))
        .collect();

    let eval_point = |&dp: &f64| -> Result<PointComparison> {
        let sol = sidebands::solve_sidebands(&steady, dp, &p, &d, ChiConvention::default())?;
        let eps_p = d.eps_p(dp);
        let eta_solver = (p.kappa_ex.sqrt() * sol.a2_plus / eps_p).norm();
        let traj = integrate(
            &p,
            &d,
            pump,
            DriveControls {
                delta_p: dp,
                probe_on: true,
            },
            OracleOptions::default(),
        )?;
        let ext = extract_harmonics(&traj, dp)?;
        let eta_ext = (p.kappa_ex.sqrt() * ext.a2_plus / eps_p).norm();
        Ok(PointComparison {
            pump_mode: format!("{:?}", pump),
            opa_gain_over_kappa: opa_gain / d.kappa,
            omega_spin,
            delta_p_over_omega_m: dp / p.omega_m,
            eta1_solver: eta_solver,
            eta1_extracted: eta_ext,
            rel_error: (eta_ext - eta_solver).abs() / eta_solver.max(1e-300),
        })
    };

    #[cfg(feature = "parallel")]
    {
        grid.par_iter().map(eval_point).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        grid.iter().map(eval_point).collect()
    }
}

/// Builds the full report used by the `oracle` command.
pub fn oracle_report(p_base: &PhysParams, points: usize) -> Result<OracleReport> {
    let d = derive(p_base)?;
    let arbitration = arbitrate_variants(p_base)?;
    let mut grid = Vec::new();
    for (pump, g, spin) in equivalence_configs(d.kappa) {
        grid.extend(compare_config(p_base, pump, g, spin, points)?);
    }
    Ok(OracleReport { arbitration, grid })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::PhysParams;

    #[test]
    fn integrator_reproduces_harmonic_oscillator() {
        // Clean mechanical oscillation with the optics switched off: the
        // integrator must track x(t) = cos(ω_m t) over many periods.
        let p = PhysParams::default_profile();
        let omega = p.omega_m;
        let rhs = |_t: f64, y: &State| -> State { [0.0, 0.0, y[3], -omega * omega * y[2]] };
        let mut stepper = Stepper {
            rhs: &rhs,
            rtol: 1e-12,
            atol: [1e-14, 1e-14, 1e-14, 1e-6],
            h: 1e-10,
            stats: IntegrationStats::default(),
            blowup_bound: f64::INFINITY,
        };
        let mut t = 0.0;
        let mut y: State = [0.0, 0.0, 1.0, 0.0];
        let t_end = 200.0 * std::f64::consts::PI / omega; // 100 periods
        stepper.advance_to(&mut t, &mut y, t_end).unwrap();
        assert!((y[2] - (omega * t_end).cos()).abs() < 1e-8, "x = {}", y[2]);
        assert!((y[3] + omega * (omega * t_end).sin()).abs() < 1e-8 * omega);
    }

    #[test]
    fn extraction_recovers_synthetic_tones() {
        let p = PhysParams::default_profile();
        let dp = 0.997 * p.omega_m;
        let n_per = 64;
        let n = 32 * n_per * 2;
        let tb = 2.0 * std::f64::consts::PI / dp;
        let times: Vec<f64> = (0..n).map(|j| j as f64 * tb / n_per as f64).collect();
        let field: Vec<C64> = times
            .iter()
            .map(|&t| C64::new(1.0, 0.0) + 0.1 * C64::from_polar(1.0, -dp * t))
            .collect();
        let traj = Trajectory {
            delta_p: dp,
            times,
            displacement: vec![0.0; n],
            field,
            samples_per_period: n_per,
            periods_per_window: 32,
            drift: 0.0,
            stats: IntegrationStats::default(),
        };
        let ext = extract_harmonics(&traj, dp).unwrap();
        assert!((ext.c0 - C64::new(1.0, 0.0)).norm() < 1e-12);
        assert!((ext.a1_plus - C64::new(0.1, 0.0)).norm() < 1e-12);
        assert!(ext.a2_plus.norm() < 1e-12);
        assert!(ext.residual_fraction < 1e-24);
    }

    #[test]
    fn nonperiodic_trajectories_are_rejected() {
        let p = PhysParams::default_profile();
        let traj = Trajectory {
            delta_p: p.omega_m,
            times: vec![0.0],
            field: vec![C64::new(1.0, 0.0)],
            displacement: vec![0.0],
            samples_per_period: 1,
            periods_per_window: 1,
            drift: 1e-3,
            stats: IntegrationStats::default(),
        };
        match extract_harmonics(&traj, p.omega_m) {
            Err(Error::NonPeriodic { .. }) => {}
            other => panic!("expected NonPeriodic, got {other:?}"),
        }
    }

    #[test]
    fn probe_off_attractor_matches_fixed_point() {
        let p = PhysParams::default_profile();
        let d = derive(&p).unwrap();
        let steady = steadystate::solve_steady_plain(&d, &p).unwrap();
        let traj = integrate(
            &p,
            &d,
            PumpMode::SumFreq,
            DriveControls {
                delta_p: p.omega_m,
                probe_on: false,
            },
            OracleOptions::default(),
        )
        .unwrap();
        let tail = *traj.field.last().unwrap();
        assert!(
            (tail - steady.a_s).norm() <= 1e-6 * steady.a_s.norm(),
            "{tail} vs {}",
            steady.a_s
        );
    }

    #[test]
    fn gain_above_threshold_blows_up() {
        let mut p = PhysParams::default_profile();
        p.pump_mode = PumpMode::DoubleControl;
        p.delta_0 = 0.0; // resonant drive, threshold at 2G = κ
                         // A heavy oscillator keeps the spring shift from detuning the
                         // parametric resonance and saturating the growth.
        p.mass = 1.0;
        let d = derive(&p).unwrap();
        p.opa_gain = 2.0 * d.kappa;
        let d = derive(&p).unwrap();
        let res = integrate(
            &p,
            &d,
            PumpMode::DoubleControl,
            DriveControls {
                delta_p: p.omega_m,
                probe_on: false,
            },
            OracleOptions {
                settle_lifetimes: 5.0,
                ..Default::default()
            },
        );
        match res {
            Err(Error::BlowUp { .. }) => {}
            other => panic!("expected BlowUp, got {:?}", other.map(|t| t.stats)),
        }
    }

    #[test]
    fn extracted_second_order_tracks_solver() {
        // Core equivalence at one detuning; the gap is the perturbative
        // truncation at the default probe power, pinned by measurement.
        let p = PhysParams::default_profile();
        let d = derive(&p).unwrap();
        let dp = 0.997 * p.omega_m;
        let steady = steadystate::solve_steady_plain(&d, &p).unwrap();
        let f = sidebands::solve_first_order(&steady, dp, &p, &d).unwrap();
        let s = sidebands::solve_second_order(&steady, &f, dp, &p, &d).unwrap();
        let traj = integrate(
            &p,
            &d,
            PumpMode::SumFreq,
            DriveControls {
                delta_p: dp,
                probe_on: true,
            },
            OracleOptions::default(),
        )
        .unwrap();
        let ext = extract_harmonics(&traj, dp).unwrap();
        let rel = (ext.a2_plus.norm() - s.a2_plus.norm()).abs() / s.a2_plus.norm();
        // Scalar reference for this point: extraction 8.55e-2 vs solver
        // 9.12e-2 efficiency, i.e. ~6.2% truncation gap.
        assert!(rel < 0.08, "relative gap {rel}");
        assert!(rel > 0.03, "gap suspiciously small: {rel}");
        assert!(ext.residual_fraction < 1e-4);
    }

    #[test]
    fn arbitration_favors_response_frequency_quadratic() {
        let rep = arbitrate_variants(&PhysParams::default_profile()).unwrap();
        assert!(rep.chi_response_frequency_err < 0.05, "{rep:?}");
        assert!(
            rep.chi_probe_quadratic_err > 3.0 * rep.chi_response_frequency_err,
            "{rep:?}"
        );
        assert!(rep.static_pump_steady_err < 1e-6);
        assert!(rep.plain_steady_err < 1e-6);
        assert!(rep.chi_verdict.contains("response-frequency"));
    }

    #[test]
    fn truncation_gap_shrinks_with_probe_power() {
        let p_full = PhysParams::default_profile();
        let gap = |p: &PhysParams| -> f64 {
            let d = derive(p).unwrap();
            let dp = 0.9954 * p.omega_m;
            let steady = steadystate::solve_steady_plain(&d, p).unwrap();
            let f = sidebands::solve_first_order(&steady, dp, p, &d).unwrap();
            let s = sidebands::solve_second_order(&steady, &f, dp, p, &d).unwrap();
            let traj = integrate(
                p,
                &d,
                PumpMode::SumFreq,
                DriveControls {
                    delta_p: dp,
                    probe_on: true,
                },
                OracleOptions::default(),
            )
            .unwrap();
            let ext = extract_harmonics(&traj, dp).unwrap();
            (ext.a2_plus.norm() - s.a2_plus.norm()).abs() / s.a2_plus.norm()
        };
        let g_full = gap(&p_full);
        let mut p_quarter = p_full.clone();
        p_quarter.p_probe = p_full.p_probe / 4.0;
        let g_quarter = gap(&p_quarter);
        assert!(
            g_quarter < 0.5 * g_full,
            "truncation gap did not shrink: {g_full} -> {g_quarter}"
        );
    }

    #[test]
    fn tightened_tolerance_is_consistent() {
        let p = PhysParams::default_profile();
        let d = derive(&p).unwrap();
        let dp = 0.997 * p.omega_m;
        let run = |rtol: f64| {
            let traj = integrate(
                &p,
                &d,
                PumpMode::SumFreq,
                DriveControls {
                    delta_p: dp,
                    probe_on: true,
                },
                OracleOptions {
                    rtol,
                    ..Default::default()
                },
            )
            .unwrap();
            extract_harmonics(&traj, dp).unwrap()
        };
        let a = run(1e-10);
        let b = run(5e-11);
        let rel = (a.a2_plus - b.a2_plus).norm() / b.a2_plus.norm();
        assert!(rel < 1e-4, "integrator not converged: {rel}");
    }
}
