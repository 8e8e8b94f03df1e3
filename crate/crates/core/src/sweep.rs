//! Parameter-sweep engine and figure presets.
//!
//! A sweep evaluates the solver pipeline over a 1- or 2-axis grid and emits
//! one [`SpectrumRecord`] per point in row-major order. Per-point solver
//! failures land in the record's `error` column and never abort the sweep;
//! malformed specs abort before any computation. Output is byte-identical
//! for identical inputs regardless of the worker count.

use serde::Serialize;

use crate::error::Error;
use crate::model::{derive, Bath, PhysParams, PumpMode};
use crate::observables;
use crate::sidebands::{self, ChiConvention};
use crate::steadystate::{solve_steady, NmSteadyForm, OperatingPoint, SteadyOptions};
use crate::Result;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Solver conventions carried through a sweep.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct Conventions {
    pub operating_point: OperatingPoint,
    pub chi: ChiConvention,
    pub nm_form: NmSteadyForm,
}

impl Conventions {
    pub fn steady_options(&self) -> SteadyOptions {
        SteadyOptions {
            operating_point: self.operating_point,
            nm_form: self.nm_form,
        }
    }

    /// Conventions under which the bundled figure presets were produced:
    /// pinned detuning, response-frequency mechanical quadratic.
    pub fn figure() -> Self {
        Conventions {
            operating_point: OperatingPoint::PinnedDetuning,
            chi: ChiConvention::ResponseFrequency,
            nm_form: NmSteadyForm::Literal,
        }
    }
}

/// Parameter swept along an axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepParam {
    DeltaP,
    OmegaSpin,
    OpaGain,
    OpaPhase,
    PControl,
    PProbe,
    Delta0,
    Lambda1,
    Mu,
}

impl SweepParam {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "delta_p" | "delta-p" => SweepParam::DeltaP,
            "omega_spin" | "omega-spin" => SweepParam::OmegaSpin,
            "opa_gain" | "opa-gain" => SweepParam::OpaGain,
            "opa_phase" | "opa-phase" => SweepParam::OpaPhase,
            "p_control" | "p-control" => SweepParam::PControl,
            "p_probe" | "p-probe" => SweepParam::PProbe,
            "delta_0" | "delta-0" => SweepParam::Delta0,
            "lambda1" => SweepParam::Lambda1,
            "mu" => SweepParam::Mu,
            other => {
                return Err(Error::InvalidSweep(format!(
                    "unknown axis parameter `{other}`"
                )))
            }
        })
    }

    fn apply(&self, p: &mut PhysParams, delta_p: &mut f64, v: f64) -> Result<()> {
        match self {
            SweepParam::DeltaP => *delta_p = v,
            SweepParam::OmegaSpin => p.omega_spin = v,
            SweepParam::OpaGain => p.opa_gain = v,
            SweepParam::OpaPhase => p.opa_phase = v,
            SweepParam::PControl => p.p_control = v,
            SweepParam::PProbe => p.p_probe = v,
            SweepParam::Delta0 => p.delta_0 = v,
            SweepParam::Lambda1 => match &mut p.bath {
                Bath::NonMarkovian { lambda1, .. } => *lambda1 = v,
                Bath::Markovian => {
                    return Err(Error::InvalidSweep(
                        "lambda1 axis requires a non-Markovian bath".into(),
                    ))
                }
            },
            SweepParam::Mu => match &mut p.bath {
                Bath::NonMarkovian { mu, .. } => *mu = v,
                Bath::Markovian => {
                    return Err(Error::InvalidSweep(
                        "mu axis requires a non-Markovian bath".into(),
                    ))
                }
            },
        }
        Ok(())
    }
}

/// One linear sweep axis, inclusive endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Axis {
    pub param: SweepParam,
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Axis {
    fn value(&self, i: usize) -> f64 {
        if self.count <= 1 {
            self.min
        } else {
            self.min + (self.max - self.min) * i as f64 / (self.count - 1) as f64
        }
    }
}

/// Observables evaluated per grid point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Observable {
    Eta1,
    Eta2,
    Tau1,
    OutputSpectrum,
    Steady,
}

impl Observable {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "eta1" => Observable::Eta1,
            "eta2" => Observable::Eta2,
            "tau1" => Observable::Tau1,
            "output_spectrum" | "output-spectrum" => Observable::OutputSpectrum,
            "steady" => Observable::Steady,
            other => return Err(Error::InvalidSweep(format!("unknown observable `{other}`"))),
        })
    }
}

/// Full sweep description.
#[derive(Debug, Clone, Serialize)]
pub struct SweepSpec {
    /// One or two axes; records are emitted with the first axis outermost.
    pub axes: Vec<Axis>,
    pub observables: Vec<Observable>,
    /// Probe detuning used when `DeltaP` is not an axis; defaults to ω_m.
    pub probe_detuning: Option<f64>,
    pub conventions: Conventions,
}

impl SweepSpec {
    fn validate(&self) -> Result<()> {
        if self.axes.is_empty() || self.axes.len() > 2 {
            return Err(Error::InvalidSweep(format!(
                "need 1 or 2 axes, got {}",
                self.axes.len()
            )));
        }
        for ax in &self.axes {
            if ax.count == 0 {
                return Err(Error::InvalidSweep("axis count must be at least 1".into()));
            }
            if !ax.min.is_finite() || !ax.max.is_finite() {
                return Err(Error::InvalidSweep("axis endpoints must be finite".into()));
            }
        }
        if self.observables.is_empty() {
            return Err(Error::InvalidSweep("no observables requested".into()));
        }
        Ok(())
    }
}

/// One output row.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumRecord {
    pub delta_p: Option<f64>,
    pub eta1: Option<f64>,
    pub eta2: Option<f64>,
    pub tau1: Option<f64>,
    pub probe_transmission: Option<f64>,
    pub out_c1_re: Option<f64>,
    pub out_c1_im: Option<f64>,
    pub out_c2_re: Option<f64>,
    pub out_c2_im: Option<f64>,
    pub out_stokes_re: Option<f64>,
    pub out_stokes_im: Option<f64>,
    pub out_up2_re: Option<f64>,
    pub out_up2_im: Option<f64>,
    pub out_low2_re: Option<f64>,
    pub out_low2_im: Option<f64>,
    pub a_s_re: Option<f64>,
    pub a_s_im: Option<f64>,
    pub x_s: Option<f64>,
    pub delta_eff: Option<f64>,
    pub residual: Option<f64>,
    pub iterations: Option<u64>,
    pub regime: String,
    pub error: Option<String>,
    // Parameter echo for provenance.
    pub n: f64,
    pub radius: f64,
    pub mass: f64,
    pub lambda_vac: f64,
    pub dn_dlambda: f64,
    pub omega_m: f64,
    pub gamma_m: f64,
    pub q_factor: f64,
    pub kappa_a: f64,
    pub kappa_ex: f64,
    pub p_control: f64,
    pub p_probe: f64,
    pub delta_0: f64,
    pub omega_spin: f64,
    pub opa_gain: f64,
    pub opa_phase: f64,
    pub pump_mode: String,
    pub bath: String,
    pub lambda1: Option<f64>,
    pub mu: Option<f64>,
    pub operating_point: String,
    pub chi_convention: String,
}

const CSV_COLUMNS: &[&str] = &[
    "delta_p",
    "eta1",
    "eta2",
    "tau1",
    "probe_transmission",
    "out_c1_re",
    "out_c1_im",
    "out_c2_re",
    "out_c2_im",
    "out_stokes_re",
    "out_stokes_im",
    "out_up2_re",
    "out_up2_im",
    "out_low2_re",
    "out_low2_im",
    "a_s_re",
    "a_s_im",
    "x_s",
    "delta_eff",
    "residual",
    "iterations",
    "regime",
    "error",
    "n",
    "radius",
    "mass",
    "lambda_vac",
    "dn_dlambda",
    "omega_m",
    "gamma_m",
    "q_factor",
    "kappa_a",
    "kappa_ex",
    "p_control",
    "p_probe",
    "delta_0",
    "omega_spin",
    "opa_gain",
    "opa_phase",
    "pump_mode",
    "bath",
    "lambda1",
    "mu",
    "operating_point",
    "chi_convention",
];

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x}")).unwrap_or_default()
}

fn csv_escape(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// CSV header row matching [`SpectrumRecord::csv_row`].
pub fn csv_header() -> String {
    CSV_COLUMNS.join(",")
}

impl SpectrumRecord {
    /// One CSV line; floats use shortest round-trip formatting so identical
    /// inputs give byte-identical output.
    pub fn csv_row(&self) -> String {
        let cells: Vec<String> = vec![
            fmt_opt(self.delta_p),
            fmt_opt(self.eta1),
            fmt_opt(self.eta2),
            fmt_opt(self.tau1),
            fmt_opt(self.probe_transmission),
            fmt_opt(self.out_c1_re),
            fmt_opt(self.out_c1_im),
            fmt_opt(self.out_c2_re),
            fmt_opt(self.out_c2_im),
            fmt_opt(self.out_stokes_re),
            fmt_opt(self.out_stokes_im),
            fmt_opt(self.out_up2_re),
            fmt_opt(self.out_up2_im),
            fmt_opt(self.out_low2_re),
            fmt_opt(self.out_low2_im),
            fmt_opt(self.a_s_re),
            fmt_opt(self.a_s_im),
            fmt_opt(self.x_s),
            fmt_opt(self.delta_eff),
            fmt_opt(self.residual),
            self.iterations.map(|v| v.to_string()).unwrap_or_default(),
            csv_escape(&self.regime),
            csv_escape(self.error.as_deref().unwrap_or("")),
            format!("{}", self.n),
            format!("{}", self.radius),
            format!("{}", self.mass),
            format!("{}", self.lambda_vac),
            format!("{}", self.dn_dlambda),
            format!("{}", self.omega_m),
            format!("{}", self.gamma_m),
            format!("{}", self.q_factor),
            format!("{}", self.kappa_a),
            format!("{}", self.kappa_ex),
            format!("{}", self.p_control),
            format!("{}", self.p_probe),
            format!("{}", self.delta_0),
            format!("{}", self.omega_spin),
            format!("{}", self.opa_gain),
            format!("{}", self.opa_phase),
            csv_escape(&self.pump_mode),
            csv_escape(&self.bath),
            fmt_opt(self.lambda1),
            fmt_opt(self.mu),
            csv_escape(&self.operating_point),
            csv_escape(&self.chi_convention),
        ];
        cells.join(",")
    }
}

/// Evaluates all requested observables at a single parameter point.
pub fn evaluate_point(
    p: &PhysParams,
    delta_p: f64,
    observables_req: &[Observable],
    conv: Conventions,
) -> SpectrumRecord {
    let (lambda1, mu) = match p.bath {
        Bath::NonMarkovian { lambda1, mu } => (Some(lambda1), Some(mu)),
        Bath::Markovian => (None, None),
    };
    let mut rec = SpectrumRecord {
        delta_p: Some(delta_p),
        eta1: None,
        eta2: None,
        tau1: None,
        probe_transmission: None,
        out_c1_re: None,
        out_c1_im: None,
        out_c2_re: None,
        out_c2_im: None,
        out_stokes_re: None,
        out_stokes_im: None,
        out_up2_re: None,
        out_up2_im: None,
        out_low2_re: None,
        out_low2_im: None,
        a_s_re: None,
        a_s_im: None,
        x_s: None,
        delta_eff: None,
        residual: None,
        iterations: None,
        regime: String::new(),
        error: None,
        n: p.n,
        radius: p.radius,
        mass: p.mass,
        lambda_vac: p.lambda_vac,
        dn_dlambda: p.dn_dlambda,
        omega_m: p.omega_m,
        gamma_m: p.gamma_m,
        q_factor: p.q_factor,
        kappa_a: p.kappa_a,
        kappa_ex: p.kappa_ex,
        p_control: p.p_control,
        p_probe: p.p_probe,
        delta_0: p.delta_0,
        omega_spin: p.omega_spin,
        opa_gain: p.opa_gain,
        opa_phase: p.opa_phase,
        pump_mode: format!("{:?}", p.pump_mode),
        bath: if p.bath.is_markovian() {
            "markovian".into()
        } else {
            "non-markovian".into()
        },
        lambda1,
        mu,
        operating_point: format!("{:?}", conv.operating_point),
        chi_convention: format!("{:?}", conv.chi),
    };

    let mut run = || -> Result<()> {
        let d = derive(p)?;
        let steady = solve_steady(&d, p, conv.steady_options())?;
        rec.regime = format!("{:?}", steady.regime);
        rec.a_s_re = Some(steady.a_s.re);
        rec.a_s_im = Some(steady.a_s.im);
        rec.x_s = Some(steady.x_s);
        rec.delta_eff = Some(steady.delta_eff);
        rec.residual = Some(steady.residual);
        rec.iterations = Some(steady.iterations as u64);

        let needs_sidebands = observables_req.iter().any(|o| {
            matches!(
                o,
                Observable::Eta1 | Observable::Eta2 | Observable::OutputSpectrum
            )
        });
        if needs_sidebands {
            let sol = sidebands::solve_sidebands(&steady, delta_p, p, &d, conv.chi)?;
            let wants_eta = observables_req
                .iter()
                .any(|o| matches!(o, Observable::Eta1 | Observable::Eta2));
            if wants_eta {
                match observables::efficiencies(&sol, p, &d) {
                    Ok(e) => {
                        rec.eta1 = Some(e.eta1);
                        rec.eta2 = e.eta2;
                    }
                    // A dark homogeneous point (no probe, no drive at the
                    // sideband) has a well-defined zero-efficiency limit.
                    Err(Error::UndefinedEfficiency)
                        if sol.a2_plus.norm() == 0.0 && sol.a2_minus.norm() == 0.0 =>
                    {
                        rec.eta1 = Some(0.0);
                        rec.eta2 = if matches!(
                            steady.regime,
                            crate::steadystate::SteadyRegime::NonMarkovian
                        ) {
                            None
                        } else {
                            Some(0.0)
                        };
                    }
                    Err(e) => return Err(e),
                }
            }
            if observables_req.contains(&Observable::OutputSpectrum)
                && steady.regime != crate::steadystate::SteadyRegime::NonMarkovian
            {
                let out = observables::output_spectrum(&sol, &steady, p, &d);
                let eps_p = d.eps_p(delta_p);
                if eps_p > 0.0 {
                    rec.probe_transmission = Some(out.probe_transmission(eps_p));
                }
                rec.out_c1_re = Some(out.c1.re);
                rec.out_c1_im = Some(out.c1.im);
                rec.out_c2_re = Some(out.c2.re);
                rec.out_c2_im = Some(out.c2.im);
                rec.out_stokes_re = Some(out.stokes.re);
                rec.out_stokes_im = Some(out.stokes.im);
                rec.out_up2_re = Some(out.up2.re);
                rec.out_up2_im = Some(out.up2.im);
                rec.out_low2_re = Some(out.low2.re);
                rec.out_low2_im = Some(out.low2.im);
            }
        }
        if observables_req.contains(&Observable::Tau1) {
            let gd = observables::group_delay(p, &d, conv.steady_options(), conv.chi)?;
            rec.tau1 = Some(gd.tau1);
        }
        Ok(())
    };

    if let Err(e) = run() {
        rec.error = Some(e.to_string());
    }
    rec
}

/// Runs a sweep; records come back in row-major grid order.
pub fn run_sweep(spec: &SweepSpec, params: &PhysParams) -> Result<Vec<SpectrumRecord>> {
    run_sweep_with_workers(spec, params, None)
}

/// Like [`run_sweep`] with an explicit worker count (1 forces the
/// sequential path). Without the `parallel` feature every count is
/// sequential. The `SPINRES_WORKERS` environment variable supplies a
/// default when `workers` is `None`.
pub fn run_sweep_with_workers(
    spec: &SweepSpec,
    params: &PhysParams,
    workers: Option<usize>,
) -> Result<Vec<SpectrumRecord>> {
    spec.validate()?;
    derive(params)?; // reject bad base parameters before any computation
    let default_dp = spec.probe_detuning.unwrap_or(params.omega_m);

    let (n1, n2) = match spec.axes.len() {
        1 => (spec.axes[0].count, 1),
        _ => (spec.axes[0].count, spec.axes[1].count),
    };
    let total = n1 * n2;

    let compute = |idx: usize| -> SpectrumRecord {
        let (i, j) = (idx / n2, idx % n2);
        let mut p = params.clone();
        let mut delta_p = default_dp;
        let mut apply_err: Option<Error> = None;
        if let Err(e) = spec.axes[0]
            .param
            .apply(&mut p, &mut delta_p, spec.axes[0].value(i))
        {
            apply_err = Some(e);
        }
        if spec.axes.len() == 2 {
            if let Err(e) = spec.axes[1]
                .param
                .apply(&mut p, &mut delta_p, spec.axes[1].value(j))
            {
                apply_err = Some(e);
            }
        }
        let mut rec = evaluate_point(&p, delta_p, &spec.observables, spec.conventions);
        if let Some(e) = apply_err {
            rec.error = Some(e.to_string());
        }
        rec
    };

    // Axis/bath mismatches are configuration errors: abort before computing.
    for ax in &spec.axes {
        if matches!(ax.param, SweepParam::Lambda1 | SweepParam::Mu) && params.bath.is_markovian() {
            return Err(Error::InvalidSweep(format!(
                "{:?} axis requires a non-Markovian bath",
                ax.param
            )));
        }
    }

    let workers = workers.or_else(|| {
        std::env::var("SPINRES_WORKERS")
            .ok()
            .and_then(|v| v.parse::<usize>().ok())
    });

    #[cfg(feature = "parallel")]
    {
        let run_par = || (0..total).into_par_iter().map(compute).collect::<Vec<_>>();
        match workers {
            Some(1) => Ok((0..total).map(compute).collect()),
            Some(w) => Ok(rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build()
                .map_err(|e| Error::InvalidSweep(format!("worker pool: {e}")))?
                .install(run_par)),
            None => Ok(run_par()),
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = workers;
        Ok((0..total).map(compute).collect())
    }
}

/// Writes records as CSV (header plus one line per record).
pub fn write_csv<W: std::io::Write>(mut w: W, records: &[SpectrumRecord]) -> std::io::Result<()> {
    writeln!(w, "{}", csv_header())?;
    for r in records {
        writeln!(w, "{}", r.csv_row())?;
    }
    Ok(())
}

/// A named figure-reproduction preset.
#[derive(Debug, Clone)]
pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    pub params: PhysParams,
    pub spec: SweepSpec,
}

/// All preset names with one-line descriptions.
pub fn preset_list() -> Vec<(&'static str, &'static str)> {
    PRESET_NAMES
        .iter()
        .map(|&n| (n, figure_preset(n).unwrap().description))
        .collect()
}

const PRESET_NAMES: &[&str] = &[
    "fig2a", "fig2b", "fig2c", "fig4a", "fig5", "fig6a", "fig6b", "fig7", "fig9a", "fig9c",
    "fig10", "fig12",
];

/// Builds the sweep for one named figure dataset.
pub fn figure_preset(name: &str) -> Result<Preset> {
    let base = PhysParams::default_profile();
    let d = derive(&base)?;
    let kappa = d.kappa;
    let wm = base.omega_m;
    let probe_axis = |count: usize| Axis {
        param: SweepParam::DeltaP,
        min: 0.98 * wm,
        max: 1.02 * wm,
        count,
    };
    let spin_axis = Axis {
        param: SweepParam::OmegaSpin,
        min: -2e4,
        max: 2e4,
        count: 3,
    };
    let conv = Conventions::figure();
    let eta_obs = vec![Observable::Eta1, Observable::Eta2, Observable::Steady];

    let preset = match name {
        "fig2a" => Preset {
            name: "fig2a",
            description: "sideband efficiencies vs probe detuning, spin -20/0/+20 kHz, OPA off",
            params: base,
            spec: SweepSpec {
                axes: vec![spin_axis, probe_axis(2001)],
                observables: eta_obs,
                probe_detuning: None,
                conventions: conv,
            },
        },
        "fig2b" => {
            let mut p = base;
            p.opa_gain = 0.2 * kappa;
            Preset {
                name: "fig2b",
                description:
                    "efficiencies vs probe detuning, spin -20/0/+20 kHz, gain 0.2κ, phase 0",
                params: p,
                spec: SweepSpec {
                    axes: vec![spin_axis, probe_axis(2001)],
                    observables: eta_obs,
                    probe_detuning: None,
                    conventions: conv,
                },
            }
        }
        "fig2c" => {
            let mut p = base;
            p.opa_gain = 0.2 * kappa;
            p.opa_phase = 1.5 * std::f64::consts::PI;
            Preset {
                name: "fig2c",
                description:
                    "efficiencies vs probe detuning, spin -20/0/+20 kHz, gain 0.2κ, phase 3π/2",
                params: p,
                spec: SweepSpec {
                    axes: vec![spin_axis, probe_axis(2001)],
                    observables: eta_obs,
                    probe_detuning: None,
                    conventions: conv,
                },
            }
        }
        "fig4a" => Preset {
            name: "fig4a",
            description:
                "lower-sideband nonreciprocity: spin -60..+60 kHz in 20 kHz steps, OPA off",
            params: base,
            spec: SweepSpec {
                axes: vec![
                    Axis {
                        param: SweepParam::OmegaSpin,
                        min: -6e4,
                        max: 6e4,
                        count: 7,
                    },
                    probe_axis(2001),
                ],
                observables: eta_obs,
                probe_detuning: None,
                conventions: conv,
            },
        },
        "fig5" => Preset {
            name: "fig5",
            description:
                "efficiency vs OPA gain 0..0.6κ at probe detunings 1.000..1.003 ω_m, no spin",
            params: base,
            spec: SweepSpec {
                axes: vec![
                    Axis {
                        param: SweepParam::DeltaP,
                        min: wm,
                        max: 1.003 * wm,
                        count: 4,
                    },
                    Axis {
                        param: SweepParam::OpaGain,
                        min: 0.0,
                        max: 0.6 * kappa,
                        count: 121,
                    },
                ],
                observables: vec![Observable::Eta1, Observable::Steady],
                probe_detuning: None,
                conventions: conv,
            },
        },
        "fig6a" => Preset {
            name: "fig6a",
            description: "group delay vs control power 0..10 mW, spin -40..+40 kHz, OPA off",
            params: base,
            spec: SweepSpec {
                axes: vec![
                    Axis {
                        param: SweepParam::OmegaSpin,
                        min: -4e4,
                        max: 4e4,
                        count: 5,
                    },
                    Axis {
                        param: SweepParam::PControl,
                        min: 1e-5,
                        max: 10e-3,
                        count: 201,
                    },
                ],
                observables: vec![Observable::Tau1],
                probe_detuning: None,
                conventions: conv,
            },
        },
        "fig6b" => {
            let mut p = base;
            p.opa_gain = 0.4 * kappa;
            Preset {
                name: "fig6b",
                description: "group delay vs control power 0..10 mW, spin -40..+40 kHz, gain 0.4κ",
                params: p,
                spec: SweepSpec {
                    axes: vec![
                        Axis {
                            param: SweepParam::OmegaSpin,
                            min: -4e4,
                            max: 4e4,
                            count: 5,
                        },
                        Axis {
                            param: SweepParam::PControl,
                            min: 1e-5,
                            max: 10e-3,
                            count: 201,
                        },
                    ],
                    observables: vec![Observable::Tau1],
                    probe_detuning: None,
                    conventions: conv,
                },
            }
        }
        "fig7" => {
            let mut p = base;
            p.opa_gain = 0.4 * kappa;
            Preset {
                name: "fig7",
                description: "group delay vs spin rate -150..+150 kHz at 1 mW, gain 0.4κ",
                params: p,
                spec: SweepSpec {
                    axes: vec![Axis {
                        param: SweepParam::OmegaSpin,
                        min: -1.5e5,
                        max: 1.5e5,
                        count: 301,
                    }],
                    observables: vec![Observable::Tau1],
                    probe_detuning: None,
                    conventions: conv,
                },
            }
        }
        "fig9a" => {
            let mut p = base;
            p.pump_mode = PumpMode::DoubleControl;
            Preset {
                name: "fig9a",
                description: "static-pump efficiencies vs probe detuning for gain 0..0.8κ, no spin",
                params: p,
                spec: SweepSpec {
                    axes: vec![
                        Axis {
                            param: SweepParam::OpaGain,
                            min: 0.0,
                            max: 0.8 * kappa,
                            count: 5,
                        },
                        probe_axis(2001),
                    ],
                    observables: eta_obs,
                    probe_detuning: None,
                    conventions: conv,
                },
            }
        }
        "fig9c" => {
            let mut p = base;
            p.pump_mode = PumpMode::DoubleControl;
            p.opa_gain = 0.2 * kappa;
            Preset {
                name: "fig9c",
                description:
                    "static-pump efficiencies vs probe detuning for phases 0..3π/2, gain 0.2κ",
                params: p,
                spec: SweepSpec {
                    axes: vec![
                        Axis {
                            param: SweepParam::OpaPhase,
                            min: 0.0,
                            max: 1.5 * std::f64::consts::PI,
                            count: 4,
                        },
                        probe_axis(2001),
                    ],
                    observables: eta_obs,
                    probe_detuning: None,
                    conventions: conv,
                },
            }
        }
        "fig10" => {
            let mut p = base;
            p.bath = Bath::NonMarkovian {
                lambda1: 2.0 * wm,
                mu: 0.0,
            };
            Preset {
                name: "fig10",
                description: "structured-bath efficiency vs probe detuning for widths 2..10 ω_m",
                params: p,
                spec: SweepSpec {
                    axes: vec![
                        Axis {
                            param: SweepParam::Lambda1,
                            min: 2.0 * wm,
                            max: 10.0 * wm,
                            count: 5,
                        },
                        probe_axis(2001),
                    ],
                    observables: vec![Observable::Eta1, Observable::Steady],
                    probe_detuning: None,
                    conventions: conv,
                },
            }
        }
        "fig12" => {
            let mut p = base;
            p.bath = Bath::NonMarkovian {
                lambda1: 200.0 * wm,
                mu: 0.0,
            };
            Preset {
                name: "fig12",
                description: "wideband-limit check: structured bath at width 200 ω_m, spin -20/0/+20 kHz (compare with fig2a)",
                params: p,
                spec: SweepSpec {
                    axes: vec![spin_axis, probe_axis(2001)],
                    observables: vec![Observable::Eta1, Observable::Steady],
                    probe_detuning: None,
                    conventions: conv,
                },
            }
        }
        other => {
            return Err(Error::UnknownPreset {
                name: other.to_string(),
            })
        }
    };
    Ok(preset)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_spec() -> (SweepSpec, PhysParams) {
        let p = PhysParams::default_profile();
        let spec = SweepSpec {
            axes: vec![Axis {
                param: SweepParam::DeltaP,
                min: 0.98 * p.omega_m,
                max: 1.02 * p.omega_m,
                count: 41,
            }],
            observables: vec![Observable::Eta1, Observable::Eta2, Observable::Steady],
            probe_detuning: None,
            conventions: Conventions::figure(),
        };
        (spec, p)
    }

    #[test]
    fn sweep_is_deterministic_and_worker_independent() {
        let (spec, p) = small_spec();
        let serial = run_sweep_with_workers(&spec, &p, Some(1)).unwrap();
        let parallel = run_sweep_with_workers(&spec, &p, Some(4)).unwrap();
        let again = run_sweep_with_workers(&spec, &p, Some(1)).unwrap();
        let to_csv = |rs: &[SpectrumRecord]| {
            let mut buf = Vec::new();
            write_csv(&mut buf, rs).unwrap();
            buf
        };
        assert_eq!(to_csv(&serial), to_csv(&parallel));
        assert_eq!(to_csv(&serial), to_csv(&again));
    }

    #[test]
    fn dark_point_rows_are_zero() {
        let mut p = PhysParams::default_profile();
        p.p_probe = 0.0;
        p.opa_gain = 0.0;
        let spec = SweepSpec {
            axes: vec![Axis {
                param: SweepParam::DeltaP,
                min: 0.997 * p.omega_m,
                max: 1.003 * p.omega_m,
                count: 2,
            }],
            observables: vec![Observable::Eta1, Observable::Eta2],
            probe_detuning: None,
            conventions: Conventions::default(),
        };
        let rows = run_sweep(&spec, &p).unwrap();
        for r in &rows {
            assert_eq!(r.eta1, Some(0.0));
            assert_eq!(r.eta2, Some(0.0));
            assert!(r.error.is_none());
        }
    }

    #[test]
    fn per_point_errors_do_not_abort() {
        // Gain sweep crossing the parametric threshold: the hot rows carry
        // errors, the cold rows stay intact.
        let mut p = PhysParams::default_profile();
        p.pump_mode = PumpMode::DoubleControl;
        p.delta_0 = 0.0;
        let d = derive(&p).unwrap();
        let spec = SweepSpec {
            axes: vec![Axis {
                param: SweepParam::OpaGain,
                min: 0.0,
                max: 2.0 * d.kappa,
                count: 9,
            }],
            observables: vec![Observable::Steady, Observable::Eta1],
            probe_detuning: Some(p.omega_m),
            conventions: Conventions::figure(),
        };
        let rows = run_sweep(&spec, &p).unwrap();
        assert_eq!(rows.len(), 9);
        let errs = rows.iter().filter(|r| r.error.is_some()).count();
        let ok = rows.iter().filter(|r| r.error.is_none()).count();
        assert!(errs > 0, "expected threshold rows to error");
        assert!(ok > 0, "expected sub-threshold rows to survive");
        for r in rows.iter().filter(|r| r.error.is_none()) {
            assert!(r.eta1.is_some());
        }
    }

    #[test]
    fn config_errors_abort_before_compute() {
        let p = PhysParams::default_profile();
        let spec = SweepSpec {
            axes: vec![],
            observables: vec![Observable::Eta1],
            probe_detuning: None,
            conventions: Conventions::default(),
        };
        assert!(matches!(run_sweep(&spec, &p), Err(Error::InvalidSweep(_))));
        let spec = SweepSpec {
            axes: vec![Axis {
                param: SweepParam::Lambda1,
                min: 1.0,
                max: 2.0,
                count: 3,
            }],
            observables: vec![Observable::Eta1],
            probe_detuning: None,
            conventions: Conventions::default(),
        };
        assert!(matches!(run_sweep(&spec, &p), Err(Error::InvalidSweep(_))));
    }

    #[test]
    fn presets_resolve_and_unknown_names_fail() {
        for (name, _) in preset_list() {
            let preset = figure_preset(name).unwrap();
            assert!(!preset.spec.axes.is_empty());
            assert_eq!(
                preset.spec.conventions.operating_point,
                OperatingPoint::PinnedDetuning
            );
        }
        assert!(matches!(
            figure_preset("fig99"),
            Err(Error::UnknownPreset { .. })
        ));
    }

    #[test]
    fn fig2a_grid_shape() {
        let preset = figure_preset("fig2a").unwrap();
        assert_eq!(preset.spec.axes[0].count, 3);
        assert_eq!(preset.spec.axes[1].count, 2001);
        assert_eq!(preset.spec.axes[1].min, 0.98 * preset.params.omega_m);
        assert_eq!(preset.spec.axes[1].max, 1.02 * preset.params.omega_m);
        assert_eq!(preset.params.opa_gain, 0.0);
    }

    #[test]
    fn csv_escaping_guards_commas() {
        assert_eq!(csv_escape("plain"), "plain");
        assert_eq!(csv_escape("a,b"), "\"a,b\"");
        assert_eq!(csv_escape("say \"hi\""), "\"say \"\"hi\"\"\"");
    }
}
