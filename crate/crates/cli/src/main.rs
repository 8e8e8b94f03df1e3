//! Command-line front end: probe-detuning spectra, general parameter sweeps,
//! group-delay scans, time-domain cross-checks, and the validation suite.

mod config;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use config::FreqValue;
use spinres_core::model::PhysParams;
use spinres_core::oracle;
use spinres_core::sidebands::ChiConvention;
use spinres_core::steadystate::{NmSteadyForm, OperatingPoint};
use spinres_core::sweep::{
    self, figure_preset, preset_list, run_sweep_with_workers, Axis, Conventions, Observable,
    SpectrumRecord, SweepParam, SweepSpec,
};
use spinres_core::validate;

#[derive(Parser)]
#[command(
    name = "spinres",
    version,
    about = "Sideband spectra, group delays, and bath-memory effects of a spinning \
             optomechanical resonator with an intracavity parametric amplifier"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Probe-detuning spectrum (1D sweep over delta_p).
    Spectrum(SpectrumArgs),
    /// General sweep over 1 or 2 parameter axes.
    Sweep(SweepArgs),
    /// Group delay along a chosen axis.
    Delay(DelayArgs),
    /// Time-domain cross-check report (JSON).
    Oracle(OracleArgs),
    /// Run the acceptance suite and emit a JSON report.
    Validate(ValidateArgs),
    /// Figure-dataset presets.
    Preset(PresetArgs),
}

/// Parameter overrides shared by all subcommands. Frequencies accept raw
/// rad/s or the `wm` suffix (multiples of omega_m).
#[derive(Args, Clone, Default)]
struct ParamArgs {
    /// TOML config file; overrides the built-in default profile.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    refractive_index: Option<f64>,
    /// Resonator radius (m).
    #[arg(long)]
    radius: Option<f64>,
    /// Effective mass (kg).
    #[arg(long)]
    mass: Option<f64>,
    /// Vacuum wavelength (m).
    #[arg(long)]
    lambda_vac: Option<f64>,
    /// Dispersion dn/dlambda (1/m).
    #[arg(long)]
    dn_dlambda: Option<f64>,
    /// Mechanical frequency (rad/s).
    #[arg(long)]
    omega_m: Option<f64>,
    /// Mechanical damping (rad/s).
    #[arg(long)]
    gamma_m: Option<f64>,
    #[arg(long)]
    q_factor: Option<f64>,
    /// Intrinsic loss (rad/s).
    #[arg(long)]
    kappa_a: Option<f64>,
    /// External coupling loss (rad/s).
    #[arg(long)]
    kappa_ex: Option<f64>,
    /// Control power (W).
    #[arg(long)]
    p_control: Option<f64>,
    /// Probe power (W).
    #[arg(long)]
    p_probe: Option<f64>,
    /// Control detuning (rad/s or `"<x>wm"`).
    #[arg(long)]
    delta_0: Option<String>,
    /// Spin rate (rad/s or `"<x>wm"`); sign picks the drive direction.
    #[arg(long)]
    omega_spin: Option<String>,
    /// OPA gain (rad/s or `"<x>wm"`).
    #[arg(long)]
    opa_gain: Option<String>,
    /// OPA pump phase (rad).
    #[arg(long)]
    opa_phase: Option<f64>,
    /// Pump scheme: sum-freq | double-control.
    #[arg(long)]
    pump_mode: Option<String>,
    /// Bath: `markovian` or `lambda1=<freq>,mu=<freq>`.
    #[arg(long)]
    bath: Option<String>,
}

impl ParamArgs {
    fn build(&self) -> Result<PhysParams> {
        let mut p = PhysParams::default_profile();
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading config {}", path.display()))?;
            config::apply_file(&mut p, &text)?;
        }
        if let Some(v) = self.omega_m {
            p.omega_m = v;
        }
        if let Some(v) = self.gamma_m {
            p.gamma_m = v;
        }
        if let Some(v) = self.refractive_index {
            p.n = v;
        }
        if let Some(v) = self.radius {
            p.radius = v;
        }
        if let Some(v) = self.mass {
            p.mass = v;
        }
        if let Some(v) = self.lambda_vac {
            p.lambda_vac = v;
            let omega_0 = 2.0 * std::f64::consts::PI * spinres_core::constants::SPEED_OF_LIGHT / v;
            p.kappa_a = omega_0 / p.q_factor;
            p.kappa_ex = omega_0 / p.q_factor;
        }
        if let Some(v) = self.dn_dlambda {
            p.dn_dlambda = v;
        }
        if let Some(v) = self.q_factor {
            p.q_factor = v;
            let omega_0 =
                2.0 * std::f64::consts::PI * spinres_core::constants::SPEED_OF_LIGHT / p.lambda_vac;
            p.kappa_a = omega_0 / v;
            p.kappa_ex = omega_0 / v;
        }
        if let Some(v) = self.kappa_a {
            p.kappa_a = v;
        }
        if let Some(v) = self.kappa_ex {
            p.kappa_ex = v;
        }
        if let Some(v) = self.p_control {
            p.p_control = v;
        }
        if let Some(v) = self.p_probe {
            p.p_probe = v;
        }
        let wm = p.omega_m;
        if let Some(v) = &self.delta_0 {
            p.delta_0 = FreqValue::parse(v)?.resolve(wm)?;
        }
        if let Some(v) = &self.omega_spin {
            p.omega_spin = FreqValue::parse(v)?.resolve(wm)?;
        }
        if let Some(v) = &self.opa_gain {
            p.opa_gain = FreqValue::parse(v)?.resolve(wm)?;
        }
        if let Some(v) = self.opa_phase {
            p.opa_phase = v;
        }
        if let Some(v) = &self.pump_mode {
            p.pump_mode = config::parse_pump_mode(v)?;
        }
        if let Some(v) = &self.bath {
            p.bath = config::parse_bath_flag(v, wm)?;
        }
        p.validate()?;
        Ok(p)
    }
}

#[derive(Args, Clone)]
struct ConventionArgs {
    /// self-consistent | pinned (figure datasets use pinned).
    #[arg(long, default_value = "self-consistent")]
    operating_point: String,
    /// response-frequency | probe-quadratic.
    #[arg(long, default_value = "response-frequency")]
    chi_convention: String,
    /// Structured-bath steady-state form: literal | memory-consistent.
    #[arg(long, default_value = "literal")]
    nm_steady: String,
}

impl ConventionArgs {
    fn build(&self) -> Result<Conventions> {
        let operating_point = match self.operating_point.as_str() {
            "self-consistent" => OperatingPoint::SelfConsistent,
            "pinned" => OperatingPoint::PinnedDetuning,
            other => bail!("unknown operating point `{other}`"),
        };
        let chi = match self.chi_convention.as_str() {
            "response-frequency" => ChiConvention::ResponseFrequency,
            "probe-quadratic" => ChiConvention::ProbeQuadratic,
            other => bail!("unknown chi convention `{other}`"),
        };
        let nm_form = match self.nm_steady.as_str() {
            "literal" => NmSteadyForm::Literal,
            "memory-consistent" => NmSteadyForm::MemoryConsistent,
            other => bail!("unknown structured-bath steady form `{other}`"),
        };
        Ok(Conventions {
            operating_point,
            chi,
            nm_form,
        })
    }
}

#[derive(Args, Clone)]
struct OutputArgs {
    /// csv | jsonl.
    #[arg(long, default_value = "csv")]
    format: String,
    /// Output path; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Worker threads for grid evaluation (SPINRES_WORKERS also works).
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Args)]
struct SpectrumArgs {
    /// Probe grid "min:max:count"; endpoints accept the wm suffix.
    #[arg(long, default_value = "0.98wm:1.02wm:2001")]
    grid: String,
    /// Comma-separated: eta1,eta2,tau1,output-spectrum,steady.
    #[arg(long, default_value = "eta1,eta2,steady")]
    observables: String,
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    conventions: ConventionArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct SweepArgs {
    /// Axis "param:min:max:count"; repeat for a second axis. Params:
    /// delta_p, omega_spin, opa_gain, opa_phase, p_control, p_probe,
    /// delta_0, lambda1, mu.
    #[arg(long = "axis", required = true)]
    axes: Vec<String>,
    #[arg(long, default_value = "eta1,eta2,steady")]
    observables: String,
    /// Probe detuning when delta_p is not an axis (rad/s or `"<x>wm"`).
    #[arg(long)]
    probe_detuning: Option<String>,
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    conventions: ConventionArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct DelayArgs {
    /// Axis "param:min:max:count" the delay is scanned along.
    #[arg(long = "axis", required = true)]
    axes: Vec<String>,
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    conventions: ConventionArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct OracleArgs {
    /// Detunings per configuration in [0.98, 1.02] omega_m.
    #[arg(long, default_value_t = 21)]
    points: usize,
    #[arg(long)]
    output: Option<PathBuf>,
    #[command(flatten)]
    params: ParamArgs,
}

#[derive(Args)]
struct ValidateArgs {
    /// Skip the time-domain equivalence grid (criterion 11).
    #[arg(long)]
    fast: bool,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct PresetArgs {
    #[command(subcommand)]
    action: PresetAction,
}

#[derive(Subcommand)]
enum PresetAction {
    /// List available presets.
    List,
    /// Run one preset and emit its dataset.
    Run {
        name: String,
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
}

fn parse_grid(s: &str, omega_m: f64) -> Result<(f64, f64, usize)> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        bail!("grid must be min:max:count, got `{s}`");
    }
    let min = FreqValue::parse(parts[0])?.resolve(omega_m)?;
    let max = FreqValue::parse(parts[1])?.resolve(omega_m)?;
    let count: usize = parts[2].parse().context("grid count")?;
    Ok((min, max, count))
}

fn parse_axis(s: &str, omega_m: f64) -> Result<Axis> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 4 {
        bail!("axis must be param:min:max:count, got `{s}`");
    }
    let param = SweepParam::parse(parts[0])?;
    let min = FreqValue::parse(parts[1])?.resolve(omega_m)?;
    let max = FreqValue::parse(parts[2])?.resolve(omega_m)?;
    let count: usize = parts[3].parse().context("axis count")?;
    Ok(Axis {
        param,
        min,
        max,
        count,
    })
}

fn parse_observables(s: &str) -> Result<Vec<Observable>> {
    s.split(',')
        .map(|t| Ok(Observable::parse(t.trim())?))
        .collect()
}

fn emit_records(out: &OutputArgs, records: &[SpectrumRecord]) -> Result<()> {
    let mut buf: Vec<u8> = Vec::new();
    match out.format.as_str() {
        "csv" => sweep::write_csv(&mut buf, records)?,
        "jsonl" => {
            for r in records {
                serde_json::to_writer(&mut buf, r)?;
                buf.push(b'\n');
            }
        }
        other => bail!("unknown format `{other}` (expected csv or jsonl)"),
    }
    write_out(out.output.as_deref(), &buf)
}

fn write_out(path: Option<&std::path::Path>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, bytes).with_context(|| format!("writing {}", p.display()))?,
        None => {
            let mut out = std::io::stdout();
            out.write_all(bytes)?;
            if !bytes.ends_with(b"\n") {
                out.write_all(b"\n")?;
            }
        }
    }
    Ok(())
}

fn run_spectrum(args: SpectrumArgs) -> Result<ExitCode> {
    let params = args.params.build()?;
    let (min, max, count) = parse_grid(&args.grid, params.omega_m)?;
    let spec = SweepSpec {
        axes: vec![Axis {
            param: SweepParam::DeltaP,
            min,
            max,
            count,
        }],
        observables: parse_observables(&args.observables)?,
        probe_detuning: None,
        conventions: args.conventions.build()?,
    };
    let records = run_sweep_with_workers(&spec, &params, args.out.workers)?;
    emit_records(&args.out, &records)?;
    Ok(ExitCode::SUCCESS)
}

fn run_general_sweep(args: SweepArgs) -> Result<ExitCode> {
    let params = args.params.build()?;
    let axes = args
        .axes
        .iter()
        .map(|a| parse_axis(a, params.omega_m))
        .collect::<Result<Vec<_>>>()?;
    let probe_detuning = match &args.probe_detuning {
        Some(s) => Some(FreqValue::parse(s)?.resolve(params.omega_m)?),
        None => None,
    };
    let spec = SweepSpec {
        axes,
        observables: parse_observables(&args.observables)?,
        probe_detuning,
        conventions: args.conventions.build()?,
    };
    let records = run_sweep_with_workers(&spec, &params, args.out.workers)?;
    emit_records(&args.out, &records)?;
    Ok(ExitCode::SUCCESS)
}

fn run_delay(args: DelayArgs) -> Result<ExitCode> {
    let params = args.params.build()?;
    let axes = args
        .axes
        .iter()
        .map(|a| parse_axis(a, params.omega_m))
        .collect::<Result<Vec<_>>>()?;
    let spec = SweepSpec {
        axes,
        observables: vec![Observable::Tau1],
        probe_detuning: None,
        conventions: args.conventions.build()?,
    };
    let records = run_sweep_with_workers(&spec, &params, args.out.workers)?;
    emit_records(&args.out, &records)?;
    Ok(ExitCode::SUCCESS)
}

fn run_oracle(args: OracleArgs) -> Result<ExitCode> {
    let params = args.params.build()?;
    if args.points < 2 {
        bail!("oracle needs at least 2 grid points");
    }
    let report = oracle::oracle_report(&params, args.points)?;
    let json = serde_json::to_string_pretty(&report)?;
    write_out(args.output.as_deref(), json.as_bytes())?;
    Ok(ExitCode::SUCCESS)
}

fn run_validate(args: ValidateArgs) -> Result<ExitCode> {
    let report = if args.fast {
        validate::run_acceptance_fast()
    } else {
        validate::run_acceptance()
    };
    let json = serde_json::to_string_pretty(&report)?;
    write_out(args.output.as_deref(), json.as_bytes())?;
    Ok(if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}

fn run_preset(args: PresetArgs) -> Result<ExitCode> {
    match args.action {
        PresetAction::List => {
            for (name, desc) in preset_list() {
                println!("{name:8} {desc}");
            }
            Ok(ExitCode::SUCCESS)
        }
        PresetAction::Run { name, params, out } => {
            let preset = figure_preset(&name)?;
            // Flags override the preset's parameter set.
            let mut p = preset.params.clone();
            if params.config.is_some()
                || params.omega_spin.is_some()
                || params.opa_gain.is_some()
                || params.opa_phase.is_some()
                || params.p_control.is_some()
                || params.p_probe.is_some()
                || params.pump_mode.is_some()
                || params.bath.is_some()
                || params.delta_0.is_some()
            {
                let over = params.build()?;
                let defaults = PhysParams::default_profile();
                // Only fields that differ from the plain defaults override
                // the preset's choices.
                macro_rules! take {
                    ($f:ident) => {
                        if over.$f != defaults.$f {
                            p.$f = over.$f;
                        }
                    };
                }
                take!(n);
                take!(radius);
                take!(mass);
                take!(lambda_vac);
                take!(dn_dlambda);
                take!(omega_m);
                take!(gamma_m);
                take!(q_factor);
                take!(kappa_a);
                take!(kappa_ex);
                take!(p_control);
                take!(p_probe);
                take!(delta_0);
                take!(omega_spin);
                take!(opa_gain);
                take!(opa_phase);
                take!(pump_mode);
                take!(bath);
            }
            let records = run_sweep_with_workers(&preset.spec, &p, out.workers)?;
            emit_records(&out, &records)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // Help/version requests are not errors.
            if e.use_stderr() {
                eprintln!("{e}");
                return ExitCode::from(1);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    let result = match cli.command {
        Command::Spectrum(a) => run_spectrum(a),
        Command::Sweep(a) => run_general_sweep(a),
        Command::Delay(a) => run_delay(a),
        Command::Oracle(a) => run_oracle(a),
        Command::Validate(a) => run_validate(a),
        Command::Preset(a) => run_preset(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
