//! Config-file schema and parameter resolution.
//!
//! Precedence: built-in default profile < config file < command-line flags.
//! Frequencies accept either raw rad/s numbers or strings with the `wm`
//! suffix (multiples of the mechanical frequency), e.g. `delta_0 = "1wm"`.

use anyhow::{bail, Context, Result};
use serde::Deserialize;

use spinres_core::model::{Bath, PhysParams, PumpMode};

/// A frequency that may be quoted in units of ω_m.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum FreqValue {
    Raw(f64),
    Tagged(String),
}

impl FreqValue {
    pub fn parse(s: &str) -> Result<FreqValue> {
        Ok(FreqValue::Tagged(s.trim().to_string()))
    }

    /// Resolves against the mechanical frequency.
    pub fn resolve(&self, omega_m: f64) -> Result<f64> {
        match self {
            FreqValue::Raw(v) => Ok(*v),
            FreqValue::Tagged(s) => {
                let t = s.trim();
                if let Some(stripped) = t.strip_suffix("wm") {
                    let mult: f64 = stripped
                        .trim()
                        .parse()
                        .with_context(|| format!("bad omega_m multiple `{t}`"))?;
                    Ok(mult * omega_m)
                } else {
                    t.parse::<f64>()
                        .with_context(|| format!("bad frequency `{t}`"))
                }
            }
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default)]
    pub resonator: ResonatorSection,
    #[serde(default)]
    pub mechanics: MechanicsSection,
    #[serde(default)]
    pub optics: OpticsSection,
    #[serde(default)]
    pub drive: DriveSection,
    #[serde(default)]
    pub rotation: RotationSection,
    #[serde(default)]
    pub opa: OpaSection,
    #[serde(default)]
    pub bath: BathSection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResonatorSection {
    pub refractive_index: Option<f64>,
    /// Radius (m).
    pub radius: Option<f64>,
    /// Effective mass (kg).
    pub mass: Option<f64>,
    /// Vacuum wavelength (m).
    pub lambda_vac: Option<f64>,
    /// Dispersion dn/dλ (1/m).
    pub dn_dlambda: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MechanicsSection {
    /// Mechanical frequency (rad/s, raw convention; no `wm` here).
    pub omega_m: Option<f64>,
    /// Damping rate (rad/s).
    pub gamma_m: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpticsSection {
    pub q_factor: Option<f64>,
    /// Intrinsic loss (rad/s); defaults to ω₀/Q.
    pub kappa_a: Option<f64>,
    /// External coupling loss (rad/s); defaults to ω₀/Q.
    pub kappa_ex: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriveSection {
    /// Control power (W).
    pub p_control: Option<f64>,
    /// Probe power (W).
    pub p_probe: Option<f64>,
    /// Control detuning (rad/s or `"<x>wm"`).
    pub delta_0: Option<FreqValue>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RotationSection {
    /// Spin rate (rad/s or `"<x>wm"`); sign encodes the drive direction.
    pub omega_spin: Option<FreqValue>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpaSection {
    /// Nonlinear gain (rad/s or `"<x>wm"`).
    pub gain: Option<FreqValue>,
    /// Pump phase (rad).
    pub phase: Option<f64>,
    /// "sum-freq" or "double-control".
    pub pump_mode: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BathSection {
    /// "markovian" or "non-markovian".
    pub kind: Option<String>,
    /// Spectral width (rad/s or `"<x>wm"`).
    pub lambda1: Option<FreqValue>,
    /// Reservoir decay (rad/s or `"<x>wm"`).
    pub mu: Option<FreqValue>,
}

pub fn parse_pump_mode(s: &str) -> Result<PumpMode> {
    match s {
        "sum-freq" | "sumfreq" => Ok(PumpMode::SumFreq),
        "double-control" | "doublecontrol" | "2wl" => Ok(PumpMode::DoubleControl),
        other => bail!("unknown pump mode `{other}` (expected sum-freq or double-control)"),
    }
}

/// Applies a config file over the default profile.
pub fn apply_file(params: &mut PhysParams, text: &str) -> Result<()> {
    let cfg: ConfigFile = toml::from_str(text).context("parsing config file")?;

    if let Some(v) = cfg.mechanics.omega_m {
        params.omega_m = v;
    }
    if let Some(v) = cfg.mechanics.gamma_m {
        params.gamma_m = v;
    }
    if let Some(v) = cfg.resonator.refractive_index {
        params.n = v;
    }
    if let Some(v) = cfg.resonator.radius {
        params.radius = v;
    }
    if let Some(v) = cfg.resonator.mass {
        params.mass = v;
    }
    if let Some(v) = cfg.resonator.lambda_vac {
        params.lambda_vac = v;
    }
    if let Some(v) = cfg.resonator.dn_dlambda {
        params.dn_dlambda = v;
    }

    // Coupling defaults track ω₀/Q whenever Q or λ changed and no explicit
    // value was given.
    let omega_0 =
        2.0 * std::f64::consts::PI * spinres_core::constants::SPEED_OF_LIGHT / params.lambda_vac;
    if let Some(v) = cfg.optics.q_factor {
        params.q_factor = v;
        params.kappa_a = omega_0 / v;
        params.kappa_ex = omega_0 / v;
    } else if cfg.resonator.lambda_vac.is_some() {
        params.kappa_a = omega_0 / params.q_factor;
        params.kappa_ex = omega_0 / params.q_factor;
    }
    if let Some(v) = cfg.optics.kappa_a {
        params.kappa_a = v;
    }
    if let Some(v) = cfg.optics.kappa_ex {
        params.kappa_ex = v;
    }

    if let Some(v) = cfg.drive.p_control {
        params.p_control = v;
    }
    if let Some(v) = cfg.drive.p_probe {
        params.p_probe = v;
    }
    let wm = params.omega_m;
    if let Some(v) = &cfg.drive.delta_0 {
        params.delta_0 = v.resolve(wm)?;
    }
    if let Some(v) = &cfg.rotation.omega_spin {
        params.omega_spin = v.resolve(wm)?;
    }
    if let Some(v) = &cfg.opa.gain {
        params.opa_gain = v.resolve(wm)?;
    }
    if let Some(v) = cfg.opa.phase {
        params.opa_phase = v;
    }
    if let Some(v) = &cfg.opa.pump_mode {
        params.pump_mode = parse_pump_mode(v)?;
    }

    match cfg.bath.kind.as_deref() {
        Some("markovian") => params.bath = Bath::Markovian,
        Some("non-markovian") | Some("nonmarkovian") => {
            let lambda1 = cfg
                .bath
                .lambda1
                .as_ref()
                .context("non-markovian bath requires lambda1")?
                .resolve(wm)?;
            let mu = match &cfg.bath.mu {
                Some(v) => v.resolve(wm)?,
                None => 0.0,
            };
            params.bath = Bath::NonMarkovian { lambda1, mu };
        }
        Some(other) => bail!("unknown bath kind `{other}`"),
        None => {
            // lambda1 alone implies a structured bath.
            if let Some(l) = &cfg.bath.lambda1 {
                let lambda1 = l.resolve(wm)?;
                let mu = match &cfg.bath.mu {
                    Some(v) => v.resolve(wm)?,
                    None => 0.0,
                };
                params.bath = Bath::NonMarkovian { lambda1, mu };
            }
        }
    }
    Ok(())
}

/// Parses `--bath` flag syntax: `markovian` or `lambda1=<f>,mu=<f>`.
pub fn parse_bath_flag(s: &str, omega_m: f64) -> Result<Bath> {
    let t = s.trim();
    if t == "markovian" {
        return Ok(Bath::Markovian);
    }
    let mut lambda1 = None;
    let mut mu = 0.0;
    for part in t.trim_start_matches("non-markovian:").split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (k, v) = part
            .split_once('=')
            .with_context(|| format!("bad bath component `{part}` (expected key=value)"))?;
        let val = FreqValue::parse(v)?.resolve(omega_m)?;
        match k.trim() {
            "lambda1" => lambda1 = Some(val),
            "mu" => mu = val,
            other => bail!("unknown bath key `{other}`"),
        }
    }
    let lambda1 = lambda1.context("bath flag needs lambda1=<freq>")?;
    Ok(Bath::NonMarkovian { lambda1, mu })
}
