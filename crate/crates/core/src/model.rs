//! Physical parameters, unit conventions, and derived quantities.
//!
//! # Unit convention
//!
//! The cavity resonance is the only quantity computed with a 2π:
//! ω₀ = 2πc/λ (rad/s). Every other quoted rate — mechanical frequency
//! "100 MHz", damping "0.1 MHz", spin rate "20 kHz" — is taken as a raw
//! value in s⁻¹ (1e8, 1e5, 2e4) **without** an extra 2π. This is the only
//! convention under which the built-in default profile reproduces its own
//! rotation-induced shift of 15.082 MHz at Ω = 20 kHz together with the
//! ratio Δ_s/ω_m = 0.1508, and it is applied uniformly everywhere.

use serde::{Deserialize, Serialize};

use crate::constants::{HBAR, SPEED_OF_LIGHT};
use crate::error::Error;
use crate::Result;

/// OPA pump scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PumpMode {
    /// Pump at the sum of control and probe frequencies; in the control
    /// rotating frame the OPA term oscillates at the probe detuning.
    SumFreq,
    /// Pump at twice the control frequency; the OPA term is static in the
    /// rotating frame and feeds the steady state.
    DoubleControl,
}

/// Cavity bath model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Bath {
    /// Flat (memoryless) environment.
    Markovian,
    /// Lorentzian environment of spectral width `lambda1` whose modes decay
    /// into a secondary reservoir at rate `mu`.
    NonMarkovian { lambda1: f64, mu: f64 },
}

impl Bath {
    pub fn is_markovian(&self) -> bool {
        matches!(self, Bath::Markovian)
    }
}

/// Raw physical parameters of the spinning-resonator system (SI units).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhysParams {
    /// Refractive index of the resonator material (dimensionless, > 1).
    pub n: f64,
    /// Resonator radius (m).
    pub radius: f64,
    /// Effective mass of the mechanical mode (kg).
    pub mass: f64,
    /// Vacuum wavelength of the optical mode (m).
    pub lambda_vac: f64,
    /// Material dispersion dn/dλ (1/m); 0 drops the drag correction.
    pub dn_dlambda: f64,
    /// Mechanical frequency (rad/s, raw convention).
    pub omega_m: f64,
    /// Mechanical damping rate (rad/s).
    pub gamma_m: f64,
    /// Optical quality factor ω₀/κ (dimensionless).
    pub q_factor: f64,
    /// Intrinsic cavity loss (rad/s).
    pub kappa_a: f64,
    /// External (fiber-coupling) loss (rad/s).
    pub kappa_ex: f64,
    /// Control power (W).
    pub p_control: f64,
    /// Probe power (W).
    pub p_probe: f64,
    /// Control detuning Δ₀ = ω₀ − ω_l (rad/s).
    pub delta_0: f64,
    /// Spin rate Ω (rad/s raw convention; sign encodes drive direction,
    /// Ω > 0 light from the left, Ω < 0 from the right).
    pub omega_spin: f64,
    /// OPA nonlinear gain G (rad/s).
    pub opa_gain: f64,
    /// OPA pump phase θ (rad).
    pub opa_phase: f64,
    /// OPA pump scheme.
    pub pump_mode: PumpMode,
    /// Cavity bath model.
    pub bath: Bath,
}

impl PhysParams {
    /// Built-in default profile.
    ///
    /// λ = 1553 nm, R = 0.25 mm, m = 25 ng, n = 1.44, Q = 4.5e7 with
    /// κ_a = κ_ex = ω₀/Q, ω_m = 1e8 s⁻¹, Γ_m = 1e5 s⁻¹, P_l = 1 mW,
    /// P_p = 0.05 P_l, Δ₀ = ω_m, no spin, OPA off, Markovian bath.
    pub fn default_profile() -> Self {
        let lambda_vac = 1.553e-6;
        let q_factor = 4.5e7;
        let omega_0 = 2.0 * std::f64::consts::PI * SPEED_OF_LIGHT / lambda_vac;
        let kappa_side = omega_0 / q_factor;
        PhysParams {
            n: 1.44,
            radius: 0.25e-3,
            mass: 25e-12,
            lambda_vac,
            dn_dlambda: 0.0,
            omega_m: 100e6,
            gamma_m: 0.1e6,
            q_factor,
            kappa_a: kappa_side,
            kappa_ex: kappa_side,
            p_control: 1e-3,
            p_probe: 0.05e-3,
            delta_0: 100e6,
            omega_spin: 0.0,
            opa_gain: 0.0,
            opa_phase: 0.0,
            pump_mode: PumpMode::SumFreq,
            bath: Bath::Markovian,
        }
    }

    /// Checks every domain invariant, naming the offending field.
    pub fn validate(&self) -> Result<()> {
        fn bad(field: &'static str, reason: impl Into<String>) -> Error {
            Error::InvalidParams {
                field,
                reason: reason.into(),
            }
        }
        let finite = |field: &'static str, v: f64| -> Result<()> {
            if v.is_finite() {
                Ok(())
            } else {
                Err(bad(field, "must be finite"))
            }
        };
        for (f, v) in [
            ("n", self.n),
            ("radius", self.radius),
            ("mass", self.mass),
            ("lambda_vac", self.lambda_vac),
            ("dn_dlambda", self.dn_dlambda),
            ("omega_m", self.omega_m),
            ("gamma_m", self.gamma_m),
            ("q_factor", self.q_factor),
            ("kappa_a", self.kappa_a),
            ("kappa_ex", self.kappa_ex),
            ("p_control", self.p_control),
            ("p_probe", self.p_probe),
            ("delta_0", self.delta_0),
            ("omega_spin", self.omega_spin),
            ("opa_gain", self.opa_gain),
            ("opa_phase", self.opa_phase),
        ] {
            finite(f, v)?;
        }
        if self.n <= 1.0 {
            return Err(bad("n", format!("must exceed 1, got {}", self.n)));
        }
        if self.radius <= 0.0 {
            return Err(bad("radius", "must be positive"));
        }
        if self.mass <= 0.0 {
            return Err(bad("mass", "must be positive"));
        }
        if self.lambda_vac <= 0.0 {
            return Err(bad("lambda_vac", "must be positive"));
        }
        if self.omega_m <= 0.0 {
            return Err(bad("omega_m", "must be positive"));
        }
        if self.gamma_m < 0.0 {
            return Err(bad("gamma_m", "must be nonnegative"));
        }
        if self.q_factor <= 0.0 {
            return Err(bad("q_factor", "must be positive"));
        }
        if self.kappa_a < 0.0 {
            return Err(bad("kappa_a", "must be nonnegative"));
        }
        if self.kappa_ex < 0.0 {
            return Err(bad("kappa_ex", "must be nonnegative"));
        }
        if self.p_control < 0.0 {
            return Err(bad("p_control", "must be nonnegative"));
        }
        if self.p_probe < 0.0 {
            return Err(bad("p_probe", "must be nonnegative"));
        }
        if self.opa_gain < 0.0 {
            return Err(bad("opa_gain", "must be nonnegative"));
        }
        if let Bath::NonMarkovian { lambda1, mu } = self.bath {
            if !lambda1.is_finite() || lambda1 <= 0.0 {
                return Err(bad("bath.lambda1", "must be positive"));
            }
            if !mu.is_finite() || mu < 0.0 {
                return Err(bad("bath.mu", "must be nonnegative"));
            }
        }
        Ok(())
    }
}

/// Quantities computed once from [`PhysParams`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedParams {
    /// Cavity resonance ω₀ = 2πc/λ (rad/s).
    pub omega_0: f64,
    /// Control frequency ω_l = ω₀ − Δ₀ (rad/s).
    pub omega_l: f64,
    /// Total half-linewidth κ = (κ_a + κ_ex)/2 (rad/s).
    pub kappa: f64,
    /// Optomechanical coupling ξ = ω₀/R (rad/s per m).
    pub xi: f64,
    /// Control amplitude ε_l = √(P_l/ħω_l) (√(photons/s)).
    pub eps_l: f64,
    /// Zero-point fluctuation x_zpf = √(ħ/2mω_m) (m).
    pub x_zpf: f64,
    /// Rotation-induced resonance shift Δ_s (rad/s), signed like Ω.
    pub delta_s: f64,
    /// Angular momentum p_φ = mR²Ω (kg·m²/s).
    pub p_phi: f64,
    /// Probe power carried along so ε_p can be evaluated per detuning (W).
    pub p_probe: f64,
}

impl DerivedParams {
    /// Probe amplitude ε_p(Δ_p) = √(P_p/ħω_p) with ω_p = ω_l + Δ_p.
    ///
    /// Δ_p/ω_l ~ 1e-7 makes this numerically indistinguishable from using
    /// ω₀, but it is evaluated exactly so results are deterministic.
    pub fn eps_p(&self, delta_p: f64) -> f64 {
        (self.p_probe / (HBAR * (self.omega_l + delta_p))).sqrt()
    }
}

/// Rotation-induced shift of the optical resonance for a resonator spinning
/// at `omega_spin`, with the drag correction −(λ/n)(dn/dλ).
///
/// Linear and odd in `omega_spin`; zero at rest.
pub fn sagnac_shift(
    n: f64,
    radius: f64,
    omega_spin: f64,
    omega_0: f64,
    lambda_vac: f64,
    dn_dlambda: f64,
) -> f64 {
    n * radius * omega_spin * omega_0 / SPEED_OF_LIGHT
        * (1.0 - 1.0 / (n * n) - lambda_vac / n * dn_dlambda)
}

/// Computes all derived quantities; pure and deterministic.
pub fn derive(p: &PhysParams) -> Result<DerivedParams> {
    p.validate()?;
    let omega_0 = 2.0 * std::f64::consts::PI * SPEED_OF_LIGHT / p.lambda_vac;
    let omega_l = omega_0 - p.delta_0;
    let kappa = 0.5 * (p.kappa_a + p.kappa_ex);
    let xi = omega_0 / p.radius;
    let eps_l = (p.p_control / (HBAR * omega_l)).sqrt();
    let x_zpf = (HBAR / (2.0 * p.mass * p.omega_m)).sqrt();
    let delta_s = sagnac_shift(
        p.n,
        p.radius,
        p.omega_spin,
        omega_0,
        p.lambda_vac,
        p.dn_dlambda,
    );
    let p_phi = p.mass * p.radius * p.radius * p.omega_spin;
    Ok(DerivedParams {
        omega_0,
        omega_l,
        kappa,
        xi,
        eps_l,
        x_zpf,
        delta_s,
        p_phi,
        p_probe: p.p_probe,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_profile_linewidth_matches_quality_factor() {
        let p = PhysParams::default_profile();
        let d = derive(&p).unwrap();
        // kappa_a = kappa_ex = omega_0/Q makes kappa = omega_0/Q exactly.
        assert_eq!(d.kappa, d.omega_0 / p.q_factor);
        assert_eq!(d.kappa, 0.5 * (p.kappa_a + p.kappa_ex));
    }

    #[test]
    fn sagnac_shift_default_profile_anchor() {
        // 20 kHz spin on the default profile gives 15.082 MHz.
        let mut p = PhysParams::default_profile();
        p.omega_spin = 2e4;
        let d = derive(&p).unwrap();
        assert!(
            (d.delta_s - 1.5082e7).abs() / 1.5082e7 < 1e-3,
            "got {}",
            d.delta_s
        );
        assert!((d.delta_s / p.omega_m - 0.1508).abs() < 1e-4);
        // Cross-check against the scalar reference value.
        assert!((d.delta_s - 1.5081982332108112e7).abs() < 1.0);
    }

    #[test]
    fn sagnac_shift_sign_and_zero() {
        let mut p = PhysParams::default_profile();
        p.omega_spin = -2e4;
        let d = derive(&p).unwrap();
        assert!((d.delta_s + 1.5082e7).abs() / 1.5082e7 < 1e-3);
        assert!((d.delta_s / p.omega_m + 0.1508).abs() < 1e-4);

        p.omega_spin = 0.0;
        let d = derive(&p).unwrap();
        assert_eq!(d.delta_s, 0.0);
        assert_eq!(d.p_phi, 0.0);
    }

    #[test]
    fn zero_probe_power_gives_zero_probe_amplitude() {
        let mut p = PhysParams::default_profile();
        p.p_probe = 0.0;
        let d = derive(&p).unwrap();
        assert_eq!(d.eps_p(p.omega_m), 0.0);
    }

    #[test]
    fn derive_is_bit_stable() {
        let p = PhysParams::default_profile();
        let a = derive(&p).unwrap();
        let b = derive(&p).unwrap();
        assert_eq!(a.omega_0.to_bits(), b.omega_0.to_bits());
        assert_eq!(a.eps_l.to_bits(), b.eps_l.to_bits());
        assert_eq!(a.delta_s.to_bits(), b.delta_s.to_bits());
        assert_eq!(a.x_zpf.to_bits(), b.x_zpf.to_bits());
    }

    #[test]
    fn invalid_params_name_the_field() {
        let mut p = PhysParams::default_profile();
        p.n = 0.9;
        match derive(&p) {
            Err(Error::InvalidParams { field, .. }) => assert_eq!(field, "n"),
            other => panic!("expected InvalidParams, got {other:?}"),
        }
        let mut p = PhysParams::default_profile();
        p.bath = Bath::NonMarkovian {
            lambda1: 0.0,
            mu: 0.0,
        };
        match derive(&p) {
            Err(Error::InvalidParams { field, .. }) => assert_eq!(field, "bath.lambda1"),
            other => panic!("expected InvalidParams, got {other:?}"),
        }
    }
}
