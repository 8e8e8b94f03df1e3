//! First- and second-order sideband amplitudes.
//!
//! Each order is a 3-unknown complex linear system in (Aₙ⁺, Aₙ⁻*, Xₙ⁺),
//! assembled from the regime's response coefficients and solved directly by
//! a pivoted dense solve; the printed closed forms are kept in
//! [`closed_form`] purely as cross-checks. Mechanical reality is built in:
//! the lower mechanical amplitudes are the conjugates of the upper ones.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::constants::HBAR;
use crate::error::Error;
use crate::model::{Bath, DerivedParams, PhysParams};
use crate::steadystate::{SteadyRegime, SteadyState};
use crate::Result;

/// Condition-estimate threshold above which a system is declared singular.
pub const SINGULAR_COND: f64 = 1e12;

/// Argument convention for the mechanical response χ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChiConvention {
    /// χ(z) = m(ω_m² − iΓ_m z − z²) evaluated at the response frequency
    /// z = nΔ_p: the oscillator driven at the n-th harmonic.
    #[default]
    ResponseFrequency,
    /// Quadratic term pinned to the probe detuning regardless of harmonic:
    /// χ(nΔ_p) = m(ω_m² − iΓ_m nΔ_p − Δ_p²). Kept selectable for
    /// cross-checking; the time-domain integrator arbitrates against it.
    ProbeQuadratic,
}

/// Cavity and mechanical response coefficients at harmonic `n` (Markovian).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Susceptibilities {
    /// σ₁(nΔ_p) = κ + iΔ − inΔ_p.
    pub sigma1: C64,
    /// σ₂(nΔ_p) = κ − iΔ − inΔ_p.
    pub sigma2: C64,
    /// Mechanical response χ(nΔ_p); see [`ChiConvention`].
    pub chi: C64,
}

/// σ₁, σ₂ and χ at harmonic order `n` ∈ {1, 2} for a converged steady state.
pub fn susceptibilities(
    n: u8,
    delta_p: f64,
    steady: &SteadyState,
    p: &PhysParams,
    d: &DerivedParams,
) -> Susceptibilities {
    susceptibilities_with(n, delta_p, steady, p, d, ChiConvention::default())
}

pub fn susceptibilities_with(
    n: u8,
    delta_p: f64,
    steady: &SteadyState,
    p: &PhysParams,
    d: &DerivedParams,
    chi_conv: ChiConvention,
) -> Susceptibilities {
    debug_assert!(n == 1 || n == 2);
    let z = n as f64 * delta_p;
    let delta = steady.delta_eff;
    Susceptibilities {
        sigma1: C64::new(d.kappa, delta - z),
        sigma2: C64::new(d.kappa, -delta - z),
        chi: mech_response(z, delta_p, p, chi_conv),
    }
}

fn mech_response(z: f64, delta_p: f64, p: &PhysParams, conv: ChiConvention) -> C64 {
    let quad = match conv {
        ChiConvention::ResponseFrequency => z * z,
        ChiConvention::ProbeQuadratic => delta_p * delta_p,
    };
    p.mass * C64::new(p.omega_m * p.omega_m - quad, -p.gamma_m * z)
}

/// Structured-bath response coefficients at harmonic `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NmSusceptibilities {
    /// Λ(nΔ_p) = λ₁ + iμ − inΔ_p.
    pub lambda_resp: C64,
    /// σ′₁(nΔ_p) = κλ₁ − iκnΔ_p/2 + Λ(nΔ_p)(iΔ − inΔ_p).
    pub sigma1: C64,
    /// σ′₂(nΔ_p) = κλ₁ − iκnΔ_p/2 − Λ(nΔ_p)(iΔ + inΔ_p).
    pub sigma2: C64,
    /// Same mechanical response as the Markovian case.
    pub chi: C64,
}

pub fn nm_susceptibilities(
    n: u8,
    delta_p: f64,
    steady: &SteadyState,
    p: &PhysParams,
    d: &DerivedParams,
    chi_conv: ChiConvention,
) -> Result<NmSusceptibilities> {
    let (lambda1, mu) = match p.bath {
        Bath::NonMarkovian { lambda1, mu } => (lambda1, mu),
        Bath::Markovian => {
            return Err(Error::InvalidParams {
                field: "bath",
                reason: "structured-bath response requires a non-Markovian bath".into(),
            })
        }
    };
    let z = n as f64 * delta_p;
    let delta = steady.delta_eff;
    let lambda_resp = C64::new(lambda1, mu - z);
    let kappa = d.kappa;
    let common = C64::new(kappa * lambda1, -0.5 * kappa * z);
    Ok(NmSusceptibilities {
        lambda_resp,
        sigma1: common + lambda_resp * C64::new(0.0, delta - z),
        sigma2: common - lambda_resp * C64::new(0.0, delta + z),
        chi: mech_response(z, delta_p, p, chi_conv),
    })
}

/// First-order sideband amplitudes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirstOrder {
    pub a1_plus: C64,
    pub a1_minus: C64,
    /// Mechanical amplitude at the probe detuning (m).
    pub x1_plus: C64,
}

/// Second-order sideband amplitudes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecondOrder {
    pub a2_plus: C64,
    pub a2_minus: C64,
    pub x2_plus: C64,
}

/// Full sideband solution at one probe detuning.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SidebandSolution {
    pub a1_plus: C64,
    pub a1_minus: C64,
    pub x1_plus: C64,
    pub a2_plus: C64,
    pub a2_minus: C64,
    pub x2_plus: C64,
    pub delta_p: f64,
    pub regime: SteadyRegime,
    pub steady: SteadyState,
}

impl SidebandSolution {
    /// Lower mechanical amplitudes follow from x being a real observable.
    pub fn x1_minus(&self) -> C64 {
        self.x1_plus.conj()
    }
    pub fn x2_minus(&self) -> C64 {
        self.x2_plus.conj()
    }
}

/// Dense pivoted solve of a 3×3 complex system with diagonal equilibration.
///
/// Returns the solution and an infinity-norm condition estimate of the
/// equilibrated matrix; raw entries span ~30 orders of magnitude in SI
/// units, so scaling is required for the estimate to mean anything.
fn solve3(m: [[C64; 3]; 3], b: [C64; 3]) -> Result<[C64; 3]> {
    let mut r = [0.0f64; 3];
    let mut c = [0.0f64; 3];
    for i in 0..3 {
        for j in 0..3 {
            r[i] = r[i].max(m[i][j].norm());
        }
        if r[i] == 0.0 {
            return Err(Error::SingularSystem {
                cond: f64::INFINITY,
            });
        }
    }
    for j in 0..3 {
        for i in 0..3 {
            c[j] = c[j].max(m[i][j].norm() / r[i]);
        }
        if c[j] == 0.0 {
            return Err(Error::SingularSystem {
                cond: f64::INFINITY,
            });
        }
    }
    let mut a = [[C64::new(0.0, 0.0); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            a[i][j] = m[i][j] / (r[i] * c[j]);
        }
    }
    let mut rhs = [b[0] / r[0], b[1] / r[1], b[2] / r[2]];

    let mut lu = a;
    let mut piv = [0usize; 3];
    for k in 0..3 {
        let mut mx = lu[k][k].norm();
        let mut mr = k;
        for i in (k + 1)..3 {
            if lu[i][k].norm() > mx {
                mx = lu[i][k].norm();
                mr = i;
            }
        }
        piv[k] = mr;
        if mr != k {
            lu.swap(k, mr);
        }
        if lu[k][k].norm() == 0.0 {
            return Err(Error::SingularSystem {
                cond: f64::INFINITY,
            });
        }
        for i in (k + 1)..3 {
            let f = lu[i][k] / lu[k][k];
            lu[i][k] = f;
            for j in (k + 1)..3 {
                let v = lu[k][j];
                lu[i][j] -= f * v;
            }
        }
    }

    let lu_solve = |lu: &[[C64; 3]; 3], piv: &[usize; 3], b: &[C64; 3]| -> [C64; 3] {
        let mut x = *b;
        for k in 0..3 {
            if piv[k] != k {
                x.swap(k, piv[k]);
            }
            for i in (k + 1)..3 {
                let v = x[k];
                x[i] -= lu[i][k] * v;
            }
        }
        for i in (0..3).rev() {
            for j in (i + 1)..3 {
                let v = x[j];
                x[i] -= lu[i][j] * v;
            }
            x[i] /= lu[i][i];
        }
        x
    };

    // ‖A‖∞‖A⁻¹‖∞ from the explicit inverse; fine at this size.
    let mut norm_a = 0.0f64;
    for row in &a {
        norm_a = norm_a.max(row.iter().map(|v| v.norm()).sum());
    }
    let mut norm_inv = [0.0f64; 3];
    for j in 0..3 {
        let mut e = [C64::new(0.0, 0.0); 3];
        e[j] = C64::new(1.0, 0.0);
        let col = lu_solve(&lu, &piv, &e);
        for i in 0..3 {
            norm_inv[i] += col[i].norm();
        }
    }
    let cond = norm_a * norm_inv.iter().cloned().fold(0.0, f64::max);
    if !cond.is_finite() || cond > SINGULAR_COND {
        return Err(Error::SingularSystem { cond });
    }

    let y = lu_solve(&lu, &piv, &rhs);
    rhs = y;
    Ok([rhs[0] / c[0], rhs[1] / c[1], rhs[2] / c[2]])
}

fn i_c(v: f64) -> C64 {
    C64::new(0.0, v)
}

/// Linear response to the probe, sum-frequency pump.
///
/// The OPA pump beats against the control at Δ_p, so it drives the upper
/// sideband with the steady amplitude even at zero probe power.
pub fn solve_first_order(
    steady: &SteadyState,
    delta_p: f64,
    p: &PhysParams,
    d: &DerivedParams,
) -> Result<FirstOrder> {
    solve_first_order_with(steady, delta_p, p, d, ChiConvention::default())
}

pub fn solve_first_order_with(
    steady: &SteadyState,
    delta_p: f64,
    p: &PhysParams,
    d: &DerivedParams,
    chi_conv: ChiConvention,
) -> Result<FirstOrder> {
    let s = susceptibilities_with(1, delta_p, steady, p, d, chi_conv);
    let a = steady.a_s;
    let xi = d.xi;
    let pump = 2.0 * p.opa_gain * C64::from_polar(1.0, p.opa_phase);
    let drive = pump * a.conj() + p.kappa_ex.sqrt() * d.eps_p(delta_p);
    let m = [
        [s.sigma1, C64::new(0.0, 0.0), -i_c(xi) * a],
        [C64::new(0.0, 0.0), s.sigma2, i_c(xi) * a.conj()],
        [-HBAR * xi * a.conj(), -HBAR * xi * a, s.chi],
    ];
    let b = [drive, C64::new(0.0, 0.0), C64::new(0.0, 0.0)];
    let [a1p, a1m_conj, x1p] = solve3(m, b)?;
    Ok(FirstOrder {
        a1_plus: a1p,
        a1_minus: a1m_conj.conj(),
        x1_plus: x1p,
    })
}

/// Second-order sideband system, sum-frequency pump. The inhomogeneity is
/// quadratic in the first-order amplitudes.
pub fn solve_second_order(
    steady: &SteadyState,
    first: &FirstOrder,
    delta_p: f64,
    p: &PhysParams,
    d: &DerivedParams,
) -> Result<SecondOrder> {
    solve_second_order_with(steady, first, delta_p, p, d, ChiConvention::default())
}

pub fn solve_second_order_with(
    steady: &SteadyState,
    first: &FirstOrder,
    delta_p: f64,
    p: &PhysParams,
    d: &DerivedParams,
    chi_conv: ChiConvention,
) -> Result<SecondOrder> {
    let s = susceptibilities_with(2, delta_p, steady, p, d, chi_conv);
    let a = steady.a_s;
    let xi = d.xi;
    let pump = 2.0 * p.opa_gain * C64::from_polar(1.0, p.opa_phase);
    let a1m_conj = first.a1_minus.conj();
    let m = [
        [s.sigma1, C64::new(0.0, 0.0), -i_c(xi) * a],
        [C64::new(0.0, 0.0), s.sigma2, i_c(xi) * a.conj()],
        [-HBAR * xi * a.conj(), -HBAR * xi * a, s.chi],
    ];
    let b = [
        i_c(xi) * first.a1_plus * first.x1_plus + pump * a1m_conj,
        -i_c(xi) * a1m_conj * first.x1_plus,
        HBAR * xi * a1m_conj * first.a1_plus,
    ];
    let [a2p, a2m_conj, x2p] = solve3(m, b)?;
    Ok(SecondOrder {
        a2_plus: a2p,
        a2_minus: a2m_conj.conj(),
        x2_plus: x2p,
    })
}

/// Linear response with the static OPA pump: the gain couples A₁⁺ and A₁⁻*
/// directly, so the 3×3 system is fully coupled.
pub fn solve_first_order_2wl(
    steady: &SteadyState,
    delta_p: f64,
    p: &PhysParams,
    d: &DerivedParams,
) -> Result<FirstOrder> {
    solve_first_order_2wl_with(steady, delta_p, p, d, ChiConvention::default())
}

pub fn solve_first_order_2wl_with(
    steady: &SteadyState,
    delta_p: f64,
    p: &PhysParams,
    d: &DerivedParams,
    chi_conv: ChiConvention,
) -> Result<FirstOrder> {
    let s = susceptibilities_with(1, delta_p, steady, p, d, chi_conv);
    let a = steady.a_s;
    let xi = d.xi;
    let gp = 2.0 * p.opa_gain * C64::from_polar(1.0, p.opa_phase);
    let gm = 2.0 * p.opa_gain * C64::from_polar(1.0, -p.opa_phase);
    let m = [
        [s.sigma1, -gp, -i_c(xi) * a],
        [-gm, s.sigma2, i_c(xi) * a.conj()],
        [-HBAR * xi * a.conj(), -HBAR * xi * a, s.chi],
    ];
    let b = [
        C64::new(p.kappa_ex.sqrt() * d.eps_p(delta_p), 0.0),
        C64::new(0.0, 0.0),
        C64::new(0.0, 0.0),
    ];
    let [a1p, a1m_conj, x1p] = solve3(m, b)?;
    Ok(FirstOrder {
        a1_plus: a1p,
        a1_minus: a1m_conj.conj(),
        x1_plus: x1p,
    })
}

/// Second-order system with the static pump; A₂⁺ and A₂⁻* stay mutually
/// coupled through the gain, so a simultaneous solve is mandatory.
pub fn solve_second_order_2wl(
    steady: &SteadyState,
    first: &FirstOrder,
    delta_p: f64,
    p: &PhysParams,
    d: &DerivedParams,
) -> Result<SecondOrder> {
    solve_second_order_2wl_with(steady, first, delta_p, p, d, ChiConvention::default())
}

pub fn solve_second_order_2wl_with(
    steady: &SteadyState,
    first: &FirstOrder,
    delta_p: f64,
    p: &PhysParams,
    d: &DerivedParams,
    chi_conv: ChiConvention,
) -> Result<SecondOrder> {
    let s = susceptibilities_with(2, delta_p, steady, p, d, chi_conv);
    let a = steady.a_s;
    let xi = d.xi;
    let gp = 2.0 * p.opa_gain * C64::from_polar(1.0, p.opa_phase);
    let gm = 2.0 * p.opa_gain * C64::from_polar(1.0, -p.opa_phase);
    let a1m_conj = first.a1_minus.conj();
    let m = [
        [s.sigma1, -gp, -i_c(xi) * a],
        [-gm, s.sigma2, i_c(xi) * a.conj()],
        [-HBAR * xi * a.conj(), -HBAR * xi * a, s.chi],
    ];
    let b = [
        i_c(xi) * first.a1_plus * first.x1_plus,
        -i_c(xi) * a1m_conj * first.x1_plus,
        HBAR * xi * a1m_conj * first.a1_plus,
    ];
    let [a2p, a2m_conj, x2p] = solve3(m, b)?;
    Ok(SecondOrder {
        a2_plus: a2p,
        a2_minus: a2m_conj.conj(),
        x2_plus: x2p,
    })
}

/// Linear response in the structured-bath regime: σ → σ′ and every optical
/// inhomogeneity carries the bath response Λ(nΔ_p).
pub fn solve_first_order_nm(
    steady: &SteadyState,
    delta_p: f64,
    p: &PhysParams,
    d: &DerivedParams,
) -> Result<FirstOrder> {
    solve_first_order_nm_with(steady, delta_p, p, d, ChiConvention::default())
}

pub fn solve_first_order_nm_with(
    steady: &SteadyState,
    delta_p: f64,
    p: &PhysParams,
    d: &DerivedParams,
    chi_conv: ChiConvention,
) -> Result<FirstOrder> {
    let s = nm_susceptibilities(1, delta_p, steady, p, d, chi_conv)?;
    let a = steady.a_s;
    let xi = d.xi;
    let pump = 2.0 * p.opa_gain * C64::from_polar(1.0, p.opa_phase);
    let drive = s.lambda_resp * (pump * a.conj() + p.kappa_ex.sqrt() * d.eps_p(delta_p));
    let m = [
        [s.sigma1, C64::new(0.0, 0.0), -i_c(xi) * a * s.lambda_resp],
        [
            C64::new(0.0, 0.0),
            s.sigma2,
            i_c(xi) * a.conj() * s.lambda_resp,
        ],
        [-HBAR * xi * a.conj(), -HBAR * xi * a, s.chi],
    ];
    let b = [drive, C64::new(0.0, 0.0), C64::new(0.0, 0.0)];
    let [a1p, a1m_conj, x1p] = solve3(m, b)?;
    Ok(FirstOrder {
        a1_plus: a1p,
        a1_minus: a1m_conj.conj(),
        x1_plus: x1p,
    })
}

pub fn solve_second_order_nm(
    steady: &SteadyState,
    first: &FirstOrder,
    delta_p: f64,
    p: &PhysParams,
    d: &DerivedParams,
) -> Result<SecondOrder> {
    solve_second_order_nm_with(steady, first, delta_p, p, d, ChiConvention::default())
}

pub fn solve_second_order_nm_with(
    steady: &SteadyState,
    first: &FirstOrder,
    delta_p: f64,
    p: &PhysParams,
    d: &DerivedParams,
    chi_conv: ChiConvention,
) -> Result<SecondOrder> {
    let s = nm_susceptibilities(2, delta_p, steady, p, d, chi_conv)?;
    let a = steady.a_s;
    let xi = d.xi;
    let pump = 2.0 * p.opa_gain * C64::from_polar(1.0, p.opa_phase);
    let a1m_conj = first.a1_minus.conj();
    let m = [
        [s.sigma1, C64::new(0.0, 0.0), -i_c(xi) * a * s.lambda_resp],
        [
            C64::new(0.0, 0.0),
            s.sigma2,
            i_c(xi) * a.conj() * s.lambda_resp,
        ],
        [-HBAR * xi * a.conj(), -HBAR * xi * a, s.chi],
    ];
    let b = [
        s.lambda_resp * (i_c(xi) * first.a1_plus * first.x1_plus + pump * a1m_conj),
        -i_c(xi) * s.lambda_resp * a1m_conj * first.x1_plus,
        HBAR * xi * a1m_conj * first.a1_plus,
    ];
    let [a2p, a2m_conj, x2p] = solve3(m, b)?;
    Ok(SecondOrder {
        a2_plus: a2p,
        a2_minus: a2m_conj.conj(),
        x2_plus: x2p,
    })
}

/// Solves both orders for the regime recorded in `steady`.
pub fn solve_sidebands(
    steady: &SteadyState,
    delta_p: f64,
    p: &PhysParams,
    d: &DerivedParams,
    chi_conv: ChiConvention,
) -> Result<SidebandSolution> {
    let (first, second) = match steady.regime {
        SteadyRegime::Plain => {
            let f = solve_first_order_with(steady, delta_p, p, d, chi_conv)?;
            let s = solve_second_order_with(steady, &f, delta_p, p, d, chi_conv)?;
            (f, s)
        }
        SteadyRegime::DoubleControlOpa => {
            let f = solve_first_order_2wl_with(steady, delta_p, p, d, chi_conv)?;
            let s = solve_second_order_2wl_with(steady, &f, delta_p, p, d, chi_conv)?;
            (f, s)
        }
        SteadyRegime::NonMarkovian => {
            let f = solve_first_order_nm_with(steady, delta_p, p, d, chi_conv)?;
            let s = solve_second_order_nm_with(steady, &f, delta_p, p, d, chi_conv)?;
            (f, s)
        }
    };
    Ok(SidebandSolution {
        a1_plus: first.a1_plus,
        a1_minus: first.a1_minus,
        x1_plus: first.x1_plus,
        a2_plus: second.a2_plus,
        a2_minus: second.a2_minus,
        x2_plus: second.x2_plus,
        delta_p,
        regime: steady.regime,
        steady: *steady,
    })
}

/// Printed closed forms, kept only as independent cross-checks of the
/// dense solves.
pub mod closed_form {
    use super::*;

    /// Auxiliary combinations for the sum-frequency closed forms.
    #[derive(Debug, Clone, Copy)]
    pub struct AuxCoefficients {
        /// D = iħξ²|a_s|².
        pub d_coef: C64,
        /// f₁ = iDΔ_p + σ₂(Δ_p)σ₂(2Δ_p)χ(2Δ_p).
        pub f1: C64,
        /// f₂ = D + σ₂(2Δ_p)χ(2Δ_p).
        pub f2: C64,
        /// f₃(nΔ_p) = 2iDΔ + σ₁σ₂χ at harmonic n.
        pub f3_1: C64,
        pub f3_2: C64,
    }

    pub fn aux(
        steady: &SteadyState,
        delta_p: f64,
        p: &PhysParams,
        d: &DerivedParams,
        chi_conv: ChiConvention,
    ) -> AuxCoefficients {
        let s1 = susceptibilities_with(1, delta_p, steady, p, d, chi_conv);
        let s2 = susceptibilities_with(2, delta_p, steady, p, d, chi_conv);
        let d_coef = i_c(HBAR * d.xi * d.xi * steady.photon_number());
        let f3 = |s: &Susceptibilities| {
            2.0 * i_c(steady.delta_eff) * d_coef + s.sigma1 * s.sigma2 * s.chi
        };
        AuxCoefficients {
            d_coef,
            f1: i_c(delta_p) * d_coef + s1.sigma2 * s2.sigma2 * s2.chi,
            f2: d_coef + s2.sigma2 * s2.chi,
            f3_1: f3(&s1),
            f3_2: f3(&s2),
        }
    }

    /// First-order upper amplitude, sum-frequency pump:
    /// A₁⁺ = (D + σ₂χ)(√κ_ex ε_p + 2Ge^{iθ}a_s*)/f₃(Δ_p).
    pub fn a1_plus(
        steady: &SteadyState,
        delta_p: f64,
        p: &PhysParams,
        d: &DerivedParams,
        chi_conv: ChiConvention,
    ) -> C64 {
        let s1 = susceptibilities_with(1, delta_p, steady, p, d, chi_conv);
        let x = aux(steady, delta_p, p, d, chi_conv);
        let drive = p.kappa_ex.sqrt() * d.eps_p(delta_p)
            + 2.0 * p.opa_gain * C64::from_polar(1.0, p.opa_phase) * steady.a_s.conj();
        (x.d_coef + s1.sigma2 * s1.chi) * drive / x.f3_1
    }

    /// Second-order upper amplitude, sum-frequency pump:
    /// A₂⁺ = [−Dξ²a_sX₁⁺² + iξf₁A₁⁺X₁⁺ − 2iξGe^{iθ}a_s*f₂X₁⁺]/(σ₂(Δ_p)f₃(2Δ_p)).
    pub fn a2_plus(
        steady: &SteadyState,
        first: &FirstOrder,
        delta_p: f64,
        p: &PhysParams,
        d: &DerivedParams,
        chi_conv: ChiConvention,
    ) -> C64 {
        let s1 = susceptibilities_with(1, delta_p, steady, p, d, chi_conv);
        let x = aux(steady, delta_p, p, d, chi_conv);
        let xi = d.xi;
        let a = steady.a_s;
        let g_term = 2.0 * p.opa_gain * C64::from_polar(1.0, p.opa_phase);
        let num = -x.d_coef * xi * xi * a * first.x1_plus * first.x1_plus
            + i_c(xi) * x.f1 * first.a1_plus * first.x1_plus
            - i_c(xi) * g_term * a.conj() * x.f2 * first.x1_plus;
        num / (s1.sigma2 * x.f3_2)
    }

    /// First-order upper amplitude with the static pump:
    /// Ã₁⁺ = (D̃ + σ̃₂χ)√κ_ex ε_p / (f̃₄(Δ_p) + f̃₃(Δ_p)).
    pub fn a1_plus_2wl(
        steady: &SteadyState,
        delta_p: f64,
        p: &PhysParams,
        d: &DerivedParams,
        chi_conv: ChiConvention,
    ) -> C64 {
        let s1 = susceptibilities_with(1, delta_p, steady, p, d, chi_conv);
        let d_coef = i_c(HBAR * d.xi * d.xi * steady.photon_number());
        let a = steady.a_s;
        let g = p.opa_gain;
        let phase = C64::from_polar(1.0, p.opa_phase);
        let f3 = 2.0 * i_c(steady.delta_eff) * d_coef + s1.sigma1 * s1.sigma2 * s1.chi;
        let f4 = 2.0
            * i_c(HBAR * d.xi * d.xi * g)
            * (a.conj() * a.conj() * phase - a * a * phase.conj())
            - 4.0 * g * g * s1.chi;
        (d_coef + s1.sigma2 * s1.chi) * p.kappa_ex.sqrt() * d.eps_p(delta_p) / (f4 + f3)
    }
}
