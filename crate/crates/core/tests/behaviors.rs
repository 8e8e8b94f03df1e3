//! Regime-level behavior checks with measured, frozen expectations.

use spinres_core::model::{derive, Bath, PhysParams};
use spinres_core::observables::group_delay;
use spinres_core::sidebands::{solve_sidebands, ChiConvention};
use spinres_core::steadystate::solve_steady;
use spinres_core::sweep::Conventions;

fn eta1_spectrum(p: &PhysParams, count: usize) -> (Vec<f64>, Vec<f64>) {
    let conv = Conventions::figure();
    let d = derive(p).unwrap();
    let steady = solve_steady(&d, p, conv.steady_options()).unwrap();
    let grid: Vec<f64> = (0..count)
        .map(|i| p.omega_m * (0.98 + 0.04 * i as f64 / (count - 1) as f64))
        .collect();
    let eta: Vec<f64> = grid
        .iter()
        .map(|&dp| {
            let sol = solve_sidebands(&steady, dp, p, &d, ChiConvention::default()).unwrap();
            let filter = match p.bath {
                Bath::NonMarkovian { lambda1, mu } => {
                    (lambda1 / num_complex::Complex64::new(lambda1, mu - 2.0 * dp)).norm()
                }
                Bath::Markovian => 1.0,
            };
            filter * (p.kappa_ex.sqrt() * sol.a2_plus / d.eps_p(dp)).norm()
        })
        .collect();
    (grid, eta)
}

/// Relative height difference of the two dominant local maxima.
fn doublet_asymmetry(vals: &[f64]) -> f64 {
    let mut peaks: Vec<(f64, usize)> = (1..vals.len() - 1)
        .filter(|&i| vals[i] > vals[i - 1] && vals[i] >= vals[i + 1])
        .map(|i| (vals[i], i))
        .collect();
    peaks.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    assert!(peaks.len() >= 2, "expected a doublet, found {} peaks", peaks.len());
    let (h1, h2) = (peaks[0].0, peaks[1].0);
    (h1 - h2).abs() / (h1 + h2)
}

#[test]
fn narrow_bath_asymmetry_is_restored_by_counter_spin() {
    // A narrow bath (width 2 ω_m) skews the sideband doublet; spinning at
    // 7.7 kHz with light from the right restores the symmetry, while the
    // opposite direction worsens it.
    let mut p = PhysParams::default_profile();
    p.bath = Bath::NonMarkovian { lambda1: 2.0 * p.omega_m, mu: 0.0 };

    p.omega_spin = 0.0;
    let (_, e) = eta1_spectrum(&p, 1001);
    let asym_static = doublet_asymmetry(&e);

    p.omega_spin = -7.7e3;
    let (_, e) = eta1_spectrum(&p, 1001);
    let asym_restored = doublet_asymmetry(&e);

    p.omega_spin = 7.7e3;
    let (_, e) = eta1_spectrum(&p, 1001);
    let asym_worse = doublet_asymmetry(&e);

    assert!(asym_static > 0.15, "static asymmetry {asym_static}");
    assert!(asym_restored < 0.02, "restored asymmetry {asym_restored}");
    assert!(asym_worse > asym_static, "{asym_worse} vs {asym_static}");
}

#[test]
fn upper_sideband_is_nonreciprocal_in_drive_direction() {
    // With the OPA off, the spectra for the two drive directions differ by
    // more than one percentage point somewhere on the probe grid.
    let mut p = PhysParams::default_profile();
    p.omega_spin = 2e4;
    let (_, fwd) = eta1_spectrum(&p, 1001);
    p.omega_spin = -2e4;
    let (_, bwd) = eta1_spectrum(&p, 1001);
    let max_diff = fwd.iter().zip(&bwd).map(|(a, b)| (a - b).abs()).fold(0.0f64, f64::max);
    assert!(max_diff > 0.01, "max pointwise difference {max_diff}");
}

#[test]
fn group_delay_is_power_tunable_through_zero() {
    // Without spin or OPA the delay at the sideband point flips sign with
    // control power and then shortens steadily at high power.
    let conv = Conventions::figure();
    let tau_at = |p_mw: f64| {
        let mut p = PhysParams::default_profile();
        p.p_control = p_mw * 1e-3;
        p.p_probe = 0.05 * p.p_control;
        let d = derive(&p).unwrap();
        group_delay(&p, &d, conv.steady_options(), conv.chi).unwrap().tau1
    };
    assert!(tau_at(1.0) < 0.0);
    assert!(tau_at(4.0) > 0.0);
    let tail: Vec<f64> = [7.0, 13.0, 22.0, 40.0].iter().map(|&m| tau_at(m)).collect();
    for w in tail.windows(2) {
        assert!(w[1] < w[0] && w[1] > 0.0, "tail not shortening: {tail:?}");
    }
}

#[test]
fn upper_sideband_peak_stays_put_under_gain() {
    // The peak position is set by the cavity-mechanics structure, not the
    // pump: from zero gain to 0.6 κ it moves by under 3e-4 ω_m (≈ the
    // precision at which positions are quoted), while the height grows
    // several-fold.
    let mut p = PhysParams::default_profile();
    p.omega_spin = -2e4;
    let kappa = derive(&p).unwrap().kappa;
    let argmax = |p: &PhysParams| {
        let (grid, e) = eta1_spectrum(p, 2001);
        let i = e
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .unwrap()
            .0;
        (grid[i] / p.omega_m, e[i])
    };
    p.opa_gain = 0.0;
    let (pos0, h0) = argmax(&p);
    p.opa_gain = 0.6 * kappa;
    let (pos6, h6) = argmax(&p);
    assert!((pos6 - pos0).abs() <= 3e-4, "peak moved {} -> {}", pos0, pos6);
    assert!(h6 > 3.0 * h0, "no enhancement: {h0} -> {h6}");
}
