//! Property tests for the model and solver invariants.

use proptest::prelude::*;

use spinres_core::model::{derive, sagnac_shift, PhysParams};
use spinres_core::sidebands::{self, ChiConvention};
use spinres_core::steadystate::{solve_steady_2wl, solve_steady_plain};

fn spin_range() -> impl Strategy<Value = f64> {
    -1e5..1e5f64
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sagnac_shift_is_odd_and_linear(spin in spin_range()) {
        let p = PhysParams::default_profile();
        let d = derive(&p).unwrap();
        let f = |s: f64| sagnac_shift(p.n, p.radius, s, d.omega_0, p.lambda_vac, p.dn_dlambda);
        prop_assert_eq!(f(-spin), -f(spin));
        // Linear in the spin rate to machine precision.
        prop_assert!((f(2.0 * spin) - 2.0 * f(spin)).abs() <= 1e-12 * f(spin).abs().max(1.0));
    }

    #[test]
    fn efficiencies_are_phase_periodic(theta in 0.0..(2.0 * std::f64::consts::PI)) {
        let mut p = PhysParams::default_profile();
        let kappa = derive(&p).unwrap().kappa;
        p.opa_gain = 0.2 * kappa;
        p.opa_phase = theta;
        let d = derive(&p).unwrap();
        let dp = 0.997 * p.omega_m;
        let steady = solve_steady_plain(&d, &p).unwrap();
        let sol = sidebands::solve_sidebands(&steady, dp, &p, &d, ChiConvention::default()).unwrap();

        p.opa_phase = theta + 2.0 * std::f64::consts::PI;
        let d2 = derive(&p).unwrap();
        let steady2 = solve_steady_plain(&d2, &p).unwrap();
        let sol2 =
            sidebands::solve_sidebands(&steady2, dp, &p, &d2, ChiConvention::default()).unwrap();
        let rel = (sol.a2_plus - sol2.a2_plus).norm() / sol.a2_plus.norm();
        prop_assert!(rel <= 1e-9, "rel = {}", rel);
    }

    #[test]
    fn gain_off_steady_states_agree(spin in spin_range(), power_mw in 0.1..4.0f64) {
        let mut p = PhysParams::default_profile();
        p.omega_spin = spin;
        p.p_control = power_mw * 1e-3;
        p.p_probe = 0.05 * p.p_control;
        let d = derive(&p).unwrap();
        let plain = solve_steady_plain(&d, &p).unwrap();
        let pumped = solve_steady_2wl(&d, &p).unwrap();
        prop_assert!((plain.a_s - pumped.a_s).norm() <= 1e-12 * plain.a_s.norm().max(1e-300));
        prop_assert!((plain.delta_eff - pumped.delta_eff).abs() <= 1e-12 * p.omega_m);
    }

    #[test]
    fn steady_state_is_continuous_in_power(power_mw in 0.2..3.0f64) {
        let mut p = PhysParams::default_profile();
        p.p_control = power_mw * 1e-3;
        let d = derive(&p).unwrap();
        let s0 = solve_steady_plain(&d, &p).unwrap();
        p.p_control *= 1.01;
        let d = derive(&p).unwrap();
        let s1 = solve_steady_plain(&d, &p).unwrap();
        let jump = (s1.delta_eff - s0.delta_eff).abs() / p.omega_m;
        prop_assert!(jump < 0.01, "detuning jumped by {} under a 1% power step", jump);
    }
}
