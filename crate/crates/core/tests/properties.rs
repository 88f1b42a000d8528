use std::f64::consts::PI;

use approx::assert_relative_eq;
use proptest::prelude::*;
use unruh_kinetics::fermion::{fermion_population_rhs, fermion_rates, BathSpectrum};
use unruh_kinetics::kernels::{g_thermal_accelerated, g_thermal_inertial, g_thermal_inertial_sum};
use unruh_kinetics::master::{closed_form, decay_rate, evolve, rate_rhs, steady_state, PopulationState};
use unruh_kinetics::rates::{atom_rr_rate, atom_total_rate, atom_vf_rate, planck_bracket};
use unruh_kinetics::special::{coth_diff_quotient, hurwitz_zeta};
use unruh_kinetics::{AtomState, DetectorParams, OrderingParam, Regularization};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn coth_quotient_is_symmetric_and_positive(a in 0.01f64..20.0, b in 0.01f64..20.0) {
        prop_assume!((a - b).abs() > 1e-6);
        let q = coth_diff_quotient(a, b);
        prop_assert!(q > 0.0);
        assert_relative_eq!(q, coth_diff_quotient(b, a), max_relative = 1e-13);
        let direct = (1.0 / a.tanh() - 1.0 / b.tanh()) / (b - a);
        if (a - b).abs() > 0.1 && a.max(b) < 5.0 {
            assert_relative_eq!(q, direct, max_relative = 1e-9);
        }
    }

    #[test]
    fn zeta_recurrence(k in 2u32..8, re in 0.3f64..5.0, im in -3.0f64..3.0) {
        let a = num_complex::Complex64::new(re, im);
        let lhs = hurwitz_zeta(k, a) - hurwitz_zeta(k, a + 1.0);
        let rhs = a.powi(-(k as i32));
        prop_assert!((lhs - rhs).norm() <= 1e-11 * rhs.norm().max(1.0));
    }

    #[test]
    fn unruh_correspondence(u in 0.05f64..4.0, alpha in 0.05f64..6.0) {
        let a = g_thermal_accelerated(u, 0.0, f64::INFINITY, alpha).unwrap().re();
        let b = g_thermal_inertial(u, 2.0 * PI / alpha, 0.0).unwrap().re();
        assert_relative_eq!(a, b, max_relative = 64.0 * f64::EPSILON);
    }

    #[test]
    fn thermal_kernel_is_negative_and_even(u in 0.05f64..4.0, beta in 0.2f64..10.0, v in 0.0f64..0.9) {
        let g = g_thermal_inertial(u, beta, v).unwrap().re();
        prop_assert!(g < 0.0);
        assert_relative_eq!(g, g_thermal_inertial(-u, beta, v).unwrap().re(), max_relative = 1e-14);
        // sinh x > x bounds the thermal kernel by the vacuum one
        prop_assert!(g.abs() < g_thermal_inertial(u, f64::INFINITY, v).unwrap().re().abs());
    }

    #[test]
    fn thermal_kernel_matches_image_sum(ratio in 0.05f64..2.0, beta in 0.3f64..5.0) {
        let u = ratio * beta;
        let s = g_thermal_inertial_sum(u, beta, 0.0, &Regularization::default()).unwrap().re();
        assert_relative_eq!(s, g_thermal_inertial(u, beta, 0.0).unwrap().re(), max_relative = 1e-8);
    }

    #[test]
    fn evolve_tracks_closed_form(p in 0.0f64..1.0, omega0 in 0.1f64..3.0, beta in 0.05f64..20.0) {
        let init = PopulationState::with_excited(p).unwrap();
        let tau = 3.0 / decay_rate(omega0, beta);
        let traj = evolve(&init, omega0, beta, tau, None).unwrap();
        prop_assert!(traj.max_defect <= 1e-12);
        let exact = closed_form(&init, omega0, beta, tau).unwrap();
        prop_assert!(traj.last().distance(&exact) <= 1e-8);
        let s = traj.last();
        prop_assert!((s.sigma_plus + s.sigma_minus - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn steady_state_is_fixed_point(omega0 in 0.1f64..3.0, beta in 0.01f64..30.0) {
        let s = steady_state(omega0, beta).unwrap();
        let (dp, dm) = rate_rhs(&s, omega0, beta).unwrap();
        prop_assert!(dp.abs() <= 1e-15 && dm == -dp);
        assert_relative_eq!(s.sigma_plus / s.sigma_minus, (-omega0 * beta).exp(), max_relative = 1e-12);
    }

    #[test]
    fn fermion_rhs_conserves(p in 0.0f64..1.0, beta in 0.01f64..50.0, dt in 0.5f64..20.0) {
        let rates = fermion_rates(&BathSpectrum::uniform(1.0, 0.1, 21, beta).unwrap(), 1.0, dt).unwrap();
        let r = fermion_population_rhs(2, &[p, 1.0 - p], &rates).unwrap();
        prop_assert_eq!(r[0] + r[1], 0.0);
        prop_assert!(rates.t_f >= 0.0 && rates.t_f <= 0.5 * rates.c * (1.0 + 1e-12));
    }

    #[test]
    fn stimulated_rate_falls_with_beta(b1 in 0.01f64..20.0, b2 in 0.01f64..20.0) {
        prop_assume!(b1 < b2);
        let t = |b: f64| fermion_rates(&BathSpectrum::uniform(1.0, 0.2, 11, b).unwrap(), 1.0, 4.0).unwrap().t_f;
        prop_assert!(t(b1) >= t(b2));
    }

    #[test]
    fn rate_decomposition(omega0 in 0.05f64..5.0, mu in 0.01f64..2.0, alpha in 0.0f64..10.0,
                          r3 in -0.5f64..0.5, lambda in 0.0f64..1.0) {
        let d = DetectorParams::new(omega0, mu).unwrap();
        let atom = AtomState::new(r3).unwrap();
        let sym = atom_total_rate(&d, alpha, &atom, OrderingParam::symmetric()).unwrap();
        let any = atom_total_rate(&d, alpha, &atom, OrderingParam::new(lambda).unwrap()).unwrap();
        prop_assert_eq!(sym.total, any.total);
        let (vf, rr) = (sym.vf.unwrap(), sym.rr.unwrap());
        prop_assert!((vf + rr - sym.total).abs() <= 1e-12 * sym.total.abs().max(1e-300) + 1e-300);
        prop_assert!(rr < 0.0);
        if r3 != 0.0 {
            prop_assert_eq!(vf.signum(), -r3.signum());
        }
        let up = atom_vf_rate(&d, alpha, &AtomState::new(r3.abs()).unwrap()).unwrap();
        let down = atom_vf_rate(&d, alpha, &AtomState::new(-r3.abs()).unwrap()).unwrap();
        prop_assert_eq!(up, -down);
        let ground = atom_total_rate(&d, alpha, &AtomState::minus(), OrderingParam::new(lambda).unwrap()).unwrap();
        prop_assert_eq!(ground.total, 0.0);
        prop_assert_eq!(atom_rr_rate(&d, alpha).unwrap(), rr);
    }

    #[test]
    fn bracket_is_coth(omega0 in 0.01f64..10.0, alpha in 0.01f64..10.0) {
        assert_relative_eq!(planck_bracket(omega0, alpha), 1.0 / (PI * omega0 / alpha).tanh(), max_relative = 1e-12);
    }
}
