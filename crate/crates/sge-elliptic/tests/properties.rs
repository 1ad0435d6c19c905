use num_complex::Complex64 as Cplx;
use proptest::prelude::*;

use sge_elliptic::elliptic::{modulus_from_tau, Modulus, PeriodRatio};
use sge_elliptic::format::sig;
use sge_elliptic::jacobi::Jacobi;
use sge_elliptic::solutions::{separatrix, separatrix_w, q_from_w, BreatherDirect, Energy, KinkDirect};
use sge_elliptic::transforms::{landen_gauss_identity, ModularCase};

/// `q_t^2/2 - cos q` from a central difference.
fn energy_of<F: Fn(f64) -> f64>(q: F, t: f64) -> f64 {
    let h = 1e-5;
    let qt = (q(t + h) - q(t - h)) / (2.0 * h);
    0.5 * qt * qt - q(t).cos()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn breather_conserves_energy(h in 0.05f64..1.95, t in -5.0f64..5.0, t0 in -2.0f64..2.0) {
        let b = BreatherDirect::new(Energy::new(h).unwrap()).unwrap();
        let e = energy_of(|s| b.q(s, t0).unwrap(), t);
        prop_assert!((e - (h - 1.0)).abs() < 1e-6, "E = {e}, H - 1 = {}", h - 1.0);
    }

    #[test]
    fn breather_stays_below_its_turning_point(h in 0.05f64..1.95, t in -20.0f64..20.0) {
        let b = BreatherDirect::new(Energy::new(h).unwrap()).unwrap();
        let q_max = 2.0 * (h / 2.0).sqrt().asin();
        prop_assert!(b.q(t, 0.0).unwrap().abs() <= q_max + 1e-12);
    }

    #[test]
    fn kink_conserves_energy_and_advances(h in 2.05f64..12.0, t in -5.0f64..5.0) {
        let k = KinkDirect::new(Energy::new(h).unwrap()).unwrap();
        let q = |s: f64| k.q(s, 0.0).unwrap();
        prop_assert!((energy_of(q, t) - (h - 1.0)).abs() < 1e-6);
        // the wrapped difference is positive: q always moves forward
        let d = (q(t + 1e-3) - q(t)).rem_euclid(2.0 * std::f64::consts::PI);
        prop_assert!(d > 0.0 && d < 1.0);
    }

    #[test]
    fn direct_solutions_are_real_on_the_theta_path(h in 0.05f64..1.95, t in -5.0f64..5.0) {
        let b = BreatherDirect::new(Energy::new(h).unwrap()).unwrap();
        let w = b.w(t, 0.0).unwrap();
        prop_assert!((w.norm() - 1.0).abs() < 1e-12, "|w| = {}", w.norm());
    }

    #[test]
    fn jacobi_pythagorean_identities(k_re in 0.05f64..0.95, k_im in -0.3f64..0.3, re in -2.0f64..2.0, im in -0.5f64..0.5) {
        let m = Modulus::new(Cplx::new(k_re, k_im)).unwrap();
        let j = Jacobi::new(m).unwrap();
        let (sn, cn, dn) = j.sncndn(Cplx::new(re, im)).unwrap();
        let one = Cplx::new(1.0, 0.0);
        prop_assert!((sn * sn + cn * cn - one).norm() < 1e-11);
        prop_assert!((m.m() * sn * sn + dn * dn - one).norm() < 1e-11);
    }

    #[test]
    fn landen_identity(k in 0.05f64..0.95, re in -2.0f64..2.0, im in -0.5f64..0.5) {
        let r = landen_gauss_identity(Cplx::new(re, im), &Modulus::real(k).unwrap()).unwrap();
        prop_assert!(r < 1e-9);
    }

    #[test]
    fn modular_cases_preserve_complementarity(re in -0.5f64..0.5, im in 0.4f64..2.0, case in 1u8..=6) {
        let m = modulus_from_tau(&PeriodRatio::new(Cplx::new(re, im)).unwrap()).unwrap();
        let mapped = ModularCase::new(case).unwrap().modulus_map(&m).unwrap();
        prop_assert!(mapped.complementarity_defect() < 1e-12);
    }

    #[test]
    fn separatrix_phase_form_matches_closed_form(x in -8.0f64..8.0, t in -3.0f64..3.0, v in -0.9f64..0.9) {
        let q = separatrix(x, t, 0.0, v, 1).unwrap();
        let w = separatrix_w(x, t, 0.0, v, 1).unwrap();
        prop_assert!((q_from_w(w) - q).abs() < 1e-12);
    }

    #[test]
    fn csv_digits_round_trip(x in proptest::num::f64::NORMAL) {
        prop_assert_eq!(sig(x, 17).parse::<f64>().unwrap(), x);
    }
}

#[test]
fn energy_regimes_are_disjoint() {
    assert!(Energy::new(1.0).unwrap().is_breather());
    assert!(Energy::new(3.0).unwrap().is_kink());
    assert!(BreatherDirect::new(Energy::new(2.5).unwrap()).is_err());
    assert!(KinkDirect::new(Energy::new(1.5).unwrap()).is_err());
    assert!(Energy::new(-0.1).is_err());
}
