use std::f64::consts::PI;

use mathphys_core::heatburgers::{series_case_a, series_case_b, RodSpec, SeriesTruncation};
use mathphys_core::higgs::{stability_check, TwoHiggsParams};
use mathphys_core::mechanics::{motion_band, theta_at_start, theta_function, DimensionlessTop};
use mathphys_core::numerics::RandomStream;
use mathphys_core::quantum::{torus_eigenvalue, TorusSpec};
use mathphys_core::walk::{occupation, site_cutoff, WalkParams};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn occupation_is_a_symmetric_law(alpha in 0.05f64..1.0, tau in 0.1f64..5.0, t in 0.1f64..40.0) {
        let p = WalkParams::new(alpha, tau).unwrap();
        let cut = site_cutoff(&p, t);
        let mut total = 0.0;
        for m in -cut..=cut {
            let f = occupation(&p, m, t);
            prop_assert_eq!(f, occupation(&p, -m, t));
            prop_assert!((0.0..=1.0).contains(&f));
            total += f;
        }
        prop_assert!((total - 1.0).abs() < 1e-10, "total {}", total);
    }

    #[test]
    fn torus_spectrum_symmetries(
        phi1 in -7.0f64..7.0,
        phi2 in -7.0f64..7.0,
        n1 in -10i64..=10,
        n2 in -10i64..=10,
    ) {
        let t = TorusSpec::new(1.0, 1.4, phi1, phi2).unwrap();
        let e = torus_eigenvalue(&t, n1, n2);
        let reversed = TorusSpec { phi1: -phi1, phi2: -phi2, ..t };
        prop_assert_eq!(e, torus_eigenvalue(&reversed, -n1, -n2));
        let shifted = TorusSpec { phi1: phi1 + 2.0 * PI, ..t };
        let e_shift = torus_eigenvalue(&shifted, n1 + 1, n2);
        prop_assert!((e_shift - e).abs() <= 1e-12 * e.max(1.0));
    }

    #[test]
    fn stability_classification_matches_eigenvalues(seed in any::<u64>(), v1 in 0.2f64..2.0, v2 in 0.2f64..2.0) {
        let mut s = RandomStream::new(seed, 0);
        let p = TwoHiggsParams::random(&mut s, false).with_tadpoles_solved(v1, v2).unwrap();
        let r = stability_check(&p, v1, v2).unwrap();
        let (lo, hi) = r.eigenvalues;
        let scale = hi.abs().max(lo.abs()).max(1.0);
        prop_assume!(lo.abs() > 1e-12 * scale);
        prop_assert_eq!(r.locally_stable(), lo >= 0.0 && hi >= 0.0);
    }

    #[test]
    fn band_contains_starting_height(alpha in 0.0f64..2.0, bg in 1e-3f64..3.0, eps in 0.05f64..1.5) {
        let d = DimensionlessTop { alpha, beta: 1.0, gamma: bg };
        let start = theta_function(&d, eps, eps.cos());
        prop_assert!((start - theta_at_start(&d, eps)).abs() <= 1e-12 * (1.0 + bg));
        if let Ok(b) = motion_band(&d, eps) {
            let (lo, hi) = b.cos_theta_range;
            prop_assert!(lo - 1e-12 <= eps.cos() && eps.cos() <= hi + 1e-12);
        }
    }

    #[test]
    fn uniform_rod_obeys_maximum_principle(frac in 0.02f64..3.0, x in 0.0f64..1.0) {
        let r = RodSpec::new(1.0, 0.7, 1.0).unwrap();
        let v = series_case_a(&r, 2.0, x, frac * r.time_scale(), &SeriesTruncation::default()).unwrap();
        prop_assert!((-2e-3..=2.0 * (1.0 + 1e-3)).contains(&v), "T = {}", v);
    }

    #[test]
    fn point_source_heats_monotonically(f1 in 0.05f64..3.0, gap in 0.01f64..2.0, x in 0.05f64..0.95) {
        let r = RodSpec::new(1.0, 1.0, 1.0).unwrap();
        let tr = SeriesTruncation::default();
        let t1 = f1 * r.time_scale();
        let t2 = (f1 + gap) * r.time_scale();
        let a = series_case_b(&r, 1.0, x, t1, &tr).unwrap();
        let b = series_case_b(&r, 1.0, x, t2, &tr).unwrap();
        prop_assert!(b >= a - 1e-12, "{} then {}", a, b);
    }
}

#[test]
fn uniform_rod_energy_decays() {
    let r = RodSpec::new(1.0, 1.0, 1.0).unwrap();
    let tr = SeriesTruncation::default();
    let xs: Vec<f64> = (0..=200).map(|i| i as f64 / 200.0).collect();
    let mut last = f64::INFINITY;
    for f in [0.05, 0.1, 0.2, 0.5, 1.0, 2.0, 4.0] {
        let v: Vec<f64> = xs.iter().map(|&x| series_case_a(&r, 1.0, x, f * r.time_scale(), &tr).unwrap()).collect();
        let energy: f64 = v.windows(2).map(|w| 0.5 * (w[0] * w[0] + w[1] * w[1]) / 200.0).sum();
        assert!(energy < last);
        last = energy;
    }
}
