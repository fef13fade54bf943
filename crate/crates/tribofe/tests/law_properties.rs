//! Property-based invariants of the constitutive laws and the return map.

use proptest::prelude::*;
use tribofe::contact::{friction_return_map, Regime};
use tribofe::mesh::Mesh;
use tribofe::traction::{
    calibrate_from_physical, derived_constants, g_cut_ea, t_slide_di, t_slide_ea, AdhesionParams,
    DiLaw, EaLaw, RegularizationConfig,
};

proptest! {
    #[test]
    fn calibration_round_trips(t_max in 1e-3..1e3f64, w_adh in 1e-3..1e3f64) {
        let p = calibrate_from_physical(t_max, w_adh).unwrap();
        let c = derived_constants(&p);
        prop_assert!(((c.t_max - t_max) / t_max).abs() < 1e-12);
        prop_assert!(((c.w_adh - w_adh) / w_adh).abs() < 1e-12);
        // and the inverse direction
        let q = calibrate_from_physical(c.t_max, c.w_adh).unwrap();
        prop_assert!(((q.hamaker - p.hamaker) / p.hamaker).abs() < 1e-12);
        prop_assert!(((q.r0 - p.r0) / p.r0).abs() < 1e-12);
    }

    #[test]
    fn di_threshold_is_decreasing_and_bounded(
        tau in 1e-3..10.0f64,
        g_cut_frac in 0.5..2.0f64,
        k_scale in 50.0..500.0f64,
        seed in 0u64..1000,
    ) {
        let p = AdhesionParams::new(0.01, 0.4).unwrap();
        let law = DiLaw { tau_di: tau, g_cut: g_cut_frac * p.r0, k_di: k_scale / p.r0 };
        // probe inside the representable logistic band
        let band = 30.0 / law.k_di;
        let mut prev = f64::INFINITY;
        for i in 0..200 {
            let g = law.g_cut - band + (2.0 * band) * (i as f64 + (seed % 7) as f64 / 7.0) / 200.0;
            let t = t_slide_di(g, &law, true);
            prop_assert!(t > 0.0 && t < law.tau_di);
            prop_assert!(t < prev);
            prev = t;
        }
    }

    #[test]
    fn ea_threshold_nonnegative_and_zero_beyond_cutoff(
        mu in 0.0..3.0f64,
        s_cut in 0.0..=1.0f64,
        g_frac in -1.0..4.0f64,
        j_cl in 0.2..3.0f64,
    ) {
        let p = calibrate_from_physical(0.165, 0.0135).unwrap();
        let reg = RegularizationConfig::for_params(&p);
        let c = derived_constants(&p);
        let law = EaLaw { mu_ea: mu, s_cut };
        let g = g_frac * p.r0;
        let t = t_slide_ea(g, &law, j_cl, &p, &reg).unwrap();
        prop_assert!(t >= 0.0, "threshold {t} at g {g}");
        let g_cut = g_cut_ea(s_cut, &c).unwrap();
        if g >= g_cut {
            prop_assert!(t == 0.0);
        }
    }

    #[test]
    fn return_map_is_consistent(
        committed in -2.0..2.0f64,
        eps_t in 1e-2..1e3f64,
        delta in -0.5..0.5f64,
        threshold in 0.0..2.0f64,
    ) {
        let rm = friction_return_map(committed, eps_t, delta, threshold, 1e-12);
        let trial = committed + eps_t * delta;
        prop_assert!(rm.dissipation_increment >= 0.0);
        if trial.abs() < threshold {
            prop_assert_eq!(rm.regime, Regime::Stick);
            prop_assert_eq!(rm.t_t, trial);
            prop_assert_eq!(rm.plastic_increment, 0.0);
        } else {
            prop_assert!(rm.t_t.abs() <= threshold);
            prop_assert!((rm.t_t.abs() - threshold).abs() < 1e-12);
            // the plastic slip carries the sign of the trial state
            if trial != 0.0 {
                prop_assert!(rm.plastic_increment * trial >= 0.0);
            }
        }
    }

    #[test]
    fn mesh_text_round_trips(
        nx in 1usize..7,
        ny in 1usize..5,
        w in 0.1..50.0f64,
        h in 0.1..20.0f64,
    ) {
        let mesh = Mesh::rectangle(nx, ny, w, h);
        let back = Mesh::parse(&mesh.write()).unwrap();
        prop_assert_eq!(mesh, back);
    }
}
