use std::f64::consts::{FRAC_PI_2, PI, TAU};

use proptest::prelude::*;
use spinon_core::dcf::{s2_pm, COMPONENT_FACTOR};
use spinon_core::formfactor::{abs_a_squared, Branch, FormFactorArg, QuadratureSpec};
use spinon_core::kinematics::{band_boundaries, invert_kinematics, KinematicPoint};
use spinon_core::xxz::{
    solve_nome, tau, xxz_energy, xxz_energy_from_tau, xxz_momentum, SpectralParam, TAU_PHASE_OFFSET,
};

fn spec() -> QuadratureSpec {
    QuadratureSpec::default()
}

fn wrap(x: f64) -> f64 {
    x.rem_euclid(TAU)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn inversion_round_trip(k in 1e-6..TAU - 1e-6, u in 1e-9..1.0 - 1e-9) {
        let band = band_boundaries(k).unwrap();
        let w = band.lower + band.width() * u;
        prop_assume!(band.contains(w));
        let pair = invert_kinematics(KinematicPoint::new(w, k).unwrap()).unwrap();
        prop_assert!(pair.beta1().value() <= pair.beta2().value());
        prop_assert!(((pair.energy() - w) / w).abs() < 1e-10);
        prop_assert!(((pair.momentum() - k) / k).abs() < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn reflection_about_pi(k in 0.01..PI - 0.01, w in 0.0..TAU) {
        let a = s2_pm(KinematicPoint::new(w, k).unwrap(), &spec()).unwrap().s_pm;
        let b = s2_pm(KinematicPoint::new(w, TAU - k).unwrap(), &spec()).unwrap().s_pm;
        prop_assert!((a - b).abs() <= 1e-10 * a.abs().max(1.0));
    }

    #[test]
    fn support_and_sign(k in 0.0..TAU, w in 0.0..8.0) {
        let band = band_boundaries(k).unwrap();
        let v = s2_pm(KinematicPoint::new(w, k).unwrap(), &spec()).unwrap();
        prop_assert!(v.s_pm >= 0.0 && v.s_pm.is_finite());
        prop_assert_eq!(v.in_band, band.contains(w));
        if !band.contains(w) {
            prop_assert_eq!(v.s_pm, 0.0);
        }
    }

    #[test]
    fn amplitude_even_in_gamma(g in 0.0..10.0, d in 0.0..3.0, plus in any::<bool>()) {
        let b = if plus { Branch::Plus } else { Branch::Minus };
        let at = |g| abs_a_squared(&FormFactorArg::new(g, d, b).unwrap(), &spec()).unwrap();
        let (x, y) = (at(g), at(-g));
        prop_assert!(x > 0.0);
        prop_assert_eq!(x.to_bits(), y.to_bits());
    }

    #[test]
    fn tau_is_a_phase(alpha in -3.0..3.0, eps in 0.3f64..3.0) {
        let a = solve_nome(-(-eps).exp()).unwrap();
        let t = tau(SpectralParam { alpha }, &a).unwrap();
        prop_assert!((t.norm() - 1.0).abs() < 1e-10);
        let phase = wrap(t.arg() + xxz_momentum(alpha, &a));
        let off = (phase - TAU_PHASE_OFFSET).abs();
        prop_assert!(off.min(TAU - off) < 1e-9, "phase offset {}", phase);
    }

    #[test]
    fn energy_from_translation_eigenvalue(alpha in -1.5..1.5, eps in 0.5f64..2.5) {
        let a = solve_nome(-(-eps).exp()).unwrap();
        let direct = xxz_energy(alpha, &a);
        let from_tau = xxz_energy_from_tau(alpha, &a, 1e-5).unwrap();
        prop_assert!((direct - from_tau).abs() < 1e-6 * direct.abs());
    }

    #[test]
    fn xxz_symmetries(alpha in -3.0..3.0, eps in 0.05f64..4.0) {
        let a = solve_nome(-(-eps).exp()).unwrap();
        prop_assert!((xxz_energy(alpha, &a) - xxz_energy(-alpha, &a)).abs() < 1e-12 * xxz_energy(alpha, &a));
        let p = xxz_momentum(alpha, &a) + FRAC_PI_2;
        let m = xxz_momentum(-alpha, &a) + FRAC_PI_2;
        prop_assert!((p + m).abs() < 1e-12);
        // dn spans many decades near the isotropic end; compare on the scale of e(0)
        let scale = xxz_energy(0.0, &a);
        prop_assert!((xxz_energy(alpha + PI, &a) - xxz_energy(alpha, &a)).abs() < 1e-10 * scale);
    }
}

#[test]
fn components_are_exact_multiples() {
    let pt = KinematicPoint::new(2.0, 1.3).unwrap();
    let s = s2_pm(pt, &spec()).unwrap().s_pm;
    let (x, y, z) = spinon_core::dcf::s2_components(pt, &spec()).unwrap();
    assert_eq!(COMPONENT_FACTOR, 4.0);
    assert_eq!((x.to_bits(), y.to_bits(), z.to_bits()), ((4.0 * s).to_bits(), (4.0 * s).to_bits(), (4.0 * s).to_bits()));
}

#[test]
fn nome_matches_q_across_the_range() {
    for q in [-0.999, -0.9, -0.5, -0.1, -1e-3, -1e-8] {
        let a = solve_nome(q).unwrap();
        assert!((a.nome() + q).abs() <= 1e-12, "{q}");
        assert!((a.delta() - 0.5 * (q + 1.0 / q)).abs() <= 1e-12 * a.delta().abs());
        assert!(a.delta() < -1.0);
    }
    for q in [0.5, -1.0, 0.0, f64::NAN] {
        assert!(solve_nome(q).is_err());
    }
}

#[test]
fn isotropic_energy_scale() {
    // e(α = 0) -> π as ε -> 0
    let e = |eps: f64| xxz_energy(0.0, &solve_nome(-(-eps).exp()).unwrap());
    assert!((e(0.01) - PI).abs() < 1e-4);
    assert!((e(0.01) - PI * 0.01f64.sinh() / 0.01).abs() < 1e-12);
}
