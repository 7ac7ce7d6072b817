use std::f64::consts::{FRAC_PI_2, PI};

use proptest::prelude::*;
use randers_cut::geodesics::{shoot_h_geodesic, StepControl};
use randers_cut::halfperiod::{
    convexity_scan, d2_hf_plus, f_half_period, f_half_period_with, h_half_arclength, h_half_period,
    half_period_curve, numerical_derivatives, psi, xi, xi_paper, CurveSelect, ExampleFamily,
    SignClass, XiConvention,
};
use randers_cut::{Direction, Error, NavigationData, ProfileSpec};

fn h_ex1(lambda: f64, nu: f64) -> f64 {
    PI - lambda * PI * nu / ((lambda + 1.0).sqrt() * (lambda + 1.0 + lambda * nu * nu).sqrt())
}

fn h_ex2(lambda: f64, nu: f64) -> f64 {
    PI - PI * nu * lambda / (1.0 + lambda * nu * nu).sqrt()
}

fn central(f: impl Fn(f64) -> f64, x: f64, h: f64) -> (f64, f64) {
    let (a, b, c) = (f(x - h), f(x), f(x + h));
    ((c - a) / (2.0 * h), (c - 2.0 * b + a) / (h * h))
}

#[test]
fn round_half_period_is_pi() {
    for radius in [0.5, 1.0, 2.0] {
        let spec = ProfileSpec::round(radius).unwrap();
        for k in 1..20 {
            let nu = radius * k as f64 / 20.0;
            assert!((h_half_period(&spec, nu).unwrap() - PI).abs() < 1e-9);
            assert!((h_half_arclength(&spec, nu).unwrap() - PI * radius).abs() < 1e-9);
        }
    }
}

#[test]
fn half_period_is_the_first_return_angle() {
    let spec = ProfileSpec::example2(0.5).unwrap();
    let a = spec.a();
    for nu in [0.2, 0.7, 1.2] {
        let p = shoot_h_geodesic(
            &spec,
            (a, 0.0),
            nu,
            -1,
            3.0 * spec.two_a(),
            &StepControl::with_tol(1e-12),
        )
        .unwrap();
        let s = p.crossings(a).into_iter().find(|&s| s > 1e-6).unwrap();
        assert!((p.state_at(s).theta - h_half_period(&spec, nu).unwrap()).abs() < 1e-8);
        assert!((s - h_half_arclength(&spec, nu).unwrap()).abs() < 1e-8);
    }
}

#[test]
fn xi_inverts_the_profile_on_the_rising_branch() {
    let spec = ProfileSpec::example1(1.0).unwrap();
    for k in 1..40 {
        let nu = spec.equator_m() * k as f64 / 40.0;
        let x = xi(&spec, nu).unwrap();
        assert!(x > 0.0 && x < spec.a());
        assert!((spec.m(x) - nu).abs() < 1e-12);
        assert!((xi_paper(&spec, nu).unwrap() - nu * nu).abs() < 1e-15);
    }
}

#[test]
fn domain_errors() {
    let spec = ProfileSpec::example1(1.0).unwrap();
    assert!(matches!(
        h_half_period(&spec, 0.0),
        Err(Error::ClairautOutOfRange { .. })
    ));
    assert!(matches!(
        h_half_period(&spec, spec.equator_m()),
        Err(Error::ClairautOutOfRange { .. })
    ));
    assert!(matches!(
        xi_paper(&ProfileSpec::round(1.0).unwrap(), 0.5),
        Err(Error::UnsupportedProfile(_))
    ));
    let nav = NavigationData::new(spec, 0.3).unwrap();
    assert!(half_period_curve(&nav, 4, XiConvention::Inverse, CurveSelect::H).is_err());
}

#[test]
fn derivative_stencils_are_exact_on_quartics() {
    let h = 0.1;
    let xs: Vec<f64> = (0..30).map(|i| i as f64 * h).collect();
    let f: Vec<f64> = xs.iter().map(|x| x.powi(4) - 2.0 * x.powi(3) + x).collect();
    let d1 = numerical_derivatives(&f, h, 1).unwrap();
    let d2 = numerical_derivatives(&f, h, 2).unwrap();
    for (k, x) in xs.iter().enumerate() {
        assert!(
            (d1[k] - (4.0 * x.powi(3) - 6.0 * x * x + 1.0)).abs() < 1e-8,
            "d1 at {x}"
        );
        assert!(
            (d2[k] - (12.0 * x * x - 12.0 * x)).abs() < 1e-7,
            "d2 at {x}"
        );
    }
    assert!(numerical_derivatives(&f[..4], h, 1).is_err());
    assert!(numerical_derivatives(&f, h, 3).is_err());
}

#[test]
fn curve_columns_are_consistent() {
    let spec = ProfileSpec::example1(1.0).unwrap();
    let nav = NavigationData::new(spec.clone(), 0.3).unwrap();
    let c = half_period_curve(&nav, 100, XiConvention::Inverse, CurveSelect::HfPlus).unwrap();
    for k in 0..100 {
        let nu = c.nu_grid[k];
        assert!((c.h[k] - h_ex1(1.0, nu)).abs() < 1e-9);
        assert!(
            (c.hf_plus[k] - f_half_period(&nav, nu, Direction::Forward).unwrap()).abs() < 1e-12
        );
        assert!(
            (c.hf_minus[k] - f_half_period(&nav, nu, Direction::Backward).unwrap()).abs() < 1e-12
        );
    }
    // the fourth-order stencil against a wider central difference of the closed form
    let hf = |nu: f64| h_ex1(1.0, nu) + psi(&nav, nu, XiConvention::Inverse).unwrap();
    for k in 10..90 {
        let (d1, _) = central(hf, c.nu_grid[k], 1e-4);
        assert!((c.d1[k] - d1).abs() < 1e-5, "k = {k}");
    }
}

#[test]
fn convexity_thresholds() {
    let ex1 = convexity_scan(
        ExampleFamily::Example1,
        &[1.4, 1.5, 1.6, 1.7],
        400,
        XiConvention::PaperSquare,
    )
    .unwrap();
    let classes: Vec<SignClass> = ex1.rows.iter().map(|r| r.class).collect();
    assert_eq!(
        classes,
        [
            SignClass::Nonpositive,
            SignClass::Nonpositive,
            SignClass::MixedSign,
            SignClass::MixedSign
        ]
    );
    assert_eq!(ex1.threshold_bracket(), Some((1.5, 1.6)));
    let ex2 = convexity_scan(
        ExampleFamily::Example2,
        &[0.55, 0.6, 0.65],
        400,
        XiConvention::PaperSquare,
    )
    .unwrap();
    assert_eq!(ex2.threshold_bracket(), Some((0.6, 0.65)));
    assert!(convexity_scan(
        ExampleFamily::Example2,
        &[1.2],
        400,
        XiConvention::PaperSquare
    )
    .is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn example1_closed_form(lambda in 0.05f64..3.0, t in 0.005f64..0.995) {
        let spec = ProfileSpec::example1(lambda).unwrap();
        let nu = spec.equator_m() * t;
        prop_assert!((h_half_period(&spec, nu).unwrap() - h_ex1(lambda, nu)).abs() < 1e-8);
    }

    #[test]
    fn example2_closed_form(lambda in 0.05f64..0.95, t in 0.005f64..0.995) {
        let spec = ProfileSpec::example2(lambda).unwrap();
        let nu = spec.equator_m() * t;
        prop_assert!((h_half_period(&spec, nu).unwrap() - h_ex2(lambda, nu)).abs() < 1e-8);
    }

    #[test]
    fn finsler_half_periods_bracket_h(kind in 0u8..2, lambda in 0.1f64..0.9, w in 0.01f64..0.99, t in 0.01f64..0.99) {
        let spec = if kind == 0 { ProfileSpec::example1(2.0 * lambda).unwrap() } else { ProfileSpec::example2(lambda).unwrap() };
        let nav = NavigationData::new(spec.clone(), w * spec.max_wind()).unwrap();
        let nu = spec.equator_m() * t;
        let h = h_half_period(&spec, nu).unwrap();
        let x = xi(&spec, nu).unwrap();
        let shift = 2.0 * nav.mu() * (spec.a() - x);
        prop_assert!(shift > 0.0);
        prop_assert!((f_half_period(&nav, nu, Direction::Forward).unwrap() - (h + shift)).abs() < 1e-12);
        prop_assert!((f_half_period(&nav, nu, Direction::Backward).unwrap() - (h - shift)).abs() < 1e-12);
        let paper = f_half_period_with(&nav, nu, Direction::Forward, XiConvention::PaperSquare).unwrap();
        prop_assert!((paper - (h + 2.0 * nav.mu() * (spec.a() - nu * nu))).abs() < 1e-12);
    }

    /// Wherever H decreases, H_F⁺ decreases too.
    #[test]
    fn monotonicity_propagates(kind in 0u8..2, lambda in 0.1f64..0.9, w in 0.01f64..0.99, t in 0.02f64..0.98) {
        let spec = if kind == 0 { ProfileSpec::example1(2.0 * lambda).unwrap() } else { ProfileSpec::example2(lambda).unwrap() };
        let nav = NavigationData::new(spec.clone(), w * spec.max_wind()).unwrap();
        let nu = spec.equator_m() * t;
        let step = 1e-5 * spec.equator_m();
        let (dh, _) = central(|v| h_half_period(&spec, v).unwrap(), nu, step);
        let (dhf, _) = central(|v| f_half_period(&nav, v, Direction::Forward).unwrap(), nu, step);
        if dh < 0.0 {
            prop_assert!(dhf < 0.0);
        }
    }

    #[test]
    fn psi_decreases(kind in 0u8..2, lambda in 0.1f64..0.9, w in 0.01f64..0.99, t in 0.01f64..0.98) {
        let spec = if kind == 0 { ProfileSpec::example1(2.0 * lambda).unwrap() } else { ProfileSpec::example2(lambda).unwrap() };
        let nav = NavigationData::new(spec.clone(), w * spec.max_wind()).unwrap();
        let nu = spec.equator_m() * t;
        let later = nu + 0.01 * spec.equator_m();
        prop_assert!(psi(&nav, later, XiConvention::Inverse).unwrap() < psi(&nav, nu, XiConvention::Inverse).unwrap());
    }

    /// Second derivative of `H_F⁺` against a difference quotient of the
    /// quadrature values, for both conventions.
    #[test]
    fn second_derivative_matches_differences(kind in 0u8..2, t in 0.05f64..0.95) {
        let (family, lambda) = if kind == 0 { (ExampleFamily::Example1, 1.5) } else { (ExampleFamily::Example2, 0.6) };
        let spec = family.profile(lambda).unwrap();
        let nav = NavigationData::new(spec.clone(), 0.5 * spec.max_wind()).unwrap();
        let nu = spec.equator_m() * t;
        for convention in [XiConvention::Inverse, XiConvention::PaperSquare] {
            let (_, fd) = central(|v| f_half_period_with(&nav, v, Direction::Forward, convention).unwrap(), nu, 1e-3);
            let exact = d2_hf_plus(family, lambda, nu, convention).unwrap();
            prop_assert!((fd - exact).abs() < 1e-4 * (1.0 + exact.abs()), "{convention:?}: {fd} vs {exact}");
        }
    }
}

#[test]
fn equator_limit_of_the_arclength() {
    // tangent to the equator the half arclength tends to π / sqrt(G(a))
    let spec = ProfileSpec::example2(0.5).unwrap();
    let limit = PI / spec.gaussian_curvature(FRAC_PI_2).unwrap().sqrt();
    let h_limit = limit / spec.equator_m();
    for e in [1e-3, 1e-6, 1e-9, 1e-12] {
        let nu = spec.equator_m() * (1.0 - e);
        let gap = (h_half_arclength(&spec, nu).unwrap() - limit).abs();
        assert!(gap < 10.0 * e.sqrt(), "{e}: {gap}");
        assert!((h_half_period(&spec, nu).unwrap() - h_limit).abs() < 10.0 * e.sqrt());
    }
}
