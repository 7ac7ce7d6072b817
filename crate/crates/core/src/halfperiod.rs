//! Half-period functions `H(ν)` and their Finsler shifts `H ± 2μ(a − ξ(ν))`.

use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{integrate, Tolerance};
use crate::surfaces::{Direction, NavigationData, ProfileFamily, ProfileSpec};

/// How `ξ(ν)` enters the Finsler shift `ψ(ν) = 2μ(a − ξ(ν))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum XiConvention {
    /// `ξ = m⁻¹` on the rising branch `(0, a)`.
    Inverse,
    /// `ξ(ν) = ν²`, the convention behind the published closed forms for the
    /// two example families.
    PaperSquare,
}

fn check_nu(spec: &ProfileSpec, nu: f64) -> Result<()> {
    let top = spec.equator_m();
    if !(nu > 0.0 && nu < top) {
        return Err(Error::ClairautOutOfRange {
            nu,
            reason: format!("must lie in (0, m(a)) = (0, {top})"),
        });
    }
    Ok(())
}

/// Radius of the parallel tangent to geodesics with Clairaut constant `nu`.
pub fn xi(spec: &ProfileSpec, nu: f64) -> Result<f64> {
    check_nu(spec, nu)?;
    if !spec.is_rising_to_equator(512) {
        return Err(Error::UnsupportedProfile(
            "m is not increasing on (0, a); ξ is not single valued".into(),
        ));
    }
    let (mut lo, mut hi) = (0.0, spec.a());
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if spec.m(mid) < nu {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut r = 0.5 * (lo + hi);
    for _ in 0..2 {
        let v = spec.eval_raw(r);
        if v.dm <= 0.0 {
            break;
        }
        let next = r - (v.m - nu) / v.dm;
        if (next - r).abs() > 1e-10 {
            break;
        }
        r = next;
    }
    Ok(r)
}

/// `ξ(ν) = ν²`; defined for the two example families only.
pub fn xi_paper(spec: &ProfileSpec, nu: f64) -> Result<f64> {
    match spec.family() {
        ProfileFamily::Example1 { .. } | ProfileFamily::Example2 { .. } => {
            check_nu(spec, nu)?;
            Ok(nu * nu)
        }
        _ => Err(Error::UnsupportedProfile(
            "the ν² convention exists only for the example families".into(),
        )),
    }
}

pub fn xi_with(spec: &ProfileSpec, nu: f64, convention: XiConvention) -> Result<f64> {
    match convention {
        XiConvention::Inverse => xi(spec, nu),
        XiConvention::PaperSquare => xi_paper(spec, nu),
    }
}

/// `2 ∫_ξ^a f(τ) / sqrt(m(τ) − m(ξ)) dτ` with `τ = ξ + (a − ξ) u²`. Writing
/// `m(τ) − m(ξ) = (a − ξ) u² q` with `q` the mean slope over `[ξ, τ]`, the
/// square-root singularity cancels against `dτ = 2 (a − ξ) u du`.
fn from_tangency<F: Fn(f64) -> f64>(spec: &ProfileSpec, xi: f64, f: F) -> Result<f64> {
    let span = spec.a() - xi;
    let g = |u: f64| {
        let d = span * u * u;
        let q = spec.m_mean_slope(xi, d);
        2.0 * f(xi + d) * (span / q).sqrt()
    };
    // table knots are where the integrand loses smoothness
    let mut cuts: Vec<f64> = spec
        .breaks_within(xi, spec.a())
        .iter()
        .map(|&k| ((k - xi) / span).sqrt())
        .collect();
    cuts.insert(0, 0.0);
    cuts.push(1.0);
    let tol = Tolerance {
        abs: 1e-12 / (cuts.len() - 1) as f64,
        rel: 1e-12,
        max_intervals: 4000,
    };
    let mut total = 0.0;
    for w in cuts.windows(2) {
        total += integrate(g, w[0], w[1], tol)?.value;
    }
    Ok(2.0 * total)
}

/// Riemannian half period `H(ν) = 2 ∫_ξ^a ν / (m sqrt(m² − ν²)) dτ`.
pub fn h_half_period(spec: &ProfileSpec, nu: f64) -> Result<f64> {
    let x = xi(spec, nu)?;
    let mx = spec.m(x);
    from_tangency(spec, x, |t| {
        let m = spec.m(t);
        nu / (m * (m + mx).sqrt())
    })
}

/// h-length of one equator-to-equator arc, `2 ∫_ξ^a m / sqrt(m² − ν²) dτ`.
pub fn h_half_arclength(spec: &ProfileSpec, nu: f64) -> Result<f64> {
    let x = xi(spec, nu)?;
    let mx = spec.m(x);
    from_tangency(spec, x, |t| {
        let m = spec.m(t);
        m / (m + mx).sqrt()
    })
}

/// `ψ(ν) = 2μ(a − ξ(ν))`.
pub fn psi(nav: &NavigationData, nu: f64, convention: XiConvention) -> Result<f64> {
    let x = xi_with(nav.profile(), nu, convention)?;
    Ok(2.0 * nav.mu() * (nav.profile().a() - x))
}

/// `H_F±(ν) = H(ν) ± ψ(ν)` with `ξ = m⁻¹`.
pub fn f_half_period(nav: &NavigationData, nu: f64, direction: Direction) -> Result<f64> {
    f_half_period_with(nav, nu, direction, XiConvention::Inverse)
}

pub fn f_half_period_with(
    nav: &NavigationData,
    nu: f64,
    direction: Direction,
    convention: XiConvention,
) -> Result<f64> {
    let h = h_half_period(nav.profile(), nu)?;
    Ok(h + direction.sign() * psi(nav, nu, convention)?)
}

/// First or second derivative of samples on a uniform grid with spacing `h`:
/// fourth-order central stencils inside, one-sided five-point stencils at the
/// two ends of each side.
pub fn numerical_derivatives(values: &[f64], h: f64, order: u8) -> Result<Vec<f64>> {
    let n = values.len();
    if n < 5 {
        return Err(Error::GridTooSmall { got: n, need: 5 });
    }
    if !(h > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "grid spacing must be positive, got {h}"
        )));
    }
    let f = values;
    let (lead0, lead1, central, scale): (&[f64], &[f64], &[f64], f64) = match order {
        1 => (
            &[-25.0, 48.0, -36.0, 16.0, -3.0],
            &[-3.0, -10.0, 18.0, -6.0, 1.0],
            &[1.0, -8.0, 0.0, 8.0, -1.0],
            12.0 * h,
        ),
        2 => (
            &[35.0, -104.0, 114.0, -56.0, 11.0],
            &[11.0, -20.0, 6.0, 4.0, -1.0],
            &[-1.0, 16.0, -30.0, 16.0, -1.0],
            12.0 * h * h,
        ),
        _ => {
            return Err(Error::InvalidArgument(format!(
                "derivative order {order} not in {{1, 2}}"
            )))
        }
    };
    // mirrored stencils change sign for odd orders
    let flip = if order == 1 { -1.0 } else { 1.0 };
    let dot = |w: &[f64], start: usize, rev: bool| -> f64 {
        (0..5)
            .map(|k| w[k] * if rev { f[start - k] } else { f[start + k] })
            .sum::<f64>()
    };
    let mut out = vec![0.0; n];
    out[0] = dot(lead0, 0, false) / scale;
    out[1] = dot(lead1, 0, false) / scale;
    out[n - 1] = flip * dot(lead0, n - 1, true) / scale;
    out[n - 2] = flip * dot(lead1, n - 1, true) / scale;
    for (i, o) in out.iter_mut().enumerate().take(n - 2).skip(2) {
        *o = dot(central, i - 2, false) / scale;
    }
    Ok(out)
}

/// Published closed forms for the example families.
pub mod closed_form {
    use super::*;

    pub mod example1 {
        use super::*;

        pub fn h(lambda: f64, nu: f64) -> f64 {
            let l1 = lambda + 1.0;
            PI - lambda * PI * nu / (l1.sqrt() * (l1 + lambda * nu * nu).sqrt())
        }

        pub fn dh(lambda: f64, nu: f64) -> f64 {
            let l1 = lambda + 1.0;
            -PI * lambda * l1.sqrt() / (l1 + lambda * nu * nu).powf(1.5)
        }

        pub fn d2h(lambda: f64, nu: f64) -> f64 {
            let l1 = lambda + 1.0;
            3.0 * PI * lambda * lambda * nu * l1.sqrt() / (l1 + lambda * nu * nu).powf(2.5)
        }

        /// `H_F⁺` with `μ = μ_max / 2` and `ξ = ν²`.
        pub fn hf_plus(lambda: f64, nu: f64) -> f64 {
            h(lambda, nu) + (FRAC_PI_2 - nu * nu) / (lambda + 1.0).sqrt()
        }

        pub fn d2hf_plus(lambda: f64, nu: f64) -> f64 {
            d2h(lambda, nu) - 2.0 / (lambda + 1.0).sqrt()
        }
    }

    pub mod example2 {
        use super::*;

        pub fn h(lambda: f64, nu: f64) -> f64 {
            PI - PI * nu * lambda / (1.0 + lambda * nu * nu).sqrt()
        }

        pub fn dh(lambda: f64, nu: f64) -> f64 {
            -PI * lambda / (1.0 + lambda * nu * nu).powf(1.5)
        }

        pub fn d2h(lambda: f64, nu: f64) -> f64 {
            3.0 * PI * lambda * lambda * nu / (1.0 + lambda * nu * nu).powf(2.5)
        }

        /// `H_F⁺` with `μ = μ_max / 2` and `ξ = ν²`.
        pub fn hf_plus(lambda: f64, nu: f64) -> f64 {
            h(lambda, nu) + (1.0 - lambda).sqrt() * (FRAC_PI_2 - nu * nu)
        }

        pub fn d2hf_plus(lambda: f64, nu: f64) -> f64 {
            d2h(lambda, nu) - 2.0 * (1.0 - lambda).sqrt()
        }
    }
}

/// Which curve the derivative columns of a [`HalfPeriodCurve`] refer to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveSelect {
    H,
    HfPlus,
    HfMinus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HalfPeriodCurve {
    pub nu_grid: Vec<f64>,
    pub h: Vec<f64>,
    pub hf_plus: Vec<f64>,
    pub hf_minus: Vec<f64>,
    pub selected: CurveSelect,
    pub d1: Vec<f64>,
    pub d2: Vec<f64>,
}

/// Tabulates `H`, `H_F⁺`, `H_F⁻` on `n` uniformly spaced interior values of
/// `(0, m(a))`.
pub fn half_period_curve(
    nav: &NavigationData,
    n: usize,
    convention: XiConvention,
    selected: CurveSelect,
) -> Result<HalfPeriodCurve> {
    if n < 5 {
        return Err(Error::GridTooSmall { got: n, need: 5 });
    }
    let top = nav.profile().equator_m();
    let step = top / (n + 1) as f64;
    let nu_grid: Vec<f64> = (1..=n).map(|i| step * i as f64).collect();
    let rows: Vec<(f64, f64)> = nu_grid
        .par_iter()
        .map(|&nu| Ok((h_half_period(nav.profile(), nu)?, psi(nav, nu, convention)?)))
        .collect::<Result<_>>()?;
    let h: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let hf_plus: Vec<f64> = rows.iter().map(|r| r.0 + r.1).collect();
    let hf_minus: Vec<f64> = rows.iter().map(|r| r.0 - r.1).collect();
    let curve = match selected {
        CurveSelect::H => &h,
        CurveSelect::HfPlus => &hf_plus,
        CurveSelect::HfMinus => &hf_minus,
    };
    let d1 = numerical_derivatives(curve, step, 1)?;
    let d2 = numerical_derivatives(curve, step, 2)?;
    Ok(HalfPeriodCurve {
        nu_grid,
        h,
        hf_plus,
        hf_minus,
        selected,
        d1,
        d2,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExampleFamily {
    Example1,
    Example2,
}

impl ExampleFamily {
    pub fn profile(self, lambda: f64) -> Result<ProfileSpec> {
        match self {
            ExampleFamily::Example1 => ProfileSpec::example1(lambda),
            ExampleFamily::Example2 => ProfileSpec::example2(lambda),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignClass {
    Nonpositive,
    MixedSign,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvexityRow {
    pub lambda: f64,
    pub min_d2: f64,
    pub max_d2: f64,
    pub class: SignClass,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexityScan {
    pub family: ExampleFamily,
    pub convention: XiConvention,
    pub rows: Vec<ConvexityRow>,
}

impl ConvexityScan {
    /// `(λ₁, λ₂]` where the class first switches from nonpositive to mixed.
    pub fn threshold_bracket(&self) -> Option<(f64, f64)> {
        self.rows.windows(2).find_map(|w| {
            (w[0].class == SignClass::Nonpositive && w[1].class == SignClass::MixedSign)
                .then_some((w[0].lambda, w[1].lambda))
        })
    }
}

/// `(H_F⁺)''(ν)` at `μ = μ_max / 2`.
///
/// With the ν² convention this is the published closed form; with the inverse
/// convention it is `H'' + 2μ m''(ξ) / m'(ξ)³`, using `ξ'' = −m''(ξ) / m'(ξ)³`.
pub fn d2_hf_plus(
    family: ExampleFamily,
    lambda: f64,
    nu: f64,
    convention: XiConvention,
) -> Result<f64> {
    let spec = family.profile(lambda)?;
    check_nu(&spec, nu)?;
    let d2h = match family {
        ExampleFamily::Example1 => closed_form::example1::d2h(lambda, nu),
        ExampleFamily::Example2 => closed_form::example2::d2h(lambda, nu),
    };
    Ok(match convention {
        XiConvention::PaperSquare => match family {
            ExampleFamily::Example1 => closed_form::example1::d2hf_plus(lambda, nu),
            ExampleFamily::Example2 => closed_form::example2::d2hf_plus(lambda, nu),
        },
        XiConvention::Inverse => {
            let mu = 0.5 * spec.max_wind();
            let v = spec.eval_raw(xi(&spec, nu)?);
            d2h + 2.0 * mu * v.d2m / v.dm.powi(3)
        }
    })
}

/// Sign classification of `(H_F⁺)''` over `nu_resolution` interior points of
/// `(0, m(a))` for each `λ`, with `μ = μ_max(λ) / 2`.
pub fn convexity_scan(
    family: ExampleFamily,
    lambdas: &[f64],
    nu_resolution: usize,
    convention: XiConvention,
) -> Result<ConvexityScan> {
    if nu_resolution < 2 {
        return Err(Error::GridTooSmall {
            got: nu_resolution,
            need: 2,
        });
    }
    let rows = lambdas
        .par_iter()
        .map(|&lambda| {
            let top = family.profile(lambda)?.equator_m();
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for i in 1..=nu_resolution {
                let nu = top * i as f64 / (nu_resolution + 1) as f64;
                let d2 = d2_hf_plus(family, lambda, nu, convention)?;
                lo = lo.min(d2);
                hi = hi.max(d2);
            }
            Ok(ConvexityRow {
                lambda,
                min_d2: lo,
                max_d2: hi,
                class: if hi <= 0.0 {
                    SignClass::Nonpositive
                } else {
                    SignClass::MixedSign
                },
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConvexityScan {
        family,
        convention,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn xi_examples() {
        let round = ProfileSpec::round(1.0).unwrap();
        assert!((xi(&round, 0.5).unwrap() - PI / 6.0).abs() < 1e-12);
        let e1 = ProfileSpec::example1(1.0).unwrap();
        let nu = 0.5f64;
        let x = xi(&e1, nu).unwrap();
        let algebraic = (nu * nu * 2.0 / (2.0 + nu * nu)).sqrt().asin();
        assert!((x - algebraic).abs() < 1e-12);
        assert!((e1.m(x) - nu).abs() < 1e-12);
        let near = xi(&e1, e1.equator_m() * (1.0 - 1e-10)).unwrap();
        assert!((near - FRAC_PI_2).abs() < 1e-4);
        assert!(xi(&e1, 0.0).is_err());
        assert!(xi(&e1, 2f64.sqrt()).is_err());
    }

    #[test]
    fn round_half_period_is_pi() {
        let round = ProfileSpec::round(1.0).unwrap();
        for nu in [0.1, 0.5, 0.9, 0.999] {
            assert!((h_half_period(&round, nu).unwrap() - PI).abs() < 1e-10);
        }
    }

    #[test]
    fn example_half_periods() {
        let e1 = ProfileSpec::example1(1.0).unwrap();
        let h = h_half_period(&e1, 0.5).unwrap();
        assert!((h - closed_form::example1::h(1.0, 0.5)).abs() < 1e-9, "{h}");
        assert!((h - 2.401_112).abs() < 1e-6, "{h}");
        let e2 = ProfileSpec::example2(0.5).unwrap();
        let h = h_half_period(&e2, 0.5).unwrap();
        assert!((h - closed_form::example2::h(0.5, 0.5)).abs() < 1e-9, "{h}");
    }

    #[test]
    fn finsler_half_period_examples() {
        let e1 = ProfileSpec::example1(1.0).unwrap();
        let nav = NavigationData::new(e1.clone(), 0.5 / 2f64.sqrt()).unwrap();
        let f =
            f_half_period_with(&nav, 0.5, Direction::Forward, XiConvention::PaperSquare).unwrap();
        assert!((f - closed_form::example1::hf_plus(1.0, 0.5)).abs() < 1e-9);
        assert!((f - 3.335_06).abs() < 1e-4, "{f}");
        let b = f_half_period(&nav, 0.5, Direction::Backward).unwrap();
        let fw = f_half_period(&nav, 0.5, Direction::Forward).unwrap();
        assert!(fw - b > 0.0);
        let still = NavigationData::riemannian(e1.clone());
        assert_eq!(
            f_half_period(&still, 0.5, Direction::Forward).unwrap(),
            h_half_period(&e1, 0.5).unwrap()
        );
    }

    #[test]
    fn derivative_stencils() {
        let h = 0.01;
        let xs: Vec<f64> = (0..50).map(|i| 0.3 + h * i as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| x.sin()).collect();
        let d1 = numerical_derivatives(&ys, h, 1).unwrap();
        let d2 = numerical_derivatives(&ys, h, 2).unwrap();
        for (i, x) in xs.iter().enumerate() {
            assert!((d1[i] - x.cos()).abs() < 1e-7, "d1 at {i}");
            assert!((d2[i] + x.sin()).abs() < 1e-4, "d2 at {i}");
        }
        let flat = numerical_derivatives(&[2.0; 7], 0.1, 2).unwrap();
        assert!(flat.iter().all(|v| v.abs() < 1e-12));
        assert!(numerical_derivatives(&[1.0; 4], 0.1, 1).is_err());
    }

    #[test]
    fn convexity_examples() {
        let s = convexity_scan(
            ExampleFamily::Example1,
            &[0.1, 1.5, 1.6],
            400,
            XiConvention::PaperSquare,
        )
        .unwrap();
        let classes: Vec<SignClass> = s.rows.iter().map(|r| r.class).collect();
        assert_eq!(
            classes,
            vec![
                SignClass::Nonpositive,
                SignClass::Nonpositive,
                SignClass::MixedSign
            ]
        );
        assert_eq!(s.threshold_bracket(), Some((1.5, 1.6)));
        let s = convexity_scan(
            ExampleFamily::Example2,
            &[0.6, 0.65],
            400,
            XiConvention::PaperSquare,
        )
        .unwrap();
        assert_eq!(s.threshold_bracket(), Some((0.6, 0.65)));
    }
}
