//! Profile functions of 2-spheres of revolution `h = dr² + m(r)² dθ²` and the
//! Randers metric induced by the rotational wind `W = μ ∂/∂θ`.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::gauss10;
use crate::spline::CubicSpline;

/// Symmetry tolerance for closed-form families.
pub const SYMMETRY_TOL_CLOSED: f64 = 1e-10;
/// Symmetry tolerance for tabulated profiles.
pub const SYMMETRY_TOL_TABLE: f64 = 1e-6;

/// Sampled profile `m(r)` on `[0, 2a]`, interpolated by a clamped cubic spline
/// with the end slopes `m'(0) = 1`, `m'(2a) = -1` every smooth profile has.
#[derive(Debug, Clone, PartialEq)]
pub struct TableProfile {
    spline: CubicSpline,
}

impl TableProfile {
    pub fn new(samples: &[(f64, f64)]) -> Result<Self> {
        if samples.len() < 8 {
            return Err(Error::GridTooSmall {
                got: samples.len(),
                need: 8,
            });
        }
        let (r0, m0) = samples[0];
        let (rn, mn) = samples[samples.len() - 1];
        if r0.abs() > 1e-12 {
            return Err(Error::InvalidProfile(format!(
                "table must start at r = 0, got {r0}"
            )));
        }
        if m0.abs() > 1e-10 || mn.abs() > 1e-10 {
            return Err(Error::InvalidProfile(format!(
                "m must vanish at both poles (m(0) = {m0}, m(2a) = {mn})"
            )));
        }
        if samples[1..samples.len() - 1]
            .iter()
            .any(|&(_, m)| !(m > 0.0))
        {
            return Err(Error::InvalidProfile(
                "m must be positive on (0, 2a)".into(),
            ));
        }
        let lead = (samples[1].1 - m0) / (samples[1].0 - r0);
        let tail = (mn - samples[samples.len() - 2].1) / (rn - samples[samples.len() - 2].0);
        if (lead - 1.0).abs() > 0.05 || (tail + 1.0).abs() > 0.05 {
            return Err(Error::InvalidProfile(format!(
                "end slopes must approach m'(0) = 1 and m'(2a) = -1 (secants {lead:.4}, {tail:.4})"
            )));
        }
        let (x, y): (Vec<f64>, Vec<f64>) = samples.iter().copied().unzip();
        let spline = CubicSpline::clamped(x, y, 1.0, -1.0)?;
        Ok(Self { spline })
    }

    pub fn two_a(&self) -> f64 {
        self.spline.domain().1
    }

    pub(crate) fn spline(&self) -> &CubicSpline {
        &self.spline
    }

    pub fn samples(&self) -> Vec<(f64, f64)> {
        self.spline.knots().collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProfileFamily {
    /// Round sphere of radius `R`: `m(r) = R sin(r / R)`.
    Round {
        radius: f64,
    },
    /// `m(r) = sqrt(λ+1) sin r / sqrt(1 + λ cos² r)`, `λ ≥ 0`.
    Example1 {
        lambda: f64,
    },
    /// `m(r) = sin r / sqrt(1 - λ sin² r)`, `λ ∈ (0, 1)`.
    Example2 {
        lambda: f64,
    },
    CustomTable(TableProfile),
}

/// A profile `m` on `[0, 2a]` with `m(0) = m(2a) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileSpec {
    family: ProfileFamily,
    a: f64,
}

/// `m`, `m'` and `m''` at one radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileValue {
    pub m: f64,
    pub dm: f64,
    pub d2m: f64,
}

impl ProfileSpec {
    pub fn round(radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidProfile(format!(
                "radius must be positive, got {radius}"
            )));
        }
        Ok(Self {
            family: ProfileFamily::Round { radius },
            a: FRAC_PI_2 * radius,
        })
    }

    pub fn example1(lambda: f64) -> Result<Self> {
        if !(lambda >= 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidProfile(format!(
                "Example 1 needs λ ≥ 0, got {lambda}"
            )));
        }
        Ok(Self {
            family: ProfileFamily::Example1 { lambda },
            a: FRAC_PI_2,
        })
    }

    pub fn example2(lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda < 1.0) {
            return Err(Error::InvalidProfile(format!(
                "Example 2 needs λ in (0, 1), got {lambda}"
            )));
        }
        Ok(Self {
            family: ProfileFamily::Example2 { lambda },
            a: FRAC_PI_2,
        })
    }

    /// Tabulated profile; rejects tables that are not symmetric about `r = a`.
    pub fn custom(samples: &[(f64, f64)]) -> Result<Self> {
        let spec = Self::custom_unchecked_symmetry(samples)?;
        let residual = spec.symmetry_residual(1000);
        if residual > SYMMETRY_TOL_TABLE {
            return Err(Error::Asymmetric {
                residual,
                tolerance: SYMMETRY_TOL_TABLE,
            });
        }
        Ok(spec)
    }

    /// Tabulated profile without the equatorial symmetry check. Used by the
    /// verification suite, which reports the symmetry residual itself.
    pub fn custom_unchecked_symmetry(samples: &[(f64, f64)]) -> Result<Self> {
        let table = TableProfile::new(samples)?;
        let a = 0.5 * table.two_a();
        Ok(Self {
            family: ProfileFamily::CustomTable(table),
            a,
        })
    }

    pub fn family(&self) -> &ProfileFamily {
        &self.family
    }

    pub fn family_name(&self) -> &'static str {
        match self.family {
            ProfileFamily::Round { .. } => "round",
            ProfileFamily::Example1 { .. } => "example1",
            ProfileFamily::Example2 { .. } => "example2",
            ProfileFamily::CustomTable(_) => "custom",
        }
    }

    /// Half the pole-to-pole distance.
    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn two_a(&self) -> f64 {
        2.0 * self.a
    }

    pub fn is_closed_form(&self) -> bool {
        !matches!(self.family, ProfileFamily::CustomTable(_))
    }

    pub fn symmetry_tolerance(&self) -> f64 {
        if self.is_closed_form() {
            SYMMETRY_TOL_CLOSED
        } else {
            SYMMETRY_TOL_TABLE
        }
    }

    pub fn check_radius(&self, r: f64) -> Result<()> {
        let slack = 1e-14 * self.a.max(1.0);
        if !(r >= -slack && r <= self.two_a() + slack) {
            return Err(Error::RadiusOutOfDomain {
                r,
                two_a: self.two_a(),
            });
        }
        Ok(())
    }

    pub fn check_interior(&self, r: f64) -> Result<()> {
        self.check_radius(r)?;
        if r <= 0.0 || r >= self.two_a() {
            return Err(Error::AtPole(r));
        }
        Ok(())
    }

    /// `(m, m', m'')` at `r ∈ [0, 2a]`.
    pub fn eval(&self, r: f64) -> Result<ProfileValue> {
        self.check_radius(r)?;
        Ok(self.eval_raw(r.clamp(0.0, self.two_a())))
    }

    /// Unchecked evaluation for hot loops; callers guarantee `r ∈ [0, 2a]`.
    #[inline]
    pub fn eval_raw(&self, r: f64) -> ProfileValue {
        match &self.family {
            ProfileFamily::Round { radius } => {
                let t = r / radius;
                let (s, c) = t.sin_cos();
                ProfileValue {
                    m: radius * s,
                    dm: c,
                    d2m: -s / radius,
                }
            }
            ProfileFamily::Example1 { lambda } => {
                let (s, c) = r.sin_cos();
                let l1 = lambda + 1.0;
                let d = 1.0 + lambda * c * c;
                let sd = d.sqrt();
                ProfileValue {
                    m: l1.sqrt() * s / sd,
                    dm: l1 * l1.sqrt() * c / (d * sd),
                    d2m: l1 * l1.sqrt() * s * (2.0 * lambda * c * c - 1.0) / (d * d * sd),
                }
            }
            ProfileFamily::Example2 { lambda } => {
                let (s, c) = r.sin_cos();
                let e = 1.0 - lambda * s * s;
                let se = e.sqrt();
                ProfileValue {
                    m: s / se,
                    dm: c / (e * se),
                    d2m: s * (3.0 * lambda * c * c - e) / (e * e * se),
                }
            }
            ProfileFamily::CustomTable(t) => {
                let (m, dm, d2m) = t.spline.eval(r);
                ProfileValue { m, dm, d2m }
            }
        }
    }

    #[inline]
    pub fn m(&self, r: f64) -> f64 {
        self.eval_raw(r).m
    }

    /// Gaussian curvature `G = -m''/m`, defined off the poles.
    pub fn gaussian_curvature(&self, r: f64) -> Result<f64> {
        self.check_interior(r)?;
        Ok(self.curvature_raw(r))
    }

    pub fn curvature_raw(&self, r: f64) -> f64 {
        match &self.family {
            ProfileFamily::Round { radius } => 1.0 / (radius * radius),
            ProfileFamily::Example1 { lambda } => {
                let c2 = r.cos().powi(2);
                let d = 1.0 + lambda * c2;
                (lambda + 1.0) * (1.0 - 2.0 * lambda * c2) / (d * d)
            }
            ProfileFamily::Example2 { lambda } => {
                let c2 = r.cos().powi(2);
                let e = 1.0 - lambda * (1.0 - c2);
                ((1.0 - lambda) - 2.0 * lambda * c2) / (e * e)
            }
            ProfileFamily::CustomTable(_) => {
                let v = self.eval_raw(r);
                -v.d2m / v.m
            }
        }
    }

    /// Location and value of the maximum of `m`.
    pub fn max_m(&self) -> (f64, f64) {
        match &self.family {
            ProfileFamily::Round { radius } => (self.a, *radius),
            ProfileFamily::Example1 { lambda } => (self.a, (lambda + 1.0).sqrt()),
            ProfileFamily::Example2 { lambda } => (self.a, 1.0 / (1.0 - lambda).sqrt()),
            ProfileFamily::CustomTable(_) => self.max_m_numeric(),
        }
    }

    fn max_m_numeric(&self) -> (f64, f64) {
        // coarse scan, golden-section on the bracketing cell, Newton on m'
        let n = 2000;
        let h = self.two_a() / n as f64;
        let best = (1..n)
            .max_by(|&i, &j| self.m(i as f64 * h).total_cmp(&self.m(j as f64 * h)))
            .unwrap_or(n / 2);
        let (mut lo, mut hi) = ((best - 1) as f64 * h, (best + 1) as f64 * h);
        let g = 0.5 * (5f64.sqrt() - 1.0);
        let mut x1 = hi - g * (hi - lo);
        let mut x2 = lo + g * (hi - lo);
        let (mut f1, mut f2) = (self.m(x1), self.m(x2));
        while hi - lo > 1e-10 {
            if f1 < f2 {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + g * (hi - lo);
                f2 = self.m(x2);
            } else {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - g * (hi - lo);
                f1 = self.m(x1);
            }
        }
        let mut r = 0.5 * (lo + hi);
        for _ in 0..3 {
            let v = self.eval_raw(r);
            if v.d2m >= 0.0 {
                break;
            }
            let next = r - v.dm / v.d2m;
            if !(next > lo - h && next < hi + h) {
                break;
            }
            r = next;
        }
        (r, self.m(r))
    }

    /// `m(x + d) − m(x)` without cancellation.
    pub fn m_increment(&self, x: f64, d: f64) -> f64 {
        if d == 0.0 {
            return 0.0;
        }
        d * self.m_mean_slope(x, d)
    }

    /// Radii in `(lo, hi)` where the third derivative of `m` may jump: the
    /// knots of a table.
    pub fn breaks_within(&self, lo: f64, hi: f64) -> Vec<f64> {
        match &self.family {
            ProfileFamily::CustomTable(t) => t.spline().breaks_within(lo, hi).to_vec(),
            _ => Vec::new(),
        }
    }

    /// `(m(x + d) − m(x)) / d`, tending to `m'(x)` as `d → 0`. For small `d`
    /// with near-equal values this is the mean of `m'` over the step, and
    /// tables are integrated knot to knot, where `m'` is a quadratic.
    pub fn m_mean_slope(&self, x: f64, d: f64) -> f64 {
        if d == 0.0 {
            return self.eval_raw(x).dm;
        }
        let (mx, mt) = (self.m(x), self.m(x + d));
        let direct = mt - mx;
        if direct.abs() > 1e-3 * mx.max(mt) || d.abs() > 0.05 * self.a {
            return direct / d;
        }
        let dm = |w: f64| self.eval_raw(w).dm;
        let (lo, hi) = if d >= 0.0 { (x, x + d) } else { (x + d, x) };
        if hi == lo {
            return dm(x);
        }
        let total = match &self.family {
            ProfileFamily::CustomTable(t) => {
                let mut sum = 0.0;
                let mut from = lo;
                for &k in t.spline().breaks_within(lo, hi).iter().chain([hi].iter()) {
                    sum += gauss10(dm, from, k);
                    from = k;
                }
                sum
            }
            _ => gauss10(dm, lo, hi),
        };
        total / (hi - lo)
    }

    /// Supremum of admissible wind strengths, `1 / max m`.
    pub fn max_wind(&self) -> f64 {
        1.0 / self.max_m().1
    }

    /// `m(a)`, the radius of the equator; upper end of the Clairaut range.
    pub fn equator_m(&self) -> f64 {
        self.m(self.a)
    }

    /// `max |m(r) - m(2a - r)|` over an `n`-point grid on `[0, a]`.
    pub fn symmetry_residual(&self, n: usize) -> f64 {
        (0..=n)
            .map(|i| {
                let r = self.a * i as f64 / n as f64;
                (self.m(r) - self.m(self.two_a() - r)).abs()
            })
            .fold(0.0, f64::max)
    }

    /// Checks `m' > 0` on `(0, a)`, which makes `ξ = (m|_(0,a))⁻¹` well defined.
    pub fn is_rising_to_equator(&self, n: usize) -> bool {
        (1..n).all(|i| self.eval_raw(self.a * i as f64 / n as f64).dm > 0.0)
    }
}

/// Randers data `α = sqrt(a11 dr² + a22 dθ²)`, `β = b2 dθ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricCoefficients {
    pub a11: f64,
    pub a22: f64,
    pub b2: f64,
}

impl MetricCoefficients {
    /// Squared `α`-norm of the one-form `β`; strong convexity needs it below 1.
    pub fn b_norm_sq(&self) -> f64 {
        self.b2 * self.b2 / self.a22
    }
}

/// Direction of travel relative to the wind flow.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    pub fn sign(self) -> f64 {
        match self {
            Direction::Forward => 1.0,
            Direction::Backward => -1.0,
        }
    }
}

/// Navigation data `(h, W = μ ∂/∂θ)`: a profile plus a wind strength.
#[derive(Debug, Clone, PartialEq)]
pub struct NavigationData {
    profile: ProfileSpec,
    mu: f64,
}

impl NavigationData {
    pub fn new(profile: ProfileSpec, mu: f64) -> Result<Self> {
        let mu_max = profile.max_wind();
        if !(mu >= 0.0 && mu < mu_max) {
            return Err(Error::ConvexityViolation { mu, mu_max });
        }
        Ok(Self { profile, mu })
    }

    /// Windless navigation data, i.e. the Riemannian metric itself.
    pub fn riemannian(profile: ProfileSpec) -> Self {
        Self { profile, mu: 0.0 }
    }

    pub fn profile(&self) -> &ProfileSpec {
        &self.profile
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn with_mu(&self, mu: f64) -> Result<Self> {
        Self::new(self.profile.clone(), mu)
    }

    pub fn randers_coefficients(&self, r: f64) -> Result<MetricCoefficients> {
        self.profile.check_interior(r)?;
        let m = self.profile.m(r);
        let mm = self.mu * m;
        if mm >= 1.0 {
            return Err(Error::ConvexityViolation {
                mu: self.mu,
                mu_max: 1.0 / m,
            });
        }
        let lam = 1.0 - mm * mm;
        Ok(MetricCoefficients {
            a11: 1.0 / lam,
            a22: m * m / (lam * lam),
            b2: -self.mu * m * m / lam,
        })
    }

    /// `F(x, y) = α(x, y) + β(x, y)` for `y = (y_r, y_θ)` at radius `r`.
    pub fn finsler_norm(&self, r: f64, y: (f64, f64)) -> Result<f64> {
        self.profile.check_radius(r)?;
        if y.0 == 0.0 && y.1 == 0.0 {
            return Err(Error::ZeroVector);
        }
        Ok(randers_norm(self.profile.m(r), self.mu, y.0, y.1))
    }

    /// Same norm through the navigation formula
    /// `F = (sqrt(λ‖y‖²_h + W₀²) - W₀) / λ`, `λ = 1 - ‖W‖²_h`, `W₀ = h(W, y)`.
    pub fn finsler_norm_navigation(&self, r: f64, y: (f64, f64)) -> Result<f64> {
        self.profile.check_radius(r)?;
        if y.0 == 0.0 && y.1 == 0.0 {
            return Err(Error::ZeroVector);
        }
        let m = self.profile.m(r);
        let m2 = m * m;
        let lam = 1.0 - self.mu * self.mu * m2;
        let w0 = self.mu * m2 * y.1;
        let h2 = y.0 * y.0 + m2 * y.1 * y.1;
        Ok(((lam * h2 + w0 * w0).sqrt() - w0) / lam)
    }

    /// Riemannian norm `‖y‖_h`.
    pub fn h_norm(&self, r: f64, y: (f64, f64)) -> f64 {
        let m = self.profile.m(r);
        (y.0 * y.0 + m * m * y.1 * y.1).sqrt()
    }
}

/// `α + β` evaluated from `m` directly.
#[inline]
pub fn randers_norm(m: f64, mu: f64, yr: f64, yth: f64) -> f64 {
    let m2 = m * m;
    let lam = 1.0 - mu * mu * m2;
    let alpha = (yr * yr / lam + m2 * yth * yth / (lam * lam)).sqrt();
    alpha - mu * m2 * yth / lam
}

/// Antipodal angle on the covering line for a constant-curvature sphere.
pub fn round_cut_angle(radius: f64, mu: f64) -> f64 {
    PI * (1.0 + mu * radius)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn closed_forms() -> Vec<ProfileSpec> {
        vec![
            ProfileSpec::round(1.0).unwrap(),
            ProfileSpec::round(1.7).unwrap(),
            ProfileSpec::example1(0.0).unwrap(),
            ProfileSpec::example1(1.0).unwrap(),
            ProfileSpec::example1(3.0).unwrap(),
            ProfileSpec::example2(0.5).unwrap(),
            ProfileSpec::example2(0.75).unwrap(),
        ]
    }

    #[test]
    fn eval_examples() {
        let v = ProfileSpec::round(1.0).unwrap().eval(FRAC_PI_2).unwrap();
        assert!((v.m - 1.0).abs() < 1e-15 && v.dm.abs() < 1e-15 && (v.d2m + 1.0).abs() < 1e-15);

        let lambda = 0.8;
        let v = ProfileSpec::example1(lambda)
            .unwrap()
            .eval(FRAC_PI_2)
            .unwrap();
        assert!((v.m - (lambda + 1.0f64).sqrt()).abs() < 1e-15);
        assert!(v.dm.abs() < 1e-15);

        let v = ProfileSpec::example2(0.5).unwrap().eval(PI / 4.0).unwrap();
        let expected = (PI / 4.0).sin() / (1.0f64 - 0.5 * 0.5).sqrt();
        assert!((v.m - expected).abs() < 1e-15);
        assert!((v.m - 0.816_496_580_927_726).abs() < 1e-12);
    }

    #[test]
    fn eval_rejects_out_of_domain() {
        let s = ProfileSpec::example1(1.0).unwrap();
        assert!(matches!(s.eval(-0.1), Err(Error::RadiusOutOfDomain { .. })));
        assert!(matches!(
            s.eval(PI + 0.1),
            Err(Error::RadiusOutOfDomain { .. })
        ));
        assert!(s.eval(PI).is_ok());
    }

    #[test]
    fn derivative_identities_at_poles() {
        for s in closed_forms() {
            let eps = 1e-7;
            let v0 = s.eval(eps).unwrap();
            let v1 = s.eval(s.two_a() - eps).unwrap();
            assert!((v0.dm - 1.0).abs() < 1e-9, "{:?}", s.family());
            assert!((v1.dm + 1.0).abs() < 1e-9, "{:?}", s.family());
            assert!(s.m(0.0).abs() < 1e-15 && s.m(s.two_a()).abs() < 1e-12);
        }
    }

    #[test]
    fn symmetry_of_closed_forms() {
        for s in closed_forms() {
            assert!(s.symmetry_residual(1000) < SYMMETRY_TOL_CLOSED);
        }
    }

    #[test]
    fn curvature_examples() {
        let round = ProfileSpec::round(1.0).unwrap();
        for r in [0.3, 1.0, 2.5] {
            assert!((round.gaussian_curvature(r).unwrap() - 1.0).abs() < 1e-15);
        }
        let e1 = ProfileSpec::example1(1.0).unwrap();
        assert!((e1.gaussian_curvature(FRAC_PI_2).unwrap() - 2.0).abs() < 1e-12);
        let e2 = ProfileSpec::example2(0.5).unwrap();
        assert!((e2.gaussian_curvature(FRAC_PI_2).unwrap() - 2.0).abs() < 1e-12);
        assert!(matches!(e2.gaussian_curvature(0.0), Err(Error::AtPole(_))));
    }

    #[test]
    fn closed_form_curvature_matches_profile_derivatives() {
        for s in closed_forms() {
            for i in 1..200 {
                let r = s.two_a() * i as f64 / 200.0;
                let v = s.eval_raw(r);
                let g = s.curvature_raw(r);
                assert!(
                    (g + v.d2m / v.m).abs() < 1e-9 * (1.0 + g.abs()),
                    "{:?} at {r}",
                    s.family()
                );
            }
        }
    }

    #[test]
    fn max_wind_examples() {
        assert!((ProfileSpec::round(1.0).unwrap().max_wind() - 1.0).abs() < 1e-15);
        assert!((ProfileSpec::round(2.0).unwrap().max_wind() - 0.5).abs() < 1e-15);
        assert!((ProfileSpec::example1(3.0).unwrap().max_wind() - 0.5).abs() < 1e-15);
        assert!((ProfileSpec::example2(0.75).unwrap().max_wind() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn table_max_wind_matches_closed_form() {
        let src = ProfileSpec::example1(1.0).unwrap();
        let n = 800;
        let samples: Vec<(f64, f64)> = (0..=n)
            .map(|i| {
                let r = PI * i as f64 / n as f64;
                (r, if i == 0 || i == n { 0.0 } else { src.m(r) })
            })
            .collect();
        let t = ProfileSpec::custom(&samples).unwrap();
        let (rm, mm) = t.max_m();
        assert!((rm - FRAC_PI_2).abs() < 1e-6, "{rm}");
        assert!((mm - 2f64.sqrt()).abs() < 1e-10);
        assert!((t.max_wind() - src.max_wind()).abs() < 1e-10);
    }

    #[test]
    fn asymmetric_table_is_rejected() {
        let n = 400;
        let samples: Vec<(f64, f64)> = (0..=n)
            .map(|i| {
                let r = PI * i as f64 / n as f64;
                (r, r.sin() * (1.0 + 0.05 * r.sin() * r.cos()))
            })
            .map(|(r, m)| (r, if r == 0.0 || r == PI { 0.0 } else { m }))
            .collect();
        assert!(matches!(
            ProfileSpec::custom(&samples),
            Err(Error::Asymmetric { .. })
        ));
        assert!(ProfileSpec::custom_unchecked_symmetry(&samples).is_ok());
    }

    #[test]
    fn randers_coefficient_examples() {
        let e1 = ProfileSpec::example1(1.0).unwrap();
        let nav = NavigationData::riemannian(e1.clone());
        let c = nav.randers_coefficients(1.0).unwrap();
        assert_eq!(c.a11, 1.0);
        assert!((c.a22 - e1.m(1.0).powi(2)).abs() < 1e-15);
        assert_eq!(c.b2, 0.0);

        let lambda = 1.0f64;
        let mu = 0.5 / (lambda + 1.0).sqrt();
        let nav = NavigationData::new(e1, mu).unwrap();
        let c = nav.randers_coefficients(FRAC_PI_2).unwrap();
        assert!((c.a11 - 4.0 / 3.0).abs() < 1e-14);

        // displayed Example 1 matrix
        for r in [0.4, 1.1, 2.0] {
            let (s, co) = (f64::sin(r), f64::cos(r));
            let d = 1.0 + lambda * co * co;
            let den = d - mu * mu * (lambda + 1.0) * s * s;
            let c = nav.randers_coefficients(r).unwrap();
            assert!((c.a11 - d / den).abs() < 1e-13);
            assert!((c.a22 - (lambda + 1.0) * s * s * d / (den * den)).abs() < 1e-13);
            assert!((c.b2 + mu * (lambda + 1.0) * s * s / den).abs() < 1e-13);
            assert!(c.b_norm_sq() < 1.0);
            assert!((c.b_norm_sq() - (mu * nav.profile().m(r)).powi(2)).abs() < 1e-14);
        }
    }

    #[test]
    fn wind_bound_enforced() {
        let e1 = ProfileSpec::example1(3.0).unwrap();
        assert!(matches!(
            NavigationData::new(e1.clone(), 0.5),
            Err(Error::ConvexityViolation { .. })
        ));
        assert!(NavigationData::new(e1.clone(), 0.49).is_ok());
        assert!(NavigationData::new(e1, -0.1).is_err());
    }

    #[test]
    fn finsler_norm_examples() {
        let round = ProfileSpec::round(1.0).unwrap();
        let nav = NavigationData::new(round.clone(), 0.5).unwrap();
        let f = nav.finsler_norm(FRAC_PI_2, (0.0, 1.0)).unwrap();
        assert!((f - 2.0 / 3.0).abs() < 1e-15);
        let f_nav = nav.finsler_norm_navigation(FRAC_PI_2, (0.0, 1.0)).unwrap();
        assert!((f_nav - 2.0 / 3.0).abs() < 1e-15);

        let still = NavigationData::riemannian(round);
        let f = still.finsler_norm(1.0, (0.3, -0.7)).unwrap();
        assert!((f - still.h_norm(1.0, (0.3, -0.7))).abs() < 1e-15);
        assert_eq!(still.finsler_norm(1.0, (0.0, 0.0)), Err(Error::ZeroVector));
    }
}
