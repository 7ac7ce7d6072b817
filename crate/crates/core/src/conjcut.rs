//! First conjugate points and cut loci of points off the poles.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geodesics::{
    h_arc_length, h_theta_advance, shoot_h_geodesic, GeodesicPath, StepControl,
};
use crate::halfperiod::{h_half_arclength, h_half_period, xi};
use crate::ode::{self, Control, Options};
use crate::surfaces::{Direction, NavigationData, ProfileFamily, ProfileSpec};

/// Angular spread of the finite-difference pencil.
pub const PENCIL_DELTA: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConjugatePoint {
    /// h-arclength from the start.
    pub s: f64,
    pub r: f64,
    /// Unwrapped angle; for Finsler results this includes the wind shift.
    pub theta: f64,
    pub nu: f64,
}

/// How the first zero of the normal Jacobi field is located.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConjugateMethod {
    /// Central difference across a pencil of geodesics shot from the same
    /// point, integrated together and Richardson-extrapolated.
    Pencil,
    /// Scalar Jacobi equation `y'' + G(r(s)) y = 0` along the geodesic.
    JacobiOde,
    /// Zero of `∂θ/∂ν` at fixed `r` on the ascending branch.
    ThetaDerivative,
}

fn search_length(spec: &ProfileSpec) -> f64 {
    16.0 * spec.a()
}

fn ode_options() -> Options {
    Options {
        rtol: 1e-12,
        atol: 1e-12,
        h_init: 1e-3,
        h_max: 0.05,
        max_steps: 400_000,
    }
}

fn check_start(spec: &ProfileSpec, u: f64, nu: f64) -> Result<f64> {
    spec.check_interior(u)?;
    let m = spec.m(u);
    if !(nu.abs() <= m * (1.0 + 1e-12)) {
        return Err(Error::ClairautOutOfRange {
            nu,
            reason: format!("|nu| exceeds m(u) = {m}"),
        });
    }
    Ok(m)
}

/// Tracks the sign of a scalar along accepted segments and stops at its first
/// change after the start.
struct SignWatch {
    sign0: f64,
    root: Option<f64>,
}

impl SignWatch {
    fn new() -> Self {
        Self {
            sign0: 0.0,
            root: None,
        }
    }

    fn step<const N: usize, J: Fn(&[f64; N]) -> f64>(
        &mut self,
        seg: &ode::Segment<N>,
        j: J,
    ) -> Control {
        let sub = 6;
        let mut prev_t = seg.t0;
        let mut prev = j(&seg.start());
        for k in 1..=sub {
            let t = seg.t0 + (seg.t1 - seg.t0) * k as f64 / sub as f64;
            let v = j(&seg.eval(t));
            if self.sign0 == 0.0 {
                if v != 0.0 {
                    self.sign0 = v.signum();
                }
            } else if v * self.sign0 <= 0.0 {
                let root = ode::bracket_root(|s| j(&seg.eval(s)), prev_t, t, 1e-14);
                self.root = Some(root);
                return Control::StopAt(root);
            }
            prev_t = t;
            prev = v;
        }
        let _ = prev;
        Control::Continue
    }
}

/// First h-conjugate point of `(u, 0)` along the geodesic with Clairaut
/// constant `nu` that starts downwards (`dr/ds ≤ 0`).
pub fn first_h_conjugate(spec: &ProfileSpec, u: f64, nu: f64) -> Result<ConjugatePoint> {
    first_h_conjugate_with(spec, u, nu, -1, ConjugateMethod::Pencil)
}

pub fn first_h_conjugate_with(
    spec: &ProfileSpec,
    u: f64,
    nu: f64,
    dr_sign: i8,
    method: ConjugateMethod,
) -> Result<ConjugatePoint> {
    let m = check_start(spec, u, nu)?;
    if nu.abs() < 1e-8 {
        return first_conjugate_on_meridian(spec, u, if dr_sign >= 0 { 1 } else { -1 });
    }
    match method {
        ConjugateMethod::Pencil => pencil_conjugate(spec, u, nu, dr_sign, m),
        ConjugateMethod::JacobiOde => jacobi_conjugate(spec, u, nu, dr_sign, m),
        ConjugateMethod::ThetaDerivative => {
            if dr_sign > 0 {
                // mirror through the equator
                let c = theta_derivative_conjugate(spec, spec.two_a() - u, nu)?;
                return Ok(ConjugatePoint {
                    r: spec.two_a() - c.r,
                    ..c
                });
            }
            theta_derivative_conjugate(spec, u, nu)
        }
    }
}

fn start_angle(nu: f64, m: f64, dr_sign: i8) -> f64 {
    let phi = (nu / m).clamp(-1.0, 1.0).acos();
    if dr_sign < 0 {
        -phi
    } else {
        phi
    }
}

fn pencil_conjugate(
    spec: &ProfileSpec,
    u: f64,
    nu: f64,
    dr_sign: i8,
    m: f64,
) -> Result<ConjugatePoint> {
    let phi = start_angle(nu, m, dr_sign);
    let offs = [0.0, -1.0, 1.0, -0.5, 0.5];
    let mut y0 = [0.0; 15];
    let mut nus = [0.0; 5];
    for (k, c) in offs.iter().enumerate() {
        let p = phi + c * PENCIL_DELTA;
        nus[k] = m * p.cos();
        y0[3 * k] = u;
        y0[3 * k + 1] = 0.0;
        y0[3 * k + 2] = p.sin();
    }
    let rhs = |_: f64, y: &[f64; 15]| {
        let mut out = [0.0; 15];
        for k in 0..5 {
            let v = spec.eval_raw(y[3 * k]);
            let m2 = v.m * v.m;
            out[3 * k] = y[3 * k + 2];
            out[3 * k + 1] = nus[k] / m2;
            out[3 * k + 2] = nus[k] * nus[k] * v.dm / (m2 * v.m);
        }
        out
    };
    let normal = |y: &[f64; 15]| {
        let d = PENCIL_DELTA;
        let jr = (4.0 * (y[12] - y[9]) / d - (y[6] - y[3]) / (2.0 * d)) / 3.0;
        let jt = (4.0 * (y[13] - y[10]) / d - (y[7] - y[4]) / (2.0 * d)) / 3.0;
        let mm = spec.m(y[0]);
        let dtheta = nus[0] / (mm * mm);
        mm * (y[2] * jt - dtheta * jr)
    };
    let mut watch = SignWatch::new();
    let s_max = search_length(spec);
    let mut corner = false;
    let sol = ode::integrate(rhs, 0.0, y0, s_max, &ode_options(), |seg| {
        let (r0, r1) = (seg.start()[0], seg.end()[0]);
        if r0.min(r1) < 1e-6 || r0.max(r1) > spec.two_a() - 1e-6 {
            corner = true;
            return Control::StopAt(seg.t0);
        }
        watch.step(seg, normal)
    })?;
    if corner {
        return Err(Error::NumericalCorner { nu, s: sol.t_end() });
    }
    let s = watch.root.ok_or(Error::NoConjugatePoint { s_max })?;
    let y = sol.eval(s);
    Ok(ConjugatePoint {
        s,
        r: y[0],
        theta: y[1],
        nu,
    })
}

fn curvature_safe(spec: &ProfileSpec, r: f64) -> f64 {
    let margin = 1e-4 * spec.a();
    let r = if spec.is_closed_form() {
        r.clamp(0.0, spec.two_a())
    } else {
        r.clamp(margin, spec.two_a() - margin)
    };
    if r == 0.0 || r == spec.two_a() {
        // one-sided limit of -m''/m at a pole
        let v = spec.eval_raw(r + if r == 0.0 { 1e-6 } else { -1e-6 });
        return -v.d2m / v.m;
    }
    spec.curvature_raw(r)
}

fn jacobi_conjugate(
    spec: &ProfileSpec,
    u: f64,
    nu: f64,
    dr_sign: i8,
    m: f64,
) -> Result<ConjugatePoint> {
    let phi = start_angle(nu, m, dr_sign);
    let rhs = |_: f64, y: &[f64; 5]| {
        let v = spec.eval_raw(y[0]);
        let m2 = v.m * v.m;
        [
            y[2],
            nu / m2,
            nu * nu * v.dm / (m2 * v.m),
            y[4],
            -curvature_safe(spec, y[0]) * y[3],
        ]
    };
    let mut watch = SignWatch::new();
    let s_max = search_length(spec);
    let sol = ode::integrate(
        rhs,
        0.0,
        [u, 0.0, phi.sin(), 0.0, 1.0],
        s_max,
        &ode_options(),
        |seg| watch.step(seg, |y| y[3]),
    )?;
    let s = watch.root.ok_or(Error::NoConjugatePoint { s_max })?;
    let y = sol.eval(s);
    Ok(ConjugatePoint {
        s,
        r: y[0],
        theta: y[1],
        nu,
    })
}

/// First conjugate point along the meridian from `(u, 0)`, continuing through
/// the pole on the half meridian `θ = π`.
pub fn first_conjugate_on_meridian(
    spec: &ProfileSpec,
    u: f64,
    dr_sign: i8,
) -> Result<ConjugatePoint> {
    spec.check_interior(u)?;
    let s_max = search_length(spec);
    let path = shoot_h_geodesic(spec, (u, 0.0), 0.0, dr_sign, s_max, &StepControl::default())?;
    let mut watch = SignWatch::new();
    let sol = ode::integrate(
        |s, y: &[f64; 2]| [y[1], -curvature_safe(spec, path.h_state_at(s).r) * y[0]],
        0.0,
        [0.0, 1.0],
        s_max,
        &ode_options(),
        |seg| watch.step(seg, |y| y[0]),
    )?;
    let s = watch.root.ok_or(Error::NoConjugatePoint { s_max })?;
    let _ = sol;
    let st = path.h_state_at(s);
    Ok(ConjugatePoint {
        s,
        r: st.r,
        theta: st.theta,
        nu: 0.0,
    })
}

/// `θ(r, u, ν) = H(ν) − ∫_r^{2a−u} ν / (m sqrt(m² − ν²)) dτ` on the ascending
/// branch of the geodesic leaving `(u, 0)` downwards.
pub fn theta_of(spec: &ProfileSpec, r: f64, u: f64, nu: f64) -> Result<f64> {
    spec.check_interior(u)?;
    if !(nu > 0.0 && nu < spec.m(u).min(spec.equator_m())) {
        return Err(Error::ClairautOutOfRange {
            nu,
            reason: "need 0 < nu < min(m(u), m(a))".into(),
        });
    }
    let h = h_half_period(spec, nu)?;
    let top = spec.two_a() - u;
    let adv = h_theta_advance(spec, nu, r, top)?;
    Ok(if r <= top { h - adv } else { h + adv })
}

/// `∂θ/∂ν (r, u, ν)` on the ascending branch, see [`theta_of`].
pub fn theta_nu_derivative(spec: &ProfileSpec, r: f64, u: f64, nu: f64) -> Result<f64> {
    nu_derivative(spec, r, u, nu, |n| theta_of(spec, r, u, n))
}

/// Richardson-extrapolated central difference in `ν`. The step shrinks with
/// `m(r) − ν` so that `r` stays inside the band swept by the perturbed
/// geodesics.
fn nu_derivative(
    spec: &ProfileSpec,
    r: f64,
    u: f64,
    nu: f64,
    f: impl Fn(f64) -> Result<f64>,
) -> Result<f64> {
    let room = (spec.m(r) - nu).min(spec.m(u) - nu).min(nu);
    let d = (1e-4 * spec.equator_m()).min(0.05 * room);
    let d1 = (f(nu + d)? - f(nu - d)?) / (2.0 * d);
    let d2 = (f(nu + 0.5 * d)? - f(nu - 0.5 * d)?) / d;
    Ok((4.0 * d2 - d1) / 3.0)
}

/// Radii from `from` to `to`, uniform in the middle and geometric towards
/// both ends, where the `ν`-derivative blows up.
fn leg_grid(from: f64, to: f64) -> Vec<f64> {
    let len = to - from;
    let pad = 0.02 * len;
    let n = 200;
    let mut grid: Vec<f64> = (1..=30)
        .rev()
        .map(|k| from + pad * 0.5f64.powi(k))
        .collect();
    grid.extend((0..=n).map(|i| from + pad + (len - 2.0 * pad) * i as f64 / n as f64));
    grid.extend((1..=30).map(|k| to - pad * 0.5f64.powi(k)));
    grid
}

/// First sign change of `g` along `grid`, refined to a root. Points where `g`
/// fails are skipped: the tails may run into rounding at the tangency radii.
fn first_root(grid: &[f64], g: impl Fn(f64) -> Result<f64>) -> Option<f64> {
    let mut prev: Option<(f64, f64)> = None;
    for &r in grid {
        let v = match g(r) {
            Ok(v) if v.is_finite() => v,
            _ => continue,
        };
        if let Some((r0, v0)) = prev {
            if v0 * v <= 0.0 {
                return Some(ode::bracket_root(
                    |t| g(t).unwrap_or(f64::NAN),
                    r0,
                    r,
                    1e-12,
                ));
            }
        }
        prev = Some((r, v));
    }
    None
}

fn theta_derivative_conjugate(spec: &ProfileSpec, u: f64, nu: f64) -> Result<ConjugatePoint> {
    let x = xi(spec, nu)?;
    let top = spec.two_a() - x;
    // descending leg from u to the tangency, where θ(r) = ∫_r^u ν / (m sqrt(m² − ν²))
    let first = |n: f64, r: f64| h_theta_advance(spec, n, r, u);
    let descending: Vec<f64> = leg_grid(x, u).into_iter().rev().collect();
    if let Some(rc) = first_root(&descending, |r| {
        nu_derivative(spec, r, u, nu, |n| first(n, r))
    }) {
        return Ok(ConjugatePoint {
            s: h_arc_length(spec, nu, rc, u)?,
            r: rc,
            theta: first(nu, rc)?,
            nu,
        });
    }
    let rc = first_root(&leg_grid(x, top), |r| theta_nu_derivative(spec, r, u, nu))
        .ok_or(Error::NoConjugatePoint { s_max: top })?;
    Ok(ConjugatePoint {
        s: h_arc_length(spec, nu, x, u)? + h_arc_length(spec, nu, x, rc)?,
        r: rc,
        theta: theta_of(spec, rc, u, nu)?,
        nu,
    })
}

/// Flow image of the h-conjugate point: `θ_c ± μ s_c`.
pub fn first_f_conjugate(
    nav: &NavigationData,
    u: f64,
    nu: f64,
    direction: Direction,
) -> Result<ConjugatePoint> {
    let c = first_h_conjugate(nav.profile(), u, nu)?;
    Ok(ConjugatePoint {
        theta: c.theta + direction.sign() * nav.mu() * c.s,
        ..c
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CurvatureClassValue {
    Constant,
    NonIncreasing,
    NonDecreasing,
    NonMonotone,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvatureClass {
    pub value: CurvatureClassValue,
    pub tolerance: f64,
}

/// Relative tolerance on successive curvature differences for tabulated profiles.
pub const TABLE_CURVATURE_RTOL: f64 = 1e-3;

/// Monotonicity of `G` from the pole to the equator, on `grid_n` points of `(0, a]`.
pub fn classify_curvature(spec: &ProfileSpec, grid_n: usize) -> Result<CurvatureClass> {
    if grid_n < 64 {
        return Err(Error::GridTooSmall {
            got: grid_n,
            need: 64,
        });
    }
    let g: Vec<f64> = (1..=grid_n)
        .map(|i| spec.curvature_raw(spec.a() * i as f64 / grid_n as f64))
        .collect();
    let diffs: Vec<f64> = g.windows(2).map(|w| w[1] - w[0]).collect();
    // spline curvature of a table carries O(h^2) noise that 1/m amplifies
    // near the pole, so tables get a tolerance relative to the range of G
    let (tolerance, constant) = if matches!(spec.family(), ProfileFamily::CustomTable(_)) {
        let scale = g.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        let tol = TABLE_CURVATURE_RTOL * scale;
        let (lo, hi) = g
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            });
        (tol, hi - lo < tol)
    } else {
        let variation: f64 = diffs.iter().map(|d| d.abs()).sum();
        (1e-9, variation < 1e-9 * g[grid_n - 1].abs())
    };
    let value = if constant {
        CurvatureClassValue::Constant
    } else if diffs.iter().all(|&d| d <= tolerance) {
        CurvatureClassValue::NonIncreasing
    } else if diffs.iter().all(|&d| d >= -tolerance) {
        CurvatureClassValue::NonDecreasing
    } else {
        CurvatureClassValue::NonMonotone
    };
    Ok(CurvatureClass { value, tolerance })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CutMetric {
    H,
    FForward,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CutLocusKind {
    SinglePoint {
        r: f64,
        theta: f64,
    },
    ParallelSubarc {
        r: f64,
        theta_interval: (f64, f64),
    },
    /// Subarc `r ∈ r_interval` of the half meridian `θ = base_theta`; for the
    /// Finsler metric each point is further shifted by `μ` times its distance.
    MeridianSubarc {
        base_theta: f64,
        r_interval: (f64, f64),
    },
}

/// One cut point with the geodesic that reaches it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CutSample {
    pub r: f64,
    pub theta: f64,
    pub nu: f64,
    pub s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutLocusArc {
    pub kind: CutLocusKind,
    pub metric: CutMetric,
    pub samples: Vec<CutSample>,
}

impl CutLocusArc {
    pub fn points(&self) -> Vec<(f64, f64)> {
        self.samples.iter().map(|p| (p.r, p.theta)).collect()
    }
}

fn metric_of(nav: &NavigationData) -> CutMetric {
    if nav.mu() == 0.0 {
        CutMetric::H
    } else {
        CutMetric::FForward
    }
}

/// `H(m(u))`, with the equator limit `π / (m(a) sqrt(G(a)))`.
pub fn half_period_at_start(spec: &ProfileSpec, u: f64) -> Result<f64> {
    let m = spec.m(u);
    if (u - spec.a()).abs() < 1e-12 || m >= spec.equator_m() {
        return Ok(PI / (spec.equator_m() * spec.curvature_raw(spec.a()).sqrt()));
    }
    h_half_period(spec, m)
}

/// `d_h(x, q̂₀)` along the geodesic tangent to the parallel through `x`.
pub fn tangent_conjugate_distance(spec: &ProfileSpec, u: f64) -> Result<f64> {
    spec.check_interior(u)?;
    if (u - spec.a()).abs() < 1e-12 {
        return Ok(PI / spec.curvature_raw(spec.a()).sqrt());
    }
    h_arc_length(spec, spec.m(u), u, spec.two_a() - u)
}

/// h-arclength at which the pair `γ_ν`, `β_ν` from `(u, 0)` meet on the
/// antipodal parallel (monotone non-decreasing curvature).
pub fn cut_parameter_quadrature(spec: &ProfileSpec, u: f64, nu: f64) -> Result<f64> {
    let n = nu.abs();
    if n < 1e-12 {
        return Ok(spec.two_a());
    }
    if n >= spec.m(u) {
        return tangent_conjugate_distance(spec, u);
    }
    h_half_arclength(spec, n)
}

/// Same parameter from shooting: the deviated down-first and up-first
/// F-geodesics with Clairaut constant `nu` are intersected by Newton's method.
/// Returns `(s_down, s_up)`; both equal the cut parameter.
pub fn cut_parameter_shooting(nav: &NavigationData, u: f64, nu: f64) -> Result<(f64, f64)> {
    let spec = nav.profile();
    let guess = cut_parameter_quadrature(spec, u, nu)?;
    let len = guess * 1.5 + 1.0;
    let step = StepControl::with_tol(1e-12);
    let down = crate::geodesics::flow_deviate(
        &shoot_h_geodesic(spec, (u, 0.0), nu, -1, len, &step)?,
        nav,
        Direction::Forward,
    )?;
    let up = crate::geodesics::flow_deviate(
        &shoot_h_geodesic(spec, (u, 0.0), nu, 1, len, &step)?,
        nav,
        Direction::Forward,
    )?;
    intersect(&down, &up, guess, guess)
}

fn intersect(p: &GeodesicPath, q: &GeodesicPath, mut s1: f64, mut s2: f64) -> Result<(f64, f64)> {
    for _ in 0..50 {
        let a = p.state_at(s1);
        let b = q.state_at(s2);
        let f1 = a.r - b.r;
        let f2 = a.theta - b.theta;
        let det = -a.dr * b.dtheta + a.dtheta * b.dr;
        if det.abs() < 1e-14 {
            return Err(Error::InvalidArgument("tangential intersection".into()));
        }
        let d1 = (-b.dtheta * f1 + b.dr * f2) / det;
        let d2 = (-a.dtheta * f1 + a.dr * f2) / det;
        s1 -= d1;
        s2 -= d2;
        if d1.abs().max(d2.abs()) < 1e-13 {
            return Ok((s1, s2));
        }
    }
    Err(Error::InvalidArgument(
        "pair intersection did not converge".into(),
    ))
}

/// Cut locus of `x = (r, θ)` from the curvature monotonicity class.
pub fn cut_locus_theorem(nav: &NavigationData, x: (f64, f64)) -> Result<CutLocusArc> {
    cut_locus_theorem_with(nav, x, 64)
}

pub fn cut_locus_theorem_with(
    nav: &NavigationData,
    x: (f64, f64),
    samples: usize,
) -> Result<CutLocusArc> {
    let spec = nav.profile();
    let (u, theta0) = x;
    spec.check_interior(u)?;
    let class = classify_curvature(spec, 512)?;
    let mu = nav.mu();
    let metric = metric_of(nav);
    match class.value {
        CurvatureClassValue::Constant => {
            let radius = 1.0 / spec.curvature_raw(spec.a()).sqrt();
            let r = spec.two_a() - u;
            let theta = theta0 + PI * (1.0 + mu * radius);
            Ok(CutLocusArc {
                kind: CutLocusKind::SinglePoint { r, theta },
                metric,
                samples: vec![CutSample {
                    r,
                    theta,
                    nu: 0.0,
                    s: PI * radius,
                }],
            })
        }
        CurvatureClassValue::NonDecreasing => parallel_arc(nav, u, theta0, samples),
        CurvatureClassValue::NonIncreasing => meridian_arc(nav, u, theta0, samples),
        CurvatureClassValue::NonMonotone => Err(Error::HypothesisNotSatisfied(
            "curvature is not monotone from the pole to the equator; use the oracle".into(),
        )),
    }
}

fn parallel_arc(nav: &NavigationData, u: f64, theta0: f64, samples: usize) -> Result<CutLocusArc> {
    let spec = nav.profile();
    let mu = nav.mu();
    let m = spec.m(u);
    let h_end = half_period_at_start(spec, u)?;
    let psi = mu * tangent_conjugate_distance(spec, u)?;
    let r = spec.two_a() - u;
    let lo = theta0 + h_end + psi;
    let hi = theta0 + 2.0 * PI - (h_end - psi);
    let n = samples.max(2);
    let mut pts: Vec<CutSample> = (1..n)
        .into_par_iter()
        .map(|k| {
            let nu = m * k as f64 / n as f64;
            let h = h_half_period(spec, nu)?;
            let s = cut_parameter_quadrature(spec, u, nu)?;
            Ok([
                CutSample {
                    r,
                    theta: theta0 + h + mu * s,
                    nu,
                    s,
                },
                CutSample {
                    r,
                    theta: theta0 + 2.0 * PI - h + mu * s,
                    nu: -nu,
                    s,
                },
            ])
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let s_end = tangent_conjugate_distance(spec, u)?;
    pts.push(CutSample {
        r,
        theta: lo,
        nu: m,
        s: s_end,
    });
    pts.push(CutSample {
        r,
        theta: hi,
        nu: -m,
        s: s_end,
    });
    pts.push(CutSample {
        r,
        theta: theta0 + PI + mu * spec.two_a(),
        nu: 0.0,
        s: spec.two_a(),
    });
    pts.sort_by(|a, b| a.theta.total_cmp(&b.theta));
    Ok(CutLocusArc {
        kind: CutLocusKind::ParallelSubarc {
            r,
            theta_interval: (lo, hi),
        },
        metric: metric_of(nav),
        samples: pts,
    })
}

fn meridian_arc(nav: &NavigationData, u: f64, theta0: f64, samples: usize) -> Result<CutLocusArc> {
    let spec = nav.profile();
    let mu = nav.mu();
    let m = spec.m(u);
    let n = samples.max(2);
    let down = first_conjugate_on_meridian(spec, u, -1)?;
    let up = first_conjugate_on_meridian(spec, u, 1)?;
    let s_len = search_length(spec);
    let step = StepControl::default();
    let mut pts: Vec<CutSample> = (1..n)
        .into_par_iter()
        .flat_map_iter(|k| {
            let nu = m * k as f64 / n as f64;
            [-1i8, 1].into_iter().map(move |sign| (nu, sign))
        })
        .map(|(nu, sign)| {
            let path = shoot_h_geodesic(spec, (u, 0.0), nu, sign, s_len, &step)?;
            let s = path
                .first_theta_crossing(PI)
                .ok_or(Error::NoConjugatePoint { s_max: s_len })?;
            let r = path.h_state_at(s).r;
            Ok(CutSample {
                r,
                theta: theta0 + PI + mu * s,
                nu: if sign < 0 { nu } else { -nu },
                s,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    for c in [down, up] {
        pts.push(CutSample {
            r: c.r,
            theta: theta0 + PI + mu * c.s,
            nu: 0.0,
            s: c.s,
        });
    }
    pts.sort_by(|a, b| a.r.total_cmp(&b.r));
    Ok(CutLocusArc {
        kind: CutLocusKind::MeridianSubarc {
            base_theta: theta0 + PI,
            r_interval: (down.r.min(up.r), down.r.max(up.r)),
        },
        metric: metric_of(nav),
        samples: pts,
    })
}

/// Sufficient premise for the equator case: `H` strictly decreasing on a grid
/// of `(0, m(a))`.
pub fn half_period_decreasing(spec: &ProfileSpec, n: usize) -> Result<bool> {
    let top = spec.equator_m();
    let vals: Vec<f64> = (1..=n)
        .into_par_iter()
        .map(|i| h_half_period(spec, top * i as f64 / (n + 1) as f64))
        .collect::<Result<_>>()?;
    Ok(vals.windows(2).all(|w| w[1] < w[0]))
}

/// F-cut locus of a point off the equator when the cut locus of equator
/// points is known to be an equatorial subarc: a subarc of the antipodal
/// parallel bounded by the forward and backward conjugate images.
pub fn cut_locus_equator_case(nav: &NavigationData, x: (f64, f64)) -> Result<CutLocusArc> {
    let spec = nav.profile();
    let (u, theta0) = x;
    spec.check_interior(u)?;
    if (u - spec.a()).abs() < 1e-12 {
        return Err(Error::InvalidArgument(
            "point must lie off the equator".into(),
        ));
    }
    if !half_period_decreasing(spec, 64)? {
        return Err(Error::HypothesisNotSatisfied(
            "H is not decreasing on (0, m(a))".into(),
        ));
    }
    let m = spec.m(u);
    let fwd = first_f_conjugate(nav, u, m, Direction::Forward)?;
    let bwd = first_f_conjugate(nav, u, m, Direction::Backward)?;
    let r = spec.two_a() - u;
    let lo = theta0 + fwd.theta;
    let hi = theta0 + 2.0 * PI - bwd.theta;
    Ok(CutLocusArc {
        kind: CutLocusKind::ParallelSubarc {
            r,
            theta_interval: (lo, hi),
        },
        metric: metric_of(nav),
        samples: vec![
            CutSample {
                r: fwd.r,
                theta: lo,
                nu: m,
                s: fwd.s,
            },
            CutSample {
                r: bwd.r,
                theta: hi,
                nu: -m,
                s: bwd.s,
            },
        ],
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Pole {
    /// `r = 0`.
    P,
    /// `r = 2a`.
    Q,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoleCut {
    pub r: f64,
    pub distance: f64,
}

/// The cut point of a pole is the other pole, at distance `2a` for both metrics.
pub fn pole_cut(nav: &NavigationData, pole: Pole) -> Result<PoleCut> {
    let spec = nav.profile();
    let distance = h_arc_length(spec, 0.0, 0.0, spec.two_a())?;
    Ok(PoleCut {
        r: match pole {
            Pole::P => spec.two_a(),
            Pole::Q => 0.0,
        },
        distance,
    })
}
