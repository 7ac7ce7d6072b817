//! h-geodesics of the surface of revolution and their Finsler images under the
//! wind flow `(r, θ) ↦ (r, θ ± μ s)`.

use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ode::{self, Control, DenseSolution};
use crate::quadrature::{integrate_sqrt_endpoints, Tolerance};
use crate::surfaces::{Direction, NavigationData, ProfileSpec};

/// Pole clearance for non-meridian geodesics.
pub const POLE_EPS: f64 = 1e-9;
/// Clairaut constants below this are treated as meridians.
pub const MERIDIAN_NU: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeodesicState {
    pub s: f64,
    pub r: f64,
    /// Unwrapped angle on the universal cover.
    pub theta: f64,
    pub dr: f64,
    pub dtheta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PathKind {
    Riemannian,
    FinslerForward,
    FinslerBackward,
}

/// Which form of the geodesic equations is integrated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Integration {
    /// `(r, θ, r')` with `θ' = ν / m²` substituted, so Clairaut holds exactly.
    Reduced,
    /// Both second-order equations, Clairaut only conserved numerically.
    Full,
}

#[derive(Debug, Clone, Copy)]
pub struct StepControl {
    pub tol: f64,
    pub h_max: f64,
    pub integration: Integration,
}

impl Default for StepControl {
    fn default() -> Self {
        Self {
            tol: 1e-11,
            h_max: 0.05,
            integration: Integration::Reduced,
        }
    }
}

impl StepControl {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }

    fn options(&self) -> ode::Options {
        ode::Options {
            rtol: self.tol,
            atol: self.tol,
            h_init: 1e-3,
            h_max: self.h_max,
            ..ode::Options::default()
        }
    }
}

#[derive(Debug)]
enum Trajectory {
    Reduced {
        profile: ProfileSpec,
        nu: f64,
        sol: DenseSolution<3>,
    },
    Full {
        sol: DenseSolution<4>,
    },
    Meridian {
        two_a: f64,
        r0: f64,
        theta0: f64,
        dr0: f64,
    },
}

impl Trajectory {
    fn state(&self, s: f64) -> GeodesicState {
        match self {
            Trajectory::Reduced { profile, nu, sol } => {
                let [r, theta, dr] = sol.eval(s);
                let m = profile.m(r);
                GeodesicState {
                    s,
                    r,
                    theta,
                    dr,
                    dtheta: nu / (m * m),
                }
            }
            Trajectory::Full { sol } => {
                let [r, theta, dr, dtheta] = sol.eval(s);
                GeodesicState {
                    s,
                    r,
                    theta,
                    dr,
                    dtheta,
                }
            }
            Trajectory::Meridian {
                two_a,
                r0,
                theta0,
                dr0,
            } => {
                // unfold onto the closed meridian of length 4a
                let p = r0 + dr0 * s;
                let k = (p / two_a).floor();
                let q = p - k * two_a;
                let odd = (k as i64).rem_euclid(2) == 1;
                GeodesicState {
                    s,
                    r: if odd { two_a - q } else { q },
                    theta: theta0 + PI * k.abs(),
                    dr: if odd { -dr0 } else { *dr0 },
                    dtheta: 0.0,
                }
            }
        }
    }

    fn knots(&self, length: f64) -> Vec<f64> {
        match self {
            Trajectory::Reduced { sol, .. } => {
                knots_of(sol.segments().iter().map(|g| g.t0), sol.t_end())
            }
            Trajectory::Full { sol } => knots_of(sol.segments().iter().map(|g| g.t0), sol.t_end()),
            Trajectory::Meridian { two_a, .. } => {
                let n = ((length / (two_a / 128.0)).ceil() as usize).max(2);
                (0..=n).map(|i| length * i as f64 / n as f64).collect()
            }
        }
    }
}

fn knots_of(starts: impl Iterator<Item = f64>, end: f64) -> Vec<f64> {
    let mut v: Vec<f64> = starts.filter(|&t| t < end).collect();
    v.push(end);
    v
}

/// A unit-speed geodesic, Riemannian or Finsler (flow-deviated).
#[derive(Debug, Clone)]
pub struct GeodesicPath {
    kind: PathKind,
    nu: f64,
    mu: f64,
    length: f64,
    reversed: bool,
    traj: Arc<Trajectory>,
    samples: Vec<GeodesicState>,
    turning_points: Vec<f64>,
}

impl GeodesicPath {
    pub fn kind(&self) -> PathKind {
        self.kind
    }

    /// Clairaut constant of the underlying h-geodesic.
    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn samples(&self) -> &[GeodesicState] {
        &self.samples
    }

    /// Arclengths where `dr/ds` changes sign (tangency with a parallel).
    pub fn turning_points(&self) -> &[f64] {
        &self.turning_points
    }

    pub fn is_meridian(&self) -> bool {
        matches!(*self.traj, Trajectory::Meridian { .. })
    }

    fn deviation(&self) -> f64 {
        match self.kind {
            PathKind::Riemannian => 0.0,
            PathKind::FinslerForward => self.mu,
            PathKind::FinslerBackward => -self.mu,
        }
    }

    /// State of the underlying h-geodesic at arclength `s`.
    pub fn h_state_at(&self, s: f64) -> GeodesicState {
        let s = s.clamp(0.0, self.length);
        if self.reversed {
            let st = self.traj.state(self.length - s);
            GeodesicState {
                s,
                dr: -st.dr,
                dtheta: -st.dtheta,
                ..st
            }
        } else {
            self.traj.state(s)
        }
    }

    /// State at arclength `s` (clamped to `[0, length]`).
    pub fn state_at(&self, s: f64) -> GeodesicState {
        let mut st = self.h_state_at(s);
        let dev = self.deviation();
        st.theta += dev * st.s;
        st.dtheta += dev;
        st
    }

    pub fn end_state(&self) -> GeodesicState {
        self.state_at(self.length)
    }

    fn resample(&self) -> Vec<GeodesicState> {
        let knots = self.traj.knots(self.length);
        let mut out: Vec<GeodesicState> = if self.reversed {
            knots
                .iter()
                .rev()
                .map(|&t| self.state_at(self.length - t))
                .collect()
        } else {
            knots.iter().map(|&t| self.state_at(t)).collect()
        };
        out.dedup_by(|b, a| b.s <= a.s);
        out
    }

    /// Knot arclengths of the path, increasing.
    pub fn knots(&self) -> Vec<f64> {
        self.samples.iter().map(|st| st.s).collect()
    }

    /// All `s > 0` where `r(s)` crosses `r_target` with a sign change.
    pub fn crossings(&self, r_target: f64) -> Vec<f64> {
        let g = |s: f64| self.h_state_at(s).r - r_target;
        let knots = self.knots();
        let mut out = Vec::new();
        for w in knots.windows(2) {
            // subdivide to catch two crossings inside one step
            let sub = 4;
            let mut a = w[0];
            let mut ga = g(a);
            for j in 1..=sub {
                let b = w[0] + (w[1] - w[0]) * j as f64 / sub as f64;
                let gb = g(b);
                if ga * gb < 0.0 || (gb == 0.0 && ga != 0.0) {
                    out.push(ode::bracket_root(g, a, b, 1e-14));
                }
                a = b;
                ga = gb;
            }
        }
        out
    }

    /// First `s > 0` where the (deviated) angle reaches `theta_target`.
    pub fn first_theta_crossing(&self, theta_target: f64) -> Option<f64> {
        let g = |s: f64| self.state_at(s).theta - theta_target;
        let knots = self.knots();
        let g0 = g(0.0);
        for w in knots.windows(2) {
            let gb = g(w[1]);
            if g0 * gb < 0.0 || (gb == 0.0 && g0 != 0.0) {
                let mut a = w[0];
                let mut ga = g(a);
                let sub = 4;
                for j in 1..=sub {
                    let b = w[0] + (w[1] - w[0]) * j as f64 / sub as f64;
                    let gb = g(b);
                    if ga * gb <= 0.0 && ga != 0.0 {
                        return Some(ode::bracket_root(g, a, b, 1e-14));
                    }
                    a = b;
                    ga = gb;
                }
            }
        }
        None
    }

    /// Path with `s → L − s`, velocities negated and Clairaut constant `−ν`.
    pub fn reversed(&self) -> Result<GeodesicPath> {
        if self.kind != PathKind::Riemannian {
            return Err(Error::PathKind(
                "only Riemannian paths can be reversed".into(),
            ));
        }
        let mut out = GeodesicPath {
            nu: -self.nu,
            reversed: !self.reversed,
            samples: Vec::new(),
            turning_points: self
                .turning_points
                .iter()
                .rev()
                .map(|t| self.length - t)
                .collect(),
            ..self.clone()
        };
        out.samples = out.resample();
        Ok(out)
    }
}

/// Shoots the h-geodesic from `start = (r0, θ0)` with Clairaut constant `nu`
/// and radial direction `dr_sign`, up to arclength `s_max`.
pub fn shoot_h_geodesic(
    spec: &ProfileSpec,
    start: (f64, f64),
    nu: f64,
    dr_sign: i8,
    s_max: f64,
    step: &StepControl,
) -> Result<GeodesicPath> {
    let (r0, theta0) = start;
    spec.check_radius(r0)?;
    if !(s_max > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "s_max must be positive, got {s_max}"
        )));
    }
    if !matches!(dr_sign, -1..=1) {
        return Err(Error::InvalidArgument(format!(
            "dr_sign must be -1, 0 or 1, got {dr_sign}"
        )));
    }
    let m0 = spec.m(r0);
    let ratio = nu.abs() / m0;
    if !(ratio <= 1.0 + 1e-12) {
        return Err(Error::ClairautOutOfRange {
            nu,
            reason: format!("|nu| exceeds m(r0) = {m0}"),
        });
    }
    if dr_sign == 0 && (ratio - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidArgument(
            "dr_sign = 0 requires |nu| = m(r0)".into(),
        ));
    }
    let dr0 = f64::from(dr_sign) * (1.0 - ratio.min(1.0).powi(2)).sqrt();

    if nu.abs() < MERIDIAN_NU {
        if dr_sign == 0 {
            return Err(Error::InvalidArgument(
                "a meridian needs dr_sign = ±1".into(),
            ));
        }
        let traj = Trajectory::Meridian {
            two_a: spec.two_a(),
            r0,
            theta0,
            dr0: f64::from(dr_sign),
        };
        return Ok(finish(traj, nu, s_max, Vec::new()));
    }
    if r0 < POLE_EPS || r0 > spec.two_a() - POLE_EPS {
        return Err(Error::NumericalCorner { nu, s: 0.0 });
    }

    let lo = POLE_EPS;
    let hi = spec.two_a() - POLE_EPS;
    let mut corner = None;
    let mut turning = Vec::new();
    let opts = step.options();

    let traj = match step.integration {
        Integration::Reduced => {
            let sol = ode::integrate(
                |_, y: &[f64; 3]| {
                    let v = spec.eval_raw(y[0]);
                    let m2 = v.m * v.m;
                    [y[2], nu / m2, nu * nu * v.dm / (m2 * v.m)]
                },
                0.0,
                [r0, theta0, dr0],
                s_max,
                &opts,
                |seg| watch(seg, 0, 2, lo, hi, &mut corner, &mut turning),
            )
            .map_err(|e| corner_error(e, nu))?;
            Trajectory::Reduced {
                profile: spec.clone(),
                nu,
                sol,
            }
        }
        Integration::Full => {
            let sol = ode::integrate(
                |_, y: &[f64; 4]| {
                    let v = spec.eval_raw(y[0]);
                    [
                        y[2],
                        y[3],
                        v.m * v.dm * y[3] * y[3],
                        -2.0 * v.dm / v.m * y[2] * y[3],
                    ]
                },
                0.0,
                [r0, theta0, dr0, nu / (m0 * m0)],
                s_max,
                &opts,
                |seg| watch(seg, 0, 2, lo, hi, &mut corner, &mut turning),
            )
            .map_err(|e| corner_error(e, nu))?;
            Trajectory::Full { sol }
        }
    };
    if let Some(s) = corner {
        return Err(Error::NumericalCorner { nu, s });
    }
    Ok(finish(traj, nu, s_max, turning))
}

fn corner_error(e: Error, nu: f64) -> Error {
    match e {
        Error::StepUnderflow(s) => Error::NumericalCorner { nu, s },
        other => other,
    }
}

fn watch<const N: usize>(
    seg: &ode::Segment<N>,
    ir: usize,
    idr: usize,
    lo: f64,
    hi: f64,
    corner: &mut Option<f64>,
    turning: &mut Vec<f64>,
) -> Control {
    let pts = 4;
    let mut prev = seg.start();
    for j in 1..=pts {
        let t = seg.t0 + (seg.t1 - seg.t0) * j as f64 / pts as f64;
        let y = seg.eval(t);
        if y[ir] < lo || y[ir] > hi {
            *corner = Some(t);
            return Control::StopAt(t);
        }
        if prev[idr] * y[idr] < 0.0 {
            let t0 = t - (seg.t1 - seg.t0) / pts as f64;
            turning.push(ode::bracket_root(|s| seg.eval(s)[idr], t0, t, 1e-14));
        }
        prev = y;
    }
    Control::Continue
}

fn finish(traj: Trajectory, nu: f64, length: f64, turning_points: Vec<f64>) -> GeodesicPath {
    let mut path = GeodesicPath {
        kind: PathKind::Riemannian,
        nu,
        mu: 0.0,
        length,
        reversed: false,
        traj: Arc::new(traj),
        samples: Vec::new(),
        turning_points,
    };
    path.samples = path.resample();
    path
}

/// `ν = m(r)² dθ/ds`.
pub fn clairaut_constant(spec: &ProfileSpec, state: &GeodesicState) -> f64 {
    let m = spec.m(state.r);
    m * m * state.dtheta
}

/// Image of a path under the wind flow: `θ → θ ± μ s`.
///
/// A Finsler path may only be deviated back by the opposite flow of the same
/// wind, which returns the underlying Riemannian path.
pub fn flow_deviate(
    path: &GeodesicPath,
    nav: &NavigationData,
    direction: Direction,
) -> Result<GeodesicPath> {
    // revalidate the wind bound against this profile
    let nav = nav.with_mu(nav.mu())?;
    let kind = match (path.kind, direction) {
        (PathKind::Riemannian, Direction::Forward) => PathKind::FinslerForward,
        (PathKind::Riemannian, Direction::Backward) => PathKind::FinslerBackward,
        (PathKind::FinslerForward, Direction::Backward)
        | (PathKind::FinslerBackward, Direction::Forward)
            if path.mu == nav.mu() =>
        {
            PathKind::Riemannian
        }
        _ => {
            return Err(Error::PathKind(
                "a Finsler path can only be undone by the opposite flow of the same wind".into(),
            ))
        }
    };
    let mut out = GeodesicPath {
        kind,
        mu: if kind == PathKind::Riemannian {
            0.0
        } else {
            nav.mu()
        },
        samples: Vec::new(),
        ..path.clone()
    };
    let dev = direction.sign() * nav.mu();
    out.samples = path
        .samples
        .iter()
        .map(|st| GeodesicState {
            theta: st.theta + dev * st.s,
            dtheta: st.dtheta + dev,
            ..*st
        })
        .collect();
    Ok(out)
}

/// Strips the wind deviation from a Finsler path.
pub fn underlying_h_path(path: &GeodesicPath) -> GeodesicPath {
    let mut out = GeodesicPath {
        kind: PathKind::Riemannian,
        mu: 0.0,
        samples: Vec::new(),
        ..path.clone()
    };
    out.samples = out.resample();
    out
}

/// `cos ψ = (ν + μ m²) / (m sqrt(1 + 2μν + μ² m²))`, `ψ` the h-angle between
/// the F-geodesic and the parallel.
pub fn finsler_clairaut_cos(nav: &NavigationData, r: f64, nu: f64) -> Result<f64> {
    nav.profile().check_interior(r)?;
    let m = nav.profile().m(r);
    let mu = nav.mu();
    let q = 1.0 + 2.0 * mu * nu + mu * mu * m * m;
    if !(q > 0.0) {
        return Err(Error::ClairautOutOfRange {
            nu,
            reason: "degenerate Finsler Clairaut denominator".into(),
        });
    }
    Ok((nu + mu * m * m) / (m * q.sqrt()))
}

/// `h(Ṗ, ∂θ) / (‖Ṗ‖_h m)` measured from a state.
pub fn measured_cos_psi(spec: &ProfileSpec, state: &GeodesicState) -> f64 {
    let m = spec.m(state.r);
    m * state.dtheta / (state.dr * state.dr + m * m * state.dtheta * state.dtheta).sqrt()
}

/// `|dr² + m² dθ² − 1|` for an h-state.
pub fn unit_speed_residual(spec: &ProfileSpec, state: &GeodesicState) -> f64 {
    let m = spec.m(state.r);
    (state.dr * state.dr + m * m * state.dtheta * state.dtheta - 1.0).abs()
}

fn check_traversable(spec: &ProfileSpec, nu: f64, r1: f64, r2: f64) -> Result<()> {
    let (lo, hi) = (r1.min(r2), r1.max(r2));
    let n = 256;
    for i in 1..n {
        let t = lo + (hi - lo) * i as f64 / n as f64;
        if spec.m(t) < nu.abs() * (1.0 - 1e-12) {
            return Err(Error::NotTraversable { nu, r1, r2 });
        }
    }
    Ok(())
}

/// `|m(e + d)² − ν²|` near the segment end `e`, written as
/// `(m(e + d) − m(e))(m(e + d) + m(e)) + m(e)² − ν²` so that it keeps its
/// accuracy at a tangency.
fn radicand(spec: &ProfileSpec, nu: f64) -> impl Fn(f64, f64) -> f64 + '_ {
    let n = nu.abs();
    move |e, d| {
        let me = spec.m(e);
        (spec.m_increment(e, d) * (spec.m(e + d) + me) + (me - n) * (me + n)).abs()
    }
}

/// h-length of a geodesic segment with Clairaut constant `nu` running
/// monotonically in `r` between `r1` and `r2`.
pub fn h_arc_length(spec: &ProfileSpec, nu: f64, r1: f64, r2: f64) -> Result<f64> {
    spec.check_radius(r1)?;
    spec.check_radius(r2)?;
    check_traversable(spec, nu, r1, r2)?;
    if nu == 0.0 {
        return Ok((r2 - r1).abs());
    }
    let radicand = radicand(spec, nu);
    let res = integrate_sqrt_endpoints(
        |e, d| spec.m(e + d) / radicand(e, d).sqrt(),
        r1.min(r2),
        r1.max(r2),
        Tolerance::default(),
    )?;
    Ok(res.value)
}

/// θ-advance `∫ ν / (m sqrt(m² − ν²)) dτ` of a monotone-in-r segment.
pub fn h_theta_advance(spec: &ProfileSpec, nu: f64, r1: f64, r2: f64) -> Result<f64> {
    spec.check_radius(r1)?;
    spec.check_radius(r2)?;
    check_traversable(spec, nu, r1, r2)?;
    if nu == 0.0 {
        return Ok(0.0);
    }
    let radicand = radicand(spec, nu);
    let res = integrate_sqrt_endpoints(
        |e, d| nu / (spec.m(e + d) * radicand(e, d).sqrt()),
        r1.min(r2),
        r1.max(r2),
        Tolerance::default(),
    )?;
    Ok(res.value)
}
