//! Randomised invariant suite behind the `verify` subcommand.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::conjcut::{
    classify_curvature, cut_locus_theorem, cut_parameter_quadrature, cut_parameter_shooting,
    first_f_conjugate, first_h_conjugate, CurvatureClassValue, CutLocusKind,
};
use crate::error::Result;
use crate::geodesics::{
    finsler_clairaut_cos, flow_deviate, h_arc_length, h_theta_advance, measured_cos_psi,
    shoot_h_geodesic, unit_speed_residual, GeodesicPath, Integration, StepControl,
};
use crate::halfperiod::{
    closed_form, f_half_period, h_half_period, numerical_derivatives, psi, XiConvention,
};
use crate::oracle::{build_distance_field, MeshSpec};
use crate::surfaces::{Direction, NavigationData, ProfileFamily, ProfileSpec};

#[derive(Debug, Clone)]
pub struct Target {
    pub label: String,
    pub nav: NavigationData,
}

impl Target {
    pub fn new(label: impl Into<String>, nav: NavigationData) -> Self {
        Self {
            label: label.into(),
            nav,
        }
    }
}

/// Round sphere, Example 1 and Example 2 with moderate wind.
pub fn default_targets() -> Result<Vec<Target>> {
    Ok(vec![
        Target::new(
            "round(R=1), mu=0.25",
            NavigationData::new(ProfileSpec::round(1.0)?, 0.25)?,
        ),
        Target::new(
            "example1(1), mu=0.3",
            NavigationData::new(ProfileSpec::example1(1.0)?, 0.3)?,
        ),
        Target::new(
            "example2(0.5), mu=0.2",
            NavigationData::new(ProfileSpec::example2(0.5)?, 0.2)?,
        ),
    ])
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub target: String,
    pub passed: bool,
    /// The invariant does not apply to this surface.
    pub skipped: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub passed: bool,
    pub failed: Vec<String>,
    pub checks: Vec<CheckResult>,
}

enum Outcome {
    Measured { worst: f64, limit: f64 },
    Holds(bool, String),
    Skip(&'static str),
}

type Check = fn(&NavigationData, &mut ChaCha8Rng) -> Result<Outcome>;

const CHECKS: &[(&str, Check)] = &[
    ("surfaces.symmetry", symmetry),
    ("surfaces.curvature_fd", curvature_fd),
    ("surfaces.norm_agreement", norm_agreement),
    ("surfaces.f_lower_bound", f_lower_bound),
    ("geodesics.unit_speed", unit_speed),
    ("geodesics.clairaut", clairaut),
    ("geodesics.deviation_invertible", deviation_invertible),
    ("geodesics.reversal", reversal),
    ("geodesics.f_unit_speed", f_unit_speed),
    ("geodesics.finsler_clairaut", finsler_clairaut),
    ("halfperiod.closed_form", half_period_closed_form),
    ("halfperiod.first_return", first_return),
    (
        "halfperiod.monotonicity_propagation",
        monotonicity_propagation,
    ),
    ("halfperiod.psi_decreasing", psi_decreasing),
    ("halfperiod.f_bracket", f_bracket),
    ("conjcut.flow_correspondence", flow_correspondence),
    ("conjcut.antipodal_parallel", antipodal_parallel),
    ("conjcut.endpoint_identity", endpoint_identity),
    ("conjcut.arc_symmetry", arc_symmetry),
    ("conjcut.mu_zero_degeneration", mu_zero),
    ("conjcut.classification_stable", classification_stable),
    ("oracle.field_invariants", field_invariants),
];

pub fn check_names() -> Vec<&'static str> {
    CHECKS.iter().map(|c| c.0).collect()
}

/// Runs every check on every target; each check gets its own RNG stream so
/// results do not depend on which other checks ran.
pub fn run_suite(targets: &[Target], seed: u64) -> VerifyReport {
    let mut checks = Vec::new();
    for (t_idx, target) in targets.iter().enumerate() {
        for (c_idx, (name, f)) in CHECKS.iter().enumerate() {
            let stream = (t_idx * CHECKS.len() + c_idx) as u64;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(stream);
            let (passed, skipped, detail) = match f(&target.nav, &mut rng) {
                Ok(Outcome::Measured { worst, limit }) => (
                    worst <= limit,
                    false,
                    format!("worst {worst:.3e}, limit {limit:.1e}"),
                ),
                Ok(Outcome::Holds(ok, detail)) => (ok, false, detail),
                Ok(Outcome::Skip(why)) => (true, true, why.to_string()),
                Err(e) => (false, false, format!("error: {e}")),
            };
            checks.push(CheckResult {
                name,
                target: target.label.clone(),
                passed,
                skipped,
                detail,
            });
        }
    }
    let failed: Vec<String> = checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| format!("{} [{}]", c.name, c.target))
        .collect();
    VerifyReport {
        seed,
        passed: failed.is_empty(),
        failed,
        checks,
    }
}

fn interior(spec: &ProfileSpec, rng: &mut ChaCha8Rng, margin: f64) -> f64 {
    rng.gen_range(margin..spec.two_a() - margin)
}

/// Random start and Clairaut constant away from meridians, so that no path
/// gets within the pole guard.
fn random_shot(
    spec: &ProfileSpec,
    rng: &mut ChaCha8Rng,
    length: f64,
    step: &StepControl,
) -> Result<GeodesicPath> {
    let r0 = interior(spec, rng, 0.1 * spec.a());
    let m = spec.m(r0);
    let (nu, sign) = loop {
        let phi: f64 = rng.gen_range(0.0..2.0 * PI);
        if phi.cos().abs() > 1e-2 && phi.sin().abs() > 1e-3 {
            break (m * phi.cos(), if phi.sin() > 0.0 { 1 } else { -1 });
        }
    };
    let theta0 = rng.gen_range(0.0..2.0 * PI);
    shoot_h_geodesic(spec, (r0, theta0), nu, sign, length, step)
}

fn symmetry(nav: &NavigationData, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let spec = nav.profile();
    Ok(Outcome::Measured {
        worst: spec.symmetry_residual(1000),
        limit: spec.symmetry_tolerance(),
    })
}

fn curvature_fd(nav: &NavigationData, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let spec = nav.profile();
    if !spec.is_closed_form() {
        return Ok(Outcome::Skip("tabulated profile"));
    }
    let h = 1e-4;
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let r = interior(spec, rng, 0.01);
        let fd = -(spec.m(r + h) - 2.0 * spec.m(r) + spec.m(r - h)) / (h * h * spec.m(r));
        let g = spec.gaussian_curvature(r)?;
        worst = worst.max((g - fd).abs() / g.abs().max(1.0));
    }
    Ok(Outcome::Measured { worst, limit: 1e-6 })
}

fn random_vector(rng: &mut ChaCha8Rng) -> (f64, f64) {
    loop {
        let y = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        if y.0 * y.0 + y.1 * y.1 > 1e-6 {
            return y;
        }
    }
}

fn norm_agreement(nav: &NavigationData, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let r = interior(nav.profile(), rng, 1e-3);
        let y = random_vector(rng);
        let a = nav.finsler_norm(r, y)?;
        let b = nav.finsler_norm_navigation(r, y)?;
        worst = worst.max((a - b).abs() / a.max(1.0));
    }
    Ok(Outcome::Measured {
        worst,
        limit: 1e-12,
    })
}

fn f_lower_bound(nav: &NavigationData, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..1000 {
        let r = interior(nav.profile(), rng, 1e-3);
        let y = random_vector(rng);
        let f = nav.finsler_norm(r, y)?;
        let bound = (1.0 - nav.mu() * nav.profile().m(r)) * nav.h_norm(r, y);
        if !(f > 0.0 && bound > 0.0) {
            return Ok(Outcome::Holds(
                false,
                format!("non-positive norm at r = {r}"),
            ));
        }
        worst = worst.max((bound - f) / f);
    }
    Ok(Outcome::Measured {
        worst: worst.max(0.0),
        limit: 1e-14,
    })
}

fn unit_speed(nav: &NavigationData, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let spec = nav.profile();
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let p = random_shot(spec, rng, 8.0 * spec.a(), &StepControl::with_tol(1e-10))?;
        for s in p.knots() {
            worst = worst.max(unit_speed_residual(spec, &p.h_state_at(s)));
        }
    }
    Ok(Outcome::Measured { worst, limit: 1e-8 })
}

fn clairaut(nav: &NavigationData, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let spec = nav.profile();
    // the reduced form conserves ν by construction, so integrate both equations
    let step = StepControl {
        integration: Integration::Full,
        ..StepControl::default()
    };
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let p = random_shot(spec, rng, 8.0 * spec.a(), &step)?;
        for st in p.samples() {
            worst = worst.max((spec.m(st.r).powi(2) * st.dtheta - p.nu()).abs());
        }
    }
    Ok(Outcome::Measured { worst, limit: 1e-7 })
}

fn deviation_invertible(nav: &NavigationData, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let spec = nav.profile();
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let p = random_shot(spec, rng, 8.0 * spec.a(), &StepControl::default())?;
        let there = flow_deviate(&p, nav, Direction::Forward)?;
        let back = flow_deviate(&there, nav, Direction::Backward)?;
        for (a, b) in p.samples().iter().zip(back.samples()) {
            worst = worst.max((a.theta - b.theta).abs());
        }
    }
    Ok(Outcome::Measured {
        worst,
        limit: 1e-14,
    })
}

fn reversal(nav: &NavigationData, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let spec = nav.profile();
    let mut worst = 0.0f64;
    for _ in 0..5 {
        let len = 4.0 * spec.a();
        let p = random_shot(spec, rng, len, &StepControl::with_tol(1e-12))?;
        let rev = p.reversed()?;
        if rev.nu() != -p.nu() {
            return Ok(Outcome::Holds(
                false,
                "reversed Clairaut constant is not -nu".into(),
            ));
        }
        let start = rev.state_at(0.0);
        let sign = if start.dr > 0.0 { 1 } else { -1 };
        let again = shoot_h_geodesic(
            spec,
            (start.r, start.theta),
            -p.nu(),
            sign,
            len,
            &StepControl::with_tol(1e-12),
        )?;
        for k in 0..=200 {
            let s = len * k as f64 / 200.0;
            let a = again.state_at(s);
            let b = p.state_at(len - s);
            worst = worst.max((a.r - b.r).abs()).max((a.theta - b.theta).abs());
        }
    }
    Ok(Outcome::Measured { worst, limit: 1e-6 })
}

fn f_unit_speed(nav: &NavigationData, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let spec = nav.profile();
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let p = random_shot(spec, rng, 8.0 * spec.a(), &StepControl::default())?;
        // backward paths have unit speed for the reverse metric F(−y)
        for (dir, flip) in [(Direction::Forward, 1.0), (Direction::Backward, -1.0)] {
            for st in flow_deviate(&p, nav, dir)?.samples() {
                let v = nav.finsler_norm(st.r, (flip * st.dr, flip * st.dtheta))?;
                worst = worst.max((v - 1.0).abs());
            }
        }
    }
    Ok(Outcome::Measured { worst, limit: 1e-8 })
}

fn finsler_clairaut(nav: &NavigationData, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let spec = nav.profile();
    let mut worst = 0.0f64;
    let mut count = 0;
    while count < 1000 {
        let p = flow_deviate(
            &random_shot(spec, rng, 8.0 * spec.a(), &StepControl::default())?,
            nav,
            Direction::Forward,
        )?;
        for k in 0..100 {
            let st = p.state_at(p.length() * (k as f64 + 0.5) / 100.0);
            let predicted = finsler_clairaut_cos(nav, st.r, p.nu())?;
            worst = worst.max((measured_cos_psi(spec, &st) - predicted).abs());
            count += 1;
        }
    }
    Ok(Outcome::Measured { worst, limit: 1e-8 })
}

fn nu_grid(spec: &ProfileSpec, n: usize) -> Vec<f64> {
    let top = spec.equator_m();
    (1..=n).map(|i| top * i as f64 / (n + 1) as f64).collect()
}

fn half_period_closed_form(nav: &NavigationData, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let spec = nav.profile();
    let closed: fn(f64, f64) -> f64 = match spec.family() {
        ProfileFamily::Example1 { .. } => closed_form::example1::h,
        ProfileFamily::Example2 { .. } => closed_form::example2::h,
        ProfileFamily::Round { .. } => |_, _| PI,
        ProfileFamily::CustomTable(_) => return Ok(Outcome::Skip("no closed form")),
    };
    let lambda = match spec.family() {
        ProfileFamily::Example1 { lambda } | ProfileFamily::Example2 { lambda } => *lambda,
        _ => 0.0,
    };
    let mut worst = 0.0f64;
    for nu in nu_grid(spec, 50) {
        worst = worst.max((h_half_period(spec, nu)? - closed(lambda, nu)).abs());
    }
    Ok(Outcome::Measured { worst, limit: 1e-6 })
}

fn needs_rising(spec: &ProfileSpec) -> Option<Outcome> {
    (!spec.is_rising_to_equator(512)).then_some(Outcome::Skip("m is not increasing on (0, a)"))
}

fn first_return(nav: &NavigationData, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let spec = nav.profile();
    if let Some(o) = needs_rising(spec) {
        return Ok(o);
    }
    let mut worst = 0.0f64;
    for _ in 0..5 {
        let nu = spec.equator_m() * rng.gen_range(0.05..0.95);
        let p = shoot_h_geodesic(
            spec,
            (spec.a(), 0.0),
            nu,
            -1,
            8.0 * spec.a(),
            &StepControl::default(),
        )?;
        let s = p.crossings(spec.a())[0];
        worst = worst.max((p.state_at(s).theta - h_half_period(spec, nu)?).abs());
    }
    Ok(Outcome::Measured { worst, limit: 1e-5 })
}

fn monotonicity_propagation(nav: &NavigationData, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let spec = nav.profile();
    if let Some(o) = needs_rising(spec) {
        return Ok(o);
    }
    if nav.mu() == 0.0 {
        return Ok(Outcome::Skip("no wind"));
    }
    let grid = nu_grid(spec, 200);
    let step = grid[1] - grid[0];
    let h: Vec<f64> = grid
        .iter()
        .map(|&nu| h_half_period(spec, nu))
        .collect::<Result<_>>()?;
    let hf: Vec<f64> = grid
        .iter()
        .map(|&nu| f_half_period(nav, nu, Direction::Forward))
        .collect::<Result<_>>()?;
    let dh = numerical_derivatives(&h, step, 1)?;
    let dhf = numerical_derivatives(&hf, step, 1)?;
    let bad = dh
        .iter()
        .zip(&dhf)
        .filter(|(a, b)| **a < 0.0 && **b >= 0.0)
        .count();
    Ok(Outcome::Holds(
        bad == 0,
        format!("{bad} grid points violate"),
    ))
}

fn psi_decreasing(nav: &NavigationData, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let spec = nav.profile();
    if let Some(o) = needs_rising(spec) {
        return Ok(o);
    }
    if nav.mu() == 0.0 {
        return Ok(Outcome::Skip("no wind"));
    }
    let vals: Vec<f64> = nu_grid(spec, 200)
        .iter()
        .map(|&nu| psi(nav, nu, XiConvention::Inverse))
        .collect::<Result<_>>()?;
    let bad = vals.windows(2).filter(|w| w[1] >= w[0]).count();
    Ok(Outcome::Holds(
        bad == 0,
        format!("{bad} non-decreasing steps"),
    ))
}

fn f_bracket(nav: &NavigationData, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let spec = nav.profile();
    if let Some(o) = needs_rising(spec) {
        return Ok(o);
    }
    let mut worst = 0.0f64;
    for nu in nu_grid(spec, 50) {
        let h = h_half_period(spec, nu)?;
        let plus = f_half_period(nav, nu, Direction::Forward)?;
        let minus = f_half_period(nav, nu, Direction::Backward)?;
        let p = psi(nav, nu, XiConvention::Inverse)?;
        if p < 0.0 {
            return Ok(Outcome::Holds(false, format!("psi({nu}) = {p} < 0")));
        }
        worst = worst
            .max((plus - h - p).abs())
            .max((minus - (2.0 * h - plus)).abs());
    }
    Ok(Outcome::Measured {
        worst,
        limit: 1e-12,
    })
}

fn monotone_class(spec: &ProfileSpec) -> Result<Option<Outcome>> {
    let class = classify_curvature(spec, 512)?.value;
    Ok(match class {
        CurvatureClassValue::Constant | CurvatureClassValue::NonDecreasing => None,
        _ => Some(Outcome::Skip("cut locus is not on the antipodal parallel")),
    })
}

fn random_off_equator(spec: &ProfileSpec, rng: &mut ChaCha8Rng) -> f64 {
    rng.gen_range(0.2 * spec.a()..0.9 * spec.a())
}

fn flow_correspondence(nav: &NavigationData, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let spec = nav.profile();
    if let Some(o) = monotone_class(spec)? {
        return Ok(o);
    }
    let mut worst = 0.0f64;
    for _ in 0..4 {
        let u = random_off_equator(spec, rng);
        let nu = spec.m(u) * rng.gen_range(-0.9..0.9);
        let l = cut_parameter_quadrature(spec, u, nu)?;
        let (a, b) = cut_parameter_shooting(nav, u, nu)?;
        worst = worst.max((a - l).abs()).max((b - l).abs());
    }
    Ok(Outcome::Measured { worst, limit: 1e-6 })
}

fn antipodal_parallel(nav: &NavigationData, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let spec = nav.profile();
    if let Some(o) = monotone_class(spec)? {
        return Ok(o);
    }
    let u = random_off_equator(spec, rng);
    let arc = cut_locus_theorem(nav, (u, 0.0))?;
    let target = spec.two_a() - u;
    let mut worst = arc
        .samples
        .iter()
        .map(|p| (p.r - target).abs())
        .fold(0.0, f64::max);
    match arc.kind {
        CutLocusKind::SinglePoint { r, .. } | CutLocusKind::ParallelSubarc { r, .. } => {
            worst = worst.max((r - target).abs())
        }
        CutLocusKind::MeridianSubarc { .. } => {
            return Ok(Outcome::Holds(
                false,
                "meridian arc for a monotone non-decreasing class".into(),
            ))
        }
    }
    Ok(Outcome::Measured { worst, limit: 1e-8 })
}

/// `d_h` and `H(m(u))` from quadratures that do not share code with the
/// cut-locus construction.
fn independent_endpoint_terms(spec: &ProfileSpec, u: f64) -> Result<(f64, f64)> {
    let m = spec.m(u);
    let d_h = 2.0 * h_arc_length(spec, m, u, spec.a())?;
    let h_m = 2.0 * h_theta_advance(spec, m, u, spec.a())?;
    Ok((d_h, h_m))
}

fn endpoint_identity(nav: &NavigationData, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let spec = nav.profile();
    if classify_curvature(spec, 512)?.value != CurvatureClassValue::NonDecreasing {
        return Ok(Outcome::Skip("not a parallel-subarc case"));
    }
    let u = random_off_equator(spec, rng);
    let CutLocusKind::ParallelSubarc {
        theta_interval: (lo, _),
        ..
    } = cut_locus_theorem(nav, (u, 0.0))?.kind
    else {
        return Ok(Outcome::Holds(false, "expected a parallel subarc".into()));
    };
    let (d_h, h_m) = independent_endpoint_terms(spec, u)?;
    Ok(Outcome::Measured {
        worst: (lo - (h_m + nav.mu() * d_h)).abs(),
        limit: 1e-6,
    })
}

fn arc_symmetry(nav: &NavigationData, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let spec = nav.profile();
    if classify_curvature(spec, 512)?.value != CurvatureClassValue::NonDecreasing {
        return Ok(Outcome::Skip("not a parallel-subarc case"));
    }
    let u = random_off_equator(spec, rng);
    let CutLocusKind::ParallelSubarc {
        theta_interval: (lo, hi),
        ..
    } = cut_locus_theorem(nav, (u, 0.0))?.kind
    else {
        return Ok(Outcome::Holds(false, "expected a parallel subarc".into()));
    };
    let (d_h, _) = independent_endpoint_terms(spec, u)?;
    let mid = PI + nav.mu() * d_h;
    // the endpoints are the forward and (mirrored) backward conjugate points
    // of the geodesic tangent to the parallel through x
    let nu = spec.m(u) * (1.0 - 1e-10);
    let fwd = first_f_conjugate(nav, u, nu, Direction::Forward)?;
    let bwd = first_f_conjugate(nav, u, nu, Direction::Backward)?;
    let worst = (0.5 * (lo + hi) - mid)
        .abs()
        .max((fwd.theta - lo).abs())
        .max((2.0 * PI - bwd.theta - hi).abs());
    Ok(Outcome::Measured { worst, limit: 1e-6 })
}

fn mu_zero(nav: &NavigationData, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let spec = nav.profile();
    let still = nav.with_mu(0.0)?;
    let mut worst = 0.0f64;
    let p = random_shot(spec, rng, 4.0 * spec.a(), &StepControl::default())?;
    for dir in [Direction::Forward, Direction::Backward] {
        let f = flow_deviate(&p, &still, dir)?;
        for (a, b) in p.samples().iter().zip(f.samples()) {
            worst = worst
                .max((a.theta - b.theta).abs())
                .max((a.dtheta - b.dtheta).abs());
        }
    }
    if spec.is_rising_to_equator(512) {
        for nu in nu_grid(spec, 10) {
            let h = h_half_period(spec, nu)?;
            for dir in [Direction::Forward, Direction::Backward] {
                worst = worst.max((f_half_period(&still, nu, dir)? - h).abs());
            }
        }
    }
    let u = random_off_equator(spec, rng);
    let nu = spec.m(u) * rng.gen_range(-0.9..0.9);
    let c = first_h_conjugate(spec, u, nu)?;
    for dir in [Direction::Forward, Direction::Backward] {
        let f = first_f_conjugate(&still, u, nu, dir)?;
        worst = worst.max((f.theta - c.theta).abs()).max((f.s - c.s).abs());
    }
    match (
        cut_locus_theorem(&still, (u, 0.0)),
        cut_locus_theorem(&NavigationData::riemannian(spec.clone()), (u, 0.0)),
    ) {
        (Ok(a), Ok(b)) => {
            if std::mem::discriminant(&a.kind) != std::mem::discriminant(&b.kind)
                || a.samples.len() != b.samples.len()
            {
                return Ok(Outcome::Holds(false, "cut locus structure differs".into()));
            }
            for (x, y) in a.samples.iter().zip(&b.samples) {
                worst = worst.max((x.r - y.r).abs()).max((x.theta - y.theta).abs());
            }
        }
        (Err(_), Err(_)) => {}
        _ => {
            return Ok(Outcome::Holds(
                false,
                "only one of the two cut loci exists".into(),
            ))
        }
    }
    Ok(Outcome::Measured {
        worst,
        limit: 1e-12,
    })
}

fn classification_stable(nav: &NavigationData, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let spec = nav.profile();
    let a = classify_curvature(spec, 512)?.value;
    let b = classify_curvature(spec, 1024)?.value;
    Ok(Outcome::Holds(
        a == b,
        format!("{a:?} at 512, {b:?} at 1024"),
    ))
}

fn field_invariants(nav: &NavigationData, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let mesh = MeshSpec::new(96, 192, 16)?;
    let dr = nav.profile().two_a() / 97.0;
    let i = rng.gen_range(10..87);
    let j = rng.gen_range(0..192);
    let source = (i as f64 * dr, j as f64 * 2.0 * PI / 192.0);
    let field = build_distance_field(nav, source, mesh)?;
    if !field.all_finite() {
        return Ok(Outcome::Holds(false, "unreachable nodes".into()));
    }
    if field.node(i, j) != 0.0 {
        return Ok(Outcome::Holds(
            false,
            format!("source distance {}", field.node(i, j)),
        ));
    }
    Ok(Outcome::Measured {
        worst: field.max_edge_violation(nav)?.max(0.0),
        limit: 1e-12,
    })
}
