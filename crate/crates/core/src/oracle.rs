//! Brute-force forward Finsler distance on an `(r, θ)` mesh, used to check the
//! constructed cut loci independently of any theorem.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::conjcut::CutLocusArc;
use crate::conjcut::CutLocusKind;
use crate::error::{Error, Result};
use crate::geodesics::{flow_deviate, shoot_h_geodesic, StepControl};
use crate::surfaces::{randers_norm, Direction, NavigationData, ProfileSpec};

const NO_PRED: u32 = u32::MAX;

/// Directed neighbour offsets `(di, dj)`, primitive and sorted by angle.
pub fn stencil(k: usize) -> Result<Vec<(i32, i32)>> {
    let reach = match k {
        8 => 1,
        16 => 2,
        32 => 3,
        _ => {
            return Err(Error::InvalidArgument(format!(
                "stencil size must be 8, 16 or 32, got {k}"
            )))
        }
    };
    let gcd = |mut a: i32, mut b: i32| {
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a.abs()
    };
    let mut out: Vec<(i32, i32)> = (-reach..=reach)
        .flat_map(|i| (-reach..=reach).map(move |j| (i, j)))
        .filter(|&(i, j)| (i, j) != (0, 0) && gcd(i, j) == 1)
        .collect();
    out.sort_by(|a, b| {
        f64::from(a.0)
            .atan2(f64::from(a.1))
            .total_cmp(&f64::from(b.0).atan2(f64::from(b.1)))
    });
    debug_assert_eq!(out.len(), k);
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeshSpec {
    pub n_r: usize,
    pub n_theta: usize,
    pub stencil_k: usize,
}

impl MeshSpec {
    pub fn new(n_r: usize, n_theta: usize, stencil_k: usize) -> Result<Self> {
        for (n, what) in [(n_r, "n_r"), (n_theta, "n_theta")] {
            if n < 64 {
                return Err(Error::GridTooSmall { got: n, need: 64 });
            }
            let _ = what;
        }
        stencil(stencil_k)?;
        Ok(Self {
            n_r,
            n_theta,
            stencil_k,
        })
    }

    pub fn doubled(&self) -> Result<Self> {
        Self::new(2 * self.n_r, 2 * self.n_theta, 2 * self.stencil_k)
    }
}

/// Forward distance from `source` to every mesh node.
///
/// Rows `r_i = i · 2a / (n_r + 1)`, `i = 1..=n_r`, columns `θ_j = 2π j / n_θ`;
/// the two poles are extra nodes joined to the first and last rows.
#[derive(Debug, Clone)]
pub struct DistanceField {
    source: (f64, f64),
    mesh: MeshSpec,
    two_a: f64,
    mu: f64,
    dist: Vec<f64>,
    pred: Vec<u32>,
}

#[derive(PartialEq)]
struct Key(f64, u32);
impl Eq for Key {}
impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0).then(self.1.cmp(&other.1))
    }
}

struct Graph {
    n_r: usize,
    n_theta: usize,
    dr: f64,
    dtheta: f64,
    offsets: Vec<(i32, i32)>,
    // weight[i * k + o] for the edge leaving row i with offset o
    weight: Vec<f64>,
    pole_weight: (f64, f64),
}

impl Graph {
    fn new(nav: &NavigationData, mesh: &MeshSpec) -> Result<Self> {
        let profile = nav.profile();
        let mu = nav.mu();
        let offsets = stencil(mesh.stencil_k)?;
        let dr = profile.two_a() / (mesh.n_r + 1) as f64;
        let dtheta = 2.0 * PI / mesh.n_theta as f64;
        let k = offsets.len();
        let mut weight = vec![f64::INFINITY; (mesh.n_r + 1) * k];
        for i in 1..=mesh.n_r {
            for (o, &(di, dj)) in offsets.iter().enumerate() {
                let i2 = i as i64 + i64::from(di);
                if i2 < 1 || i2 > mesh.n_r as i64 {
                    continue;
                }
                let r_mid = 0.5 * (i as f64 + i2 as f64) * dr;
                weight[i * k + o] = randers_norm(
                    profile.m(r_mid),
                    mu,
                    f64::from(di) * dr,
                    f64::from(dj) * dtheta,
                );
            }
        }
        let pole_weight = (
            randers_norm(profile.m(0.5 * dr), mu, dr, 0.0),
            randers_norm(profile.m(profile.two_a() - 0.5 * dr), mu, dr, 0.0),
        );
        Ok(Self {
            n_r: mesh.n_r,
            n_theta: mesh.n_theta,
            dr,
            dtheta,
            offsets,
            weight,
            pole_weight,
        })
    }

    fn nodes(&self) -> usize {
        self.n_r * self.n_theta + 2
    }

    fn pole_p(&self) -> usize {
        self.n_r * self.n_theta
    }

    fn pole_q(&self) -> usize {
        self.n_r * self.n_theta + 1
    }

    fn index(&self, i: usize, j: usize) -> usize {
        (i - 1) * self.n_theta + j
    }

    fn for_each_edge<E: FnMut(usize, f64)>(&self, v: usize, mut emit: E) {
        let k = self.offsets.len();
        if v == self.pole_p() {
            for j in 0..self.n_theta {
                emit(self.index(1, j), self.pole_weight.0);
            }
            return;
        }
        if v == self.pole_q() {
            for j in 0..self.n_theta {
                emit(self.index(self.n_r, j), self.pole_weight.1);
            }
            return;
        }
        let i = v / self.n_theta + 1;
        let j = v % self.n_theta;
        for (o, &(di, dj)) in self.offsets.iter().enumerate() {
            let w = self.weight[i * k + o];
            if !w.is_finite() {
                continue;
            }
            let i2 = (i as i64 + i64::from(di)) as usize;
            let j2 = (j as i64 + i64::from(dj)).rem_euclid(self.n_theta as i64) as usize;
            emit(self.index(i2, j2), w);
        }
        if i == 1 {
            emit(self.pole_p(), self.pole_weight.0);
        }
        if i == self.n_r {
            emit(self.pole_q(), self.pole_weight.1);
        }
    }
}

/// Runs Dijkstra from `source` over the directed mesh graph.
pub fn build_distance_field(
    nav: &NavigationData,
    source: (f64, f64),
    mesh: MeshSpec,
) -> Result<DistanceField> {
    // re-checks the wind bound
    let nav = nav.with_mu(nav.mu())?;
    let spec = nav.profile();
    spec.check_interior(source.0)?;
    let g = Graph::new(&nav, &mesh)?;
    let n = g.nodes();
    let mut dist = vec![f64::INFINITY; n];
    let mut pred = vec![NO_PRED; n];
    let mut heap = BinaryHeap::new();

    // seed every node within the stencil reach of the nearest node with the
    // direct segment length from the exact source position
    let theta_s = source.1.rem_euclid(2.0 * PI);
    let ci = ((source.0 / g.dr).round() as i64).clamp(1, mesh.n_r as i64);
    let cj = (theta_s / g.dtheta).round() as i64;
    let reach = 3i64;
    for di in -reach..=reach {
        let i = ci + di;
        if i < 1 || i > mesh.n_r as i64 {
            continue;
        }
        for dj in -reach..=reach {
            let j = (cj + dj).rem_euclid(mesh.n_theta as i64) as usize;
            let r = i as f64 * g.dr;
            let delta_r = r - source.0;
            let delta_t = (cj + dj) as f64 * g.dtheta - theta_s;
            let d = if delta_r == 0.0 && delta_t.abs() < 1e-15 {
                0.0
            } else {
                randers_norm(spec.m(0.5 * (r + source.0)), nav.mu(), delta_r, delta_t)
            };
            let v = g.index(i as usize, j);
            if d < dist[v] {
                dist[v] = d;
                heap.push(Reverse(Key(d, v as u32)));
            }
        }
    }

    while let Some(Reverse(Key(d, v))) = heap.pop() {
        let v = v as usize;
        if d > dist[v] {
            continue;
        }
        g.for_each_edge(v, |w, len| {
            let nd = d + len;
            if nd < dist[w] {
                dist[w] = nd;
                pred[w] = v as u32;
                heap.push(Reverse(Key(nd, w as u32)));
            }
        });
    }
    Ok(DistanceField {
        source,
        mesh,
        two_a: spec.two_a(),
        mu: nav.mu(),
        dist,
        pred,
    })
}

impl DistanceField {
    pub fn source(&self) -> (f64, f64) {
        self.source
    }

    pub fn mesh(&self) -> MeshSpec {
        self.mesh
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn dr(&self) -> f64 {
        self.two_a / (self.mesh.n_r + 1) as f64
    }

    pub fn dtheta(&self) -> f64 {
        2.0 * PI / self.mesh.n_theta as f64
    }

    pub fn node(&self, i: usize, j: usize) -> f64 {
        self.dist[(i - 1) * self.mesh.n_theta + j]
    }

    /// Distances to the poles at `r = 0` and `r = 2a`.
    pub fn poles(&self) -> (f64, f64) {
        let n = self.mesh.n_r * self.mesh.n_theta;
        (self.dist[n], self.dist[n + 1])
    }

    pub fn predecessor(&self, i: usize, j: usize) -> Option<usize> {
        let p = self.pred[(i - 1) * self.mesh.n_theta + j];
        (p != NO_PRED).then_some(p as usize)
    }

    pub fn all_finite(&self) -> bool {
        self.dist.iter().all(|d| d.is_finite())
    }

    /// Largest violation of `d(v) ≤ d(u) + w(u → v)` over all edges.
    pub fn max_edge_violation(&self, nav: &NavigationData) -> Result<f64> {
        let g = Graph::new(nav, &self.mesh)?;
        Ok((0..g.nodes())
            .into_par_iter()
            .map(|u| {
                let mut worst = f64::NEG_INFINITY;
                g.for_each_edge(u, |v, w| worst = worst.max(self.dist[v] - self.dist[u] - w));
                worst
            })
            .reduce(|| f64::NEG_INFINITY, f64::max))
    }

    /// Bilinear interpolation of the field at `(r, θ)`.
    pub fn interpolate(&self, r: f64, theta: f64) -> f64 {
        let n_r = self.mesh.n_r;
        let n_t = self.mesh.n_theta;
        let (pp, pq) = self.poles();
        let x = (r / self.dr()).clamp(0.0, (n_r + 1) as f64);
        let i = (x.floor() as usize).min(n_r);
        let fx = x - i as f64;
        let y = theta.rem_euclid(2.0 * PI) / self.dtheta();
        let j = (y.floor() as usize).min(n_t - 1);
        let fy = y - j as f64;
        let j2 = (j + 1) % n_t;
        let row = |i: usize, j: usize| {
            if i == 0 {
                pp
            } else if i == n_r + 1 {
                pq
            } else {
                self.node(i, j)
            }
        };
        let lo = row(i, j) * (1.0 - fy) + row(i, j2) * fy;
        let hi = row(i + 1, j) * (1.0 - fy) + row(i + 1, j2) * fy;
        lo * (1.0 - fx) + hi * fx
    }

    /// `(i_r, i_θ, r, θ, dist)` for every mesh node.
    pub fn rows(&self) -> impl Iterator<Item = (usize, usize, f64, f64, f64)> + '_ {
        (1..=self.mesh.n_r).flat_map(move |i| {
            (0..self.mesh.n_theta).map(move |j| {
                (
                    i,
                    j,
                    i as f64 * self.dr(),
                    j as f64 * self.dtheta(),
                    self.node(i, j),
                )
            })
        })
    }
}

/// Great-circle distance on the sphere of radius `radius`.
pub fn sphere_distance(radius: f64, p: (f64, f64), q: (f64, f64)) -> f64 {
    let (a, b) = (p.0 / radius, q.0 / radius);
    let c = a.cos() * b.cos() + a.sin() * b.sin() * (p.1 - q.1).cos();
    radius * c.clamp(-1.0, 1.0).acos()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeshCalibration {
    pub mesh: MeshSpec,
    /// Largest `|field − exact|` on the windless round sphere with the same `a`.
    pub max_error: f64,
    pub tol_mesh: f64,
}

/// Measures the field error on the round sphere of the same size and returns
/// `tol_mesh = 3 ×` that error.
pub fn calibrate_tol_mesh(two_a: f64, mesh: MeshSpec) -> Result<MeshCalibration> {
    let radius = two_a / PI;
    let nav = NavigationData::riemannian(ProfileSpec::round(radius)?);
    let source = (two_a / 3.0, 0.0);
    let field = build_distance_field(&nav, source, mesh)?;
    let max_error = field
        .rows()
        .map(|(_, _, r, t, d)| (d - sphere_distance(radius, source, (r, t))).abs())
        .fold(0.0, f64::max);
    Ok(MeshCalibration {
        mesh,
        max_error,
        tol_mesh: 3.0 * max_error,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalCut {
    pub r: f64,
    pub theta: f64,
    pub nu: f64,
    pub dr_sign: i8,
    /// F-arclength where the geodesic stops minimising, located as the kink
    /// of `s − dist(P(s))`.
    pub s_cut: f64,
    /// First `s` with `s − dist(P(s)) > tol_mesh`.
    pub s_threshold: f64,
}

/// Least-squares fit of a continuous two-piece linear model to the tail of
/// `(s, gap)`; returns the breakpoint.
pub fn hinge_kink(gap: &[(f64, f64)]) -> f64 {
    let n = gap.len();
    let start = n / 2;
    let w = &gap[start..];
    if w.len() < 4 {
        return gap[n - 1].0;
    }
    let mut best = (f64::INFINITY, w[w.len() - 1].0);
    for k in 1..w.len() - 1 {
        let sk = w[k].0;
        // columns 1, (s - sk), max(0, s - sk)
        let mut ata = [[0.0f64; 3]; 3];
        let mut atb = [0.0f64; 3];
        for &(s, g) in w {
            let row = [1.0, s - sk, (s - sk).max(0.0)];
            for i in 0..3 {
                atb[i] += row[i] * g;
                for j in 0..3 {
                    ata[i][j] += row[i] * row[j];
                }
            }
        }
        let Some(c) = solve3(ata, atb) else { continue };
        let rss: f64 = w
            .iter()
            .map(|&(s, g)| {
                let e = c[0] + c[1] * (s - sk) + c[2] * (s - sk).max(0.0) - g;
                e * e
            })
            .sum();
        if rss < best.0 {
            best = (rss, sk);
        }
    }
    best.1
}

#[allow(clippy::needless_range_loop)]
fn solve3(mut a: [[f64; 3]; 3], mut b: [f64; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let piv = (col..3).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..3 {
            let f = a[row][col] / a[col][col];
            for k in col..3 {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; 3];
    for i in (0..3).rev() {
        let sum: f64 = (i + 1..3).map(|k| a[i][k] * x[k]).sum();
        x[i] = (b[i] - sum) / a[i][i];
    }
    Some(x)
}

/// Shoots a pencil of forward F-geodesics from `x` and records where each
/// stops being minimising. The gap `s − dist(P(s))` is followed until it
/// exceeds `tol_mesh`; the cut is then placed at the kink of the gap, since the
/// threshold alone lags by `tol_mesh` over the rate at which the gap opens.
///
/// The pencil is uniform in the initial h-angle, so it contains both
/// meridians, both tangent directions and Clairaut constants of both signs.
pub fn empirical_cut_locus(
    nav: &NavigationData,
    x: (f64, f64),
    pencil_n: usize,
    field: &DistanceField,
    tol_mesh: f64,
) -> Result<Vec<EmpiricalCut>> {
    check_field(nav, x, field)?;
    if pencil_n < 8 {
        return Err(Error::GridTooSmall {
            got: pencil_n,
            need: 8,
        });
    }
    let spec = nav.profile();
    let m = spec.m(x.0);
    let s_max = 8.0 * spec.a();
    let ds = 0.5 * field.dr().min(field.dtheta() * spec.max_m().1);
    (0..pencil_n)
        .into_par_iter()
        .map(|k| {
            let phi = 2.0 * PI * k as f64 / pencil_n as f64;
            let (sin, cos) = phi.sin_cos();
            let nu = if cos.abs() < 1e-12 { 0.0 } else { m * cos };
            let dr_sign: i8 = if sin > 1e-12 {
                1
            } else if sin < -1e-12 {
                -1
            } else {
                0
            };
            let path = shoot_h_geodesic(spec, x, nu, dr_sign, s_max, &StepControl::default())?;
            let path = flow_deviate(&path, nav, Direction::Forward)?;
            let steps = (s_max / ds).ceil() as usize;
            let mut gap = Vec::with_capacity(steps);
            for n in 1..=steps {
                let s = n as f64 * ds;
                let st = path.state_at(s);
                let g = s - field.interpolate(st.r, st.theta);
                gap.push((s, g));
                if g > tol_mesh {
                    let s_cut = hinge_kink(&gap);
                    let at = path.state_at(s_cut);
                    return Ok(Some(EmpiricalCut {
                        r: at.r,
                        theta: at.theta,
                        nu,
                        dr_sign,
                        s_cut,
                        s_threshold: s,
                    }));
                }
            }
            Ok(None)
        })
        .collect::<Result<Vec<Option<EmpiricalCut>>>>()
        .map(|v| v.into_iter().flatten().collect())
}

fn check_field(nav: &NavigationData, x: (f64, f64), field: &DistanceField) -> Result<()> {
    let (fr, ft) = field.source();
    let same_source = (fr - x.0).abs() < 1e-12
        && ((ft - x.1).rem_euclid(2.0 * PI)).min((x.1 - ft).rem_euclid(2.0 * PI)) < 1e-12;
    if !same_source {
        return Err(Error::ResolutionMismatch(format!(
            "field built from ({fr}, {ft}), pencil starts at ({}, {})",
            x.0, x.1
        )));
    }
    if field.mu() != nav.mu() || (field.two_a - nav.profile().two_a()).abs() > 1e-12 {
        return Err(Error::ResolutionMismatch(
            "field was built for different navigation data".into(),
        ));
    }
    Ok(())
}

/// `sqrt(dr² + (m dθ)²)` with `dθ` reduced to `[−π, π]`; `m` at the mean radius.
pub fn chart_distance(spec: &ProfileSpec, p: (f64, f64), q: (f64, f64)) -> f64 {
    let dth = (p.1 - q.1 + PI).rem_euclid(2.0 * PI) - PI;
    let m = spec.m((0.5 * (p.0 + q.0)).clamp(0.0, spec.two_a()));
    ((p.0 - q.0).powi(2) + (m * dth).powi(2)).sqrt()
}

/// Symmetric Hausdorff distance between two point sets in the chart metric.
pub fn hausdorff(spec: &ProfileSpec, a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    if a.is_empty() || b.is_empty() {
        return f64::INFINITY;
    }
    let one_way = |x: &[(f64, f64)], y: &[(f64, f64)]| {
        x.par_iter()
            .map(|&p| {
                y.iter()
                    .map(|&q| chart_distance(spec, p, q))
                    .fold(f64::INFINITY, f64::min)
            })
            .reduce(|| 0.0, f64::max)
    };
    one_way(a, b).max(one_way(b, a))
}

/// Dense point sampling of a theorem cut locus for set comparisons.
pub fn arc_points(arc: &CutLocusArc, n: usize) -> Vec<(f64, f64)> {
    match arc.kind {
        CutLocusKind::SinglePoint { r, theta } => vec![(r, theta)],
        CutLocusKind::ParallelSubarc {
            r,
            theta_interval: (lo, hi),
        } => (0..=n)
            .map(|k| (r, lo + (hi - lo) * k as f64 / n as f64))
            .collect(),
        CutLocusKind::MeridianSubarc { .. } => {
            // the Finsler image bends, so densify between the samples
            let pts = arc.points();
            let mut out = Vec::with_capacity(pts.len() * 8);
            for w in pts.windows(2) {
                for k in 0..8 {
                    let t = k as f64 / 8.0;
                    out.push((
                        w[0].0 + (w[1].0 - w[0].0) * t,
                        w[0].1 + (w[1].1 - w[0].1) * t,
                    ));
                }
            }
            out.extend(pts.last().copied());
            out
        }
    }
}
