//! Dormand–Prince 5(4) integrator with continuous (dense) output.

use crate::error::{Error, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

#[derive(Debug, Clone, Copy)]
pub struct Options {
    pub rtol: f64,
    pub atol: f64,
    pub h_init: f64,
    pub h_max: f64,
    pub max_steps: usize,
}

impl Default for Options {
    fn default() -> Self {
        Self {
            rtol: 1e-11,
            atol: 1e-12,
            h_init: 1e-3,
            h_max: 0.05,
            max_steps: 200_000,
        }
    }
}

/// One accepted step with its quartic interpolant.
#[derive(Debug, Clone)]
pub struct Segment<const N: usize> {
    pub t0: f64,
    pub t1: f64,
    rcont: [[f64; N]; 5],
}

impl<const N: usize> Segment<N> {
    pub fn start(&self) -> [f64; N] {
        self.rcont[0]
    }

    pub fn end(&self) -> [f64; N] {
        self.eval(self.t1)
    }

    pub fn eval(&self, t: f64) -> [f64; N] {
        let h = self.t1 - self.t0;
        let th = if h == 0.0 { 0.0 } else { (t - self.t0) / h };
        let th1 = 1.0 - th;
        let r = &self.rcont;
        std::array::from_fn(|i| {
            r[0][i] + th * (r[1][i] + th1 * (r[2][i] + th * (r[3][i] + th1 * r[4][i])))
        })
    }
}

/// Piecewise dense output over `[t_start, t_end]`.
#[derive(Debug, Clone)]
pub struct DenseSolution<const N: usize> {
    segments: Vec<Segment<N>>,
    t_end: f64,
}

impl<const N: usize> DenseSolution<N> {
    pub fn t_start(&self) -> f64 {
        self.segments.first().map_or(self.t_end, |s| s.t0)
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn segments(&self) -> &[Segment<N>] {
        &self.segments
    }

    /// State at `t`, clamped to the integrated range.
    pub fn eval(&self, t: f64) -> [f64; N] {
        let t = t.clamp(self.t_start(), self.t_end);
        let i = self
            .segments
            .partition_point(|s| s.t1 < t)
            .min(self.segments.len() - 1);
        self.segments[i].eval(t)
    }

    pub fn final_state(&self) -> [f64; N] {
        self.eval(self.t_end)
    }
}

/// Outcome of the per-step callback.
pub enum Control {
    Continue,
    /// Stop the integration at the given time inside the last segment.
    StopAt(f64),
}

/// Integrates `y' = f(t, y)` from `t0` to `t_end` (`t_end > t0`).
///
/// `on_step` sees each accepted segment and may end the integration early;
/// the returned solution then covers `[t0, t_stop]`.
pub fn integrate<const N: usize, F, S>(
    f: F,
    t0: f64,
    y0: [f64; N],
    t_end: f64,
    opts: &Options,
    mut on_step: S,
) -> Result<DenseSolution<N>>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
    S: FnMut(&Segment<N>) -> Control,
{
    if !(t_end > t0) {
        return Err(Error::InvalidArgument(format!(
            "integration interval [{t0}, {t_end}] is empty"
        )));
    }
    let mut segments = Vec::new();
    let mut t = t0;
    let mut y = y0;
    let mut k1 = f(t, &y);
    let mut h = opts.h_init.min(opts.h_max).min(t_end - t0);
    let mut steps = 0;
    let mut rejected_last = false;

    let combine = |y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]| -> [f64; N] {
        std::array::from_fn(|i| y[i] + h * terms.iter().map(|(c, k)| c * k[i]).sum::<f64>())
    };

    while t < t_end {
        steps += 1;
        if steps > opts.max_steps {
            return Err(Error::StepUnderflow(t));
        }
        let last = t + h >= t_end;
        if last {
            h = t_end - t;
        }
        if h < 1e-14 * t.abs().max(1.0) {
            return Err(Error::StepUnderflow(t));
        }
        let k2 = f(t + C2 * h, &combine(&y, h, &[(A21, &k1)]));
        let k3 = f(t + C3 * h, &combine(&y, h, &[(A31, &k1), (A32, &k2)]));
        let k4 = f(
            t + C4 * h,
            &combine(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]),
        );
        let k5 = f(
            t + C5 * h,
            &combine(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
        );
        let k6 = f(
            t + h,
            &combine(
                &y,
                h,
                &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
            ),
        );
        let y1 = combine(
            &y,
            h,
            &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)],
        );
        let k7 = f(t + h, &y1);

        let mut err_sq = 0.0;
        for i in 0..N {
            let e =
                h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let sc = opts.atol + opts.rtol * y[i].abs().max(y1[i].abs());
            err_sq += (e / sc).powi(2);
        }
        let err = (err_sq / N as f64).sqrt();
        if !err.is_finite() {
            h *= 0.25;
            rejected_last = true;
            continue;
        }

        if err <= 1.0 {
            let mut rcont = [[0.0; N]; 5];
            for i in 0..N {
                let ydiff = y1[i] - y[i];
                let bspl = h * k1[i] - ydiff;
                rcont[0][i] = y[i];
                rcont[1][i] = ydiff;
                rcont[2][i] = bspl;
                rcont[3][i] = ydiff - h * k7[i] - bspl;
                rcont[4][i] = h
                    * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
            }
            let t1 = if last { t_end } else { t + h };
            let seg = Segment { t0: t, t1, rcont };
            let ctl = on_step(&seg);
            segments.push(seg);
            if let Control::StopAt(ts) = ctl {
                return Ok(DenseSolution {
                    segments,
                    t_end: ts.clamp(t, t1),
                });
            }
            t = t1;
            y = y1;
            k1 = k7;
            let mut fac = if err == 0.0 {
                10.0
            } else {
                0.9 * err.powf(-0.2)
            };
            fac = fac.clamp(0.2, 10.0);
            if rejected_last {
                fac = fac.min(1.0);
            }
            h = (h * fac).min(opts.h_max);
            rejected_last = false;
        } else {
            let fac = (0.9 * err.powf(-0.2)).max(0.2);
            h *= fac;
            rejected_last = true;
        }
    }
    Ok(DenseSolution { segments, t_end })
}

/// Root of `g` in `[a, b]` given a sign change, by Illinois-modified regula falsi.
pub fn bracket_root<G: Fn(f64) -> f64>(g: G, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let mut fa = g(a);
    let mut fb = g(b);
    if fa == 0.0 {
        return a;
    }
    if fb == 0.0 {
        return b;
    }
    let mut side = 0;
    for _ in 0..200 {
        let c = (a * fb - b * fa) / (fb - fa);
        let fc = g(c);
        if fc == 0.0 || (b - a).abs() < tol {
            return c;
        }
        if fc.signum() == fb.signum() {
            b = c;
            fb = fc;
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        } else {
            a = c;
            fa = fc;
            if side == 1 {
                fb *= 0.5;
            }
            side = 1;
        }
        if (b - a).abs() < tol {
            break;
        }
    }
    (a * fb - b * fa) / (fb - fa)
}
