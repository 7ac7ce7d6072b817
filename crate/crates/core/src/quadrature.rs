//! Adaptive Gauss–Kronrod quadrature, plus a wrapper for integrands with
//! inverse-square-root endpoint singularities (the Clairaut kernels).

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_467_276_120,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Weights of the embedded 10-point Gauss rule, at XGK[1], XGK[3], ..., XGK[9].
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Fixed 10-point Gauss–Legendre rule on `[a, b]`.
pub fn gauss10<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let sum: f64 = (0..5)
        .map(|k| {
            let x = h * XGK[2 * k + 1];
            WG[k] * (f(c - x) + f(c + x))
        })
        .sum();
    h * sum
}

#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_intervals: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            abs: 1e-13,
            rel: 1e-12,
            max_intervals: 4000,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
}

fn gk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[10];
    let mut gauss = 0.0;
    let mut abs_sum = kronrod.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        kronrod += WGK[j] * (f1 + f2);
        abs_sum += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kronrod;
    let mut asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let result = kronrod * half;
    let res_abs = abs_sum * half.abs();
    let res_asc = asc * half.abs();
    let mut err = ((kronrod - gauss) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    (result, err)
}

struct Piece {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Globally adaptive Gauss–Kronrod (21-point) integration of `f` over `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: Tolerance) -> Result<Integral> {
    if a == b {
        return Ok(Integral {
            value: 0.0,
            error: 0.0,
            intervals: 0,
        });
    }
    let (v, e) = gk21(&f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Piece {
        a,
        b,
        value: v,
        error: e,
    });
    let mut total = v;
    let mut total_err = e;
    loop {
        let target = tol.abs.max(tol.rel * total.abs());
        if total_err <= target {
            break;
        }
        if heap.len() >= tol.max_intervals {
            return Err(Error::QuadratureFailed(total_err));
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a.min(worst.b) || mid >= worst.a.max(worst.b) {
            // interval collapsed to machine resolution
            heap.push(worst);
            break;
        }
        let (v1, e1) = gk21(&f, worst.a, mid);
        let (v2, e2) = gk21(&f, mid, worst.b);
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.error;
        heap.push(Piece {
            a: worst.a,
            b: mid,
            value: v1,
            error: e1,
        });
        heap.push(Piece {
            a: mid,
            b: worst.b,
            value: v2,
            error: e2,
        });
    }
    // resum to shed accumulated update rounding
    let value: f64 = heap.iter().map(|p| p.value).sum();
    let error: f64 = heap.iter().map(|p| p.error).sum();
    if !value.is_finite() {
        return Err(Error::QuadratureFailed(error));
    }
    Ok(Integral {
        value,
        error,
        intervals: heap.len(),
    })
}

/// Integrates `f` over `[lo, hi]` when `f` may blow up like `(t - lo)^(-1/2)`
/// and/or `(hi - t)^(-1/2)` at the endpoints.
///
/// The interval is split at its midpoint and each half is mapped with
/// `t = end + (mid - end) u^2`, which turns the endpoint behaviour into a
/// smooth integrand in `u`. `f` receives `(end, t - end)`; the offset is exact
/// even where `end + offset` rounds back to `end`. Orientation is respected:
/// `lo > hi` flips the sign.
pub fn integrate_sqrt_endpoints<F: Fn(f64, f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    tol: Tolerance,
) -> Result<Integral> {
    if lo == hi {
        return Ok(Integral {
            value: 0.0,
            error: 0.0,
            intervals: 0,
        });
    }
    let (a, b, sign) = if lo < hi {
        (lo, hi, 1.0)
    } else {
        (hi, lo, -1.0)
    };
    let mid = 0.5 * (a + b);
    let half = mid - a;
    let split = Tolerance {
        abs: 0.5 * tol.abs,
        ..tol
    };
    let left = integrate(|u| f(a, half * u * u) * 2.0 * half * u, 0.0, 1.0, split)?;
    let right = integrate(|u| f(b, -half * u * u) * 2.0 * half * u, 0.0, 1.0, split)?;
    Ok(Integral {
        value: sign * (left.value + right.value),
        error: left.error + right.error,
        intervals: left.intervals + right.intervals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_is_exact() {
        let r = integrate(|x| 3.0 * x * x, 0.0, 2.0, Tolerance::default()).unwrap();
        assert!((r.value - 8.0).abs() < 1e-14);
    }

    #[test]
    fn oscillatory_integrand() {
        let r = integrate(|x| (20.0 * x).sin(), 0.0, PI, Tolerance::default()).unwrap();
        let exact = (1.0 - (20.0 * PI).cos()) / 20.0;
        assert!((r.value - exact).abs() < 1e-12);
    }

    #[test]
    fn inverse_sqrt_at_both_ends() {
        // int_0^1 dt / sqrt(t (1 - t)) = pi
        let r = integrate_sqrt_endpoints(
            |e, d| {
                let t = e + d;
                1.0 / (t * (1.0 - t)).sqrt()
            },
            0.0,
            1.0,
            Tolerance::default(),
        )
        .unwrap();
        assert!((r.value - PI).abs() < 1e-12, "{}", r.value);
    }

    #[test]
    fn gauss10_is_exact_to_degree_19() {
        let v = gauss10(|x| x.powi(19) + x.powi(18), -1.0, 2.0);
        let exact = (2f64.powi(20) - 1.0) / 20.0 + (2f64.powi(19) + 1.0) / 19.0;
        assert!((v - exact).abs() < 1e-9 * exact);
    }

    #[test]
    fn reversed_limits_flip_sign() {
        let f = |e: f64, d: f64| 1.0 / (e + d).sqrt();
        let fwd = integrate_sqrt_endpoints(f, 0.0, 4.0, Tolerance::default()).unwrap();
        let back = integrate_sqrt_endpoints(f, 4.0, 0.0, Tolerance::default()).unwrap();
        assert!((fwd.value - 4.0).abs() < 1e-12);
        assert_eq!(fwd.value, -back.value);
    }
}
