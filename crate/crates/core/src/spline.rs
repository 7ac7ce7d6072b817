//! Clamped C² cubic spline, used to turn a sampled profile into something
//! with continuous first and second derivatives.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct CubicSpline {
    x: Vec<f64>,
    y: Vec<f64>,
    // second derivative at each knot
    m2: Vec<f64>,
}

impl CubicSpline {
    /// Builds the spline through `(x[i], y[i])` with prescribed end slopes.
    pub fn clamped(x: Vec<f64>, y: Vec<f64>, slope_start: f64, slope_end: f64) -> Result<Self> {
        let n = x.len();
        if n != y.len() {
            return Err(Error::InvalidProfile(format!(
                "{} abscissae but {} ordinates",
                n,
                y.len()
            )));
        }
        if n < 4 {
            return Err(Error::GridTooSmall { got: n, need: 4 });
        }
        if x.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidProfile(
                "table abscissae must be strictly increasing".into(),
            ));
        }
        if x.iter().chain(y.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidProfile(
                "table contains non-finite values".into(),
            ));
        }

        let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
        let slope: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / h[i]).collect();

        // tridiagonal system (sub, diag, sup) * m2 = rhs
        let mut sub = vec![0.0; n];
        let mut diag = vec![0.0; n];
        let mut sup = vec![0.0; n];
        let mut rhs = vec![0.0; n];
        diag[0] = 2.0 * h[0];
        sup[0] = h[0];
        rhs[0] = 6.0 * (slope[0] - slope_start);
        for i in 1..n - 1 {
            sub[i] = h[i - 1];
            diag[i] = 2.0 * (h[i - 1] + h[i]);
            sup[i] = h[i];
            rhs[i] = 6.0 * (slope[i] - slope[i - 1]);
        }
        sub[n - 1] = h[n - 2];
        diag[n - 1] = 2.0 * h[n - 2];
        rhs[n - 1] = 6.0 * (slope_end - slope[n - 2]);

        // Thomas algorithm
        for i in 1..n {
            let w = sub[i] / diag[i - 1];
            diag[i] -= w * sup[i - 1];
            rhs[i] -= w * rhs[i - 1];
        }
        let mut m2 = vec![0.0; n];
        m2[n - 1] = rhs[n - 1] / diag[n - 1];
        for i in (0..n - 1).rev() {
            m2[i] = (rhs[i] - sup[i] * m2[i + 1]) / diag[i];
        }
        Ok(Self { x, y, m2 })
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.x[0], self.x[self.x.len() - 1])
    }

    pub fn knots(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.x.iter().copied().zip(self.y.iter().copied())
    }

    /// Knot abscissae strictly inside `(lo, hi)`.
    pub fn breaks_within(&self, lo: f64, hi: f64) -> &[f64] {
        let start = self.x.partition_point(|&v| v <= lo);
        let end = self.x.partition_point(|&v| v < hi).max(start);
        &self.x[start..end]
    }

    fn segment(&self, t: f64) -> usize {
        match self.x.binary_search_by(|v| v.total_cmp(&t)) {
            Ok(i) => i.min(self.x.len() - 2),
            Err(0) => 0,
            Err(i) => (i - 1).min(self.x.len() - 2),
        }
    }

    /// Value, first and second derivative at `t`.
    pub fn eval(&self, t: f64) -> (f64, f64, f64) {
        let i = self.segment(t);
        let h = self.x[i + 1] - self.x[i];
        let a = (self.x[i + 1] - t) / h;
        let b = (t - self.x[i]) / h;
        let (m0, m1) = (self.m2[i], self.m2[i + 1]);
        let (y0, y1) = (self.y[i], self.y[i + 1]);
        let v = a * y0 + b * y1 + ((a * a * a - a) * m0 + (b * b * b - b) * m1) * h * h / 6.0;
        let d =
            (y1 - y0) / h - (3.0 * a * a - 1.0) / 6.0 * h * m0 + (3.0 * b * b - 1.0) / 6.0 * h * m1;
        let dd = a * m0 + b * m1;
        (v, d, dd)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_cubic_exactly() {
        let f = |x: f64| x * x * x - 2.0 * x + 1.0;
        let df = |x: f64| 3.0 * x * x - 2.0;
        let xs: Vec<f64> = (0..=10).map(|i| i as f64 * 0.3).collect();
        let ys: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
        let s = CubicSpline::clamped(xs, ys, df(0.0), df(3.0)).unwrap();
        for k in 0..=30 {
            let t = k as f64 * 0.1;
            let (v, d, dd) = s.eval(t);
            assert!((v - f(t)).abs() < 1e-12);
            assert!((d - df(t)).abs() < 1e-11);
            assert!((dd - 6.0 * t).abs() < 1e-10);
        }
    }

    #[test]
    fn sine_converges() {
        let n = 400;
        let xs: Vec<f64> = (0..=n)
            .map(|i| i as f64 * std::f64::consts::PI / n as f64)
            .collect();
        let ys: Vec<f64> = xs.iter().map(|x| x.sin()).collect();
        let s = CubicSpline::clamped(xs, ys, 1.0, -1.0).unwrap();
        let (v, d, dd) = s.eval(1.0);
        assert!((v - 1f64.sin()).abs() < 1e-10);
        assert!((d - 1f64.cos()).abs() < 1e-7);
        assert!((dd + 1f64.sin()).abs() < 1e-4);
    }

    #[test]
    fn rejects_unsorted() {
        assert!(CubicSpline::clamped(vec![0.0, 2.0, 1.0, 3.0], vec![0.0; 4], 0.0, 0.0).is_err());
    }
}
