//! File formats: surface-spec JSON, CSV tables, cut-locus JSON.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::conjcut::{CutLocusArc, CutLocusKind, CutMetric};
use crate::error::{Error, Result};
use crate::geodesics::{clairaut_constant, GeodesicPath};
use crate::halfperiod::{numerical_derivatives, HalfPeriodCurve};
use crate::oracle::{DistanceField, EmpiricalCut};
use crate::surfaces::{NavigationData, ProfileFamily, ProfileSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyName {
    Round,
    Example1,
    Example2,
    Custom,
}

/// On-disk surface description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceSpecFile {
    pub family: FamilyName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    /// Half the pole-to-pole distance. Fixed by the family except for tables.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(default)]
    pub mu: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<[f64; 2]>>,
}

impl SurfaceSpecFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidProfile(format!("surface spec: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn profile(&self) -> Result<ProfileSpec> {
        self.build(true)
    }

    /// Like [`Self::profile`] but accepts tables that fail the symmetry check,
    /// so the asymmetry can be reported by the invariant suite.
    pub fn profile_unchecked_symmetry(&self) -> Result<ProfileSpec> {
        self.build(false)
    }

    fn build(&self, check_symmetry: bool) -> Result<ProfileSpec> {
        let need = |v: Option<f64>, what: &str| {
            v.ok_or_else(|| {
                Error::InvalidProfile(format!("family {:?} needs \"{what}\"", self.family))
            })
        };
        let spec = match self.family {
            FamilyName::Round => ProfileSpec::round(self.radius.unwrap_or(1.0))?,
            FamilyName::Example1 => ProfileSpec::example1(need(self.lambda, "lambda")?)?,
            FamilyName::Example2 => ProfileSpec::example2(need(self.lambda, "lambda")?)?,
            FamilyName::Custom => {
                let table = self
                    .table
                    .as_ref()
                    .ok_or_else(|| Error::InvalidProfile("family custom needs \"table\"".into()))?;
                let samples: Vec<(f64, f64)> = table.iter().map(|p| (p[0], p[1])).collect();
                if check_symmetry {
                    ProfileSpec::custom(&samples)?
                } else {
                    ProfileSpec::custom_unchecked_symmetry(&samples)?
                }
            }
        };
        if let Some(a) = self.a {
            if (a - spec.a()).abs() > 1e-9 {
                return Err(Error::InvalidProfile(format!(
                    "a = {a} disagrees with the profile, which has a = {}",
                    spec.a()
                )));
            }
        }
        Ok(spec)
    }

    pub fn navigation(&self) -> Result<NavigationData> {
        NavigationData::new(self.profile()?, self.mu)
    }

    pub fn navigation_unchecked_symmetry(&self) -> Result<NavigationData> {
        NavigationData::new(self.profile_unchecked_symmetry()?, self.mu)
    }

    pub fn from_navigation(nav: &NavigationData) -> Self {
        let spec = nav.profile();
        let mut out = Self {
            family: FamilyName::Round,
            lambda: None,
            radius: None,
            a: Some(spec.a()),
            mu: nav.mu(),
            table: None,
        };
        match spec.family() {
            ProfileFamily::Round { radius } => out.radius = Some(*radius),
            ProfileFamily::Example1 { lambda } => {
                out.family = FamilyName::Example1;
                out.lambda = Some(*lambda);
            }
            ProfileFamily::Example2 { lambda } => {
                out.family = FamilyName::Example2;
                out.lambda = Some(*lambda);
            }
            ProfileFamily::CustomTable(t) => {
                out.family = FamilyName::Custom;
                out.table = Some(t.samples().into_iter().map(|(r, m)| [r, m]).collect());
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serialises")
    }
}

/// C-style `%.12e`.
pub fn fmt_sci(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    let s = format!("{x:.12e}");
    let (mant, exp) = s.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mant}e{sign}{:02}", exp.abs())
}

/// A header plus rows of floats.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl CsvTable {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }

    /// Integer-valued columns are written without exponent.
    pub fn render(&self, integer_columns: &[&str]) -> String {
        let ints: Vec<bool> = self
            .header
            .iter()
            .map(|h| integer_columns.contains(&h.as_str()))
            .collect();
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            for (k, v) in row.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                if ints[k] {
                    let _ = write!(out, "{}", *v as i64);
                } else {
                    out.push_str(&fmt_sci(*v));
                }
            }
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header: Vec<String> = lines
            .next()
            .ok_or_else(|| Error::InvalidArgument("empty CSV".into()))?
            .split(',')
            .map(|s| s.trim().to_string())
            .collect();
        let mut rows = Vec::new();
        for (n, line) in lines.enumerate() {
            let row: Vec<f64> = line
                .split(',')
                .map(|f| f.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::InvalidArgument(format!("CSV row {}: {e}", n + 1)))?;
            if row.len() != header.len() {
                return Err(Error::InvalidArgument(format!(
                    "CSV row {} has {} fields, header has {}",
                    n + 1,
                    row.len(),
                    header.len()
                )));
            }
            rows.push(row);
        }
        Ok(Self { header, rows })
    }
}

/// Writes through a temporary file in the same directory, then renames.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    let io = |e: std::io::Error| Error::InvalidArgument(format!("writing {}: {e}", path.display()));
    std::fs::create_dir_all(dir).map_err(io)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

pub const PATH_COLUMNS: [&str; 6] = ["s", "r", "theta", "dr_ds", "dtheta_ds", "clairaut_residual"];

/// One row per integrator knot. The residual is taken on the underlying
/// h-geodesic, since the wind adds `μ` to `dθ/ds`.
pub fn path_table(spec: &ProfileSpec, path: &GeodesicPath) -> CsvTable {
    let mut t = CsvTable::new(&PATH_COLUMNS);
    for s in path.knots() {
        let p = path.state_at(s);
        let h = path.h_state_at(s);
        let residual = if path.is_meridian() {
            0.0
        } else {
            clairaut_constant(spec, &h) - path.nu()
        };
        t.push(vec![p.s, p.r, p.theta, p.dr, p.dtheta, residual]);
    }
    t
}

pub fn half_period_table(curve: &HalfPeriodCurve) -> CsvTable {
    let mut t = CsvTable::new(&["nu", "H", "HF_plus", "HF_minus"]);
    for k in 0..curve.nu_grid.len() {
        t.push(vec![
            curve.nu_grid[k],
            curve.h[k],
            curve.hf_plus[k],
            curve.hf_minus[k],
        ]);
    }
    t
}

pub fn half_period_d2_table(curve: &HalfPeriodCurve) -> Result<CsvTable> {
    let step = curve.nu_grid[1] - curve.nu_grid[0];
    let d2h = numerical_derivatives(&curve.h, step, 2)?;
    let d2f = numerical_derivatives(&curve.hf_plus, step, 2)?;
    let mut t = CsvTable::new(&["nu", "d2H", "d2HF_plus"]);
    for k in 0..curve.nu_grid.len() {
        t.push(vec![curve.nu_grid[k], d2h[k], d2f[k]]);
    }
    Ok(t)
}

pub fn field_table(field: &DistanceField) -> CsvTable {
    let mut t = CsvTable::new(&["i_r", "i_theta", "r", "theta", "dist"]);
    for (i, j, r, th, d) in field.rows() {
        t.push(vec![i as f64, j as f64, r, th, d]);
    }
    t
}

pub const FIELD_INTEGER_COLUMNS: [&str; 2] = ["i_r", "i_theta"];

pub fn cut_set_table(cuts: &[EmpiricalCut]) -> CsvTable {
    let mut t = CsvTable::new(&["r", "theta", "nu", "s_cut"]);
    for c in cuts {
        t.push(vec![c.r, c.theta, c.nu, c.s_cut]);
    }
    t
}

fn wrap(theta: f64) -> f64 {
    theta.rem_euclid(2.0 * PI)
}

/// Cut-locus JSON document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CutLocusDoc {
    pub kind: String,
    /// `"h"` or `"F"`.
    pub metric: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta_mod_2pi: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta_interval: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta_interval_mod_2pi: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_theta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_interval: Option<[f64; 2]>,
    pub samples: Vec<[f64; 2]>,
    pub samples_mod_2pi: Vec<[f64; 2]>,
    pub sample_nu: Vec<f64>,
    pub sample_s: Vec<f64>,
}

impl CutLocusDoc {
    pub fn from_arc(arc: &CutLocusArc) -> Self {
        let mut doc = Self {
            kind: String::new(),
            metric: match arc.metric {
                CutMetric::H => "h",
                CutMetric::FForward => "F",
            }
            .into(),
            r: None,
            theta: None,
            theta_mod_2pi: None,
            theta_interval: None,
            theta_interval_mod_2pi: None,
            base_theta: None,
            r_interval: None,
            samples: arc.samples.iter().map(|p| [p.r, p.theta]).collect(),
            samples_mod_2pi: arc.samples.iter().map(|p| [p.r, wrap(p.theta)]).collect(),
            sample_nu: arc.samples.iter().map(|p| p.nu).collect(),
            sample_s: arc.samples.iter().map(|p| p.s).collect(),
        };
        match arc.kind {
            CutLocusKind::SinglePoint { r, theta } => {
                doc.kind = "single_point".into();
                doc.r = Some(r);
                doc.theta = Some(theta);
                doc.theta_mod_2pi = Some(wrap(theta));
            }
            CutLocusKind::ParallelSubarc {
                r,
                theta_interval: (lo, hi),
            } => {
                doc.kind = "parallel_subarc".into();
                doc.r = Some(r);
                doc.theta_interval = Some([lo, hi]);
                doc.theta_interval_mod_2pi = Some([wrap(lo), wrap(hi)]);
            }
            CutLocusKind::MeridianSubarc {
                base_theta,
                r_interval: (lo, hi),
            } => {
                doc.kind = "meridian_subarc".into();
                doc.base_theta = Some(base_theta);
                doc.r_interval = Some([lo, hi]);
            }
        }
        doc
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serialises")
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| Error::InvalidArgument(format!("cut locus JSON: {e}")))
    }
}

/// Parses a radian value, accepting `pi` fractions such as `pi/3`, `2pi/3`,
/// `-3*pi/4` or `0.5pi`.
pub fn parse_angle(text: &str) -> Result<f64> {
    let bad = || Error::InvalidArgument(format!("cannot parse angle {text:?}"));
    let t: String = text
        .chars()
        .filter(|c| !c.is_whitespace())
        .collect::<String>()
        .to_lowercase();
    let t = t.replace('π', "pi");
    if let Ok(v) = t.parse::<f64>() {
        return if v.is_finite() { Ok(v) } else { Err(bad()) };
    }
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.to_string(), d.parse::<f64>().map_err(|_| bad())?),
        None => (t.clone(), 1.0),
    };
    if den == 0.0 {
        return Err(bad());
    }
    let coeff = num.strip_suffix("pi").ok_or_else(bad)?;
    let coeff = coeff.strip_suffix('*').unwrap_or(coeff);
    let c = match coeff {
        "" | "+" => 1.0,
        "-" => -1.0,
        c => c.parse::<f64>().map_err(|_| bad())?,
    };
    Ok(c * PI / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn c_style_exponent() {
        assert_eq!(fmt_sci(1.0), "1.000000000000e+00");
        assert_eq!(fmt_sci(-0.00123), "-1.230000000000e-03");
        assert_eq!(fmt_sci(6.02e123), "6.020000000000e+123");
    }

    #[test]
    fn angles() {
        let close = |s: &str, v: f64| assert!((parse_angle(s).unwrap() - v).abs() < 1e-15, "{s}");
        close("pi/3", PI / 3.0);
        close("2pi/3", 2.0 * PI / 3.0);
        close("-3*pi/4", -0.75 * PI);
        close("pi", PI);
        close("0.25", 0.25);
        close("0.5pi", FRAC_PI_2);
        assert!(parse_angle("pie").is_err());
        assert!(parse_angle("pi/0").is_err());
    }

    #[test]
    fn spec_round_trip() {
        let text = r#"{"family": "example1", "lambda": 1.0, "a": 1.5707963267948966, "mu": 0.2}"#;
        let f = SurfaceSpecFile::parse(text).unwrap();
        let nav = f.navigation().unwrap();
        assert_eq!(SurfaceSpecFile::from_navigation(&nav), f);
        let again = SurfaceSpecFile::parse(&f.to_json()).unwrap();
        assert_eq!(again, f);
    }

    #[test]
    fn spec_rejects_bad_input() {
        assert!(SurfaceSpecFile::parse(r#"{"family": "torus"}"#).is_err());
        let f = SurfaceSpecFile::parse(r#"{"family": "round", "radius": 1.0, "mu": 1.5}"#).unwrap();
        assert!(matches!(
            f.navigation(),
            Err(Error::ConvexityViolation { .. })
        ));
        let f = SurfaceSpecFile::parse(r#"{"family": "example2"}"#).unwrap();
        assert!(f.profile().is_err());
        let f = SurfaceSpecFile::parse(r#"{"family": "round", "a": 2.0}"#).unwrap();
        assert!(f.profile().is_err());
    }

    #[test]
    fn csv_round_trip() {
        let mut t = CsvTable::new(&["i_r", "x"]);
        t.push(vec![3.0, 0.1]);
        t.push(vec![4.0, -2.5e-7]);
        let text = t.render(&["i_r"]);
        assert!(text.starts_with("i_r,x\n3,1.000000000000e-01\n"));
        assert_eq!(CsvTable::parse(&text).unwrap(), t);
    }

    #[test]
    fn atomic_write() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("sub").join("a.txt");
        write_atomic(&p, b"one").unwrap();
        write_atomic(&p, b"two").unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "two");
    }
}
