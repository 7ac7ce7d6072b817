//! Command-line front end. The binary only forwards `argv` to [`run`].

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::conjcut::{classify_curvature, cut_locus_theorem, CutLocusArc};
use crate::error::Error;
use crate::geodesics::{flow_deviate, shoot_h_geodesic, GeodesicPath, StepControl};
use crate::halfperiod::{
    convexity_scan, half_period_curve, CurveSelect, ExampleFamily, SignClass, XiConvention,
};
use crate::io::{self, parse_angle, CsvTable, CutLocusDoc, SurfaceSpecFile};
use crate::oracle::{
    arc_points, build_distance_field, calibrate_tol_mesh, empirical_cut_locus, hausdorff, MeshSpec,
};
use crate::surfaces::{Direction, NavigationData};
use crate::verify::{default_targets, run_suite, Target};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_HYPOTHESIS: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "randers-cut",
    version,
    about = "Cut loci of Randers rotational metrics on spheres of revolution"
)]
pub struct Cli {
    /// Surface spec JSON.
    #[arg(long, global = true)]
    pub spec: Option<PathBuf>,
    /// Directory for CSV/JSON artifacts; nothing is written without it.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Wind strength, overriding the spec.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub mu: Option<f64>,
    /// Grid size; its meaning depends on the subcommand.
    #[arg(long, global = true)]
    pub resolution: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PathChoice {
    Riemannian,
    Forward,
    Backward,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConventionChoice {
    /// ξ = m⁻¹ on the rising branch.
    Inverse,
    /// ξ = ν², the published closed forms.
    Paper,
}

impl From<ConventionChoice> for XiConvention {
    fn from(c: ConventionChoice) -> Self {
        match c {
            ConventionChoice::Inverse => XiConvention::Inverse,
            ConventionChoice::Paper => XiConvention::PaperSquare,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyChoice {
    Example1,
    Example2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Theorem,
    Oracle,
    Both,
}

fn angle_arg(s: &str) -> Result<f64, String> {
    parse_angle(s).map_err(|e| e.to_string())
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// m extrema, wind bound, curvature class and symmetry residual.
    SurfaceInfo,
    /// Shoots one geodesic and writes `path.csv`.
    Geodesic {
        #[arg(long, value_parser = angle_arg, allow_hyphen_values = true)]
        r: f64,
        #[arg(long, value_parser = angle_arg, allow_hyphen_values = true, default_value = "0")]
        theta: f64,
        /// Clairaut constant.
        #[arg(long, allow_hyphen_values = true, conflicts_with = "angle")]
        nu: Option<f64>,
        /// h-angle between the initial velocity and the parallel.
        #[arg(long, value_parser = angle_arg, allow_hyphen_values = true)]
        angle: Option<f64>,
        /// Initial radial direction when `--nu` is given.
        #[arg(long, default_value_t = -1, allow_hyphen_values = true)]
        dr_sign: i8,
        /// Arclength; defaults to 8a.
        #[arg(long)]
        length: Option<f64>,
        #[arg(long, value_enum, default_value = "riemannian")]
        kind: PathChoice,
    },
    /// Tabulates H, H_F± and second derivatives on `--resolution` values of ν.
    HalfPeriod {
        #[arg(long, value_enum, default_value = "inverse")]
        convention: ConventionChoice,
    },
    /// Sign classification of (H_F⁺)″ over a λ range at μ = μ_max / 2.
    ScanConvexity {
        #[arg(long, value_enum)]
        family: FamilyChoice,
        #[arg(long)]
        lambda_min: f64,
        #[arg(long)]
        lambda_max: f64,
        #[arg(long)]
        lambda_step: f64,
        #[arg(long, value_enum, default_value = "paper")]
        convention: ConventionChoice,
    },
    /// Cut locus of a point from the structure theorems, the mesh oracle, or both.
    CutLocus {
        #[arg(long, value_parser = angle_arg, allow_hyphen_values = true)]
        r: f64,
        #[arg(long, value_parser = angle_arg, allow_hyphen_values = true, default_value = "0")]
        theta: f64,
        #[arg(long, value_enum, default_value = "theorem")]
        mode: Mode,
        #[arg(long, default_value_t = 16)]
        stencil: usize,
        #[arg(long, default_value_t = 256)]
        pencil: usize,
        /// Also write the full distance field.
        #[arg(long)]
        export_field: bool,
    },
    /// Runs the invariant suite and prints a pass/fail JSON report.
    Verify,
}

/// A failed run together with the exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::HypothesisNotSatisfied(_) | Error::UnsupportedProfile(_) => EXIT_HYPOTHESIS,
            Error::RadiusOutOfDomain { .. }
            | Error::AtPole(_)
            | Error::InvalidProfile(_)
            | Error::Asymmetric { .. }
            | Error::ConvexityViolation { .. }
            | Error::ZeroVector
            | Error::ClairautOutOfRange { .. }
            | Error::GridTooSmall { .. }
            | Error::InvalidArgument(_)
            | Error::ResolutionMismatch(_) => EXIT_INPUT,
            _ => EXIT_VERIFICATION,
        };
        let mut message = e.to_string();
        if code == EXIT_HYPOTHESIS {
            message.push_str("; the theorems do not cover this surface, try --mode oracle");
        }
        Self { code, message }
    }
}

type CmdResult = Result<i32, Failure>;

/// Parses `args` (including the program name), runs the command, writes the
/// report to `stdout` and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn std::io::Write, stderr: &mut dyn std::io::Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            if code == 0 {
                let _ = write!(stdout, "{}", e.render());
                return EXIT_OK;
            }
            let _ = write!(stderr, "{}", e.render());
            return EXIT_INPUT;
        }
    };
    match execute(&cli, stdout) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn emit(stdout: &mut dyn std::io::Write, value: &serde_json::Value) {
    let _ = writeln!(
        stdout,
        "{}",
        serde_json::to_string_pretty(value).expect("report serialises")
    );
}

/// Fully resolved inputs, checked against the subcommand before any work.
struct RunConfig {
    nav: Option<NavigationData>,
    out: Option<PathBuf>,
}

fn resolve(cli: &Cli) -> Result<RunConfig, Failure> {
    let wants_spec = !matches!(cli.command, Command::ScanConvexity { .. } | Command::Verify);
    if matches!(cli.command, Command::ScanConvexity { .. }) {
        if cli.spec.is_some() {
            return Err(Failure::input(
                "scan-convexity builds its own surfaces; drop --spec",
            ));
        }
        if cli.mu.is_some() {
            return Err(Failure::input(
                "scan-convexity fixes mu = mu_max / 2; drop --mu",
            ));
        }
    }
    let nav = match &cli.spec {
        None if wants_spec => return Err(Failure::input("this subcommand needs --spec")),
        None => {
            if cli.mu.is_some() {
                return Err(Failure::input("--mu needs --spec"));
            }
            None
        }
        Some(path) => {
            let mut file = SurfaceSpecFile::load(path)?;
            if let Some(mu) = cli.mu {
                file.mu = mu;
            }
            // verify reports asymmetry as a failed invariant instead of refusing the input
            let nav = if matches!(cli.command, Command::Verify) {
                file.navigation_unchecked_symmetry()?
            } else {
                file.navigation()?
            };
            Some(nav)
        }
    };
    let out = match &cli.out {
        None => None,
        Some(dir) => {
            std::fs::create_dir_all(dir)
                .map_err(|e| Failure::input(format!("--out {}: {e}", dir.display())))?;
            Some(
                dir.canonicalize()
                    .map_err(|e| Failure::input(format!("--out {}: {e}", dir.display())))?,
            )
        }
    };
    Ok(RunConfig { nav, out })
}

fn write_artifact(
    out: &Option<PathBuf>,
    name: &str,
    contents: &str,
) -> Result<Option<String>, Failure> {
    match out {
        None => Ok(None),
        Some(dir) => {
            let path = dir.join(name);
            io::write_atomic(&path, contents.as_bytes())?;
            Ok(Some(path.display().to_string()))
        }
    }
}

pub fn execute(cli: &Cli, stdout: &mut dyn std::io::Write) -> CmdResult {
    let cfg = resolve(cli)?;
    match &cli.command {
        Command::SurfaceInfo => surface_info(cli, &cfg, stdout),
        Command::Geodesic {
            r,
            theta,
            nu,
            angle,
            dr_sign,
            length,
            kind,
        } => geodesic(
            &cfg,
            (*r, *theta),
            *nu,
            *angle,
            *dr_sign,
            *length,
            *kind,
            stdout,
        ),
        Command::HalfPeriod { convention } => half_period(cli, &cfg, *convention, stdout),
        Command::ScanConvexity {
            family,
            lambda_min,
            lambda_max,
            lambda_step,
            convention,
        } => scan(
            cli,
            &cfg,
            *family,
            (*lambda_min, *lambda_max, *lambda_step),
            *convention,
            stdout,
        ),
        Command::CutLocus {
            r,
            theta,
            mode,
            stencil,
            pencil,
            export_field,
        } => cut_locus(
            cli,
            &cfg,
            (*r, *theta),
            *mode,
            *stencil,
            *pencil,
            *export_field,
            stdout,
        ),
        Command::Verify => verify(cli, &cfg, stdout),
    }
}

fn nav_of(cfg: &RunConfig) -> &NavigationData {
    cfg.nav.as_ref().expect("resolved before dispatch")
}

fn surface_info(cli: &Cli, cfg: &RunConfig, stdout: &mut dyn std::io::Write) -> CmdResult {
    let nav = nav_of(cfg);
    let spec = nav.profile();
    let grid = cli.resolution.unwrap_or(512);
    let class = classify_curvature(spec, grid)?;
    let (r_max, m_max) = spec.max_m();
    let report = json!({
        "family": spec.family_name(),
        "a": spec.a(),
        "mu": nav.mu(),
        "m_max": m_max,
        "r_at_m_max": r_max,
        "mu_max": spec.max_wind(),
        "equator_m": spec.equator_m(),
        "equator_curvature": spec.curvature_raw(spec.a()),
        "curvature_class": format!("{:?}", class.value),
        "symmetry_residual": spec.symmetry_residual(1000),
        "symmetry_tolerance": spec.symmetry_tolerance(),
    });
    write_artifact(
        &cfg.out,
        "surface_info.json",
        &serde_json::to_string_pretty(&report).expect("json"),
    )?;
    emit(stdout, &report);
    Ok(EXIT_OK)
}

#[allow(clippy::too_many_arguments)]
fn geodesic(
    cfg: &RunConfig,
    start: (f64, f64),
    nu: Option<f64>,
    angle: Option<f64>,
    dr_sign: i8,
    length: Option<f64>,
    kind: PathChoice,
    stdout: &mut dyn std::io::Write,
) -> CmdResult {
    let nav = nav_of(cfg);
    let spec = nav.profile();
    spec.check_radius(start.0)?;
    let m = spec.m(start.0);
    let (nu, sign) = match (nu, angle) {
        (Some(nu), None) => (
            nu,
            if (nu.abs() - m).abs() < 1e-12 {
                0
            } else {
                dr_sign
            },
        ),
        (None, Some(phi)) => {
            let (s, c) = phi.sin_cos();
            let sign = if s.abs() < 1e-12 {
                0
            } else if s > 0.0 {
                1
            } else {
                -1
            };
            (if c.abs() < 1e-12 { 0.0 } else { m * c }, sign)
        }
        _ => return Err(Failure::input("give exactly one of --nu and --angle")),
    };
    let len = length.unwrap_or(8.0 * spec.a());
    let h = shoot_h_geodesic(spec, start, nu, sign, len, &StepControl::default())?;
    let path: GeodesicPath = match kind {
        PathChoice::Riemannian => h,
        PathChoice::Forward => flow_deviate(&h, nav, Direction::Forward)?,
        PathChoice::Backward => flow_deviate(&h, nav, Direction::Backward)?,
    };
    let table = io::path_table(spec, &path);
    let worst = table
        .column("clairaut_residual")
        .expect("column exists")
        .iter()
        .fold(0.0f64, |a, b| a.max(b.abs()));
    let written = write_artifact(&cfg.out, "path.csv", &table.render(&[]))?;
    let end = path.end_state();
    emit(
        stdout,
        &json!({
            "kind": format!("{:?}", path.kind()),
            "nu": nu,
            "mu": path.mu(),
            "length": len,
            "samples": table.rows.len(),
            "end": {"r": end.r, "theta": end.theta, "theta_mod_2pi": end.theta.rem_euclid(std::f64::consts::TAU)},
            "turning_points": path.turning_points(),
            "max_clairaut_residual": worst,
            "path_csv": written,
        }),
    );
    Ok(EXIT_OK)
}

fn half_period(
    cli: &Cli,
    cfg: &RunConfig,
    convention: ConventionChoice,
    stdout: &mut dyn std::io::Write,
) -> CmdResult {
    let nav = nav_of(cfg);
    let n = cli.resolution.unwrap_or(200);
    let curve = half_period_curve(nav, n, convention.into(), CurveSelect::HfPlus)?;
    let values = io::half_period_table(&curve);
    let d2 = io::half_period_d2_table(&curve)?;
    let a = write_artifact(&cfg.out, "half_period.csv", &values.render(&[]))?;
    let b = write_artifact(&cfg.out, "half_period_d2.csv", &d2.render(&[]))?;
    let max_d2 = d2
        .column("d2HF_plus")
        .expect("column")
        .into_iter()
        .fold(f64::NEG_INFINITY, f64::max);
    emit(
        stdout,
        &json!({
            "points": n,
            "mu": nav.mu(),
            "nu_range": [curve.nu_grid[0], curve.nu_grid[n - 1]],
            "H_range": [curve.h.iter().copied().fold(f64::INFINITY, f64::min), curve.h.iter().copied().fold(f64::NEG_INFINITY, f64::max)],
            "max_d2HF_plus": max_d2,
            "half_period_csv": a,
            "half_period_d2_csv": b,
        }),
    );
    Ok(EXIT_OK)
}

fn scan(
    cli: &Cli,
    cfg: &RunConfig,
    family: FamilyChoice,
    (lo, hi, step): (f64, f64, f64),
    convention: ConventionChoice,
    stdout: &mut dyn std::io::Write,
) -> CmdResult {
    if !(step > 0.0) || !(hi >= lo) {
        return Err(Failure::input(
            "need lambda-min <= lambda-max and lambda-step > 0",
        ));
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    // rounded so that e.g. 1.4 + 3 * 0.05 is reported as 1.55
    let lambdas: Vec<f64> = (0..count)
        .map(|k| ((lo + step * k as f64) * 1e12).round() / 1e12)
        .collect();
    let fam = match family {
        FamilyChoice::Example1 => ExampleFamily::Example1,
        FamilyChoice::Example2 => ExampleFamily::Example2,
    };
    let scan = convexity_scan(
        fam,
        &lambdas,
        cli.resolution.unwrap_or(400),
        convention.into(),
    )?;
    let mut table = CsvTable::new(&["lambda", "min_d2HF_plus", "max_d2HF_plus", "mixed_sign"]);
    for row in &scan.rows {
        let mixed = if row.class == SignClass::MixedSign {
            1.0
        } else {
            0.0
        };
        table.push(vec![row.lambda, row.min_d2, row.max_d2, mixed]);
    }
    let written = write_artifact(&cfg.out, "convexity.csv", &table.render(&["mixed_sign"]))?;
    let bracket = scan.threshold_bracket();
    emit(
        stdout,
        &json!({
            "family": format!("{family:?}").to_lowercase(),
            "rows": scan.rows.iter().map(|r| json!({"lambda": r.lambda, "class": r.class, "max_d2": r.max_d2})).collect::<Vec<_>>(),
            "threshold_bracket": bracket.map(|(a, b)| [a, b]),
            "summary": match bracket {
                Some((a, b)) => format!("(H_F+)'' changes from nonpositive to mixed sign for lambda in ({a}, {b}]"),
                None => "no sign change in the scanned range".to_string(),
            },
            "convexity_csv": written,
        }),
    );
    Ok(EXIT_OK)
}

#[allow(clippy::too_many_arguments)]
fn cut_locus(
    cli: &Cli,
    cfg: &RunConfig,
    x: (f64, f64),
    mode: Mode,
    stencil: usize,
    pencil: usize,
    export_field: bool,
    stdout: &mut dyn std::io::Write,
) -> CmdResult {
    let nav = nav_of(cfg);
    let spec = nav.profile();
    spec.check_interior(x.0)?;
    let mut report = serde_json::Map::new();
    let mut code = EXIT_OK;

    let theorem: Option<CutLocusArc> = if mode == Mode::Oracle {
        None
    } else {
        match cut_locus_theorem(nav, x) {
            Ok(arc) => {
                let doc = CutLocusDoc::from_arc(&arc);
                let path = write_artifact(&cfg.out, "cut_locus.json", &doc.to_json())?;
                report.insert("theorem".into(), serde_json::to_value(&doc).expect("json"));
                report.insert("cut_locus_json".into(), json!(path));
                Some(arc)
            }
            Err(e @ (Error::HypothesisNotSatisfied(_) | Error::UnsupportedProfile(_))) => {
                if mode == Mode::Theorem {
                    return Err(e.into());
                }
                report.insert("theorem_unavailable".into(), json!(e.to_string()));
                code = EXIT_HYPOTHESIS;
                None
            }
            Err(e) => return Err(e.into()),
        }
    };

    if mode != Mode::Theorem {
        let n_r = cli.resolution.unwrap_or(512);
        let mesh = MeshSpec::new(n_r, 2 * n_r, stencil)?;
        let cal = calibrate_tol_mesh(spec.two_a(), mesh)?;
        let field = build_distance_field(nav, x, mesh)?;
        let cuts = empirical_cut_locus(nav, x, pencil, &field, cal.tol_mesh)?;
        let path = write_artifact(
            &cfg.out,
            "cut_set.csv",
            &io::cut_set_table(&cuts).render(&[]),
        )?;
        if export_field {
            write_artifact(
                &cfg.out,
                "field.csv",
                &io::field_table(&field).render(&io::FIELD_INTEGER_COLUMNS),
            )?;
        }
        report.insert(
            "oracle".into(),
            json!({
                "n_r": mesh.n_r,
                "n_theta": mesh.n_theta,
                "stencil": mesh.stencil_k,
                "pencil": pencil,
                "tol_mesh": cal.tol_mesh,
                "round_sphere_error": cal.max_error,
                "cut_points": cuts.len(),
                "cut_set_csv": path,
            }),
        );
        if let Some(arc) = &theorem {
            let empirical: Vec<(f64, f64)> = cuts.iter().map(|c| (c.r, c.theta)).collect();
            let d = hausdorff(spec, &empirical, &arc_points(arc, 512));
            let pass = d < cal.tol_mesh;
            report.insert("hausdorff".into(), json!(d));
            report.insert("pass".into(), json!(pass));
            if !pass {
                code = EXIT_VERIFICATION;
            }
        }
    }
    emit(stdout, &serde_json::Value::Object(report));
    Ok(code)
}

fn verify(cli: &Cli, cfg: &RunConfig, stdout: &mut dyn std::io::Write) -> CmdResult {
    let targets = match &cfg.nav {
        Some(nav) => vec![Target::new(
            cli.spec
                .as_deref()
                .map(Path::display)
                .map(|d| d.to_string())
                .unwrap_or_default(),
            nav.clone(),
        )],
        None => default_targets()?,
    };
    let report = run_suite(&targets, cli.seed);
    let text = serde_json::to_string_pretty(&report).expect("json");
    write_artifact(&cfg.out, "verify.json", &text)?;
    let _ = writeln!(stdout, "{text}");
    Ok(if report.passed {
        EXIT_OK
    } else {
        EXIT_VERIFICATION
    })
}
