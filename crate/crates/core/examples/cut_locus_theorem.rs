//! Cut loci from the structure theorems: a point, a parallel arc, a
//! bending meridian arc, and the pole case.
//!
//! cargo run --release --example cut_locus_theorem

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_6, PI};

use randers_cut::conjcut::{cut_locus_equator_case, cut_locus_theorem, pole_cut, Pole};
use randers_cut::io::CutLocusDoc;
use randers_cut::{NavigationData, ProfileSpec};

/// The example-2 formula with negative lambda: curvature decreases towards
/// the equator, which no closed-form family covers.
fn oblate_table() -> randers_cut::Result<ProfileSpec> {
    let n = 257;
    let samples: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let r = PI * i as f64 / (n - 1) as f64;
            let m = if i == 0 || i == n - 1 {
                0.0
            } else {
                r.sin() / (1.0 + 0.5 * r.sin().powi(2)).sqrt()
            };
            (r, m)
        })
        .collect();
    ProfileSpec::custom(&samples)
}

fn show(label: &str, nav: &NavigationData, x: (f64, f64)) -> anyhow::Result<()> {
    let arc = cut_locus_theorem(nav, x)?;
    let doc = CutLocusDoc::from_arc(&arc);
    println!("{label}: {}", doc.kind);
    match (doc.r, doc.theta_interval, doc.r_interval) {
        (Some(r), Some(t), _) => println!("  r = {r:.10}, theta in [{:.10}, {:.10}]", t[0], t[1]),
        (Some(r), None, _) => println!(
            "  (r, theta) = ({r:.10}, {:.10})",
            doc.theta.unwrap_or_default()
        ),
        (None, _, Some(ri)) => println!(
            "  r in [{:.10}, {:.10}] on theta = {}",
            ri[0],
            ri[1],
            doc.base_theta.unwrap_or_default()
        ),
        _ => {}
    }
    Ok(())
}

fn main() -> anyhow::Result<()> {
    let round = NavigationData::new(ProfileSpec::round(1.0)?, 0.25)?;
    show(
        "round(1), mu = 0.25, x = (pi/3, 0)",
        &round,
        (FRAC_PI_3, 0.0),
    )?;

    let ex1 = ProfileSpec::example1(1.0)?;
    let nav1 = NavigationData::new(ex1.clone(), 0.5 * ex1.max_wind())?;
    show(
        "example1(1), mu = mu_max/2, x = (pi/3, 0)",
        &nav1,
        (FRAC_PI_3, 0.0),
    )?;
    show(
        "example1(1), mu = mu_max/2, x = (pi/2, 0)",
        &nav1,
        (FRAC_PI_2, 0.0),
    )?;

    let ex2 = NavigationData::new(ProfileSpec::example2(0.5)?, 0.2)?;
    show(
        "example2(0.5), mu = 0.2, x = (pi/3, 0)",
        &ex2,
        (FRAC_PI_3, 0.0),
    )?;
    match cut_locus_equator_case(&ex2, (FRAC_PI_3, 0.0)) {
        Ok(arc) => println!("  equator-case construction: {:?}", arc.kind),
        Err(e) => println!("  equator-case construction not applicable: {e}"),
    }

    let oblate = NavigationData::new(oblate_table()?, 0.2)?;
    for u in [FRAC_PI_6, FRAC_PI_3] {
        show(
            &format!("oblate table, mu = 0.2, x = ({u:.4}, 0)"),
            &oblate,
            (u, 0.0),
        )?;
    }

    for pole in [Pole::P, Pole::Q] {
        let c = pole_cut(&round, pole)?;
        println!(
            "cut locus of pole {pole:?}: r = {:.6} at distance {:.6}",
            c.r, c.distance
        );
    }
    Ok(())
}
