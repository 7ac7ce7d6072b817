//! Profiles, wind bounds, curvature classes and the Randers norm.
//!
//! cargo run --release --example surface_inspection

use std::f64::consts::FRAC_PI_3;

use randers_cut::conjcut::classify_curvature;
use randers_cut::{NavigationData, ProfileSpec};

fn main() -> anyhow::Result<()> {
    let surfaces = [
        ProfileSpec::round(1.0)?,
        ProfileSpec::example1(1.0)?,
        ProfileSpec::example1(3.0)?,
        ProfileSpec::example2(0.5)?,
    ];
    println!(
        "{:<10} {:>6} {:>10} {:>10} {:>14}  class",
        "family", "a", "max m", "mu_max", "symmetry"
    );
    for spec in &surfaces {
        let class = classify_curvature(spec, 512)?;
        println!(
            "{:<10} {:>6.4} {:>10.6} {:>10.6} {:>14.3e}  {:?}",
            spec.family_name(),
            spec.a(),
            spec.max_m().1,
            spec.max_wind(),
            spec.symmetry_residual(1000),
            class.value
        );
    }

    let nav = NavigationData::new(ProfileSpec::example1(1.0)?, 0.3)?;
    let r = FRAC_PI_3;
    let c = nav.randers_coefficients(r)?;
    println!("\nexample1(1), mu = 0.3, r = pi/3");
    println!(
        "  a11 = {:.12}  a22 = {:.12}  b2 = {:.12}",
        c.a11, c.a22, c.b2
    );
    for y in [(1.0, 0.0), (0.0, 1.0), (0.0, -1.0), (0.6, -0.8)] {
        println!(
            "  F{:?} = {:.12} (alpha + beta), {:.12} (navigation)",
            y,
            nav.finsler_norm(r, y)?,
            nav.finsler_norm_navigation(r, y)?
        );
    }
    match NavigationData::new(ProfileSpec::round(1.0)?, 1.2) {
        Ok(_) => println!("unexpected: wind above the bound accepted"),
        Err(e) => println!("\nmu = 1.2 on the unit sphere: {e}"),
    }
    Ok(())
}
