//! Shooting h-geodesics, deviating them by the wind and checking the
//! conserved quantities. Pass a directory to also write `path.csv`.
//!
//! cargo run --release --example geodesic_shooting -- out/

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

use randers_cut::geodesics::{
    finsler_clairaut_cos, flow_deviate, measured_cos_psi, shoot_h_geodesic, unit_speed_residual,
    StepControl,
};
use randers_cut::io::{path_table, write_atomic};
use randers_cut::{Direction, NavigationData, ProfileSpec};

fn main() -> anyhow::Result<()> {
    let spec = ProfileSpec::example1(1.0)?;
    let nav = NavigationData::new(spec.clone(), 0.3)?;
    let nu = 0.8;
    let h = shoot_h_geodesic(
        &spec,
        (FRAC_PI_3, 0.0),
        nu,
        -1,
        8.0 * spec.a(),
        &StepControl::default(),
    )?;
    let worst_speed = h
        .samples()
        .iter()
        .map(|s| unit_speed_residual(&spec, s))
        .fold(0.0, f64::max);
    println!(
        "h-geodesic from (pi/3, 0), nu = {nu}: {} knots",
        h.samples().len()
    );
    println!("  turning points at s = {:?}", h.turning_points());
    println!("  max |h(v, v) - 1| = {worst_speed:.2e}");

    let f = flow_deviate(&h, &nav, Direction::Forward)?;
    let mut worst_cos = 0.0f64;
    let mut worst_f = 0.0f64;
    for st in f.samples() {
        worst_cos = worst_cos
            .max((measured_cos_psi(&spec, st) - finsler_clairaut_cos(&nav, st.r, nu)?).abs());
        worst_f = worst_f.max((nav.finsler_norm(st.r, (st.dr, st.dtheta))? - 1.0).abs());
    }
    println!("forward F-geodesic, mu = {}:", nav.mu());
    println!("  max |F(P, P') - 1| = {worst_f:.2e}");
    println!("  max Finsler Clairaut mismatch = {worst_cos:.2e}");
    let end = f.end_state();
    println!("  ends at (r, theta) = ({:.6}, {:.6})", end.r, end.theta);

    // a unit-speed run along the equator of the unit sphere
    let round = ProfileSpec::round(1.0)?;
    let wind = NavigationData::new(round.clone(), 0.25)?;
    let eq = shoot_h_geodesic(
        &round,
        (FRAC_PI_2, 0.0),
        1.0,
        0,
        PI,
        &StepControl::default(),
    )?;
    for dir in [Direction::Forward, Direction::Backward] {
        let p = flow_deviate(&eq, &wind, dir)?;
        println!(
            "equator, {dir:?}: theta at s = pi is {:.12}",
            p.end_state().theta
        );
    }

    if let Some(dir) = std::env::args().nth(1) {
        let path = std::path::Path::new(&dir).join("path.csv");
        write_atomic(&path, path_table(&spec, &f).render(&[]).as_bytes())?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
