//! Brute-force check of a theorem cut locus on a mesh.
//!
//! cargo run --release --example distance_field_oracle -- [n_r]

use std::f64::consts::{FRAC_PI_3, PI};
use std::time::Instant;

use randers_cut::conjcut::cut_locus_theorem;
use randers_cut::oracle::{
    arc_points, build_distance_field, calibrate_tol_mesh, empirical_cut_locus, hausdorff, MeshSpec,
};
use randers_cut::{NavigationData, ProfileSpec};

fn main() -> anyhow::Result<()> {
    let n_r: usize = std::env::args()
        .nth(1)
        .map(|s| s.parse())
        .transpose()?
        .unwrap_or(512);
    let mesh = MeshSpec::new(n_r, 2 * n_r, 16)?;
    let cal = calibrate_tol_mesh(PI, mesh)?;
    println!(
        "{n_r} x {} mesh, 16-neighbour stencil: round-sphere error {:.4}, tol_mesh {:.4}",
        2 * n_r,
        cal.max_error,
        cal.tol_mesh
    );
    let x = (FRAC_PI_3, 0.0);
    let cases = [
        (
            "round(1), mu = 0.25",
            NavigationData::new(ProfileSpec::round(1.0)?, 0.25)?,
        ),
        (
            "example1(1), mu = mu_max/2",
            NavigationData::new(ProfileSpec::example1(1.0)?, 0.5 / 2f64.sqrt())?,
        ),
        (
            "example2(0.5), mu = 0.2",
            NavigationData::new(ProfileSpec::example2(0.5)?, 0.2)?,
        ),
    ];
    for (label, nav) in cases {
        let t = Instant::now();
        let field = build_distance_field(&nav, x, mesh)?;
        let built = t.elapsed();
        let cuts = empirical_cut_locus(&nav, x, 256, &field, cal.tol_mesh)?;
        let arc = cut_locus_theorem(&nav, x)?;
        let empirical: Vec<(f64, f64)> = cuts.iter().map(|c| (c.r, c.theta)).collect();
        let d = hausdorff(nav.profile(), &empirical, &arc_points(&arc, 512));
        let target = nav.profile().two_a() - x.0;
        let off = cuts
            .iter()
            .map(|c| (c.r - target).abs())
            .fold(0.0, f64::max);
        println!(
            "{label:<28} field {:>7.1?}  {} cut points  max |r - (2a - u)| {off:.4}  Hausdorff {d:.4}  {}",
            built,
            cuts.len(),
            if d < cal.tol_mesh { "within tol_mesh" } else { "OUTSIDE tol_mesh" }
        );
    }
    Ok(())
}
