//! Half-period functions by quadrature against the closed forms, plus the
//! Finsler shifts. Pass a directory to write the two CSV tables.
//!
//! cargo run --release --example half_period_curves -- out/

use randers_cut::halfperiod::{
    closed_form, h_half_period, half_period_curve, CurveSelect, XiConvention,
};
use randers_cut::io::{half_period_d2_table, half_period_table, write_atomic};
use randers_cut::{NavigationData, ProfileSpec};

fn main() -> anyhow::Result<()> {
    for lambda in [0.25, 0.5, 1.0, 2.0] {
        let spec = ProfileSpec::example1(lambda)?;
        let top = spec.equator_m();
        let worst = (1..=50)
            .map(|i| {
                let nu = top * i as f64 / 51.0;
                Ok((h_half_period(&spec, nu)? - closed_form::example1::h(lambda, nu)).abs())
            })
            .collect::<randers_cut::Result<Vec<f64>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        println!("example1({lambda}): max |H - closed form| = {worst:.2e}");
    }

    let spec = ProfileSpec::example2(0.5)?;
    let nav = NavigationData::new(spec.clone(), 0.5 * spec.max_wind())?;
    let curve = half_period_curve(&nav, 200, XiConvention::Inverse, CurveSelect::HfPlus)?;
    println!("\nexample2(0.5), mu = mu_max / 2");
    println!("{:>8} {:>12} {:>12} {:>12}", "nu", "H", "H_F+", "H_F-");
    for k in (0..200).step_by(40) {
        println!(
            "{:>8.4} {:>12.8} {:>12.8} {:>12.8}",
            curve.nu_grid[k], curve.h[k], curve.hf_plus[k], curve.hf_minus[k]
        );
    }

    if let Some(dir) = std::env::args().nth(1) {
        let dir = std::path::Path::new(&dir);
        write_atomic(
            &dir.join("half_period.csv"),
            half_period_table(&curve).render(&[]).as_bytes(),
        )?;
        write_atomic(
            &dir.join("half_period_d2.csv"),
            half_period_d2_table(&curve)?.render(&[]).as_bytes(),
        )?;
        println!(
            "wrote half_period.csv and half_period_d2.csv to {}",
            dir.display()
        );
    }
    Ok(())
}
