//! First conjugate points by three independent routes.
//!
//! cargo run --release --example conjugate_points

use std::f64::consts::{FRAC_PI_3, FRAC_PI_4};

use randers_cut::conjcut::{first_f_conjugate, first_h_conjugate_with, ConjugateMethod};
use randers_cut::{Direction, NavigationData, ProfileSpec};

fn main() -> anyhow::Result<()> {
    let cases = [
        ("round(1)", ProfileSpec::round(1.0)?, FRAC_PI_3, 0.5),
        ("example2(0.5)", ProfileSpec::example2(0.5)?, FRAC_PI_4, 0.4),
        ("example1(1)", ProfileSpec::example1(1.0)?, FRAC_PI_3, 0.7),
    ];
    for (name, spec, u, nu) in cases {
        println!("{name}, u = {u:.6}, nu = {nu}");
        for method in [
            ConjugateMethod::Pencil,
            ConjugateMethod::JacobiOde,
            ConjugateMethod::ThetaDerivative,
        ] {
            let c = first_h_conjugate_with(&spec, u, nu, -1, method)?;
            println!(
                "  {method:<16?} s = {:.10}  r = {:.10}  theta = {:.10}",
                c.s, c.r, c.theta
            );
        }
        let nav = NavigationData::new(spec.clone(), 0.5 * spec.max_wind())?;
        let f = first_f_conjugate(&nav, u, nu, Direction::Forward)?;
        println!(
            "  F-conjugate (mu = {:.4}): r = {:.10}  theta = {:.10}\n",
            nav.mu(),
            f.r,
            f.theta
        );
    }
    Ok(())
}
