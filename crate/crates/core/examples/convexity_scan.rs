//! Where does (H_F+)'' first take positive values as lambda grows?
//!
//! cargo run --release --example convexity_scan

use randers_cut::halfperiod::{convexity_scan, ExampleFamily, XiConvention};

fn main() -> anyhow::Result<()> {
    let ranges = [
        (
            ExampleFamily::Example1,
            vec![1.4, 1.45, 1.5, 1.55, 1.6, 1.65, 1.7],
        ),
        (
            ExampleFamily::Example2,
            vec![0.55, 0.575, 0.6, 0.625, 0.65, 0.675, 0.7],
        ),
    ];
    for (family, lambdas) in ranges {
        for convention in [XiConvention::PaperSquare, XiConvention::Inverse] {
            let scan = convexity_scan(family, &lambdas, 400, convention)?;
            println!("{family:?}, {convention:?}");
            for row in &scan.rows {
                println!(
                    "  lambda {:<6} max (H_F+)'' = {:+.5}  {:?}",
                    row.lambda, row.max_d2, row.class
                );
            }
            match scan.threshold_bracket() {
                Some((a, b)) => println!("  threshold in ({a}, {b}]\n"),
                None => println!("  no sign change\n"),
            }
        }
    }
    Ok(())
}
