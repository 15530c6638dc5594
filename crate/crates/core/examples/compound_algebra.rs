//! Builds exterior powers and checks their algebra: multiplicativity,
//! adjoints, powers and the spectrum of `∧^k P`.

use symform::compound::{compound, compound_property_check};
use symform::sample::{sample, SampleKind};
use symform::{PsdMatrix, Result};

pub fn run() -> Result<()> {
    let p = PsdMatrix::from_real_diagonal(&[4.0, 3.0, 2.0, 1.0])?;
    let c2 = compound(p.as_matrix(), 2)?;
    let diag: Vec<f64> = (0..c2.order()).map(|i| c2.as_matrix()[(i, i)].re).collect();
    println!("∧²diag(4,3,2,1) has diagonal {diag:?}");

    let a = sample(SampleKind::General, 5, 11, 1.0);
    let b = sample(SampleKind::General, 5, 12, 1.0);
    for k in 1..=3 {
        let report = compound_property_check(&a, &b, k, 13)?;
        println!("k = {k}: all identities hold: {}", report.all_passed());
        for check in &report.checks {
            println!("    {:<16} error {:.2e} (tol {:.0e})", check.name, check.error, check.tol);
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
