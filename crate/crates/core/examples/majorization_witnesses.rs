//! Majorization verdicts and the witnesses behind them: the bridge vector,
//! a doubly stochastic matrix, and its Birkhoff decomposition.

use symform::majorization::{
    birkhoff, bridge, ds_from_majorization, eigen_majorization_check, verdict, SpectralRelation,
};
use symform::sample::{random_hermitian, random_psd, rng_from_seed};
use symform::Result;

pub fn run() -> Result<()> {
    let a = [2.0, 1.0, 0.5];
    let b = [3.0, 1.0, 1.0];
    let v = verdict(&a, &b, false)?;
    println!("a ≺_w b: {}, a ≺ b: {}, prefix slacks {:?}", v.weak, v.strict, v.prefix_slacks);

    let c = bridge(&a, &b)?;
    println!("bridge c = {c:?}");
    let d = ds_from_majorization(&c, &b)?;
    println!("D b = {:?}", d.apply(&b));
    for term in birkhoff(&d)? {
        println!("    {:.4} × permutation {:?}", term.weight, term.permutation.image());
    }

    let mut rng = rng_from_seed(3);
    let (x, y) = (random_hermitian(&mut rng, 4, 1.0), random_hermitian(&mut rng, 4, 1.0));
    let sum = eigen_majorization_check(&x, &y, SpectralRelation::Sum)?;
    println!("λ(X+Y) ≺ λ(X)+λ(Y): {}", sum.verdict.strict);
    let (p, q) = (random_psd(&mut rng, 4, 1.0), random_psd(&mut rng, 4, 1.0));
    let product = eigen_majorization_check(p.hermitian(), q.hermitian(), SpectralRelation::Product)?;
    println!("log σ(PQ) ≺ log λ(P)λ(Q): {}", product.verdict.strict);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
