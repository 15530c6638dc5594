//! Complex interpolation: the boundary densities, the interpolation bound on
//! the Epstein family, and the operator `T_A`.

use symform::interp::{beta_density, check_interpolation, t_op, BetaRule, GFamily, QuadratureSpec};
use symform::sample::{random_general, random_hermitian, random_psd, rng_from_seed};
use symform::{Form, PsdMatrix, Result};

pub fn run() -> Result<()> {
    let spec = QuadratureSpec::default();
    for theta in [0.0, 0.3, 0.5, 0.9] {
        let rule = BetaRule::new(theta, &spec)?;
        let mass = rule.integrate(|_| Ok(1.0))?;
        println!(
            "β_{theta}: density at 0 = {:.6}, mass = {mass:.12} over {} nodes",
            beta_density(theta, 0.0),
            rule.len()
        );
    }

    let mut rng = rng_from_seed(31);
    let form = Form::ktrace(2)?;
    for s in [0.25, 0.5, 1.0] {
        let x = random_psd(&mut rng, 3, 1.0);
        let c = random_psd(&mut rng, 3, 1.0);
        let k = random_general(&mut rng, 3, 3, 1.0);
        let family = GFamily::epstein(x, c, &k, 1.0, s)?;
        let r = check_interpolation(&form, &family, &family.natural_params()?, &spec)?;
        println!("epstein s={s}: φ(|G(θ)|^p_θ) = {:.6} ≤ {:.6}", r.lhs, r.rhs);
    }

    let a = PsdMatrix::from_real_diagonal(&[1.0, 2.0])?;
    let b = random_hermitian(&mut rng, 2, 1.0);
    let t = t_op(&a, &b)?;
    println!("T_A[B] for A = diag(1,2):\n{}", t.as_matrix().map(|z| z.re));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
