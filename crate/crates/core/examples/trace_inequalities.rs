//! One instance of each trace inequality, then a seeded batch per inequality.

use symform::interp::{inequality_check, run_inequality_trials, sample_input, Inequality, QuadratureSpec};
use symform::sample::rng_from_seed;
use symform::{Form, Result};

pub fn run() -> Result<()> {
    let form = Form::ktrace(2)?;
    let spec = QuadratureSpec::default();
    let mut rng = rng_from_seed(21);
    for ineq in Inequality::ALL {
        let input = sample_input(ineq, 3, &mut rng);
        let r = inequality_check(&form, &input, &spec)?;
        let alt = r.alt_rhs.map(|v| format!(", alternative rhs {v:.6}")).unwrap_or_default();
        println!("{ineq:>14}: lhs {:.6}  rhs {:.6}  slack {:+.2e}{alt}", r.lhs, r.rhs, r.slack);
    }

    for ineq in [Inequality::MatrixHoelder, Inequality::Alt, Inequality::Gt, Inequality::ExpConvex] {
        let report = run_inequality_trials(ineq, &form, 2..=5, 500, 22, &spec)?;
        println!(
            "{ineq:>14}: {} trials, {} violations, smallest slack {:.2e}",
            report.trials_completed,
            report.confirmed_violations,
            report.min_slack.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
