//! Evaluates each symmetric form on a small spectrum and checks the form
//! axioms, the Hölder property and concavity by sampling.

use symform::forms::{check_axioms, check_hoelder, hoelder_sides};
use symform::{Form, PsdMatrix, Result};

pub fn run() -> Result<()> {
    let a = PsdMatrix::from_real_diagonal(&[1.0, 2.0, 3.0])?;
    let forms = [Form::Trace, Form::ktrace(2)?, Form::gk(2)?, Form::seminorm(0.5)?, Form::min_sum(2)?];
    for form in &forms {
        println!("{form:>14}  φ(diag(1,2,3)) = {:.6}", form.eval_matrix(&a)?);
    }

    for form in &forms {
        let axioms = check_axioms(form, 4, 200, 1)?;
        let hoelder = check_hoelder(form, 4, 200, 1)?;
        println!(
            "{form:>14}  axioms {}  hölder {}",
            if axioms.axioms.passed() { "ok" } else { "FAIL" },
            if hoelder.hoelder.passed() { "ok" } else { "fails" },
        );
        if let Some(w) = hoelder.hoelder.witness() {
            println!("{:>14}  witness x={:.3?} y={:.3?}: {:.4} > {:.4}", "", w.x, w.y, w.lhs, w.rhs);
        }
    }

    // the smallest entry fails Hölder already in two dimensions
    let (lhs, rhs) = hoelder_sides(&Form::min_sum(1)?, &[1.0, 10.0], &[10.0, 1.0], 2.0)?;
    println!("minsum:k=1 on x=(1,10), y=(10,1), p=q=2: {lhs} vs {rhs}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
