//! Sums of the `k` smallest eigenvalues: concavity search on the Lieb and
//! Epstein targets, and the majorization chain that reduces Hölder forms to
//! those sums.

use symform::harness::{conjecture_search, reduction_check, ProbeConfig, TargetKind};
use symform::{Form, Result};

pub fn run() -> Result<()> {
    let cfg = ProbeConfig { trials: 1000, seed: 51, ..Default::default() };
    for (k, n) in [(1, 2), (1, 3), (2, 3), (2, 4), (3, 4)] {
        for kind in [TargetKind::Lieb, TargetKind::Epstein] {
            let r = conjecture_search(k, n, kind, &cfg)?;
            println!(
                "k={k} n={n} {kind:>8}: {} confirmed violations in {} + {} trials",
                r.confirmed_violations(),
                r.midpoint.trials_completed,
                r.second_difference.trials_completed
            );
        }
    }

    let cfg = ProbeConfig { n: 4, m: 3, trials: 300, seed: 52, ..Default::default() };
    for kind in [TargetKind::Epstein, TargetKind::Lieb, TargetKind::ExpLog] {
        let r = reduction_check(kind, &Form::gk(2)?, &cfg)?;
        println!(
            "reduction {kind:>8}: {} triples, weak majorization {}, witnesses {}, form inequality {}",
            r.triples, r.weak_majorization_held, r.witnesses_held, r.form_inequality_held
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
