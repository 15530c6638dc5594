//! Probes joint concavity of the Epstein, Lieb and exp-log targets, then
//! breaks the Lieb constraint to show the detector firing.

use symform::harness::{
    probe_midpoint, probe_second_difference, replay_violation, FixedParams, ProbeConfig, TargetKind,
};
use symform::{Form, Result};

pub fn run() -> Result<()> {
    let form = Form::ktrace(2)?;
    for (kind, m) in [(TargetKind::Epstein, 3), (TargetKind::Lieb, 3), (TargetKind::ExpLog, 2)] {
        let cfg = ProbeConfig { n: 3, m, trials: 500, seed: 41, ..Default::default() };
        let mid = probe_midpoint(kind, &form, &cfg)?;
        let sd = probe_second_difference(kind, &form, &ProbeConfig { trials: 100, ..cfg })?;
        println!(
            "{kind:>8}: midpoint {} violations (min slack {:.2e}), second difference {} violations",
            mid.confirmed_violations,
            mid.min_slack.unwrap_or(f64::NAN),
            sd.confirmed_violations
        );
    }

    let broken = ProbeConfig {
        n: 2,
        m: 2,
        trials: 500,
        seed: 42,
        fixed: FixedParams { p: Some(0.8), q: Some(0.8), s: Some(1.0), ..Default::default() },
        override_constraints: true,
        ..Default::default()
    };
    let report = probe_midpoint(TargetKind::Lieb, &Form::Trace, &broken)?;
    println!("lieb with p + q = 1.6: {} confirmed violations", report.confirmed_violations);
    if let Some(v) = report.violations.first() {
        let (lhs, rhs) = replay_violation(TargetKind::Lieb, &Form::Trace, &broken, v)?;
        println!("trial {} (seed {:#x}) replays to {lhs:.6} > {rhs:.6}", v.trial, v.trial_seed);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
