//! Matrix files, JSON reports, and the seeding contract: reports do not
//! depend on the number of worker threads.

use symform::harness::{probe_midpoint, ProbeConfig, TargetKind};
use symform::report::{load_matrix, write_matrix, write_report, ProbeReport};
use symform::sample::{sample, SampleKind};
use symform::seed::derive_trial_seed;
use symform::{Form, PsdMatrix, Result};

pub fn run() -> Result<()> {
    let dir = std::env::temp_dir().join(format!("symform-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("temp dir");

    let m = sample(SampleKind::Psd, 3, 61, 1.0);
    let path = dir.join("a.json");
    write_matrix(&m, &path)?;
    let back = PsdMatrix::from_matrix(load_matrix(&path)?)?;
    println!(
        "matrix round trip exact: {}, ktrace:k=2 = {:.6}",
        back.as_matrix() == &m,
        Form::ktrace(2)?.eval_matrix(&back)?
    );

    println!("trial seeds for base 61: {:#018x} {:#018x}", derive_trial_seed(61, 0), derive_trial_seed(61, 1));

    let cfg = ProbeConfig { n: 3, m: 3, trials: 300, seed: 61, ..Default::default() };
    let run_with = |threads: usize| -> Result<ProbeReport> {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().expect("thread pool");
        pool.install(|| probe_midpoint(TargetKind::Lieb, &Form::Trace, &cfg))
    };
    let (one, four) = (run_with(1)?, run_with(4)?);
    println!("identical across 1 and 4 threads: {}", one.canonical_json() == four.canonical_json());

    let report_path = dir.join("report.json");
    write_report(&one, &report_path)?;
    let reread: ProbeReport =
        serde_json::from_str(&std::fs::read_to_string(&report_path).expect("report")).expect("json");
    println!("report round trip equal: {}", reread == one);
    std::fs::remove_dir_all(&dir).ok();
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
