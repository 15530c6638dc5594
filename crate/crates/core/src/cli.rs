//! The `symform` command line: argument grammar, config-file resolution,
//! dispatch and exit codes.
//!
//! Exit codes: 0 when every check passed, 1 when a confirmed violation was
//! found, 2 for usage, configuration and precondition errors, 3 for
//! numerical failures. `SYMFORM_THREADS` caps the worker pool.

use std::collections::{BTreeMap, BTreeSet};
use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::compound::compound_property_check;
use crate::error::{Error, Result};
use crate::forms::{check_axioms, check_concavity_vector, check_hoelder, Form};
use crate::harness::{
    conjecture_search, probe_midpoint, probe_second_difference, reduction_check, FixedParams, ProbeConfig, TargetKind,
    TauMode,
};
use crate::hermitian::{HermitianMatrix, PsdMatrix};
use crate::interp::{
    run_inequality_trials, run_interpolation_trials, FamilyExponents, FamilyKind, Inequality, InterpolationParams,
    QuadratureSpec,
};
use crate::majorization::{
    birkhoff, bridge, ds_from_majorization, eigen_majorization_check, verdict, SpectralRelation,
};
use crate::report::{load_matrix, write_matrix, write_report};
use crate::sample::{sample, SampleKind};

#[derive(Debug, Parser)]
#[command(
    name = "symform",
    version,
    about = "Symmetric forms on PSD matrices: inequalities, majorization and concavity probes"
)]
pub struct Cli {
    /// Flat key=value file supplying defaults for the subcommand's flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a form on a PSD matrix file.
    Eval(EvalArgs),
    /// Check a named inequality over seeded random inputs.
    Verify(VerifyArgs),
    /// Probe joint concavity of a target.
    Probe(ProbeArgs),
    /// Search for concavity violations of sums of smallest eigenvalues.
    Conjecture(ConjectureArgs),
    /// Check the axioms, Hölder property or concavity of a form.
    Forms(FormsArgs),
    /// Majorization verdicts and witnesses.
    Majorize(MajorizeArgs),
    /// Exterior-power identities.
    Compound(CompoundArgs),
    /// Check the majorization chain from sums of smallest eigenvalues to a form.
    Reduce(ReduceArgs),
    /// Write a seeded random matrix file.
    Sample(SampleArgs),
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub form: Option<String>,
    #[arg(long)]
    pub matrix: Option<PathBuf>,
}

#[derive(Debug, Args, Default)]
pub struct RunArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Report path; the report goes to stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub ineq: Option<String>,
    #[arg(long)]
    pub form: Option<String>,
    #[command(flatten)]
    pub run: RunArgs,
    /// Smallest dimension; each trial draws n uniformly from [n_min, n].
    #[arg(long)]
    pub n_min: Option<usize>,
    /// Family for `--ineq interpolation`: power_product, epstein or lieb_two_var.
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long)]
    pub p0: Option<f64>,
    #[arg(long)]
    pub p1: Option<f64>,
    #[arg(long)]
    pub r: Option<f64>,
    #[arg(long)]
    pub s: Option<f64>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub q: Option<f64>,
    #[arg(long)]
    pub factors: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ProbeArgs {
    #[arg(long)]
    pub target: Option<String>,
    #[arg(long)]
    pub form: Option<String>,
    #[command(flatten)]
    pub run: RunArgs,
    #[arg(long)]
    pub m: Option<usize>,
    /// midpoint or second_difference.
    #[arg(long)]
    pub mode: Option<String>,
    /// fixed_half or uniform.
    #[arg(long)]
    pub tau_mode: Option<String>,
    #[arg(long)]
    pub tol_abs: Option<f64>,
    #[arg(long)]
    pub tol_rel: Option<f64>,
    #[arg(long)]
    pub r: Option<f64>,
    #[arg(long)]
    pub s: Option<f64>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub q: Option<f64>,
    /// Comma-separated exp_log weights.
    #[arg(long)]
    pub weights: Option<String>,
    /// Allow p + q > 1 and non-Hölder forms.
    #[arg(long)]
    pub override_constraints: bool,
}

#[derive(Debug, Args)]
pub struct ConjectureArgs {
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub target: Option<String>,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Args)]
pub struct FormsArgs {
    /// axioms, hoelder or concavity.
    #[arg(long)]
    pub check: Option<String>,
    #[arg(long)]
    pub form: Option<String>,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Args)]
pub struct MajorizeArgs {
    /// Comma-separated vector, or a matrix file with `--relation`.
    #[arg(long)]
    pub a: Option<String>,
    #[arg(long)]
    pub b: Option<String>,
    /// verdict, bridge, ds or birkhoff.
    #[arg(long)]
    pub op: Option<String>,
    /// Compare logarithms (verdict only).
    #[arg(long)]
    pub log: bool,
    /// sum or product: spectral relation between the Hermitian matrix files `a` and `b`.
    #[arg(long)]
    pub relation: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompoundArgs {
    #[arg(long)]
    pub k: Option<usize>,
    #[command(flatten)]
    pub run: RunArgs,
    /// Matrix files; sampled from the seed when absent.
    #[arg(long)]
    pub a: Option<PathBuf>,
    #[arg(long)]
    pub b: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReduceArgs {
    #[arg(long)]
    pub target: Option<String>,
    #[arg(long)]
    pub form: Option<String>,
    #[command(flatten)]
    pub run: RunArgs,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub override_constraints: bool,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    /// psd, hermitian, general or unitary.
    #[arg(long)]
    pub kind: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub scale: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Values from a flat `key = value` file; `#` starts a comment line.
#[derive(Debug, Default, Clone)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::invalid(format!("config line {}: expected key=value", i + 1)))?;
            let key = key.trim().replace('-', "_");
            if values.insert(key.clone(), value.trim().to_string()).is_some() {
                return Err(Error::invalid(format!("config line {}: duplicate key `{key}`", i + 1)));
            }
        }
        Ok(Self { values })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::invalid(format!("{}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            Error::InvalidInput(msg) => Error::invalid(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    fn check_keys(&self, allowed: &[&str]) -> Result<()> {
        let allowed: BTreeSet<&str> = allowed.iter().copied().collect();
        match self.values.keys().find(|k| !allowed.contains(k.as_str())) {
            Some(k) => Err(Error::invalid(format!("unknown config key `{k}` for this command"))),
            None => Ok(()),
        }
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        self.values
            .get(key)
            .map(|v| v.parse::<T>().map_err(|_| Error::invalid(format!("config key `{key}`: cannot parse `{v}`"))))
            .transpose()
    }
}

/// Resolves one setting: command line, then config file, then default.
struct Resolver<'a> {
    file: &'a ConfigFile,
}

impl Resolver<'_> {
    fn opt<T: FromStr>(&self, cli: Option<T>, key: &str) -> Result<Option<T>> {
        match cli {
            Some(v) => Ok(Some(v)),
            None => self.file.get(key),
        }
    }

    fn or<T: FromStr>(&self, cli: Option<T>, key: &str, default: T) -> Result<T> {
        Ok(self.opt(cli, key)?.unwrap_or(default))
    }

    fn required<T: FromStr>(&self, cli: Option<T>, key: &str) -> Result<T> {
        self.opt(cli, key)?
            .ok_or_else(|| Error::invalid(format!("missing required setting `--{}`", key.replace('_', "-"))))
    }

    fn flag(&self, cli: bool, key: &str) -> Result<bool> {
        Ok(cli || self.file.get::<bool>(key)?.unwrap_or(false))
    }
}

fn parse<T: FromStr<Err = Error>>(s: &str) -> Result<T> {
    s.parse()
}

fn parse_vector(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| Error::invalid(format!("cannot parse `{t}` as a number"))))
        .collect()
}

fn emit<T: Serialize>(report: &T, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => write_report(report, path),
        None => {
            println!("{}", serde_json::to_string_pretty(report).expect("report serializes"));
            Ok(())
        }
    }
}

const RUN_KEYS: [&str; 4] = ["n", "trials", "seed", "out"];

fn keys(extra: &[&'static str]) -> Vec<&'static str> {
    RUN_KEYS.iter().chain(extra).copied().collect()
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: Cli) -> Result<i32> {
    let file = match &cli.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let res = Resolver { file: &file };
    match cli.command {
        Command::Eval(a) => {
            file.check_keys(&["form", "matrix"])?;
            let form: Form = parse(&res.required(a.form, "form")?)?;
            let path: PathBuf = res.required(a.matrix, "matrix")?;
            let m = PsdMatrix::from_matrix(load_matrix(&path)?)?;
            println!("{}", form.eval_matrix(&m)?);
            Ok(0)
        }
        Command::Verify(a) => verify(a, &file, &res),
        Command::Probe(a) => {
            file.check_keys(&keys(&[
                "target",
                "form",
                "m",
                "mode",
                "tau_mode",
                "tol_abs",
                "tol_rel",
                "r",
                "s",
                "p",
                "q",
                "weights",
                "override_constraints",
            ]))?;
            let kind: TargetKind = parse(&res.required(a.target, "target")?)?;
            let form: Form = parse(&res.required(a.form, "form")?)?;
            let n = res.or(a.run.n, "n", 4)?;
            let weights = res.opt(a.weights, "weights")?.map(|w: String| parse_vector(&w)).transpose()?;
            let m = match (kind, &weights) {
                (TargetKind::ExpLog, Some(w)) => res.or(a.m, "m", w.len())?,
                (TargetKind::ExpLog, None) => res.or(a.m, "m", 1)?,
                _ => res.or(a.m, "m", n)?,
            };
            let cfg = ProbeConfig {
                n,
                m,
                trials: res.or(a.run.trials, "trials", 1000)?,
                seed: res.or(a.run.seed, "seed", 0)?,
                tau_mode: parse::<TauMode>(&res.or(a.tau_mode, "tau_mode", "fixed_half".to_string())?)?,
                tol_abs: res.or(a.tol_abs, "tol_abs", 1e-9)?,
                tol_rel: res.or(a.tol_rel, "tol_rel", 1e-8)?,
                fixed: FixedParams {
                    r: res.opt(a.r, "r")?,
                    s: res.opt(a.s, "s")?,
                    p: res.opt(a.p, "p")?,
                    q: res.opt(a.q, "q")?,
                    weights,
                },
                override_constraints: res.flag(a.override_constraints, "override_constraints")?,
                ..Default::default()
            };
            let report = match res.or(a.mode, "mode", "midpoint".to_string())?.as_str() {
                "midpoint" => probe_midpoint(kind, &form, &cfg)?,
                "second_difference" => probe_second_difference(kind, &form, &cfg)?,
                other => return Err(Error::invalid(format!("unknown probe mode `{other}`"))),
            };
            emit(&report, res.opt(a.run.out, "out")?.as_deref())?;
            Ok(report.exit_code())
        }
        Command::Conjecture(a) => {
            file.check_keys(&keys(&["k", "target"]))?;
            let k = res.required(a.k, "k")?;
            let n = res.required(a.run.n, "n")?;
            let kind: TargetKind = parse(&res.or(a.target, "target", "lieb".to_string())?)?;
            let cfg = ProbeConfig {
                trials: res.or(a.run.trials, "trials", 10_000)?,
                seed: res.or(a.run.seed, "seed", 0)?,
                ..Default::default()
            };
            let report = conjecture_search(k, n, kind, &cfg)?;
            emit(&report, res.opt(a.run.out, "out")?.as_deref())?;
            Ok(report.exit_code())
        }
        Command::Forms(a) => {
            file.check_keys(&keys(&["check", "form"]))?;
            let form: Form = parse(&res.required(a.form, "form")?)?;
            let n = res.or(a.run.n, "n", 4)?;
            let trials = res.or(a.run.trials, "trials", 1000)?;
            let seed = res.or(a.run.seed, "seed", 0)?;
            let report = match res.required(a.check, "check")?.as_str() {
                "axioms" => check_axioms(&form, n, trials, seed)?,
                "hoelder" => check_hoelder(&form, n, trials, seed)?,
                "concavity" => check_concavity_vector(&form, n, trials, seed)?,
                other => return Err(Error::invalid(format!("unknown form check `{other}`"))),
            };
            emit(&report, res.opt(a.run.out, "out")?.as_deref())?;
            Ok(if report.all_passed() { 0 } else { 1 })
        }
        Command::Majorize(a) => majorize(a, &file, &res),
        Command::Compound(a) => {
            file.check_keys(&keys(&["k", "a", "b"]))?;
            let k = res.required(a.k, "k")?;
            let seed = res.or(a.run.seed, "seed", 0)?;
            let (ma, mb) = match (res.opt(a.a, "a")?, res.opt(a.b, "b")?) {
                (Some(pa), Some(pb)) => (load_matrix(&pa)?, load_matrix(&pb)?),
                (None, None) => {
                    let n = res.or(a.run.n, "n", 4)?;
                    if n == 0 {
                        return Err(Error::invalid("n must be positive"));
                    }
                    (sample(SampleKind::General, n, seed, 1.0), sample(SampleKind::General, n, seed ^ 1, 1.0))
                }
                _ => return Err(Error::invalid("give both --a and --b or neither")),
            };
            let report = compound_property_check(&ma, &mb, k, seed)?;
            emit(&report, res.opt(a.run.out, "out")?.as_deref())?;
            Ok(if report.all_passed() { 0 } else { 1 })
        }
        Command::Reduce(a) => {
            file.check_keys(&keys(&["target", "form", "m", "override_constraints"]))?;
            let kind: TargetKind = parse(&res.required(a.target, "target")?)?;
            let form: Form = parse(&res.required(a.form, "form")?)?;
            let n = res.or(a.run.n, "n", 4)?;
            let cfg = ProbeConfig {
                n,
                m: res.or(a.m, "m", if kind == TargetKind::ExpLog { 1 } else { n })?,
                trials: res.or(a.run.trials, "trials", 1000)?,
                seed: res.or(a.run.seed, "seed", 0)?,
                override_constraints: res.flag(a.override_constraints, "override_constraints")?,
                ..Default::default()
            };
            let report = reduction_check(kind, &form, &cfg)?;
            emit(&report, res.opt(a.run.out, "out")?.as_deref())?;
            Ok(report.exit_code())
        }
        Command::Sample(a) => {
            file.check_keys(&["kind", "n", "seed", "scale", "out"])?;
            let kind = match res.or(a.kind, "kind", "psd".to_string())?.as_str() {
                "psd" => SampleKind::Psd,
                "hermitian" => SampleKind::Hermitian,
                "general" => SampleKind::General,
                "unitary" => SampleKind::Unitary,
                other => return Err(Error::invalid(format!("unknown sample kind `{other}`"))),
            };
            let n = res.or(a.n, "n", 3)?;
            if n == 0 {
                return Err(Error::invalid("n must be positive"));
            }
            let m = sample(kind, n, res.or(a.seed, "seed", 0)?, res.or(a.scale, "scale", 1.0)?);
            let out: PathBuf = res.required(a.out, "out")?;
            write_matrix(&m, &out)?;
            Ok(0)
        }
    }
}

fn verify(a: VerifyArgs, file: &ConfigFile, res: &Resolver) -> Result<i32> {
    file.check_keys(&keys(&[
        "ineq", "form", "n_min", "family", "m", "theta", "p0", "p1", "r", "s", "p", "q", "factors",
    ]))?;
    let form: Form = parse(&res.required(a.form, "form")?)?;
    let name: String = res.required(a.ineq, "ineq")?;
    let n = res.or(a.run.n, "n", 4)?;
    let trials = res.or(a.run.trials, "trials", 1000)?;
    let seed = res.or(a.run.seed, "seed", 0)?;
    let spec = QuadratureSpec::default();
    let report = if name == "interpolation" {
        let kind: FamilyKind = parse(&res.or(a.family, "family", "power_product".to_string())?)?;
        let defaults = FamilyExponents::default();
        let exps = FamilyExponents {
            factors: res.or(a.factors, "factors", defaults.factors)?,
            r: res.or(a.r, "r", defaults.r)?,
            s: res.or(a.s, "s", defaults.s)?,
            p: res.or(a.p, "p", defaults.p)?,
            q: res.or(a.q, "q", defaults.q)?,
        };
        let params = match (res.opt(a.theta, "theta")?, res.opt(a.p0, "p0")?, res.opt(a.p1, "p1")?) {
            (None, None, None) => None,
            (Some(theta), Some(p0), Some(p1)) => Some(InterpolationParams::from_endpoints(theta, p0, p1)?),
            _ => return Err(Error::invalid("give all of --theta, --p0, --p1 or none")),
        };
        let m = res.or(a.m, "m", n)?;
        run_interpolation_trials(kind, &form, n, m, exps, params, trials, seed, &spec)?
    } else {
        let ineq: Inequality = parse(&name)?;
        let n_min = res.or(a.n_min, "n_min", n)?;
        if n_min == 0 || n_min > n {
            return Err(Error::invalid(format!("need 1 <= n_min <= n, got n_min={n_min}, n={n}")));
        }
        run_inequality_trials(ineq, &form, n_min..=n, trials, seed, &spec)?
    };
    emit(&report, res.opt(a.run.out, "out")?.as_deref())?;
    Ok(report.exit_code())
}

#[derive(Serialize)]
struct MajorizeOutput<T: Serialize> {
    op: String,
    a: Vec<f64>,
    b: Vec<f64>,
    result: T,
}

fn majorize(a: MajorizeArgs, file: &ConfigFile, res: &Resolver) -> Result<i32> {
    file.check_keys(&["a", "b", "op", "log", "relation", "out"])?;
    let (sa, sb): (String, String) = (res.required(a.a, "a")?, res.required(a.b, "b")?);
    let out = res.opt(a.out, "out")?;
    if let Some(rel) = res.opt::<String>(a.relation, "relation")? {
        let relation = match rel.as_str() {
            "sum" => SpectralRelation::Sum,
            "product" => SpectralRelation::Product,
            other => return Err(Error::invalid(format!("unknown relation `{other}`"))),
        };
        let ha = HermitianMatrix::new(load_matrix(Path::new(&sa))?)?;
        let hb = HermitianMatrix::new(load_matrix(Path::new(&sb))?)?;
        let report = eigen_majorization_check(&ha, &hb, relation)?;
        emit(&report, out.as_deref())?;
        return Ok(if report.verdict.strict { 0 } else { 1 });
    }
    let (va, vb) = (parse_vector(&sa)?, parse_vector(&sb)?);
    let op = res.or(a.op, "op", "verdict".to_string())?;
    let wrap = |result| MajorizeOutput { op: op.clone(), a: va.clone(), b: vb.clone(), result };
    match op.as_str() {
        "verdict" => {
            let v = verdict(&va, &vb, res.flag(a.log, "log")?)?;
            let code = if v.weak { 0 } else { 1 };
            emit(&wrap(serde_json::to_value(&v).expect("serializes")), out.as_deref())?;
            Ok(code)
        }
        "bridge" => {
            let c = bridge(&va, &vb)?;
            emit(&wrap(serde_json::json!({ "c": c })), out.as_deref())?;
            Ok(0)
        }
        "ds" | "birkhoff" => {
            let d = ds_from_majorization(&va, &vb)?;
            let rows: Vec<Vec<f64>> = d.as_matrix().row_iter().map(|r| r.iter().copied().collect()).collect();
            let value = if op == "ds" {
                serde_json::json!({ "d": rows })
            } else {
                let terms = birkhoff(&d)?;
                let terms: Vec<_> = terms
                    .iter()
                    .map(|t| serde_json::json!({ "weight": t.weight, "permutation": t.permutation.image() }))
                    .collect();
                serde_json::json!({ "d": rows, "terms": terms })
            };
            emit(&wrap(value), out.as_deref())?;
            Ok(0)
        }
        other => Err(Error::invalid(format!("unknown majorize op `{other}`"))),
    }
}

/// Applies `SYMFORM_THREADS` to the global worker pool.
pub fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var("SYMFORM_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|t| *t > 0)
        .ok_or_else(|| Error::invalid(format!("SYMFORM_THREADS must be a positive integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Error::invalid(format!("cannot configure {threads} threads: {e}")))
}

/// Entry point of the binary: parses `args`, runs, and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = configure_threads().and_then(|()| run(cli));
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("symform: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_parsing() {
        let c = ConfigFile::parse("# comment\ntrials = 10\nseed=3\n\ntau-mode = uniform\n").unwrap();
        assert_eq!(c.get::<u64>("trials").unwrap(), Some(10));
        assert_eq!(c.get::<String>("tau_mode").unwrap().as_deref(), Some("uniform"));
        assert!(c.check_keys(&["trials", "seed"]).is_err());
        assert!(ConfigFile::parse("trials").is_err());
        assert!(ConfigFile::parse("a=1\na=2").is_err());
        assert!(c.get::<u64>("tau_mode").is_err());
    }

    #[test]
    fn precedence() {
        let c = ConfigFile::parse("trials = 10\nseed = 3").unwrap();
        let res = Resolver { file: &c };
        assert_eq!(res.or(Some(5u64), "trials", 1).unwrap(), 5);
        assert_eq!(res.or(None, "trials", 1u64).unwrap(), 10);
        assert_eq!(res.or(None, "n", 4usize).unwrap(), 4);
        assert!(res.required::<String>(None, "form").is_err());
    }
}
