//! Seeded probes of joint concavity for the Epstein, Lieb and exp-log
//! targets, the conjecture search for sums of smallest eigenvalues, and the
//! majorization chain that reduces general forms to those sums.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::Form;
use crate::hermitian::{max_abs, ComplexMatrix, HermitianMatrix, PsdMatrix};
use crate::majorization::{bridge, ds_from_majorization, verdict};
use crate::report::{run_trials, Digest, ProbeReport, TrialOutcome, ViolationRecord, TOOL_VERSION};
use crate::sample::{random_general, random_hermitian, random_psd, rng_from_seed, TrialRng};
use crate::seed::derive_trial_seed;

/// Slack allowed on `p + q ≤ 1` and `Σ p_j ≤ 1`.
const CONSTRAINT_TOL: f64 = 1e-12;
/// Diagonal shift of second-difference base points.
pub const BASE_MARGIN: f64 = 0.1;
/// Smallest eigenvalue gap accepted at a second-difference base point.
pub const MIN_EIGEN_GAP: f64 = 1e-8;
const MAX_RESAMPLES: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetKind {
    Epstein,
    Lieb,
    ExpLog,
}

impl std::str::FromStr for TargetKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "epstein" => Ok(TargetKind::Epstein),
            "lieb" => Ok(TargetKind::Lieb),
            "exp_log" => Ok(TargetKind::ExpLog),
            _ => Err(Error::invalid(format!("unknown target `{s}` (expected epstein, lieb or exp_log)"))),
        }
    }
}

impl std::fmt::Display for TargetKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.pad(match self {
            TargetKind::Epstein => "epstein",
            TargetKind::Lieb => "lieb",
            TargetKind::ExpLog => "exp_log",
        })
    }
}

/// A map `F` from positive definite arguments to a PSD matrix; probes test
/// concavity of `X ↦ φ(F(X))`.
#[derive(Debug, Clone, PartialEq)]
pub enum ProbeTarget {
    /// `A ↦ (K* A^{rs} K)^{1/s}`.
    Epstein { k: ComplexMatrix, r: f64, s: f64 },
    /// `(A, B) ↦ (B^{qs/2} K* A^{ps} K B^{qs/2})^{1/s}` with `K` n×m.
    Lieb { k: ComplexMatrix, p: f64, q: f64, s: f64 },
    /// `(A_1, …, A_m) ↦ exp(H + Σ p_j log A_j)`.
    ExpLog { h: HermitianMatrix, weights: Vec<f64> },
}

fn unit_interval(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v <= 1.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("{name} must lie in (0, 1], got {v}")))
    }
}

impl ProbeTarget {
    pub fn epstein(k: ComplexMatrix, r: f64, s: f64) -> Result<Self> {
        unit_interval("r", r)?;
        unit_interval("s", s)?;
        if !k.is_square() || k.nrows() == 0 {
            return Err(Error::invalid("epstein needs a square K"));
        }
        Ok(ProbeTarget::Epstein { k, r, s })
    }

    /// Lieb target with `p + q ≤ 1`.
    pub fn lieb(k: ComplexMatrix, p: f64, q: f64, s: f64) -> Result<Self> {
        if p + q > 1.0 + CONSTRAINT_TOL {
            return Err(Error::invalid(format!("lieb needs p + q <= 1, got {}", p + q)));
        }
        Self::lieb_unconstrained(k, p, q, s)
    }

    /// Lieb target without the `p + q ≤ 1` constraint, for detector checks.
    pub fn lieb_unconstrained(k: ComplexMatrix, p: f64, q: f64, s: f64) -> Result<Self> {
        unit_interval("p", p)?;
        unit_interval("q", q)?;
        unit_interval("s", s)?;
        if k.nrows() == 0 || k.ncols() == 0 {
            return Err(Error::invalid("lieb needs a non-empty K"));
        }
        Ok(ProbeTarget::Lieb { k, p, q, s })
    }

    pub fn exp_log(h: HermitianMatrix, weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::invalid("exp_log needs at least one weight"));
        }
        for (j, &w) in weights.iter().enumerate() {
            unit_interval(&format!("p_{}", j + 1), w)?;
        }
        let total: f64 = weights.iter().sum();
        if total > 1.0 + CONSTRAINT_TOL {
            return Err(Error::invalid(format!("exp_log needs Σ p_j <= 1, got {total}")));
        }
        Ok(ProbeTarget::ExpLog { h, weights })
    }

    pub fn kind(&self) -> TargetKind {
        match self {
            ProbeTarget::Epstein { .. } => TargetKind::Epstein,
            ProbeTarget::Lieb { .. } => TargetKind::Lieb,
            ProbeTarget::ExpLog { .. } => TargetKind::ExpLog,
        }
    }

    /// Dimensions of the arguments.
    pub fn input_dims(&self) -> Vec<usize> {
        match self {
            ProbeTarget::Epstein { k, .. } => vec![k.nrows()],
            ProbeTarget::Lieb { k, .. } => vec![k.nrows(), k.ncols()],
            ProbeTarget::ExpLog { h, weights } => vec![h.dim(); weights.len()],
        }
    }

    pub fn output_dim(&self) -> usize {
        match self {
            ProbeTarget::Epstein { k, .. } => k.ncols(),
            ProbeTarget::Lieb { k, .. } => k.ncols(),
            ProbeTarget::ExpLog { h, .. } => h.dim(),
        }
    }

    pub fn params(&self) -> BTreeMap<String, f64> {
        let mut out = BTreeMap::new();
        match self {
            ProbeTarget::Epstein { r, s, .. } => {
                out.insert("r".into(), *r);
                out.insert("s".into(), *s);
            }
            ProbeTarget::Lieb { p, q, s, .. } => {
                out.insert("p".into(), *p);
                out.insert("q".into(), *q);
                out.insert("s".into(), *s);
            }
            ProbeTarget::ExpLog { weights, .. } => {
                for (j, w) in weights.iter().enumerate() {
                    out.insert(format!("p{}", j + 1), *w);
                }
            }
        }
        out
    }

    fn digest(&self, d: Digest) -> Digest {
        let d = match self {
            ProbeTarget::Epstein { k, .. } | ProbeTarget::Lieb { k, .. } => d.matrix(k),
            ProbeTarget::ExpLog { h, .. } => d.matrix(h.as_matrix()),
        };
        self.params().values().fold(d, |d, v| d.scalar(*v))
    }

    /// `F(X)`.
    pub fn eval_matrix(&self, inputs: &[PsdMatrix]) -> Result<PsdMatrix> {
        let dims = self.input_dims();
        if inputs.len() != dims.len() || inputs.iter().zip(&dims).any(|(x, &d)| x.dim() != d) {
            return Err(Error::invalid(format!(
                "{} expects arguments of dimensions {dims:?}, got {:?}",
                self.kind(),
                inputs.iter().map(PsdMatrix::dim).collect::<Vec<_>>()
            )));
        }
        match self {
            ProbeTarget::Epstein { k, r, s } => {
                let inner = k.adjoint() * inputs[0].pow(r * s)?.as_matrix() * k;
                PsdMatrix::symmetrized(&inner)?.pow(1.0 / s)
            }
            ProbeTarget::Lieb { k, p, q, s } => {
                let b = inputs[1].pow(q * s / 2.0)?;
                let inner = b.as_matrix() * k.adjoint() * inputs[0].pow(p * s)?.as_matrix() * k * b.as_matrix();
                PsdMatrix::symmetrized(&inner)?.pow(1.0 / s)
            }
            ProbeTarget::ExpLog { h, weights } => {
                let mut acc = h.clone();
                for (a, &w) in inputs.iter().zip(weights) {
                    acc = acc.add(&a.log()?.scale(w));
                }
                acc.exp()
            }
        }
    }

    /// `φ(F(X))`.
    pub fn eval(&self, form: &Form, inputs: &[PsdMatrix]) -> Result<f64> {
        form.eval_matrix(&self.eval_matrix(inputs)?)
    }
}

/// How `τ` is chosen in midpoint trials.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TauMode {
    FixedHalf,
    Uniform,
}

impl std::str::FromStr for TauMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fixed_half" | "half" => Ok(TauMode::FixedHalf),
            "uniform" => Ok(TauMode::Uniform),
            _ => Err(Error::invalid(format!("unknown tau mode `{s}` (expected fixed_half or uniform)"))),
        }
    }
}

/// Target parameters held fixed across trials; unset ones are drawn per
/// trial from their legal range.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FixedParams {
    pub r: Option<f64>,
    pub s: Option<f64>,
    pub p: Option<f64>,
    pub q: Option<f64>,
    pub weights: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeConfig {
    pub n: usize,
    /// Dimension of `B` for lieb, number of arguments for exp_log.
    pub m: usize,
    pub trials: u64,
    pub seed: u64,
    pub tau_mode: TauMode,
    pub tol_abs: f64,
    pub tol_rel: f64,
    pub h_steps: Vec<f64>,
    /// Absolute gap a regenerated violation must exceed to be confirmed.
    pub confirm_tol: f64,
    pub fixed: FixedParams,
    /// Drops the `p + q ≤ 1` constraint and the Hölder requirement.
    pub override_constraints: bool,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        Self {
            n: 4,
            m: 4,
            trials: 1000,
            seed: 0,
            tau_mode: TauMode::FixedHalf,
            tol_abs: 1e-9,
            tol_rel: 1e-8,
            h_steps: vec![1e-2, 1e-3],
            confirm_tol: 1e-6,
            fixed: FixedParams::default(),
            override_constraints: false,
        }
    }
}

impl ProbeConfig {
    pub fn validate(&self, kind: TargetKind) -> Result<()> {
        if self.n == 0 || (kind != TargetKind::Epstein && self.m == 0) {
            return Err(Error::invalid("dimensions n and m must be positive"));
        }
        if self.trials == 0 {
            return Err(Error::invalid("trials must be at least 1"));
        }
        if !(self.tol_abs > 0.0 && self.tol_rel > 0.0 && self.confirm_tol > 0.0) {
            return Err(Error::invalid("tolerances must be positive"));
        }
        if self.h_steps.is_empty() || self.h_steps.iter().any(|h| h.is_nan() || *h <= 0.0) {
            return Err(Error::invalid("second-difference steps must be positive"));
        }
        let fx = &self.fixed;
        for (name, v) in [("r", fx.r), ("s", fx.s), ("p", fx.p), ("q", fx.q)] {
            if let Some(v) = v {
                unit_interval(name, v)?;
            }
        }
        if let (Some(p), Some(q)) = (fx.p, fx.q) {
            if kind == TargetKind::Lieb && !self.override_constraints && p + q > 1.0 + CONSTRAINT_TOL {
                return Err(Error::PreconditionFailed(format!(
                    "lieb needs p + q <= 1, got {}; set override_constraints to probe outside that range",
                    p + q
                )));
            }
        }
        if let Some(w) = &fx.weights {
            if kind == TargetKind::ExpLog && w.len() != self.m {
                return Err(Error::invalid(format!("{} weights given for m={} arguments", w.len(), self.m)));
            }
            for (j, &v) in w.iter().enumerate() {
                unit_interval(&format!("p_{}", j + 1), v)?;
            }
            if w.iter().sum::<f64>() > 1.0 + CONSTRAINT_TOL {
                return Err(Error::PreconditionFailed("exp_log needs the weights to sum to at most 1".into()));
            }
        }
        Ok(())
    }

    fn tol(&self, reference: f64) -> f64 {
        self.tol_abs + self.tol_rel * reference.abs()
    }
}

/// A draw from `(0, 1]`.
fn unit_draw(rng: &mut TrialRng) -> f64 {
    1.0 - rng.random_range(0.0..1.0)
}

/// Draws the target of one trial: `K` from `random_general`, `H` from
/// `random_hermitian`, unset parameters uniformly from their ranges.
pub fn sample_target(kind: TargetKind, cfg: &ProbeConfig, rng: &mut TrialRng) -> Result<ProbeTarget> {
    let fx = &cfg.fixed;
    match kind {
        TargetKind::Epstein => {
            let k = random_general(rng, cfg.n, cfg.n, 1.0);
            let r = fx.r.unwrap_or_else(|| unit_draw(rng));
            let s = fx.s.unwrap_or_else(|| unit_draw(rng));
            ProbeTarget::epstein(k, r, s)
        }
        TargetKind::Lieb => {
            let k = random_general(rng, cfg.n, cfg.m, 1.0);
            let (p, q) = match (fx.p, fx.q) {
                (Some(p), Some(q)) => (p, q),
                (Some(p), None) => (p, (1.0 - p).max(0.0) * unit_draw(rng)),
                (None, Some(q)) => ((1.0 - q).max(0.0) * unit_draw(rng), q),
                (None, None) => {
                    let total = unit_draw(rng);
                    let p = total * unit_draw(rng);
                    (p, total - p)
                }
            };
            let s = fx.s.unwrap_or_else(|| unit_draw(rng));
            if cfg.override_constraints {
                ProbeTarget::lieb_unconstrained(k, p, q, s)
            } else {
                ProbeTarget::lieb(k, p, q, s)
            }
        }
        TargetKind::ExpLog => {
            let h = random_hermitian(rng, cfg.n, 1.0);
            let weights = match &fx.weights {
                Some(w) => w.clone(),
                None => {
                    let total = unit_draw(rng);
                    let raw: Vec<f64> = (0..cfg.m).map(|_| unit_draw(rng)).collect();
                    let sum: f64 = raw.iter().sum();
                    raw.iter().map(|u| total * u / sum).collect()
                }
            };
            ProbeTarget::exp_log(h, weights)
        }
    }
}

fn sample_arguments(target: &ProbeTarget, rng: &mut TrialRng) -> Vec<PsdMatrix> {
    target.input_dims().into_iter().map(|d| random_psd(rng, d, 1.0)).collect()
}

/// Regenerated inputs of one midpoint trial.
#[derive(Debug, Clone)]
pub struct MidpointInstance {
    pub target: ProbeTarget,
    pub x: Vec<PsdMatrix>,
    pub y: Vec<PsdMatrix>,
    pub tau: f64,
}

impl MidpointInstance {
    pub fn generate(kind: TargetKind, cfg: &ProbeConfig, trial_seed: u64) -> Result<Self> {
        let mut rng = rng_from_seed(trial_seed);
        let target = sample_target(kind, cfg, &mut rng)?;
        let x = sample_arguments(&target, &mut rng);
        let y = sample_arguments(&target, &mut rng);
        let tau = match cfg.tau_mode {
            TauMode::FixedHalf => 0.5,
            TauMode::Uniform => rng.random_range(0.0..1.0),
        };
        Ok(Self { target, x, y, tau })
    }

    pub fn mixed(&self) -> Result<Vec<PsdMatrix>> {
        self.x.iter().zip(&self.y).map(|(a, b)| PsdMatrix::convex_combination(self.tau, a, b)).collect()
    }

    pub fn digest(&self) -> String {
        let d = self.target.digest(Digest::new());
        let d = self.x.iter().chain(&self.y).fold(d, |d, a| d.matrix(a.as_matrix()));
        d.scalar(self.tau).finish()
    }

    fn params(&self) -> BTreeMap<String, f64> {
        let mut p = self.target.params();
        p.insert("n".into(), self.x[0].dim() as f64);
        p.insert("args".into(), self.x.len() as f64);
        p
    }

    /// `(τ f(X) + (1−τ) f(Y), f(τX + (1−τ)Y))`.
    pub fn sides(&self, form: &Form) -> Result<(f64, f64)> {
        let fx = self.target.eval(form, &self.x)?;
        let fy = self.target.eval(form, &self.y)?;
        let fc = self.target.eval(form, &self.mixed()?)?;
        Ok((self.tau * fx + (1.0 - self.tau) * fy, fc))
    }
}

/// Regenerated inputs of one second-difference trial.
#[derive(Debug, Clone)]
pub struct SecondDifferenceInstance {
    pub target: ProbeTarget,
    pub base: Vec<PsdMatrix>,
    pub directions: Vec<HermitianMatrix>,
}

fn min_gap(values: &[f64]) -> f64 {
    values.windows(2).map(|w| (w[0] - w[1]).abs()).fold(f64::INFINITY, f64::min)
}

impl SecondDifferenceInstance {
    /// Draws base points `random_psd + 0.1 I` and directions with
    /// `‖Δ‖_max = 1`, resampling while `C ± h_max Δ` is not positive definite
    /// or `C` has an eigenvalue gap below `1e-8`.
    pub fn generate(kind: TargetKind, cfg: &ProbeConfig, trial_seed: u64) -> Result<Self> {
        let mut rng = rng_from_seed(trial_seed);
        let target = sample_target(kind, cfg, &mut rng)?;
        let h_max = cfg.h_steps.iter().cloned().fold(0.0, f64::max);
        for _ in 0..MAX_RESAMPLES {
            let mut base = Vec::new();
            let mut directions = Vec::new();
            for d in target.input_dims() {
                let shifted =
                    random_psd(&mut rng, d, 1.0).hermitian().add(&HermitianMatrix::identity(d).scale(BASE_MARGIN));
                base.push(PsdMatrix::new(shifted)?);
                let delta = random_hermitian(&mut rng, d, 1.0);
                directions.push(delta.scale(1.0 / max_abs(delta.as_matrix())));
            }
            let mut admissible = true;
            for (c, delta) in base.iter().zip(&directions) {
                if min_gap(c.spectrum()) < MIN_EIGEN_GAP {
                    admissible = false;
                }
                for sign in [1.0, -1.0] {
                    let moved = c.hermitian().add(&delta.scale(sign * h_max)).eigh()?;
                    if *moved.values.last().expect("non-empty") <= 0.0 {
                        admissible = false;
                    }
                }
            }
            if admissible {
                return Ok(Self { target, base, directions });
            }
        }
        Err(Error::PreconditionFailed(format!("no admissible base point in {MAX_RESAMPLES} draws")))
    }

    fn moved(&self, t: f64) -> Result<Vec<PsdMatrix>> {
        self.base.iter().zip(&self.directions).map(|(c, d)| PsdMatrix::new(c.hermitian().add(&d.scale(t)))).collect()
    }

    /// `(h, f(C+hΔ) − 2f(C) + f(C−hΔ), f(C))` for each step.
    pub fn differences(&self, form: &Form, steps: &[f64]) -> Result<Vec<(f64, f64, f64)>> {
        let fc = self.target.eval(form, &self.base)?;
        steps
            .iter()
            .map(|&h| {
                let plus = self.target.eval(form, &self.moved(h)?)?;
                let minus = self.target.eval(form, &self.moved(-h)?)?;
                Ok((h, plus - 2.0 * fc + minus, fc))
            })
            .collect()
    }

    pub fn digest(&self) -> String {
        let d = self.target.digest(Digest::new());
        let d = self.base.iter().fold(d, |d, a| d.matrix(a.as_matrix()));
        self.directions.iter().fold(d, |d, a| d.matrix(a.as_matrix())).finish()
    }
}

/// `1e-7 + 1e-5 h² |f(C)|`.
pub fn second_difference_tol(h: f64, fc: f64) -> f64 {
    1e-7 + 1e-5 * h * h * fc.abs()
}

fn gate(form: &Form, kind: TargetKind, cfg: &ProbeConfig) -> Result<()> {
    cfg.validate(kind)?;
    if cfg.override_constraints {
        return Ok(());
    }
    let out = match kind {
        TargetKind::Lieb => cfg.m,
        _ => cfg.n,
    };
    if form.min_dim() > out {
        return Err(Error::invalid(format!(
            "form {form} needs dimension >= {}, target output is {out}",
            form.min_dim()
        )));
    }
    if !(form.is_concave() && form.is_hoelder_in(out)) {
        return Err(Error::PreconditionFailed(format!(
            "{form} is not Hölder in dimension {out}; concavity probes need a Hölder form"
        )));
    }
    Ok(())
}

fn midpoint_trial(kind: TargetKind, form: &Form, cfg: &ProbeConfig, trial: u64, trial_seed: u64) -> TrialOutcome {
    let run = || -> Result<TrialOutcome> {
        let inst = MidpointInstance::generate(kind, cfg, trial_seed)?;
        let (lhs, rhs) = inst.sides(form)?;
        let gap = lhs - rhs;
        let tol = cfg.tol(rhs);
        if gap <= tol {
            return Ok(TrialOutcome::passed(-gap));
        }
        // regenerate from the seed and recheck at the confirmation threshold
        let (lhs2, rhs2) = MidpointInstance::generate(kind, cfg, trial_seed)?.sides(form)?;
        let confirmed = lhs2 - rhs2 > cfg.confirm_tol.max(tol);
        Ok(TrialOutcome::Completed {
            slack: -gap,
            violation: Some(ViolationRecord {
                trial,
                trial_seed,
                check: "midpoint".into(),
                tau: Some(inst.tau),
                step: None,
                lhs,
                rhs,
                gap,
                tol,
                confirmed,
                params: inst.params(),
                digest: inst.digest(),
            }),
        })
    };
    run().unwrap_or_else(|e| TrialOutcome::Skipped { reason: e.to_string() })
}

fn second_difference_trial(
    kind: TargetKind,
    form: &Form,
    cfg: &ProbeConfig,
    trial: u64,
    trial_seed: u64,
) -> TrialOutcome {
    let run = || -> Result<TrialOutcome> {
        let inst = SecondDifferenceInstance::generate(kind, cfg, trial_seed)?;
        let diffs = inst.differences(form, &cfg.h_steps)?;
        // the step with the largest excess over its tolerance decides the trial
        let (h, sd, fc) = diffs
            .iter()
            .cloned()
            .max_by(|a, b| (a.1 - second_difference_tol(a.0, a.2)).total_cmp(&(b.1 - second_difference_tol(b.0, b.2))))
            .expect("at least one step");
        let tol = second_difference_tol(h, fc);
        if sd <= tol {
            return Ok(TrialOutcome::passed(-sd));
        }
        let again = SecondDifferenceInstance::generate(kind, cfg, trial_seed)?.differences(form, &[h])?;
        let confirmed = again[0].1 > cfg.confirm_tol.max(tol);
        let mut params = inst.target.params();
        params.insert("n".into(), inst.base[0].dim() as f64);
        params.insert("args".into(), inst.base.len() as f64);
        Ok(TrialOutcome::Completed {
            slack: -sd,
            violation: Some(ViolationRecord {
                trial,
                trial_seed,
                check: "second_difference".into(),
                tau: None,
                step: Some(h),
                lhs: sd,
                rhs: 0.0,
                gap: sd,
                tol,
                confirmed,
                params,
                digest: inst.digest(),
            }),
        })
    };
    run().unwrap_or_else(|e| TrialOutcome::Skipped { reason: e.to_string() })
}

fn command_echo(mode: &str, kind: TargetKind, form: &Form, cfg: &ProbeConfig) -> String {
    let mut s = format!(
        "probe --mode {mode} --target {kind} --form {form} --n {} --m {} --trials {}",
        cfg.n, cfg.m, cfg.trials
    );
    if cfg.override_constraints {
        s.push_str(" --override-constraints");
    }
    s
}

fn midpoint_report(kind: TargetKind, form: &Form, cfg: &ProbeConfig, command: String) -> ProbeReport {
    let start = Instant::now();
    let outcomes = run_trials(cfg.trials, cfg.seed, |i, seed| midpoint_trial(kind, form, cfg, i, seed));
    ProbeReport::from_outcomes(command, cfg.seed, outcomes, start.elapsed().as_millis() as u64)
}

fn second_difference_report(kind: TargetKind, form: &Form, cfg: &ProbeConfig, command: String) -> ProbeReport {
    let start = Instant::now();
    let outcomes = run_trials(cfg.trials, cfg.seed, |i, seed| second_difference_trial(kind, form, cfg, i, seed));
    ProbeReport::from_outcomes(command, cfg.seed, outcomes, start.elapsed().as_millis() as u64)
}

/// Midpoint concavity trials: a violation is `τf(X) + (1−τ)f(Y) > f(C) + tol`
/// with `C = τX + (1−τ)Y` and `tol = tol_abs + tol_rel |f(C)|`.
pub fn probe_midpoint(kind: TargetKind, form: &Form, cfg: &ProbeConfig) -> Result<ProbeReport> {
    gate(form, kind, cfg)?;
    Ok(midpoint_report(kind, form, cfg, command_echo("midpoint", kind, form, cfg)))
}

/// Second-difference trials along Hermitian directions:
/// `f(C+hΔ) − 2f(C) + f(C−hΔ) ≤ 1e-7 + 1e-5 h² |f(C)|` for each configured `h`.
pub fn probe_second_difference(kind: TargetKind, form: &Form, cfg: &ProbeConfig) -> Result<ProbeReport> {
    gate(form, kind, cfg)?;
    Ok(second_difference_report(kind, form, cfg, command_echo("second_difference", kind, form, cfg)))
}

/// Recomputes `(lhs, rhs)` of a recorded violation from its trial seed.
pub fn replay_violation(
    kind: TargetKind,
    form: &Form,
    cfg: &ProbeConfig,
    record: &ViolationRecord,
) -> Result<(f64, f64)> {
    match record.check.as_str() {
        "midpoint" => MidpointInstance::generate(kind, cfg, record.trial_seed)?.sides(form),
        "second_difference" => {
            let h = record.step.ok_or_else(|| Error::invalid("second-difference record without a step"))?;
            let d = SecondDifferenceInstance::generate(kind, cfg, record.trial_seed)?.differences(form, &[h])?;
            Ok((d[0].1, 0.0))
        }
        other => Err(Error::invalid(format!("cannot replay a `{other}` record"))),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConjectureReport {
    pub tool_version: String,
    pub k: usize,
    pub n: usize,
    pub target: TargetKind,
    pub seed: u64,
    pub midpoint: ProbeReport,
    pub second_difference: ProbeReport,
}

impl ConjectureReport {
    pub fn confirmed_violations(&self) -> u64 {
        self.midpoint.confirmed_violations + self.second_difference.confirmed_violations
    }

    pub fn exit_code(&self) -> i32 {
        match (self.midpoint.exit_code(), self.second_difference.exit_code()) {
            (1, _) | (_, 1) => 1,
            (a, b) => a.max(b),
        }
    }
}

/// Probes concavity of `X ↦ φ_k(F(X))` with `φ_k` the sum of the `k`
/// smallest eigenvalues, `1 ≤ k < n`, square targets (`m = n` for lieb),
/// `cfg.trials` midpoint trials and a tenth as many second-difference
/// trials. Every violation is rechecked from its seed at `confirm_tol`.
pub fn conjecture_search(k: usize, n: usize, kind: TargetKind, cfg: &ProbeConfig) -> Result<ConjectureReport> {
    if !(1 <= k && k < n) {
        return Err(Error::invalid(format!("conjecture search needs 1 <= k < n, got k={k}, n={n}")));
    }
    let form = Form::min_sum(k)?;
    let mut cfg = cfg.clone();
    cfg.n = n;
    if kind == TargetKind::Lieb {
        cfg.m = n;
    }
    cfg.validate(kind)?;
    let echo = |mode: &str| format!("conjecture --mode {mode} --target {kind} --k {k} --n {n} --trials {}", cfg.trials);
    let midpoint = midpoint_report(kind, &form, &cfg, echo("midpoint"));
    let mut sd_cfg = cfg.clone();
    sd_cfg.trials = (cfg.trials / 10).max(1);
    let second_difference = second_difference_report(kind, &form, &sd_cfg, echo("second_difference"));
    Ok(ConjectureReport {
        tool_version: TOOL_VERSION.into(),
        k,
        n,
        target: kind,
        seed: cfg.seed,
        midpoint,
        second_difference,
    })
}

/// The step of the reduction chain that failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReductionStep {
    WeakMajorization,
    Witness,
    FormInequality,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReductionFailure {
    pub trial: u64,
    pub trial_seed: u64,
    pub step: ReductionStep,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReductionReport {
    pub tool_version: String,
    pub target: TargetKind,
    pub form: Form,
    pub seed: u64,
    pub triples: u64,
    pub skipped: u64,
    pub weak_majorization_held: u64,
    pub witnesses_held: u64,
    pub form_inequality_held: u64,
    pub failures: Vec<ReductionFailure>,
    /// Smallest `φ(F(C)) − τφ(F(A)) − (1−τ)φ(F(B))` over all triples.
    pub min_final_slack: Option<f64>,
    pub wall_time_ms: u64,
}

impl ReductionReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }
}

/// Outcome of the chain on one triple.
#[derive(Debug, Clone, PartialEq)]
pub struct ReductionTriple {
    pub weak: bool,
    pub witness: Option<bool>,
    pub chain_slacks: Option<[f64; 3]>,
    pub final_slack: f64,
    pub detail: String,
}

const CHAIN_TOL: f64 = 1e-8;

/// Runs the chain on `x = λ(F(C))`, `w = τλ(F(A)) + (1−τ)λ(F(B))`:
/// (i) `−x ≺_w −w`; (ii) `c = bridge(−x, −w)` and `D = ds(c, −w)` satisfy
/// `D(−w) = c` and `−x ≤ c`; (iii) `φ(x) ≥ φ(−c) ≥ φ(w) ≥ τφ(F(A)) + (1−τ)φ(F(B))`.
pub fn reduction_triple(
    form: &Form,
    fa: &PsdMatrix,
    fb: &PsdMatrix,
    fc: &PsdMatrix,
    tau: f64,
) -> Result<ReductionTriple> {
    let x = fc.spectrum().to_vec();
    let w: Vec<f64> = fa.spectrum().iter().zip(fb.spectrum()).map(|(a, b)| tau * a + (1.0 - tau) * b).collect();
    let neg = |v: &[f64]| v.iter().map(|t| -t).collect::<Vec<_>>();
    let (nx, nw) = (neg(&x), neg(&w));
    let convex = tau * form.eval_matrix(fa)? + (1.0 - tau) * form.eval_matrix(fb)?;
    let phi_x = form.eval(&x)?;
    let final_slack = phi_x - convex;

    let v = verdict(&nx, &nw, false)?;
    if !v.weak {
        return Ok(ReductionTriple {
            weak: false,
            witness: None,
            chain_slacks: None,
            final_slack,
            detail: format!("min prefix slack {:e}", v.min_slack()),
        });
    }
    let c = bridge(&nx, &nw)?;
    let d = ds_from_majorization(&c, &nw)?;
    let dw = d.apply(&nw);
    let scale = v.scale;
    let reproduce = dw.iter().zip(&c).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let dominated = nx.iter().zip(&c).map(|(a, b)| a - b).fold(f64::NEG_INFINITY, f64::max);
    let witness = reproduce <= 1e-9 * scale && dominated <= 1e-10 * scale;

    let neg_c: Vec<f64> = c.iter().map(|t| (-t).max(0.0)).collect();
    let (phi_nc, phi_w) = (form.eval(&neg_c)?, form.eval(&w)?);
    let chain = [phi_x - phi_nc, phi_nc - phi_w, phi_w - convex];
    Ok(ReductionTriple {
        weak: true,
        witness: Some(witness),
        chain_slacks: Some(chain),
        final_slack,
        detail: format!("‖D(−w) − c‖ = {reproduce:e}, max(−x − c) = {dominated:e}, chain slacks {chain:?}"),
    })
}

fn chain_holds(chain: &[f64; 3], refs: [f64; 3]) -> bool {
    chain.iter().zip(refs).all(|(s, r)| *s >= -CHAIN_TOL * r.abs().max(1.0))
}

/// Runs [`reduction_triple`] on `cfg.trials` midpoint samples of `kind`.
pub fn reduction_check(kind: TargetKind, form: &Form, cfg: &ProbeConfig) -> Result<ReductionReport> {
    gate(form, kind, cfg)?;
    let start = Instant::now();
    let seeds: Vec<(u64, u64)> = (0..cfg.trials).map(|i| (i, derive_trial_seed(cfg.seed, i))).collect();
    let results: Vec<Result<ReductionTriple>> = seeds
        .par_iter()
        .map(|&(_, seed)| {
            let inst = MidpointInstance::generate(kind, cfg, seed)?;
            let fa = inst.target.eval_matrix(&inst.x)?;
            let fb = inst.target.eval_matrix(&inst.y)?;
            let fc = inst.target.eval_matrix(&inst.mixed()?)?;
            reduction_triple(form, &fa, &fb, &fc, inst.tau)
        })
        .collect();

    let mut report = ReductionReport {
        tool_version: TOOL_VERSION.into(),
        target: kind,
        form: *form,
        seed: cfg.seed,
        triples: 0,
        skipped: 0,
        weak_majorization_held: 0,
        witnesses_held: 0,
        form_inequality_held: 0,
        failures: Vec::new(),
        min_final_slack: None,
        wall_time_ms: 0,
    };
    for ((trial, trial_seed), result) in seeds.into_iter().zip(results) {
        let Ok(t) = result else {
            report.skipped += 1;
            continue;
        };
        report.triples += 1;
        report.min_final_slack = Some(report.min_final_slack.map_or(t.final_slack, |s| s.min(t.final_slack)));
        let mut fail =
            |step| report.failures.push(ReductionFailure { trial, trial_seed, step, detail: t.detail.clone() });
        if !t.weak {
            fail(ReductionStep::WeakMajorization);
            continue;
        }
        report.weak_majorization_held += 1;
        if t.witness == Some(true) {
            report.witnesses_held += 1;
        } else {
            fail(ReductionStep::Witness);
        }
        let chain = t.chain_slacks.expect("set when weak");
        let x_ref = t.final_slack.abs() + chain.iter().map(|c| c.abs()).sum::<f64>();
        if chain_holds(&chain, [x_ref; 3]) && t.final_slack >= -CHAIN_TOL * x_ref.max(1.0) {
            report.form_inequality_held += 1;
        } else {
            fail(ReductionStep::FormInequality);
        }
    }
    report.wall_time_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}
