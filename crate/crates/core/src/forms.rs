//! Symmetric forms `φ: R^n_+ → R_+`, their extension to PSD matrices
//! through the spectrum, and sampling detectors for the defining axioms,
//! the Hölder property and vector concavity.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::hermitian::PsdMatrix;
use crate::sample::{lognormal_vector, random_permutation, rng_from_seed, uniform_vector};
use crate::seed::derive_trial_seed;

/// Upper bound on `C(n, k)` for the subset enumeration behind `gk`.
pub const GK_ENUMERATION_CAP: u64 = 2_000_000;

/// Hölder exponents tried by [`check_hoelder`]; `∞` stands for the
/// max-norm limit `φ(x^p)^{1/p} → max x`.
pub const HOELDER_EXPONENTS: [f64; 4] = [1.25, 2.0, 4.0, f64::INFINITY];

/// The built-in symmetric forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Form {
    /// `Σ x_i`
    Trace,
    /// `e_k(x)^{1/k}`
    KTrace { k: usize },
    /// `Σ_{|S|=k} (∏_{i∈S} x_i)^{1/k}`
    Gk { k: usize },
    /// `(Σ x_i^p)^{1/p}`, `p ∈ (0, 1]`
    Seminorm { p: f64 },
    /// Sum of the `k` smallest entries.
    MinSum { k: usize },
}

impl Form {
    pub fn ktrace(k: usize) -> Result<Self> {
        check_k(k)?;
        Ok(Form::KTrace { k })
    }

    pub fn gk(k: usize) -> Result<Self> {
        check_k(k)?;
        Ok(Form::Gk { k })
    }

    pub fn seminorm(p: f64) -> Result<Self> {
        if !(p > 0.0 && p <= 1.0) {
            return Err(Error::invalid(format!("seminorm exponent must lie in (0, 1], got {p}")));
        }
        Ok(Form::Seminorm { p })
    }

    pub fn min_sum(k: usize) -> Result<Self> {
        check_k(k)?;
        Ok(Form::MinSum { k })
    }

    /// Smallest dimension the form is defined in.
    pub fn min_dim(&self) -> usize {
        self.order().unwrap_or(1)
    }

    fn order(&self) -> Option<usize> {
        match *self {
            Form::KTrace { k } | Form::Gk { k } | Form::MinSum { k } => Some(k),
            _ => None,
        }
    }

    /// Whether the form is Hölder in dimension `n`.
    ///
    /// `MinSum { k }` is concave for every `k` but Hölder only when `k = n`,
    /// where it coincides with the trace.
    pub fn is_hoelder_in(&self, n: usize) -> bool {
        match *self {
            Form::MinSum { k } => k == n,
            _ => true,
        }
    }

    /// Hölder in every dimension it is defined for.
    pub fn is_hoelder(&self) -> bool {
        !matches!(self, Form::MinSum { .. })
    }

    pub fn is_concave(&self) -> bool {
        true
    }

    /// Evaluates the form on a nonnegative vector.
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        validate_spectrum(x)?;
        let n = x.len();
        if let Some(k) = self.order() {
            if k > n {
                return Err(Error::invalid(format!("form order k={k} exceeds dimension n={n}")));
            }
        }
        let value = match *self {
            Form::Trace => x.iter().sum(),
            Form::KTrace { k } => esp(x, k)?.powf(1.0 / k as f64),
            Form::Gk { k } => gk(x, k)?,
            Form::Seminorm { p } => {
                if p == 1.0 {
                    x.iter().sum()
                } else {
                    let s: f64 = x.iter().map(|v| v.powf(p)).sum();
                    s.powf(1.0 / p)
                }
            }
            Form::MinSum { k } => {
                let mut sorted = x.to_vec();
                sorted.sort_by(f64::total_cmp);
                sorted[..k].iter().sum()
            }
        };
        if value.is_finite() {
            Ok(value)
        } else {
            Err(Error::NumericalFailure(format!("{self} overflowed on a spectrum with max {:e}", max_entry(x))))
        }
    }

    /// `φ(A) = φ(λ(A))`.
    pub fn eval_matrix(&self, a: &PsdMatrix) -> Result<f64> {
        self.eval(a.spectrum())
    }
}

fn check_k(k: usize) -> Result<()> {
    if k == 0 {
        Err(Error::invalid("form order k must be at least 1"))
    } else {
        Ok(())
    }
}

fn max_entry(x: &[f64]) -> f64 {
    x.iter().cloned().fold(0.0, f64::max)
}

fn validate_spectrum(x: &[f64]) -> Result<()> {
    if x.is_empty() {
        return Err(Error::invalid("empty spectrum vector"));
    }
    if let Some(v) = x.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
        return Err(Error::invalid(format!("spectrum entries must be finite and nonnegative, got {v}")));
    }
    Ok(())
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Form::Trace => "trace".to_string(),
            Form::KTrace { k } => format!("ktrace:k={k}"),
            Form::Gk { k } => format!("gk:k={k}"),
            Form::Seminorm { p } => format!("seminorm:p={p}"),
            Form::MinSum { k } => format!("minsum:k={k}"),
        };
        f.pad(&name)
    }
}

impl FromStr for Form {
    type Err = Error;

    /// Grammar: `trace | ktrace:k=K | gk:k=K | seminorm:p=P | minsum:k=K`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, arg) = match s.split_once(':') {
            Some((name, arg)) => (name, Some(arg)),
            None => (s, None),
        };
        let param = |key: &str| -> Result<&str> {
            let arg = arg.ok_or_else(|| Error::invalid(format!("form `{name}` needs `{key}=...`")))?;
            match arg.split_once('=') {
                Some((k, v)) if k.trim() == key => Ok(v.trim()),
                _ => Err(Error::invalid(format!("form `{name}` expects `{key}=...`, got `{arg}`"))),
            }
        };
        let int = |key: &str| -> Result<usize> {
            let v = param(key)?;
            v.parse().map_err(|_| Error::invalid(format!("`{v}` is not a positive integer")))
        };
        match name {
            "trace" if arg.is_none() => Ok(Form::Trace),
            "ktrace" => Form::ktrace(int("k")?),
            "gk" => Form::gk(int("k")?),
            "minsum" | "sum_k_smallest" => Form::min_sum(int("k")?),
            "seminorm" => {
                let v = param("p")?;
                Form::seminorm(v.parse().map_err(|_| Error::invalid(format!("`{v}` is not a number")))?)
            }
            _ => Err(Error::invalid(format!("unknown form `{s}`"))),
        }
    }
}

impl Serialize for Form {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Form {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Elementary symmetric polynomial `e_k(x)` by the prefix recurrence
/// `e_j ← e_j + x_m e_{j-1}`; no cancellation for nonnegative input.
pub fn esp(x: &[f64], k: usize) -> Result<f64> {
    let n = x.len();
    if k == 0 || k > n {
        return Err(Error::invalid(format!("esp order k={k} must lie in [1, {n}]")));
    }
    let mut e = vec![0.0; k + 1];
    e[0] = 1.0;
    for (m, &xm) in x.iter().enumerate() {
        for j in (1..=k.min(m + 1)).rev() {
            e[j] += xm * e[j - 1];
        }
    }
    Ok(e[k])
}

pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Calls `f` on every `k`-subset of `0..n`, in lexicographic order.
pub fn for_each_subset<F: FnMut(&[usize])>(n: usize, k: usize, mut f: F) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        if idx[i] == i + n - k {
            return;
        }
        idx[i] += 1;
        for j in (i + 1)..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn gk(x: &[f64], k: usize) -> Result<f64> {
    let count = binomial(x.len(), k);
    if count > GK_ENUMERATION_CAP {
        return Err(Error::ResourceLimit(format!(
            "gk enumeration needs C({}, {k}) = {count} subsets, cap is {GK_ENUMERATION_CAP}",
            x.len()
        )));
    }
    let inv = 1.0 / k as f64;
    let mut total = 0.0;
    for_each_subset(x.len(), k, |s| {
        let prod: f64 = s.iter().map(|&i| x[i]).product();
        total += prod.powf(inv);
    });
    Ok(total)
}

/// `(φ(xy), φ(x^p)^{1/p} φ(y^q)^{1/q})` with `1/p + 1/q = 1`; `p = ∞` uses
/// `max(x) · φ(y)`.
pub fn hoelder_sides(form: &Form, x: &[f64], y: &[f64], p: f64) -> Result<(f64, f64)> {
    if x.len() != y.len() {
        return Err(Error::invalid("Hölder sides need equal-length vectors"));
    }
    if p.is_nan() || p < 1.0 {
        return Err(Error::invalid(format!("Hölder exponent must be >= 1, got {p}")));
    }
    let xy: Vec<f64> = x.iter().zip(y).map(|(a, b)| a * b).collect();
    let lhs = form.eval(&xy)?;
    let rhs = if p.is_infinite() {
        x.iter().cloned().fold(0.0, f64::max) * form.eval(y)?
    } else if p == 1.0 {
        form.eval(x)? * y.iter().cloned().fold(0.0, f64::max)
    } else {
        let q = p / (p - 1.0);
        let xp: Vec<f64> = x.iter().map(|v| v.powf(p)).collect();
        let yq: Vec<f64> = y.iter().map(|v| v.powf(q)).collect();
        form.eval(&xp)?.powf(1.0 / p) * form.eval(&yq)?.powf(1.0 / q)
    };
    Ok((lhs, rhs))
}

/// Outcome of one property detector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    NotChecked,
    Pass,
    Fail { witness: Witness },
}

impl Verdict {
    pub fn passed(&self) -> bool {
        matches!(self, Verdict::Pass)
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::Fail { witness } => Some(witness),
            _ => None,
        }
    }
}

/// The property a [`Witness`] violates, with the scalar parameter it used.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "test", rename_all = "snake_case")]
pub enum PropertyTest {
    Homogeneity {
        t: f64,
    },
    Monotonicity,
    StrictMonotonicity,
    Symmetry,
    /// Midpoint convexity of `φ∘exp`; `x`, `y` are the log-domain points.
    ExpConvexity,
    Hoelder {
        p: f64,
    },
    Concavity {
        tau: f64,
    },
}

/// A concrete counterexample: inputs plus the two sides of the violated
/// relation, oriented so a violation means `lhs > rhs + tol`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub test: PropertyTest,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub lhs: f64,
    pub rhs: f64,
    pub trial: u64,
}

impl Witness {
    /// Recomputes `(lhs, rhs)` from the stored inputs.
    pub fn reevaluate(&self, form: &Form) -> Result<(f64, f64)> {
        let (x, y) = (&self.x, &self.y);
        match self.test {
            PropertyTest::Homogeneity { t } => {
                let tx: Vec<f64> = x.iter().map(|v| t * v).collect();
                let a = form.eval(&tx)?;
                let b = t * form.eval(x)?;
                Ok((a.max(b), a.min(b)))
            }
            PropertyTest::Monotonicity => Ok((form.eval(y)?, form.eval(x)?)),
            PropertyTest::StrictMonotonicity => Ok((form.eval(y)?, form.eval(x)?)),
            PropertyTest::Symmetry => {
                let a = form.eval(x)?;
                let b = form.eval(y)?;
                Ok((a.max(b), a.min(b)))
            }
            PropertyTest::ExpConvexity => {
                let mid: Vec<f64> = x.iter().zip(y).map(|(u, v)| (0.5 * (u + v)).exp()).collect();
                let ex: Vec<f64> = x.iter().map(|u| u.exp()).collect();
                let ey: Vec<f64> = y.iter().map(|u| u.exp()).collect();
                Ok((form.eval(&mid)?, 0.5 * (form.eval(&ex)? + form.eval(&ey)?)))
            }
            PropertyTest::Hoelder { p } => hoelder_sides(form, x, y, p),
            PropertyTest::Concavity { tau } => {
                let mix: Vec<f64> = x.iter().zip(y).map(|(a, b)| tau * a + (1.0 - tau) * b).collect();
                Ok((tau * form.eval(x)? + (1.0 - tau) * form.eval(y)?, form.eval(&mix)?))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FormPropertyReport {
    pub form: Form,
    pub n: usize,
    pub trials: u64,
    pub seed: u64,
    pub axioms: Verdict,
    pub hoelder: Verdict,
    pub concavity: Verdict,
}

impl FormPropertyReport {
    fn new(form: &Form, n: usize, trials: u64, seed: u64) -> Self {
        Self {
            form: *form,
            n,
            trials,
            seed,
            axioms: Verdict::NotChecked,
            hoelder: Verdict::NotChecked,
            concavity: Verdict::NotChecked,
        }
    }

    pub fn axioms_pass(&self) -> bool {
        self.axioms.passed()
    }

    /// True when no checked property failed.
    pub fn all_passed(&self) -> bool {
        [&self.axioms, &self.hoelder, &self.concavity].iter().all(|v| !matches!(v, Verdict::Fail { .. }))
    }
}

fn inequality_tol(rhs: f64) -> f64 {
    1e-9 + 1e-8 * rhs.abs()
}

fn validate_trials(n: usize, trials: u64) -> Result<()> {
    if n == 0 || trials == 0 {
        return Err(Error::invalid("n and trials must be at least 1"));
    }
    Ok(())
}

/// Samples the homogeneity, monotonicity and symmetry axioms and reports the
/// first violation.
pub fn check_axioms(form: &Form, n: usize, trials: u64, seed: u64) -> Result<FormPropertyReport> {
    validate_trials(n, trials)?;
    let mut report = FormPropertyReport::new(form, n, trials, seed);
    for trial in 0..trials {
        let mut rng = rng_from_seed(derive_trial_seed(seed, trial));
        if let Some(w) = axiom_trial(form, n, trial, &mut rng)? {
            report.axioms = Verdict::Fail { witness: w };
            return Ok(report);
        }
    }
    report.axioms = Verdict::Pass;
    Ok(report)
}

fn sparse_uniform<R: Rng>(rng: &mut R, n: usize, hi: f64) -> Vec<f64> {
    let mut v = uniform_vector(rng, n, 0.0, hi);
    // zeros exercise the boundary of the cone
    for x in &mut v {
        if rng.random_bool(0.15) {
            *x = 0.0;
        }
    }
    v
}

fn axiom_trial<R: Rng>(form: &Form, n: usize, trial: u64, rng: &mut R) -> Result<Option<Witness>> {
    let x = sparse_uniform(rng, n, 5.0);
    let fx = form.eval(&x)?;

    // homogeneity, t = 0 on the first trial
    let t = if trial == 0 { 0.0 } else { rng.random_range(0.0..5.0) };
    let tx: Vec<f64> = x.iter().map(|v| t * v).collect();
    let ftx = form.eval(&tx)?;
    if (ftx - t * fx).abs() > 1e-10 * (t * fx).abs() + 1e-12 {
        return Ok(Some(Witness {
            test: PropertyTest::Homogeneity { t },
            lhs: ftx.max(t * fx),
            rhs: ftx.min(t * fx),
            x,
            y: tx,
            trial,
        }));
    }

    // monotonicity: x ≥ y
    let y = sparse_uniform(rng, n, 5.0);
    let strict = rng.random_bool(0.5);
    let d: Vec<f64> = if strict { uniform_vector(rng, n, 1e-3, 1.0) } else { sparse_uniform(rng, n, 1.0) };
    let xs: Vec<f64> = y.iter().zip(&d).map(|(a, b)| a + b).collect();
    let (fxs, fy) = (form.eval(&xs)?, form.eval(&y)?);
    if fy > fxs + 1e-12 * fxs.abs() {
        return Ok(Some(Witness { test: PropertyTest::Monotonicity, lhs: fy, rhs: fxs, x: xs, y, trial }));
    }
    let min_gap = d.iter().cloned().fold(f64::INFINITY, f64::min);
    if min_gap >= 1e-3 && fy >= fxs {
        return Ok(Some(Witness { test: PropertyTest::StrictMonotonicity, lhs: fy, rhs: fxs, x: xs, y, trial }));
    }

    // symmetry
    let perm = random_permutation(rng, n);
    let px: Vec<f64> = perm.iter().map(|&i| x[i]).collect();
    let fpx = form.eval(&px)?;
    if (fpx - fx).abs() > 1e-12 * fx.abs() + 1e-14 {
        return Ok(Some(Witness { test: PropertyTest::Symmetry, lhs: fpx.max(fx), rhs: fpx.min(fx), x, y: px, trial }));
    }
    Ok(None)
}

/// Two detectors, both run each trial: midpoint convexity of `φ∘exp`, and the
/// direct Hölder inequality over [`HOELDER_EXPONENTS`].
pub fn check_hoelder(form: &Form, n: usize, trials: u64, seed: u64) -> Result<FormPropertyReport> {
    validate_trials(n, trials)?;
    let mut report = FormPropertyReport::new(form, n, trials, seed);
    for trial in 0..trials {
        let mut rng = rng_from_seed(derive_trial_seed(seed, trial));

        let u = uniform_vector(&mut rng, n, -3.0, 3.0);
        let v = uniform_vector(&mut rng, n, -3.0, 3.0);
        let mut w = Witness { test: PropertyTest::ExpConvexity, x: u, y: v, lhs: 0.0, rhs: 0.0, trial };
        let (lhs, rhs) = w.reevaluate(form)?;
        if lhs > rhs + inequality_tol(rhs) {
            w.lhs = lhs;
            w.rhs = rhs;
            report.hoelder = Verdict::Fail { witness: w };
            return Ok(report);
        }

        let x = lognormal_vector(&mut rng, n, 1.5);
        let y = lognormal_vector(&mut rng, n, 1.5);
        for p in HOELDER_EXPONENTS {
            let (lhs, rhs) = hoelder_sides(form, &x, &y, p)?;
            if lhs > rhs + inequality_tol(rhs) {
                report.hoelder =
                    Verdict::Fail { witness: Witness { test: PropertyTest::Hoelder { p }, x, y, lhs, rhs, trial } };
                return Ok(report);
            }
        }
    }
    report.hoelder = Verdict::Pass;
    Ok(report)
}

/// Midpoint (even trials) and random-`τ` (odd trials) concavity on sampled
/// nonnegative vectors; a violation needs `lhs > rhs + 1e-9 + 1e-8|lhs|`
/// with `lhs = τφ(x) + (1-τ)φ(y)` and `rhs = φ(τx + (1-τ)y)`.
pub fn check_concavity_vector(form: &Form, n: usize, trials: u64, seed: u64) -> Result<FormPropertyReport> {
    validate_trials(n, trials)?;
    let mut report = FormPropertyReport::new(form, n, trials, seed);
    for trial in 0..trials {
        let mut rng = rng_from_seed(derive_trial_seed(seed, trial));
        let x = sparse_uniform(&mut rng, n, 5.0);
        let y = sparse_uniform(&mut rng, n, 5.0);
        let tau = if trial % 2 == 0 { 0.5 } else { rng.random_range(0.0..=1.0) };
        let mut w = Witness { test: PropertyTest::Concavity { tau }, x, y, lhs: 0.0, rhs: 0.0, trial };
        let (lhs, rhs) = w.reevaluate(form)?;
        if lhs > rhs + inequality_tol(lhs) {
            w.lhs = lhs;
            w.rhs = rhs;
            report.concavity = Verdict::Fail { witness: w };
            return Ok(report);
        }
    }
    report.concavity = Verdict::Pass;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian::{HermitianMatrix, PsdMatrix};
    use crate::sample::{random_psd, random_unitary};

    fn brute_esp(x: &[f64], k: usize) -> f64 {
        let mut total = 0.0;
        for mask in 0u32..(1 << x.len()) {
            if mask.count_ones() as usize == k {
                total += (0..x.len()).filter(|i| mask >> i & 1 == 1).map(|i| x[i]).product::<f64>();
            }
        }
        total
    }

    #[test]
    fn esp_examples() {
        assert_eq!(esp(&[1.0, 2.0, 3.0], 2).unwrap(), 11.0);
        assert_eq!(esp(&[1.0; 7], 3).unwrap(), 35.0);
        let x = [0.5, 2.0, 3.0, 1.5];
        assert!((esp(&x, 4).unwrap() - 4.5).abs() < 1e-15);
        assert!(esp(&x, 0).is_err());
        assert!(esp(&x, 5).is_err());
    }

    #[test]
    fn esp_matches_enumeration() {
        let mut rng = rng_from_seed(3);
        for n in 1..=12 {
            let x = uniform_vector(&mut rng, n, 0.0, 3.0);
            for k in 1..=n {
                let a = esp(&x, k).unwrap();
                let b = brute_esp(&x, k);
                assert!((a - b).abs() <= 1e-12 * b.abs().max(1e-300), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn form_examples() {
        for n in 1..=8 {
            for k in 1..=n {
                let v = Form::KTrace { k }.eval(&vec![1.0; n]).unwrap();
                let expect = (binomial(n, k) as f64).powf(1.0 / k as f64);
                assert!((v - expect).abs() < 1e-12 * expect);
            }
        }
        assert!((Form::Seminorm { p: 0.5 }.eval(&[1.0, 4.0]).unwrap() - 9.0).abs() < 1e-14);
        assert!((Form::Gk { k: 2 }.eval(&[1.0, 4.0, 9.0]).unwrap() - 11.0).abs() < 1e-14);
        assert_eq!(Form::MinSum { k: 2 }.eval(&[5.0, 1.0, 3.0]).unwrap(), 4.0);
        assert!(Form::KTrace { k: 4 }.eval(&[1.0, 2.0]).is_err());
        assert!(Form::Trace.eval(&[1.0, -1.0]).is_err());
    }

    #[test]
    fn gk_cap_enforced() {
        let x = vec![1.0; 30];
        assert!(matches!(Form::Gk { k: 15 }.eval(&x), Err(Error::ResourceLimit(_))));
    }

    #[test]
    fn parse_round_trip() {
        for s in ["trace", "ktrace:k=2", "gk:k=3", "seminorm:p=0.5", "minsum:k=1"] {
            let f: Form = s.parse().unwrap();
            assert_eq!(f.to_string(), s);
        }
        for bad in ["ktrace", "ktrace:k=0", "seminorm:p=1.5", "seminorm:k=2", "foo", "trace:k=1"] {
            assert!(bad.parse::<Form>().is_err(), "{bad}");
        }
    }

    #[test]
    fn matrix_extension() {
        let a = PsdMatrix::from_real_diagonal(&[1.0, 2.0, 3.0]).unwrap();
        assert!((Form::Trace.eval_matrix(&a).unwrap() - 6.0).abs() < 1e-14);
        assert!((Form::KTrace { k: 2 }.eval_matrix(&a).unwrap() - 11f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn unitary_invariance() {
        let mut rng = rng_from_seed(17);
        let forms =
            [Form::Trace, Form::KTrace { k: 2 }, Form::Gk { k: 3 }, Form::Seminorm { p: 0.4 }, Form::MinSum { k: 2 }];
        for _ in 0..20 {
            let a = random_psd(&mut rng, 5, 1.0);
            let u = random_unitary(&mut rng, 5);
            let b = PsdMatrix::new(a.hermitian().congruence(&u).unwrap()).unwrap();
            for f in &forms {
                let (x, y) = (f.eval_matrix(&a).unwrap(), f.eval_matrix(&b).unwrap());
                assert!((x - y).abs() <= 1e-9 * x.max(1.0), "{f}");
            }
        }
        let _ = HermitianMatrix::identity(1);
    }

    #[test]
    fn homogeneity_fixed_scalars() {
        let x = [0.3, 2.0, 1.1, 4.0];
        for f in
            [Form::Trace, Form::KTrace { k: 3 }, Form::Gk { k: 2 }, Form::Seminorm { p: 0.5 }, Form::MinSum { k: 2 }]
        {
            let fx = f.eval(&x).unwrap();
            for t in [0.0, 0.5, 3.0] {
                let tx: Vec<f64> = x.iter().map(|v| t * v).collect();
                assert!((f.eval(&tx).unwrap() - t * fx).abs() <= 1e-10 * (t * fx).max(1e-300) + 1e-300);
            }
        }
    }

    #[test]
    fn axioms_pass_for_builtins() {
        let r = check_axioms(&Form::KTrace { k: 2 }, 4, 1000, 1).unwrap();
        assert!(r.axioms_pass());
        for f in [Form::Trace, Form::Gk { k: 2 }, Form::Seminorm { p: 0.5 }, Form::MinSum { k: 2 }] {
            assert!(check_axioms(&f, 5, 300, 2).unwrap().axioms_pass(), "{f}");
        }
        assert_eq!(Form::Seminorm { p: 0.5 }.eval(&[0.0, 0.0]).unwrap(), 0.0);
    }

    #[test]
    fn min_is_symmetric_under_all_permutations() {
        let f = Form::MinSum { k: 1 };
        let x = [3.0, 1.0, 2.0];
        let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        for p in perms {
            let px: Vec<f64> = p.iter().map(|&i| x[i]).collect();
            assert_eq!(f.eval(&px).unwrap(), 1.0);
        }
    }

    #[test]
    fn hoelder_verdicts() {
        for k in 1..=4 {
            assert!(check_hoelder(&Form::KTrace { k }, 6, 300, 4).unwrap().hoelder.passed());
        }
        for f in [Form::Trace, Form::Gk { k: 2 }, Form::Seminorm { p: 0.3 }, Form::MinSum { k: 4 }] {
            assert!(check_hoelder(&f, 4, 300, 5).unwrap().hoelder.passed(), "{f}");
        }
        for (k, n) in [(1, 2), (1, 3), (2, 3), (3, 4)] {
            let r = check_hoelder(&Form::MinSum { k }, n, 300, 6).unwrap();
            let w = r.hoelder.witness().expect("minsum with k < n is not Hölder");
            let (lhs, rhs) = w.reevaluate(&Form::MinSum { k }).unwrap();
            assert!(lhs > rhs + inequality_tol(rhs));
        }
    }

    #[test]
    fn explicit_min_witness() {
        let (lhs, rhs) = hoelder_sides(&Form::MinSum { k: 1 }, &[1.0, 10.0], &[10.0, 1.0], 2.0).unwrap();
        assert_eq!(lhs, 10.0);
        assert!((rhs - 1.0).abs() < 1e-15);
    }

    #[test]
    fn trace_hoelder_at_constant_vectors() {
        for p in HOELDER_EXPONENTS {
            let (lhs, rhs) = hoelder_sides(&Form::Trace, &[1.0; 4], &[1.0; 4], p).unwrap();
            assert!(lhs <= rhs + 1e-12, "p={p}");
        }
    }

    #[test]
    fn concavity_vector_verdicts() {
        assert!(check_concavity_vector(&Form::KTrace { k: 2 }, 5, 1000, 7).unwrap().concavity.passed());
        for k in 1..4 {
            assert!(check_concavity_vector(&Form::MinSum { k }, 4, 500, 8).unwrap().concavity.passed());
        }
        let mut rng = rng_from_seed(9);
        for _ in 0..100 {
            let x = uniform_vector(&mut rng, 4, 0.0, 2.0);
            let y = uniform_vector(&mut rng, 4, 0.0, 2.0);
            let w = Witness { test: PropertyTest::Concavity { tau: 0.3 }, x, y, lhs: 0.0, rhs: 0.0, trial: 0 };
            let (l, r) = w.reevaluate(&Form::Trace).unwrap();
            assert!((l - r).abs() < 1e-12);
        }
    }

    #[test]
    fn subsets_lexicographic() {
        let mut out = vec![];
        for_each_subset(4, 2, |s| out.push(s.to_vec()));
        assert_eq!(out, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        let mut count = 0;
        for_each_subset(5, 5, |_| count += 1);
        assert_eq!(count, 1);
        for_each_subset(6, 1, |_| count += 1);
        assert_eq!(count, 7);
    }
}
