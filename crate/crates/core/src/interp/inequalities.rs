//! Named trace inequalities with seeded samplers and a trial runner.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;
use std::time::Instant;

use rand::Rng;

use super::quadrature::{unit_interval_rule, BetaRule, QuadratureSpec};
use super::{t_op, IneqResult};
use crate::error::{Error, Result};
use crate::forms::{hoelder_sides, Form};
use crate::hermitian::{
    abs_power_spectrum, inverse, max_abs, max_abs_diff, ComplexMatrix, EigenDecomposition, HermitianMatrix, PsdMatrix,
    C64,
};
use crate::majorization::product_singular_values;
use crate::report::{run_trials, Digest, ProbeReport, TrialOutcome, ViolationRecord};
use crate::sample::{random_hermitian, random_psd, rng_from_seed, uniform_vector};

/// Inputs of [`Inequality::LieProduct`] are sampled at this scale so the
/// last step of the sequence reaches its threshold.
pub const LIE_PRODUCT_SCALE: f64 = 0.25;
/// Largest admissible final error of the Lie product sequence.
pub const LIE_PRODUCT_TOL: f64 = 1e-4;
/// Agreement required between the two sides of the `T` identity.
pub const T_IDENTITY_TOL: f64 = 1e-6;

const LIE_STEPS: u32 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Inequality {
    MatrixHoelder,
    Alt,
    Gt,
    ExpConvex,
    MultiGt,
    TIdentity,
    ThreeMatrix,
    LieProduct,
}

impl Inequality {
    pub const ALL: [Inequality; 8] = [
        Inequality::MatrixHoelder,
        Inequality::Alt,
        Inequality::Gt,
        Inequality::ExpConvex,
        Inequality::MultiGt,
        Inequality::TIdentity,
        Inequality::ThreeMatrix,
        Inequality::LieProduct,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Inequality::MatrixHoelder => "matrix_hoelder",
            Inequality::Alt => "alt",
            Inequality::Gt => "gt",
            Inequality::ExpConvex => "exp_convex",
            Inequality::MultiGt => "multi_gt",
            Inequality::TIdentity => "t_identity",
            Inequality::ThreeMatrix => "three_matrix",
            Inequality::LieProduct => "lie_product",
        }
    }

    /// Whether the statement needs a Hölder form.
    pub fn needs_hoelder(self) -> bool {
        !matches!(self, Inequality::TIdentity | Inequality::LieProduct)
    }
}

impl std::fmt::Display for Inequality {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.pad(self.name())
    }
}

impl std::str::FromStr for Inequality {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Inequality::ALL
            .into_iter()
            .find(|i| i.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown inequality `{s}`")))
    }
}

/// Inputs of one inequality instance.
#[derive(Debug, Clone)]
pub enum IneqInput {
    /// `φ(|AB|) ≤ φ(A^p)^{1/p} φ(B^q)^{1/q}`, `p ∈ [1, ∞]`.
    MatrixHoelder { a: PsdMatrix, b: PsdMatrix, p: f64 },
    /// `t ↦ φ[(B^{t/2} A^t B^{t/2})^{1/t}]` nondecreasing along `exponents`.
    Alt { a: PsdMatrix, b: PsdMatrix, exponents: Vec<f64> },
    /// `φ(exp(A + B)) ≤ φ(|e^A e^B|)`.
    Gt { a: HermitianMatrix, b: HermitianMatrix },
    /// `φ(exp(τA + (1−τ)B)) ≤ τ φ(e^A) + (1−τ) φ(e^B)`.
    ExpConvex { a: HermitianMatrix, b: HermitianMatrix, tau: f64 },
    /// `log φ(exp(Σ A_j)^p) ≤ ∫ β_0(t) log φ(|∏ exp((1+it)A_j)|^p) dt`.
    MultiGt { mats: Vec<HermitianMatrix>, p: f64 },
    /// `∫_0^∞ (A^{−1}+t)^{−1} B (A^{−1}+t)^{−1} dt = ∫ β_0(t) A^{(1+it)/2} B A^{(1−it)/2} dt`.
    TIdentity { a: PsdMatrix, b: HermitianMatrix },
    /// `φ(exp(A_1+A_2+A_3)) ≤ φ(exp(A_1) T_{exp(−A_2)}[exp(A_3)])`.
    ThreeMatrix { a1: HermitianMatrix, a2: HermitianMatrix, a3: HermitianMatrix },
    /// Convergence of `(e^{tB/2} e^{tA} e^{tB/2})^{1/t}` to `e^{A+B}`.
    LieProduct { a: HermitianMatrix, b: HermitianMatrix },
}

impl IneqInput {
    pub fn kind(&self) -> Inequality {
        match self {
            IneqInput::MatrixHoelder { .. } => Inequality::MatrixHoelder,
            IneqInput::Alt { .. } => Inequality::Alt,
            IneqInput::Gt { .. } => Inequality::Gt,
            IneqInput::ExpConvex { .. } => Inequality::ExpConvex,
            IneqInput::MultiGt { .. } => Inequality::MultiGt,
            IneqInput::TIdentity { .. } => Inequality::TIdentity,
            IneqInput::ThreeMatrix { .. } => Inequality::ThreeMatrix,
            IneqInput::LieProduct { .. } => Inequality::LieProduct,
        }
    }

    fn matrices(&self) -> Vec<&ComplexMatrix> {
        match self {
            IneqInput::MatrixHoelder { a, b, .. } | IneqInput::Alt { a, b, .. } => vec![a.as_matrix(), b.as_matrix()],
            IneqInput::Gt { a, b } | IneqInput::ExpConvex { a, b, .. } | IneqInput::LieProduct { a, b } => {
                vec![a.as_matrix(), b.as_matrix()]
            }
            IneqInput::MultiGt { mats, .. } => mats.iter().map(HermitianMatrix::as_matrix).collect(),
            IneqInput::TIdentity { a, b } => vec![a.as_matrix(), b.as_matrix()],
            IneqInput::ThreeMatrix { a1, a2, a3 } => vec![a1.as_matrix(), a2.as_matrix(), a3.as_matrix()],
        }
    }

    pub fn dim(&self) -> usize {
        self.matrices().first().map_or(0, |m| m.nrows())
    }

    /// Scalar parameters, for reports.
    pub fn params(&self) -> BTreeMap<String, f64> {
        let mut out = BTreeMap::new();
        out.insert("n".to_string(), self.dim() as f64);
        match self {
            IneqInput::MatrixHoelder { p, .. } => {
                out.insert("p".into(), *p);
            }
            IneqInput::Alt { exponents, .. } => {
                for (i, t) in exponents.iter().enumerate() {
                    out.insert(format!("t{i}"), *t);
                }
            }
            IneqInput::ExpConvex { tau, .. } => {
                out.insert("tau".into(), *tau);
            }
            IneqInput::MultiGt { mats, p } => {
                out.insert("m".into(), mats.len() as f64);
                out.insert("p".into(), *p);
            }
            _ => {}
        }
        out
    }

    pub fn digest(&self) -> String {
        let mut d = Digest::new();
        for m in self.matrices() {
            d = d.matrix(m);
        }
        for v in self.params().values() {
            d = d.scalar(*v);
        }
        d.finish()
    }

    fn validate(&self) -> Result<()> {
        let mats = self.matrices();
        let Some(n) = mats.first().map(|m| m.nrows()) else {
            return Err(Error::invalid(format!("{}: needs at least one matrix", self.kind())));
        };
        if mats.iter().any(|m| m.shape() != (n, n)) {
            return Err(Error::invalid(format!("{}: inputs must share one dimension", self.kind())));
        }
        match self {
            IneqInput::MatrixHoelder { p, .. } if p.is_nan() || *p < 1.0 => {
                Err(Error::invalid(format!("matrix_hoelder: exponent p must be >= 1, got {p}")))
            }
            IneqInput::Alt { exponents, .. } => {
                if exponents.len() < 2 {
                    return Err(Error::invalid("alt: needs at least two exponents"));
                }
                if exponents.iter().any(|t| !t.is_finite() || *t <= 0.0) {
                    return Err(Error::invalid("alt: exponents must be positive and finite"));
                }
                if exponents.windows(2).any(|w| w[1] < w[0]) {
                    return Err(Error::invalid("alt: exponents must be sorted ascending"));
                }
                Ok(())
            }
            IneqInput::ExpConvex { tau, .. } if !(0.0..=1.0).contains(tau) => {
                Err(Error::invalid(format!("exp_convex: τ must lie in [0, 1], got {tau}")))
            }
            IneqInput::MultiGt { mats, p } => {
                if mats.is_empty() {
                    Err(Error::invalid("multi_gt: needs at least one matrix"))
                } else if !p.is_finite() || *p <= 0.0 {
                    Err(Error::invalid(format!("multi_gt: p must be positive, got {p}")))
                } else {
                    Ok(())
                }
            }
            IneqInput::TIdentity { a, .. } if !a.is_positive_definite() => {
                Err(Error::invalid("t_identity: A must be positive definite"))
            }
            _ => Ok(()),
        }
    }
}

/// Draws inputs for `ineq` in dimension `n`: PSD factors from
/// `random_psd`, Hermitian ones from `random_hermitian`, both at scale 1
/// except for lie_product. multi_gt uses three factors and `p = 2`.
pub fn sample_input<R: Rng>(ineq: Inequality, n: usize, rng: &mut R) -> IneqInput {
    match ineq {
        Inequality::MatrixHoelder => {
            let (a, b) = (random_psd(rng, n, 1.0), random_psd(rng, n, 1.0));
            let p = match rng.random_range(0..5) {
                0 => f64::INFINITY,
                1 => 1.0,
                _ => rng.random_range(1.05..6.0),
            };
            IneqInput::MatrixHoelder { a, b, p }
        }
        Inequality::Alt => {
            let (a, b) = (random_psd(rng, n, 1.0), random_psd(rng, n, 1.0));
            // a chain of three exponents in (0, 1] and one beyond
            let mut exponents = uniform_vector(rng, 3, 0.05, 1.0);
            exponents.push(rng.random_range(1.0..2.0));
            exponents.sort_by(f64::total_cmp);
            IneqInput::Alt { a, b, exponents }
        }
        Inequality::Gt => IneqInput::Gt { a: random_hermitian(rng, n, 1.0), b: random_hermitian(rng, n, 1.0) },
        Inequality::ExpConvex => {
            let (a, b) = (random_hermitian(rng, n, 1.0), random_hermitian(rng, n, 1.0));
            IneqInput::ExpConvex { a, b, tau: rng.random_range(0.0..1.0) }
        }
        Inequality::MultiGt => {
            IneqInput::MultiGt { mats: (0..3).map(|_| random_hermitian(rng, n, 1.0)).collect(), p: 2.0 }
        }
        Inequality::TIdentity => IneqInput::TIdentity { a: random_psd(rng, n, 1.0), b: random_hermitian(rng, n, 1.0) },
        Inequality::ThreeMatrix => IneqInput::ThreeMatrix {
            a1: random_hermitian(rng, n, 1.0),
            a2: random_hermitian(rng, n, 1.0),
            a3: random_hermitian(rng, n, 1.0),
        },
        Inequality::LieProduct => IneqInput::LieProduct {
            a: random_hermitian(rng, n, LIE_PRODUCT_SCALE),
            b: random_hermitian(rng, n, LIE_PRODUCT_SCALE),
        },
    }
}

fn default_tol(rhs: f64) -> f64 {
    1e-8 * rhs.abs().max(1.0)
}

/// `φ[(B^{t/2} A^t B^{t/2})^{1/t}]`, from the singular values of `A^{t/2} B^{t/2}`.
fn alt_value(form: &Form, a: &PsdMatrix, b: &PsdMatrix, t: f64) -> Result<f64> {
    let sv = product_singular_values(&a.pow(t / 2.0)?, &b.pow(t / 2.0)?)?;
    form.eval(&sv.iter().map(|s| s.powf(2.0 / t)).collect::<Vec<_>>())
}

/// `exp((1+it)A_j)` for each factor, from cached eigendecompositions.
struct ComplexExponentials {
    eigs: Vec<EigenDecomposition>,
}

impl ComplexExponentials {
    fn new(mats: &[HermitianMatrix]) -> Result<Self> {
        Ok(Self { eigs: mats.iter().map(HermitianMatrix::eigh).collect::<Result<_>>()? })
    }

    fn product(&self, z: C64) -> ComplexMatrix {
        let factor = |e: &EigenDecomposition| {
            let d: Vec<C64> = e.values.iter().map(|&l| (z * l).exp()).collect();
            e.synthesize(&d)
        };
        let mut acc = factor(&self.eigs[0]);
        for e in &self.eigs[1..] {
            acc *= factor(e);
        }
        acc
    }

    fn log_form(&self, form: &Form, t: f64, p: f64) -> Result<f64> {
        let g = self.product(C64::new(1.0, t));
        Ok(form.eval(&abs_power_spectrum(&g, p)?)?.ln())
    }
}

/// The multi_gt integrand `log φ(|∏_j exp((1+it)A_j)|^p)`, products taken
/// left to right.
pub fn multi_gt_integrand(form: &Form, mats: &[HermitianMatrix], p: f64, t: f64) -> Result<f64> {
    if mats.is_empty() {
        return Err(Error::invalid("multi_gt: needs at least one matrix"));
    }
    ComplexExponentials::new(mats)?.log_form(form, t, p)
}

fn shifted(m: &ComplexMatrix, t: f64) -> ComplexMatrix {
    let mut out = m.clone();
    for i in 0..m.nrows() {
        out[(i, i)] += C64::new(t, 0.0);
    }
    out
}

/// Left side of the `T` identity by `t = u/(1−u)` on 8 panels of 64
/// Gauss–Legendre nodes, with explicit inverses at each node.
fn t_identity_integral(a: &PsdMatrix, b: &HermitianMatrix) -> Result<ComplexMatrix> {
    let a_inv = inverse(a.as_matrix())?;
    let n = a.dim();
    let mut terms = Vec::new();
    for (u, w) in unit_interval_rule(8, 64)? {
        let t = u / (1.0 - u);
        let r = inverse(&shifted(&a_inv, t))?;
        terms.push((&r * b.as_matrix() * &r).scale(w / ((1.0 - u) * (1.0 - u))));
    }
    Ok(terms.into_iter().fold(ComplexMatrix::zeros(n, n), |acc, m| acc + m))
}

/// Right side of the `T` identity: `∫ β_0(t) A^{(1+it)/2} B A^{(1−it)/2} dt`.
fn t_identity_beta(a: &PsdMatrix, b: &HermitianMatrix, spec: &QuadratureSpec) -> Result<ComplexMatrix> {
    let rule = BetaRule::new(0.0, spec)?;
    rule.integrate_matrix(|t| {
        let left = a.cpow(C64::new(0.5, t / 2.0))?;
        let right = a.cpow(C64::new(0.5, -t / 2.0))?;
        Ok(left * b.as_matrix() * right)
    })
}

/// Evaluates one inequality instance.
///
/// The form must be Hölder in the input dimension except for t_identity
/// and lie_product, which do not involve it.
pub fn inequality_check(form: &Form, input: &IneqInput, spec: &QuadratureSpec) -> Result<IneqResult> {
    input.validate()?;
    let kind = input.kind();
    let n = input.dim();
    if kind.needs_hoelder() && !form.is_hoelder_in(n) {
        return Err(Error::PreconditionFailed(format!("{kind} needs a Hölder form; {form} is not Hölder for n={n}")));
    }
    let name = kind.name();
    let mut result = match input {
        IneqInput::MatrixHoelder { a, b, p } => {
            let lhs = form.eval(&product_singular_values(a, b)?)?;
            let (_, rhs) = hoelder_sides(form, a.spectrum(), b.spectrum(), *p)?;
            IneqResult::new(name, lhs, rhs, default_tol(rhs))
        }
        IneqInput::Alt { a, b, exponents } => {
            let values = exponents.iter().map(|&t| alt_value(form, a, b, t)).collect::<Result<Vec<_>>>()?;
            let (lhs, rhs) = (values[0], *values.last().expect("two exponents"));
            let slack = values.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
            let mut r = IneqResult::with_slack(name, lhs, rhs, slack, default_tol(rhs));
            r.series = values;
            r
        }
        IneqInput::Gt { a, b } => {
            let lhs = form.eval_matrix(&a.add(b).exp()?)?;
            let (ea, eb) = (a.exp()?, b.exp()?);
            let rhs = form.eval(&product_singular_values(&ea, &eb)?)?;
            let half = product_singular_values(&a.scale(0.5).exp()?, &b.scale(0.5).exp()?)?;
            let mut r = IneqResult::new(name, lhs, rhs, default_tol(rhs));
            r.alt_rhs = Some(form.eval(&half.iter().map(|s| s * s).collect::<Vec<_>>())?);
            r
        }
        IneqInput::ExpConvex { a, b, tau } => {
            let mix = a.scale(*tau).add(&b.scale(1.0 - tau));
            let lhs = form.eval_matrix(&mix.exp()?)?;
            let rhs = tau * form.eval_matrix(&a.exp()?)? + (1.0 - tau) * form.eval_matrix(&b.exp()?)?;
            IneqResult::new(name, lhs, rhs, default_tol(rhs))
        }
        IneqInput::MultiGt { mats, p } => {
            let sum = mats[1..].iter().fold(mats[0].clone(), |acc, m| acc.add(m));
            let lhs = form.eval_matrix(&sum.scale(*p).exp()?)?.ln();
            let exps = ComplexExponentials::new(mats)?;
            let rhs = BetaRule::new(0.0, spec)?.integrate(|t| exps.log_form(form, t, *p))?;
            IneqResult::new(name, lhs, rhs, default_tol(rhs))
        }
        IneqInput::TIdentity { a, b } => {
            let lhs = t_identity_integral(a, b)?;
            let rhs = t_identity_beta(a, b, spec)?;
            let diff = max_abs_diff(&lhs, &rhs);
            IneqResult::with_slack(name, max_abs(&lhs), max_abs(&rhs), -diff, T_IDENTITY_TOL)
        }
        IneqInput::ThreeMatrix { a1, a2, a3 } => {
            let lhs = form.eval_matrix(&a1.add(a2).add(a3).exp()?)?;
            let t = t_op(&a2.scale(-1.0).exp()?, a3.exp()?.hermitian())?;
            let half = a1.scale(0.5).exp()?;
            let inner = PsdMatrix::symmetrized(&(half.as_matrix() * t.as_matrix() * half.as_matrix()))?;
            let rhs = form.eval_matrix(&inner)?;
            let product = a1.exp()?.as_matrix() * t.as_matrix();
            let mut r = IneqResult::new(name, lhs, rhs, default_tol(rhs));
            r.alt_rhs = Some(form.eval(&abs_power_spectrum(&product, 1.0)?)?);
            r
        }
        IneqInput::LieProduct { a, b } => {
            let target = a.add(b).exp()?;
            let (hb, ea) = (b.scale(0.5), a.exp()?);
            let mut errors = Vec::with_capacity(LIE_STEPS as usize);
            for j in 1..=LIE_STEPS {
                let t = 0.5f64.powi(j as i32);
                let outer = hb.scale(t).exp()?;
                let inner = ea.pow(t)?;
                let x = PsdMatrix::symmetrized(&(outer.as_matrix() * inner.as_matrix() * outer.as_matrix()))?;
                errors.push(max_abs_diff(x.pow(1.0 / t)?.as_matrix(), target.as_matrix()));
            }
            let last = *errors.last().expect("eight steps");
            let monotone = errors.windows(2).all(|w| w[1] < w[0]);
            let mut r = IneqResult::new(name, last, LIE_PRODUCT_TOL, 0.0);
            r.pass = monotone && last <= LIE_PRODUCT_TOL;
            if !monotone {
                r.slack = r.slack.min(errors.windows(2).map(|w| w[0] - w[1]).fold(f64::INFINITY, f64::min));
            }
            r.series = errors;
            r
        }
    };
    result.digest = input.digest();
    Ok(result)
}

/// Dimensions usable by `form` within `dims`.
fn usable_dims(form: &Form, dims: &RangeInclusive<usize>) -> Result<RangeInclusive<usize>> {
    let lo = (*dims.start()).max(form.min_dim()).max(1);
    let hi = *dims.end();
    if lo > hi {
        return Err(Error::invalid(format!("no dimension in {dims:?} admits the form {form}")));
    }
    Ok(lo..=hi)
}

/// Runs `trials` seeded instances of `ineq`, the dimension of each drawn
/// uniformly from `dims` (raised to the form's order when needed).
///
/// Inequalities are deterministic in their inputs, so every failure is
/// recorded as confirmed. Numerical failures skip the trial.
pub fn run_inequality_trials(
    ineq: Inequality,
    form: &Form,
    dims: RangeInclusive<usize>,
    trials: u64,
    seed: u64,
    spec: &QuadratureSpec,
) -> Result<ProbeReport> {
    let dims = usable_dims(form, &dims)?;
    if ineq.needs_hoelder() {
        if let Some(n) = dims.clone().find(|&n| !form.is_hoelder_in(n)) {
            return Err(Error::PreconditionFailed(format!(
                "{ineq} needs a Hölder form; {form} is not Hölder for n={n}"
            )));
        }
    }
    spec.validate()?;
    let start = Instant::now();
    let outcomes =
        run_trials(trials, seed, |trial, trial_seed| match replay_inequality(ineq, form, &dims, trial_seed, spec) {
            Ok((_, r)) if r.pass => TrialOutcome::passed(r.slack),
            Ok((input, r)) => TrialOutcome::Completed {
                slack: r.slack,
                violation: Some(ViolationRecord {
                    trial,
                    trial_seed,
                    check: ineq.name().to_string(),
                    tau: match input {
                        IneqInput::ExpConvex { tau, .. } => Some(tau),
                        _ => None,
                    },
                    step: None,
                    lhs: r.lhs,
                    rhs: r.rhs,
                    gap: -r.slack,
                    tol: r.tol,
                    confirmed: true,
                    params: input.params(),
                    digest: r.digest,
                }),
            },
            Err(e) => TrialOutcome::Skipped { reason: e.to_string() },
        });
    let command = format!("verify --ineq {ineq} --form {form}");
    Ok(ProbeReport::from_outcomes(command, seed, outcomes, start.elapsed().as_millis() as u64))
}

/// Regenerates the inputs of one trial from its seed and re-evaluates it.
pub fn replay_inequality(
    ineq: Inequality,
    form: &Form,
    dims: &RangeInclusive<usize>,
    trial_seed: u64,
    spec: &QuadratureSpec,
) -> Result<(IneqInput, IneqResult)> {
    let dims = usable_dims(form, dims)?;
    let mut rng = rng_from_seed(trial_seed);
    let n = rng.random_range(dims);
    let input = sample_input(ineq, n, &mut rng);
    let result = inequality_check(form, &input, spec)?;
    Ok((input, result))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn forms() -> Vec<Form> {
        vec![Form::Trace, Form::KTrace { k: 2 }, Form::Gk { k: 2 }, Form::Seminorm { p: 0.5 }]
    }

    #[test]
    fn names_round_trip() {
        for i in Inequality::ALL {
            assert_eq!(i.name().parse::<Inequality>().unwrap(), i);
        }
        assert!("nope".parse::<Inequality>().is_err());
    }

    #[test]
    fn gt_commuting_is_equality() {
        let a = HermitianMatrix::from_real_diagonal(&[0.3, -1.0, 2.0]);
        let b = HermitianMatrix::from_real_diagonal(&[1.1, 0.4, -0.7]);
        for form in forms() {
            let r =
                inequality_check(&form, &IneqInput::Gt { a: a.clone(), b: b.clone() }, &Default::default()).unwrap();
            assert!((r.lhs - r.rhs).abs() <= 1e-10 * r.rhs.max(1.0), "{form}: {r:?}");
        }
    }

    #[test]
    fn alt_equal_exponents() {
        let mut rng = rng_from_seed(3);
        let (a, b) = (random_psd(&mut rng, 4, 1.0), random_psd(&mut rng, 4, 1.0));
        let input = IneqInput::Alt { a, b, exponents: vec![0.6, 0.6] };
        let r = inequality_check(&Form::KTrace { k: 2 }, &input, &Default::default()).unwrap();
        assert_eq!(r.lhs, r.rhs);
        assert!(r.pass);
    }

    #[test]
    fn alt_matches_direct_power() {
        let mut rng = rng_from_seed(4);
        let (a, b) = (random_psd(&mut rng, 3, 1.0), random_psd(&mut rng, 3, 1.0));
        let t = 0.7;
        let bh = b.pow(t / 2.0).unwrap();
        let inner = bh.as_matrix() * a.pow(t).unwrap().as_matrix() * bh.as_matrix();
        let direct = Form::Trace.eval_matrix(&PsdMatrix::symmetrized(&inner).unwrap().pow(1.0 / t).unwrap()).unwrap();
        let via = alt_value(&Form::Trace, &a, &b, t).unwrap();
        assert!((via - direct).abs() < 1e-10 * direct);
    }

    #[test]
    fn hoelder_gate() {
        let mut rng = rng_from_seed(5);
        let input = sample_input(Inequality::Gt, 3, &mut rng);
        let err = inequality_check(&Form::MinSum { k: 1 }, &input, &Default::default()).unwrap_err();
        assert!(matches!(err, Error::PreconditionFailed(_)));
        let input = sample_input(Inequality::LieProduct, 3, &mut rng);
        assert!(inequality_check(&Form::MinSum { k: 1 }, &input, &Default::default()).is_ok());
    }

    #[test]
    fn multi_gt_reduces_to_gt() {
        let spec = QuadratureSpec::default();
        let mut rng = rng_from_seed(6);
        for form in forms() {
            let (a, b) = (random_hermitian(&mut rng, 3, 1.0), random_hermitian(&mut rng, 3, 1.0));
            let gt = inequality_check(&form, &IneqInput::Gt { a: a.clone(), b: b.clone() }, &spec).unwrap();
            let mats = vec![a.scale(0.5), b.scale(0.5)];
            let mg = inequality_check(&form, &IneqInput::MultiGt { mats: mats.clone(), p: 2.0 }, &spec).unwrap();
            assert!((mg.lhs - gt.lhs.ln()).abs() < 1e-6, "{form}");
            assert!((mg.rhs - gt.alt_rhs.unwrap().ln()).abs() < 1e-6, "{form}");
            let values: Vec<f64> = [-3.0, -0.5, 0.0, 1.0, 7.0]
                .iter()
                .map(|&t| multi_gt_integrand(&form, &mats, 2.0, t).unwrap())
                .collect();
            let mean = values.iter().sum::<f64>() / values.len() as f64;
            let sd = (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / values.len() as f64).sqrt();
            assert!(sd < 1e-8, "{form}: {sd:e}");
        }
    }

    #[test]
    fn three_matrix_without_middle_is_gt() {
        let spec = QuadratureSpec::default();
        let mut rng = rng_from_seed(7);
        let (a1, a3) = (random_hermitian(&mut rng, 4, 1.0), random_hermitian(&mut rng, 4, 1.0));
        let form = Form::KTrace { k: 2 };
        let tm = IneqInput::ThreeMatrix { a1: a1.clone(), a2: HermitianMatrix::zeros(4), a3: a3.clone() };
        let tm = inequality_check(&form, &tm, &spec).unwrap();
        let gt = inequality_check(&form, &IneqInput::Gt { a: a1, b: a3 }, &spec).unwrap();
        assert!((tm.lhs - gt.lhs).abs() <= 1e-7 * gt.lhs.max(1.0));
        assert!((tm.rhs - gt.alt_rhs.unwrap()).abs() <= 1e-7 * gt.rhs.max(1.0));
    }

    #[test]
    fn t_identity_and_lie_product() {
        let spec = QuadratureSpec::default();
        let mut rng = rng_from_seed(8);
        for _ in 0..3 {
            let r = inequality_check(&Form::Trace, &sample_input(Inequality::TIdentity, 3, &mut rng), &spec).unwrap();
            assert!(r.pass, "{r:?}");
            let r = inequality_check(&Form::Trace, &sample_input(Inequality::LieProduct, 4, &mut rng), &spec).unwrap();
            assert!(r.pass, "{r:?}");
            assert_eq!(r.series.len(), 8);
        }
    }

    #[test]
    fn sampled_suites_pass() {
        let spec = QuadratureSpec::default();
        for ineq in
            [Inequality::MatrixHoelder, Inequality::Alt, Inequality::Gt, Inequality::ExpConvex, Inequality::ThreeMatrix]
        {
            for form in forms() {
                let r = run_inequality_trials(ineq, &form, 2..=5, 40, 11, &spec).unwrap();
                assert_eq!(r.trials_completed, 40, "{ineq} {form}");
                assert!(r.violations.is_empty(), "{ineq} {form}: {:?}", r.violations);
            }
        }
    }

    #[test]
    fn rejects_bad_arity() {
        let spec = QuadratureSpec::default();
        let err = inequality_check(&Form::Trace, &IneqInput::MultiGt { mats: vec![], p: 2.0 }, &spec);
        assert!(matches!(err, Err(Error::InvalidInput(_))));
        let input = IneqInput::Gt { a: HermitianMatrix::identity(2), b: HermitianMatrix::identity(3) };
        assert!(matches!(inequality_check(&Form::Trace, &input, &spec), Err(Error::InvalidInput(_))));
    }
}
