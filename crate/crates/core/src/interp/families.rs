//! Holomorphic matrix families `G(z)` on the strip `0 ≤ Re z ≤ 1` and the
//! interpolation bound
//! `φ(|G(θ)|^{p_θ}) ≤ ∫ (1−θ)p_θ/p_0 β_{1−θ} φ(|G(it)|^{p_0}) + θp_θ/p_1 β_θ φ(|G(1+it)|^{p_1})`.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::quadrature::{BetaRule, QuadratureSpec};
use super::IneqResult;
use crate::error::{Error, Result};
use crate::forms::Form;
use crate::hermitian::{abs_power_spectrum, polar, ComplexMatrix, PsdMatrix, C64};
use crate::report::{run_trials, Digest, ProbeReport, TrialOutcome, ViolationRecord};
use crate::sample::{random_general, random_psd, rng_from_seed};

const PARAM_TOL: f64 = 1e-12;

/// `(θ, p_0, p_1, p_θ)` with `1/p_θ = (1−θ)/p_0 + θ/p_1`; `p = ∞` is allowed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterpolationParams {
    pub theta: f64,
    pub p0: f64,
    pub p1: f64,
    pub p_theta: f64,
}

fn recip(p: f64) -> f64 {
    if p.is_infinite() {
        0.0
    } else {
        1.0 / p
    }
}

impl InterpolationParams {
    pub fn new(theta: f64, p0: f64, p1: f64, p_theta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&theta) {
            return Err(Error::invalid(format!("θ must lie in [0, 1], got {theta}")));
        }
        for p in [p0, p1, p_theta] {
            if p.is_nan() || p <= 0.0 {
                return Err(Error::invalid(format!("exponents must be positive, got {p}")));
            }
        }
        let lhs = recip(p_theta);
        let rhs = (1.0 - theta) * recip(p0) + theta * recip(p1);
        if (lhs - rhs).abs() > PARAM_TOL * lhs.max(rhs).max(1.0) {
            return Err(Error::invalid(format!("1/p_θ = {lhs} differs from (1−θ)/p_0 + θ/p_1 = {rhs}")));
        }
        Ok(Self { theta, p0, p1, p_theta })
    }

    /// Derives `p_θ` from `θ`, `p_0`, `p_1`.
    pub fn from_endpoints(theta: f64, p0: f64, p1: f64) -> Result<Self> {
        let r = (1.0 - theta) * recip(p0) + theta * recip(p1);
        Self::new(theta, p0, p1, if r == 0.0 { f64::INFINITY } else { 1.0 / r })
    }

    /// Weight of the `Re z = 0` boundary term.
    pub fn left_weight(&self) -> f64 {
        (1.0 - self.theta) * self.p_theta * recip(self.p0)
    }

    /// Weight of the `Re z = 1` boundary term.
    pub fn right_weight(&self) -> f64 {
        self.theta * self.p_theta * recip(self.p1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    PowerProduct,
    Epstein,
    LiebTwoVar,
}

impl std::str::FromStr for FamilyKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "power_product" => Ok(FamilyKind::PowerProduct),
            "epstein" => Ok(FamilyKind::Epstein),
            "lieb_two_var" => Ok(FamilyKind::LiebTwoVar),
            _ => Err(Error::invalid(format!("unknown family `{s}`"))),
        }
    }
}

impl std::fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            FamilyKind::PowerProduct => "power_product",
            FamilyKind::Epstein => "epstein",
            FamilyKind::LiebTwoVar => "lieb_two_var",
        })
    }
}

#[derive(Debug, Clone)]
pub enum GFamily {
    /// `G(z) = A_1^z ⋯ A_m^z`.
    PowerProduct { factors: Vec<PsdMatrix> },
    /// `G(z) = X^{rz/2} C^{−rz/2} Q |M|^{z/s}` with `M = C^{rs/2} K = Q|M|`.
    Epstein { x: PsdMatrix, c: PsdMatrix, q: ComplexMatrix, abs_m: PsdMatrix, r: f64, s: f64 },
    /// `G(z) = X_1^{rsz/2} C_1^{−rsz/2} M C_2^{−rs(1−z)/2} X_2^{rs(1−z)/2}` with
    /// `M = C_1^{ps/2} K C_2^{qs/2}` and `r = p + q`.
    LiebTwoVar { x1: PsdMatrix, x2: PsdMatrix, c1: PsdMatrix, c2: PsdMatrix, m: ComplexMatrix, p: f64, q: f64, s: f64 },
}

fn require_pd(name: &str, a: &PsdMatrix) -> Result<()> {
    if a.is_positive_definite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("{name} must be positive definite")))
    }
}

fn require_unit(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v <= 1.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("{name} must lie in (0, 1], got {v}")))
    }
}

impl GFamily {
    pub fn power_product(factors: Vec<PsdMatrix>) -> Result<Self> {
        let n = factors.first().ok_or_else(|| Error::invalid("power_product needs a factor"))?.dim();
        for a in &factors {
            require_pd("power_product factor", a)?;
            if a.dim() != n {
                return Err(Error::invalid("power_product factors must share a dimension"));
            }
        }
        Ok(GFamily::PowerProduct { factors })
    }

    pub fn epstein(x: PsdMatrix, c: PsdMatrix, k: &ComplexMatrix, r: f64, s: f64) -> Result<Self> {
        require_pd("X", &x)?;
        require_pd("C", &c)?;
        require_unit("r", r)?;
        require_unit("s", s)?;
        if x.dim() != c.dim() || k.shape() != (x.dim(), x.dim()) {
            return Err(Error::invalid("epstein family needs X, C, K of one dimension"));
        }
        let m = c.pow(r * s / 2.0)?.as_matrix() * k;
        let (q, abs_m) = polar(&m)?;
        Ok(GFamily::Epstein { x, c, q, abs_m, r, s })
    }

    #[allow(clippy::too_many_arguments)]
    pub fn lieb_two_var(
        x1: PsdMatrix,
        x2: PsdMatrix,
        c1: PsdMatrix,
        c2: PsdMatrix,
        k: &ComplexMatrix,
        p: f64,
        q: f64,
        s: f64,
    ) -> Result<Self> {
        for (name, a) in [("X1", &x1), ("X2", &x2), ("C1", &c1), ("C2", &c2)] {
            require_pd(name, a)?;
        }
        require_unit("p", p)?;
        require_unit("q", q)?;
        require_unit("s", s)?;
        require_unit("p + q", p + q)?;
        let (n, mdim) = (x1.dim(), x2.dim());
        if c1.dim() != n || c2.dim() != mdim || k.shape() != (n, mdim) {
            return Err(Error::invalid("lieb_two_var needs X1, C1 n×n, X2, C2 m×m and K n×m"));
        }
        let m = c1.pow(p * s / 2.0)?.as_matrix() * k * c2.pow(q * s / 2.0)?.as_matrix();
        Ok(GFamily::LiebTwoVar { x1, x2, c1, c2, m, p, q, s })
    }

    pub fn kind(&self) -> FamilyKind {
        match self {
            GFamily::PowerProduct { .. } => FamilyKind::PowerProduct,
            GFamily::Epstein { .. } => FamilyKind::Epstein,
            GFamily::LiebTwoVar { .. } => FamilyKind::LiebTwoVar,
        }
    }

    /// The parameters the concavity proofs use: `θ = s, p_θ = 2/s, p_1 = 2,
    /// p_0 = ∞` for epstein; `θ = p/r, p_0 = p_1 = p_θ = 2/s` for lieb_two_var;
    /// `θ = 1/2, p_0 = p_1 = p_θ = 2` for power_product.
    pub fn natural_params(&self) -> Result<InterpolationParams> {
        match *self {
            GFamily::PowerProduct { .. } => InterpolationParams::new(0.5, 2.0, 2.0, 2.0),
            GFamily::Epstein { s, .. } => InterpolationParams::new(s, f64::INFINITY, 2.0, 2.0 / s),
            GFamily::LiebTwoVar { p, q, s, .. } => InterpolationParams::new(p / (p + q), 2.0 / s, 2.0 / s, 2.0 / s),
        }
    }

    /// `G(z)` for `0 ≤ Re z ≤ 1`.
    pub fn eval(&self, z: C64) -> Result<ComplexMatrix> {
        if !(z.re >= 0.0 && z.re <= 1.0) || !z.im.is_finite() {
            return Err(Error::invalid(format!("z = {z} lies off the strip 0 ≤ Re z ≤ 1")));
        }
        match self {
            GFamily::PowerProduct { factors } => {
                let mut g = factors[0].cpow(z)?;
                for a in &factors[1..] {
                    g *= a.cpow(z)?;
                }
                Ok(g)
            }
            GFamily::Epstein { x, c, q, abs_m, r, s } => {
                let h = z * (*r / 2.0);
                Ok(x.cpow(h)? * c.cpow(-h)? * q * abs_m.cpow(z / *s)?)
            }
            GFamily::LiebTwoVar { x1, x2, c1, c2, m, p, q, s } => {
                let rs = (p + q) * s / 2.0;
                let (left, right) = (z * rs, (C64::new(1.0, 0.0) - z) * rs);
                Ok(x1.cpow(left)? * c1.cpow(-left)? * m * c2.cpow(-right)? * x2.cpow(right)?)
            }
        }
    }

    /// `φ(|G(z)|^p)`.
    pub fn form_of_abs_power(&self, form: &Form, z: C64, p: f64) -> Result<f64> {
        let g = self.eval(z)?;
        form.eval(&abs_power_spectrum(&g, p)?)
    }

    /// Draws a random instance with positive definite factors of dimension
    /// `n` (`m` for the right-hand factors of lieb_two_var) and the given
    /// exponents.
    pub fn sample<R: Rng>(kind: FamilyKind, n: usize, m: usize, exps: FamilyExponents, rng: &mut R) -> Result<Self> {
        match kind {
            FamilyKind::PowerProduct => {
                let count = exps.factors.max(1);
                GFamily::power_product((0..count).map(|_| random_psd(rng, n, 1.0)).collect())
            }
            FamilyKind::Epstein => {
                let (x, c) = (random_psd(rng, n, 1.0), random_psd(rng, n, 1.0));
                let k = random_general(rng, n, n, 1.0);
                GFamily::epstein(x, c, &k, exps.r, exps.s)
            }
            FamilyKind::LiebTwoVar => {
                let (x1, c1) = (random_psd(rng, n, 1.0), random_psd(rng, n, 1.0));
                let (x2, c2) = (random_psd(rng, m, 1.0), random_psd(rng, m, 1.0));
                let k = random_general(rng, n, m, 1.0);
                GFamily::lieb_two_var(x1, x2, c1, c2, &k, exps.p, exps.q, exps.s)
            }
        }
    }
}

/// Exponents used by [`GFamily::sample`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FamilyExponents {
    pub factors: usize,
    pub r: f64,
    pub s: f64,
    pub p: f64,
    pub q: f64,
}

impl Default for FamilyExponents {
    fn default() -> Self {
        Self { factors: 2, r: 1.0, s: 0.5, p: 0.5, q: 0.5 }
    }
}

/// Evaluates both sides of the interpolation bound.
///
/// A boundary term whose weight vanishes (`p_0 = ∞`, `θ ∈ {0, 1}`) is
/// dropped without being evaluated.
pub fn check_interpolation(
    form: &Form,
    family: &GFamily,
    params: &InterpolationParams,
    spec: &QuadratureSpec,
) -> Result<IneqResult> {
    let theta = params.theta;
    let lhs = family.form_of_abs_power(form, C64::new(theta, 0.0), params.p_theta)?;
    let mut rhs = 0.0;
    let left = params.left_weight();
    if left > 0.0 {
        let rule = BetaRule::new(1.0 - theta, spec)?;
        rhs += left * rule.integrate(|t| family.form_of_abs_power(form, C64::new(0.0, t), params.p0))?;
    }
    let right = params.right_weight();
    if right > 0.0 {
        let rule = BetaRule::new(theta, spec)?;
        rhs += right * rule.integrate(|t| family.form_of_abs_power(form, C64::new(1.0, t), params.p1))?;
    }
    Ok(IneqResult::new("interpolation", lhs, rhs, 1e-8 * rhs.abs().max(1.0)))
}

/// Runs `trials` seeded interpolation checks on sampled families; `params`
/// defaults to each family's [`GFamily::natural_params`].
#[allow(clippy::too_many_arguments)]
pub fn run_interpolation_trials(
    kind: FamilyKind,
    form: &Form,
    n: usize,
    m: usize,
    exps: FamilyExponents,
    params: Option<InterpolationParams>,
    trials: u64,
    seed: u64,
    spec: &QuadratureSpec,
) -> Result<ProbeReport> {
    if !form.is_hoelder_in(n) || (kind == FamilyKind::LiebTwoVar && !form.is_hoelder_in(m)) {
        return Err(Error::PreconditionFailed(format!("interpolation needs a Hölder form; {form} is not")));
    }
    if form.min_dim() > n.min(if kind == FamilyKind::LiebTwoVar { m } else { n }) {
        return Err(Error::invalid(format!("{form} is undefined in dimension {n}")));
    }
    spec.validate()?;
    let start = Instant::now();
    let outcomes = run_trials(trials, seed, |trial, trial_seed| {
        let run = || -> Result<(GFamily, InterpolationParams, IneqResult)> {
            let mut rng = rng_from_seed(trial_seed);
            let family = GFamily::sample(kind, n, m, exps, &mut rng)?;
            let params = match params {
                Some(p) => p,
                None => family.natural_params()?,
            };
            let r = check_interpolation(form, &family, &params, spec)?;
            Ok((family, params, r))
        };
        match run() {
            Ok((_, _, r)) if r.pass => TrialOutcome::passed(r.slack),
            Ok((family, params, r)) => {
                let mut record = BTreeMap::new();
                record.insert("n".to_string(), n as f64);
                record.insert("theta".to_string(), params.theta);
                record.insert("p0".to_string(), params.p0);
                record.insert("p1".to_string(), params.p1);
                record.insert("p_theta".to_string(), params.p_theta);
                let digest = family_digest(&family);
                TrialOutcome::Completed {
                    slack: r.slack,
                    violation: Some(ViolationRecord {
                        trial,
                        trial_seed,
                        check: "interpolation".into(),
                        tau: None,
                        step: None,
                        lhs: r.lhs,
                        rhs: r.rhs,
                        gap: -r.slack,
                        tol: r.tol,
                        confirmed: true,
                        params: record,
                        digest,
                    }),
                }
            }
            Err(e) => TrialOutcome::Skipped { reason: e.to_string() },
        }
    });
    let command = format!("verify --ineq interpolation --family {kind} --form {form} --n {n}");
    Ok(ProbeReport::from_outcomes(command, seed, outcomes, start.elapsed().as_millis() as u64))
}

fn family_digest(family: &GFamily) -> String {
    let d = Digest::new();
    let d = match family {
        GFamily::PowerProduct { factors } => factors.iter().fold(d, |d, a| d.matrix(a.as_matrix())),
        GFamily::Epstein { x, c, q, abs_m, r, s } => {
            d.matrix(x.as_matrix()).matrix(c.as_matrix()).matrix(q).matrix(abs_m.as_matrix()).scalar(*r).scalar(*s)
        }
        GFamily::LiebTwoVar { x1, x2, c1, c2, m, p, q, s } => d
            .matrix(x1.as_matrix())
            .matrix(x2.as_matrix())
            .matrix(c1.as_matrix())
            .matrix(c2.as_matrix())
            .matrix(m)
            .scalar(*p)
            .scalar(*q)
            .scalar(*s),
    };
    d.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian::{matrix_abs, max_abs_diff};
    use crate::sample::rng_from_seed;

    #[test]
    fn params_relation() {
        assert!(InterpolationParams::new(0.5, 2.0, 2.0, 2.0).is_ok());
        assert!(InterpolationParams::new(0.5, 2.0, 4.0, 2.0).is_err());
        let p = InterpolationParams::from_endpoints(0.25, f64::INFINITY, 2.0).unwrap();
        assert!((p.p_theta - 8.0).abs() < 1e-12);
        assert_eq!(p.left_weight(), 0.0);
        assert!((p.right_weight() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn power_product_at_zero_is_identity() {
        let mut rng = rng_from_seed(1);
        let f = GFamily::sample(FamilyKind::PowerProduct, 3, 3, FamilyExponents::default(), &mut rng).unwrap();
        let g = f.eval(C64::new(0.0, 0.0)).unwrap();
        assert!(max_abs_diff(&g, &ComplexMatrix::identity(3, 3)) < 1e-12);
        assert!(f.eval(C64::new(1.5, 0.0)).is_err());
    }

    #[test]
    fn epstein_boundary_and_identity() {
        let mut rng = rng_from_seed(2);
        for s in [0.25, 0.5, 1.0] {
            let exps = FamilyExponents { r: 0.7, s, ..Default::default() };
            let (x, c) = (random_psd(&mut rng, 4, 1.0), random_psd(&mut rng, 4, 1.0));
            let k = random_general(&mut rng, 4, 4, 1.0);
            let fam = GFamily::epstein(x.clone(), c, &k, exps.r, s).unwrap();
            let g = fam.eval(C64::new(0.0, 0.8)).unwrap();
            assert!(max_abs_diff(matrix_abs(&g).unwrap().as_matrix(), &ComplexMatrix::identity(4, 4)) < 1e-9);
            // φ(|G(s)|^{2/s}) = φ((K* X^{rs} K)^{1/s})
            let form = Form::KTrace { k: 2 };
            let via_family = fam.form_of_abs_power(&form, C64::new(s, 0.0), 2.0 / s).unwrap();
            let inner = k.adjoint() * x.pow(0.7 * s).unwrap().as_matrix() * &k;
            let direct = form.eval_matrix(&PsdMatrix::symmetrized(&inner).unwrap().pow(1.0 / s).unwrap()).unwrap();
            assert!((via_family - direct).abs() <= 1e-8 * direct.max(1.0), "s={s}: {via_family} vs {direct}");
        }
    }

    #[test]
    fn single_factor_is_equality() {
        let mut rng = rng_from_seed(3);
        let a = random_psd(&mut rng, 4, 1.0);
        let fam = GFamily::power_product(vec![a]).unwrap();
        // boundary terms are constant in t; with p_0 = ∞, p_1 = 1 both sides are φ(A)
        for theta in [0.25, 0.5, 0.8] {
            let params = InterpolationParams::from_endpoints(theta, f64::INFINITY, 1.0).unwrap();
            let r = check_interpolation(&Form::Trace, &fam, &params, &QuadratureSpec::default()).unwrap();
            assert!((r.lhs - r.rhs).abs() <= 1e-9 * r.rhs, "{r:?}");
        }
    }

    #[test]
    fn natural_params_pass() {
        let spec = QuadratureSpec::default();
        let mut rng = rng_from_seed(4);
        for kind in [FamilyKind::PowerProduct, FamilyKind::Epstein, FamilyKind::LiebTwoVar] {
            for _ in 0..3 {
                let exps = FamilyExponents { r: 0.6, s: 0.4, p: 0.3, q: 0.5, factors: 3 };
                let fam = GFamily::sample(kind, 3, 2, exps, &mut rng).unwrap();
                let params = fam.natural_params().unwrap();
                let r = check_interpolation(&Form::Gk { k: 2 }, &fam, &params, &spec).unwrap();
                assert!(r.pass, "{kind}: {r:?}");
            }
        }
    }

    #[test]
    fn seeded_runner() {
        let exps = FamilyExponents { r: 0.8, s: 0.5, ..Default::default() };
        let spec = QuadratureSpec::default();
        let r = run_interpolation_trials(FamilyKind::Epstein, &Form::KTrace { k: 2 }, 3, 3, exps, None, 20, 4, &spec)
            .unwrap();
        assert_eq!((r.trials_completed, r.violations.len()), (20, 0));
        let again =
            run_interpolation_trials(FamilyKind::Epstein, &Form::KTrace { k: 2 }, 3, 3, exps, None, 20, 4, &spec)
                .unwrap();
        assert_eq!(r.canonical_json(), again.canonical_json());
        let err = run_interpolation_trials(FamilyKind::Epstein, &Form::MinSum { k: 1 }, 3, 3, exps, None, 1, 4, &spec);
        assert!(matches!(err, Err(Error::PreconditionFailed(_))));
    }

    #[test]
    fn endpoints_degenerate() {
        let spec = QuadratureSpec::default();
        let mut rng = rng_from_seed(5);
        let fam = GFamily::sample(FamilyKind::PowerProduct, 3, 3, FamilyExponents::default(), &mut rng).unwrap();
        for theta in [0.0, 1.0] {
            let params = InterpolationParams::new(theta, 2.0, 2.0, 2.0).unwrap();
            let r = check_interpolation(&Form::Trace, &fam, &params, &spec).unwrap();
            assert!((r.lhs - r.rhs).abs() <= 1e-9 * r.rhs.max(1.0), "θ={theta}: {r:?}");
        }
    }
}
