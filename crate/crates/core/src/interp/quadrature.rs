//! The `β_θ` density and composite Gauss–Legendre quadrature against it.

use std::f64::consts::PI;

use gauss_quad::GaussLegendre;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hermitian::ComplexMatrix;

/// `β_θ(t) = sin(πθ) / (2θ(cosh πt + cos πθ))`, with `β_0(t) = π / (2(cosh πt + 1))`.
///
/// `β_1` is the point mass at `0`; it evaluates to `+∞` at `t = 0` and to `0`
/// elsewhere, and [`quad_beta`] treats it as point evaluation.
pub fn beta_density(theta: f64, t: f64) -> f64 {
    assert!((0.0..=1.0).contains(&theta), "θ must lie in [0, 1], got {theta}");
    if theta == 0.0 {
        return PI / (2.0 * ((PI * t).cosh() + 1.0));
    }
    if theta == 1.0 {
        return if t == 0.0 { f64::INFINITY } else { 0.0 };
    }
    let ch = (PI * t).cosh();
    if !ch.is_finite() {
        return 0.0;
    }
    (PI * theta).sin() / (2.0 * theta * (ch + (PI * theta).cos()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    /// The integral is truncated to `[-T, T]`.
    pub truncation: f64,
    pub panels_per_unit: usize,
    pub nodes_per_panel: usize,
    pub abs_tol: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { truncation: 12.0, panels_per_unit: 8, nodes_per_panel: 16, abs_tol: 1e-9 }
    }
}

impl QuadratureSpec {
    /// Bound on the mass of `β_θ` outside `[-T, T]`.
    pub fn tail_bound(&self, theta: f64) -> f64 {
        let lead = if theta == 0.0 { PI / 2.0 } else { (PI * theta).sin() / (2.0 * theta) };
        lead * (2.0 / PI) * (-PI * self.truncation).exp() * 2.0
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.truncation > 0.0 && self.truncation.is_finite()) {
            return Err(Error::invalid("quadrature truncation must be positive"));
        }
        if self.panels_per_unit == 0 || self.nodes_per_panel < 2 {
            return Err(Error::invalid("quadrature needs ≥ 1 panel per unit and ≥ 2 nodes per panel"));
        }
        if self.tail_bound(0.0) > self.abs_tol {
            return Err(Error::invalid(format!(
                "truncation T={} leaves a tail above abs_tol={:e}",
                self.truncation, self.abs_tol
            )));
        }
        Ok(())
    }
}

/// Nodes `t_i` and weights `w_i β_θ(t_i)` for `∫ β_θ(t) f(t) dt`.
#[derive(Debug, Clone, PartialEq)]
pub enum BetaRule {
    /// `θ = 1`: evaluate at `t = 0`.
    PointMass,
    Nodes(Vec<(f64, f64)>),
}

impl BetaRule {
    /// Builds the rule on `[-T, T]`.
    ///
    /// `β_θ` has poles at `±i(1 − θ)`, so when `1 − θ` is small the panels
    /// are graded geometrically toward `t = 0`, starting at width `1 − θ`.
    pub fn new(theta: f64, spec: &QuadratureSpec) -> Result<Self> {
        if !(0.0..=1.0).contains(&theta) {
            return Err(Error::invalid(format!("θ must lie in [0, 1], got {theta}")));
        }
        spec.validate()?;
        if theta == 1.0 {
            return Ok(BetaRule::PointMass);
        }
        let gl = GaussLegendre::new(spec.nodes_per_panel)
            .map_err(|e| Error::invalid(format!("Gauss–Legendre rule: {e}")))?;
        let base = 1.0 / spec.panels_per_unit as f64;
        let pole = 1.0 - theta;

        let mut edges = vec![0.0];
        let mut x = 0.0;
        if pole < base {
            x = pole;
            edges.push(x);
            while x < spec.truncation {
                x = (2.0 * x).min(x + base).min(spec.truncation);
                edges.push(x);
            }
        }
        while x < spec.truncation {
            x = (x + base).min(spec.truncation);
            edges.push(x);
        }

        let mut nodes = Vec::with_capacity(2 * (edges.len() - 1) * spec.nodes_per_panel);
        // left half first, ascending in t
        for w in edges.windows(2).rev() {
            push_panel(&gl, -w[1], -w[0], theta, &mut nodes);
        }
        for w in edges.windows(2) {
            push_panel(&gl, w[0], w[1], theta, &mut nodes);
        }
        Ok(BetaRule::Nodes(nodes))
    }

    pub fn len(&self) -> usize {
        match self {
            BetaRule::PointMass => 1,
            BetaRule::Nodes(n) => n.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `∫ β_θ f`, summed pairwise in node order.
    pub fn integrate<F: FnMut(f64) -> Result<f64>>(&self, mut f: F) -> Result<f64> {
        match self {
            BetaRule::PointMass => checked(0.0, f(0.0)?),
            BetaRule::Nodes(nodes) => {
                let mut terms = Vec::with_capacity(nodes.len());
                for &(t, w) in nodes {
                    terms.push(w * checked(t, f(t)?)?);
                }
                Ok(pairwise_sum(&terms))
            }
        }
    }

    /// Matrix-valued `∫ β_θ F`, summed pairwise in node order.
    pub fn integrate_matrix<F: FnMut(f64) -> Result<ComplexMatrix>>(&self, mut f: F) -> Result<ComplexMatrix> {
        match self {
            BetaRule::PointMass => checked_matrix(0.0, f(0.0)?),
            BetaRule::Nodes(nodes) => {
                let mut terms = Vec::with_capacity(nodes.len());
                for &(t, w) in nodes {
                    terms.push(checked_matrix(t, f(t)?)?.scale(w));
                }
                Ok(pairwise_sum_matrix(terms))
            }
        }
    }

    pub fn nodes(&self) -> &[(f64, f64)] {
        match self {
            BetaRule::PointMass => &[],
            BetaRule::Nodes(n) => n,
        }
    }
}

fn push_panel(gl: &GaussLegendre, a: f64, b: f64, theta: f64, out: &mut Vec<(f64, f64)>) {
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    let mut pairs: Vec<(f64, f64)> = gl.iter().map(|(x, w)| (mid + half * x, half * w)).collect();
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
    out.extend(pairs.into_iter().map(|(t, w)| (t, w * beta_density(theta, t))));
}

fn checked(t: f64, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NumericalFailure(format!("integrand is not finite at node t = {t}")))
    }
}

fn checked_matrix(t: f64, m: ComplexMatrix) -> Result<ComplexMatrix> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(m)
    } else {
        Err(Error::NumericalFailure(format!("matrix integrand is not finite at node t = {t}")))
    }
}

/// Pairwise (cascade) summation; the result depends only on the order of
/// `terms`.
pub fn pairwise_sum(terms: &[f64]) -> f64 {
    match terms.len() {
        0 => 0.0,
        1 => terms[0],
        n if n <= 8 => terms.iter().sum(),
        n => pairwise_sum(&terms[..n / 2]) + pairwise_sum(&terms[n / 2..]),
    }
}

fn pairwise_sum_matrix(mut terms: Vec<ComplexMatrix>) -> ComplexMatrix {
    while terms.len() > 1 {
        let mut next = Vec::with_capacity(terms.len().div_ceil(2));
        let mut it = terms.into_iter();
        while let Some(a) = it.next() {
            match it.next() {
                Some(b) => next.push(a + b),
                None => next.push(a),
            }
        }
        terms = next;
    }
    terms.pop().expect("at least one quadrature node")
}

/// `∫ β_θ(t) f(t) dt` over `[-T, T]`; `θ = 1` returns `f(0)`.
pub fn quad_beta<F: FnMut(f64) -> Result<f64>>(theta: f64, f: F, spec: &QuadratureSpec) -> Result<f64> {
    BetaRule::new(theta, spec)?.integrate(f)
}

/// Gauss–Legendre rule for `∫_0^1 g(u) du` on `panels` equal panels.
pub fn unit_interval_rule(panels: usize, nodes_per_panel: usize) -> Result<Vec<(f64, f64)>> {
    let gl = GaussLegendre::new(nodes_per_panel).map_err(|e| Error::invalid(format!("Gauss–Legendre rule: {e}")))?;
    let h = 1.0 / panels as f64;
    let mut out = Vec::with_capacity(panels * nodes_per_panel);
    for p in 0..panels {
        let (mid, half) = ((p as f64 + 0.5) * h, 0.5 * h);
        let mut pairs: Vec<(f64, f64)> = gl.iter().map(|(x, w)| (mid + half * x, half * w)).collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        out.extend(pairs);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn density_values() {
        assert!((beta_density(0.5, 0.0) - 1.0).abs() < 1e-15);
        assert!((beta_density(0.0, 0.0) - PI / 4.0).abs() < 1e-15);
        assert_eq!(beta_density(1.0, 0.3), 0.0);
        // θ → 0 limit is continuous
        assert!((beta_density(1e-9, 0.7) - beta_density(0.0, 0.7)).abs() < 1e-8);
        assert_eq!(beta_density(0.3, 400.0), 0.0);
    }

    #[test]
    fn normalization() {
        let spec = QuadratureSpec::default();
        for theta in [0.0, 0.1, 0.3, 0.5, 0.9, 0.99, 0.999] {
            let v = quad_beta(theta, |_| Ok(1.0), &spec).unwrap();
            assert!((v - 1.0).abs() < 1e-9, "θ={theta}: {v}");
        }
    }

    #[test]
    fn odd_and_point_mass() {
        let spec = QuadratureSpec::default();
        assert!(quad_beta(0.5, Ok, &spec).unwrap().abs() < 1e-12);
        assert_eq!(quad_beta(1.0, |t| Ok(3.0 + t), &spec).unwrap(), 3.0);
    }

    #[test]
    fn fourier_transform_of_beta_zero() {
        // ∫ β_0(t) e^{iωt} dt = ω / sinh(ω)
        let spec = QuadratureSpec::default();
        for w in [0.3, 1.0, 4.0] {
            let v = quad_beta(0.0, |t| Ok((w * t).cos()), &spec).unwrap();
            assert!((v - w / w.sinh()).abs() < 1e-12, "ω={w}");
        }
    }

    #[test]
    fn non_finite_reports_node() {
        let err = quad_beta(0.5, |t| Ok(if t > 0.0 { f64::NAN } else { 1.0 }), &QuadratureSpec::default());
        assert!(matches!(err, Err(Error::NumericalFailure(_))));
    }

    #[test]
    fn pairwise_is_order_stable() {
        let v: Vec<f64> = (0..1000).map(|i| (i as f64).sin()).collect();
        assert_eq!(pairwise_sum(&v), pairwise_sum(&v.clone()));
        assert!((pairwise_sum(&v) - v.iter().sum::<f64>()).abs() < 1e-12);
    }

    #[test]
    fn bad_spec_rejected() {
        let spec = QuadratureSpec { truncation: 2.0, ..Default::default() };
        assert!(spec.validate().is_err());
        assert!(BetaRule::new(1.5, &QuadratureSpec::default()).is_err());
    }
}
