//! Complex interpolation machinery and the trace inequalities it proves.

pub mod families;
pub mod inequalities;
pub mod quadrature;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hermitian::{ComplexMatrix, HermitianMatrix, PsdMatrix};

pub use families::{
    check_interpolation, run_interpolation_trials, FamilyExponents, FamilyKind, GFamily, InterpolationParams,
};
pub use inequalities::{
    inequality_check, multi_gt_integrand, run_inequality_trials, sample_input, IneqInput, Inequality,
};
pub use quadrature::{beta_density, quad_beta, BetaRule, QuadratureSpec};

/// Both sides of one checked relation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IneqResult {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs − lhs` unless the check defines its own margin.
    pub slack: f64,
    pub tol: f64,
    pub pass: bool,
    /// Right side under an alternative reading of the statement.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub alt_rhs: Option<f64>,
    /// Per-step values for chain and convergence checks.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub series: Vec<f64>,
    pub digest: String,
}

impl IneqResult {
    pub fn new(name: &str, lhs: f64, rhs: f64, tol: f64) -> Self {
        Self::with_slack(name, lhs, rhs, rhs - lhs, tol)
    }

    pub fn with_slack(name: &str, lhs: f64, rhs: f64, slack: f64, tol: f64) -> Self {
        Self {
            name: name.to_string(),
            lhs,
            rhs,
            slack,
            tol,
            pass: slack >= -tol,
            alt_rhs: None,
            series: Vec::new(),
            digest: String::new(),
        }
    }
}

/// Log divided difference `(log a − log b)/(a − b)`, the kernel of `T_A`.
fn log_divided_difference(a: f64, b: f64) -> f64 {
    if (a - b).abs() <= 1e-12 * a.max(b) {
        1.0 / a
    } else {
        // ln(a/b) through ln_1p keeps accuracy for close a, b
        ((a - b) / b).ln_1p() / (a - b)
    }
}

/// `T_A[B] = ∫_0^∞ (A + t)^{−1} B (A + t)^{−1} dt` in closed form: in the
/// eigenbasis of `A` the entries of `B` are multiplied by the log divided
/// difference of the eigenvalues.
pub fn t_op(a: &PsdMatrix, b: &HermitianMatrix) -> Result<HermitianMatrix> {
    if !a.is_positive_definite() {
        return Err(Error::invalid("T_A needs a positive definite A"));
    }
    if a.dim() != b.dim() {
        return Err(Error::invalid("T_A[B] needs A and B of one dimension"));
    }
    let eig = a.eigen();
    let u = &eig.vectors;
    let bt = u.adjoint() * b.as_matrix() * u;
    let l = &eig.values;
    let scaled = ComplexMatrix::from_fn(a.dim(), a.dim(), |i, j| bt[(i, j)] * log_divided_difference(l[i], l[j]));
    HermitianMatrix::symmetrized(&(u * scaled * u.adjoint()))
}
