//! `k`-th compound matrices: the representation of `∧^k A` on the basis of
//! lexicographically ordered `k`-subsets.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{binomial, for_each_subset};
use crate::hermitian::{inverse, matrix_abs, max_abs, max_abs_diff, ComplexMatrix, HermitianMatrix, PsdMatrix, C64};
use crate::sample::{random_hermitian, random_psd, rng_from_seed};

/// Largest compound dimension `C(n, k)` accepted.
pub const COMPOUND_DIM_CAP: u64 = 5000;

/// Relative tolerance of the identities in [`compound_property_check`].
pub const COMPOUND_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct CompoundMatrix {
    k: usize,
    base_n: usize,
    matrix: ComplexMatrix,
}

impl CompoundMatrix {
    pub fn order(&self) -> usize {
        self.k
    }

    pub fn base_dim(&self) -> usize {
        self.base_n
    }

    pub fn as_matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(binomial(n, k) as usize);
    for_each_subset(n, k, |s| out.push(s.to_vec()));
    out
}

/// Determinant by Gaussian elimination with partial pivoting; consumes `m`,
/// a row-major `k × k` buffer.
fn det_in_place(m: &mut [C64], k: usize) -> C64 {
    let mut det = C64::new(1.0, 0.0);
    for col in 0..k {
        let pivot =
            (col..k).max_by(|&i, &j| m[i * k + col].norm().total_cmp(&m[j * k + col].norm())).expect("non-empty range");
        let p = m[pivot * k + col];
        if p.norm() == 0.0 {
            return C64::new(0.0, 0.0);
        }
        if pivot != col {
            for c in 0..k {
                m.swap(pivot * k + c, col * k + c);
            }
            det = -det;
        }
        det *= p;
        for r in (col + 1)..k {
            let factor = m[r * k + col] / p;
            for c in col..k {
                let v = m[col * k + c];
                m[r * k + c] -= factor * v;
            }
        }
    }
    det
}

/// `∧^k A`: entry `(S, T)` is the minor `det A[S, T]`.
pub fn compound(a: &ComplexMatrix, k: usize) -> Result<CompoundMatrix> {
    if !a.is_square() {
        return Err(Error::invalid("compound needs a square matrix"));
    }
    let n = a.nrows();
    if k == 0 || k > n {
        return Err(Error::invalid(format!("compound order k={k} must lie in [1, {n}]")));
    }
    let dim = binomial(n, k);
    if dim > COMPOUND_DIM_CAP {
        return Err(Error::ResourceLimit(format!("compound dimension C({n}, {k}) = {dim} exceeds {COMPOUND_DIM_CAP}")));
    }
    let index = subsets(n, k);
    let dim = index.len();
    let mut buf = vec![C64::new(0.0, 0.0); k * k];
    let mut out = ComplexMatrix::zeros(dim, dim);
    for (r, rows) in index.iter().enumerate() {
        for (c, cols) in index.iter().enumerate() {
            for (i, &ri) in rows.iter().enumerate() {
                for (j, &cj) in cols.iter().enumerate() {
                    buf[i * k + j] = a[(ri, cj)];
                }
            }
            out[(r, c)] = det_in_place(&mut buf, k);
        }
    }
    Ok(CompoundMatrix { k, base_n: n, matrix: out })
}

/// One identity of the exterior power with its measured relative error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub name: String,
    pub error: f64,
    pub tol: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompoundReport {
    pub n: usize,
    pub k: usize,
    pub seed: u64,
    pub checks: Vec<IdentityCheck>,
}

impl CompoundReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn check(&self, name: &str) -> Option<&IdentityCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn relative_diff(lhs: &ComplexMatrix, rhs: &ComplexMatrix) -> f64 {
    max_abs_diff(lhs, rhs) / max_abs(rhs).max(1.0)
}

/// Checks the exterior-power identities on `A`, `B` and on auxiliary
/// matrices drawn from `seed`: a well-conditioned positive definite `P`
/// (powers, spectrum, positivity) and a Hermitian `H`.
///
/// Identities: `∧(AB) = ∧A ∧B`, `∧(A*) = (∧A)*`, `∧(Aᵗ) = (∧A)ᵗ`,
/// `∧(P^t) = (∧P)^t` for `t ∈ {1/2, 2, iω}`, `λ(∧P) = {∏_{i∈S} λ_i(P)}`,
/// `λ_1(∧P) = ∏_{i≤k} λ_i(P)`, `|∧A| = ∧|A|`, `∧(A⁻¹) = (∧A)⁻¹` when `A` is
/// invertible, `∧H` Hermitian, and `∧P` positive semidefinite.
pub fn compound_property_check(a: &ComplexMatrix, b: &ComplexMatrix, k: usize, seed: u64) -> Result<CompoundReport> {
    if a.shape() != b.shape() {
        return Err(Error::invalid("compound_property_check needs equally shaped A and B"));
    }
    let n = a.nrows();
    let mut checks = Vec::new();
    let mut push = |name: &str, error: f64, tol: f64| {
        checks.push(IdentityCheck { name: name.into(), error, tol, pass: error <= tol });
    };
    let c = |m: &ComplexMatrix| compound(m, k).map(CompoundMatrix::into_matrix);

    let (ca, cb) = (c(a)?, c(b)?);
    push("product", relative_diff(&c(&(a * b))?, &(&ca * &cb)), COMPOUND_TOL);
    push("adjoint", relative_diff(&c(&a.adjoint())?, &ca.adjoint()), COMPOUND_TOL);
    push("transpose", relative_diff(&c(&a.transpose())?, &ca.transpose()), COMPOUND_TOL);

    let mut rng = rng_from_seed(seed);
    let g = random_psd(&mut rng, n, 1.0 / n as f64);
    let p = PsdMatrix::new(g.hermitian().add(&HermitianMatrix::identity(n).scale(0.5)))?;
    let omega: f64 = rand::Rng::random_range(&mut rng, -2.0..2.0);
    let h = random_hermitian(&mut rng, n, 1.0);

    let cp = PsdMatrix::symmetrized(&c(p.as_matrix())?)?;
    for (name, t) in [("power_half", 0.5), ("power_two", 2.0)] {
        push(name, relative_diff(&c(p.pow(t)?.as_matrix())?, cp.pow(t)?.as_matrix()), COMPOUND_TOL);
    }
    let z = C64::new(0.0, omega);
    push("power_imaginary", relative_diff(&c(&p.cpow(z)?)?, &cp.cpow(z)?), COMPOUND_TOL);

    let lp = p.spectrum();
    let mut products: Vec<f64> = Vec::new();
    for_each_subset(n, k, |s| products.push(s.iter().map(|&i| lp[i]).product()));
    products.sort_by(|x, y| y.total_cmp(x));
    let spec = cp.spectrum();
    let top = products[0];
    let spectrum_err = spec.iter().zip(&products).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max) / top;
    push("spectrum", spectrum_err, COMPOUND_TOL);
    let leading: f64 = lp[..k].iter().product();
    push("top_eigenvalue", (cp.max_eigenvalue() - leading).abs() / leading, COMPOUND_TOL);

    let abs_of_compound = matrix_abs(&ca)?;
    let compound_of_abs = c(matrix_abs(a)?.as_matrix())?;
    push("abs", relative_diff(&compound_of_abs, abs_of_compound.as_matrix()), COMPOUND_TOL);

    if let Ok(ainv) = inverse(a) {
        if let Ok(cainv) = inverse(&ca) {
            push("inverse", relative_diff(&c(&ainv)?, &cainv), COMPOUND_TOL);
        }
    }

    let ch = c(h.as_matrix())?;
    push("hermitian", max_abs_diff(&ch, &ch.adjoint()) / max_abs(&ch).max(1.0), 1e-12);

    let raw = HermitianMatrix::symmetrized(&c(g.as_matrix())?)?.eigh()?;
    let (hi, lo) = (raw.values[0], *raw.values.last().expect("non-empty"));
    push("psd", (-lo / hi).max(0.0), 1e-9);

    Ok(CompoundReport { n, k, seed, checks })
}
