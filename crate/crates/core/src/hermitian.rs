//! Dense complex matrices with certified Hermitian / positive-semidefinite
//! structure, spectral matrix functions, `|X|`, and polar decomposition.
//!
//! Every spectrum in this crate is sorted descending (`λ_1 ≥ … ≥ λ_n`), ties
//! broken by the eigensolver's original index so reports stay deterministic.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Dense complex matrix, row/column count arbitrary.
pub type ComplexMatrix = DMatrix<C64>;

/// Relative tolerance for accepting a matrix as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Relative floor below which negative eigenvalues are clamped to zero.
pub const PSD_CLAMP: f64 = 1e-10;

pub fn max_abs(m: &ComplexMatrix) -> f64 {
    m.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
}

pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch");
    a.iter().zip(b.iter()).fold(0.0_f64, |acc, (x, y)| acc.max((x - y).norm()))
}

pub fn ensure_finite(m: &ComplexMatrix) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::invalid("matrix has non-finite entries"))
    }
}

fn ensure_square(m: &ComplexMatrix) -> Result<()> {
    if m.nrows() == m.ncols() && m.nrows() > 0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("expected a non-empty square matrix, got {}x{}", m.nrows(), m.ncols())))
    }
}

/// `(A + A*) / 2`.
pub fn hermitian_part(m: &ComplexMatrix) -> ComplexMatrix {
    (m + m.adjoint()).scale(0.5)
}

pub fn real_diagonal(d: &[f64]) -> ComplexMatrix {
    let n = d.len();
    ComplexMatrix::from_fn(n, n, |i, j| if i == j { C64::new(d[i], 0.0) } else { C64::new(0.0, 0.0) })
}

/// A Hermitian matrix stored in exactly-Hermitian canonical form.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix(ComplexMatrix);

impl HermitianMatrix {
    /// Accepts `m` if `max|m_ij - conj(m_ji)| <= 1e-12 * max|m_ij|`.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        ensure_square(&m)?;
        ensure_finite(&m)?;
        let scale = max_abs(&m);
        let n = m.nrows();
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
            }
        }
        if worst > HERMITIAN_TOL * scale {
            return Err(Error::invalid(format!(
                "matrix is not Hermitian: asymmetry {worst:e} exceeds {:e}",
                HERMITIAN_TOL * scale
            )));
        }
        Ok(Self(hermitian_part(&m)))
    }

    /// Projects onto the Hermitian part without any asymmetry check; used for
    /// products that are Hermitian in exact arithmetic.
    pub fn symmetrized(m: &ComplexMatrix) -> Result<Self> {
        ensure_square(m)?;
        ensure_finite(m)?;
        Ok(Self(hermitian_part(m)))
    }

    pub fn from_real_diagonal(d: &[f64]) -> Self {
        Self(real_diagonal(d))
    }

    pub fn identity(n: usize) -> Self {
        Self(ComplexMatrix::identity(n, n))
    }

    pub fn zeros(n: usize) -> Self {
        Self(ComplexMatrix::zeros(n, n))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn scale(&self, t: f64) -> Self {
        Self(self.0.scale(t))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(&self.0 + &other.0)
    }

    /// `U* A U` for a square `u`.
    pub fn congruence(&self, u: &ComplexMatrix) -> Result<Self> {
        Self::symmetrized(&(u.adjoint() * &self.0 * u))
    }

    pub fn eigh(&self) -> Result<EigenDecomposition> {
        eigh(self)
    }

    /// Matrix exponential; always positive definite.
    pub fn exp(&self) -> Result<PsdMatrix> {
        let eig = self.eigh()?;
        let values: Vec<f64> = eig.values.iter().map(|l| l.exp()).collect();
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NumericalFailure("exp overflowed".into()));
        }
        PsdMatrix::from_eigen(EigenDecomposition { vectors: eig.vectors, values })
    }
}

/// Eigenpairs of a Hermitian matrix, eigenvalues sorted descending.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    /// Unitary matrix whose columns are eigenvectors.
    pub vectors: ComplexMatrix,
    pub values: Vec<f64>,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// `U diag(f(λ)) U*`. Fails with `SingularSpectrum` on the first eigenvalue
    /// where `f` is not finite.
    pub fn apply<F: Fn(f64) -> C64>(&self, f: F) -> Result<ComplexMatrix> {
        let mut fvals = Vec::with_capacity(self.values.len());
        for &l in &self.values {
            let v = f(l);
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(Error::SingularSpectrum { eigenvalue: l, reason: "function value is not finite".into() });
            }
            fvals.push(v);
        }
        Ok(self.synthesize(&fvals))
    }

    /// `U diag(d) U*`.
    pub fn synthesize(&self, d: &[C64]) -> ComplexMatrix {
        let n = self.dim();
        let u = &self.vectors;
        let mut scaled = u.clone();
        for j in 0..n {
            let dj = d[j];
            for i in 0..n {
                scaled[(i, j)] *= dj;
            }
        }
        scaled * u.adjoint()
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        let d: Vec<C64> = self.values.iter().map(|&l| C64::new(l, 0.0)).collect();
        self.synthesize(&d)
    }
}

/// Hermitian eigendecomposition with descending eigenvalues.
pub fn eigh(a: &HermitianMatrix) -> Result<EigenDecomposition> {
    let m = a.as_matrix();
    ensure_finite(m)?;
    let n = m.nrows();
    if n == 1 {
        return Ok(EigenDecomposition { vectors: ComplexMatrix::identity(1, 1), values: vec![m[(0, 0)].re] });
    }
    let se = SymmetricEigen::try_new(m.clone(), f64::EPSILON, 10_000)
        .ok_or_else(|| Error::NumericalFailure("Hermitian eigensolver did not converge".into()))?;
    let mut order: Vec<usize> = (0..n).collect();
    // stable sort keeps the solver's index order on ties
    order.sort_by(|&i, &j| se.eigenvalues[j].total_cmp(&se.eigenvalues[i]));
    let values = order.iter().map(|&i| se.eigenvalues[i]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |r, c| se.eigenvectors[(r, order[c])]);
    Ok(EigenDecomposition { vectors, values })
}

/// `f(A) = Σ f(λ_i) u_i u_i*`.
pub fn matrix_fn<F: Fn(f64) -> C64>(a: &HermitianMatrix, f: F) -> Result<ComplexMatrix> {
    eigh(a)?.apply(f)
}

/// A Hermitian matrix with a certified nonnegative (clamped) spectrum.
///
/// The eigendecomposition is kept alongside the matrix so repeated spectral
/// functions (powers, logs, complex powers) do not re-diagonalize.
#[derive(Debug, Clone, PartialEq)]
pub struct PsdMatrix {
    matrix: HermitianMatrix,
    eig: EigenDecomposition,
}

impl PsdMatrix {
    /// Certifies `λ_min >= -1e-10 * max(1, λ_max)` and clamps the band to zero.
    pub fn new(h: HermitianMatrix) -> Result<Self> {
        let mut eig = h.eigh()?;
        let lmax = eig.values.first().copied().unwrap_or(0.0);
        let floor = -PSD_CLAMP * lmax.max(1.0);
        let lmin = eig.values.last().copied().unwrap_or(0.0);
        if lmin < floor {
            return Err(Error::invalid(format!("matrix is not positive semidefinite: λ_min = {lmin:e}")));
        }
        for v in &mut eig.values {
            if *v < 0.0 {
                *v = 0.0;
            }
        }
        Ok(Self { matrix: h, eig })
    }

    pub fn from_matrix(m: ComplexMatrix) -> Result<Self> {
        Self::new(HermitianMatrix::new(m)?)
    }

    /// Builds from a product that is PSD in exact arithmetic, symmetrizing first.
    pub fn symmetrized(m: &ComplexMatrix) -> Result<Self> {
        Self::new(HermitianMatrix::symmetrized(m)?)
    }

    /// Builds from eigenpairs; values must be sorted descending and nonnegative.
    pub fn from_eigen(eig: EigenDecomposition) -> Result<Self> {
        if eig.values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::invalid("spectrum must be finite and nonnegative"));
        }
        if eig.values.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::invalid("spectrum must be sorted descending"));
        }
        let matrix = HermitianMatrix::symmetrized(&eig.reconstruct())?;
        Ok(Self { matrix, eig })
    }

    pub fn from_real_diagonal(d: &[f64]) -> Result<Self> {
        Self::new(HermitianMatrix::from_real_diagonal(d))
    }

    pub fn identity(n: usize) -> Self {
        Self::new(HermitianMatrix::identity(n)).expect("identity is PSD")
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn as_matrix(&self) -> &ComplexMatrix {
        self.matrix.as_matrix()
    }

    pub fn hermitian(&self) -> &HermitianMatrix {
        &self.matrix
    }

    pub fn eigen(&self) -> &EigenDecomposition {
        &self.eig
    }

    /// Clamped eigenvalues, descending.
    pub fn spectrum(&self) -> &[f64] {
        &self.eig.values
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eig.values[0]
    }

    pub fn min_eigenvalue(&self) -> f64 {
        *self.eig.values.last().expect("non-empty")
    }

    pub fn is_positive_definite(&self) -> bool {
        self.min_eigenvalue() > 0.0
    }

    /// `A^r` for real `r`; negative `r` requires a positive spectrum.
    pub fn pow(&self, r: f64) -> Result<PsdMatrix> {
        let mut values = Vec::with_capacity(self.dim());
        for &l in &self.eig.values {
            if l == 0.0 && r < 0.0 {
                return Err(Error::SingularSpectrum {
                    eigenvalue: l,
                    reason: format!("negative power {r} of a zero eigenvalue"),
                });
            }
            let v = if r == 0.0 { 1.0 } else { l.powf(r) };
            if !v.is_finite() {
                return Err(Error::SingularSpectrum { eigenvalue: l, reason: format!("power {r} overflowed") });
            }
            values.push(v);
        }
        // negative powers reverse the order
        let eig = if r < 0.0 {
            let mut vectors = self.eig.vectors.clone();
            let n = values.len();
            for j in 0..n / 2 {
                vectors.swap_columns(j, n - 1 - j);
            }
            values.reverse();
            EigenDecomposition { vectors, values }
        } else {
            EigenDecomposition { vectors: self.eig.vectors.clone(), values }
        };
        PsdMatrix::from_eigen(eig)
    }

    /// `A^z = U diag(exp(z log λ)) U*` for complex `z`; requires `λ > 0`.
    pub fn cpow(&self, z: C64) -> Result<ComplexMatrix> {
        if z == C64::new(0.0, 0.0) {
            return Ok(ComplexMatrix::identity(self.dim(), self.dim()));
        }
        let mut d = Vec::with_capacity(self.dim());
        for &l in &self.eig.values {
            if l <= 0.0 {
                return Err(Error::SingularSpectrum {
                    eigenvalue: l,
                    reason: "complex power needs a strictly positive spectrum".into(),
                });
            }
            d.push((z * l.ln()).exp());
        }
        Ok(self.eig.synthesize(&d))
    }

    /// Matrix logarithm; requires `λ > 0`.
    pub fn log(&self) -> Result<HermitianMatrix> {
        let m = self.eig.apply(|l| if l > 0.0 { C64::new(l.ln(), 0.0) } else { C64::new(f64::NAN, 0.0) })?;
        HermitianMatrix::symmetrized(&m)
    }

    /// `τA + (1-τ)B`.
    pub fn convex_combination(tau: f64, a: &PsdMatrix, b: &PsdMatrix) -> Result<PsdMatrix> {
        if a.dim() != b.dim() {
            return Err(Error::invalid("dimension mismatch in convex combination"));
        }
        let m = a.as_matrix().scale(tau) + b.as_matrix().scale(1.0 - tau);
        PsdMatrix::symmetrized(&m)
    }
}

/// `|X| = (X*X)^{1/2}`. Rectangular `X` (n×m) yields an m×m result.
pub fn matrix_abs(x: &ComplexMatrix) -> Result<PsdMatrix> {
    ensure_finite(x)?;
    if x.nrows() == 0 || x.ncols() == 0 {
        return Err(Error::invalid("empty matrix"));
    }
    let gram = HermitianMatrix::symmetrized(&(x.adjoint() * x))?;
    let eig = gram.eigh()?;
    let values = eig.values.iter().map(|&l| l.max(0.0).sqrt()).collect();
    PsdMatrix::from_eigen(EigenDecomposition { vectors: eig.vectors, values })
}

/// Polar decomposition `M = Q |M|` of a square invertible matrix.
pub fn polar(m: &ComplexMatrix) -> Result<(ComplexMatrix, PsdMatrix)> {
    ensure_square(m)?;
    let p = matrix_abs(m)?;
    let smax = p.max_eigenvalue();
    let smin = p.min_eigenvalue();
    if smin.is_nan() || smin < 1e-10 * smax || smax == 0.0 {
        return Err(Error::IllConditioned(format!(
            "smallest singular value {smin:e} is below 1e-10 x largest {smax:e}"
        )));
    }
    let inv: Vec<C64> = p.spectrum().iter().map(|&s| C64::new(1.0 / s, 0.0)).collect();
    let q = m * p.eigen().synthesize(&inv);
    Ok((q, p))
}

/// Singular values (descending, `min(rows, cols)` of them) by one-sided
/// Jacobi on the columns.
///
/// For column-scaled inputs `X = B·D` the values carry relative accuracy of
/// order `ε·cond(B)`, independent of how graded `D` is.
pub fn singular_values(x: &ComplexMatrix) -> Result<Vec<f64>> {
    ensure_finite(x)?;
    // work on the orientation with fewer columns
    let mut a = if x.ncols() > x.nrows() { x.adjoint() } else { x.clone() };
    let (rows, cols) = a.shape();
    let tol = f64::EPSILON * (rows as f64).sqrt();
    let mut converged = false;
    for _sweep in 0..80 {
        let mut rotated = false;
        for i in 0..cols {
            for j in (i + 1)..cols {
                let (mut alpha, mut beta, mut gamma) = (0.0, 0.0, C64::new(0.0, 0.0));
                for r in 0..rows {
                    let xi = a[(r, i)];
                    let xj = a[(r, j)];
                    alpha += xi.norm_sqr();
                    beta += xj.norm_sqr();
                    gamma += xi.conj() * xj;
                }
                let g = gamma.norm();
                if g == 0.0 || g <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = if zeta >= 0.0 {
                    1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
                } else {
                    -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for r in 0..rows {
                    let xi = a[(r, i)];
                    let xj = a[(r, j)] * phase.conj();
                    a[(r, i)] = xi * c - xj * s;
                    a[(r, j)] = xi * s + xj * c;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NumericalFailure("one-sided Jacobi SVD did not converge".into()));
    }
    let mut sv: Vec<f64> = (0..cols).map(|j| (0..rows).map(|r| a[(r, j)].norm_sqr()).sum::<f64>().sqrt()).collect();
    sv.sort_by(|p, q| q.total_cmp(p));
    Ok(sv)
}

/// Eigenvalues of `|X|^p`, i.e. `σ(X)^p`, descending, `ncols(X)` entries
/// (zero-padded when `X` is wide).
pub fn abs_power_spectrum(x: &ComplexMatrix, p: f64) -> Result<Vec<f64>> {
    let mut sv = singular_values(x)?;
    sv.resize(x.ncols(), 0.0);
    Ok(sv.into_iter().map(|s| if p == 1.0 { s } else { s.powf(p) }).collect())
}

/// Matrix inverse via LU; fails on exact singularity.
pub fn inverse(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    ensure_square(m)?;
    m.clone().try_inverse().ok_or_else(|| Error::IllConditioned("matrix is singular".into()))
}
