//! Majorization verdicts and constructive witnesses.
//!
//! `a ≺_w b` means every prefix sum of `a` sorted descending is at most the
//! matching prefix sum of `b`; `a ≺ b` additionally requires equal totals.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hermitian::{singular_values, ComplexMatrix, HermitianMatrix, PsdMatrix};

/// Relative tolerance for prefix-slack comparisons.
pub const MAJORIZATION_TOL: f64 = 1e-10;

const DS_ENTRY_TOL: f64 = 1e-12;
const DS_SUM_TOL: f64 = 1e-10;
const BIRKHOFF_MAX_N: usize = 12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MajorizationVerdict {
    pub weak: bool,
    pub strict: bool,
    /// `Σ_{j≤k} b_[j] − Σ_{j≤k} a_[j]` for `k = 1..n`.
    pub prefix_slacks: Vec<f64>,
    /// `Σ b − Σ a`.
    pub sum_gap: f64,
    pub scale: f64,
}

impl MajorizationVerdict {
    pub fn min_slack(&self) -> f64 {
        self.prefix_slacks.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    /// Slack normalized by the verdict's scale.
    pub fn relative_min_slack(&self) -> f64 {
        self.min_slack() / self.scale
    }
}

fn sorted_desc(v: &[f64]) -> Vec<f64> {
    let mut s = v.to_vec();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

/// Indices of `v` ordered by descending value, ties by index.
fn argsort_desc(v: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&i, &j| v[j].total_cmp(&v[i]).then(i.cmp(&j)));
    idx
}

fn check_pair(a: &[f64], b: &[f64]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::invalid(format!("length mismatch: {} vs {}", a.len(), b.len())));
    }
    if a.is_empty() {
        return Err(Error::invalid("majorization needs non-empty vectors"));
    }
    if a.iter().chain(b).any(|v| !v.is_finite()) {
        return Err(Error::invalid("majorization inputs must be finite"));
    }
    Ok(())
}

/// Decides `a ≺_w b` and `a ≺ b`; with `log_domain` both vectors are
/// replaced by their entrywise logarithms first.
pub fn verdict(a: &[f64], b: &[f64], log_domain: bool) -> Result<MajorizationVerdict> {
    check_pair(a, b)?;
    let (a, b) = if log_domain {
        let log = |v: &[f64]| -> Result<Vec<f64>> {
            v.iter()
                .map(|&x| {
                    if x > 1e-300 {
                        Ok(x.ln())
                    } else {
                        Err(Error::invalid(format!("log-domain majorization needs positive entries, got {x:e}")))
                    }
                })
                .collect()
        };
        (log(a)?, log(b)?)
    } else {
        (a.to_vec(), b.to_vec())
    };
    let (sa, sb) = (sorted_desc(&a), sorted_desc(&b));
    let l1 = |v: &[f64]| v.iter().map(|x| x.abs()).sum::<f64>();
    let scale = 1f64.max(l1(&sa)).max(l1(&sb));
    let tol = MAJORIZATION_TOL * scale;

    let mut prefix_slacks = Vec::with_capacity(sa.len());
    let (mut pa, mut pb) = (0.0, 0.0);
    for (x, y) in sa.iter().zip(&sb) {
        pa += x;
        pb += y;
        prefix_slacks.push(pb - pa);
    }
    let sum_gap = pb - pa;
    let weak = prefix_slacks.iter().all(|&s| s >= -tol);
    Ok(MajorizationVerdict { weak, strict: weak && sum_gap.abs() <= tol, prefix_slacks, sum_gap, scale })
}

/// Returns `c` with `a ≤ c` entrywise and `c ≺ b`.
///
/// The deficit `Σb − Σa` is water-filled onto the smallest entries of `a`:
/// `c_i = max(a_i, L)` on the lowest block, with the level `L` fixed by the
/// total. The untouched entries keep their prefix sums from `a ≺_w b`, and
/// the filled tail has average `L`, which dominates every tail average of `b`.
pub fn bridge(a: &[f64], b: &[f64]) -> Result<Vec<f64>> {
    let v = verdict(a, b, false)?;
    if !v.weak {
        return Err(Error::PreconditionFailed(format!(
            "bridge needs a ≺_w b; minimum prefix slack is {:e}",
            v.min_slack()
        )));
    }
    let n = a.len();
    let deficit = v.sum_gap.max(0.0);
    if deficit == 0.0 {
        return Ok(a.to_vec());
    }
    // ascending order, ties by index
    let mut order = argsort_desc(a);
    order.reverse();
    let mut filled = 0.0;
    let mut m = 0;
    let mut level = 0.0;
    while m < n {
        filled += a[order[m]];
        m += 1;
        level = (filled + deficit) / m as f64;
        if m == n || level <= a[order[m]] {
            break;
        }
    }
    let mut c = a.to_vec();
    for &i in &order[..m] {
        c[i] = level;
    }
    Ok(c)
}

/// Nonnegative square matrix with unit row and column sums.
#[derive(Debug, Clone, PartialEq)]
pub struct DoublyStochasticMatrix(DMatrix<f64>);

impl DoublyStochasticMatrix {
    pub fn new(d: DMatrix<f64>) -> Result<Self> {
        if !d.is_square() || d.nrows() == 0 {
            return Err(Error::invalid("doubly stochastic matrix must be square and non-empty"));
        }
        if d.iter().any(|x| !x.is_finite() || *x < -DS_ENTRY_TOL) {
            return Err(Error::invalid("doubly stochastic entries must be finite and nonnegative"));
        }
        let n = d.nrows();
        for i in 0..n {
            let (r, c) = (d.row(i).sum(), d.column(i).sum());
            if (r - 1.0).abs() > DS_SUM_TOL || (c - 1.0).abs() > DS_SUM_TOL {
                return Err(Error::invalid(format!("row/column {i} sums ({r}, {c}) differ from 1")));
            }
        }
        Ok(Self(d))
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let n = self.dim();
        (0..n).map(|i| (0..n).map(|j| self.0[(i, j)] * v[j]).sum()).collect()
    }
}

/// Builds `D` with `D b = a` for `a ≺ b`, as a product of at most `n − 1`
/// T-transforms `λI + (1 − λ)Q_{jk}` acting on the sorted vectors.
pub fn ds_from_majorization(a: &[f64], b: &[f64]) -> Result<DoublyStochasticMatrix> {
    let v = verdict(a, b, false)?;
    if !v.strict {
        return Err(Error::PreconditionFailed(format!(
            "ds_from_majorization needs a ≺ b (min slack {:e}, sum gap {:e})",
            v.min_slack(),
            v.sum_gap
        )));
    }
    let n = a.len();
    let (ia, ib) = (argsort_desc(a), argsort_desc(b));
    let target: Vec<f64> = ia.iter().map(|&i| a[i]).collect();
    let mut x: Vec<f64> = ib.iter().map(|&i| b[i]).collect();
    let eps = 1e-14 * v.scale;

    let mut d = DMatrix::<f64>::identity(n, n);
    for _ in 0..n {
        let Some(j) = (0..n).rev().find(|&j| x[j] > target[j] + eps) else { break };
        let Some(k) = (j + 1..n).find(|&k| x[k] < target[k] - eps) else { break };
        let (over, under) = (x[j] - target[j], target[k] - x[k]);
        let delta = over.min(under);
        let mu = delta / (x[j] - x[k]);
        let lambda = 1.0 - mu;
        let (xj, xk) = (x[j], x[k]);
        if over <= under {
            x[j] = target[j];
            x[k] = xk + delta;
        } else {
            x[k] = target[k];
            x[j] = xj - delta;
        }
        for c in 0..n {
            let (rj, rk) = (d[(j, c)], d[(k, c)]);
            d[(j, c)] = lambda * rj + mu * rk;
            d[(k, c)] = lambda * rk + mu * rj;
        }
    }

    let mut out = DMatrix::<f64>::zeros(n, n);
    for (r, &ra) in ia.iter().enumerate() {
        for (c, &cb) in ib.iter().enumerate() {
            out[(ra, cb)] = d[(r, c)];
        }
    }
    DoublyStochasticMatrix::new(out)
}

/// A bijection of `0..n`; entry `i` is the column matched to row `i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &i in &image {
            if i >= n || seen[i] {
                return Err(Error::invalid("not a permutation"));
            }
            seen[i] = true;
        }
        Ok(Self(image))
    }

    pub fn identity(n: usize) -> Self {
        Self((0..n).collect())
    }

    pub fn image(&self) -> &[usize] {
        &self.0
    }

    /// `(P v)_i = v_{σ(i)}` for the permutation matrix with ones at `(i, σ(i))`.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        self.0.iter().map(|&j| v[j]).collect()
    }

    pub fn to_matrix(&self) -> DMatrix<f64> {
        let n = self.0.len();
        DMatrix::from_fn(n, n, |i, j| if self.0[i] == j { 1.0 } else { 0.0 })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BirkhoffTerm {
    pub weight: f64,
    pub permutation: Permutation,
}

/// Kuhn's augmenting-path matching, rows and columns visited in increasing
/// order.
fn perfect_matching(support: &DMatrix<bool>) -> Option<Vec<usize>> {
    let n = support.nrows();
    let mut col_owner: Vec<Option<usize>> = vec![None; n];

    fn augment(row: usize, support: &DMatrix<bool>, seen: &mut [bool], col_owner: &mut [Option<usize>]) -> bool {
        for col in 0..support.ncols() {
            if support[(row, col)] && !seen[col] {
                seen[col] = true;
                let free = match col_owner[col] {
                    None => true,
                    Some(other) => augment(other, support, seen, col_owner),
                };
                if free {
                    col_owner[col] = Some(row);
                    return true;
                }
            }
        }
        false
    }

    for row in 0..n {
        let mut seen = vec![false; n];
        if !augment(row, support, &mut seen, &mut col_owner) {
            return None;
        }
    }
    let mut image = vec![0; n];
    for (col, owner) in col_owner.iter().enumerate() {
        image[owner.expect("perfect matching")] = col;
    }
    Some(image)
}

/// Greedy Birkhoff–von Neumann decomposition `D = Σ τ_j P_j`.
pub fn birkhoff(d: &DoublyStochasticMatrix) -> Result<Vec<BirkhoffTerm>> {
    let n = d.dim();
    if n > BIRKHOFF_MAX_N {
        return Err(Error::ResourceLimit(format!("birkhoff supports n ≤ {BIRKHOFF_MAX_N}, got {n}")));
    }
    let mut residual = d.as_matrix().map(|x| x.max(0.0));
    let mut terms = Vec::new();
    let mut mass = 1.0;
    let max_terms = (n - 1) * (n - 1) + 1;
    while mass > 1e-12 {
        if terms.len() == max_terms {
            return Err(Error::NumericalFailure(format!(
                "birkhoff exceeded {max_terms} terms with residual mass {mass:e}"
            )));
        }
        let support = residual.map(|x| x > DS_ENTRY_TOL);
        let Some(image) = perfect_matching(&support) else {
            if mass <= 1e-9 {
                break;
            }
            return Err(Error::NumericalFailure(format!(
                "no perfect matching on the positive support with residual mass {mass:e}"
            )));
        };
        let weight = image.iter().enumerate().map(|(i, &j)| residual[(i, j)]).fold(f64::INFINITY, f64::min);
        for (i, &j) in image.iter().enumerate() {
            residual[(i, j)] = if residual[(i, j)] == weight { 0.0 } else { residual[(i, j)] - weight };
        }
        mass -= weight;
        terms.push(BirkhoffTerm { weight, permutation: Permutation(image) });
    }
    Ok(terms)
}

pub fn birkhoff_reconstruct(terms: &[BirkhoffTerm], n: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(n, n);
    for t in terms {
        m += t.permutation.to_matrix() * t.weight;
    }
    m
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectralRelation {
    /// `λ(A + B) ≺ λ(A) + λ(B)` for Hermitian `A, B`.
    Sum,
    /// `log λ(|AB|) ≺ log(λ(A)λ(B))` for positive definite `A, B`.
    Product,
}

/// Both sides of a spectral majorization relation, with its verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralMajorization {
    pub relation: SpectralRelation,
    pub lhs: Vec<f64>,
    pub rhs: Vec<f64>,
    pub verdict: MajorizationVerdict,
}

/// Singular values of `AB` for positive definite `A`, `B`.
///
/// Computed from `Λ_A (U_A* U_B) Λ_B`, a unitary matrix scaled on both sides,
/// where one-sided Jacobi keeps small singular values to high relative
/// accuracy.
pub fn product_singular_values(a: &PsdMatrix, b: &PsdMatrix) -> Result<Vec<f64>> {
    let (ea, eb) = (a.eigen(), b.eigen());
    let w: ComplexMatrix = ea.vectors.adjoint() * &eb.vectors;
    let n = a.dim();
    let x = ComplexMatrix::from_fn(n, n, |i, j| w[(i, j)] * (ea.values[i] * eb.values[j]));
    singular_values(&x)
}

pub fn eigen_majorization_check(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    relation: SpectralRelation,
) -> Result<SpectralMajorization> {
    if a.dim() != b.dim() {
        return Err(Error::invalid("spectral majorization needs equal dimensions"));
    }
    let (lhs, rhs, log_domain): (Vec<f64>, Vec<f64>, bool) = match relation {
        SpectralRelation::Sum => {
            let lhs = a.add(b).eigh()?.values;
            let (la, lb) = (a.eigh()?.values, b.eigh()?.values);
            (lhs, la.iter().zip(&lb).map(|(x, y)| x + y).collect(), false)
        }
        SpectralRelation::Product => {
            let pa = PsdMatrix::new(a.clone())?;
            let pb = PsdMatrix::new(b.clone())?;
            for p in [&pa, &pb] {
                if p.min_eigenvalue() <= 1e-8 * p.max_eigenvalue() {
                    return Err(Error::PreconditionFailed(format!(
                        "product relation needs λ_min > 1e-8·λ_max, got {:e} vs {:e}",
                        p.min_eigenvalue(),
                        p.max_eigenvalue()
                    )));
                }
            }
            let lhs = product_singular_values(&pa, &pb)?;
            let rhs = pa.spectrum().iter().zip(pb.spectrum()).map(|(x, y)| x * y).collect();
            (lhs, rhs, true)
        }
    };
    let verdict = verdict(&lhs, &rhs, log_domain)?;
    Ok(SpectralMajorization { relation, lhs, rhs, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::{random_psd, rng_from_seed, uniform_vector};
    use rand::Rng;

    #[test]
    fn verdict_examples() {
        let v = verdict(&[3.0, 2.0, 1.0], &[4.0, 1.0, 1.0], false).unwrap();
        assert!(v.weak && v.strict);
        assert_eq!(v.prefix_slacks, vec![1.0, 0.0, 0.0]);
        assert_eq!(v.sum_gap, 0.0);

        let v = verdict(&[0.5, 7.0], &[0.5, 7.0], false).unwrap();
        assert!(v.strict && v.prefix_slacks.iter().all(|s| *s == 0.0));

        let v = verdict(&[5.0, 0.0], &[4.0, 1.0], false).unwrap();
        assert!(!v.weak);
        assert_eq!(v.prefix_slacks[0], -1.0);

        assert!(verdict(&[1.0, 0.0], &[1.0, 1.0], true).is_err());
        assert!(verdict(&[1.0], &[1.0, 1.0], false).is_err());
    }

    #[test]
    fn verdict_permutation_invariant() {
        let v1 = verdict(&[1.0, 3.0, 2.0], &[0.0, 4.0, 2.0], false).unwrap();
        let v2 = verdict(&[2.0, 1.0, 3.0], &[4.0, 2.0, 0.0], false).unwrap();
        assert_eq!(v1, v2);
    }

    #[test]
    fn bridge_examples() {
        assert_eq!(bridge(&[3.0, 2.0, 1.0], &[4.0, 1.0, 1.0]).unwrap(), vec![3.0, 2.0, 1.0]);
        let c = bridge(&[1.0, 1.0], &[3.0, 1.0]).unwrap();
        assert!(c.iter().all(|&x| x >= 1.0));
        assert!(verdict(&c, &[3.0, 1.0], false).unwrap().strict);
        let c = bridge(&[0.0, 0.0], &[1.0, 1.0]).unwrap();
        assert_eq!(c, vec![1.0, 1.0]);
        assert!(matches!(bridge(&[5.0, 0.0], &[4.0, 1.0]), Err(Error::PreconditionFailed(_))));
    }

    /// `a = D b − shift` with `D` a random mix of three permutations.
    fn weakly_majorized_pair<R: Rng>(rng: &mut R, n: usize) -> (Vec<f64>, Vec<f64>) {
        let b = uniform_vector(rng, n, -2.0, 5.0);
        let mut d = DMatrix::<f64>::zeros(n, n);
        let weights: Vec<f64> = (0..3).map(|_| rng.random_range(0.1..1.0)).collect();
        let total: f64 = weights.iter().sum();
        for w in &weights {
            let p = crate::sample::random_permutation(rng, n);
            for i in 0..n {
                d[(i, p[i])] += w / total;
            }
        }
        let a = (0..n).map(|i| (0..n).map(|j| d[(i, j)] * b[j]).sum::<f64>() - rng.random_range(0.0..0.5)).collect();
        (a, b)
    }

    #[test]
    fn bridge_random() {
        let mut rng = rng_from_seed(11);
        for _ in 0..2000 {
            let n = rng.random_range(1..=8);
            let (a, b) = weakly_majorized_pair(&mut rng, n);
            let c = bridge(&a, &b).unwrap();
            let scale = verdict(&a, &b, false).unwrap().scale;
            assert!(a.iter().zip(&c).all(|(x, y)| y - x >= -1e-10 * scale));
            assert!(verdict(&c, &b, false).unwrap().strict);
        }
    }

    #[test]
    fn ds_examples() {
        let d = ds_from_majorization(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(d.as_matrix(), &DMatrix::identity(3, 3));
        let d = ds_from_majorization(&[2.0, 2.0], &[3.0, 1.0]).unwrap();
        assert!((d.as_matrix() - DMatrix::from_element(2, 2, 0.5)).amax() < 1e-15);
        assert!(matches!(ds_from_majorization(&[1.0, 1.0], &[3.0, 1.0]), Err(Error::PreconditionFailed(_))));
    }

    #[test]
    fn ds_and_birkhoff_random() {
        let mut rng = rng_from_seed(12);
        for _ in 0..2000 {
            let n = rng.random_range(1..=8);
            let (a, b) = weakly_majorized_pair(&mut rng, n);
            let c = bridge(&a, &b).unwrap();
            let d = ds_from_majorization(&c, &b).unwrap();
            let db = d.apply(&b);
            let scale = verdict(&c, &b, false).unwrap().scale;
            assert!(db.iter().zip(&c).all(|(x, y)| (x - y).abs() <= 1e-9 * scale));
            let terms = birkhoff(&d).unwrap();
            assert!(terms.len() <= (n - 1) * (n - 1) + 1);
            assert!((terms.iter().map(|t| t.weight).sum::<f64>() - 1.0).abs() <= 1e-9);
            assert!(terms.iter().all(|t| t.weight > 1e-12));
            assert!((birkhoff_reconstruct(&terms, n) - d.as_matrix()).amax() <= 1e-8);
            let mix: Vec<f64> =
                (0..n).map(|i| terms.iter().map(|t| t.weight * t.permutation.apply(&b)[i]).sum()).collect();
            assert!(mix.iter().zip(&c).all(|(x, y)| (x - y).abs() <= 1e-8 * scale));
        }
    }

    #[test]
    fn birkhoff_examples() {
        let t = birkhoff(&DoublyStochasticMatrix::identity(3)).unwrap();
        assert_eq!(t, vec![BirkhoffTerm { weight: 1.0, permutation: Permutation::identity(3) }]);
        let half = DoublyStochasticMatrix::new(DMatrix::from_element(2, 2, 0.5)).unwrap();
        let t = birkhoff(&half).unwrap();
        assert_eq!(t.len(), 2);
        assert!(t.iter().all(|t| t.weight == 0.5));
        assert_ne!(t[0].permutation, t[1].permutation);
    }

    #[test]
    fn spectral_relations() {
        let mut rng = rng_from_seed(13);
        let i3 = HermitianMatrix::identity(3);
        for rel in [SpectralRelation::Sum, SpectralRelation::Product] {
            let r = eigen_majorization_check(&i3, &i3, rel).unwrap();
            assert!(r.verdict.strict);
        }
        for _ in 0..200 {
            let a = random_psd(&mut rng, 6, 1.0);
            let b = random_psd(&mut rng, 6, 1.0);
            let r = eigen_majorization_check(a.hermitian(), b.hermitian(), SpectralRelation::Product).unwrap();
            assert!(r.verdict.strict, "{:?}", r.verdict);
            // det|AB| = det A det B
            let lhs: f64 = r.lhs.iter().map(|x| x.ln()).sum();
            let rhs: f64 = r.rhs.iter().map(|x| x.ln()).sum();
            assert!((lhs - rhs).abs() <= 1e-8 * rhs.abs().max(1.0));
        }
    }
}
