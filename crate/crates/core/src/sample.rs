//! Seeded random matrices and vectors.
//!
//! Every generator draws from a [`ChaCha8Rng`], so a `(kind, n, seed, scale)`
//! tuple always yields the same bits on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::hermitian::{hermitian_part, ComplexMatrix, HermitianMatrix, PsdMatrix, C64};

pub type TrialRng = ChaCha8Rng;

/// Regularization added to sampled PSD matrices, relative to `scale`.
pub const PSD_REGULARIZATION: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SampleKind {
    Psd,
    Hermitian,
    General,
    Unitary,
}

pub fn rng_from_seed(seed: u64) -> TrialRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard complex Gaussian: real and imaginary parts `N(0, 1/2)`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    // fill row-major so the draw order is independent of storage layout
    let mut m = ComplexMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m[(i, j)] = complex_gaussian(rng);
        }
    }
    m
}

/// `scale · G`.
pub fn random_general<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize, scale: f64) -> ComplexMatrix {
    gaussian_matrix(rng, rows, cols).scale(scale)
}

/// `scale · (G + G*) / 2`.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize, scale: f64) -> HermitianMatrix {
    let g = gaussian_matrix(rng, n, n);
    HermitianMatrix::symmetrized(&hermitian_part(&g).scale(scale)).expect("finite square")
}

fn psd_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize, scale: f64) -> ComplexMatrix {
    let g = gaussian_matrix(rng, n, n);
    let mut m = (&g * g.adjoint()).scale(scale);
    for i in 0..n {
        m[(i, i)] += C64::new(PSD_REGULARIZATION * scale, 0.0);
    }
    hermitian_part(&m)
}

/// `scale · G G* + 1e-6 · scale · I`, strictly positive definite.
pub fn random_psd<R: Rng + ?Sized>(rng: &mut R, n: usize, scale: f64) -> PsdMatrix {
    PsdMatrix::symmetrized(&psd_matrix(rng, n, scale)).expect("sampled matrix is PSD")
}

/// Haar-distributed unitary: Gram–Schmidt (applied twice) on a Gaussian matrix.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let mut q = gaussian_matrix(rng, n, n);
    for j in 0..n {
        for _pass in 0..2 {
            for k in 0..j {
                let mut proj = C64::new(0.0, 0.0);
                for i in 0..n {
                    proj += q[(i, k)].conj() * q[(i, j)];
                }
                for i in 0..n {
                    let qk = q[(i, k)];
                    q[(i, j)] -= qk * proj;
                }
            }
        }
        let norm = (0..n).map(|i| q[(i, j)].norm_sqr()).sum::<f64>().sqrt();
        for i in 0..n {
            q[(i, j)] /= norm;
        }
    }
    q
}

/// Deterministic sample of the requested kind.
pub fn sample(kind: SampleKind, n: usize, seed: u64, scale: f64) -> ComplexMatrix {
    assert!(n >= 1, "dimension must be positive");
    let mut rng = rng_from_seed(seed);
    match kind {
        SampleKind::Psd => psd_matrix(&mut rng, n, scale),
        SampleKind::Hermitian => random_hermitian(&mut rng, n, scale).into_matrix(),
        SampleKind::General => random_general(&mut rng, n, n, scale),
        SampleKind::Unitary => random_unitary(&mut rng, n),
    }
}

/// Uniform vector on `[lo, hi)^n`.
pub fn uniform_vector<R: Rng + ?Sized>(rng: &mut R, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(lo..hi)).collect()
}

/// Log-normal positive vector `exp(sigma · N(0,1))`.
pub fn lognormal_vector<R: Rng + ?Sized>(rng: &mut R, n: usize, sigma: f64) -> Vec<f64> {
    (0..n)
        .map(|_| {
            let z: f64 = rng.sample(StandardNormal);
            (sigma * z).exp()
        })
        .collect()
}

/// Fisher–Yates permutation of `0..n`.
pub fn random_permutation<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i);
        p.swap(i, j);
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian::{max_abs_diff, PsdMatrix};

    #[test]
    fn deterministic_for_fixed_arguments() {
        for kind in [SampleKind::Psd, SampleKind::Hermitian, SampleKind::General, SampleKind::Unitary] {
            let a = sample(kind, 4, 99, 2.0);
            let b = sample(kind, 4, 99, 2.0);
            assert!(a
                .iter()
                .zip(b.iter())
                .all(|(x, y)| x.re.to_bits() == y.re.to_bits() && x.im.to_bits() == y.im.to_bits()));
            assert_ne!(a, sample(kind, 4, 100, 2.0));
        }
    }

    #[test]
    fn psd_floor_holds() {
        for seed in 0..50 {
            let scale = 0.5 + seed as f64 * 0.1;
            let p = PsdMatrix::symmetrized(&sample(SampleKind::Psd, 5, seed, scale)).unwrap();
            assert!(p.min_eigenvalue() >= 1e-6 * scale - 1e-12);
        }
    }

    #[test]
    fn unitary_is_unitary() {
        for seed in 0..20 {
            let u = sample(SampleKind::Unitary, 6, seed, 1.0);
            assert!(max_abs_diff(&(u.adjoint() * &u), &ComplexMatrix::identity(6, 6)) <= 1e-10);
        }
    }

    #[test]
    fn permutation_is_bijection() {
        let mut rng = rng_from_seed(1);
        for n in 1..10 {
            let mut p = random_permutation(&mut rng, n);
            p.sort();
            assert_eq!(p, (0..n).collect::<Vec<_>>());
        }
    }
}
