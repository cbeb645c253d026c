//! Small dense complex linear algebra: a cyclic Jacobi eigensolver for
//! hermitian matrices and the matrix functions built on it.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type C64 = Complex64;

pub const I: C64 = C64 { re: 0.0, im: 1.0 };
pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// Eigen-decomposition `A = V diag(values) V*` of a hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Eigenvalues in ascending order.
    pub values: Vec<f64>,
    /// Unitary matrix whose columns are the matching eigenvectors.
    pub vectors: DMatrix<C64>,
}

impl HermitianEigen {
    /// Reassemble `Σ f(λ_k) v_k v_k*`.
    pub fn apply_function<F: Fn(f64) -> C64>(&self, f: F) -> DMatrix<C64> {
        let n = self.values.len();
        let mut out = DMatrix::<C64>::zeros(n, n);
        for (k, &lam) in self.values.iter().enumerate() {
            let w = f(lam);
            let v = self.vectors.column(k);
            for i in 0..n {
                let vi = v[i] * w;
                for j in 0..n {
                    out[(i, j)] += vi * v[j].conj();
                }
            }
        }
        out
    }
}

/// Largest deviation of `a` from its conjugate transpose.
pub fn hermitian_defect(a: &DMatrix<C64>) -> f64 {
    let n = a.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            worst = worst.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    worst
}

fn off_diagonal_norm(a: &DMatrix<C64>) -> f64 {
    let n = a.nrows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Cyclic Jacobi sweeps on a hermitian matrix. Only the hermitian part of
/// the input is used.
pub fn hermitian_eigen(input: &DMatrix<C64>) -> HermitianEigen {
    let n = input.nrows();
    assert_eq!(n, input.ncols(), "hermitian_eigen needs a square matrix");
    let mut a = DMatrix::<C64>::from_fn(n, n, |i, j| (input[(i, j)] + input[(j, i)].conj()) * 0.5);
    let mut v = DMatrix::<C64>::identity(n, n);
    let scale = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);

    for _sweep in 0..100 {
        if off_diagonal_norm(&a) <= 1e-17 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let b = a[(p, q)];
                let beta = b.norm();
                if beta <= 1e-300 {
                    continue;
                }
                let phase = b / beta;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = 0.5 * (2.0 * beta).atan2(app - aqq);
                let (s, c) = theta.sin_cos();
                // J = diag(1, e^{-iφ}) · [[c, -s], [s, c]]
                let j00 = C64::new(c, 0.0);
                let j01 = C64::new(-s, 0.0);
                let j10 = phase.conj() * s;
                let j11 = phase.conj() * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * j00 + akq * j10;
                    a[(k, q)] = akp * j01 + akq * j11;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = j00.conj() * apk + j10.conj() * aqk;
                    a[(q, k)] = j01.conj() * apk + j11.conj() * aqk;
                }
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * j00 + vkq * j10;
                    v[(k, q)] = vkp * j01 + vkq * j11;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[(x, x)].re.total_cmp(&a[(y, y)].re));
    let values = order.iter().map(|&k| a[(k, k)].re).collect();
    let vectors = DMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    HermitianEigen { values, vectors }
}

/// `f(A)` for hermitian `A` through the Jacobi eigensystem.
pub fn hermitian_function<F: Fn(f64) -> C64>(a: &DMatrix<C64>, f: F) -> DMatrix<C64> {
    hermitian_eigen(a).apply_function(f)
}

/// Max-abs entry of `a - b`.
pub fn max_abs_diff(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_hermitian(n: usize, seed: u64) -> DMatrix<C64> {
        let mut state = seed;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64) / ((1u64 << 53) as f64) - 0.5
        };
        let m = DMatrix::<C64>::from_fn(n, n, |_, _| C64::new(next(), next()));
        &m + m.adjoint()
    }

    #[test]
    fn jacobi_diagonalizes_random_hermitian() {
        for n in [1, 2, 3, 7, 20] {
            let a = sample_hermitian(n, 17 + n as u64);
            let eig = hermitian_eigen(&a);
            let rebuilt = eig.apply_function(C64::from);
            assert!(max_abs_diff(&a, &rebuilt) < 1e-12, "n = {n}");
            let gram = eig.vectors.adjoint() * &eig.vectors;
            assert!(max_abs_diff(&gram, &DMatrix::identity(n, n)) < 1e-12);
            assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn jacobi_matches_nalgebra_symmetric_eigen() {
        let a = sample_hermitian(9, 3);
        let ours = hermitian_eigen(&a).values;
        let mut theirs: Vec<f64> = a.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
        theirs.sort_by(f64::total_cmp);
        for (x, y) in ours.iter().zip(&theirs) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn degenerate_spectrum() {
        let a = DMatrix::<C64>::identity(4, 4) * C64::new(2.5, 0.0);
        let eig = hermitian_eigen(&a);
        assert!(eig.values.iter().all(|&x| (x - 2.5).abs() < 1e-15));
    }
}
