//! Hermitian eigendecomposition by cyclic complex Jacobi rotations.
//!
//! Each rotation first removes the phase of the pivot element with a diagonal unitary and then
//! applies the classical real Jacobi rotation, so the accumulated transform stays unitary.

use num_complex::Complex;
use num_traits::Zero;

use super::{ComplexMatrix, QcoreError};
use crate::scalar::Real;

const MAX_DIM: usize = 8;
const MAX_SWEEPS: usize = 64;

/// Eigenvalues in ascending order with the matching orthonormal eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct HermitianEigen<T> {
    pub values: Vec<T>,
    pub vectors: ComplexMatrix<T>,
}

impl<T: Real> HermitianEigen<T> {
    pub fn vector(&self, k: usize) -> Vec<Complex<T>> {
        self.vectors.column(k)
    }

    pub fn min_value(&self) -> T {
        self.values[0]
    }

    /// V f(Λ) V†.
    pub fn reconstruct_with(&self, f: impl Fn(T) -> T) -> ComplexMatrix<T> {
        let n = self.values.len();
        let mut out = ComplexMatrix::zeros(n, n);
        for (k, &lambda) in self.values.iter().enumerate() {
            let w = f(lambda);
            if w == T::zero() {
                continue;
            }
            for i in 0..n {
                let vi = self.vectors.get(i, k) * w;
                for j in 0..n {
                    let cur = out.get(i, j);
                    out.set(i, j, cur + vi * self.vectors.get(j, k).conj());
                }
            }
        }
        out
    }

    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        self.reconstruct_with(|x| x)
    }
}

fn off_diagonal_sqr<T: Real>(a: &ComplexMatrix<T>) -> T {
    let n = a.rows();
    let mut s = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s = s + a.get(i, j).norm_sqr();
            }
        }
    }
    s
}

/// Eigendecomposition of a Hermitian matrix of dimension ≤ 8.
pub fn eig_hermitian<T: Real>(m: &ComplexMatrix<T>) -> Result<HermitianEigen<T>, QcoreError> {
    if !m.is_square() {
        return Err(QcoreError::Dimension {
            expected: m.rows(),
            found: m.cols(),
        });
    }
    let n = m.rows();
    if n > MAX_DIM {
        return Err(QcoreError::TooLarge(n));
    }
    m.ensure_hermitian()?;

    // Symmetrize so that tiny anti-Hermitian noise does not leak into the rotations.
    let mut a = ComplexMatrix::from_fn(n, n, |i, j| {
        let avg = (m.get(i, j) + m.get(j, i).conj()).scale(T::lit(0.5));
        if i == j {
            Complex::new(avg.re, T::zero())
        } else {
            avg
        }
    });
    let mut v = ComplexMatrix::identity(n);

    let scale = a
        .as_slice()
        .iter()
        .fold(T::zero(), |acc, x| acc + x.norm_sqr())
        .max(T::min_positive_value());
    let stop = scale * T::epsilon() * T::epsilon();

    for _ in 0..MAX_SWEEPS {
        if off_diagonal_sqr(&a) <= stop {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                let mag = apq.norm();
                if mag.is_zero() {
                    continue;
                }
                let app = a.get(p, p).re;
                let aqq = a.get(q, q).re;
                let theta = (aqq - app) / (T::lit(2.0) * mag);
                let t = if theta.is_infinite() {
                    T::zero()
                } else {
                    let sign = if theta >= T::zero() { T::one() } else { -T::one() };
                    sign / (theta.abs() + (theta * theta + T::one()).sqrt())
                };
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                // phase of the pivot: apq = |apq| e^{iφ}; G = diag(1, e^{-iφ}) · [[c, s], [-s, c]]
                let phase_conj = (apq / mag).conj();
                let g00 = Complex::new(c, T::zero());
                let g01 = Complex::new(s, T::zero());
                let g10 = phase_conj * (-s);
                let g11 = phase_conj * c;

                // A ← A G
                for k in 0..n {
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    a.set(k, p, akp * g00 + akq * g10);
                    a.set(k, q, akp * g01 + akq * g11);
                }
                // A ← G† A
                for k in 0..n {
                    let apk = a.get(p, k);
                    let aqk = a.get(q, k);
                    a.set(p, k, g00.conj() * apk + g10.conj() * aqk);
                    a.set(q, k, g01.conj() * apk + g11.conj() * aqk);
                }
                a.set(p, q, Complex::zero());
                a.set(q, p, Complex::zero());
                let dp = a.get(p, p).re;
                let dq = a.get(q, q).re;
                a.set(p, p, Complex::new(dp, T::zero()));
                a.set(q, q, Complex::new(dq, T::zero()));

                for k in 0..n {
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, vkp * g00 + vkq * g10);
                    v.set(k, q, vkp * g01 + vkq * g11);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a.get(i, i).re.partial_cmp(&a.get(j, j).re).unwrap());
    let values = order.iter().map(|&k| a.get(k, k).re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| v.get(i, order[j]));
    Ok(HermitianEigen { values, vectors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    type M = ComplexMatrix<f64>;

    fn random_hermitian(n: usize, rng: &mut impl Rng) -> M {
        let mut m = M::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex::new(rng.random_range(-1.0..1.0), 0.0));
            for j in (i + 1)..n {
                let z = Complex::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                m.set(i, j, z);
                m.set(j, i, z.conj());
            }
        }
        m
    }

    #[test]
    fn identity_has_unit_spectrum() {
        let e = eig_hermitian(&M::identity(4)).unwrap();
        assert!(e.values.iter().all(|&x| (x - 1.0).abs() < 1e-15));
    }

    #[test]
    fn pauli_x_spectrum() {
        let e = eig_hermitian(&M::pauli_x()).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-14);
        assert!((e.values[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn pauli_y_spectrum_needs_complex_rotation() {
        let e = eig_hermitian(&M::pauli_y()).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-14);
        assert!(e.reconstruct().max_abs_diff(&M::pauli_y()) < 1e-14);
    }

    #[test]
    fn random_hermitian_reconstructs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..=8 {
            for _ in 0..20 {
                let m = random_hermitian(n, &mut rng);
                let e = eig_hermitian(&m).unwrap();
                assert!(e.reconstruct().max_abs_diff(&m) < 1e-9, "n={n}");
                let gram = &e.vectors.adjoint() * &e.vectors;
                assert!(gram.max_abs_diff(&M::identity(n)) < 1e-9);
                assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
            }
        }
    }

    #[test]
    fn degenerate_spectrum() {
        let m = M::diagonal(&[2.0, 2.0, -1.0, 2.0]);
        let e = eig_hermitian(&m).unwrap();
        assert_eq!(e.values, vec![-1.0, 2.0, 2.0, 2.0]);
    }

    #[test]
    fn works_in_single_precision() {
        let m = ComplexMatrix::<f32>::pauli_y();
        let e = eig_hermitian(&m).unwrap();
        assert!((e.values[1] - 1.0).abs() < 1e-6);
    }

    #[test]
    fn rejects_non_hermitian_and_oversized() {
        let m = M::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(eig_hermitian(&m).is_err());
        assert!(matches!(eig_hermitian(&M::identity(9)), Err(QcoreError::TooLarge(9))));
    }
}
