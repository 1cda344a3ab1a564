use num_complex::Complex;
use num_traits::{One, Zero};

use super::eig::eig_hermitian;
use super::matrix::{inner, norm_sqr};
use super::{ComplexMatrix, QcoreError};
use crate::scalar::Real;

/// Normalized state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState<T> {
    amplitudes: Vec<Complex<T>>,
}

impl<T: Real> PureState<T> {
    /// Wraps amplitudes that must already be normalized (within 1e-12).
    pub fn new(amplitudes: Vec<Complex<T>>) -> Result<Self, QcoreError> {
        if amplitudes.is_empty() {
            return Err(QcoreError::Dimension {
                expected: 1,
                found: 0,
            });
        }
        let norm = norm_sqr(&amplitudes).sqrt();
        if (norm - T::one()).abs() > T::tolerance(1e-12) {
            return Err(QcoreError::NotNormalized(norm.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(Self { amplitudes })
    }

    /// Rescales arbitrary non-zero amplitudes to unit norm.
    pub fn normalized(amplitudes: Vec<Complex<T>>) -> Result<Self, QcoreError> {
        let norm = norm_sqr(&amplitudes).sqrt();
        if norm.is_zero() || !norm.is_finite() {
            return Err(QcoreError::NotNormalized(norm.to_f64().unwrap_or(f64::NAN)));
        }
        Self::new(amplitudes.into_iter().map(|a| a / norm).collect())
    }

    pub fn from_real(amplitudes: &[T]) -> Result<Self, QcoreError> {
        Self::new(amplitudes.iter().map(|&x| Complex::new(x, T::zero())).collect())
    }

    /// Computational basis vector |k⟩ of dimension `dim`.
    pub fn basis(dim: usize, k: usize) -> Self {
        assert!(k < dim);
        let mut amplitudes = vec![Complex::zero(); dim];
        amplitudes[k] = Complex::one();
        Self { amplitudes }
    }

    /// |±x⟩ eigenstates: `plus = true` gives (|0⟩+|1⟩)/√2.
    pub fn x_basis(plus: bool) -> Self {
        let h = T::FRAC_1_SQRT_2();
        let sign = if plus { h } else { -h };
        Self::from_real(&[h, sign]).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub fn tensor(&self, other: &Self) -> Self {
        let amplitudes = self
            .amplitudes
            .iter()
            .flat_map(|a| other.amplitudes.iter().map(move |b| *a * *b))
            .collect();
        Self { amplitudes }
    }

    pub fn inner(&self, other: &Self) -> Complex<T> {
        inner(&self.amplitudes, &other.amplitudes)
    }

    pub fn projector(&self) -> ComplexMatrix<T> {
        ComplexMatrix::outer(&self.amplitudes, &self.amplitudes)
    }

    pub fn density(&self) -> DensityMatrix<T> {
        DensityMatrix {
            matrix: self.projector(),
        }
    }

    /// ⟨ψ|O|ψ⟩ (real part; `O` is expected Hermitian).
    pub fn expectation(&self, op: &ComplexMatrix<T>) -> T {
        op.sandwich(&self.amplitudes, &self.amplitudes).re
    }
}

/// Which factor of a bipartite system is kept by [`DensityMatrix::partial_trace`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Trace-one positive Hermitian operator on one or two qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T> {
    matrix: ComplexMatrix<T>,
}

impl<T: Real> DensityMatrix<T> {
    /// Validates trace, Hermiticity and positivity; dimension must be 2 or 4.
    pub fn new(matrix: ComplexMatrix<T>) -> Result<Self, QcoreError> {
        let dim = matrix.rows();
        if !matrix.is_square() || !(dim == 2 || dim == 4) {
            return Err(QcoreError::UnsupportedDim(dim));
        }
        matrix.ensure_hermitian()?;
        let tol = T::tolerance(1e-10);
        let trace = matrix.trace().re;
        if (trace - T::one()).abs() > tol {
            return Err(QcoreError::Trace(trace.to_f64().unwrap_or(f64::NAN)));
        }
        let min = eig_hermitian(&matrix)?.min_value();
        if min < -tol {
            return Err(QcoreError::NotPositive(min.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(Self { matrix })
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim).scale_real(T::one() / T::from_usize(dim).unwrap()),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix<T> {
        self.matrix
    }

    pub fn tensor(&self, other: &Self) -> Result<Self, QcoreError> {
        Self::new(self.matrix.kron(&other.matrix))
    }

    /// Tr(ρ O).
    pub fn expectation(&self, op: &ComplexMatrix<T>) -> T {
        (&self.matrix * op).trace().re
    }

    /// Reduced state of one qubit of a two-qubit state.
    pub fn partial_trace(&self, keep: Subsystem) -> Result<Self, QcoreError> {
        if self.dim() != 4 {
            return Err(QcoreError::UnsupportedDim(self.dim()));
        }
        let keep_index = match keep {
            Subsystem::A => 0,
            Subsystem::B => 1,
        };
        let reduced = partial_trace(&self.matrix, &[2, 2], &[keep_index])?;
        Ok(Self { matrix: reduced })
    }

    /// Partial transpose on the second qubit.
    pub fn partial_transpose(&self) -> Result<ComplexMatrix<T>, QcoreError> {
        if self.dim() != 4 {
            return Err(QcoreError::UnsupportedDim(self.dim()));
        }
        Ok(ComplexMatrix::from_fn(4, 4, |i, j| {
            let (a, b) = (i / 2, i % 2);
            let (c, d) = (j / 2, j % 2);
            self.matrix.get(2 * a + d, 2 * c + b)
        }))
    }

    /// Peres–Horodecki test: entangled iff the partial transpose has an eigenvalue below −1e−9.
    pub fn is_entangled(&self) -> Result<(bool, T), QcoreError> {
        let min = self.min_pt_eigenvalue()?;
        Ok((min < -T::tolerance(1e-9), min))
    }

    pub fn min_pt_eigenvalue(&self) -> Result<T, QcoreError> {
        let pt = self.partial_transpose()?;
        Ok(eig_hermitian(&pt)?.min_value())
    }

    /// Correlation tensor T_ij = Tr(ρ σ_i ⊗ σ_j), i, j ∈ {x, y, z}.
    pub fn correlation_tensor(&self) -> Result<[[T; 3]; 3], QcoreError> {
        if self.dim() != 4 {
            return Err(QcoreError::UnsupportedDim(self.dim()));
        }
        let paulis = [
            ComplexMatrix::pauli_x(),
            ComplexMatrix::pauli_y(),
            ComplexMatrix::pauli_z(),
        ];
        let mut t = [[T::zero(); 3]; 3];
        for (i, si) in paulis.iter().enumerate() {
            for (j, sj) in paulis.iter().enumerate() {
                t[i][j] = self.expectation(&si.kron(sj));
            }
        }
        Ok(t)
    }

    /// Maximal CHSH value over all measurement settings (Horodecki criterion).
    pub fn chsh_max(&self) -> Result<T, QcoreError> {
        let t = self.correlation_tensor()?;
        let mut ttt = [T::zero(); 9];
        for i in 0..3 {
            for j in 0..3 {
                ttt[3 * i + j] = (0..3).fold(T::zero(), |acc, k| acc + t[k][i] * t[k][j]);
            }
        }
        let m = ComplexMatrix::from_real(3, 3, &ttt)?;
        let values = eig_hermitian(&m)?.values;
        let top_two = (values[1] + values[2]).max(T::zero());
        Ok(T::lit(2.0) * top_two.sqrt())
    }

    /// ⟨Φ+|ρ|Φ+⟩.
    pub fn singlet_fidelity(&self) -> Result<T, QcoreError> {
        if self.dim() != 4 {
            return Err(QcoreError::UnsupportedDim(self.dim()));
        }
        Ok(self.expectation(&BellState::PhiPlus.state::<T>().projector()))
    }

    /// Conjugation U ρ U†.
    pub fn conjugate(&self, unitary: &ComplexMatrix<T>) -> Result<Self, QcoreError> {
        let m = &(unitary * &self.matrix) * &unitary.adjoint();
        Self::new(m)
    }

    /// Probability of each product outcome when both qubits are measured in the given bases.
    pub fn outcome_probabilities(
        &self,
        basis_a: &[PureState<T>; 2],
        basis_b: &[PureState<T>; 2],
    ) -> [[T; 2]; 2] {
        let mut p = [[T::zero(); 2]; 2];
        for (a, ua) in basis_a.iter().enumerate() {
            for (b, ub) in basis_b.iter().enumerate() {
                let v = ua.tensor(ub);
                p[a][b] = self.matrix.sandwich(v.amplitudes(), v.amplitudes()).re;
            }
        }
        p
    }
}

/// Traces out every factor of a multipartite operator except those listed in `keep`
/// (kept factors retain their original order).
pub fn partial_trace<T: Real>(
    m: &ComplexMatrix<T>,
    dims: &[usize],
    keep: &[usize],
) -> Result<ComplexMatrix<T>, QcoreError> {
    let total: usize = dims.iter().product();
    if !m.is_square() || m.rows() != total {
        return Err(QcoreError::Dimension {
            expected: total,
            found: m.rows(),
        });
    }
    if keep.iter().any(|&k| k >= dims.len()) {
        return Err(QcoreError::Dimension {
            expected: dims.len(),
            found: keep.iter().copied().max().unwrap_or(0) + 1,
        });
    }
    let kept_dim: usize = keep.iter().map(|&k| dims[k]).product();
    let mut out = ComplexMatrix::zeros(kept_dim, kept_dim);

    let digits = |mut idx: usize| -> Vec<usize> {
        let mut d = vec![0; dims.len()];
        for (slot, &size) in d.iter_mut().zip(dims).rev() {
            *slot = idx % size;
            idx /= size;
        }
        d
    };
    let kept_index = |d: &[usize]| keep.iter().fold(0, |acc, &k| acc * dims[k] + d[k]);

    for i in 0..total {
        let di = digits(i);
        for j in 0..total {
            let dj = digits(j);
            let traced_match = (0..dims.len())
                .filter(|k| !keep.contains(k))
                .all(|k| di[k] == dj[k]);
            if !traced_match {
                continue;
            }
            let (r, c) = (kept_index(&di), kept_index(&dj));
            out.set(r, c, out.get(r, c) + m.get(i, j));
        }
    }
    Ok(out)
}

/// The four Bell states, in the canonical weight order Φ+, Φ−, Ψ+, Ψ−.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BellState {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellState {
    pub const ALL: [BellState; 4] = [
        BellState::PhiPlus,
        BellState::PhiMinus,
        BellState::PsiPlus,
        BellState::PsiMinus,
    ];

    pub fn state<T: Real>(self) -> PureState<T> {
        let h = T::FRAC_1_SQRT_2();
        let z = T::zero();
        let amps = match self {
            BellState::PhiPlus => [h, z, z, h],
            BellState::PhiMinus => [h, z, z, -h],
            BellState::PsiPlus => [z, h, h, z],
            BellState::PsiMinus => [z, h, -h, z],
        };
        PureState::from_real(&amps).unwrap()
    }
}

/// Probability weights over the Bell basis (Φ+, Φ−, Ψ+, Ψ−).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellWeights<T> {
    weights: [T; 4],
}

impl<T: Real> BellWeights<T> {
    pub fn new(weights: [T; 4]) -> Result<Self, QcoreError> {
        let sum = weights.iter().fold(T::zero(), |acc, &w| acc + w);
        if weights.iter().any(|&w| w < T::zero() || !w.is_finite())
            || (sum - T::one()).abs() > T::tolerance(1e-12)
        {
            return Err(QcoreError::InvalidWeights);
        }
        Ok(Self { weights })
    }

    /// Werner weights: `fidelity` on Φ+ and the remainder spread evenly.
    pub fn isotropic(fidelity: T) -> Result<Self, QcoreError> {
        let rest = (T::one() - fidelity) / T::lit(3.0);
        Self::new([fidelity, rest, rest, rest])
    }

    pub fn weights(&self) -> [T; 4] {
        self.weights
    }

    pub fn get(&self, state: BellState) -> T {
        self.weights[state as usize]
    }

    pub fn to_density(&self) -> DensityMatrix<T> {
        bell_diagonal(self)
    }
}

/// Σ λ_i |Bell_i⟩⟨Bell_i|.
pub fn bell_diagonal<T: Real>(w: &BellWeights<T>) -> DensityMatrix<T> {
    let mut m = ComplexMatrix::zeros(4, 4);
    for (state, &lambda) in BellState::ALL.iter().zip(w.weights.iter()) {
        m = &m + &state.state::<T>().projector().scale_real(lambda);
    }
    DensityMatrix { matrix: m }
}

/// p·|Φ+⟩⟨Φ+| + (1−p)·I/4.
pub fn werner<T: Real>(p: T) -> Result<DensityMatrix<T>, QcoreError> {
    if !(T::zero()..=T::one()).contains(&p) {
        return Err(QcoreError::OutOfRange("werner p", p.to_f64().unwrap_or(f64::NAN)));
    }
    let pure = BellState::PhiPlus.state::<T>().projector().scale_real(p);
    let mixed = ComplexMatrix::identity(4).scale_real((T::one() - p) / T::lit(4.0));
    Ok(DensityMatrix { matrix: &pure + &mixed })
}
