use std::ops::{Add, Mul};

use num_complex::Complex;
use num_traits::Zero;

use crate::Real;

/// Two-component polarization vector in the lab (x = H, y = V) basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jones<T> {
    pub x: Complex<T>,
    pub y: Complex<T>,
}

impl<T: Real> Jones<T> {
    pub fn new(x: Complex<T>, y: Complex<T>) -> Self {
        Self { x, y }
    }

    pub fn horizontal() -> Self {
        Self::linear(T::zero())
    }

    pub fn vertical() -> Self {
        Self::linear(T::FRAC_PI_2())
    }

    /// Linear polarization at `theta` from H.
    pub fn linear(theta: T) -> Self {
        Self::from_angles(theta, T::zero())
    }

    /// (cos θ, e^{iφ} sin θ).
    pub fn from_angles(theta: T, phi: T) -> Self {
        Self {
            x: Complex::new(theta.cos(), T::zero()),
            y: Complex::from_polar(theta.sin(), phi),
        }
    }

    pub fn norm_sqr(&self) -> T {
        self.x.norm_sqr() + self.y.norm_sqr()
    }

    pub fn normalized(&self) -> Option<Self> {
        let n = self.norm_sqr().sqrt();
        (n > T::zero()).then(|| self.scale(Complex::new(T::one() / n, T::zero())))
    }

    /// ⟨self|other⟩, antilinear in `self`.
    pub fn inner(&self, other: &Self) -> Complex<T> {
        self.x.conj() * other.x + self.y.conj() * other.y
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self {
            x: self.x * s,
            y: self.y * s,
        }
    }

    /// Rotated by `angle` about the propagation axis.
    pub fn rotated(&self, angle: T) -> Self {
        JonesMatrix::rotation(angle).apply(self)
    }
}

impl<T: Real> Add for Jones<T> {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        Self {
            x: self.x + rhs.x,
            y: self.y + rhs.y,
        }
    }
}

/// 2×2 complex matrix acting on [`Jones`] vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JonesMatrix<T> {
    pub m: [[Complex<T>; 2]; 2],
}

impl<T: Real> JonesMatrix<T> {
    pub fn identity() -> Self {
        Self::diagonal(T::one(), T::one())
    }

    pub fn diagonal(d0: T, d1: T) -> Self {
        let z = Complex::zero();
        Self {
            m: [[Complex::new(d0, T::zero()), z], [z, Complex::new(d1, T::zero())]],
        }
    }

    /// Real rotation by `angle`.
    pub fn rotation(angle: T) -> Self {
        let (s, c) = angle.sin_cos();
        let r = |v: T| Complex::new(v, T::zero());
        Self {
            m: [[r(c), r(-s)], [r(s), r(c)]],
        }
    }

    /// |ψ⟩⟨ψ| / ⟨ψ|ψ⟩; the zero vector gives the zero matrix.
    pub fn projector(psi: &Jones<T>) -> Self {
        let n = psi.norm_sqr();
        if n <= T::zero() {
            return Self::diagonal(T::zero(), T::zero());
        }
        let v = [psi.x, psi.y];
        let mut m = [[Complex::zero(); 2]; 2];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, slot) in row.iter_mut().enumerate() {
                *slot = v[i] * v[j].conj() / n;
            }
        }
        Self { m }
    }

    /// R(θ) · diag(d0, d1) · R(θ)ᵀ.
    pub fn in_basis(angle: T, d0: T, d1: T) -> Self {
        let r = Self::rotation(angle);
        r * Self::diagonal(d0, d1) * r.adjoint()
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.m;
        Self {
            m: [[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]],
        }
    }

    pub fn apply(&self, v: &Jones<T>) -> Jones<T> {
        Jones {
            x: self.m[0][0] * v.x + self.m[0][1] * v.y,
            y: self.m[1][0] * v.x + self.m[1][1] * v.y,
        }
    }

    /// ⟨ψ|M|ψ⟩.
    pub fn expectation(&self, psi: &Jones<T>) -> Complex<T> {
        psi.inner(&self.apply(psi))
    }
}

impl<T: Real> Mul for JonesMatrix<T> {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        let mut m = [[Complex::zero(); 2]; 2];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, slot) in row.iter_mut().enumerate() {
                *slot = self.m[i][0] * rhs.m[0][j] + self.m[i][1] * rhs.m[1][j];
            }
        }
        Self { m }
    }
}
