use num_traits::{FromPrimitive, Num};

use super::CloningError;

/// N input copies, M output copies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CopyCounts {
    n: u64,
    m: u64,
}

impl CopyCounts {
    pub fn new(n: u64, m: u64) -> Result<Self, CloningError> {
        if n == 0 || m < n {
            return Err(CloningError::Counts { n, m });
        }
        Ok(Self { n, m })
    }

    pub fn inputs(&self) -> u64 {
        self.n
    }

    pub fn outputs(&self) -> u64 {
        self.m
    }
}

fn int<T: FromPrimitive>(x: u64) -> T {
    T::from_u64(x).expect("integer representable in scalar type")
}

/// Optimal N→M fidelity (MN + M + N) / (M(N + 2)).
///
/// Numerator and denominator are formed in integers, so `f64` results are correctly rounded
/// and [`crate::Rational`] results are exact.
pub fn fidelity_opt<T: Num + FromPrimitive>(c: CopyCounts) -> T {
    let (n, m) = (c.n, c.m);
    int::<T>(m * n + m + n) / int::<T>(m * (n + 2))
}

/// Mean input and output intensities and the amplifier quality Q ∈ [0, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplifierSetting<T> {
    pub mu_in: T,
    pub mu_out: T,
    pub q: T,
}

impl<T: Num + PartialOrd + Copy> AmplifierSetting<T> {
    pub fn new(mu_in: T, mu_out: T, q: T) -> Result<Self, CloningError> {
        // negated comparisons also reject NaN
        if !(mu_in > T::zero()) || !(mu_out > T::zero()) {
            return Err(CloningError::Amplifier("intensities must be positive"));
        }
        if !(q >= T::zero() && q <= T::one()) {
            return Err(CloningError::Amplifier("Q must lie in [0, 1]"));
        }
        if mu_in > mu_out {
            return Err(CloningError::InputExceedsOutput);
        }
        Ok(Self { mu_in, mu_out, q })
    }
}

/// Amplifier fidelity (Q μ_out μ_in + μ_out + μ_in) / (Q μ_out μ_in + 2 μ_out).
pub fn fidelity_classical<T: Num + PartialOrd + Copy>(
    a: &AmplifierSetting<T>,
) -> Result<T, CloningError> {
    let checked = AmplifierSetting::new(a.mu_in, a.mu_out, a.q)?;
    let (i, o, q) = (checked.mu_in, checked.mu_out, checked.q);
    let two = T::one() + T::one();
    let cross = q * o * i;
    Ok((cross + o + i) / (cross + two * o))
}
