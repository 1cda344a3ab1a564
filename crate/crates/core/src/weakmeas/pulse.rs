use std::fmt;
use std::sync::Arc;

use num_complex::Complex;
use num_traits::Zero;

use super::{Jones, OpticalElement, WeakError, BLOCKED_FRACTION};
use crate::Real;

/// Real amplitude envelope of the input pulse.
#[derive(Clone)]
pub enum Envelope<T> {
    /// exp(−t² / (2 t_c²)).
    Gaussian,
    /// Arbitrary envelope, evaluated as a function of time.
    Custom(Arc<dyn Fn(T) -> T + Send + Sync>),
}

impl<T: Real> Envelope<T> {
    pub fn amplitude(&self, t: T, t_c: T) -> T {
        match self {
            Envelope::Gaussian => (-(t * t) / (T::lit(2.0) * t_c * t_c)).exp(),
            Envelope::Custom(f) => f(t),
        }
    }
}

impl<T> fmt::Debug for Envelope<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Envelope::Gaussian => f.write_str("Gaussian"),
            Envelope::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

/// Fully polarized pulse of width `t_c`, centered at t = 0.
#[derive(Debug, Clone)]
pub struct PolarizedPulse<T> {
    t_c: T,
    jones: Jones<T>,
    envelope: Envelope<T>,
}

impl<T: Real> PolarizedPulse<T> {
    /// Gaussian pulse; `jones` is normalized.
    pub fn gaussian(t_c: T, jones: Jones<T>) -> Result<Self, WeakError> {
        Self::with_envelope(t_c, jones, Envelope::Gaussian)
    }

    pub fn with_envelope(t_c: T, jones: Jones<T>, envelope: Envelope<T>) -> Result<Self, WeakError> {
        if !(t_c > T::zero()) || !t_c.is_finite() {
            return Err(WeakError::Pulse("t_c must be positive"));
        }
        let jones = jones
            .normalized()
            .filter(|j| j.x.re.is_finite() && j.y.re.is_finite() && j.x.im.is_finite() && j.y.im.is_finite())
            .ok_or(WeakError::Pulse("Jones vector must be non-zero and finite"))?;
        Ok(Self { t_c, jones, envelope })
    }

    pub fn t_c(&self) -> T {
        self.t_c
    }

    pub fn jones(&self) -> &Jones<T> {
        &self.jones
    }

    pub fn envelope(&self) -> &Envelope<T> {
        &self.envelope
    }

    pub fn is_gaussian(&self) -> bool {
        matches!(self.envelope, Envelope::Gaussian)
    }
}

/// One delayed copy of the input envelope: field = envelope(t − delay) · jones.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldTerm<T> {
    pub delay: T,
    pub jones: Jones<T>,
}

/// Output field as a superposition of delayed envelope copies.
#[derive(Debug, Clone)]
pub struct OutputField<T> {
    pub t_c: T,
    pub envelope: Envelope<T>,
    pub terms: Vec<FieldTerm<T>>,
    /// Σ δτ over the PMD elements traversed.
    pub accumulated_delay: T,
    /// ‖input Jones vector‖² (one after normalization).
    pub input_weight: T,
}

/// Field after the ordered chain; an empty chain is the identity.
pub fn propagate<T: Real>(pulse: &PolarizedPulse<T>, elements: &[OpticalElement<T>]) -> OutputField<T> {
    let mut terms = vec![FieldTerm {
        delay: T::zero(),
        jones: pulse.jones,
    }];
    let mut accumulated = T::zero();
    for el in elements {
        match el {
            OpticalElement::Pmd(pmd) => {
                accumulated = accumulated + pmd.delta_tau;
                let half = pmd.delta_tau / T::lit(2.0);
                let (slow, fast) = (pmd.slow_axis(), pmd.fast_axis());
                let mut next: Vec<FieldTerm<T>> = Vec::with_capacity(2 * terms.len());
                for term in &terms {
                    for (axis, shift) in [(slow, half), (fast, -half)] {
                        let jones = axis.scale(axis.inner(&term.jones));
                        push_merged(&mut next, term.delay + shift, jones);
                    }
                }
                terms = next;
            }
            other => {
                let k = other.matrix().expect("lossy element");
                for term in terms.iter_mut() {
                    term.jones = k.apply(&term.jones);
                }
            }
        }
    }
    OutputField {
        t_c: pulse.t_c,
        envelope: pulse.envelope.clone(),
        terms,
        accumulated_delay: accumulated,
        input_weight: pulse.jones.norm_sqr(),
    }
}

fn push_merged<T: Real>(terms: &mut Vec<FieldTerm<T>>, delay: T, jones: Jones<T>) {
    if let Some(t) = terms.iter_mut().find(|t| t.delay == delay) {
        t.jones = t.jones + jones;
    } else {
        terms.push(FieldTerm { delay, jones });
    }
}

impl<T: Real> OutputField<T> {
    /// Field value at time `t`.
    pub fn at(&self, t: T) -> Jones<T> {
        self.terms.iter().fold(
            Jones::new(Complex::zero(), Complex::zero()),
            |acc, term| {
                let g = self.envelope.amplitude(t - term.delay, self.t_c);
                acc + term.jones.scale(Complex::new(g, T::zero()))
            },
        )
    }

    /// Gaussian overlap sums (∫I dt, ∫t·I dt) from ∫g(t−τ_j)g(t−τ_k)dt = √π t_c e^{−(τ_j−τ_k)²/4t_c²}.
    fn gaussian_moments(&self) -> Result<(T, T), WeakError> {
        if !matches!(self.envelope, Envelope::Gaussian) {
            return Err(WeakError::NotGaussian);
        }
        let norm = T::PI().sqrt() * self.t_c;
        let four_tc2 = T::lit(4.0) * self.t_c * self.t_c;
        let (mut e, mut m) = (T::zero(), T::zero());
        for a in &self.terms {
            for b in &self.terms {
                let d = a.delay - b.delay;
                let w = a.jones.inner(&b.jones).re * (-(d * d) / four_tc2).exp() * norm;
                e = e + w;
                m = m + w * (a.delay + b.delay) / T::lit(2.0);
            }
        }
        Ok((e, m))
    }

    /// Total output energy for the Gaussian envelope.
    pub fn energy_closed(&self) -> Result<T, WeakError> {
        Ok(self.gaussian_moments()?.0)
    }

    /// Input energy for the Gaussian envelope, √π t_c ‖c‖².
    pub fn input_energy_closed(&self) -> T {
        T::PI().sqrt() * self.t_c * self.input_weight
    }

    /// Mean time of arrival over the whole chain for the Gaussian envelope.
    pub fn mean_toa_closed(&self) -> Result<T, WeakError> {
        let (e, m) = self.gaussian_moments()?;
        if e <= T::lit(BLOCKED_FRACTION) * self.input_energy_closed() {
            return Err(WeakError::ZeroEnergy);
        }
        Ok(m / e)
    }

    /// Default grid: step t_c/100, span ±(6 t_c + accumulated delay).
    pub fn default_grid(&self) -> TimeGrid<T> {
        TimeGrid::symmetric(
            T::lit(6.0) * self.t_c + self.accumulated_delay,
            self.t_c / T::lit(100.0),
        )
    }

    /// Samples both components on `grid`, which must resolve t_c/20 and cover 5 t_c beyond the
    /// extreme delays.
    pub fn sample(&self, grid: &TimeGrid<T>) -> Result<SampledField<T>, WeakError> {
        let limit = self.t_c / T::lit(20.0);
        if grid.step > limit {
            return Err(WeakError::UnderResolved {
                step: grid.step.to_f64().unwrap_or(f64::NAN),
                limit: limit.to_f64().unwrap_or(f64::NAN),
            });
        }
        let margin = T::lit(5.0) * self.t_c;
        let lo = self.terms.iter().map(|t| t.delay).fold(T::zero(), T::min) - margin;
        let hi = self.terms.iter().map(|t| t.delay).fold(T::zero(), T::max) + margin;
        if grid.start > lo || grid.end() < hi {
            let f = |x: T| x.to_f64().unwrap_or(f64::NAN);
            return Err(WeakError::GridSpan {
                start: f(grid.start),
                end: f(grid.end()),
                need_start: f(lo),
                need_end: f(hi),
            });
        }
        let mut x = Vec::with_capacity(grid.points);
        let mut y = Vec::with_capacity(grid.points);
        let mut reference = Vec::with_capacity(grid.points);
        for t in grid.times() {
            let v = self.at(t);
            x.push(v.x);
            y.push(v.y);
            let g = self.envelope.amplitude(t, self.t_c);
            reference.push(g * g * self.input_weight);
        }
        let input_energy = simpson(&reference, grid.step)?;
        Ok(SampledField {
            grid: *grid,
            x,
            y,
            input_energy,
        })
    }
}

/// Uniform grid `start + k·step`, k = 0..points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid<T> {
    pub start: T,
    pub step: T,
    pub points: usize,
}

impl<T: Real> TimeGrid<T> {
    /// Odd-sized grid symmetric about 0 covering at least ±`half_span`.
    pub fn symmetric(half_span: T, step: T) -> Self {
        let half = (half_span / step).ceil().to_usize().unwrap_or(0).max(1);
        Self {
            start: -T::from_usize(half).expect("grid size") * step,
            step,
            points: 2 * half + 1,
        }
    }

    pub fn end(&self) -> T {
        self.time(self.points.saturating_sub(1))
    }

    pub fn time(&self, k: usize) -> T {
        self.start + T::from_usize(k).expect("grid index") * self.step
    }

    pub fn times(&self) -> impl Iterator<Item = T> + '_ {
        (0..self.points).map(|k| self.time(k))
    }
}

/// Two-component field on a uniform grid.
#[derive(Debug, Clone)]
pub struct SampledField<T> {
    pub grid: TimeGrid<T>,
    pub x: Vec<Complex<T>>,
    pub y: Vec<Complex<T>>,
    /// Energy of the unpropagated pulse on the same grid.
    pub input_energy: T,
}

impl<T: Real> SampledField<T> {
    pub fn intensity_x(&self) -> Vec<T> {
        self.x.iter().map(|c| c.norm_sqr()).collect()
    }

    pub fn intensity_y(&self) -> Vec<T> {
        self.y.iter().map(|c| c.norm_sqr()).collect()
    }

    pub fn intensity(&self) -> Vec<T> {
        self.x.iter().zip(&self.y).map(|(a, b)| a.norm_sqr() + b.norm_sqr()).collect()
    }

    pub fn energy(&self) -> Result<T, WeakError> {
        simpson(&self.intensity(), self.grid.step)
    }
}

/// Composite Simpson rule on an odd number of equally spaced samples.
pub fn simpson<T: Real>(values: &[T], step: T) -> Result<T, WeakError> {
    let n = values.len();
    if n < 3 || n.is_multiple_of(2) {
        return Err(WeakError::GridPoints(n));
    }
    let mut acc = values[0] + values[n - 1];
    for (k, v) in values.iter().enumerate().take(n - 1).skip(1) {
        acc = acc + *v * if k % 2 == 1 { T::lit(4.0) } else { T::lit(2.0) };
    }
    Ok(acc * step / T::lit(3.0))
}

/// Σ t·I(t) / Σ I(t) over the total intensity, both sums by Simpson.
pub fn mean_toa_numeric<T: Real>(field: &SampledField<T>) -> Result<T, WeakError> {
    let intensity = field.intensity();
    let energy = simpson(&intensity, field.grid.step)?;
    if !(energy > T::lit(BLOCKED_FRACTION) * field.input_energy) {
        return Err(WeakError::ZeroEnergy);
    }
    let weighted: Vec<T> = intensity
        .iter()
        .enumerate()
        .map(|(k, i)| *i * field.grid.time(k))
        .collect();
    Ok(simpson(&weighted, field.grid.step)? / energy)
}
