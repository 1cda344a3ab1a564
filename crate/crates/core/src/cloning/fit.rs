use std::io::{Read, Write};
use std::path::Path;

use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::{fidelity_classical, AmplifierSetting, CloningError};
use crate::rng::substream;

const GRID_POINTS: usize = 101;
const Q_TOL: f64 = 1e-6;

/// One measured point: intensities in photon-number units and the observed fidelity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FidelityRecord {
    pub mu_in: f64,
    pub mu_out: f64,
    pub fidelity: f64,
}

/// Validated records; CSV header `mu_in,mu_out,fidelity`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FidelityDataset {
    records: Vec<FidelityRecord>,
}

impl FidelityDataset {
    pub fn new(records: Vec<FidelityRecord>) -> Result<Self, CloningError> {
        for (index, r) in records.iter().enumerate() {
            if !(r.mu_in > 0.0 && r.mu_out > 0.0) || !r.mu_in.is_finite() || !r.mu_out.is_finite() {
                return Err(CloningError::Record { index, reason: "intensities must be positive" });
            }
            if !(r.fidelity > 0.0 && r.fidelity <= 1.0) {
                return Err(CloningError::Record { index, reason: "fidelity must lie in (0, 1]" });
            }
        }
        Ok(Self { records })
    }

    pub fn records(&self) -> &[FidelityRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn from_reader<R: Read>(reader: R) -> Result<Self, CloningError> {
        let mut rdr = csv::Reader::from_reader(reader);
        let records = rdr.deserialize().collect::<Result<Vec<FidelityRecord>, _>>()?;
        Self::new(records)
    }

    pub fn to_writer<W: Write>(&self, writer: W) -> Result<(), CloningError> {
        let mut wtr = csv::Writer::from_writer(writer);
        for r in &self.records {
            wtr.serialize(r)?;
        }
        wtr.flush()?;
        Ok(())
    }

    pub fn read_csv(path: impl AsRef<Path>) -> Result<Self, CloningError> {
        Self::from_reader(std::fs::File::open(path)?)
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<(), CloningError> {
        self.to_writer(std::fs::File::create(path)?)
    }
}

/// Least-squares estimate of the amplifier quality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QFit {
    pub q: f64,
    pub rss: f64,
    /// All records share one input intensity, so Q is poorly constrained.
    pub degenerate: bool,
}

fn rss(data: &FidelityDataset, q: f64) -> Result<f64, CloningError> {
    data.records.iter().try_fold(0.0, |acc, r| {
        let model = fidelity_classical(&AmplifierSetting::new(r.mu_in, r.mu_out, q)?)?;
        Ok(acc + (model - r.fidelity).powi(2))
    })
}

/// Q̂ = argmin over [0, 1] of the residual sum of squares: 101-point grid, then golden-section
/// search on the two cells around the best grid point down to |ΔQ| ≤ 1e−6.
pub fn fit_q(data: &FidelityDataset) -> Result<QFit, CloningError> {
    if data.is_empty() {
        return Err(CloningError::EmptyDataset);
    }
    if data.len() < 3 {
        return Err(CloningError::TooFewRecords(data.len()));
    }
    let step = 1.0 / (GRID_POINTS - 1) as f64;
    let mut best = (0.0, f64::INFINITY);
    for k in 0..GRID_POINTS {
        let q = k as f64 * step;
        let v = rss(data, q)?;
        if v < best.1 {
            best = (q, v);
        }
    }

    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = ((best.0 - step).max(0.0), (best.0 + step).min(1.0));
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (rss(data, c)?, rss(data, d)?);
    while b - a > Q_TOL {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = rss(data, c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = rss(data, d)?;
        }
    }
    let mid = 0.5 * (a + b);
    let refined = (mid, rss(data, mid)?);
    // the objective can be flat against a boundary; keep the grid point if it is better
    let (q, v) = if refined.1 <= best.1 { refined } else { best };

    let first = data.records[0].mu_in;
    let degenerate = data.records.iter().all(|r| r.mu_in == first);
    Ok(QFit { q, rss: v, degenerate })
}

/// Synthetic experiment: `points` log-spaced input intensities on `[mu_min, mu_max]`, output
/// intensity `gain · mu_in`, fidelity from the amplifier formula plus Gaussian noise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyntheticDesign {
    pub q: f64,
    pub gain: f64,
    pub noise_sigma: f64,
    pub points: usize,
    pub mu_min: f64,
    pub mu_max: f64,
}

impl Default for SyntheticDesign {
    fn default() -> Self {
        Self {
            q: 0.8,
            gain: 10.0,
            noise_sigma: 0.005,
            points: 50,
            mu_min: 0.5,
            mu_max: 50.0,
        }
    }
}

pub fn synthetic_dataset(design: &SyntheticDesign, seed: u64) -> Result<FidelityDataset, CloningError> {
    if design.points < 2 || !(design.mu_min > 0.0 && design.mu_max >= design.mu_min) {
        return Err(CloningError::Amplifier("synthetic design needs ≥ 2 points on a positive range"));
    }
    if !(design.noise_sigma >= 0.0) {
        return Err(CloningError::Amplifier("noise sigma must be non-negative"));
    }
    let noise = Normal::new(0.0, design.noise_sigma)
        .map_err(|_| CloningError::Amplifier("noise sigma must be finite"))?;
    let mut rng = substream(seed, 0);
    let ratio = (design.mu_max / design.mu_min).ln();
    let mut records = Vec::with_capacity(design.points);
    for k in 0..design.points {
        let mu_in = design.mu_min * (ratio * k as f64 / (design.points - 1) as f64).exp();
        let mu_out = design.gain * mu_in;
        let clean = fidelity_classical(&AmplifierSetting::new(mu_in, mu_out, design.q)?)?;
        let fidelity = (clean + noise.sample(&mut rng)).clamp(f64::MIN_POSITIVE, 1.0);
        records.push(FidelityRecord { mu_in, mu_out, fidelity });
    }
    FidelityDataset::new(records)
}
