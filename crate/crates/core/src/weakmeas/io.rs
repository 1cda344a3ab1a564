use std::io::Write;

use serde::Serialize;

use super::{SampledField, WeakError};

/// One sample of the output intensity profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProfileRow {
    pub t: f64,
    pub intensity_x: f64,
    pub intensity_y: f64,
    pub intensity_total: f64,
}

/// One configuration of the mean-arrival-time summary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SummaryRow {
    pub dtau: f64,
    pub tc: f64,
    pub theta_pre: f64,
    pub phi_pre: f64,
    pub pdl_db: f64,
    pub pdl_axis: f64,
    pub toa_exact: f64,
    pub toa_weak: f64,
    pub abs_error: f64,
}

/// CSV with header `t,intensity_x,intensity_y,intensity_total`.
pub fn write_profile_csv<W: Write>(field: &SampledField<f64>, writer: W) -> Result<(), WeakError> {
    let mut wtr = csv::Writer::from_writer(writer);
    let (ix, iy) = (field.intensity_x(), field.intensity_y());
    for (k, t) in field.grid.times().enumerate() {
        wtr.serialize(ProfileRow {
            t,
            intensity_x: ix[k],
            intensity_y: iy[k],
            intensity_total: ix[k] + iy[k],
        })?;
    }
    wtr.flush()?;
    Ok(())
}

/// CSV with header `dtau,tc,theta_pre,phi_pre,pdl_db,pdl_axis,toa_exact,toa_weak,abs_error`.
pub fn write_summary_csv<W: Write>(rows: &[SummaryRow], writer: W) -> Result<(), WeakError> {
    let mut wtr = csv::Writer::from_writer(writer);
    for row in rows {
        wtr.serialize(row)?;
    }
    wtr.flush()?;
    Ok(())
}
