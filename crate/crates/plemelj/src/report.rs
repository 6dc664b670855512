//! Machine-readable exports: CSV traces and number formatting.
//!
//! All numeric output uses 17 significant digits so that equal f64 values
//! always print identically and files are byte-stable across runs.

use std::io::Write;

use crate::error::Result;
use crate::pv::PvResult;
use crate::transform::ConvergenceReport;

/// Decimal form with 17 significant digits; round-trips any f64.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Excision trace as `epsilon,re,im` rows.
pub fn write_trace_csv<W: Write>(mut w: W, pv: &PvResult) -> Result<()> {
    writeln!(w, "epsilon,re,im")?;
    for (eps, value) in &pv.excision_trace {
        writeln!(w, "{},{},{}", fmt17(*eps), fmt17(value.re), fmt17(value.im))?;
    }
    Ok(())
}

/// Convergence records as `n,re_z,im_z,re_phi,im_phi,abs_error` rows.
pub fn write_convergence_csv<W: Write>(mut w: W, report: &ConvergenceReport) -> Result<()> {
    writeln!(w, "n,re_z,im_z,re_phi,im_phi,abs_error")?;
    for r in &report.records {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            r.n,
            fmt17(r.z.re),
            fmt17(r.z.im),
            fmt17(r.phi.re),
            fmt17(r.phi.im),
            fmt17(r.error)
        )?;
    }
    Ok(())
}
