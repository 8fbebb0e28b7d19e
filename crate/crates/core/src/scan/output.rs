//! CSV renderings of scan results.

use std::io::Write;

use crate::real::format_sig17;
use crate::semigroup::GapRecord;

use super::{DensityReport, ScanError};

/// Columns `x,lo,hi,gap`.
pub fn write_gaps_csv<W: Write>(gaps: &[GapRecord], out: W) -> Result<(), ScanError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["x", "lo", "hi", "gap"])?;
    for g in gaps {
        w.write_record([g.x.to_string(), format_sig17(g.lo), format_sig17(g.hi), format_sig17(g.gap)])?;
    }
    w.flush()?;
    Ok(())
}

/// Columns `bin_lo,bin_hi,count`.
pub fn write_histogram_csv<W: Write>(report: &DensityReport, out: W) -> Result<(), ScanError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["bin_lo", "bin_hi", "count"])?;
    for (i, c) in report.counts.iter().enumerate() {
        let (lo, hi) = report.bin_bounds(i);
        w.write_record([format_sig17(lo), format_sig17(hi), c.to_string()])?;
    }
    w.flush()?;
    Ok(())
}
