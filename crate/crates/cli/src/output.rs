//! File output: atomic writes and the CSV layouts.

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use nftaper::{CutAxis, PatternCut, Taper};
use tempfile::NamedTempFile;

/// Writes `contents` to a temporary file next to `path`, then renames it into place.
pub fn write_atomic(path: &Path, contents: &[u8]) -> std::io::Result<()> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    let mut tmp = NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// `coordinate,gain_linear,gain_db` with angles in degrees and ranges in meters.
pub fn cut_csv(cut: &PatternCut) -> String {
    let mut out = String::from("coordinate,gain_linear,gain_db\n");
    for ((x, g), db) in cut
        .coordinates
        .iter()
        .zip(&cut.gain_linear)
        .zip(&cut.gain_db)
    {
        let coordinate = match cut.axis {
            CutAxis::Range => *x,
            _ => x.to_degrees(),
        };
        writeln!(out, "{coordinate},{g},{db}").unwrap();
    }
    out
}

/// `index,weight` for a peak-one taper.
pub fn taper_csv(taper: &Taper) -> String {
    let mut out = String::from("index,weight\n");
    for (i, w) in taper.weights().iter().enumerate() {
        writeln!(out, "{i},{w}").unwrap();
    }
    out
}
