//! Artifact writers: the fixed-schema trajectory CSV and small CSV tables
//! for the studies. All floats are written with 17 significant decimal
//! digits so every value parses back to the recorded bits exactly.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use csh_core::integrator::Record;

/// Trajectory CSV header: time, data-class Sobolev norms `H^{s+1}(φ)` and
/// `H^s(∂_tφ)`, Gauss residuals, energy, and the two gauge-part norms.
pub const TRAJECTORY_HEADER: &str = "t,h_phi,h_dphi,gauss_abs,gauss_rel,energy,acf_l2,adf_l2";

/// Decimal form with 17 significant digits; round-trips any finite f64.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Render the 8-column trajectory table.
pub fn trajectory_csv(records: &[Record]) -> String {
    let mut out = String::with_capacity(records.len() * 200 + 80);
    out.push_str(TRAJECTORY_HEADER);
    out.push('\n');
    for r in records {
        let row = [
            r.time,
            r.h_phi,
            r.h_dphi,
            r.gauss_abs,
            r.gauss_rel,
            r.energy,
            r.acf_l2,
            r.adf_l2,
        ];
        out.push_str(&row.map(fmt17).join(","));
        out.push('\n');
    }
    out
}

/// Render a small study table with the given header and rows.
pub fn table_csv(header: &str, rows: &[Vec<f64>]) -> String {
    let mut out = String::with_capacity(rows.len() * 80 + header.len() + 1);
    out.push_str(header);
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().copied().map(fmt17).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// Write an artifact to `out` (or stdout when `None`); returns the name to
/// use in the terminal status line.
pub fn write_artifact(out: &Option<PathBuf>, content: &str) -> io::Result<String> {
    match out {
        Some(path) => {
            fs::write(path, content)?;
            Ok(path.display().to_string())
        }
        None => {
            io::stdout().write_all(content.as_bytes())?;
            Ok("<stdout>".to_string())
        }
    }
}

/// Insert `-seed{seed}` before the extension (or append it) so sweep runs
/// never share an output file.
pub fn seeded_path(path: &Path, seed: u64) -> PathBuf {
    let mut named = path.to_path_buf();
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    match path.extension() {
        Some(ext) => named.set_file_name(format!("{stem}-seed{seed}.{}", ext.to_string_lossy())),
        None => named.set_file_name(format!("{stem}-seed{seed}")),
    };
    named
}
