//! On-disk eigendecomposition cache.
//!
//! Each entry is a pair of files sharing a stem:
//! - `<stem>.bin`: little-endian `f64` eigenvalues, then the eigenvector
//!   matrix column by column as interleaved `(re, im)` pairs;
//! - `<stem>.json`: sidecar with dimensions, fingerprint and format version.

use std::fs;
use std::io::{BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use faer::Mat;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::eigen::EigenData;
use crate::error::{Error, Result};
use crate::symmetry::SymmetrySector;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CacheSidecar {
    pub format_version: u32,
    pub dim: usize,
    pub sites: usize,
    pub fingerprint: String,
    pub sector: Option<SymmetrySector>,
}

fn paths(dir: &Path, stem: &str) -> (PathBuf, PathBuf) {
    (dir.join(format!("{stem}.bin")), dir.join(format!("{stem}.json")))
}

pub fn write(dir: &Path, stem: &str, data: &EigenData) -> Result<()> {
    fs::create_dir_all(dir)?;
    let (bin, json) = paths(dir, stem);
    let dim = data.dim();
    let mut w = BufWriter::new(fs::File::create(&bin)?);
    for e in &data.eigenvalues {
        w.write_all(&e.to_le_bytes())?;
    }
    for j in 0..dim {
        for i in 0..dim {
            let z = data.eigenvectors[(i, j)];
            w.write_all(&z.re.to_le_bytes())?;
            w.write_all(&z.im.to_le_bytes())?;
        }
    }
    w.flush()?;
    let side = CacheSidecar {
        format_version: FORMAT_VERSION,
        dim,
        sites: data.sites,
        fingerprint: data.fingerprint.clone(),
        sector: data.sector,
    };
    fs::write(json, serde_json::to_string_pretty(&side)?)?;
    Ok(())
}

/// Loads an entry if it exists and matches `fingerprint`.
///
/// `Ok(None)` when absent; `Err(Error::Cache)` when present but stale or
/// malformed, so the caller can warn and recompute.
pub fn read(dir: &Path, stem: &str, fingerprint: &str) -> Result<Option<EigenData>> {
    let (bin, json) = paths(dir, stem);
    if !json.exists() || !bin.exists() {
        return Ok(None);
    }
    let side: CacheSidecar = serde_json::from_str(&fs::read_to_string(json)?)?;
    if side.format_version != FORMAT_VERSION {
        return Err(Error::Cache(format!("{stem}: format version {}", side.format_version)));
    }
    if side.fingerprint != fingerprint {
        return Err(Error::Cache(format!("{stem}: fingerprint mismatch")));
    }
    let dim = side.dim;
    let mut raw = Vec::new();
    fs::File::open(bin)?.read_to_end(&mut raw)?;
    let expected = 8 * (dim + 2 * dim * dim);
    if raw.len() != expected {
        return Err(Error::Cache(format!("{stem}: {} bytes, expected {expected}", raw.len())));
    }
    let mut values = raw.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")));
    let eigenvalues: Vec<f64> = values.by_ref().take(dim).collect();
    let flat: Vec<f64> = values.collect();
    let eigenvectors = Mat::from_fn(dim, dim, |i, j| {
        let k = 2 * (j * dim + i);
        Complex64::new(flat[k], flat[k + 1])
    });
    Ok(Some(EigenData {
        sector: side.sector,
        sites: side.sites,
        eigenvalues,
        eigenvectors,
        fingerprint: side.fingerprint,
    }))
}
