//! Level-spacing statistics.

use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Spacings below this are counted as degenerate pairs.
pub const DEGENERACY_TOL: f64 = 1e-12;

/// Mean gap ratio of the Gaussian orthogonal ensemble.
pub const R_GOE: f64 = 0.5307;
/// Mean gap ratio for Poisson level statistics, `2 ln 2 - 1`.
pub const R_POISSON: f64 = 0.386_294_361_119_890_6;

/// Indices `[round(D(1-f)/2), round(D(1+f)/2))`.
pub fn central_window(count: usize, fraction: f64) -> Result<Range<usize>> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::WindowTooSmall(format!("fraction {fraction} outside (0, 1]")));
    }
    let d = count as f64;
    let start = (d * (1.0 - fraction) / 2.0).round() as usize;
    let end = ((d * (1.0 + fraction) / 2.0).round() as usize).min(count);
    if end < start + 2 {
        return Err(Error::WindowTooSmall(format!("{count} levels at fraction {fraction}")));
    }
    Ok(start..end)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumStats {
    pub window: Range<usize>,
    /// `E_{n+1} - E_n` for consecutive levels inside the window.
    pub spacings: Vec<f64>,
    pub r_values: Vec<f64>,
    pub r_ave: f64,
    /// Mean level spacing over the window.
    pub omega_h: f64,
    pub degenerate_pairs: usize,
}

/// Gap ratios `r_n = min(d_n, d_{n+1}) / max(d_n, d_{n+1})` inside `window`.
///
/// Ratios with both spacings degenerate are undefined and skipped.
pub fn r_statistics(eigenvalues: &[f64], window: Range<usize>) -> Result<SpectrumStats> {
    if window.end > eigenvalues.len() || window.len() < 3 {
        return Err(Error::WindowTooSmall(format!(
            "window {window:?} over {} levels",
            eigenvalues.len()
        )));
    }
    let levels = &eigenvalues[window.clone()];
    let spacings: Vec<f64> = levels.windows(2).map(|w| w[1] - w[0]).collect();
    let degenerate_pairs = spacings.iter().filter(|&&d| d < DEGENERACY_TOL).count();
    let r_values: Vec<f64> = spacings
        .windows(2)
        .filter_map(|w| {
            let (lo, hi) = if w[0] < w[1] { (w[0], w[1]) } else { (w[1], w[0]) };
            (hi >= DEGENERACY_TOL).then(|| lo.max(0.0) / hi)
        })
        .collect();
    if r_values.is_empty() {
        return Err(Error::AllDegenerate);
    }
    let r_ave = r_values.iter().sum::<f64>() / r_values.len() as f64;
    let omega_h = (levels[levels.len() - 1] - levels[0]) / spacings.len() as f64;
    Ok(SpectrumStats { window, spacings, r_values, r_ave, omega_h, degenerate_pairs })
}

/// Mean spacing over the whole spectrum.
pub fn full_mean_spacing(eigenvalues: &[f64]) -> Option<f64> {
    (eigenvalues.len() >= 2)
        .then(|| (eigenvalues[eigenvalues.len() - 1] - eigenvalues[0]) / (eigenvalues.len() - 1) as f64)
}

/// Smallest consecutive gap over the whole spectrum, ignoring degenerate
/// pairs; `Some(0.0)` when every gap is degenerate.
pub fn min_spacing(eigenvalues: &[f64]) -> Option<f64> {
    let gaps = eigenvalues.windows(2).map(|w| w[1] - w[0]);
    if eigenvalues.len() < 2 {
        return None;
    }
    Some(gaps.filter(|&g| g >= DEGENERACY_TOL).min_by(f64::total_cmp).unwrap_or(0.0))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SectorWeighting {
    /// Mean of the pooled `r_n` of all sectors.
    #[default]
    Pooled,
    /// `sum_s D_s r_ave(s) / sum_s D_s`.
    Dimension,
    Uniform,
}

/// Combines per-sector statistics into one `r_ave`.
pub fn aggregate_sectors(records: &[(&SpectrumStats, usize)], weighting: SectorWeighting) -> Result<f64> {
    if records.is_empty() {
        return Err(Error::WindowTooSmall("no sectors to aggregate".into()));
    }
    Ok(match weighting {
        SectorWeighting::Pooled => {
            let (sum, n) = records
                .iter()
                .fold((0.0, 0usize), |(s, n), (st, _)| (s + st.r_values.iter().sum::<f64>(), n + st.r_values.len()));
            sum / n as f64
        }
        SectorWeighting::Dimension => {
            let total: usize = records.iter().map(|r| r.1).sum();
            records.iter().map(|(st, d)| st.r_ave * *d as f64).sum::<f64>() / total as f64
        }
        SectorWeighting::Uniform => records.iter().map(|(st, _)| st.r_ave).sum::<f64>() / records.len() as f64,
    })
}
