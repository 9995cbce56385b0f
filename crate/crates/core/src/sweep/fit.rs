use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Vertex of the parabola through the maximum of `ln y` vs `ln x` and its
/// two neighbours. Returns `(x*, y*)`.
pub fn locate_peak(points: &[(f64, f64)]) -> Result<(f64, f64)> {
    if points.len() < 3 {
        return Err(Error::Fit(format!("need at least 3 points, got {}", points.len())));
    }
    if points.iter().any(|&(x, y)| !(x > 0.0 && y > 0.0)) {
        return Err(Error::Fit("peak search needs positive data".into()));
    }
    let mut sorted = points.to_vec();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    let logs: Vec<(f64, f64)> = sorted.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let i = (0..logs.len()).max_by(|&a, &b| logs[a].1.total_cmp(&logs[b].1)).expect("nonempty");
    if i == 0 || i == logs.len() - 1 {
        return Err(Error::PeakAtEdge(sorted[i].0));
    }
    let [(x0, y0), (x1, y1), (x2, y2)] = [logs[i - 1], logs[i], logs[i + 1]];
    // divided differences of the interpolating quadratic
    let d01 = (y1 - y0) / (x1 - x0);
    let d12 = (y2 - y1) / (x2 - x1);
    let a = (d12 - d01) / (x2 - x0);
    if a >= 0.0 {
        return Ok(sorted[i]);
    }
    let b = d01 - a * (x0 + x1);
    let xv = -b / (2.0 * a);
    let yv = y0 + d01 * (xv - x0) + a * (xv - x0) * (xv - x1);
    Ok((xv.exp(), yv.exp()))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub a: f64,
    pub b: f64,
    /// Root-mean-square residual of `ln y`.
    pub residual: f64,
    pub points: usize,
}

/// Least-squares fit of `y = a x^b` on `(ln x, ln y)`.
pub fn fit_power_law(points: &[(f64, f64)]) -> Result<PowerLawFit> {
    if points.len() < 3 {
        return Err(Error::Fit(format!("need at least 3 points, got {}", points.len())));
    }
    if points.iter().any(|&(x, y)| !(x > 0.0 && y > 0.0)) {
        return Err(Error::Fit("power-law fit needs positive data".into()));
    }
    let n = points.len() as f64;
    let (lx, ly): (Vec<f64>, Vec<f64>) = points.iter().map(|&(x, y)| (x.ln(), y.ln())).unzip();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Fit("all abscissae coincide".into()));
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let b = sxy / sxx;
    let ln_a = my - b * mx;
    let residual = (lx.iter().zip(&ly).map(|(x, y)| (y - ln_a - b * x).powi(2)).sum::<f64>() / n).sqrt();
    if !b.is_finite() {
        return Err(Error::Fit("non-finite exponent".into()));
    }
    Ok(PowerLawFit { a: ln_a.exp(), b, residual, points: points.len() })
}

/// Susceptibility peak of one system size.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Peak {
    pub sites: usize,
    pub j_star: f64,
    pub chi_star: f64,
    /// Mean level spacing at the grid point nearest `j_star`.
    pub omega_h: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossoverFit {
    pub peaks: Vec<Peak>,
    /// `J* = a L^b`.
    pub j_star: Option<PowerLawFit>,
    /// `chi* = a omega_H^b`.
    pub chi_star: Option<PowerLawFit>,
}

/// Fits peak positions and heights across system sizes; fits need at least
/// three sizes.
pub fn crossover_fit(mut peaks: Vec<Peak>) -> CrossoverFit {
    peaks.sort_by_key(|p| p.sites);
    let j: Vec<(f64, f64)> = peaks.iter().map(|p| (p.sites as f64, p.j_star)).collect();
    let c: Vec<(f64, f64)> = peaks.iter().map(|p| (p.omega_h, p.chi_star)).collect();
    CrossoverFit { j_star: fit_power_law(&j).ok(), chi_star: fit_power_law(&c).ok(), peaks }
}
