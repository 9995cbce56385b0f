//! Observables in the energy eigenbasis: spectral functions, fidelity
//! susceptibilities and diagonal expectation values.

use std::fmt;
use std::io::Write;
use std::ops::Range;
use std::path::Path;
use std::str::FromStr;

use faer::Mat;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chaos::{central_window, full_mean_spacing, min_spacing};
use crate::eigen::EigenData;
use crate::error::{Error, Result};
use crate::materialize::SectorMatrix;
use crate::symmetry::SymmetrySector;

/// Pairs closer than this in energy are skipped in `1 / omega^2` sums.
pub const DEGENERATE_OMEGA: f64 = 1e-12;
pub const DEFAULT_GRID_POINTS: usize = 200;
pub const GRID_FLOOR: f64 = 1e-4;
/// Gaussian kernels are truncated beyond this many widths.
const GAUSSIAN_CUTOFF: f64 = 40.0;

/// `O_nm = <n|O|m>` for one sector.
#[derive(Clone, Debug)]
pub struct EigenbasisOperator {
    pub sector: Option<SymmetrySector>,
    pub name: String,
    pub elements: Mat<Complex64>,
}

impl EigenbasisOperator {
    pub fn dim(&self) -> usize {
        self.elements.nrows()
    }

    pub fn element(&self, n: usize, m: usize) -> Complex64 {
        self.elements[(n, m)]
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        let d = self.dim();
        let mut worst: f64 = 0.0;
        for m in 0..d {
            for n in 0..=m {
                worst = worst.max((self.elements[(n, m)] - self.elements[(m, n)].conj()).norm());
            }
        }
        worst
    }
}

/// `U^dagger O U`.
pub fn to_eigenbasis(obs: &SectorMatrix, eig: &EigenData) -> Result<EigenbasisOperator> {
    if obs.sector != eig.sector {
        return Err(Error::LatticeMismatch {
            op: obs.source.clone(),
            reason: format!("operator sector {} differs from eigenbasis sector {}", obs.label(), eig.label()),
        });
    }
    let u = &eig.eigenvectors;
    if obs.dim() != u.nrows() {
        return Err(Error::DimensionMismatch { expected: u.nrows(), got: obs.dim() });
    }
    let elements = u.adjoint() * &obs.entries * u;
    Ok(EigenbasisOperator { sector: obs.sector, name: obs.source.clone(), elements })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kernel {
    #[default]
    Gaussian,
    Lorentzian,
}

impl Kernel {
    pub fn eval(self, x: f64, eta: f64) -> f64 {
        match self {
            Kernel::Gaussian => (-x * x / (2.0 * eta * eta)).exp() / ((2.0 * std::f64::consts::PI).sqrt() * eta),
            Kernel::Lorentzian => eta / (std::f64::consts::PI * (x * x + eta * eta)),
        }
    }

    fn reach(self, eta: f64) -> f64 {
        match self {
            Kernel::Gaussian => GAUSSIAN_CUTOFF * eta,
            Kernel::Lorentzian => f64::INFINITY,
        }
    }
}

impl fmt::Display for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kernel::Gaussian => "gaussian",
            Kernel::Lorentzian => "lorentzian",
        })
    }
}

impl FromStr for Kernel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussian" => Ok(Kernel::Gaussian),
            "lorentzian" => Ok(Kernel::Lorentzian),
            other => Err(Error::Config(format!("unknown kernel `{other}`"))),
        }
    }
}

/// `points` log-spaced values from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, points: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi > lo && points >= 2) {
        return Err(Error::InvalidBroadening(lo));
    }
    let (a, b) = (lo.ln(), hi.ln());
    Ok((0..points).map(|i| (a + (b - a) * i as f64 / (points - 1) as f64).exp()).collect())
}

/// Default grid for a spectrum: `[max(eta/2, 1e-4), bandwidth]`.
pub fn default_grid(eigenvalues: &[f64], eta: f64, points: usize) -> Result<Vec<f64>> {
    let bandwidth = eigenvalues.last().copied().unwrap_or(0.0) - eigenvalues.first().copied().unwrap_or(0.0);
    log_grid((eta / 2.0).max(GRID_FLOOR), bandwidth, points)
}

/// Default broadening: the smallest non-degenerate level spacing of the sector.
pub fn default_eta(eig: &EigenData) -> Result<f64> {
    match min_spacing(&eig.eigenvalues) {
        Some(g) if g > 0.0 => Ok(g),
        Some(g) => Err(Error::InvalidBroadening(g)),
        None => Err(Error::WindowTooSmall("fewer than two levels".into())),
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpectralFunctionResult {
    pub observable: String,
    pub sector: String,
    pub kernel: Kernel,
    pub eta: f64,
    pub window: Range<usize>,
    /// Number of eigenstates averaged.
    pub states: usize,
    /// Prefactor applied to every `|O_nm|^2`.
    pub sites: usize,
    pub omega: Vec<f64>,
    pub values: Vec<f64>,
}

impl SpectralFunctionResult {
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
        writeln!(f, "omega,F_ave")?;
        for (w, v) in self.omega.iter().zip(&self.values) {
            writeln!(f, "{w:.12e},{v:.12e}")?;
        }
        f.flush()?;
        Ok(())
    }
}

#[derive(Clone, Debug, Default)]
pub struct SpectralOptions {
    pub kernel: Kernel,
    /// Broadening; the sector's smallest gap when `None`.
    pub eta: Option<f64>,
    /// Evaluation grid; the default log grid when `None`.
    pub grid: Option<Vec<f64>>,
}

/// Smoothed `sum_{(w, a)} a K(omega - w)` at each grid point, from pairs
/// sorted by `w`.
fn smoothed(pairs: &[(f64, f64)], grid: &[f64], kernel: Kernel, eta: f64) -> Vec<f64> {
    let reach = kernel.reach(eta);
    grid.par_iter()
        .map(|&w| {
            let lo = pairs.partition_point(|p| p.0 < w - reach);
            let hi = pairs.partition_point(|p| p.0 <= w + reach);
            pairs[lo..hi].iter().map(|&(x, a)| a * kernel.eval(w - x, eta)).sum()
        })
        .collect()
}

/// `(omega_nm, L |O_nm|^2)` for all `m != n`, with `omega_nm = E_n - E_m`.
fn weighted_pairs(op: &EigenbasisOperator, eig: &EigenData, n: usize, out: &mut Vec<(f64, f64)>) {
    let prefactor = eig.sites as f64;
    let e = &eig.eigenvalues;
    for m in 0..eig.dim() {
        if m != n {
            out.push((e[n] - e[m], prefactor * op.elements[(n, m)].norm_sqr()));
        }
    }
}

fn check_pair(op: &EigenbasisOperator, eig: &EigenData) -> Result<()> {
    if op.dim() != eig.dim() {
        return Err(Error::DimensionMismatch { expected: eig.dim(), got: op.dim() });
    }
    Ok(())
}

/// `F_ave(omega)`: mean over `window` of the kernel-smoothed `|f_n(omega)|^2`.
pub fn spectral_function(
    op: &EigenbasisOperator,
    eig: &EigenData,
    window: Range<usize>,
    options: &SpectralOptions,
) -> Result<SpectralFunctionResult> {
    check_pair(op, eig)?;
    if window.is_empty() || window.end > eig.dim() {
        return Err(Error::WindowTooSmall(format!("window {window:?} over {} states", eig.dim())));
    }
    let eta = match options.eta {
        Some(e) if e > 0.0 && e.is_finite() => e,
        Some(e) => return Err(Error::InvalidBroadening(e)),
        None => default_eta(eig)?,
    };
    let omega = match &options.grid {
        Some(g) => g.clone(),
        None => default_grid(&eig.eigenvalues, eta, DEFAULT_GRID_POINTS)?,
    };
    let mut pairs = Vec::with_capacity(window.len() * eig.dim());
    for n in window.clone() {
        weighted_pairs(op, eig, n, &mut pairs);
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let states = window.len();
    let values = smoothed(&pairs, &omega, options.kernel, eta).into_iter().map(|v| v / states as f64).collect();
    Ok(SpectralFunctionResult {
        observable: op.name.clone(),
        sector: eig.label(),
        kernel: options.kernel,
        eta,
        window,
        states,
        sites: eig.sites,
        omega,
        values,
    })
}

/// `|f_n(omega)|^2` of one eigenstate on an arbitrary grid.
pub fn eigenstate_spectral_function(
    op: &EigenbasisOperator,
    eig: &EigenData,
    n: usize,
    grid: &[f64],
    kernel: Kernel,
    eta: f64,
) -> Result<Vec<f64>> {
    check_pair(op, eig)?;
    if !(eta > 0.0 && eta.is_finite()) {
        return Err(Error::InvalidBroadening(eta));
    }
    let mut pairs = Vec::with_capacity(eig.dim());
    weighted_pairs(op, eig, n, &mut pairs);
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(smoothed(&pairs, grid, kernel, eta))
}

/// Averages sector results that share a grid, weighting by state count.
pub fn pool_spectral(results: &[SpectralFunctionResult]) -> Result<SpectralFunctionResult> {
    let first = results.first().ok_or_else(|| Error::WindowTooSmall("no spectral functions to pool".into()))?;
    let mut values = vec![0.0; first.omega.len()];
    let mut states = 0;
    for r in results {
        if r.omega != first.omega {
            return Err(Error::DimensionMismatch { expected: first.omega.len(), got: r.omega.len() });
        }
        for (acc, v) in values.iter_mut().zip(&r.values) {
            *acc += v * r.states as f64;
        }
        states += r.states;
    }
    values.iter_mut().for_each(|v| *v /= states as f64);
    Ok(SpectralFunctionResult {
        sector: "aggregate".into(),
        eta: results.iter().map(|r| r.eta).fold(f64::INFINITY, f64::min),
        states,
        values,
        ..first.clone()
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SusceptibilityResult {
    pub observable: String,
    pub sector: String,
    /// `chi_n` for every eigenstate of the sector.
    pub chi: Vec<f64>,
    pub chi_typ: f64,
    pub omega_h: f64,
    pub dim: usize,
    pub sites: usize,
    pub skipped_pairs: usize,
    /// States with `chi_n = 0`, left out of `chi_typ`.
    pub zero_states: usize,
}

/// Geometric mean over the positive entries; `None` when there are none.
pub fn typical_value(values: impl IntoIterator<Item = f64>) -> Option<(f64, usize)> {
    let (sum, n) = values.into_iter().filter(|&x| x > 0.0).fold((0.0, 0usize), |(s, n), x| (s + x.ln(), n + 1));
    (n > 0).then(|| ((sum / n as f64).exp(), n))
}

/// `chi_n = L sum_{m != n} |O_nm|^2 / (E_n - E_m)^2` over the full spectrum.
pub fn fidelity_susceptibility(op: &EigenbasisOperator, eig: &EigenData) -> Result<SusceptibilityResult> {
    check_pair(op, eig)?;
    let d = eig.dim();
    let e = &eig.eigenvalues;
    let prefactor = eig.sites as f64;
    let per_state: Vec<(f64, usize)> = (0..d)
        .into_par_iter()
        .map(|n| {
            let mut chi = 0.0;
            let mut skipped = 0;
            for m in 0..d {
                if m == n {
                    continue;
                }
                let w = e[n] - e[m];
                if w.abs() < DEGENERATE_OMEGA {
                    skipped += 1;
                    continue;
                }
                chi += op.elements[(n, m)].norm_sqr() / (w * w);
            }
            (prefactor * chi, skipped)
        })
        .collect();
    let chi: Vec<f64> = per_state.iter().map(|p| p.0).collect();
    let skipped_pairs = per_state.iter().map(|p| p.1).sum::<usize>() / 2;
    let (chi_typ, positive) = typical_value(chi.iter().copied()).ok_or(Error::DiagonalObservable)?;
    let omega_h = central_window(d, 0.2)
        .ok()
        .and_then(|w| full_mean_spacing(&e[w]))
        .or_else(|| full_mean_spacing(e))
        .unwrap_or(0.0);
    Ok(SusceptibilityResult {
        observable: op.name.clone(),
        sector: eig.label(),
        chi_typ,
        omega_h,
        dim: d,
        sites: eig.sites,
        skipped_pairs,
        zero_states: d - positive,
        chi,
    })
}

/// Geometric mean of `chi_n` over the pooled eigenstates of several sectors.
pub fn pooled_chi_typ(results: &[SusceptibilityResult]) -> Result<f64> {
    typical_value(results.iter().flat_map(|r| r.chi.iter().copied()))
        .map(|(v, _)| v)
        .ok_or(Error::DiagonalObservable)
}

/// `(epsilon_n, O_nn)` over the central `fraction` of the spectrum.
pub fn diagonal_eev(op: &EigenbasisOperator, eig: &EigenData, fraction: f64) -> Result<Vec<(usize, f64, f64)>> {
    check_pair(op, eig)?;
    let eps = eig.energy_densities();
    Ok(central_window(eig.dim(), fraction)?.map(|n| (n, eps[n], op.elements[(n, n)].re)).collect())
}

pub fn write_diagonal_csv(path: &Path, sector: &str, rows: &[(usize, f64, f64)]) -> Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(f, "sector,index,epsilon,O_nn")?;
    for (n, e, o) in rows {
        writeln!(f, "{sector},{n},{e:.12e},{o:.12e}")?;
    }
    f.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::SectorBasis;
    use crate::eigen::diagonalize;
    use crate::lattice::LatticeSpec;
    use crate::materialize::materialize;
    use crate::models::*;
    use crate::pauli::OperatorKind;

    fn two_level(w0: f64, o: f64, sites: usize) -> (EigenbasisOperator, EigenData) {
        let eig = EigenData {
            sector: None,
            sites,
            eigenvalues: vec![0.0, w0],
            eigenvectors: Mat::identity(2, 2),
            fingerprint: String::new(),
        };
        let op = EigenbasisOperator {
            sector: None,
            name: "o".into(),
            elements: Mat::from_fn(2, 2, |i, j| if i == j { Complex64::new(0.0, 0.0) } else { Complex64::new(o, 0.0) }),
        };
        (op, eig)
    }

    fn sector_setup(l: usize, j: f64, k: usize, obs: Observable) -> (EigenbasisOperator, EigenData, SectorMatrix) {
        let lat = LatticeSpec::chain(l).unwrap();
        let b = SectorBasis::build(&lat, &SymmetrySector::chain(k, 1)).unwrap();
        let h = materialize(&build_h1d(&lat, j).unwrap(), &b).unwrap();
        let eig = diagonalize(&h, l).unwrap();
        let o = materialize(&build_observable(obs, &lat).unwrap(), &b).unwrap();
        (to_eigenbasis(&o, &eig).unwrap(), eig, o)
    }

    #[test]
    fn hamiltonian_becomes_diagonal() {
        let lat = LatticeSpec::chain(8).unwrap();
        let b = SectorBasis::build(&lat, &SymmetrySector::chain(1, 1)).unwrap();
        let h = materialize(&build_h1d(&lat, 0.7).unwrap(), &b).unwrap();
        let eig = diagonalize(&h, 8).unwrap();
        let op = to_eigenbasis(&h, &eig).unwrap();
        for n in 0..eig.dim() {
            for m in 0..eig.dim() {
                let want = if n == m { eig.eigenvalues[n] } else { 0.0 };
                assert!((op.element(n, m) - want).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn sector_mismatch_rejected() {
        let (_, eig, _) = sector_setup(8, 0.5, 1, Observable::V);
        let lat = LatticeSpec::chain(8).unwrap();
        let b = SectorBasis::build(&lat, &SymmetrySector::chain(2, 1)).unwrap();
        let o = materialize(&build_observable(Observable::V, &lat).unwrap(), &b).unwrap();
        assert!(to_eigenbasis(&o, &eig).is_err());
    }

    #[test]
    fn two_level_gaussian() {
        let (w0, o, eta) = (0.8, 0.3, 0.05);
        let (op, eig) = two_level(w0, o, 4);
        let grid = vec![0.7, 0.8, 0.85];
        let r = spectral_function(&op, &eig, 1..2, &SpectralOptions { kernel: Kernel::Gaussian, eta: Some(eta), grid: Some(grid.clone()) })
            .unwrap();
        for (w, v) in grid.iter().zip(&r.values) {
            let want = 4.0 * o * o * (-(w - w0).powi(2) / (2.0 * eta * eta)).exp() / ((2.0 * std::f64::consts::PI).sqrt() * eta);
            assert!((v - want).abs() < 1e-12 * want.max(1.0));
        }
    }

    #[test]
    fn two_level_susceptibility() {
        let (op, eig) = two_level(0.5, 0.2, 6);
        let r = fidelity_susceptibility(&op, &eig).unwrap();
        let want = 6.0 * 0.04 / 0.25;
        assert!((r.chi[0] - want).abs() < 1e-14 && (r.chi[1] - want).abs() < 1e-14);
        assert!((r.chi_typ - want).abs() < 1e-14);
    }

    #[test]
    fn diagonal_observable_has_no_spectral_weight() {
        let (_, eig, _) = sector_setup(8, 0.5, 1, Observable::V);
        let lat = LatticeSpec::chain(8).unwrap();
        let b = SectorBasis::build(&lat, &SymmetrySector::chain(1, 1)).unwrap();
        let h = materialize(&build_h1d(&lat, 0.5).unwrap(), &b).unwrap();
        let op = to_eigenbasis(&h, &eig).unwrap();
        let r = spectral_function(&op, &eig, 0..eig.dim(), &SpectralOptions::default()).unwrap();
        assert!(r.values.iter().all(|v| v.abs() < 1e-12));
        let mut exact = op.clone();
        for m in 0..exact.dim() {
            for n in 0..exact.dim() {
                if n != m {
                    exact.elements[(n, m)] = Complex64::new(0.0, 0.0);
                }
            }
        }
        assert!(matches!(fidelity_susceptibility(&exact, &eig), Err(Error::DiagonalObservable)));
    }

    #[test]
    fn bad_broadening() {
        let (op, eig) = two_level(1.0, 1.0, 2);
        let opts = SpectralOptions { eta: Some(0.0), ..Default::default() };
        assert!(matches!(spectral_function(&op, &eig, 0..2, &opts), Err(Error::InvalidBroadening(_))));
    }

    #[test]
    fn grid_bounds() {
        let g = log_grid(1e-3, 10.0, 200).unwrap();
        assert_eq!(g.len(), 200);
        assert!((g[0] - 1e-3).abs() < 1e-15 && (g[199] - 10.0).abs() < 1e-12);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
        let e = [0.0, 1e-6, 3.0];
        assert!((default_grid(&e, 1e-6, 10).unwrap()[0] - GRID_FLOOR).abs() < 1e-18);
    }

    #[test]
    fn parseval_and_hermiticity() {
        let (op, _, o) = sector_setup(8, 0.4, 1, Observable::V);
        assert!(op.hermiticity_deviation() < 1e-10);
        let o2 = &o.entries * &o.entries;
        let sq = SectorMatrix { entries: o2, kind: OperatorKind::Hermitian, ..o.clone() };
        let (_, eig, _) = sector_setup(8, 0.4, 1, Observable::V);
        let op2 = to_eigenbasis(&sq, &eig).unwrap();
        for n in 0..op.dim() {
            let row: f64 = (0..op.dim()).map(|m| op.element(n, m).norm_sqr()).sum();
            assert!((row - op2.element(n, n).re).abs() < 1e-9);
        }
    }

    #[test]
    fn chi_typ_shift_and_scale() {
        let (op, eig, _) = sector_setup(8, 0.3, 1, Observable::V);
        let base = fidelity_susceptibility(&op, &eig).unwrap().chi_typ;
        let mut shifted = eig.clone();
        shifted.eigenvalues.iter_mut().for_each(|e| *e += 3.5);
        assert!((fidelity_susceptibility(&op, &shifted).unwrap().chi_typ - base).abs() < 1e-9 * base);
        let mut scaled = eig.clone();
        scaled.eigenvalues.iter_mut().for_each(|e| *e *= 2.0);
        assert!((fidelity_susceptibility(&op, &scaled).unwrap().chi_typ - base / 4.0).abs() < 1e-9 * base);
    }

    #[test]
    fn diagonal_values_of_parity_and_energy() {
        let lat = LatticeSpec::chain(8).unwrap();
        let b = SectorBasis::build(&lat, &SymmetrySector::chain(1, -1)).unwrap();
        let h = materialize(&build_h1d(&lat, 0.6).unwrap(), &b).unwrap();
        let eig = diagonalize(&h, 8).unwrap();
        let p = to_eigenbasis(&materialize(&build_parity(&lat), &b).unwrap(), &eig).unwrap();
        assert!(diagonal_eev(&p, &eig, 1.0).unwrap().iter().all(|r| (r.2 + 1.0).abs() < 1e-10));
        let hl = to_eigenbasis(&SectorMatrix { entries: &h.entries * faer::Scale(Complex64::new(1.0 / 8.0, 0.0)), ..h.clone() }, &eig).unwrap();
        for (_, e, o) in diagonal_eev(&hl, &eig, 0.8).unwrap() {
            assert!((e - o).abs() < 1e-10);
        }
    }

    #[test]
    fn pooling_weights_by_states() {
        let (op, eig) = two_level(1.0, 1.0, 2);
        let opts = SpectralOptions { eta: Some(0.1), grid: Some(vec![1.0]), ..Default::default() };
        let a = spectral_function(&op, &eig, 0..2, &opts).unwrap();
        let b = spectral_function(&op, &eig, 1..2, &opts).unwrap();
        let p = pool_spectral(&[a.clone(), b.clone()]).unwrap();
        assert_eq!(p.states, 3);
        assert!((p.values[0] - (2.0 * a.values[0] + b.values[0]) / 3.0).abs() < 1e-14);
    }
}
