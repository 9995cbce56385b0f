//! Full dense Hermitian eigendecomposition of sector matrices.

use faer::{Mat, Side};
use num_complex::Complex64;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::materialize::{max_abs, SectorMatrix};
use crate::pauli::{OperatorKind, OperatorSpec};
use crate::symmetry::SymmetrySector;

pub const UNITARITY_TOL: f64 = 1e-8;
pub const RECONSTRUCTION_TOL: f64 = 1e-8;

/// Eigenvalues (ascending) and eigenvectors (columns) of one sector.
#[derive(Clone, Debug)]
pub struct EigenData {
    pub sector: Option<SymmetrySector>,
    /// Sites used for the energy density `E_n / N`.
    pub sites: usize,
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Mat<Complex64>,
    pub fingerprint: String,
}

impl EigenData {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn energy_densities(&self) -> Vec<f64> {
        let n = self.sites as f64;
        self.eigenvalues.iter().map(|e| e / n).collect()
    }

    /// Column `n` as a vector of sector coefficients.
    pub fn eigenvector(&self, n: usize) -> Vec<Complex64> {
        (0..self.eigenvectors.nrows()).map(|i| self.eigenvectors[(i, n)]).collect()
    }

    pub fn label(&self) -> String {
        self.sector.map_or_else(|| "full".to_string(), |s| s.to_string())
    }

    pub fn with_fingerprint(mut self, fingerprint: impl Into<String>) -> Self {
        self.fingerprint = fingerprint.into();
        self
    }
}

fn require_hermitian(matrix: &SectorMatrix) -> Result<()> {
    if matrix.kind != OperatorKind::Hermitian {
        return Err(Error::Eigensolver(format!("{}: matrix `{}` is not Hermitian", matrix.label(), matrix.source)));
    }
    Ok(())
}

/// Eigenvalues and eigenvectors of a Hermitian sector matrix.
pub fn diagonalize(matrix: &SectorMatrix, sites: usize) -> Result<EigenData> {
    require_hermitian(matrix)?;
    let evd = matrix
        .entries
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Eigensolver(format!("{}: {e:?}", matrix.label())))?;
    let s = evd.S().column_vector();
    let u = evd.U();
    let dim = matrix.dim();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| s[a].re.total_cmp(&s[b].re));
    let eigenvalues = order.iter().map(|&i| s[i].re).collect();
    let eigenvectors = Mat::from_fn(dim, dim, |i, j| u[(i, order[j])]);
    Ok(EigenData { sector: matrix.sector, sites, eigenvalues, eigenvectors, fingerprint: String::new() })
}

/// Ascending eigenvalues only.
pub fn eigenvalues(matrix: &SectorMatrix) -> Result<Vec<f64>> {
    require_hermitian(matrix)?;
    let mut e = matrix
        .entries
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::Eigensolver(format!("{}: {e:?}", matrix.label())))?;
    e.sort_by(f64::total_cmp);
    Ok(e)
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    /// `max |U^dagger U - 1|`.
    pub unitarity: f64,
    /// `max |H - U diag(E) U^dagger| / max |H|`.
    pub reconstruction: f64,
    /// `|sum E_n - tr H| / D`.
    pub trace: f64,
    pub passed: bool,
}

pub fn validate(data: &EigenData, matrix: &SectorMatrix) -> Result<ValidationReport> {
    let dim = matrix.dim();
    let u = &data.eigenvectors;
    if u.nrows() != dim || data.dim() != u.ncols() {
        return Err(Error::DimensionMismatch { expected: dim, got: u.nrows() });
    }
    let gram = u.adjoint() * u;
    let unitarity = max_abs(&(&gram - Mat::<Complex64>::identity(u.ncols(), u.ncols())));
    let scaled = Mat::from_fn(dim, u.ncols(), |i, j| u[(i, j)] * data.eigenvalues[j]);
    let rebuilt = &scaled * u.adjoint();
    let scale = matrix.max_abs().max(f64::MIN_POSITIVE);
    let reconstruction = max_abs(&(&matrix.entries - &rebuilt)) / scale;
    let trace = (data.eigenvalues.iter().sum::<f64>() - matrix.trace().re).abs() / dim.max(1) as f64;
    let passed = u.ncols() == dim
        && unitarity <= UNITARITY_TOL
        && reconstruction <= RECONSTRUCTION_TOL
        && trace <= 1e-8;
    Ok(ValidationReport { unitarity, reconstruction, trace, passed })
}

/// Content hash identifying a (model, coupling, sector) diagonalization.
pub fn fingerprint(spec: &OperatorSpec, j: f64, sector: Option<&SymmetrySector>) -> String {
    let mut h = Sha256::new();
    h.update(serde_json::to_vec(spec).expect("operator specs serialize"));
    h.update(j.to_le_bytes());
    h.update(serde_json::to_vec(&sector).expect("sectors serialize"));
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}
