//! Dense sector matrices of Pauli-sum operators.

use faer::Mat;
use num_complex::Complex64;

use crate::basis::SectorBasis;
use crate::error::{Error, Result};
use crate::pauli::{OperatorKind, OperatorSpec};
use crate::symmetry::{SpinBasisState, SymmetrySector};

/// Dense `D_s x D_s` matrix of an operator inside one sector basis.
#[derive(Clone, Debug)]
pub struct SectorMatrix {
    pub sector: Option<SymmetrySector>,
    pub source: String,
    pub kind: OperatorKind,
    pub entries: Mat<Complex64>,
}

impl SectorMatrix {
    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn label(&self) -> String {
        self.sector.map_or_else(|| "full".to_string(), |s| s.to_string())
    }

    /// `max |A - A^dagger|` (or `max |A + A^dagger|` for anti-Hermitian input).
    pub fn hermiticity_deviation(&self) -> f64 {
        let sign = match self.kind {
            OperatorKind::Hermitian => 1.0,
            OperatorKind::AntiHermitian => -1.0,
        };
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for j in 0..n {
            for i in 0..=j {
                let d = self.entries[(i, j)] - self.entries[(j, i)].conj() * sign;
                worst = worst.max(d.norm());
            }
        }
        worst
    }

    pub fn max_abs(&self) -> f64 {
        max_abs(&self.entries)
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim()).map(|i| self.entries[(i, i)]).sum()
    }
}

pub(crate) fn max_abs(m: &Mat<Complex64>) -> f64 {
    let mut worst: f64 = 0.0;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            worst = worst.max(m[(i, j)].norm());
        }
    }
    worst
}

fn check_symmetric(spec: &OperatorSpec, basis: &SectorBasis) -> Result<()> {
    if basis.sector().is_none() {
        return Ok(());
    }
    if !spec.conserves_parity() {
        return Err(Error::SymmetryBroken {
            op: spec.name.clone(),
            reason: "a term flips an odd number of spins".into(),
        });
    }
    for g in basis.group().iter().skip(1) {
        if !spec.is_invariant_under(&g.perm) {
            return Err(Error::SymmetryBroken {
                op: spec.name.clone(),
                reason: format!("not invariant under translation {:?}", g.shift),
            });
        }
    }
    Ok(())
}

/// Builds `<r'~| O |r~>` for all pairs of sector states.
pub fn materialize(spec: &OperatorSpec, basis: &SectorBasis) -> Result<SectorMatrix> {
    if spec.lattice != *basis.lattice() {
        return Err(Error::LatticeMismatch {
            op: spec.name.clone(),
            reason: format!("operator lattice {} differs from basis lattice {}", spec.lattice.label(), basis.lattice().label()),
        });
    }
    spec.check_sites()?;
    check_symmetric(spec, basis)?;
    let dim = basis.dim();
    let norms = basis.norms();
    let inv = 1.0 / spec.normalization;
    let mut m = Mat::<Complex64>::zeros(dim, dim);
    for (a, &r) in basis.representatives().iter().enumerate() {
        for term in &spec.terms {
            let Some((amp, bits)) = term.apply(r.0) else { continue };
            let Some((b, phase)) = basis.find(SpinBasisState(bits)) else { continue };
            m[(b, a)] += phase * (amp * inv * norms[b] / norms[a]);
        }
    }
    Ok(SectorMatrix { sector: basis.sector().copied(), source: spec.name.clone(), kind: spec.kind, entries: m })
}

/// Matrix of `spec` on the unreduced `2^n` basis.
pub fn materialize_full(spec: &OperatorSpec) -> Result<SectorMatrix> {
    materialize(spec, &SectorBasis::full(&spec.lattice)?)
}
