//! Bipartite entanglement entropy of eigenstates.

use std::io::Write;
use std::ops::Range;
use std::path::Path;

use faer::{Mat, Side};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::basis::SectorBasis;
use crate::eigen::EigenData;
use crate::error::{Error, Result};

pub const NORM_TOL: f64 = 1e-10;
/// Eigenvalues of `rho_A` above `-CLAMP_TOL` are treated as zero.
pub const CLAMP_TOL: f64 = 1e-12;
pub const NEGATIVE_TOL: f64 = 1e-10;

fn check_cut(cut: &[usize], sites: usize) -> Result<()> {
    let mut seen = vec![false; sites];
    for &s in cut {
        if s >= sites {
            return Err(Error::SiteOutOfRange { site: s, sites });
        }
        if std::mem::replace(&mut seen[s], true) {
            return Err(Error::InvalidTerm(format!("site {s} repeated in cut")));
        }
    }
    Ok(())
}

/// `rho_A = Tr_B |psi><psi|` for a `2^n` amplitude vector.
///
/// Row index `a` of the result has bit `i` set when site `cut[i]` is up.
pub fn reduced_density_matrix(psi: &[Complex64], cut: &[usize]) -> Result<Mat<Complex64>> {
    if !psi.len().is_power_of_two() {
        return Err(Error::DimensionMismatch { expected: psi.len().next_power_of_two(), got: psi.len() });
    }
    let sites = psi.len().trailing_zeros() as usize;
    check_cut(cut, sites)?;
    let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized(norm));
    }
    let rest: Vec<usize> = (0..sites).filter(|s| !cut.contains(s)).collect();
    let (da, db) = (1usize << cut.len(), 1usize << rest.len());
    let scatter = |bits: usize, targets: &[usize]| -> usize {
        targets.iter().enumerate().filter(|(i, _)| bits >> i & 1 == 1).fold(0, |w, (_, &s)| w | 1 << s)
    };
    let a_words: Vec<usize> = (0..da).map(|a| scatter(a, cut)).collect();
    let b_words: Vec<usize> = (0..db).map(|b| scatter(b, &rest)).collect();
    let m = Mat::from_fn(da, db, |a, b| psi[a_words[a] | b_words[b]]);
    Ok(&m * m.adjoint())
}

/// Von Neumann entropy `-sum lambda ln lambda` in nats.
pub fn entanglement_entropy(rho: &Mat<Complex64>) -> Result<f64> {
    let lambdas = rho
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::Eigensolver(format!("reduced density matrix: {e:?}")))?;
    entropy_of_spectrum(&lambdas)
}

pub fn entropy_of_spectrum(lambdas: &[f64]) -> Result<f64> {
    let mut s = 0.0;
    for &l in lambdas {
        if l < -NEGATIVE_TOL {
            return Err(Error::InvalidState(l));
        }
        if l > CLAMP_TOL {
            s -= l * l.ln();
        }
    }
    Ok(s.max(0.0))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EntanglementResult {
    pub sector: String,
    pub cut: Vec<usize>,
    /// Eigenstate indices the entropies refer to.
    pub window: Range<usize>,
    pub energy_densities: Vec<f64>,
    /// `S_A` in nats.
    pub entropies: Vec<f64>,
    /// `S_A / (|A| ln 2)`.
    pub normalized: Vec<f64>,
    pub s_ave: f64,
}

impl EntanglementResult {
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
        writeln!(f, "sector,index,epsilon,S_A,s")?;
        for (i, n) in self.window.clone().enumerate() {
            writeln!(
                f,
                "{},{},{:.12e},{:.12e},{:.12e}",
                self.sector, n, self.energy_densities[i], self.entropies[i], self.normalized[i]
            )?;
        }
        f.flush()?;
        Ok(())
    }
}

/// Entropies of every eigenstate in `window` and their normalized mean.
pub fn s_ave(eig: &EigenData, basis: &SectorBasis, cut: &[usize], window: Range<usize>) -> Result<EntanglementResult> {
    if window.is_empty() || window.end > eig.dim() {
        return Err(Error::WindowTooSmall(format!("window {window:?} over {} states", eig.dim())));
    }
    if basis.dim() != eig.dim() {
        return Err(Error::DimensionMismatch { expected: basis.dim(), got: eig.dim() });
    }
    if cut.is_empty() {
        return Err(Error::InvalidTerm("empty cut".into()));
    }
    let scale = 1.0 / (cut.len() as f64 * std::f64::consts::LN_2);
    let entropies = window
        .clone()
        .into_par_iter()
        .map(|n| {
            let psi = basis.expand_to_full(&eig.eigenvector(n))?;
            entanglement_entropy(&reduced_density_matrix(&psi, cut)?)
        })
        .collect::<Result<Vec<f64>>>()?;
    let normalized: Vec<f64> = entropies.iter().map(|s| s * scale).collect();
    let s_ave = normalized.iter().sum::<f64>() / normalized.len() as f64;
    let eps = eig.energy_densities();
    Ok(EntanglementResult {
        sector: eig.label(),
        cut: cut.to_vec(),
        energy_densities: eps[window.clone()].to_vec(),
        window,
        entropies,
        normalized,
        s_ave,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::LN_2;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn product_state_is_pure() {
        let mut psi = vec![c(0.0); 16];
        psi[15] = c(1.0);
        let rho = reduced_density_matrix(&psi, &[0, 1]).unwrap();
        assert_eq!(rho[(3, 3)], c(1.0));
        assert!(entanglement_entropy(&rho).unwrap().abs() < 1e-14);
    }

    #[test]
    fn bell_pair() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let psi = vec![c(0.0), c(h), c(-h), c(0.0)];
        let rho = reduced_density_matrix(&psi, &[0]).unwrap();
        assert!((rho[(0, 0)].re - 0.5).abs() < 1e-15 && rho[(0, 1)].norm() < 1e-15);
        assert!((entanglement_entropy(&rho).unwrap() - LN_2).abs() < 1e-14);
    }

    #[test]
    fn spectrum_formula() {
        assert!((entropy_of_spectrum(&[0.5, 0.25, 0.25]).unwrap() - 1.5 * LN_2).abs() < 1e-15);
        assert!((entropy_of_spectrum(&[0.25; 4]).unwrap() - 2.0 * LN_2).abs() < 1e-15);
        assert_eq!(entropy_of_spectrum(&[1.0, -1e-13]).unwrap(), 0.0);
        assert!(matches!(entropy_of_spectrum(&[1.0, -1e-9]), Err(Error::InvalidState(_))));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(reduced_density_matrix(&[c(1.0), c(1.0)], &[0]), Err(Error::NotNormalized(_))));
        assert!(reduced_density_matrix(&[c(1.0), c(0.0), c(0.0)], &[0]).is_err());
        assert!(reduced_density_matrix(&[c(1.0), c(0.0)], &[3]).is_err());
        assert!(reduced_density_matrix(&[c(1.0), c(0.0), c(0.0), c(0.0)], &[0, 0]).is_err());
    }

    #[test]
    fn polarized_sector_has_zero_entropy() {
        use crate::eigen::diagonalize;
        use crate::lattice::LatticeSpec;
        use crate::materialize::materialize;
        use crate::models::build_h0;
        use crate::symmetry::SymmetrySector;
        let lat = LatticeSpec::chain(6).unwrap();
        // ground and top states of H0 are the two polarized words
        let b = SectorBasis::build(&lat, &SymmetrySector::chain(0, 1)).unwrap();
        let e = diagonalize(&materialize(&build_h0(&lat), &b).unwrap(), 6).unwrap();
        let r = s_ave(&e, &b, &lat.half_cut(), 0..1).unwrap();
        assert!(r.s_ave.abs() < 1e-12);
        let top = s_ave(&e, &b, &lat.half_cut(), e.dim() - 1..e.dim()).unwrap();
        assert!(top.s_ave.abs() < 1e-12);
    }
}
