//! Symmetry-adapted bases built from orbit representatives.
//!
//! A sector state is `|r~> = N_r^{-1/2} sum_g conj(chi(g)) |g r>` with the sum
//! over the spatial group `G` and `N_r = |G| |Stab(r)|`. Parity is handled by
//! restricting the words to those with `prod sigma^z` equal to the sector label.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::LatticeSpec;
use crate::symmetry::{spatial_group, SpinBasisState, SymmetryGroupElement, SymmetrySector};

const CHARACTER_TOL: f64 = 1e-9;

#[derive(Clone, Debug)]
enum Action {
    /// Rotations of a chain word, element `j` shifts by `j` sites.
    Rotations,
    Permutations,
}

/// Basis of one symmetry sector (or of the full Hilbert space).
///
/// Immutable after construction.
#[derive(Clone, Debug)]
pub struct SectorBasis {
    lattice: LatticeSpec,
    sector: Option<SymmetrySector>,
    group: Vec<SymmetryGroupElement>,
    action: Action,
    representatives: Vec<SpinBasisState>,
    norms: Vec<f64>,
}

impl SectorBasis {
    /// Representative-state basis of `sector`, ordered by ascending bit value.
    pub fn build(lattice: &LatticeSpec, sector: &SymmetrySector) -> Result<Self> {
        lattice.validate()?;
        let group = spatial_group(lattice, sector)?;
        let action = if lattice.is_chain() { Action::Rotations } else { Action::Permutations };
        let mut basis = SectorBasis {
            lattice: *lattice,
            sector: Some(*sector),
            group,
            action,
            representatives: Vec::new(),
            norms: Vec::new(),
        };
        let n = lattice.num_sites();
        let order = basis.group.len() as f64;
        for bits in 0..lattice.hilbert_dim() as u64 {
            let s = SpinBasisState(bits);
            if s.parity(n) != sector.z2 {
                continue;
            }
            if let Some(stab) = basis.stabilizer_if_representative(s) {
                basis.representatives.push(s);
                basis.norms.push((order * stab as f64).sqrt());
            }
        }
        Ok(basis)
    }

    /// The unreduced `2^n` computational basis.
    pub fn full(lattice: &LatticeSpec) -> Result<Self> {
        lattice.validate()?;
        let n = lattice.num_sites();
        let identity = SymmetryGroupElement {
            perm: (0..n).collect(),
            shift: (0, 0),
            mirror_x: false,
            mirror_y: false,
            z2_flip: false,
            character: Complex64::new(1.0, 0.0),
        };
        let dim = lattice.hilbert_dim();
        Ok(SectorBasis {
            lattice: *lattice,
            sector: None,
            group: vec![identity],
            action: Action::Permutations,
            representatives: (0..dim as u64).map(SpinBasisState).collect(),
            norms: vec![1.0; dim],
        })
    }

    pub fn lattice(&self) -> &LatticeSpec {
        &self.lattice
    }

    /// `None` for the full space.
    pub fn sector(&self) -> Option<&SymmetrySector> {
        self.sector.as_ref()
    }

    pub fn label(&self) -> String {
        self.sector.map_or_else(|| "full".to_string(), |s| s.to_string())
    }

    pub fn dim(&self) -> usize {
        self.representatives.len()
    }

    pub fn representatives(&self) -> &[SpinBasisState] {
        &self.representatives
    }

    /// `sqrt(N_r)` per representative.
    pub fn norms(&self) -> &[f64] {
        &self.norms
    }

    pub fn group(&self) -> &[SymmetryGroupElement] {
        &self.group
    }

    fn image(&self, s: SpinBasisState, index: usize) -> SpinBasisState {
        match self.action {
            Action::Rotations => {
                let n = self.lattice.num_sites() as u32;
                let j = index as u32;
                if j == 0 {
                    return s;
                }
                let m = crate::symmetry::mask(n as usize);
                SpinBasisState(((s.0 << j) | (s.0 >> (n - j))) & m)
            }
            Action::Permutations => s.permuted(&self.group[index].perm),
        }
    }

    /// `Some(|Stab(s)|)` when `s` is the minimum of its orbit and survives the
    /// projection, `None` otherwise.
    fn stabilizer_if_representative(&self, s: SpinBasisState) -> Option<usize> {
        let mut stab = 0;
        for (i, g) in self.group.iter().enumerate() {
            let t = self.image(s, i);
            if t < s {
                return None;
            }
            if t == s {
                if (g.character - 1.0).norm() > CHARACTER_TOL {
                    return None;
                }
                stab += 1;
            }
        }
        Some(stab)
    }

    /// Locates the sector state containing word `s`.
    ///
    /// Returns the representative index and `conj(chi(g))` for the element
    /// `g` with `g s = r`, or `None` when the orbit of `s` is projected out.
    pub fn find(&self, s: SpinBasisState) -> Option<(usize, Complex64)> {
        if let Some(sector) = &self.sector {
            if s.parity(self.lattice.num_sites()) != sector.z2 {
                return None;
            }
        }
        let mut best = s;
        let mut best_g = 0;
        for i in 1..self.group.len() {
            let t = self.image(s, i);
            if t < best {
                best = t;
                best_g = i;
            }
        }
        let idx = self.representatives.binary_search(&best).ok()?;
        Some((idx, self.group[best_g].character.conj()))
    }

    /// Index of `s` if it is itself a representative.
    pub fn index_of(&self, s: SpinBasisState) -> Option<usize> {
        self.representatives.binary_search(&s).ok()
    }

    /// Amplitudes of sector state `index` on the computational basis.
    pub fn orbit_amplitudes(&self, index: usize) -> Vec<(SpinBasisState, Complex64)> {
        let r = self.representatives[index];
        let scale = 1.0 / self.norms[index];
        let mut out: Vec<(SpinBasisState, Complex64)> = Vec::new();
        for (i, g) in self.group.iter().enumerate() {
            let t = self.image(r, i);
            let amp = g.character.conj() * scale;
            match out.iter_mut().find(|(s, _)| *s == t) {
                Some((_, a)) => *a += amp,
                None => out.push((t, amp)),
            }
        }
        out
    }

    /// Expands sector coefficients into a `2^n` amplitude vector.
    pub fn expand_to_full(&self, coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
        if coeffs.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: coeffs.len() });
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.lattice.hilbert_dim()];
        for (a, &c) in coeffs.iter().enumerate() {
            if c == Complex64::new(0.0, 0.0) {
                continue;
            }
            let r = self.representatives[a];
            let scale = c / self.norms[a];
            for (i, g) in self.group.iter().enumerate() {
                let t = self.image(r, i);
                out[t.0 as usize] += scale * g.character.conj();
            }
        }
        let norm: f64 = out.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 && coeffs.iter().any(|z| z.norm_sqr() > 0.0) {
            return Err(Error::NotNormalized(0.0));
        }
        Ok(out)
    }
}

/// Every `(k, Z2)` sector basis of a lattice.
pub fn all_sector_bases(lattice: &LatticeSpec) -> Result<Vec<SectorBasis>> {
    SymmetrySector::all(lattice).iter().map(|s| SectorBasis::build(lattice, s)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symmetry::apply_group_element;
    use crate::symmetry::enumerate_group;

    #[test]
    fn completeness_small_chains() {
        for n in [4, 5, 8] {
            let lat = LatticeSpec::chain(n).unwrap();
            let total: usize = all_sector_bases(&lat).unwrap().iter().map(|b| b.dim()).sum();
            assert_eq!(total, 1 << n);
        }
    }

    #[test]
    fn completeness_tori_with_mirrors() {
        for (lx, ly) in [(2, 2), (3, 2), (3, 3), (4, 2)] {
            let lat = LatticeSpec::torus(lx, ly).unwrap();
            let total: usize = SymmetrySector::all_with_mirrors(&lat)
                .iter()
                .map(|s| SectorBasis::build(&lat, s).unwrap().dim())
                .sum();
            assert_eq!(total, 1 << (lx * ly), "{lx}x{ly}");
        }
    }

    #[test]
    fn orbit_brute_force_l4() {
        // Orbit oracle: distinct translation orbits, filtered by parity and by
        // the period condition k * period = 0 (mod L).
        let n = 4;
        let lat = LatticeSpec::chain(n).unwrap();
        for k in 0..n {
            for z2 in [1i8, -1] {
                let mut seen = std::collections::BTreeSet::new();
                let mut count = 0;
                for s in 0..16u64 {
                    let st = SpinBasisState(s);
                    if st.parity(n) != z2 {
                        continue;
                    }
                    let orbit: Vec<u64> = (0..n)
                        .map(|j| st.permuted(&lat.translation(j, 0)).0)
                        .collect();
                    let rep = *orbit.iter().min().unwrap();
                    if !seen.insert(rep) {
                        continue;
                    }
                    let period = (1..=n).find(|&p| orbit[p % n] == s).unwrap();
                    if (k * period) % n == 0 {
                        count += 1;
                    }
                }
                let b = SectorBasis::build(&lat, &SymmetrySector::chain(k, z2)).unwrap();
                assert_eq!(b.dim(), count, "k={k} z2={z2}");
            }
        }
        let b = SectorBasis::build(&lat, &SymmetrySector::chain(0, 1)).unwrap();
        assert_eq!(b.dim(), 4);
    }

    #[test]
    fn representatives_are_orbit_minima() {
        let lat = LatticeSpec::torus(3, 2).unwrap();
        let sector = SymmetrySector::torus(0, 0, 1).with_mirrors(1, -1);
        let b = SectorBasis::build(&lat, &sector).unwrap();
        assert!(b.norms().iter().all(|&x| x > 0.0));
        for (i, &r) in b.representatives().iter().enumerate() {
            for g in b.group() {
                let (t, _) = apply_group_element(r, g, 6);
                let (j, _) = b.find(t).unwrap();
                assert_eq!(i, j);
            }
        }
    }

    #[test]
    fn polarized_sector_expands_to_single_word() {
        let lat = LatticeSpec::chain(6).unwrap();
        let b = SectorBasis::build(&lat, &SymmetrySector::chain(0, 1)).unwrap();
        let idx = b.index_of(SpinBasisState(0b111111)).unwrap();
        let mut c = vec![Complex64::new(0.0, 0.0); b.dim()];
        c[idx] = Complex64::new(1.0, 0.0);
        let full = b.expand_to_full(&c).unwrap();
        assert!((full[63].norm() - 1.0).abs() < 1e-14);
        assert_eq!(full.iter().filter(|z| z.norm() > 0.0).count(), 1);
    }

    #[test]
    fn characters_consistent_after_expansion() {
        let lat = LatticeSpec::chain(6).unwrap();
        let sector = SymmetrySector::chain(2, -1);
        let b = SectorBasis::build(&lat, &sector).unwrap();
        let coeffs: Vec<Complex64> = (0..b.dim())
            .map(|i| Complex64::new((i as f64 * 0.7).sin(), (i as f64 * 0.3).cos()))
            .collect();
        let norm: f64 = coeffs.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let coeffs: Vec<Complex64> = coeffs.iter().map(|z| z / norm).collect();
        let full = b.expand_to_full(&coeffs).unwrap();
        let fnorm: f64 = full.iter().map(|z| z.norm_sqr()).sum();
        assert!((fnorm - 1.0).abs() < 1e-10);
        for g in enumerate_group(&lat, &sector).unwrap() {
            let mut moved = vec![Complex64::new(0.0, 0.0); full.len()];
            for (s, &a) in full.iter().enumerate() {
                let (t, sign) = apply_group_element(SpinBasisState(s as u64), &g, 6);
                moved[t.0 as usize] += a * sign;
            }
            for (m, f) in moved.iter().zip(&full) {
                assert!((m - g.character * f).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn rejects_wrong_length() {
        let lat = LatticeSpec::chain(5).unwrap();
        let b = SectorBasis::build(&lat, &SymmetrySector::chain(1, 1)).unwrap();
        assert!(b.expand_to_full(&[Complex64::new(1.0, 0.0)]).is_err());
    }
}
