//! Basis words, symmetry sectors and the abelian symmetry group acting on them.
//!
//! The group is generated by lattice translations, the two torus mirrors (only
//! at zero quasimomentum) and the spin parity `Z2 = prod_i sigma^z_i`. Parity is
//! diagonal in the `sigma^z` basis: it attaches the sign `(-1)^(#down spins)` to
//! a word and never moves it.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::LatticeSpec;

/// An `L`-bit `sigma^z` product state; bit `i` set means spin up on site `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SpinBasisState(pub u64);

impl SpinBasisState {
    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn up_count(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_up(self, site: usize) -> bool {
        self.0 >> site & 1 == 1
    }

    /// `sum_i sigma^z_i = 2 * popcount - L`.
    pub fn magnetization(self, sites: usize) -> i64 {
        2 * self.up_count() as i64 - sites as i64
    }

    /// Eigenvalue of `prod_i sigma^z_i`.
    pub fn parity(self, sites: usize) -> i8 {
        if (sites as u32 - self.up_count()).is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// Complement of every bit (the global `sigma^x` flip).
    pub fn flipped(self, sites: usize) -> Self {
        SpinBasisState(!self.0 & mask(sites))
    }

    /// Moves the spin on site `i` to site `perm[i]`.
    pub fn permuted(self, perm: &[usize]) -> Self {
        let mut out = 0u64;
        let mut b = self.0;
        while b != 0 {
            let i = b.trailing_zeros() as usize;
            out |= 1 << perm[i];
            b &= b - 1;
        }
        SpinBasisState(out)
    }
}

pub(crate) fn mask(sites: usize) -> u64 {
    if sites >= 64 {
        u64::MAX
    } else {
        (1u64 << sites) - 1
    }
}

/// Quantum numbers of one symmetry sector.
///
/// Quasimomenta are stored as integers: `k_x = 2 pi kx / lx`, and likewise
/// for `y` (always 0 on a chain).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SymmetrySector {
    pub kx: usize,
    pub ky: usize,
    pub z2: i8,
    pub mx: Option<i8>,
    pub my: Option<i8>,
}

impl SymmetrySector {
    pub fn chain(k: usize, z2: i8) -> Self {
        SymmetrySector { kx: k, ky: 0, z2, mx: None, my: None }
    }

    pub fn torus(kx: usize, ky: usize, z2: i8) -> Self {
        SymmetrySector { kx, ky, z2, mx: None, my: None }
    }

    pub fn with_mirrors(mut self, mx: i8, my: i8) -> Self {
        self.mx = Some(mx);
        self.my = Some(my);
        self
    }

    /// Quasimomentum in radians, `(k_x, k_y)`.
    pub fn momentum(&self, lattice: &LatticeSpec) -> (f64, f64) {
        let (lx, ly) = lattice.extents();
        (2.0 * PI * self.kx as f64 / lx as f64, 2.0 * PI * self.ky as f64 / ly as f64)
    }

    /// True for the time-reversal invariant momenta of a chain (`k = 0, pi`).
    pub fn is_real_momentum(&self, lattice: &LatticeSpec) -> bool {
        let (lx, ly) = lattice.extents();
        (2 * self.kx).is_multiple_of(lx) && (2 * self.ky).is_multiple_of(ly)
    }

    pub fn validate(&self, lattice: &LatticeSpec) -> Result<()> {
        let (lx, ly) = lattice.extents();
        let bad = |reason: &str| Error::InvalidSector {
            sector: self.to_string(),
            reason: reason.to_string(),
        };
        if self.kx >= lx || self.ky >= ly {
            return Err(bad("momentum index out of range"));
        }
        if self.z2 != 1 && self.z2 != -1 {
            return Err(bad("Z2 label must be +1 or -1"));
        }
        for m in [self.mx, self.my].into_iter().flatten() {
            if m != 1 && m != -1 {
                return Err(bad("mirror label must be +1 or -1"));
            }
        }
        let mirrored = self.mx.is_some() || self.my.is_some();
        if mirrored && (lattice.is_chain() || self.kx != 0 || self.ky != 0) {
            return Err(Error::IncompatibleMirror(self.to_string()));
        }
        Ok(())
    }

    /// Every (k, Z2) sector of a lattice, momentum-major.
    pub fn all(lattice: &LatticeSpec) -> Vec<SymmetrySector> {
        let (lx, ly) = lattice.extents();
        let mut out = Vec::with_capacity(2 * lx * ly);
        for ky in 0..ly {
            for kx in 0..lx {
                for z2 in [1, -1] {
                    out.push(SymmetrySector { kx, ky, z2, mx: None, my: None });
                }
            }
        }
        out
    }

    /// Like [`SymmetrySector::all`] but with the `k = (0, 0)` sectors of a
    /// torus split into the four mirror subsectors.
    pub fn all_with_mirrors(lattice: &LatticeSpec) -> Vec<SymmetrySector> {
        if lattice.is_chain() {
            return Self::all(lattice);
        }
        let mut out = Vec::new();
        for s in Self::all(lattice) {
            if s.kx == 0 && s.ky == 0 {
                for mx in [1, -1] {
                    for my in [1, -1] {
                        out.push(s.with_mirrors(mx, my));
                    }
                }
            } else {
                out.push(s);
            }
        }
        out
    }
}

/// Parses the `Display` form, e.g. `k3_z+1` or `k0.1_z-1_mx+1_my-1`.
impl FromStr for SymmetrySector {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidSector { sector: s.to_string(), reason: "expected a label like k3_z+1".into() };
        let sign = |t: &str| -> Result<i8> {
            match t {
                "+1" | "1" => Ok(1),
                "-1" => Ok(-1),
                _ => Err(bad()),
            }
        };
        let mut parts = s.split('_');
        let k = parts.next().and_then(|p| p.strip_prefix('k')).ok_or_else(bad)?;
        let (kx, ky) = match k.split_once('.') {
            Some((x, y)) => (x.parse().map_err(|_| bad())?, y.parse().map_err(|_| bad())?),
            None => (k.parse().map_err(|_| bad())?, 0),
        };
        let z2 = sign(parts.next().and_then(|p| p.strip_prefix('z')).ok_or_else(bad)?)?;
        let mut sector = SymmetrySector::torus(kx, ky, z2);
        for p in parts {
            if let Some(m) = p.strip_prefix("mx") {
                sector.mx = Some(sign(m)?);
            } else if let Some(m) = p.strip_prefix("my") {
                sector.my = Some(sign(m)?);
            } else {
                return Err(bad());
            }
        }
        Ok(sector)
    }
}

impl fmt::Display for SymmetrySector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k{}", self.kx)?;
        if self.ky != 0 {
            write!(f, ".{}", self.ky)?;
        }
        write!(f, "_z{:+}", self.z2)?;
        if let Some(mx) = self.mx {
            write!(f, "_mx{mx:+}")?;
        }
        if let Some(my) = self.my {
            write!(f, "_my{my:+}")?;
        }
        Ok(())
    }
}

/// One element `Z2^z * T(dx, dy) * Mx^a * My^b` of the sector's symmetry group.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetryGroupElement {
    /// `perm[i]` is the image of site `i`.
    pub perm: Vec<usize>,
    pub shift: (usize, usize),
    pub mirror_x: bool,
    pub mirror_y: bool,
    pub z2_flip: bool,
    /// Eigenvalue of this element on every state of the sector.
    pub character: Complex64,
}

impl SymmetryGroupElement {
    pub fn is_spatial(&self) -> bool {
        !self.z2_flip
    }
}

/// The full abelian group realizing `sector` on `lattice`, identity first.
///
/// Size is `2 * n` (translations times parity), times 2 for each mirror label
/// the sector carries.
pub fn enumerate_group(
    lattice: &LatticeSpec,
    sector: &SymmetrySector,
) -> Result<Vec<SymmetryGroupElement>> {
    sector.validate(lattice)?;
    let mut out = Vec::new();
    for z2_flip in [false, true] {
        for (mirror_x, mirror_y, mirror_char) in mirror_choices(sector) {
            out.extend(spatial_elements(lattice, sector, mirror_x, mirror_y, mirror_char).map(
                |mut g| {
                    if z2_flip {
                        g.z2_flip = true;
                        g.character *= sector.z2 as f64;
                    }
                    g
                },
            ));
        }
    }
    Ok(out)
}

/// Only the site permutations of [`enumerate_group`] (parity elements dropped).
pub fn spatial_group(
    lattice: &LatticeSpec,
    sector: &SymmetrySector,
) -> Result<Vec<SymmetryGroupElement>> {
    Ok(enumerate_group(lattice, sector)?.into_iter().filter(|g| g.is_spatial()).collect())
}

fn mirror_choices(sector: &SymmetrySector) -> Vec<(bool, bool, f64)> {
    let xs: Vec<(bool, f64)> = match sector.mx {
        Some(m) => vec![(false, 1.0), (true, m as f64)],
        None => vec![(false, 1.0)],
    };
    let ys: Vec<(bool, f64)> = match sector.my {
        Some(m) => vec![(false, 1.0), (true, m as f64)],
        None => vec![(false, 1.0)],
    };
    let mut out = Vec::new();
    for &(a, ca) in &xs {
        for &(b, cb) in &ys {
            out.push((a, b, ca * cb));
        }
    }
    out
}

fn spatial_elements<'a>(
    lattice: &'a LatticeSpec,
    sector: &'a SymmetrySector,
    mirror_x: bool,
    mirror_y: bool,
    mirror_char: f64,
) -> impl Iterator<Item = SymmetryGroupElement> + 'a {
    let (lx, ly) = lattice.extents();
    let n = lattice.num_sites();
    let (kx, ky) = sector.momentum(lattice);
    let mut reflect: Vec<usize> = (0..n).collect();
    if mirror_x {
        let m = lattice.mirror_x();
        reflect = reflect.iter().map(|&s| m[s]).collect();
    }
    if mirror_y {
        let m = lattice.mirror_y();
        reflect = reflect.iter().map(|&s| m[s]).collect();
    }
    (0..ly).flat_map(move |dy| (0..lx).map(move |dx| (dx, dy))).map(move |(dx, dy)| {
        let shift = lattice.translation(dx, dy);
        let perm = reflect.iter().map(|&s| shift[s]).collect();
        let phase = kx * dx as f64 + ky * dy as f64;
        SymmetryGroupElement {
            perm,
            shift: (dx, dy),
            mirror_x,
            mirror_y,
            z2_flip: false,
            character: Complex64::from_polar(mirror_char, phase),
        }
    })
}

/// Acts with `g` on a basis word: the word is permuted and, for parity
/// elements, picks up the sign `prod_i sigma^z_i`.
pub fn apply_group_element(
    state: SpinBasisState,
    g: &SymmetryGroupElement,
    sites: usize,
) -> (SpinBasisState, f64) {
    let moved = state.permuted(&g.perm);
    let sign = if g.z2_flip { state.parity(sites) as f64 } else { 1.0 };
    (moved, sign)
}
