//! Periodic lattices: chains and rectangular tori.
//!
//! Sites are numbered `0..n`; on a torus the numbering is row-major,
//! `site = y * lx + x`. Bit `i` of a basis word belongs to site `i`.

use std::collections::BTreeSet;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest lattice a basis word can hold.
pub const MAX_SITES: usize = 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LatticeSpec {
    Chain { sites: usize },
    Torus { lx: usize, ly: usize },
}

impl LatticeSpec {
    pub fn chain(sites: usize) -> Result<Self> {
        let lat = LatticeSpec::Chain { sites };
        lat.validate()?;
        Ok(lat)
    }

    pub fn torus(lx: usize, ly: usize) -> Result<Self> {
        let lat = LatticeSpec::Torus { lx, ly };
        lat.validate()?;
        Ok(lat)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            LatticeSpec::Chain { sites } if sites < 4 => Err(Error::InvalidLattice(format!(
                "a periodic chain needs at least 4 sites, got {sites}"
            ))),
            LatticeSpec::Torus { lx, ly } if lx < 2 || ly < 2 => Err(Error::InvalidLattice(
                format!("a torus needs lx, ly >= 2, got {lx}x{ly}"),
            )),
            _ if self.num_sites() > MAX_SITES => Err(Error::InvalidLattice(format!(
                "{} sites exceed the supported maximum of {MAX_SITES}",
                self.num_sites()
            ))),
            _ => Ok(()),
        }
    }

    pub fn num_sites(&self) -> usize {
        match *self {
            LatticeSpec::Chain { sites } => sites,
            LatticeSpec::Torus { lx, ly } => lx * ly,
        }
    }

    pub fn is_chain(&self) -> bool {
        matches!(self, LatticeSpec::Chain { .. })
    }

    /// Extents along x and y; a chain is `(L, 1)`.
    pub fn extents(&self) -> (usize, usize) {
        match *self {
            LatticeSpec::Chain { sites } => (sites, 1),
            LatticeSpec::Torus { lx, ly } => (lx, ly),
        }
    }

    pub fn coord(&self, site: usize) -> (usize, usize) {
        let (lx, _) = self.extents();
        (site % lx, site / lx)
    }

    pub fn site(&self, x: usize, y: usize) -> usize {
        let (lx, ly) = self.extents();
        (y % ly) * lx + (x % lx)
    }

    /// Hilbert-space dimension `2^n`.
    pub fn hilbert_dim(&self) -> usize {
        1usize << self.num_sites()
    }

    /// Periodic bonds at separation `dx` along a chain, each geometric bond
    /// once. On a 4-site chain the two `dx = 2` bonds are not doubled.
    pub fn chain_bonds(&self, dx: usize) -> Vec<(usize, usize)> {
        let n = self.num_sites();
        dedup_bonds((0..n).map(|i| (i, (i + dx) % n)))
    }

    /// Nearest-neighbour bonds. Along an extent of 2 the two periodic images
    /// of a bond are counted once.
    pub fn nn_bonds(&self) -> Vec<(usize, usize)> {
        match *self {
            LatticeSpec::Chain { .. } => self.chain_bonds(1),
            LatticeSpec::Torus { lx, ly } => {
                let mut raw = Vec::with_capacity(2 * lx * ly);
                for y in 0..ly {
                    for x in 0..lx {
                        let s = self.site(x, y);
                        raw.push((s, self.site(x + 1, y)));
                        raw.push((s, self.site(x, y + 1)));
                    }
                }
                dedup_bonds(raw)
            }
        }
    }

    /// Site permutation for the translation by `(dx, dy)`.
    pub fn translation(&self, dx: usize, dy: usize) -> Vec<usize> {
        (0..self.num_sites())
            .map(|s| {
                let (x, y) = self.coord(s);
                self.site(x + dx, y + dy)
            })
            .collect()
    }

    /// Site permutation `x -> -x (mod lx)`.
    pub fn mirror_x(&self) -> Vec<usize> {
        let (lx, _) = self.extents();
        (0..self.num_sites())
            .map(|s| {
                let (x, y) = self.coord(s);
                self.site((lx - x) % lx, y)
            })
            .collect()
    }

    /// Site permutation `y -> -y (mod ly)`.
    pub fn mirror_y(&self) -> Vec<usize> {
        let (_, ly) = self.extents();
        (0..self.num_sites())
            .map(|s| {
                let (x, y) = self.coord(s);
                self.site(x, (ly - y) % ly)
            })
            .collect()
    }

    /// Default bipartition: the first `floor(n/2)` sites (contiguous on a
    /// chain, row-major on a torus).
    pub fn half_cut(&self) -> Vec<usize> {
        (0..self.num_sites() / 2).collect()
    }

    pub fn label(&self) -> String {
        match *self {
            LatticeSpec::Chain { sites } => format!("chain{sites}"),
            LatticeSpec::Torus { lx, ly } => format!("torus{lx}x{ly}"),
        }
    }
}

/// Parses `chain12` or `torus3x2`.
impl FromStr for LatticeSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidLattice(format!("`{s}`: expected chainN or torusAxB"));
        if let Some(n) = s.strip_prefix("chain") {
            return LatticeSpec::chain(n.parse().map_err(|_| bad())?);
        }
        let (x, y) = s.strip_prefix("torus").and_then(|t| t.split_once('x')).ok_or_else(bad)?;
        LatticeSpec::torus(x.parse().map_err(|_| bad())?, y.parse().map_err(|_| bad())?)
    }
}

fn dedup_bonds(raw: impl IntoIterator<Item = (usize, usize)>) -> Vec<(usize, usize)> {
    let set: BTreeSet<(usize, usize)> = raw
        .into_iter()
        .filter(|(a, b)| a != b)
        .map(|(a, b)| (a.min(b), a.max(b)))
        .collect();
    set.into_iter().collect()
}
