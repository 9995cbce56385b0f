//! Hamiltonians and observables of the field-polarized spin models.
//!
//! All models share the unperturbed part `H0 = sum_i sigma^z_i`, whose
//! spectrum is the total magnetization and is highly degenerate.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::LatticeSpec;
use crate::pauli::{OperatorKind, OperatorSpec, PauliOp, PauliTerm};

use PauliOp::{Minus, Plus, Z, X};

fn term(c: f64, f: Vec<(usize, PauliOp)>) -> PauliTerm {
    PauliTerm::new(c, f).expect("model terms are well formed")
}

fn require_chain(lattice: &LatticeSpec, op: &str, min_sites: usize) -> Result<()> {
    match *lattice {
        LatticeSpec::Chain { sites } if sites >= min_sites => Ok(()),
        LatticeSpec::Chain { sites } => Err(Error::LatticeMismatch {
            op: op.into(),
            reason: format!("needs at least {min_sites} sites, got {sites}"),
        }),
        _ => Err(Error::LatticeMismatch { op: op.into(), reason: "defined on chains only".into() }),
    }
}

fn require_torus(lattice: &LatticeSpec, op: &str) -> Result<()> {
    if lattice.is_chain() {
        return Err(Error::LatticeMismatch { op: op.into(), reason: "defined on tori only".into() });
    }
    Ok(())
}

fn field_terms(lattice: &LatticeSpec, c: f64) -> Vec<PauliTerm> {
    (0..lattice.num_sites()).map(|i| term(c, vec![(i, Z)])).collect()
}

/// Pair creation and annihilation `c (s+_a s+_b + s-_a s-_b)` per bond; the
/// annihilation part carries `sign`.
fn pair_terms(bonds: &[(usize, usize)], c: f64, sign: f64) -> Vec<PauliTerm> {
    bonds
        .iter()
        .flat_map(|&(a, b)| {
            [term(c, vec![(a, Plus), (b, Plus)]), term(sign * c, vec![(a, Minus), (b, Minus)])]
        })
        .collect()
}

fn chain_pair_bonds(lattice: &LatticeSpec) -> Vec<(usize, usize)> {
    let mut bonds = lattice.chain_bonds(1);
    bonds.extend(lattice.chain_bonds(2));
    bonds
}

/// `H0 = sum_i sigma^z_i`.
pub fn build_h0(lattice: &LatticeSpec) -> OperatorSpec {
    OperatorSpec::new("h0", *lattice, field_terms(lattice, 1.0))
}

/// `V = sum_i V_i`, nearest and next-nearest neighbour pair terms.
pub fn build_pair_sum(lattice: &LatticeSpec) -> Result<OperatorSpec> {
    require_chain(lattice, "V", 4)?;
    Ok(OperatorSpec::new("V", *lattice, pair_terms(&chain_pair_bonds(lattice), 1.0, 1.0)))
}

/// `H_1D = H0 + 4J V`.
pub fn build_h1d(lattice: &LatticeSpec, j: f64) -> Result<OperatorSpec> {
    require_chain(lattice, "h1d", 4)?;
    let mut terms = field_terms(lattice, 1.0);
    if j != 0.0 {
        terms.extend(pair_terms(&chain_pair_bonds(lattice), 4.0 * j, 1.0));
    }
    Ok(OperatorSpec::new("h1d", *lattice, terms))
}

/// Anti-Hermitian generator `S = (g/4) sum_b (s+s+ - s-s-)` with `g = 4J`,
/// which satisfies `[S, H0] = -g V`.
pub fn build_sw_generator(lattice: &LatticeSpec, j: f64) -> Result<OperatorSpec> {
    require_chain(lattice, "sw_generator", 4)?;
    let terms = if j == 0.0 { Vec::new() } else { pair_terms(&chain_pair_bonds(lattice), j, -1.0) };
    Ok(OperatorSpec::new("sw_generator", *lattice, terms).with_kind(OperatorKind::AntiHermitian))
}

/// Second-order effective Hamiltonian
/// `(1 + 8J^2) sum_i z_i + 4J^2 sum_i z_i sum_{j<k in N(i)} (s+_j s-_k + s-_j s+_k)`,
/// `N(i) = {i-2, i-1, i+1, i+2}`.
pub fn build_h1dsw(lattice: &LatticeSpec, j: f64) -> Result<OperatorSpec> {
    require_chain(lattice, "h1dsw", 5)?;
    let n = lattice.num_sites();
    let mut terms = field_terms(lattice, 1.0 + 8.0 * j * j);
    let c = 4.0 * j * j;
    if c != 0.0 {
        for i in 0..n {
            let nb = [(i + n - 2) % n, (i + n - 1) % n, (i + 1) % n, (i + 2) % n];
            for a in 0..4 {
                for b in a + 1..4 {
                    let (p, q) = (nb[a], nb[b]);
                    terms.push(term(c, vec![(i, Z), (p, Plus), (q, Minus)]));
                    terms.push(term(c, vec![(i, Z), (p, Minus), (q, Plus)]));
                }
            }
        }
    }
    Ok(OperatorSpec::new("h1dsw", *lattice, terms))
}

/// `H_2DTFIM = H0 + J sum_<ij> sigma^x_i sigma^x_j`.
pub fn build_h2dtfim(lattice: &LatticeSpec, j: f64) -> Result<OperatorSpec> {
    require_torus(lattice, "h2dtfim")?;
    let mut terms = field_terms(lattice, 1.0);
    if j != 0.0 {
        terms.extend(lattice.nn_bonds().into_iter().map(|(a, b)| term(j, vec![(a, X), (b, X)])));
    }
    Ok(OperatorSpec::new("h2dtfim", *lattice, terms))
}

/// `H_2DPT = H0 + J sum_<ij> (s+_i s-_j + s-_i s+_j)`.
pub fn build_h2dpt(lattice: &LatticeSpec, j: f64) -> Result<OperatorSpec> {
    require_torus(lattice, "h2dpt")?;
    let mut terms = field_terms(lattice, 1.0);
    if j != 0.0 {
        for (a, b) in lattice.nn_bonds() {
            terms.push(term(j, vec![(a, Plus), (b, Minus)]));
            terms.push(term(j, vec![(a, Minus), (b, Plus)]));
        }
    }
    Ok(OperatorSpec::new("h2dpt", *lattice, terms))
}

/// `prod_i sigma^z_i`.
pub fn build_parity(lattice: &LatticeSpec) -> OperatorSpec {
    let f = (0..lattice.num_sites()).map(|i| (i, Z)).collect();
    OperatorSpec::new("z2", *lattice, vec![term(1.0, f)])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    H1d,
    H1dsw,
    H2dtfim,
    H2dpt,
}

impl Model {
    pub fn build(self, lattice: &LatticeSpec, j: f64) -> Result<OperatorSpec> {
        match self {
            Model::H1d => build_h1d(lattice, j),
            Model::H1dsw => build_h1dsw(lattice, j),
            Model::H2dtfim => build_h2dtfim(lattice, j),
            Model::H2dpt => build_h2dpt(lattice, j),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Model::H1d => "h1d",
            Model::H1dsw => "h1dsw",
            Model::H2dtfim => "h2dtfim",
            Model::H2dpt => "h2dpt",
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Model {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "h1d" => Ok(Model::H1d),
            "h1dsw" => Ok(Model::H1dsw),
            "h2dtfim" => Ok(Model::H2dtfim),
            "h2dpt" => Ok(Model::H2dpt),
            _ => Err(Error::Config(format!("unknown model `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Observable {
    /// `sum_i V_i / L` on a chain.
    V,
    /// `sum_<ij> (s+s+ + s-s-) / V` on a torus.
    U,
    /// `sum_<ij> z_i z_j / N`.
    Znn,
    /// `sum_i z_i`, unnormalized.
    Sz,
}

impl Observable {
    pub fn name(self) -> &'static str {
        match self {
            Observable::V => "v",
            Observable::U => "u",
            Observable::Znn => "znn",
            Observable::Sz => "sz",
        }
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Observable {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "v" => Ok(Observable::V),
            "u" => Ok(Observable::U),
            "znn" => Ok(Observable::Znn),
            "sz" => Ok(Observable::Sz),
            _ => Err(Error::Config(format!("unknown observable `{s}`"))),
        }
    }
}

/// Observable as an unnormalized Pauli sum plus its intensive divisor.
pub fn build_observable(obs: Observable, lattice: &LatticeSpec) -> Result<OperatorSpec> {
    let n = lattice.num_sites() as f64;
    Ok(match obs {
        Observable::V => {
            require_chain(lattice, "v", 4)?;
            OperatorSpec::new("v", *lattice, pair_terms(&chain_pair_bonds(lattice), 1.0, 1.0))
                .with_normalization(n)
        }
        Observable::U => {
            require_torus(lattice, "u")?;
            OperatorSpec::new("u", *lattice, pair_terms(&lattice.nn_bonds(), 1.0, 1.0))
                .with_normalization(n)
        }
        Observable::Znn => {
            let terms = lattice.nn_bonds().into_iter().map(|(a, b)| term(1.0, vec![(a, Z), (b, Z)])).collect();
            OperatorSpec::new("znn", *lattice, terms).with_normalization(n)
        }
        Observable::Sz => OperatorSpec::new("sz", *lattice, field_terms(lattice, 1.0)),
    })
}
