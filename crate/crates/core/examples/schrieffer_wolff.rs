//! Checks the second-order effective Hamiltonian symbolically with Pauli-string
//! algebra, then compares its spectrum to the exact one at small coupling.
//!
//! `cargo run --release --example schrieffer_wolff -- 10 0.05`

use quasichaos::basis::SectorBasis;
use quasichaos::eigen::eigenvalues;
use quasichaos::lattice::LatticeSpec;
use quasichaos::materialize::materialize;
use quasichaos::models::{build_h0, build_h1d, build_h1dsw, build_pair_sum, build_sw_generator};
use quasichaos::pauli::commutator;
use quasichaos::symmetry::SymmetrySector;

fn main() -> quasichaos::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let sites: usize = args.first().map_or(10, |s| s.parse().expect("sites"));
    let j: f64 = args.get(1).map_or(0.05, |s| s.parse().expect("coupling"));
    let lattice = LatticeSpec::chain(sites)?;
    let g = 4.0 * j;
    let s = build_sw_generator(&lattice, j)?;
    let h0 = build_h0(&lattice);
    let v = build_pair_sum(&lattice)?;

    let first_order = commutator(&s, &h0).plus(&v.scaled(g)).simplified();
    println!("[S, H0] + g V has {} terms", first_order.terms.len());
    let effective = h0.plus(&commutator(&s, &v).scaled(g / 2.0)).simplified();
    let residual = effective.minus(&build_h1dsw(&lattice, j)?).simplified();
    println!("H0 + g/2 [S, V] - H_eff has {} terms", residual.terms.len());

    let basis = SectorBasis::build(&lattice, &SymmetrySector::chain(1, 1))?;
    let exact = eigenvalues(&materialize(&build_h1d(&lattice, j)?, &basis)?)?;
    let approx = eigenvalues(&materialize(&build_h1dsw(&lattice, j)?, &basis)?)?;
    let worst = exact.iter().zip(&approx).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    println!("sector k1_z+1: max |E_exact - E_eff| = {worst:.3e} (J^3 = {:.3e})", j.powi(3));
    Ok(())
}
