//! Builds every symmetry sector of a chain, diagonalizes it and checks the
//! decomposition.
//!
//! `cargo run --release --example sector_diagonalization -- 10 0.5`

use quasichaos::basis::SectorBasis;
use quasichaos::eigen::validate;
use quasichaos::lattice::LatticeSpec;
use quasichaos::materialize::materialize;
use quasichaos::models::build_h1d;
use quasichaos::sweep::solve_sector;
use quasichaos::symmetry::SymmetrySector;

fn main() -> quasichaos::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let sites: usize = args.first().map_or(10, |s| s.parse().expect("sites"));
    let j: f64 = args.get(1).map_or(0.5, |s| s.parse().expect("coupling"));
    let lattice = LatticeSpec::chain(sites)?;
    let h = build_h1d(&lattice, j)?;
    let mut total = 0;
    println!("{:>10} {:>6} {:>12} {:>12} {:>10}", "sector", "dim", "E_min", "E_max", "residual");
    for sector in SymmetrySector::all(&lattice) {
        let basis = SectorBasis::build(&lattice, &sector)?;
        let eig = solve_sector(quasichaos::models::Model::H1d, &basis, j)?;
        let report = validate(&eig, &materialize(&h, &basis)?)?;
        total += eig.dim();
        println!(
            "{:>10} {:>6} {:>12.6} {:>12.6} {:>10.2e}",
            sector.to_string(),
            eig.dim(),
            eig.eigenvalues[0],
            eig.eigenvalues[eig.dim() - 1],
            report.reconstruction
        );
    }
    println!("sum of sector dimensions {total} = 2^{sites} = {}", lattice.hilbert_dim());
    Ok(())
}
