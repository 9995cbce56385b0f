//! Two-dimensional models on a torus: sector decomposition with mirror
//! symmetries and level statistics of the transverse-field and
//! flip-flop Hamiltonians.
//!
//! `cargo run --release --example torus_models -- 4 3`

use quasichaos::basis::SectorBasis;
use quasichaos::chaos::{aggregate_sectors, central_window, r_statistics, SectorWeighting};
use quasichaos::eigen::eigenvalues;
use quasichaos::lattice::LatticeSpec;
use quasichaos::materialize::materialize;
use quasichaos::models::Model;
use quasichaos::symmetry::SymmetrySector;

fn main() -> quasichaos::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let lx: usize = args.first().map_or(4, |s| s.parse().expect("lx"));
    let ly: usize = args.get(1).map_or(3, |s| s.parse().expect("ly"));
    let lattice = LatticeSpec::torus(lx, ly)?;
    let sectors = SymmetrySector::all_with_mirrors(&lattice);
    println!("{} on {} sectors", lattice.label(), sectors.len());
    for model in [Model::H2dtfim, Model::H2dpt] {
        for j in [0.1, 1.0] {
            let h = model.build(&lattice, j)?;
            let mut stats = Vec::new();
            for s in &sectors {
                let e = eigenvalues(&materialize(&h, &SectorBasis::build(&lattice, s)?)?)?;
                if let Ok(st) = central_window(e.len(), 0.2).and_then(|w| r_statistics(&e, w)) {
                    stats.push((st, e.len()));
                }
            }
            let refs: Vec<_> = stats.iter().map(|(s, d)| (s, *d)).collect();
            match aggregate_sectors(&refs, SectorWeighting::Pooled) {
                Ok(r) => println!("{model} J={j}: pooled r_ave = {r:.4}"),
                Err(e) => println!("{model} J={j}: {e}"),
            }
        }
    }
    Ok(())
}
