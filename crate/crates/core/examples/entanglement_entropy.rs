//! Half-chain entanglement entropy of eigenstates versus energy density in
//! one sector, at weak and strong coupling.
//!
//! `cargo run --release --example entanglement_entropy -- 12`

use quasichaos::basis::SectorBasis;
use quasichaos::chaos::central_window;
use quasichaos::entanglement::s_ave;
use quasichaos::lattice::LatticeSpec;
use quasichaos::models::Model;
use quasichaos::sweep::solve_sector;
use quasichaos::symmetry::SymmetrySector;

fn main() -> quasichaos::Result<()> {
    let sites: usize = std::env::args().nth(1).map_or(12, |s| s.parse().expect("sites"));
    let lattice = LatticeSpec::chain(sites)?;
    let basis = SectorBasis::build(&lattice, &SymmetrySector::chain(1, 1))?;
    for j in [0.1, 1.0] {
        let eig = solve_sector(Model::H1d, &basis, j)?;
        let all = s_ave(&eig, &basis, &lattice.half_cut(), 0..eig.dim())?;
        let central = s_ave(&eig, &basis, &lattice.half_cut(), central_window(eig.dim(), 0.2)?)?;
        println!("# J = {j}: s_ave over the central 20% = {:.4}", central.s_ave);
        for (e, s) in all.energy_densities.iter().zip(&all.normalized).step_by(eig.dim() / 40 + 1) {
            println!("{e:>9.4} {s:.4}");
        }
    }
    Ok(())
}
