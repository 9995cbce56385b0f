//! Eigenstate magnetization versus energy density: clustered near the
//! unperturbed shells at weak coupling, smooth at strong coupling.
//!
//! `cargo run --release --example quasiconservation -- 12`

use quasichaos::basis::SectorBasis;
use quasichaos::lattice::LatticeSpec;
use quasichaos::materialize::materialize;
use quasichaos::models::{build_observable, Model, Observable};
use quasichaos::observables::{diagonal_eev, to_eigenbasis};
use quasichaos::sweep::solve_sector;
use quasichaos::symmetry::SymmetrySector;

fn main() -> quasichaos::Result<()> {
    let sites: usize = std::env::args().nth(1).map_or(12, |s| s.parse().expect("sites"));
    let lattice = LatticeSpec::chain(sites)?;
    let basis = SectorBasis::build(&lattice, &SymmetrySector::chain(1, 1))?;
    let sz = materialize(&build_observable(Observable::Sz, &lattice)?, &basis)?;
    for j in [0.05, 1.0] {
        let eig = solve_sector(Model::H1d, &basis, j)?;
        let rows = diagonal_eev(&to_eigenbasis(&sz, &eig)?, &eig, 0.8)?;
        // the even-parity sector holds magnetizations congruent to L mod 4
        let shift = (sites % 4) as f64;
        let clustered = rows.iter().filter(|r| (r.2 - shift - 4.0 * ((r.2 - shift) / 4.0).round()).abs() <= 0.2).count();
        println!("# J = {j}: {clustered}/{} states within 0.2 of an unperturbed shell", rows.len());
        for (_, e, m) in rows.iter().step_by(rows.len() / 30 + 1) {
            println!("{e:>9.4} {m:>8.4}");
        }
    }
    Ok(())
}
