//! Mean gap ratio of the exact and effective chain Hamiltonians across a
//! coupling grid, pooled over complex-momentum sectors.
//!
//! `cargo run --release --example level_statistics -- 12`

use quasichaos::chaos::{R_GOE, R_POISSON};
use quasichaos::lattice::LatticeSpec;
use quasichaos::models::Model;
use quasichaos::sweep::{log_couplings, plan_and_run, CachePolicy, Outputs, RunConfig};

fn main() -> quasichaos::Result<()> {
    let sites: usize = std::env::args().nth(1).map_or(12, |s| s.parse().expect("sites"));
    let couplings = log_couplings(0.01, 2.0, 9)?;
    println!("GOE {R_GOE:.4}, Poisson {R_POISSON:.4}");
    println!("{:>8} {:>10} {:>10}", "J", "H1d", "H1dsw");
    let mut columns = Vec::new();
    for model in [Model::H1d, Model::H1dsw] {
        let dir = std::env::temp_dir().join(format!("quasichaos-levels-{model}"));
        let mut cfg = RunConfig::new(model, LatticeSpec::chain(sites)?, couplings.clone(), dir);
        cfg.outputs = Outputs { entropy: false, spectral: false, susceptibility: false, eev: false };
        cfg.cache = CachePolicy::Off;
        let outcome = plan_and_run(&cfg)?;
        columns.push(outcome.points.iter().map(|p| p.aggregate.as_ref().map_or(f64::NAN, |a| a.r_ave)).collect::<Vec<_>>());
    }
    for (i, j) in couplings.iter().enumerate() {
        println!("{j:>8.4} {:>10.4} {:>10.4}", columns[0][i], columns[1][i]);
    }
    Ok(())
}
