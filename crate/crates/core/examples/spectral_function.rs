//! Sector-pooled spectral function of `v` for a chain.
//!
//! `cargo run --release --example spectral_function -- 12 0.05 1.0`

use quasichaos::lattice::LatticeSpec;
use quasichaos::models::Model;
use quasichaos::sweep::{plan_and_run, CachePolicy, Outputs, RunConfig};

fn main() -> quasichaos::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let sites = args.first().map_or(Ok(10), |s| s.parse()).expect("sites");
    let couplings: Vec<f64> =
        if args.len() > 1 { args[1..].iter().map(|s| s.parse().expect("coupling")).collect() } else { vec![0.1, 1.0] };
    let dir = std::env::temp_dir().join("quasichaos-spectral-example");
    let mut cfg = RunConfig::new(Model::H1d, LatticeSpec::chain(sites)?, couplings, &dir);
    cfg.outputs = Outputs { entropy: false, spectral: true, susceptibility: false, eev: false };
    cfg.cache = CachePolicy::Off;
    let outcome = plan_and_run(&cfg)?;
    for point in &outcome.points {
        for f in &point.spectral {
            println!("# J = {}  eta = {:.3e}  states = {}", point.j, f.eta, f.states);
            for (w, v) in f.omega.iter().zip(&f.values).step_by(5) {
                println!("{w:.4e} {v:.4e}");
            }
        }
    }
    println!("# CSV files in {}", dir.display());
    Ok(())
}
