//! Typical fidelity susceptibility of `v` versus coupling and its peak.
//!
//! `cargo run --release --example fidelity_susceptibility -- 12`

use quasichaos::lattice::LatticeSpec;
use quasichaos::models::{Model, Observable};
use quasichaos::sweep::{log_couplings, plan_and_run, susceptibility_peak, CachePolicy, Outputs, RunConfig};

fn main() -> quasichaos::Result<()> {
    let sites: usize = std::env::args().nth(1).map_or(12, |s| s.parse().expect("sites"));
    let dir = std::env::temp_dir().join("quasichaos-chi-example");
    let mut cfg = RunConfig::new(Model::H1d, LatticeSpec::chain(sites)?, log_couplings(0.02, 1.5, 15)?, &dir);
    cfg.outputs = Outputs { entropy: false, spectral: false, susceptibility: true, eev: false };
    cfg.cache = CachePolicy::Off;
    let outcome = plan_and_run(&cfg)?;
    let records = outcome.records();
    println!("{:>8} {:>12} {:>12} {:>14}", "J", "chi_typ", "omega_H", "chi omega_H^2");
    for r in records.iter().filter(|r| r.is_aggregate()) {
        let chi = r.chi(Observable::V).unwrap_or(f64::NAN);
        println!("{:>8.4} {chi:>12.5e} {:>12.4e} {:>14.5e}", r.j, r.omega_h, chi * r.omega_h * r.omega_h);
    }
    match susceptibility_peak(&records, Observable::V) {
        Ok((j, chi, omega_h)) => println!("peak J* = {j:.4}, chi* = {chi:.5e}, omega_H = {omega_h:.4e}"),
        Err(e) => println!("no interior peak: {e}"),
    }
    Ok(())
}
