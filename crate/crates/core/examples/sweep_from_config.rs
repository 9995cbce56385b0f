//! Runs a sweep described by a TOML file and summarizes the aggregate records.
//!
//! `cargo run --release --example sweep_from_config -- crates/core/examples/configs/chain12.toml`

use std::path::PathBuf;

use quasichaos::sweep::{plan_and_run, RunConfig};

fn main() -> quasichaos::Result<()> {
    let path = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| {
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/configs/chain12.toml")
    });
    let mut cfg = RunConfig::load(&path)?;
    if cfg.output_dir.is_relative() {
        cfg.output_dir = std::env::temp_dir().join(&cfg.output_dir);
    }
    let outcome = plan_and_run(&cfg)?;
    for r in outcome.records().iter().filter(|r| r.is_aggregate()) {
        println!(
            "J={:<6} D={:<6} r_ave={:.4} s_ave={} chi_typ={:?}",
            r.j,
            r.dim,
            r.r_ave,
            r.s_ave.map_or("-".into(), |s| format!("{s:.4}")),
            r.chi_typ
        );
    }
    println!("{} files written under {}", outcome.files.len(), cfg.output_dir.display());
    Ok(())
}
