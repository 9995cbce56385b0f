//! Parameter sweeps over couplings and symmetry sectors, with on-disk
//! caching, run manifests and crossover fits.

mod config;
mod export;
mod fit;
mod run;

pub use config::{log_couplings, CachePolicy, OmegaHMode, Outputs, RunConfig, SectorSelection};
pub use export::{read_records, write_records, Manifest, PeakEntry, MANIFEST, RECORDS, TASK_LOG};
pub use fit::{crossover_fit, fit_power_law, locate_peak, CrossoverFit, Peak, PowerLawFit};
pub use run::{
    cache_stem, plan_and_run, pooled_r_values, solve_sector, susceptibility_peak, SectorResult, SweepOutcome, SweepPoint,
    SweepRecord, TaskFailure, TaskLogEntry, AGGREGATE,
};
