use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{CachePolicy, OmegaHMode, RunConfig, SectorSelection};
use super::export;
use super::fit::locate_peak;
use crate::basis::SectorBasis;
use crate::cache;
use crate::chaos::{aggregate_sectors, central_window, full_mean_spacing, r_statistics, SpectrumStats};
use crate::eigen::{self, EigenData};
use crate::entanglement::{self, EntanglementResult};
use crate::error::{Error, Result};
use crate::lattice::LatticeSpec;
use crate::materialize::materialize;
use crate::models::{build_observable, Model, Observable};
use crate::observables::{
    default_eta, diagonal_eev, fidelity_susceptibility, log_grid, pool_spectral, pooled_chi_typ, spectral_function,
    to_eigenbasis, SpectralFunctionResult, SpectralOptions, SusceptibilityResult, DEFAULT_GRID_POINTS, GRID_FLOOR,
};
use crate::symmetry::SymmetrySector;

pub const AGGREGATE: &str = "aggregate";

/// One row of `records.csv`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub model: Model,
    pub j: f64,
    pub lattice: String,
    /// Sector label, or `aggregate`.
    pub sector: String,
    pub dim: usize,
    pub r_ave: f64,
    pub s_ave: Option<f64>,
    pub omega_h: f64,
    pub degenerate_pairs: usize,
    pub chi_typ: Vec<(Observable, f64)>,
    /// Sectors folded into an aggregate record.
    pub constituents: Vec<String>,
}

impl SweepRecord {
    pub fn is_aggregate(&self) -> bool {
        self.sector == AGGREGATE
    }

    pub fn chi(&self, obs: Observable) -> Option<f64> {
        self.chi_typ.iter().find(|(o, _)| *o == obs).map(|p| p.1)
    }
}

/// Everything computed for one `(J, sector)` task.
#[derive(Clone, Debug)]
pub struct SectorResult {
    pub sector: SymmetrySector,
    pub record: SweepRecord,
    pub stats: SpectrumStats,
    pub susceptibility: Vec<SusceptibilityResult>,
    pub spectral: Vec<SpectralFunctionResult>,
    pub entropy: Option<EntanglementResult>,
    pub eev: Vec<(Observable, EevRows)>,
}

/// `(index, energy density, <n|O|n>)` rows of one sector.
pub type EevRows = Vec<(usize, f64, f64)>;

#[derive(Clone, Debug)]
pub struct SweepPoint {
    pub j: f64,
    pub sectors: Vec<SectorResult>,
    pub aggregate: Option<SweepRecord>,
    /// Spectral functions pooled over the aggregated sectors, one per
    /// observable.
    pub spectral: Vec<SpectralFunctionResult>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TaskFailure {
    pub j: f64,
    pub sector: String,
    pub error: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TaskLogEntry {
    pub j: f64,
    pub sector: String,
    /// `cache`, `diagonalized` or `failed`.
    pub source: String,
    pub seconds: f64,
}

#[derive(Clone, Debug)]
pub struct SweepOutcome {
    pub points: Vec<SweepPoint>,
    pub failures: Vec<TaskFailure>,
    pub log: Vec<TaskLogEntry>,
    pub files: Vec<PathBuf>,
}

impl SweepOutcome {
    pub fn records(&self) -> Vec<SweepRecord> {
        self.points
            .iter()
            .flat_map(|p| p.sectors.iter().map(|s| s.record.clone()).chain(p.aggregate.clone()))
            .collect()
    }

    pub fn diagonalizations(&self) -> usize {
        self.log.iter().filter(|e| e.source == "diagonalized").count()
    }
}

/// Cache file stem for one task.
pub fn cache_stem(model: Model, lattice: &LatticeSpec, j: f64, sector: &SymmetrySector) -> String {
    format!("{model}_{}_J{j:e}_{sector}", lattice.label())
}

/// Builds and fully diagonalizes one sector of `model`.
pub fn solve_sector(model: Model, basis: &SectorBasis, j: f64) -> Result<EigenData> {
    let spec = model.build(basis.lattice(), j)?;
    let h = materialize(&spec, basis)?;
    let fp = eigen::fingerprint(&spec, j, basis.sector());
    Ok(eigen::diagonalize(&h, basis.lattice().num_sites())?.with_fingerprint(fp))
}

struct Solved {
    eig: EigenData,
    from_cache: bool,
}

fn obtain(cfg: &RunConfig, basis: &SectorBasis, j: f64) -> Result<Solved> {
    let sector = basis.sector().expect("sweeps run on symmetry sectors");
    let spec = cfg.model.build(&cfg.lattice, j)?;
    let fp = eigen::fingerprint(&spec, j, Some(sector));
    let stem = cache_stem(cfg.model, &cfg.lattice, j, sector);
    let dir = cfg.cache_path();
    if cfg.cache == CachePolicy::Use && cfg.outputs.needs_vectors() {
        match cache::read(&dir, &stem, &fp) {
            Ok(Some(eig)) => return Ok(Solved { eig, from_cache: true }),
            Ok(None) => {}
            Err(e) => log::warn!("{e}; recomputing"),
        }
    }
    let h = materialize(&spec, basis)?;
    let sites = cfg.lattice.num_sites();
    let eig = if cfg.outputs.needs_vectors() {
        let eig = eigen::diagonalize(&h, sites)?.with_fingerprint(fp);
        if cfg.cache != CachePolicy::Off {
            cache::write(&dir, &stem, &eig)?;
        }
        eig
    } else {
        EigenData {
            sector: Some(*sector),
            sites,
            eigenvalues: eigen::eigenvalues(&h)?,
            eigenvectors: faer::Mat::zeros(0, 0),
            fingerprint: fp,
        }
    };
    Ok(Solved { eig, from_cache: false })
}

fn omega_h(cfg: &RunConfig, eig: &EigenData, stats: &SpectrumStats) -> f64 {
    match cfg.omega_h {
        OmegaHMode::CentralWindow => stats.omega_h,
        OmegaHMode::FullSpectrum => full_mean_spacing(&eig.eigenvalues).unwrap_or(stats.omega_h),
    }
}

fn analyse(
    cfg: &RunConfig,
    basis: &SectorBasis,
    eig: &EigenData,
    j: f64,
    grid: Option<&[f64]>,
) -> Result<SectorResult> {
    let sector = *basis.sector().expect("sector basis");
    let window = central_window(eig.dim(), cfg.window_fraction)?;
    let stats = r_statistics(&eig.eigenvalues, window.clone())?;
    let entropy = if cfg.outputs.entropy {
        Some(entanglement::s_ave(eig, basis, &cfg.lattice.half_cut(), window.clone())?)
    } else {
        None
    };
    let mut susceptibility = Vec::new();
    let mut spectral = Vec::new();
    let mut eev = Vec::new();
    if cfg.outputs.susceptibility || cfg.outputs.spectral || cfg.outputs.eev {
        for &obs in &cfg.observables {
            let m = materialize(&build_observable(obs, &cfg.lattice)?, basis)?;
            let op = to_eigenbasis(&m, eig)?;
            if cfg.outputs.susceptibility {
                let mut r = fidelity_susceptibility(&op, eig)?;
                r.omega_h = omega_h(cfg, eig, &stats);
                susceptibility.push(r);
            }
            if cfg.outputs.spectral {
                let opts = SpectralOptions { kernel: cfg.kernel, eta: cfg.eta, grid: grid.map(<[f64]>::to_vec) };
                spectral.push(spectral_function(&op, eig, window.clone(), &opts)?);
            }
            if cfg.outputs.eev {
                eev.push((obs, diagonal_eev(&op, eig, cfg.eev_fraction)?));
            }
        }
    }
    let record = SweepRecord {
        model: cfg.model,
        j,
        lattice: cfg.lattice.label(),
        sector: sector.to_string(),
        dim: eig.dim(),
        r_ave: stats.r_ave,
        s_ave: entropy.as_ref().map(|e| e.s_ave),
        omega_h: omega_h(cfg, eig, &stats),
        degenerate_pairs: stats.degenerate_pairs,
        chi_typ: cfg.observables.iter().copied().zip(susceptibility.iter().map(|s| s.chi_typ)).collect(),
        constituents: Vec::new(),
    };
    Ok(SectorResult { sector, record, stats, susceptibility, spectral, entropy, eev })
}

/// Common spectral grid for several sectors: from half the smallest
/// broadening up to the widest bandwidth.
fn shared_grid(cfg: &RunConfig, spectra: &[&EigenData]) -> Result<Vec<f64>> {
    let mut eta = f64::INFINITY;
    let mut width: f64 = 0.0;
    for eig in spectra {
        eta = eta.min(match cfg.eta {
            Some(e) => e,
            None => default_eta(eig)?,
        });
        width = width.max(eig.eigenvalues.last().copied().unwrap_or(0.0) - eig.eigenvalues[0]);
    }
    log_grid((eta / 2.0).max(GRID_FLOOR), width, DEFAULT_GRID_POINTS)
}

fn in_aggregate(cfg: &RunConfig, sector: &SymmetrySector) -> bool {
    !(cfg.lattice.is_chain()
        && cfg.sectors == SectorSelection::All
        && !cfg.aggregate_real_momentum
        && sector.is_real_momentum(&cfg.lattice))
}

fn aggregate(cfg: &RunConfig, j: f64, results: &[&SectorResult]) -> Result<SweepRecord> {
    let pairs: Vec<(&SpectrumStats, usize)> = results.iter().map(|r| (&r.stats, r.record.dim)).collect();
    let dim: usize = results.iter().map(|r| r.record.dim).sum();
    let weighted = |f: &dyn Fn(&SectorResult) -> f64| results.iter().map(|r| f(r) * r.record.dim as f64).sum::<f64>() / dim as f64;
    let s_ave = results.iter().all(|r| r.record.s_ave.is_some()).then(|| weighted(&|r| r.record.s_ave.unwrap_or(0.0)));
    let mut chi_typ = Vec::new();
    for (i, &obs) in cfg.observables.iter().enumerate() {
        let per: Vec<SusceptibilityResult> = results.iter().filter_map(|r| r.susceptibility.get(i).cloned()).collect();
        if per.len() == results.len() && !per.is_empty() {
            chi_typ.push((obs, pooled_chi_typ(&per)?));
        }
    }
    Ok(SweepRecord {
        model: cfg.model,
        j,
        lattice: cfg.lattice.label(),
        sector: AGGREGATE.into(),
        dim,
        r_ave: aggregate_sectors(&pairs, cfg.weighting)?,
        s_ave,
        omega_h: weighted(&|r| r.record.omega_h),
        degenerate_pairs: results.iter().map(|r| r.record.degenerate_pairs).sum(),
        chi_typ,
        constituents: results.iter().map(|r| r.record.sector.clone()).collect(),
    })
}

fn run_point(
    cfg: &RunConfig,
    bases: &[SectorBasis],
    j: f64,
    failures: &mut Vec<TaskFailure>,
    log: &mut Vec<TaskLogEntry>,
) -> Result<SweepPoint> {
    let solved: Vec<(Result<Solved>, f64)> = bases
        .par_iter()
        .map(|b| {
            let t = Instant::now();
            let s = obtain(cfg, b, j);
            (s, t.elapsed().as_secs_f64())
        })
        .collect();
    let mut ok: Vec<(&SectorBasis, EigenData)> = Vec::new();
    for (basis, (res, seconds)) in bases.iter().zip(solved) {
        let label = basis.label();
        match res {
            Ok(s) => {
                let source = if s.from_cache { "cache" } else { "diagonalized" };
                log.push(TaskLogEntry { j, sector: label, source: source.into(), seconds });
                ok.push((basis, s.eig));
            }
            Err(e) => {
                log::error!("{label} J={j}: {e}");
                log.push(TaskLogEntry { j, sector: label.clone(), source: "failed".into(), seconds });
                failures.push(TaskFailure { j, sector: label, error: e.to_string() });
            }
        }
    }
    let grid = if cfg.outputs.spectral && !ok.is_empty() {
        Some(shared_grid(cfg, &ok.iter().map(|(_, e)| e).collect::<Vec<_>>())?)
    } else {
        None
    };
    let analysed: Vec<Result<SectorResult>> =
        ok.par_iter().map(|(b, eig)| analyse(cfg, b, eig, j, grid.as_deref())).collect();
    drop(ok);
    let mut sectors = Vec::new();
    for res in analysed {
        match res {
            Ok(r) => sectors.push(r),
            Err(e) => {
                log::error!("J={j}: {e}");
                failures.push(TaskFailure { j, sector: "analysis".into(), error: e.to_string() });
            }
        }
    }
    let degenerate: Vec<String> = sectors
        .iter()
        .filter(|r| r.record.degenerate_pairs > 0)
        .map(|r| format!("{}({})", r.record.sector, r.record.degenerate_pairs))
        .collect();
    if !degenerate.is_empty() {
        log::warn!("J={j}: degenerate level pairs in the central window of {}; a symmetry may be unresolved", degenerate.join(" "));
    }
    let included: Vec<&SectorResult> = sectors.iter().filter(|r| in_aggregate(cfg, &r.sector)).collect();
    let (aggregate, spectral) = if included.is_empty() {
        (None, Vec::new())
    } else {
        let agg = aggregate(cfg, j, &included)?;
        let spectral = (0..cfg.observables.len())
            .filter_map(|i| {
                let per: Vec<SpectralFunctionResult> = included.iter().filter_map(|r| r.spectral.get(i).cloned()).collect();
                (per.len() == included.len()).then(|| pool_spectral(&per))
            })
            .collect::<Result<Vec<_>>>()?;
        (Some(agg), spectral)
    };
    Ok(SweepPoint { j, sectors, aggregate, spectral })
}

fn thread_pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Config(format!("worker pool: {e}")))
}

/// Runs every `(J, sector)` task of `cfg` and writes the run directory.
pub fn plan_and_run(cfg: &RunConfig) -> Result<SweepOutcome> {
    cfg.validate()?;
    std::fs::create_dir_all(&cfg.output_dir)?;
    let sectors = cfg.sectors.resolve(&cfg.lattice)?;
    thread_pool(cfg.workers)?.install(|| {
        let bases: Vec<SectorBasis> =
            sectors.par_iter().map(|s| SectorBasis::build(&cfg.lattice, s)).collect::<Result<_>>()?;
        let mut failures = Vec::new();
        let mut log = Vec::new();
        let mut points = Vec::new();
        for &j in &cfg.couplings {
            points.push(run_point(cfg, &bases, j, &mut failures, &mut log)?);
        }
        let mut outcome = SweepOutcome { points, failures, log, files: Vec::new() };
        outcome.files = export::write_run(cfg, &outcome)?;
        Ok(outcome)
    })
}

/// Peak of the aggregate `chi_typ(J)` curve for `obs`, with `omega_H` at the
/// coupling nearest the peak.
pub fn susceptibility_peak(records: &[SweepRecord], obs: Observable) -> Result<(f64, f64, f64)> {
    let agg: Vec<&SweepRecord> = records.iter().filter(|r| r.is_aggregate()).collect();
    let pts: Vec<(f64, f64)> = agg.iter().filter_map(|r| r.chi(obs).map(|c| (r.j, c))).collect();
    let (j_star, chi_star) = locate_peak(&pts)?;
    let nearest = agg
        .iter()
        .min_by(|a, b| (a.j.ln() - j_star.ln()).abs().total_cmp(&(b.j.ln() - j_star.ln()).abs()))
        .expect("peak implies records");
    Ok((j_star, chi_star, nearest.omega_h))
}

/// Pools per-sector r values of a stored run, keyed by coupling.
pub fn pooled_r_values(points: &[SweepPoint], cfg: &RunConfig) -> BTreeMap<String, Vec<f64>> {
    points
        .iter()
        .map(|p| {
            let r = p
                .sectors
                .iter()
                .filter(|s| in_aggregate(cfg, &s.sector))
                .flat_map(|s| s.stats.r_values.iter().copied())
                .collect();
            (format!("{:e}", p.j), r)
        })
        .collect()
}
