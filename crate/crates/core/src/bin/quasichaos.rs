use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use quasichaos::basis::SectorBasis;
use quasichaos::chaos::{central_window, r_statistics};
use quasichaos::eigen::validate;
use quasichaos::lattice::LatticeSpec;
use quasichaos::materialize::materialize;
use quasichaos::models::{Model, Observable};
use quasichaos::observables::Kernel;
use quasichaos::sweep::{self, CachePolicy, Outputs, RunConfig, SectorSelection};
use quasichaos::symmetry::SymmetrySector;
use quasichaos::{Error, Result};

#[derive(Parser)]
#[command(version, about = "Exact diagonalization sweeps for field-polarized spin models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Diagonalize one sector and print its spectrum summary as JSON.
    Diag {
        #[arg(long)]
        model: Model,
        /// `chainN` or `torusAxB`.
        #[arg(long)]
        lattice: LatticeSpec,
        #[arg(long)]
        j: f64,
        /// Sector label such as `k1_z+1`.
        #[arg(long)]
        sector: SymmetrySector,
        /// Also write eigenvalues here, one per line.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Level statistics, entanglement and susceptibilities over a coupling grid.
    Sweep(RunArgs),
    /// Sector-pooled spectral functions.
    Sfunc(RunArgs),
    /// Susceptibility sweep and peak location.
    Chi(RunArgs),
    /// Eigenstate-resolved entropies and diagonal expectation values.
    Entropy(RunArgs),
    /// Combine finished runs of different sizes into crossover fits.
    Report {
        /// Run directories, each holding a manifest.
        #[arg(required = true)]
        runs: Vec<PathBuf>,
        #[arg(long, default_value = "v")]
        observable: Observable,
        #[arg(long, default_value = "report")]
        out: PathBuf,
    },
}

#[derive(Args)]
struct RunArgs {
    /// TOML run configuration; flags below override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    model: Option<Model>,
    #[arg(long)]
    lattice: Option<LatticeSpec>,
    /// Comma-separated couplings.
    #[arg(long, value_delimiter = ',')]
    couplings: Option<Vec<f64>>,
    /// Log-spaced couplings `lo:hi:points`.
    #[arg(long, conflicts_with = "couplings")]
    coupling_range: Option<String>,
    /// `all`, `complex`, or comma-separated sector labels.
    #[arg(long)]
    sectors: Option<String>,
    #[arg(long, value_delimiter = ',')]
    observables: Option<Vec<Observable>>,
    #[arg(long)]
    kernel: Option<Kernel>,
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long)]
    window_fraction: Option<f64>,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    no_cache: bool,
    #[arg(long)]
    refresh_cache: bool,
}

impl RunArgs {
    fn resolve(self, outputs: Option<Outputs>) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::new(
                self.model.ok_or_else(|| Error::Config("--model or --config required".into()))?,
                self.lattice.ok_or_else(|| Error::Config("--lattice or --config required".into()))?,
                Vec::new(),
                "run",
            ),
        };
        if let Some(m) = self.model {
            cfg.model = m;
        }
        if let Some(l) = self.lattice {
            cfg.lattice = l;
        }
        if let Some(c) = self.couplings {
            cfg.couplings = c;
        }
        if let Some(r) = self.coupling_range {
            let parts: Vec<&str> = r.split(':').collect();
            let bad = || Error::Config(format!("bad --coupling-range `{r}`"));
            let [lo, hi, n] = parts.as_slice() else { return Err(bad()) };
            cfg.couplings = sweep::log_couplings(
                lo.parse().map_err(|_| bad())?,
                hi.parse().map_err(|_| bad())?,
                n.parse().map_err(|_| bad())?,
            )?;
        }
        if let Some(s) = self.sectors {
            cfg.sectors = match s.as_str() {
                "all" => SectorSelection::All,
                "complex" => SectorSelection::ComplexMomentum,
                list => SectorSelection::List(list.split(',').map(str::parse).collect::<Result<_>>()?),
            };
        }
        if let Some(o) = self.observables {
            cfg.observables = o;
        }
        if let Some(k) = self.kernel {
            cfg.kernel = k;
        }
        if self.eta.is_some() {
            cfg.eta = self.eta;
        }
        if let Some(w) = self.window_fraction {
            cfg.window_fraction = w;
        }
        if let Some(o) = self.output {
            cfg.output_dir = o;
        }
        if let Some(w) = self.workers {
            cfg.workers = w;
        }
        if self.no_cache {
            cfg.cache = CachePolicy::Off;
        } else if self.refresh_cache {
            cfg.cache = CachePolicy::Refresh;
        }
        if let Some(o) = outputs {
            cfg.outputs = o;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn run_sweep(cfg: RunConfig) -> Result<bool> {
    let outcome = sweep::plan_and_run(&cfg)?;
    for r in outcome.records().iter().filter(|r| r.is_aggregate()) {
        let chi: Vec<String> = r.chi_typ.iter().map(|(o, c)| format!("chi_typ[{o}]={c:.6e}")).collect();
        println!(
            "J={:<10} D={:<7} r_ave={:.4} s_ave={} omega_h={:.4e} {}",
            r.j,
            r.dim,
            r.r_ave,
            r.s_ave.map_or("-".into(), |s| format!("{s:.4}")),
            r.omega_h,
            chi.join(" ")
        );
    }
    let manifest = sweep::Manifest::load(&cfg.output_dir)?;
    for p in &manifest.peaks {
        println!("peak {}: J*={:.5} chi*={:.5e} omega_h={:.4e}", p.observable, p.j_star, p.chi_star, p.omega_h);
    }
    println!(
        "{} tasks, {} diagonalized, {} failed; outputs in {}",
        outcome.log.len(),
        outcome.diagonalizations(),
        outcome.failures.len(),
        cfg.output_dir.display()
    );
    Ok(outcome.failures.is_empty())
}

fn diag(model: Model, lattice: LatticeSpec, j: f64, sector: SymmetrySector, out: Option<PathBuf>) -> Result<bool> {
    sector.validate(&lattice)?;
    let basis = SectorBasis::build(&lattice, &sector)?;
    let eig = sweep::solve_sector(model, &basis, j)?;
    let report = validate(&eig, &materialize(&model.build(&lattice, j)?, &basis)?)?;
    let stats = central_window(eig.dim(), 0.2).and_then(|w| r_statistics(&eig.eigenvalues, w)).ok();
    let summary = serde_json::json!({
        "model": model,
        "lattice": lattice.label(),
        "sector": sector.to_string(),
        "j": j,
        "dim": eig.dim(),
        "e_min": eig.eigenvalues.first(),
        "e_max": eig.eigenvalues.last(),
        "r_ave": stats.as_ref().map(|s| s.r_ave),
        "omega_h": stats.as_ref().map(|s| s.omega_h),
        "validation": report,
    });
    println!("{}", serde_json::to_string_pretty(&summary)?);
    if let Some(path) = out {
        let text: String = eig.eigenvalues.iter().map(|e| format!("{e}\n")).collect();
        std::fs::write(path, text)?;
    }
    Ok(report.passed)
}

fn report(runs: &[PathBuf], obs: Observable, out: &PathBuf) -> Result<bool> {
    let mut peaks = Vec::new();
    let mut records = Vec::new();
    let mut ok = true;
    for dir in runs {
        let manifest = sweep::Manifest::load(dir)?;
        ok &= manifest.failures.is_empty();
        let recs = sweep::read_records(&dir.join(sweep::RECORDS))?;
        match sweep::susceptibility_peak(&recs, obs) {
            Ok((j_star, chi_star, omega_h)) => peaks.push(sweep::Peak {
                sites: manifest.config.lattice.num_sites(),
                j_star,
                chi_star,
                omega_h,
            }),
            Err(e) => eprintln!("{}: {e}", dir.display()),
        }
        records.extend(recs);
    }
    std::fs::create_dir_all(out)?;
    let fit = sweep::crossover_fit(peaks);
    std::fs::write(out.join("crossover.json"), serde_json::to_string_pretty(&fit)?)?;
    let mut observables = vec![obs];
    for r in &records {
        for (o, _) in &r.chi_typ {
            if !observables.contains(o) {
                observables.push(*o);
            }
        }
    }
    sweep::write_records(&out.join(sweep::RECORDS), &records, &observables)?;
    for p in &fit.peaks {
        println!("L={:<3} J*={:.5} chi*={:.5e} omega_h={:.4e}", p.sites, p.j_star, p.chi_star, p.omega_h);
    }
    if let Some(f) = fit.j_star {
        println!("J* = {:.4} L^{:.3}", f.a, f.b);
    }
    if let Some(f) = fit.chi_star {
        println!("chi* = {:.4e} omega_h^{:.3}", f.a, f.b);
    }
    Ok(ok)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let only = |f: fn(&mut Outputs)| {
        let mut o = Outputs { entropy: false, spectral: false, susceptibility: false, eev: false };
        f(&mut o);
        Some(o)
    };
    let result = match Cli::parse().command {
        Command::Diag { model, lattice, j, sector, out } => diag(model, lattice, j, sector, out),
        Command::Sweep(a) => a.resolve(None).and_then(run_sweep),
        Command::Sfunc(a) => a.resolve(only(|o| o.spectral = true)).and_then(run_sweep),
        Command::Chi(a) => a.resolve(only(|o| o.susceptibility = true)).and_then(run_sweep),
        Command::Entropy(a) => a.resolve(only(|o| {
            o.entropy = true;
            o.eev = true;
        }))
        .and_then(run_sweep),
        Command::Report { runs, observable, out } => report(&runs, observable, &out),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
