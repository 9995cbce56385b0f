use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::chaos::SectorWeighting;
use crate::error::{Error, Result};
use crate::lattice::LatticeSpec;
use crate::models::{Model, Observable};
use crate::observables::Kernel;
use crate::symmetry::SymmetrySector;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SectorSelection {
    All,
    /// All sectors except the real momenta `k = 0, pi`.
    #[default]
    ComplexMomentum,
    List(Vec<SymmetrySector>),
}

impl SectorSelection {
    pub fn resolve(&self, lattice: &LatticeSpec) -> Result<Vec<SymmetrySector>> {
        let sectors: Vec<SymmetrySector> = match self {
            SectorSelection::All => SymmetrySector::all(lattice),
            SectorSelection::ComplexMomentum => {
                SymmetrySector::all(lattice).into_iter().filter(|s| !s.is_real_momentum(lattice)).collect()
            }
            SectorSelection::List(list) => {
                for s in list {
                    s.validate(lattice)?;
                }
                list.clone()
            }
        };
        if sectors.is_empty() {
            return Err(Error::Config(format!("sector selection is empty on {}", lattice.label())));
        }
        Ok(sectors)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CachePolicy {
    #[default]
    Use,
    /// Recompute and overwrite.
    Refresh,
    Off,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OmegaHMode {
    #[default]
    CentralWindow,
    FullSpectrum,
}

/// Quantities computed for each task beyond level statistics.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Outputs {
    pub entropy: bool,
    pub spectral: bool,
    pub susceptibility: bool,
    pub eev: bool,
}

impl Default for Outputs {
    fn default() -> Self {
        Outputs { entropy: true, spectral: false, susceptibility: true, eev: false }
    }
}

impl Outputs {
    pub fn needs_vectors(&self) -> bool {
        self.entropy || self.spectral || self.susceptibility || self.eev
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: Model,
    pub lattice: LatticeSpec,
    pub couplings: Vec<f64>,
    #[serde(default)]
    pub sectors: SectorSelection,
    #[serde(default = "default_window")]
    pub window_fraction: f64,
    #[serde(default = "default_eev_window")]
    pub eev_fraction: f64,
    #[serde(default)]
    pub kernel: Kernel,
    /// Fixed broadening; the per-sector smallest gap when absent.
    #[serde(default)]
    pub eta: Option<f64>,
    #[serde(default = "default_observables")]
    pub observables: Vec<Observable>,
    #[serde(default)]
    pub outputs: Outputs,
    pub output_dir: PathBuf,
    /// Defaults to `<output_dir>/cache`.
    #[serde(default)]
    pub cache_dir: Option<PathBuf>,
    #[serde(default)]
    pub cache: CachePolicy,
    /// Zero uses every available core.
    #[serde(default)]
    pub workers: usize,
    #[serde(default)]
    pub omega_h: OmegaHMode,
    #[serde(default)]
    pub weighting: SectorWeighting,
    /// Include `k = 0, pi` sectors in aggregate records.
    #[serde(default)]
    pub aggregate_real_momentum: bool,
    /// Expression the plotting layer applies to `chi_typ`.
    #[serde(default = "default_rescaling")]
    pub chi_rescaling: String,
}

fn default_window() -> f64 {
    0.2
}

fn default_eev_window() -> f64 {
    0.8
}

fn default_observables() -> Vec<Observable> {
    vec![Observable::V]
}

fn default_rescaling() -> String {
    "chi_typ * omega_h^2".into()
}

impl RunConfig {
    pub fn new(model: Model, lattice: LatticeSpec, couplings: Vec<f64>, output_dir: impl Into<PathBuf>) -> Self {
        RunConfig {
            model,
            lattice,
            couplings,
            sectors: SectorSelection::default(),
            window_fraction: default_window(),
            eev_fraction: default_eev_window(),
            kernel: Kernel::default(),
            eta: None,
            observables: default_observables(),
            outputs: Outputs::default(),
            output_dir: output_dir.into(),
            cache_dir: None,
            cache: CachePolicy::default(),
            workers: 0,
            omega_h: OmegaHMode::default(),
            weighting: SectorWeighting::default(),
            aggregate_real_momentum: false,
            chi_rescaling: default_rescaling(),
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string_pretty(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn cache_path(&self) -> PathBuf {
        self.cache_dir.clone().unwrap_or_else(|| self.output_dir.join("cache"))
    }

    pub fn validate(&self) -> Result<()> {
        self.lattice.validate()?;
        if let Some(j) = self.couplings.iter().find(|j| !(j.is_finite() && **j > 0.0)) {
            return Err(Error::Config(format!("coupling {j} must be positive")));
        }
        for (name, f) in [("window_fraction", self.window_fraction), ("eev_fraction", self.eev_fraction)] {
            if !(f > 0.0 && f <= 1.0) {
                return Err(Error::Config(format!("{name} = {f} outside (0, 1]")));
            }
        }
        if let Some(eta) = self.eta {
            if !(eta > 0.0 && eta.is_finite()) {
                return Err(Error::InvalidBroadening(eta));
            }
        }
        self.model.build(&self.lattice, 1.0)?;
        for obs in &self.observables {
            crate::models::build_observable(*obs, &self.lattice)?;
        }
        self.sectors.resolve(&self.lattice)?;
        Ok(())
    }
}

/// `points` log-spaced couplings from `lo` to `hi`.
pub fn log_couplings(lo: f64, hi: f64, points: usize) -> Result<Vec<f64>> {
    if points == 1 {
        return Ok(vec![lo]);
    }
    crate::observables::log_grid(lo, hi, points).map_err(|_| Error::Config(format!("bad coupling range {lo}..{hi}")))
}
