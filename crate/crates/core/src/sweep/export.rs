use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::config::RunConfig;
use super::run::{susceptibility_peak, SweepOutcome, SweepRecord, TaskFailure};
use crate::error::{Error, Result};
use crate::models::Observable;

pub const MANIFEST: &str = "manifest.json";
pub const RECORDS: &str = "records.csv";
pub const TASK_LOG: &str = "task_log.csv";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub version: String,
    pub config: RunConfig,
    /// Paths relative to the run directory.
    pub outputs: Vec<String>,
    pub tasks: usize,
    pub failures: Vec<TaskFailure>,
    pub chi_rescaling: String,
    /// Aggregate susceptibility peak per observable, when bracketed.
    pub peaks: Vec<PeakEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeakEntry {
    pub observable: Observable,
    pub j_star: f64,
    pub chi_star: f64,
    pub omega_h: f64,
}

impl Manifest {
    pub fn load(run_dir: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(run_dir.join(MANIFEST))?)?)
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn j_tag(j: f64) -> String {
    format!("J{j:e}")
}

pub fn write_records(path: &Path, records: &[SweepRecord], observables: &[Observable]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    let mut header: Vec<String> =
        ["model", "J", "lattice", "sector", "dim", "r_ave", "s_ave", "omega_h", "degenerate_pairs"].map(String::from).to_vec();
    header.extend(observables.iter().map(|o| format!("chi_typ_{o}")));
    header.push("constituents".into());
    w.write_record(&header).map_err(csv_err)?;
    for r in records {
        let mut row = vec![
            r.model.to_string(),
            r.j.to_string(),
            r.lattice.clone(),
            r.sector.clone(),
            r.dim.to_string(),
            r.r_ave.to_string(),
            fmt_opt(r.s_ave),
            r.omega_h.to_string(),
            r.degenerate_pairs.to_string(),
        ];
        row.extend(observables.iter().map(|&o| fmt_opt(r.chi(o))));
        row.push(r.constituents.join(";"));
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

fn parse<T: std::str::FromStr>(s: &str, what: &str) -> Result<T> {
    s.parse().map_err(|_| Error::Config(format!("bad {what} `{s}` in records")))
}

/// Reads a `records.csv` back into records.
pub fn read_records(path: &Path) -> Result<Vec<SweepRecord>> {
    let mut rd = csv::Reader::from_path(path).map_err(csv_err)?;
    let header = rd.headers().map_err(csv_err)?.clone();
    let chi_cols: Vec<(usize, Observable)> = header
        .iter()
        .enumerate()
        .filter_map(|(i, h)| h.strip_prefix("chi_typ_").and_then(|o| o.parse().ok()).map(|o| (i, o)))
        .collect();
    let col = |name: &str| header.iter().position(|h| h == name).ok_or_else(|| Error::Config(format!("records lack `{name}`")));
    let idx = [
        col("model")?,
        col("J")?,
        col("lattice")?,
        col("sector")?,
        col("dim")?,
        col("r_ave")?,
        col("s_ave")?,
        col("omega_h")?,
        col("degenerate_pairs")?,
        col("constituents")?,
    ];
    let mut out = Vec::new();
    for row in rd.records() {
        let row = row.map_err(csv_err)?;
        let opt = |i: usize| -> Result<Option<f64>> {
            let s = &row[i];
            if s.is_empty() { Ok(None) } else { parse(s, "number").map(Some) }
        };
        let mut chi_typ = Vec::new();
        for &(i, o) in &chi_cols {
            if let Some(v) = opt(i)? {
                chi_typ.push((o, v));
            }
        }
        let constituents = &row[idx[9]];
        out.push(SweepRecord {
            model: parse(&row[idx[0]], "model")?,
            j: parse(&row[idx[1]], "J")?,
            lattice: row[idx[2]].to_string(),
            sector: row[idx[3]].to_string(),
            dim: parse(&row[idx[4]], "dim")?,
            r_ave: parse(&row[idx[5]], "r_ave")?,
            s_ave: opt(idx[6])?,
            omega_h: parse(&row[idx[7]], "omega_h")?,
            degenerate_pairs: parse(&row[idx[8]], "degenerate_pairs")?,
            chi_typ,
            constituents: if constituents.is_empty() { Vec::new() } else { constituents.split(';').map(String::from).collect() },
        });
    }
    Ok(out)
}

fn write_rows(path: &Path, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    w.write_record(header).map_err(csv_err)?;
    for r in rows {
        w.write_record(&r).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes every artifact of a finished sweep and returns their paths.
pub fn write_run(cfg: &RunConfig, outcome: &SweepOutcome) -> Result<Vec<PathBuf>> {
    let dir = &cfg.output_dir;
    let mut files: Vec<PathBuf> = Vec::new();
    let records = outcome.records();

    let path = dir.join(RECORDS);
    write_records(&path, &records, &cfg.observables)?;
    files.push(path);

    let path = dir.join("r_values.csv");
    write_rows(
        &path,
        &["J", "sector", "r"],
        outcome.points.iter().flat_map(|p| {
            p.sectors.iter().flat_map(move |s| {
                s.stats.r_values.iter().map(move |r| vec![p.j.to_string(), s.record.sector.clone(), r.to_string()])
            })
        }),
    )?;
    files.push(path);

    if cfg.outputs.susceptibility {
        let path = dir.join("chi.csv");
        write_rows(
            &path,
            &["observable", "J", "chi_typ", "omega_h", "dim", "sites"],
            records.iter().filter(|r| r.is_aggregate()).flat_map(|r| {
                r.chi_typ.iter().map(move |(o, c)| {
                    vec![
                        o.to_string(),
                        r.j.to_string(),
                        c.to_string(),
                        r.omega_h.to_string(),
                        r.dim.to_string(),
                        cfg.lattice.num_sites().to_string(),
                    ]
                })
            }),
        )?;
        files.push(path);
    }

    for p in &outcome.points {
        if cfg.outputs.spectral {
            std::fs::create_dir_all(dir.join("spectral"))?;
            for s in &p.spectral {
                let path = dir.join("spectral").join(format!("{}_{}.csv", s.observable, j_tag(p.j)));
                s.write_csv(&path)?;
                files.push(path);
            }
        }
        if cfg.outputs.entropy {
            std::fs::create_dir_all(dir.join("entropy"))?;
            let path = dir.join("entropy").join(format!("{}.csv", j_tag(p.j)));
            write_rows(
                &path,
                &["sector", "index", "epsilon", "S_A", "s"],
                p.sectors.iter().filter_map(|s| s.entropy.as_ref()).flat_map(|e| {
                    e.window.clone().enumerate().map(move |(i, n)| {
                        vec![
                            e.sector.clone(),
                            n.to_string(),
                            e.energy_densities[i].to_string(),
                            e.entropies[i].to_string(),
                            e.normalized[i].to_string(),
                        ]
                    })
                }),
            )?;
            files.push(path);
        }
        if cfg.outputs.eev {
            std::fs::create_dir_all(dir.join("eev"))?;
            for &obs in &cfg.observables {
                let rows: Vec<(String, usize, f64, f64)> = p
                    .sectors
                    .iter()
                    .flat_map(|s| {
                        s.eev.iter().filter(|(o, _)| *o == obs).flat_map(move |(_, v)| {
                            v.iter().map(move |&(n, e, x)| (s.record.sector.clone(), n, e, x))
                        })
                    })
                    .collect();
                let path = dir.join("eev").join(format!("{obs}_{}.csv", j_tag(p.j)));
                write_rows(
                    &path,
                    &["sector", "index", "epsilon", "O_nn"],
                    rows.into_iter().map(|(s, n, e, x)| vec![s, n.to_string(), e.to_string(), x.to_string()]),
                )?;
                files.push(path);
            }
        }
    }

    let path = dir.join(TASK_LOG);
    write_rows(
        &path,
        &["J", "sector", "source", "seconds"],
        outcome.log.iter().map(|e| vec![e.j.to_string(), e.sector.clone(), e.source.clone(), format!("{:.3}", e.seconds)]),
    )?;
    files.push(path);

    let peaks = if cfg.outputs.susceptibility {
        cfg.observables
            .iter()
            .filter_map(|&o| {
                susceptibility_peak(&records, o)
                    .map_err(|e| log::info!("no {o} susceptibility peak: {e}"))
                    .ok()
                    .map(|(j_star, chi_star, omega_h)| PeakEntry { observable: o, j_star, chi_star, omega_h })
            })
            .collect()
    } else {
        Vec::new()
    };

    let rel = |p: &PathBuf| p.strip_prefix(dir).unwrap_or(p).to_string_lossy().into_owned();
    let manifest = Manifest {
        version: env!("CARGO_PKG_VERSION").into(),
        config: cfg.clone(),
        outputs: files.iter().map(rel).collect(),
        tasks: outcome.log.len(),
        failures: outcome.failures.clone(),
        chi_rescaling: cfg.chi_rescaling.clone(),
        peaks,
    };
    let path = dir.join(MANIFEST);
    std::fs::write(&path, serde_json::to_string_pretty(&manifest)?)?;
    files.push(path);
    Ok(files)
}
