//! The (sample x sigma x method) comparison harness.
//!
//! Every score in the report is a level-0 rescore under the exact distance
//! null model, so the three methods are compared on the same objective.
//! Cells run in a worker pool; rows are gathered in deterministic
//! (sample, sigma, method) order and mean rows per (sigma, method) are
//! appended with sample id `mean`.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use geomod_core::louvain::{louvain, louvain_d, DetectionConfig, InitStrategy};
use geomod_core::modularity::{build_null_model, distance_modularity, ng_modularity};
use geomod_core::{distance_matrix, DecayKernel, GeoGraph};

use crate::args::{MethodArg, SweepArgs};
use crate::{require_sigma, CmdError};

#[derive(Debug, Clone)]
pub struct SweepRow {
    pub sample: String,
    pub sigma: f64,
    pub method: MethodArg,
    pub m_dist: f64,
    pub m_ng: f64,
    pub runtime_s: f64,
    pub communities: usize,
    pub improvement_pct: f64,
}

#[derive(Debug)]
pub struct SweepOutput {
    pub rows: Vec<SweepRow>,
    pub means: Vec<SweepRow>,
}

pub fn run(args: &SweepArgs) -> Result<SweepOutput, CmdError> {
    if !args.samples.is_dir() {
        return Err(CmdError::Usage(format!(
            "sample directory not found: {}",
            args.samples.display()
        )));
    }
    let mut sigmas = args.sigma.clone();
    for s in &sigmas {
        require_sigma(*s)?;
    }
    sigmas.sort_by(|a, b| a.partial_cmp(b).unwrap());
    sigmas.dedup();

    let mut methods = args.methods.clone();
    methods.sort();
    methods.dedup();

    let files = sample_files(&args.samples)?;
    if files.is_empty() {
        return Err(CmdError::Usage(format!(
            "no sample graphs (*.json) in {}",
            args.samples.display()
        )));
    }

    let run_all = || -> Vec<SweepRow> {
        files
            .par_iter()
            .map(|f| sweep_sample(f, &sigmas, &methods, args.seed))
            .reduce(Vec::new, |mut acc, mut rows| {
                acc.append(&mut rows);
                acc
            })
    };
    let rows = if args.jobs > 0 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(args.jobs)
            .build()
            .map_err(|e| CmdError::Runtime(format!("worker pool: {e}")))?;
        pool.install(run_all)
    } else {
        run_all()
    };

    let means = mean_rows(&rows, &sigmas, &methods);
    write_csv(&args.out, &rows, &means)?;
    println!(
        "sweep: {} rows + {} mean rows -> {}",
        rows.len(),
        means.len(),
        args.out.display()
    );
    Ok(SweepOutput { rows, means })
}

fn sample_files(dir: &Path) -> Result<Vec<PathBuf>, CmdError> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| CmdError::Runtime(format!("read {}: {e}", dir.display())))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "json"))
        .collect();
    files.sort();
    Ok(files)
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

/// All rows for one sample. Failures are recorded as NaN rows and the sweep
/// continues.
fn sweep_sample(path: &Path, sigmas: &[f64], methods: &[MethodArg], seed: u64) -> Vec<SweepRow> {
    let name = stem(path);
    match sweep_sample_inner(path, &name, sigmas, methods, seed) {
        Ok(rows) => rows,
        Err(e) => {
            eprintln!("warning: sample {name} failed: {e}");
            sigmas
                .iter()
                .flat_map(|sigma| {
                    methods.iter().map(|m| SweepRow {
                        sample: name.clone(),
                        sigma: *sigma,
                        method: *m,
                        m_dist: f64::NAN,
                        m_ng: f64::NAN,
                        runtime_s: f64::NAN,
                        communities: 0,
                        improvement_pct: f64::NAN,
                    })
                })
                .collect()
        }
    }
}

fn sweep_sample_inner(
    path: &Path,
    name: &str,
    sigmas: &[f64],
    methods: &[MethodArg],
    seed: u64,
) -> Result<Vec<SweepRow>, CmdError> {
    let g = GeoGraph::from_json_file(path)?;
    // the NG baseline ignores sigma: one run per sample, rescored per sigma
    let baseline = louvain(&g, &DetectionConfig::ng(seed))?;
    let baseline_ng = ng_modularity(&g, &baseline.partition)?;
    let dm = distance_matrix(&g);

    let mut rows = Vec::with_capacity(sigmas.len() * methods.len());
    for &sigma in sigmas {
        let kernel = DecayKernel::exponential(sigma).map_err(CmdError::from)?;
        let table = build_null_model(&g, &dm, kernel)?;
        let baseline_dist = distance_modularity(&g, &baseline.partition, &table)?;
        let improvement =
            |m_dist: f64| 100.0 * (m_dist - baseline_dist) / baseline_dist.abs();

        for method in methods {
            let row = match method {
                MethodArg::Louvain => SweepRow {
                    sample: name.to_string(),
                    sigma,
                    method: *method,
                    m_dist: baseline_dist,
                    m_ng: baseline_ng,
                    runtime_s: baseline.duration.as_secs_f64(),
                    communities: baseline.partition.community_count(),
                    improvement_pct: 0.0,
                },
                MethodArg::LouvainDSingleton | MethodArg::LouvainDWarm => {
                    let init = if *method == MethodArg::LouvainDWarm {
                        InitStrategy::LouvainWarmStart
                    } else {
                        InitStrategy::Singleton
                    };
                    let cfg = DetectionConfig::distance(kernel, init, seed);
                    let result = louvain_d(&g, &cfg)?;
                    let m_ng = ng_modularity(&g, &result.partition)?;
                    SweepRow {
                        sample: name.to_string(),
                        sigma,
                        method: *method,
                        m_dist: result.objective_value,
                        m_ng,
                        runtime_s: result.duration.as_secs_f64(),
                        communities: result.partition.community_count(),
                        improvement_pct: improvement(result.objective_value),
                    }
                }
            };
            rows.push(row);
        }
    }
    Ok(rows)
}

fn mean_rows(rows: &[SweepRow], sigmas: &[f64], methods: &[MethodArg]) -> Vec<SweepRow> {
    let mut means = Vec::with_capacity(sigmas.len() * methods.len());
    for &sigma in sigmas {
        for method in methods {
            let cell: Vec<&SweepRow> = rows
                .iter()
                .filter(|r| r.sigma == sigma && r.method == *method && r.m_dist.is_finite())
                .collect();
            let count = cell.len() as f64;
            let mean = |f: &dyn Fn(&SweepRow) -> f64| -> f64 {
                if cell.is_empty() {
                    f64::NAN
                } else {
                    cell.iter().map(|r| f(r)).sum::<f64>() / count
                }
            };
            means.push(SweepRow {
                sample: "mean".to_string(),
                sigma,
                method: *method,
                m_dist: mean(&|r| r.m_dist),
                m_ng: mean(&|r| r.m_ng),
                runtime_s: mean(&|r| r.runtime_s),
                communities: mean(&|r| r.communities as f64).round() as usize,
                improvement_pct: mean(&|r| r.improvement_pct),
            });
        }
    }
    means
}

pub const CSV_HEADER: &str = "sample,sigma,method,m_dist,m_ng,runtime_s,communities,improvement_pct";

fn write_csv(path: &Path, rows: &[SweepRow], means: &[SweepRow]) -> Result<(), CmdError> {
    let file = File::create(path)
        .map_err(|e| CmdError::Runtime(format!("cannot create {}: {e}", path.display())))?;
    let mut w = BufWriter::new(file);
    let io_err = |e: std::io::Error| CmdError::Runtime(format!("write {}: {e}", path.display()));
    writeln!(w, "{CSV_HEADER}").map_err(io_err)?;
    for row in rows.iter().chain(means) {
        writeln!(
            w,
            "{},{},{},{},{},{:.6},{},{}",
            row.sample,
            row.sigma,
            row.method.name(),
            row.m_dist,
            row.m_ng,
            row.runtime_s,
            row.communities,
            row.improvement_pct
        )
        .map_err(io_err)?;
    }
    w.flush().map_err(io_err)
}
