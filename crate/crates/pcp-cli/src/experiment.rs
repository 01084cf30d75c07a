//! Experiment orchestration: a spec file describing (generator x seeds x
//! solver x config) cells, executed in a work-stealing pool, aggregated into
//! the avg/max tables the benchmark results are reported in.

use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};

use pcp_core::problems::GeneratorParams;
use pcp_core::{gen_rpcp_missing, gen_spcp, Instance};

use crate::configs::{SolverConfig, SolverKind};
use crate::records::RunRecord;

pub const BENCH_SPEC_VERSION: u16 = 1;

/// Generator parameters without a seed; each cell fans out over its seeds.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorSpec {
    RpcpMissing {
        n: usize,
        c_r: f64,
        c_p: f64,
        sample_ratio: f64,
    },
    Spcp {
        n: usize,
        c_r: f64,
        c_p: f64,
        /// `None` means noiseless.
        snr_db: Option<f64>,
    },
}

impl GeneratorSpec {
    pub fn with_seed(&self, seed: u64) -> GeneratorParams {
        match *self {
            GeneratorSpec::RpcpMissing {
                n,
                c_r,
                c_p,
                sample_ratio,
            } => GeneratorParams::RpcpMissing {
                n,
                c_r,
                c_p,
                sample_ratio,
                seed,
            },
            GeneratorSpec::Spcp { n, c_r, c_p, snr_db } => GeneratorParams::Spcp {
                n,
                c_r,
                c_p,
                snr_db,
                seed,
            },
        }
    }
}

pub fn generate_instance(params: &GeneratorParams) -> pcp_core::Result<Instance> {
    match *params {
        GeneratorParams::RpcpMissing {
            n,
            c_r,
            c_p,
            sample_ratio,
            seed,
        } => gen_rpcp_missing(n, c_r, c_p, sample_ratio, seed),
        GeneratorParams::Spcp {
            n,
            c_r,
            c_p,
            snr_db,
            seed,
        } => gen_spcp(n, c_r, c_p, snr_db.unwrap_or(f64::INFINITY), seed),
    }
}

/// Acceptance bounds checked against a cell's aggregated results.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct CellBounds {
    pub mean_rel_l_max: Option<f64>,
    pub mean_rel_s_max: Option<f64>,
    pub mean_iterations_range: Option<(f64, f64)>,
    pub mean_svd_max: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BenchCell {
    #[serde(default)]
    pub label: Option<String>,
    pub generator: GeneratorSpec,
    pub seeds: Vec<u64>,
    pub solver: String,
    /// Full solver config; the solver's defaults when omitted.
    #[serde(default)]
    pub config: Option<serde_json::Value>,
    #[serde(default)]
    pub bounds: Option<CellBounds>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BenchSpec {
    pub version: u16,
    #[serde(default)]
    pub threads: Option<usize>,
    pub cells: Vec<BenchCell>,
}

/// Aggregated statistics of one cell (averages and maxima over seeds, the
/// style the reference tables use).
#[derive(Debug, Clone, Serialize)]
pub struct CellSummary {
    pub label: String,
    pub solver: String,
    pub runs: usize,
    pub failures: usize,
    pub avg_iterations: f64,
    pub max_iterations: usize,
    pub avg_svd: f64,
    pub max_svd: usize,
    pub avg_lsv: f64,
    pub max_lsv: usize,
    pub avg_rel_l: Option<f64>,
    pub max_rel_l: Option<f64>,
    pub avg_rel_s: Option<f64>,
    pub max_rel_s: Option<f64>,
    pub avg_wall_seconds: f64,
    pub violations: Vec<String>,
}

pub struct ExperimentOutcome {
    pub records: Vec<RunRecord>,
    pub summaries: Vec<CellSummary>,
    /// Per-cell failures (solver errors), run order preserved.
    pub errors: Vec<String>,
}

impl ExperimentOutcome {
    pub fn any_violation(&self) -> bool {
        self.summaries.iter().any(|s| !s.violations.is_empty()) || !self.errors.is_empty()
    }
}

fn resolve_config(cell: &BenchCell, instance: &Instance) -> anyhow::Result<SolverConfig> {
    let kind = SolverKind::from_name(&cell.solver)?;
    match &cell.config {
        None => Ok(SolverConfig::defaults_for(kind, instance)),
        Some(value) => {
            let tagged = serde_json::json!({"solver": cell.solver, "config": value});
            let cfg: SolverConfig = serde_json::from_value(tagged)
                .with_context(|| format!("parsing config for cell '{}'", cell.solver))?;
            Ok(cfg)
        }
    }
}

/// Executes every (cell, seed) run. Instances shared between cells are
/// generated once; records are ordered by (cell index, seed index) no matter
/// the completion order.
pub fn run_experiment(spec: &BenchSpec) -> anyhow::Result<ExperimentOutcome> {
    if spec.version != BENCH_SPEC_VERSION {
        bail!(
            "bench spec version {} unsupported (expected {BENCH_SPEC_VERSION})",
            spec.version
        );
    }

    // Unique instances, keyed by their stable id.
    let mut keys: Vec<(String, GeneratorParams)> = Vec::new();
    for cell in &spec.cells {
        for &seed in &cell.seeds {
            let params = cell.generator.with_seed(seed);
            let id = params.instance_id();
            if !keys.iter().any(|(k, _)| *k == id) {
                keys.push((id, params));
            }
        }
    }

    let threads = spec.threads.unwrap_or_else(default_threads).max(1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .context("building worker pool")?;

    use rayon::prelude::*;
    let instances: Vec<(String, pcp_core::Result<Instance>)> = pool.install(|| {
        keys.par_iter()
            .map(|(id, params)| (id.clone(), generate_instance(params)))
            .collect()
    });
    let lookup = |id: &str| -> anyhow::Result<&Instance> {
        instances
            .iter()
            .find(|(k, _)| k == id)
            .map(|(_, inst)| inst.as_ref().map_err(|e| anyhow::anyhow!("{e}")))
            .context("instance missing")?
    };

    // Flatten work items in deterministic order.
    let mut items: Vec<(usize, usize, String)> = Vec::new();
    for (ci, cell) in spec.cells.iter().enumerate() {
        for (si, &seed) in cell.seeds.iter().enumerate() {
            items.push((ci, si, cell.generator.with_seed(seed).instance_id()));
        }
    }

    let results: Vec<(usize, usize, anyhow::Result<RunRecord>)> = pool.install(|| {
        items
            .par_iter()
            .map(|(ci, si, id)| {
                let record = (|| -> anyhow::Result<RunRecord> {
                    let cell = &spec.cells[*ci];
                    let instance = lookup(id)?;
                    let config = resolve_config(cell, instance)?;
                    let start = std::time::Instant::now();
                    let result = config.run(instance)?;
                    Ok(RunRecord::new(
                        id.clone(),
                        &cell.solver,
                        config.to_json(),
                        instance,
                        &result,
                        start.elapsed().as_secs_f64(),
                    ))
                })();
                (*ci, *si, record)
            })
            .collect()
    });

    // Merge by cell/seed index.
    let mut ordered: Vec<(usize, usize, anyhow::Result<RunRecord>)> = results;
    ordered.sort_by_key(|(ci, si, _)| (*ci, *si));

    let mut records = Vec::new();
    let mut errors = Vec::new();
    let mut per_cell: Vec<Vec<&RunRecord>> = vec![Vec::new(); spec.cells.len()];
    let mut cell_failures = vec![0usize; spec.cells.len()];
    for (ci, si, res) in &ordered {
        match res {
            Ok(rec) => records.push((*ci, rec.clone())),
            Err(e) => {
                cell_failures[*ci] += 1;
                errors.push(format!("cell {ci} seed index {si}: {e}"));
            }
        }
    }
    for (ci, rec) in &records {
        per_cell[*ci].push(rec);
    }

    let summaries: Vec<CellSummary> = spec
        .cells
        .iter()
        .enumerate()
        .map(|(ci, cell)| summarize_cell(ci, cell, &per_cell[ci], cell_failures[ci]))
        .collect();

    Ok(ExperimentOutcome {
        records: records.into_iter().map(|(_, r)| r).collect(),
        summaries,
        errors,
    })
}

fn default_threads() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

fn summarize_cell(
    index: usize,
    cell: &BenchCell,
    records: &[&RunRecord],
    failures: usize,
) -> CellSummary {
    let label = cell
        .label
        .clone()
        .unwrap_or_else(|| format!("cell{index}"));
    let n = records.len().max(1) as f64;
    let avg = |f: &dyn Fn(&RunRecord) -> f64| records.iter().map(|r| f(r)).sum::<f64>() / n;
    let opt_stats = |f: &dyn Fn(&RunRecord) -> Option<f64>| {
        let vals: Vec<f64> = records.iter().filter_map(|r| f(r)).collect();
        if vals.is_empty() {
            (None, None)
        } else {
            let avg = vals.iter().sum::<f64>() / vals.len() as f64;
            let max = vals.iter().cloned().fold(f64::MIN, f64::max);
            (Some(avg), Some(max))
        }
    };

    let (avg_rel_l, max_rel_l) = opt_stats(&|r| r.rel_l);
    let (avg_rel_s, max_rel_s) = opt_stats(&|r| r.rel_s);
    let avg_iterations = avg(&|r| r.iterations as f64);
    let avg_svd = avg(&|r| r.svd_count as f64);

    let mut violations = Vec::new();
    if failures > 0 {
        violations.push(format!("{failures} run(s) failed"));
    }
    if let Some(bounds) = &cell.bounds {
        if let (Some(limit), Some(value)) = (bounds.mean_rel_l_max, avg_rel_l) {
            if value > limit {
                violations.push(format!("mean relL {value:.3e} > {limit:.3e}"));
            }
        }
        if let (Some(limit), Some(value)) = (bounds.mean_rel_s_max, avg_rel_s) {
            if value > limit {
                violations.push(format!("mean relS {value:.3e} > {limit:.3e}"));
            }
        }
        if let Some((lo, hi)) = bounds.mean_iterations_range {
            if avg_iterations < lo || avg_iterations > hi {
                violations.push(format!(
                    "mean iterations {avg_iterations:.1} outside [{lo}, {hi}]"
                ));
            }
        }
        if let Some(limit) = bounds.mean_svd_max {
            if avg_svd > limit {
                violations.push(format!("mean svd {avg_svd:.1} > {limit}"));
            }
        }
    }

    CellSummary {
        label,
        solver: cell.solver.clone(),
        runs: records.len(),
        failures,
        avg_iterations,
        max_iterations: records.iter().map(|r| r.iterations).max().unwrap_or(0),
        avg_svd,
        max_svd: records.iter().map(|r| r.svd_count).max().unwrap_or(0),
        avg_lsv: avg(&|r| r.lsv_count as f64),
        max_lsv: records.iter().map(|r| r.lsv_count).max().unwrap_or(0),
        avg_rel_l,
        max_rel_l,
        avg_rel_s,
        max_rel_s,
        avg_wall_seconds: avg(&|r| r.wall_seconds),
        violations,
    }
}
