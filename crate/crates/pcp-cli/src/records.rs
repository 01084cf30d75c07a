//! Per-run records and their CSV serialization.

use serde::{Deserialize, Serialize};

use pcp_core::solvers::DecompositionResult;
use pcp_core::{recovery_errors, Instance};

/// Everything reported about one solver run on one instance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunRecord {
    pub instance_id: String,
    pub solver: String,
    /// JSON snapshot of the configuration the run used.
    pub config: serde_json::Value,
    pub iterations: usize,
    pub svd_count: usize,
    pub lsv_count: usize,
    pub wall_seconds: f64,
    /// Final `||L||_* + xi ||pi_Omega(S)||_1`.
    pub objective: f64,
    /// Final relative infeasibility under the solver's termination rule.
    pub infeasibility: f64,
    pub converged: bool,
    /// Rank of the recovered low-rank component.
    pub rank: usize,
    /// Relative recovery errors when ground truth is available.
    pub rel_l: Option<f64>,
    pub rel_s: Option<f64>,
}

impl RunRecord {
    pub fn new(
        instance_id: String,
        solver: &str,
        config: serde_json::Value,
        instance: &Instance,
        result: &DecompositionResult,
        wall_seconds: f64,
    ) -> Self {
        let errors = instance
            .ground_truth
            .as_ref()
            .and_then(|gt| recovery_errors(&result.low_rank, &result.sparse, gt).ok());
        Self {
            instance_id,
            solver: solver.to_string(),
            config,
            iterations: result.stats.iterations,
            svd_count: result.stats.svd_count,
            lsv_count: result.stats.lsv_count,
            wall_seconds,
            objective: result.stats.objective,
            infeasibility: result.stats.infeasibility,
            converged: result.stats.converged,
            rank: result.stats.rank,
            rel_l: errors.as_ref().map(|e| e.rel_l),
            rel_s: errors.as_ref().map(|e| e.rel_s),
        }
    }
}

/// RFC-4180 CSV of the records (header + one line per run).
pub fn records_to_csv(records: &[RunRecord]) -> anyhow::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "instance_id",
        "solver",
        "iterations",
        "svd",
        "lsv",
        "wall_seconds",
        "objective",
        "infeasibility",
        "converged",
        "rank",
        "relL",
        "relS",
        "config",
    ])?;
    for r in records {
        w.write_record([
            r.instance_id.clone(),
            r.solver.clone(),
            r.iterations.to_string(),
            r.svd_count.to_string(),
            r.lsv_count.to_string(),
            format!("{:.3}", r.wall_seconds),
            format!("{:.6e}", r.objective),
            format!("{:.6e}", r.infeasibility),
            r.converged.to_string(),
            r.rank.to_string(),
            r.rel_l.map(|v| format!("{v:.6e}")).unwrap_or_default(),
            r.rel_s.map(|v| format!("{v:.6e}")).unwrap_or_default(),
            r.config.to_string(),
        ])?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}
