//! Aligned-text tables in the avg/max style of the reference results.

use crate::experiment::CellSummary;

fn fmt_opt_pair(avg: Option<f64>, max: Option<f64>) -> String {
    match (avg, max) {
        (Some(a), Some(m)) => format!("{a:.2e} / {m:.2e}"),
        _ => "-".to_string(),
    }
}

/// Pure function of the summaries: byte-stable for fixed input.
pub fn render_summary_table(summaries: &[CellSummary]) -> String {
    let mut rows: Vec<[String; 8]> = vec![[
        "cell".into(),
        "solver".into(),
        "runs".into(),
        "iter avg/max".into(),
        "svd avg/max".into(),
        "lsv avg/max".into(),
        "relL avg/max".into(),
        "relS avg/max".into(),
    ]];
    for s in summaries {
        rows.push([
            s.label.clone(),
            s.solver.clone(),
            if s.failures > 0 {
                format!("{} ({} failed)", s.runs, s.failures)
            } else {
                s.runs.to_string()
            },
            format!("{:.1} / {}", s.avg_iterations, s.max_iterations),
            format!("{:.1} / {}", s.avg_svd, s.max_svd),
            format!("{:.1} / {}", s.avg_lsv, s.max_lsv),
            fmt_opt_pair(s.avg_rel_l, s.max_rel_l),
            fmt_opt_pair(s.avg_rel_s, s.max_rel_s),
        ]);
    }

    let mut widths = [0usize; 8];
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    for (i, row) in rows.iter().enumerate() {
        for (w, cell) in widths.iter().zip(row) {
            out.push_str(&format!("{cell:<width$}  ", width = w));
        }
        out.pop();
        out.pop();
        out.push('\n');
        if i == 0 {
            let total: usize = widths.iter().sum::<usize>() + 2 * (widths.len() - 1);
            out.push_str(&"-".repeat(total));
            out.push('\n');
        }
    }
    for s in summaries {
        for v in &s.violations {
            out.push_str(&format!("VIOLATION [{}]: {v}\n", s.label));
        }
    }
    out
}
