// Scratch probe: ALM long-run behavior and objective gap on the missing-data row.
use pcp_core::solvers::alm::{solve_alm, AlmConfig};
use pcp_core::{gen_rpcp_missing, norms, project_mask, recovery_errors};

fn main() {
    let n: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(200);
    let inst = gen_rpcp_missing(n, 0.05, 0.05, 0.9, 1).unwrap();
    let gt = inst.ground_truth.as_ref().unwrap();

    // Objective of the planted pair (for the equivalent problem).
    let truth_obj = norms(&gt.low_rank, None).unwrap().nuclear
        + inst.xi * project_mask(&gt.sparse, &inst.mask).unwrap().l1_norm();
    println!("objective at planted pair: {truth_obj:.6}");

    let mut cfg = AlmConfig::missing_data_defaults();
    cfg.rel_infeas_tol = 1e-14; // effectively disable stopping
    for max in [20usize, 30, 40, 50, 60, 80] {
        cfg.max_iters = max;
        let r = solve_alm(&inst, &cfg).unwrap();
        let e = recovery_errors(&r.low_rank, &r.sparse, gt).unwrap();
        println!(
            "iters={:2} rank={:3} infeas={:.3e} relL={:.3e} relS={:.3e} obj={:.6} gap={:+.3e}",
            r.stats.iterations,
            r.stats.rank,
            r.stats.infeasibility,
            e.rel_l,
            e.rel_s,
            r.stats.objective,
            r.stats.objective - truth_obj,
        );
    }
}
