// Scratch probe: ALM trajectory on the missing-data benchmark row.
use pcp_core::solvers::alm::{solve_alm, AlmConfig};
use pcp_core::{gen_rpcp_missing, recovery_errors};

fn main() {
    let n: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(500);
    let t0 = std::time::Instant::now();
    let inst = gen_rpcp_missing(n, 0.05, 0.05, 0.9, 1).unwrap();
    println!("generated in {:?}", t0.elapsed());
    let gt = inst.ground_truth.as_ref().unwrap();

    let mut cfg = AlmConfig::missing_data_defaults();
    for max in [5usize, 10, 15, 20, 24, 28, 32, 36, 40, 50] {
        cfg.max_iters = max;
        let t = std::time::Instant::now();
        let r = solve_alm(&inst, &cfg).unwrap();
        let e = recovery_errors(&r.low_rank, &r.sparse, gt).unwrap();
        println!(
            "iters={:2} rank={:3} lsv={:5} infeas={:.3e} relL={:.3e} relS={:.3e} conv={} ({:?})",
            r.stats.iterations,
            r.stats.rank,
            r.stats.lsv_count,
            r.stats.infeasibility,
            e.rel_l,
            e.rel_s,
            r.stats.converged,
            t.elapsed()
        );
        if r.stats.converged {
            break;
        }
    }
}
