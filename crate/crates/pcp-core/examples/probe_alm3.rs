// Scratch probe: ALM schedule variants on the missing-data row, n=200.
use pcp_core::solvers::alm::{solve_alm, AlmConfig};
use pcp_core::{gen_rpcp_missing, recovery_errors};

fn main() {
    let n: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(200);
    let inst = gen_rpcp_missing(n, 0.05, 0.05, 0.9, 1).unwrap();
    let gt = inst.ground_truth.as_ref().unwrap();
    let frob = {
        use pcp_core::project_mask;
        project_mask(&inst.data, &inst.mask).unwrap().frobenius_norm()
    };
    let rho0 = frob / 1.25;

    // (d) decay then freeze at various floors, run long
    for floor_iters in [20usize, 26, 32, 40] {
        let floor = rho0 * (2f64 / 3.0).powi(floor_iters as i32);
        let mut cfg = AlmConfig::missing_data_defaults();
        cfg.rho_floor = Some(floor);
        cfg.rel_infeas_tol = 1e-12;
        cfg.max_iters = 220;
        let r = solve_alm(&inst, &cfg).unwrap();
        let e = recovery_errors(&r.low_rank, &r.sparse, gt).unwrap();
        println!
            ("freeze@{floor_iters} (rho={floor:.3e}): iters={} rank={} infeas={:.2e} relL={:.3e} relS={:.3e}",
            r.stats.iterations, r.stats.rank, r.stats.infeasibility, e.rel_l, e.rel_s);
    }

    // (b) slower decay
    for eta in [0.75f64, 0.85, 0.9] {
        let mut cfg = AlmConfig::missing_data_defaults();
        cfg.eta = eta;
        cfg.rel_infeas_tol = 1e-5;
        cfg.max_iters = 400;
        let r = solve_alm(&inst, &cfg).unwrap();
        let e = recovery_errors(&r.low_rank, &r.sparse, gt).unwrap();
        println!(
            "eta={eta}: iters={} rank={} infeas={:.2e} relL={:.3e} relS={:.3e} conv={}",
            r.stats.iterations, r.stats.rank, r.stats.infeasibility, e.rel_l, e.rel_s, r.stats.converged
        );
    }
}
