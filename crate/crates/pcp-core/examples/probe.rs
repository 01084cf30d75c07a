// Scratch probe for solver behavior at small scale (not part of the library).
use pcp_core::solvers::alm::{solve_alm, AlmConfig};
use pcp_core::solvers::admm::{solve_eadm, solve_iadm, AdmmConfig};
use pcp_core::solvers::pspg::{solve_pspg, PspgConfig};
use pcp_core::{gen_rpcp_missing, gen_spcp, recovery_errors};

fn main() {
    let t0 = std::time::Instant::now();

    // rank-1, no sparse part equivalent: tiny c_p
    let inst = gen_rpcp_missing(20, 0.05, 0.0026, 1.0, 7).unwrap();
    let r = solve_iadm(&inst, &AdmmConfig::iadm_defaults()).unwrap();
    let e = recovery_errors(&r.low_rank, &r.sparse, inst.ground_truth.as_ref().unwrap()).unwrap();
    println!(
        "IADM rank1 n=20: iters={} svd={} relL={:.2e} relS={:.2e} obj={:.4} infeas={:.2e} conv={}",
        r.stats.iterations, r.stats.svd_count, e.rel_l, e.rel_s, r.stats.objective, r.stats.infeasibility, r.stats.converged
    );

    // shared full-observation instance, n = 100
    let inst = gen_rpcp_missing(100, 0.05, 0.05, 1.0, 3).unwrap();
    let gt = inst.ground_truth.as_ref().unwrap();

    let r = solve_iadm(&inst, &AdmmConfig::iadm_defaults()).unwrap();
    let e = recovery_errors(&r.low_rank, &r.sparse, gt).unwrap();
    println!(
        "IADM n=100: iters={} svd={} lsv={} relL={:.2e} relS={:.2e} obj={:.4} conv={}",
        r.stats.iterations, r.stats.svd_count, r.stats.lsv_count, e.rel_l, e.rel_s, r.stats.objective, r.stats.converged
    );

    let r = solve_eadm(&inst, &AdmmConfig::eadm_defaults()).unwrap();
    let e = recovery_errors(&r.low_rank, &r.sparse, gt).unwrap();
    println!(
        "EADM n=100: iters={} svd={} lsv={} relL={:.2e} relS={:.2e} obj={:.4} conv={}",
        r.stats.iterations, r.stats.svd_count, r.stats.lsv_count, e.rel_l, e.rel_s, r.stats.objective, r.stats.converged
    );

    let mut cfg = AlmConfig::full_defaults();
    cfg.rel_infeas_tol = 1e-7;
    let r = solve_alm(&inst, &cfg).unwrap();
    let e = recovery_errors(&r.low_rank, &r.sparse, gt).unwrap();
    println!(
        "ALM  n=100: iters={} svd={} lsv={} relL={:.2e} relS={:.2e} obj={:.4} conv={}",
        r.stats.iterations, r.stats.svd_count, r.stats.lsv_count, e.rel_l, e.rel_s, r.stats.objective, r.stats.converged
    );

    let mut pcfg = PspgConfig::paper_defaults();
    pcfg.k_bar = 100;
    pcfg.max_iters = 300;
    let r = solve_pspg(&inst, &pcfg).unwrap();
    let e = recovery_errors(&r.low_rank, &r.sparse, gt).unwrap();
    println!(
        "PSPG(d=0) n=100: iters={} svd={} relL={:.2e} relS={:.2e} obj={:.4} conv={} maxviol={:.1e}",
        r.stats.iterations, r.stats.svd_count, e.rel_l, e.rel_s, r.stats.objective, r.stats.converged, r.stats.max_constraint_violation
    );

    // ALM with missing data, n = 150, SR = 0.9
    let inst = gen_rpcp_missing(150, 0.05, 0.05, 0.9, 5).unwrap();
    let gt = inst.ground_truth.as_ref().unwrap();
    let r = solve_alm(&inst, &AlmConfig::missing_data_defaults()).unwrap();
    let e = recovery_errors(&r.low_rank, &r.sparse, gt).unwrap();
    println!(
        "ALM missing n=150 SR=0.9: iters={} svd={} lsv={} relL={:.2e} relS={:.2e} conv={}",
        r.stats.iterations, r.stats.svd_count, r.stats.lsv_count, e.rel_l, e.rel_s, r.stats.converged
    );

    // PSPG on a noisy SPCP instance, n = 150, 80 dB
    let inst = gen_spcp(150, 0.05, 0.05, 80.0, 5).unwrap();
    let gt = inst.ground_truth.as_ref().unwrap();
    let r = solve_pspg(&inst, &PspgConfig::paper_defaults()).unwrap();
    let e = recovery_errors(&r.low_rank, &r.sparse, gt).unwrap();
    println!(
        "PSPG spcp n=150 80dB: iters={} svd={} lsv={} relL={:.2e} relS={:.2e} conv={} maxviol={:.1e}",
        r.stats.iterations, r.stats.svd_count, r.stats.lsv_count, e.rel_l, e.rel_s, r.stats.converged, r.stats.max_constraint_violation
    );

    let inst = gen_spcp(150, 0.05, 0.05, 45.0, 5).unwrap();
    let gt = inst.ground_truth.as_ref().unwrap();
    let r = solve_pspg(&inst, &PspgConfig::paper_defaults()).unwrap();
    let e = recovery_errors(&r.low_rank, &r.sparse, gt).unwrap();
    println!(
        "PSPG spcp n=150 45dB: iters={} svd={} lsv={} relL={:.2e} relS={:.2e} conv={}",
        r.stats.iterations, r.stats.svd_count, r.stats.lsv_count, e.rel_l, e.rel_s, r.stats.converged
    );

    println!("total {:?}", t0.elapsed());
}
