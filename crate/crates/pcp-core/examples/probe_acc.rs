// Scratch probe: acceptance dry runs (criteria 1, 2, 3, 8).
use pcp_core::solvers::alm::{solve_alm, AlmConfig};
use pcp_core::solvers::admm::{solve_eadm, solve_iadm, AdmmConfig};
use pcp_core::solvers::pspg::{solve_pspg, PspgConfig};
use pcp_core::{gen_rpcp_missing, gen_spcp, recovery_errors};

fn main() {
    let which = std::env::args().nth(1).unwrap_or_else(|| "1".into());
    match which.as_str() {
        "1" => {
            let t = std::time::Instant::now();
            let (mut sl, mut ss, mut si) = (0.0, 0.0, 0.0);
            for seed in 1..=5u64 {
                let inst = gen_rpcp_missing(500, 0.05, 0.05, 0.9, seed).unwrap();
                let r = solve_alm(&inst, &AlmConfig::missing_data_defaults()).unwrap();
                let e = recovery_errors(&r.low_rank, &r.sparse, inst.ground_truth.as_ref().unwrap()).unwrap();
                println!("seed {seed}: iters={} lsv={} relL={:.3e} relS={:.3e} conv={}", r.stats.iterations, r.stats.lsv_count, e.rel_l, e.rel_s, r.stats.converged);
                sl += e.rel_l; ss += e.rel_s; si += r.stats.iterations as f64;
            }
            println!("C1 means: relL={:.3e} (<=5.4e-5) relS={:.3e} (<=3.0e-4) iters={:.1} in [10,40]  [{:?}]", sl/5.0, ss/5.0, si/5.0, t.elapsed());
        }
        "2" => {
            let t = std::time::Instant::now();
            let (mut sl, mut ss, mut sv) = (0.0, 0.0, 0.0);
            for seed in 1..=5u64 {
                let inst = gen_spcp(500, 0.05, 0.05, 80.0, seed).unwrap();
                let r = solve_pspg(&inst, &PspgConfig::paper_defaults()).unwrap();
                let e = recovery_errors(&r.low_rank, &r.sparse, inst.ground_truth.as_ref().unwrap()).unwrap();
                println!("seed {seed}: svd={} lsv={} relL={:.3e} relS={:.3e} conv={}", r.stats.svd_count, r.stats.lsv_count, e.rel_l, e.rel_s, r.stats.converged);
                sl += e.rel_l; ss += e.rel_s; sv += r.stats.svd_count as f64;
            }
            println!("C2 means: relL={:.3e} (<=4.0e-4) relS={:.3e} (<=1.3e-3) svd={:.1} (<=60)  [{:?}]", sl/5.0, ss/5.0, sv/5.0, t.elapsed());
        }
        "3" => {
            let t = std::time::Instant::now();
            let (mut sl, mut ss, mut sv) = (0.0, 0.0, 0.0);
            for seed in 1..=5u64 {
                let inst = gen_spcp(500, 0.05, 0.05, 45.0, seed).unwrap();
                let r = solve_pspg(&inst, &PspgConfig::paper_defaults()).unwrap();
                let e = recovery_errors(&r.low_rank, &r.sparse, inst.ground_truth.as_ref().unwrap()).unwrap();
                println!("seed {seed}: svd={} lsv={} relL={:.3e} relS={:.3e}", r.stats.svd_count, r.stats.lsv_count, e.rel_l, e.rel_s);
                sl += e.rel_l; ss += e.rel_s; sv += r.stats.svd_count as f64;
            }
            println!("C3 means: relL={:.3e} (<=2.3e-2) relS={:.3e} (<=7.5e-2) svd={:.1} (<=40)  [{:?}]", sl/5.0, ss/5.0, sv/5.0, t.elapsed());
        }
        "8" => {
            let t = std::time::Instant::now();
            let inst = gen_rpcp_missing(200, 0.05, 0.05, 1.0, 11).unwrap();
            let gt = inst.ground_truth.as_ref().unwrap();
            let mut objs = Vec::new();
            let r = solve_iadm(&inst, &AdmmConfig::iadm_defaults()).unwrap();
            let e = recovery_errors(&r.low_rank, &r.sparse, gt).unwrap();
            println!("IADM: iters={} svd={} relL={:.2e} obj={:.6}", r.stats.iterations, r.stats.svd_count, e.rel_l, r.stats.objective);
            objs.push(r.stats.objective);
            let r = solve_eadm(&inst, &AdmmConfig::eadm_defaults()).unwrap();
            let e = recovery_errors(&r.low_rank, &r.sparse, gt).unwrap();
            println!("EADM: iters={} svd={} relL={:.2e} obj={:.6}", r.stats.iterations, r.stats.svd_count, e.rel_l, r.stats.objective);
            objs.push(r.stats.objective);
            let r = solve_alm(&inst, &AlmConfig::full_defaults()).unwrap();
            let e = recovery_errors(&r.low_rank, &r.sparse, gt).unwrap();
            println!("ALM : iters={} svd={} relL={:.2e} obj={:.6}", r.stats.iterations, r.stats.svd_count, e.rel_l, r.stats.objective);
            objs.push(r.stats.objective);
            let mut pcfg = PspgConfig::paper_defaults();
            pcfg.k_bar = 100; pcfg.max_iters = 300;
            let r = solve_pspg(&inst, &pcfg).unwrap();
            let e = recovery_errors(&r.low_rank, &r.sparse, gt).unwrap();
            println!("PSPG: iters={} svd={} relL={:.2e} obj={:.6}", r.stats.iterations, r.stats.svd_count, e.rel_l, r.stats.objective);
            objs.push(r.stats.objective);
            let omax = objs.iter().cloned().fold(f64::MIN, f64::max);
            let omin = objs.iter().cloned().fold(f64::MAX, f64::min);
            println!("C8 objective spread: {:.3e} (<=1e-3)  [{:?}]", (omax-omin)/omin, t.elapsed());
        }
        _ => eprintln!("unknown probe"),
    }
}
