// Scratch probe: fine-grained per-iteration ALM trajectory.
use pcp_core::solvers::alm::{alm_update_l, alm_update_s};
use pcp_core::{gen_rpcp_missing, project_complement, project_mask, recovery_errors, DenseMatrix};

fn main() {
    let n: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(500);
    let inst = gen_rpcp_missing(n, 0.05, 0.05, 0.9, 1).unwrap();
    let gt = inst.ground_truth.as_ref().unwrap();
    let mask = &inst.mask;
    let d_obs = project_mask(&inst.data, mask).unwrap();
    let denom = d_obs.frobenius_norm();
    let mut rho = denom / 1.25;
    let xi = inst.xi;

    let (m, nn) = d_obs.shape();
    let mut l = DenseMatrix::zeros(m, nn);
    let mut s = d_obs.clone();
    println!("k | rho      | rank | infeas    | relL      | relS      | offL_err  | onL_err");
    for k in 0..44 {
        let mu = rho;
        let nu = rho;
        let (l_new, w, _shrunk, count) =
            alm_update_l(&s, &d_obs, rho, mu, nu, xi, mask, mu).unwrap();
        l = l_new;
        s = alm_update_s(&l, &w, &d_obs, rho, nu, xi, mask);
        let infeas = l.add(&s).sub(&d_obs).frobenius_norm() / denom;
        let sparse = project_mask(&s, mask).unwrap();
        let e = recovery_errors(&l, &sparse, gt).unwrap();
        // split the L error into observed and unobserved parts
        let l_err = l.sub(&gt.low_rank);
        let off = project_complement(&l_err, mask).unwrap().frobenius_norm();
        let on = project_mask(&l_err, mask).unwrap().frobenius_norm();
        println!(
            "{k:2} | {rho:8.2e} | {count:4} | {infeas:.3e} | {:.3e} | {:.3e} | {off:9.3} | {on:9.3}",
            e.rel_l, e.rel_s
        );
        if infeas < 1e-5 {
            break;
        }
        rho *= 2.0 / 3.0;
    }
}
