// Scratch probe: ALM update variants (SVD threshold policy, smoothing scale).
use pcp_core::solvers::alm::{alm_update_l, alm_update_s};
use pcp_core::{gen_rpcp_missing, project_mask, recovery_errors, DenseMatrix};

fn run(
    inst: &pcp_core::Instance,
    threshold_factor: f64, // SVD threshold = factor * mu
    smooth_factor: f64,    // mu = nu = factor * rho
    label: &str,
) {
    let gt = inst.ground_truth.as_ref().unwrap();
    let mask = &inst.mask;
    let d_obs = project_mask(&inst.data, mask).unwrap();
    let denom = d_obs.frobenius_norm();
    let mut rho = denom / 1.25;
    let eta: f64 = 2.0 / 3.0;
    let xi = inst.xi;

    let (m, n) = d_obs.shape();
    let mut l = DenseMatrix::zeros(m, n);
    let mut s = d_obs.clone();
    let mut lsv = 0usize;
    let mut iters = 0usize;
    let mut rank = 0usize;
    for _ in 0..60 {
        let mu = smooth_factor * rho;
        let nu = smooth_factor * rho;
        let (l_new, w, shrunk, count) = alm_update_l(
            &s,
            &d_obs,
            rho,
            mu,
            nu,
            xi,
            mask,
            threshold_factor * mu,
        )
        .unwrap();
        lsv += count;
        rank = shrunk.len();
        l = l_new;
        s = alm_update_s(&l, &w, &d_obs, rho, nu, xi, mask);
        let infeas = l.add(&s).sub(&d_obs).frobenius_norm() / denom;
        iters += 1;
        if infeas < 1e-5 {
            break;
        }
        rho *= eta;
    }
    let sparse = project_mask(&s, mask).unwrap();
    let e = recovery_errors(&l, &sparse, gt).unwrap();
    println!(
        "{label}: iters={iters} rank={rank} lsv={lsv} relL={:.3e} relS={:.3e}",
        e.rel_l, e.rel_s
    );
}

fn main() {
    let n: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(200);
    let inst = gen_rpcp_missing(n, 0.05, 0.05, 0.9, 1).unwrap();
    run(&inst, 1.0, 1.0, "threshold=mu,   tie c=1 (baseline)");
    run(&inst, 0.0, 1.0, "threshold=0,    tie c=1 (exact)   ");
    run(&inst, 0.5, 1.0, "threshold=mu/2, tie c=1           ");
    run(&inst, 1.0, 2.0, "threshold=mu,   tie c=2           ");
    run(&inst, 1.0, 3.0, "threshold=mu,   tie c=3           ");
    run(&inst, 0.0, 2.0, "threshold=0,    tie c=2           ");
}
