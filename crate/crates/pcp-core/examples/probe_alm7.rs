// Scratch probe: 2-D scan of smoothing scales (mu = a*rho, nu = b*rho).
use pcp_core::{gen_rpcp_missing, partial_svd, project_mask, recovery_errors, DenseMatrix};

fn run(inst: &pcp_core::Instance, mu_scale: f64, nu_scale: f64, tol: f64) {
    let gt = inst.ground_truth.as_ref().unwrap();
    let mask = &inst.mask;
    let d_obs = project_mask(&inst.data, mask).unwrap();
    let denom = d_obs.frobenius_norm();
    let mut rho = denom / 1.25;
    let xi = inst.xi;
    let (m, nn) = d_obs.shape();
    let mut l = DenseMatrix::zeros(m, nn);
    let mut s = d_obs.clone();
    let (mut lsv, mut iters, mut rank) = (0usize, 0usize, 0usize);
    for _ in 0..80 {
        let mu = mu_scale * rho;
        let nu = nu_scale * rho;
        let mut z = DenseMatrix::zeros(m, nn);
        mask.for_each(|i, j| {
            let v = s.get(i, j);
            z.set(i, j, v.signum() * (v.abs() / nu).min(xi));
        });
        let mmat = z.scale(rho).sub(&s).add(&d_obs);
        let fac = partial_svd(&mmat, mu).unwrap();
        lsv += fac.rank();
        rank = fac.rank();
        let shrunk: Vec<f64> = fac.singular_values.iter().map(|&sig| sig - rho * sig / sig.max(rho + mu)).collect();
        l = { let mut f = fac.clone(); f.singular_values = shrunk.clone(); f.reconstruct() };
        let w = { let mut f = fac; f.singular_values = shrunk.iter().map(|&v| (v / mu).min(1.0)).collect(); f.reconstruct() };
        let b = w.scale(rho).sub(&l).add(&d_obs);
        s = b.clone();
        mask.for_each(|i, j| {
            let v = b.get(i, j);
            s.set(i, j, v.signum() * (nu / (nu + rho) * v.abs()).max(v.abs() - rho * xi));
        });
        let infeas = l.add(&s).sub(&d_obs).frobenius_norm() / denom;
        iters += 1;
        if infeas < tol { break; }
        rho *= 2.0 / 3.0;
    }
    let sparse = project_mask(&s, mask).unwrap();
    let e = recovery_errors(&l, &sparse, gt).unwrap();
    println!("mu={mu_scale:>4}r nu={nu_scale:>4}r: iters={iters} rank={rank} lsv={lsv} relL={:.3e} relS={:.3e}", e.rel_l, e.rel_s);
}

fn main() {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(500);
    let inst = gen_rpcp_missing(n, 0.05, 0.05, 0.9, 1).unwrap();
    for (a, b) in [(1.0, 0.1), (0.3, 0.3), (0.1, 0.1), (1.0, 0.3), (0.3, 0.1), (0.5, 0.05)] {
        run(&inst, a, b, 1e-5);
    }
}
