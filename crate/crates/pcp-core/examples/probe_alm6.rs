// Scratch probe: ALM with the S-side smoothing scaled down (nu = s * rho),
// including the exact-prox limit s = 0.
use pcp_core::{gen_rpcp_missing, partial_svd, project_mask, recovery_errors, DenseMatrix};

fn run(inst: &pcp_core::Instance, nu_scale: f64) {
    let gt = inst.ground_truth.as_ref().unwrap();
    let mask = &inst.mask;
    let d_obs = project_mask(&inst.data, mask).unwrap();
    let denom = d_obs.frobenius_norm();
    let mut rho = denom / 1.25;
    let xi = inst.xi;

    let (m, nn) = d_obs.shape();
    let mut l = DenseMatrix::zeros(m, nn);
    let mut s = d_obs.clone();
    let mut lsv = 0usize;
    let mut iters = 0usize;
    let mut rank = 0usize;
    for _ in 0..60 {
        let mu = rho;
        let nu = nu_scale * rho;
        // Z_nu(S): sgn(s) min(|s|/nu, xi); limit nu -> 0 is xi sgn(s).
        let mut z = DenseMatrix::zeros(m, nn);
        mask.for_each(|i, j| {
            let v = s.get(i, j);
            let zv = if nu > 0.0 {
                v.signum() * (v.abs() / nu).min(xi)
            } else {
                xi * v.signum()
            };
            z.set(i, j, zv);
        });
        let mmat = {
            let mut t = z.scale(rho);
            t = t.sub(&s);
            t.add(&d_obs)
        };
        let fac = partial_svd(&mmat, mu).unwrap();
        lsv += fac.rank();
        rank = fac.rank();
        let shrunk: Vec<f64> = fac
            .singular_values
            .iter()
            .map(|&sig| sig - rho * sig / sig.max(rho + mu))
            .collect();
        l = {
            let mut f = fac.clone();
            f.singular_values = shrunk.clone();
            f.reconstruct()
        };
        let w = {
            let mut f = fac.clone();
            f.singular_values = shrunk.iter().map(|&v| (v / mu).min(1.0)).collect();
            f.reconstruct()
        };
        let b = {
            let mut t = w.scale(rho);
            t = t.sub(&l);
            t.add(&d_obs)
        };
        s = b.clone();
        mask.for_each(|i, j| {
            let v = b.get(i, j);
            let sv = if nu > 0.0 {
                v.signum() * (nu / (nu + rho) * v.abs()).max(v.abs() - rho * xi)
            } else {
                v.signum() * (v.abs() - rho * xi).max(0.0)
            };
            s.set(i, j, sv);
        });
        let infeas = l.add(&s).sub(&d_obs).frobenius_norm() / denom;
        iters += 1;
        if infeas < 1e-5 {
            break;
        }
        rho *= 2.0 / 3.0;
    }
    let sparse = project_mask(&s, mask).unwrap();
    let e = recovery_errors(&l, &sparse, gt).unwrap();
    println!(
        "nu = {nu_scale:>5} * rho: iters={iters} rank={rank} lsv={lsv} relL={:.3e} relS={:.3e}",
        e.rel_l, e.rel_s
    );
}

fn main() {
    let n: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(500);
    let inst = gen_rpcp_missing(n, 0.05, 0.05, 0.9, 1).unwrap();
    for s in [1.0, 0.3, 0.1, 0.01, 0.0] {
        run(&inst, s);
    }
}
