//! Problem instances, synthetic generators and their on-disk container.
//!
//! Random instances follow the standard recipe: `L0 = U V^T` with standard
//! Gaussian factors, a uniformly drawn sparse support with entries uniform on
//! `[-sqrt(8r/pi), sqrt(8r/pi)]` (so sparse and low-rank entries share the
//! same expected magnitude `sqrt(2r/pi)`), optional dense Gaussian noise
//! calibrated from an SNR target, and an observation set drawn uniformly
//! without replacement.
//!
//! With partial observation the sparse support is drawn inside the observed
//! set: corruptions of unobserved entries would be invisible to the data and
//! unrecoverable by any method, and the reference relS figures are only
//! attainable with observable corruptions.
//!
//! Draw order is fixed and documented so instances are bit-reproducible from
//! `(params, seed)`: `U` row-major, `V` row-major, then for full observation
//! the sparse support over all entries, sparse values (support in sorted
//! order) and optional noise (row-major); for partial observation the
//! observed set first, then the support within it, then sparse values.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io;
use crate::mask::ObservationMask;
use crate::matrix::DenseMatrix;
use crate::rng::{DeterministicRng, RNG_ID};

/// Planted decomposition underlying a synthetic instance.
#[derive(Debug, Clone)]
pub struct GroundTruth {
    pub low_rank: DenseMatrix,
    pub sparse: DenseMatrix,
    /// Dense noise component; `None` for noiseless instances.
    pub noise: Option<DenseMatrix>,
    pub rank: usize,
    pub support_size: usize,
}

/// Generator provenance recorded in instance manifests.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorParams {
    RpcpMissing {
        n: usize,
        c_r: f64,
        c_p: f64,
        sample_ratio: f64,
        seed: u64,
    },
    Spcp {
        n: usize,
        c_r: f64,
        c_p: f64,
        /// `None` encodes the noiseless (infinite SNR) sentinel.
        snr_db: Option<f64>,
        seed: u64,
    },
}

impl GeneratorParams {
    /// Stable identifier shared by every run on the same instance.
    pub fn instance_id(&self) -> String {
        match self {
            GeneratorParams::RpcpMissing {
                n,
                c_r,
                c_p,
                sample_ratio,
                seed,
            } => format!("rpcp-n{n}-cr{c_r}-cp{c_p}-sr{sample_ratio}-seed{seed}"),
            GeneratorParams::Spcp {
                n,
                c_r,
                c_p,
                snr_db,
                seed,
            } => match snr_db {
                Some(snr) => format!("spcp-n{n}-cr{c_r}-cp{c_p}-snr{snr}-seed{seed}"),
                None => format!("spcp-n{n}-cr{c_r}-cp{c_p}-noiseless-seed{seed}"),
            },
        }
    }
}

/// A decomposition problem: observed data, mask, noise bound and weight.
#[derive(Debug, Clone)]
pub struct Instance {
    /// Full data matrix; entries off the mask are ignored by all solvers.
    pub data: DenseMatrix,
    pub mask: ObservationMask,
    /// Noise-ball radius (`0` for the exact-constraint problems).
    pub delta: f64,
    /// Sparsity weight.
    pub xi: f64,
    /// Noise standard deviation when known; drives the PSPG stopping rule.
    pub noise_level: Option<f64>,
    pub ground_truth: Option<GroundTruth>,
    pub origin: Option<GeneratorParams>,
}

fn round_at_least_one(x: f64) -> usize {
    (x.round() as usize).max(1)
}

fn validate_fraction(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v < 1.0) {
        return Err(Error::InvalidConfig(format!("{name} must lie in (0, 1), got {v}")));
    }
    Ok(())
}

fn validate_rank_sparsity(n: usize, c_r: f64, c_p: f64) -> Result<(usize, usize)> {
    validate_fraction("c_r", c_r)?;
    validate_fraction("c_p", c_p)?;
    if c_r * (n as f64) < 1.0 {
        return Err(Error::InvalidConfig(format!("c_r * n = {} rounds below one", c_r * n as f64)));
    }
    if c_p * ((n * n) as f64) < 1.0 {
        return Err(Error::InvalidConfig(format!(
            "c_p * n^2 = {} rounds below one",
            c_p * (n * n) as f64
        )));
    }
    let r = round_at_least_one(c_r * n as f64);
    let p = round_at_least_one(c_p * (n * n) as f64).min(n * n);
    Ok((r, p))
}

fn draw_gaussian_factors(n: usize, r: usize, rng: &mut DeterministicRng) -> DenseMatrix {
    let u = DenseMatrix::from_fn(n, r, |_, _| rng.normal());
    let v = DenseMatrix::from_fn(n, r, |_, _| rng.normal());
    u.matmul(&v.transpose())
}

/// Sparse matrix on the given (sorted) support with entries uniform on
/// `[-sqrt(8r/pi), sqrt(8r/pi)]`, drawn in support order.
fn draw_sparse_on(
    n: usize,
    r: usize,
    support: &[usize],
    rng: &mut DeterministicRng,
) -> DenseMatrix {
    let amplitude = (8.0 * r as f64 / std::f64::consts::PI).sqrt();
    let mut sparse = DenseMatrix::zeros(n, n);
    for &lin in support {
        let (i, j) = (lin / n, lin % n);
        sparse.set(i, j, rng.uniform_symmetric(amplitude));
    }
    sparse
}

/// Random noiseless instance with missing observations:
/// `D = L0 + S0`, `|Omega| = round(sample_ratio * n^2)` drawn uniformly,
/// the sparse support drawn within the observed set, `delta = 0`,
/// `xi = 1/sqrt(n)`.
pub fn gen_rpcp_missing(
    n: usize,
    c_r: f64,
    c_p: f64,
    sample_ratio: f64,
    seed: u64,
) -> Result<Instance> {
    if !(sample_ratio > 0.0 && sample_ratio <= 1.0) {
        return Err(Error::InvalidConfig(format!(
            "sample_ratio must lie in (0, 1], got {sample_ratio}"
        )));
    }
    let (r, p) = validate_rank_sparsity(n, c_r, c_p)?;
    let total = n * n;
    let observed = round_at_least_one(sample_ratio * total as f64).min(total);
    if p > observed {
        return Err(Error::InvalidConfig(format!(
            "sparse support ({p}) exceeds the observed set ({observed}); corruptions must be observable"
        )));
    }

    let mut rng = DeterministicRng::from_seed(seed);
    let low_rank = draw_gaussian_factors(n, r, &mut rng);

    let (mask, support) = if observed == total {
        (ObservationMask::full(n, n), rng.distinct_below(total, p))
    } else {
        let omega = rng.distinct_below(total, observed);
        let inside = rng.distinct_below(observed, p);
        let support: Vec<usize> = inside.into_iter().map(|k| omega[k]).collect();
        let mask = ObservationMask::from_indices(
            n,
            n,
            omega.iter().map(|&lin| (lin / n, lin % n)).collect(),
        )?;
        (mask, support)
    };
    let sparse = draw_sparse_on(n, r, &support, &mut rng);

    Ok(Instance {
        data: low_rank.add(&sparse),
        mask,
        delta: 0.0,
        xi: 1.0 / (n as f64).sqrt(),
        noise_level: None,
        ground_truth: Some(GroundTruth {
            low_rank,
            sparse,
            noise: None,
            rank: r,
            support_size: p,
        }),
        origin: Some(GeneratorParams::RpcpMissing {
            n,
            c_r,
            c_p,
            sample_ratio,
            seed,
        }),
    })
}

/// Noise level reaching a target SNR (dB):
/// `rho = sqrt((c_r n + c_p 8r/(3 pi)) / 10^(snr/10))` with `r = round(c_r n)`.
pub fn rho_from_snr(n: usize, c_r: f64, c_p: f64, snr_db: f64) -> f64 {
    let r = round_at_least_one(c_r * n as f64) as f64;
    let signal_power = c_r * n as f64 + c_p * 8.0 * r / (3.0 * std::f64::consts::PI);
    (signal_power / 10f64.powf(snr_db / 10.0)).sqrt()
}

/// Inverse of [`rho_from_snr`]: the SNR (dB) a noise level corresponds to.
pub fn snr_from_rho(n: usize, c_r: f64, c_p: f64, rho: f64) -> f64 {
    let r = round_at_least_one(c_r * n as f64) as f64;
    let signal_power = c_r * n as f64 + c_p * 8.0 * r / (3.0 * std::f64::consts::PI);
    10.0 * (signal_power / (rho * rho)).log10()
}

/// Random noisy instance with full observation: `D = L0 + S0 + N0` with
/// `N0 ~ rho * N(0, 1)` i.i.d., `delta = sqrt(n + sqrt(8 n)) * rho`,
/// `xi = 1/sqrt(n)`. An infinite `snr_db` is the noiseless sentinel: no
/// noise is drawn and `delta = 0`, reproducing the missing-data generator at
/// full sampling bit for bit.
pub fn gen_spcp(n: usize, c_r: f64, c_p: f64, snr_db: f64, seed: u64) -> Result<Instance> {
    if snr_db.is_nan() {
        return Err(Error::InvalidConfig("snr_db must not be NaN".into()));
    }
    let (r, p) = validate_rank_sparsity(n, c_r, c_p)?;
    let mut rng = DeterministicRng::from_seed(seed);
    let low_rank = draw_gaussian_factors(n, r, &mut rng);
    let support = rng.distinct_below(n * n, p);
    let sparse = draw_sparse_on(n, r, &support, &mut rng);

    let noiseless = snr_db.is_infinite() && snr_db > 0.0;
    let (data, noise, delta, noise_level) = if noiseless {
        (low_rank.add(&sparse), None, 0.0, None)
    } else {
        let rho = rho_from_snr(n, c_r, c_p, snr_db);
        let noise = DenseMatrix::from_fn(n, n, |_, _| rho * rng.normal());
        let data = low_rank.add(&sparse).add(&noise);
        let delta = (n as f64 + (8.0 * n as f64).sqrt()).sqrt() * rho;
        (data, Some(noise), delta, Some(rho))
    };

    Ok(Instance {
        data,
        mask: ObservationMask::full(n, n),
        delta,
        xi: 1.0 / (n as f64).sqrt(),
        noise_level,
        ground_truth: Some(GroundTruth {
            low_rank,
            sparse,
            noise,
            rank: r,
            support_size: p,
        }),
        origin: Some(GeneratorParams::Spcp {
            n,
            c_r,
            c_p,
            snr_db: if noiseless { None } else { Some(snr_db) },
            seed,
        }),
    })
}

// ---------------------------------------------------------------------------
// On-disk container: a directory with a JSON manifest, LRSD matrices and a
// mask file.
// ---------------------------------------------------------------------------

const MANIFEST_VERSION: u16 = 1;

#[derive(Debug, Serialize, Deserialize)]
struct GroundTruthManifest {
    rank: usize,
    support_size: usize,
    has_noise: bool,
}

#[derive(Debug, Serialize, Deserialize)]
struct Manifest {
    format_version: u16,
    rows: usize,
    cols: usize,
    xi: f64,
    delta: f64,
    noise_level: Option<f64>,
    rng: Option<String>,
    generator: Option<GeneratorParams>,
    ground_truth: Option<GroundTruthManifest>,
}

/// Writes an instance as a directory: `manifest.json`, `data.lrsd`,
/// `mask.txt` and, when ground truth is present, `gt_low_rank.lrsd`,
/// `gt_sparse.lrsd`, `gt_noise.lrsd`.
pub fn save_instance(instance: &Instance, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    let manifest = Manifest {
        format_version: MANIFEST_VERSION,
        rows: instance.data.rows(),
        cols: instance.data.cols(),
        xi: instance.xi,
        delta: instance.delta,
        noise_level: instance.noise_level,
        rng: instance.origin.as_ref().map(|_| RNG_ID.to_string()),
        generator: instance.origin.clone(),
        ground_truth: instance.ground_truth.as_ref().map(|gt| GroundTruthManifest {
            rank: gt.rank,
            support_size: gt.support_size,
            has_noise: gt.noise.is_some(),
        }),
    };
    fs::write(dir.join("manifest.json"), serde_json::to_vec_pretty(&manifest)?)?;
    io::write_lrsd(&dir.join("data.lrsd"), &instance.data)?;
    io::write_mask(&dir.join("mask.txt"), &instance.mask)?;
    if let Some(gt) = &instance.ground_truth {
        io::write_lrsd(&dir.join("gt_low_rank.lrsd"), &gt.low_rank)?;
        io::write_lrsd(&dir.join("gt_sparse.lrsd"), &gt.sparse)?;
        if let Some(noise) = &gt.noise {
            io::write_lrsd(&dir.join("gt_noise.lrsd"), noise)?;
        }
    }
    Ok(())
}

/// Reads an instance directory written by [`save_instance`]. Fails without
/// partial results on any missing or malformed component.
pub fn load_instance(dir: &Path) -> Result<Instance> {
    let manifest: Manifest = serde_json::from_slice(&fs::read(dir.join("manifest.json"))?)?;
    if manifest.format_version != MANIFEST_VERSION {
        return Err(Error::FormatVersion {
            expected: MANIFEST_VERSION,
            found: manifest.format_version,
        });
    }
    let data = io::read_lrsd(&dir.join("data.lrsd"))?;
    if data.shape() != (manifest.rows, manifest.cols) {
        return Err(Error::Format(format!(
            "manifest says {}x{} but data.lrsd is {}x{}",
            manifest.rows,
            manifest.cols,
            data.rows(),
            data.cols()
        )));
    }
    let mask = io::read_mask(&dir.join("mask.txt"), manifest.rows, manifest.cols)?;
    let ground_truth = match manifest.ground_truth {
        None => None,
        Some(gtm) => {
            let low_rank = io::read_lrsd(&dir.join("gt_low_rank.lrsd"))?;
            let sparse = io::read_lrsd(&dir.join("gt_sparse.lrsd"))?;
            let noise = if gtm.has_noise {
                Some(io::read_lrsd(&dir.join("gt_noise.lrsd"))?)
            } else {
                None
            };
            Some(GroundTruth {
                low_rank,
                sparse,
                noise,
                rank: gtm.rank,
                support_size: gtm.support_size,
            })
        }
    };
    Ok(Instance {
        data,
        mask,
        delta: manifest.delta,
        xi: manifest.xi,
        noise_level: manifest.noise_level,
        ground_truth,
        origin: manifest.generator,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_row_parameters() {
        let inst = gen_rpcp_missing(500, 0.05, 0.05, 0.9, 1).unwrap();
        let gt = inst.ground_truth.as_ref().unwrap();
        assert_eq!(gt.rank, 25);
        assert_eq!(gt.support_size, 12_500);
        assert_eq!(inst.mask.len(), 225_000);
        assert_eq!(inst.delta, 0.0);
        assert!((inst.xi - 1.0 / (500f64).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn full_sample_ratio_gives_full_mask() {
        let inst = gen_rpcp_missing(20, 0.1, 0.05, 1.0, 3).unwrap();
        assert!(inst.mask.is_full());
    }

    #[test]
    fn generators_are_deterministic() {
        let a = gen_rpcp_missing(30, 0.1, 0.1, 0.8, 42).unwrap();
        let b = gen_rpcp_missing(30, 0.1, 0.1, 0.8, 42).unwrap();
        assert_eq!(a.data, b.data);
        assert_eq!(a.mask, b.mask);
        let c = gen_rpcp_missing(30, 0.1, 0.1, 0.8, 43).unwrap();
        assert_ne!(a.data, c.data);
    }

    #[test]
    fn snr_table_values() {
        // 80 dB, n = 500, c_r = c_p = 0.05 -> about 0.5e-3.
        let rho = rho_from_snr(500, 0.05, 0.05, 80.0);
        assert!((rho - 5.1e-4).abs() < 2e-5, "rho {rho}");
        // 45 dB, n = 1500, c_r = c_p = 0.1 -> about 7.1e-2.
        let rho = rho_from_snr(1500, 0.1, 0.1, 45.0);
        assert!((rho - 7.1e-2).abs() < 2e-3, "rho {rho}");
        // Monotone vanishing as SNR grows.
        let mut last = f64::INFINITY;
        for snr in [10.0, 30.0, 60.0, 120.0] {
            let r = rho_from_snr(500, 0.05, 0.05, snr);
            assert!(r < last);
            last = r;
        }
        // Round trip within 1e-9 dB.
        let back = snr_from_rho(500, 0.05, 0.05, rho_from_snr(500, 0.05, 0.05, 47.3));
        assert!((back - 47.3).abs() < 1e-9);
    }

    #[test]
    fn spcp_delta_formula() {
        let inst = gen_spcp(500, 0.05, 0.05, 80.0, 9).unwrap();
        let rho = inst.noise_level.unwrap();
        let expect = (500f64 + (8.0 * 500f64).sqrt()).sqrt() * rho;
        assert!((inst.delta - expect).abs() < 1e-12);
        assert!((inst.delta / rho - 23.73).abs() < 0.01);
    }

    #[test]
    fn infinite_snr_collapses_to_noiseless_generator() {
        let spcp = gen_spcp(25, 0.2, 0.1, f64::INFINITY, 5).unwrap();
        let rpcp = gen_rpcp_missing(25, 0.2, 0.1, 1.0, 5).unwrap();
        assert_eq!(spcp.data, rpcp.data);
        assert_eq!(spcp.delta, 0.0);
        assert!(spcp.noise_level.is_none());
        assert!(spcp.mask.is_full());
        assert!(spcp.ground_truth.as_ref().unwrap().noise.is_none());
    }

    #[test]
    fn support_size_is_exact() {
        let inst = gen_rpcp_missing(40, 0.1, 0.1, 0.9, 11).unwrap();
        let gt = inst.ground_truth.as_ref().unwrap();
        let nnz = gt.sparse.as_slice().iter().filter(|&&v| v != 0.0).count();
        assert_eq!(nnz, gt.support_size);
        assert_eq!(nnz, 160);
    }

    #[test]
    fn sparse_support_lies_in_the_observed_set() {
        let inst = gen_rpcp_missing(40, 0.1, 0.05, 0.7, 2).unwrap();
        let gt = inst.ground_truth.as_ref().unwrap();
        for i in 0..40 {
            for j in 0..40 {
                if gt.sparse.get(i, j) != 0.0 {
                    assert!(inst.mask.contains(i, j), "unobservable corruption at ({i}, {j})");
                }
            }
        }
    }

    #[test]
    fn rejects_degenerate_parameters() {
        assert!(gen_rpcp_missing(10, 0.01, 0.1, 0.5, 0).is_err()); // c_r n < 1
        assert!(gen_rpcp_missing(10, 0.1, 0.001, 0.5, 0).is_err()); // c_p n^2 < 1
        assert!(gen_rpcp_missing(10, 0.1, 0.1, 0.0, 0).is_err());
        assert!(gen_rpcp_missing(10, 0.1, 0.1, 1.5, 0).is_err());
        assert!(gen_spcp(10, 0.5, 0.1, f64::NAN, 0).is_err());
    }
}
