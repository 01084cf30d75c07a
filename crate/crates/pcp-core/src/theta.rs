//! Scalar root searches over sorted-magnitude breakpoints.
//!
//! [`find_theta`] solves `phi(theta) = delta` for the constraint multiplier of
//! the proximal subproblem, where over the observed magnitudes `a_i`
//!
//! ```text
//! phi(theta)^2 = sum_i min(xi/theta, a_i/(1 + rho theta))^2 .
//! ```
//!
//! `phi` is strictly decreasing and piecewise smooth with breakpoints
//! `theta_j = 1/(a_(j)/xi - rho)` induced by the sorted magnitudes. Prefix
//! sums of squares make each piece evaluable in O(1); a binary search over
//! the breakpoints brackets the root and a safeguarded bisection-Newton
//! iteration (or, optionally, the closed-form quartic) finishes inside the
//! piece. Total cost is O(N log N), dominated by the caller's sort.

use crate::error::{Error, Result};

/// Direct O(N) evaluation of `phi(theta)`; the independent route used to
/// cross-check the prefix-sum evaluation.
pub fn phi_value(magnitudes: &[f64], xi: f64, rho: f64, theta: f64) -> f64 {
    if theta <= 0.0 {
        return magnitudes.iter().map(|&a| a * a).sum::<f64>().sqrt();
    }
    let cap = xi / theta;
    let scale = 1.0 / (1.0 + rho * theta);
    magnitudes
        .iter()
        .map(|&a| {
            let v = cap.min(a * scale);
            v * v
        })
        .sum::<f64>()
        .sqrt()
}

/// Breakpoint data for one search: ascending magnitudes plus prefix sums of
/// squares (`prefix[j]` = sum of the smallest `j` squared magnitudes).
struct Breakpoints<'a> {
    a: &'a [f64],
    prefix: Vec<f64>,
    xi: f64,
    rho: f64,
}

impl<'a> Breakpoints<'a> {
    fn new(a: &'a [f64], xi: f64, rho: f64) -> Self {
        let mut prefix = Vec::with_capacity(a.len() + 1);
        let mut acc = 0.0;
        prefix.push(0.0);
        for &v in a {
            acc += v * v;
            prefix.push(acc);
        }
        Self { a, prefix, xi, rho }
    }

    fn len(&self) -> usize {
        self.a.len()
    }

    fn norm(&self) -> f64 {
        self.prefix[self.len()].sqrt()
    }

    /// `theta_j` for `1 <= j <= N`; positive only when `a_(j) > rho xi`.
    fn theta_at(&self, j: usize) -> f64 {
        let inv = self.a[j - 1] / self.xi - self.rho;
        1.0 / inv
    }

    /// `phi` restricted to the piece where the `j` smallest magnitudes sit in
    /// the data branch and the remaining `N - j` are capped.
    fn phi_piece(&self, j: usize, theta: f64) -> f64 {
        let shrink = 1.0 / (1.0 + self.rho * theta);
        let cap = self.xi / theta;
        (self.prefix[j] * shrink * shrink + (self.len() - j) as f64 * cap * cap).sqrt()
    }

    /// `phi(theta_j)`, with the `theta -> infinity` limit 0 at `j = kbar`.
    fn phi_at_breakpoint(&self, j: usize, kbar: usize) -> f64 {
        if j <= kbar {
            0.0
        } else {
            self.phi_piece(j, self.theta_at(j))
        }
    }
}

/// Solves `phi(theta) = delta` over sorted magnitudes (ascending).
///
/// Returns 0 when the magnitudes already fit in the ball (`||a|| <= delta`);
/// otherwise the unique positive root, located to the relative accuracy
/// `|phi(theta) - delta| <= tol * delta` (so the subproblem solution sits on
/// the ball to the same relative precision).
pub fn find_theta(
    magnitudes_sorted: &[f64],
    xi: f64,
    rho: f64,
    delta: f64,
    tol: f64,
) -> Result<f64> {
    if !(xi > 0.0) || !(rho > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "xi and rho must be positive, got xi={xi}, rho={rho}"
        )));
    }
    if !(delta > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "find_theta requires delta > 0, got {delta}"
        )));
    }
    debug_assert!(
        magnitudes_sorted.windows(2).all(|w| w[0] <= w[1]),
        "magnitudes must be sorted ascending"
    );

    let bp = Breakpoints::new(magnitudes_sorted, xi, rho);
    let n = bp.len();
    if bp.norm() <= delta {
        return Ok(0.0); // Case 1: already feasible, constraint inactive.
    }

    // Breakpoints with nonpositive 1/theta (a_(j) <= rho xi) never cap.
    let kbar = magnitudes_sorted.partition_point(|&v| v <= rho * xi);
    if kbar == n {
        // Every entry stays in the data branch for all theta.
        return Ok((bp.norm() / delta - 1.0) / rho);
    }

    debug_assert!(
        (kbar..n).all(|j| bp.phi_at_breakpoint(j, kbar) <= bp.phi_at_breakpoint(j + 1, kbar) + 1e-12),
        "phi at breakpoints must be nondecreasing in j"
    );

    // Largest j in [kbar, n] with phi(theta_j) <= delta. j = kbar always
    // qualifies (phi -> 0 as theta -> infinity).
    let mut lo_j = kbar;
    let mut hi_j = n;
    while lo_j < hi_j {
        let mid = (lo_j + hi_j + 1) / 2;
        if bp.phi_at_breakpoint(mid, kbar) <= delta {
            lo_j = mid;
        } else {
            hi_j = mid - 1;
        }
    }
    let j_star = lo_j;

    // The located piece must bracket delta.
    let upper_phi = if j_star == n {
        bp.norm() // phi(0)
    } else {
        bp.phi_at_breakpoint(j_star + 1, kbar)
    };
    if bp.phi_at_breakpoint(j_star, kbar) > delta || upper_phi <= delta {
        return Err(Error::ThetaSearchFailure(format!(
            "breakpoint bracket does not enclose delta: phi(theta_{j_star}) = {}, next = {}, delta = {delta}",
            bp.phi_at_breakpoint(j_star, kbar),
            upper_phi
        )));
    }

    if j_star == n {
        // Final piece has no capped entries.
        return Ok((bp.norm() / delta - 1.0) / rho);
    }

    let p = bp.prefix[j_star];
    let c = (n - j_star) as f64;
    let theta_lo = bp.theta_at(j_star + 1); // phi > delta here
    let theta_hi = if j_star == kbar {
        // Unbounded piece; phi(theta) <= sqrt(P/rho^2 + C xi^2)/theta gives a
        // guaranteed upper bracket.
        let bound = (p / (rho * rho) + c * xi * xi).sqrt() / delta;
        bound.max(theta_lo * (1.0 + 1e-12))
    } else {
        bp.theta_at(j_star)
    };

    solve_piece(p, c, xi, rho, delta, theta_lo, theta_hi, tol)
}

/// Safeguarded bisection-Newton for `phi_piece(theta) = delta` on a bracket
/// where `phi(lo) > delta >= phi(hi)`.
#[allow(clippy::too_many_arguments)]
fn solve_piece(
    p: f64,
    c: f64,
    xi: f64,
    rho: f64,
    delta: f64,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
) -> Result<f64> {
    let phi = |theta: f64| -> f64 {
        let shrink = 1.0 / (1.0 + rho * theta);
        let cap = xi / theta;
        (p * shrink * shrink + c * cap * cap).sqrt()
    };
    let target = tol.max(f64::EPSILON) * delta;
    let mut theta = 0.5 * (lo + hi);
    for _ in 0..200 {
        let value = phi(theta);
        let err = value - delta;
        if err.abs() <= target {
            return Ok(theta);
        }
        if err > 0.0 {
            lo = theta;
        } else {
            hi = theta;
        }
        // Newton step on phi(theta) - delta.
        let shrink = 1.0 / (1.0 + rho * theta);
        let dphi = (-rho * p * shrink * shrink * shrink - c * xi * xi / (theta * theta * theta)) / value;
        let newton = theta - err / dphi;
        theta = if newton.is_finite() && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if hi - lo <= f64::EPSILON * hi {
            let value = phi(theta);
            if (value - delta).abs() <= target.max(8.0 * f64::EPSILON * delta) {
                return Ok(theta);
            }
            break;
        }
    }
    let achieved = (phi(theta) - delta).abs();
    if achieved <= target * 4.0 {
        return Ok(theta);
    }
    Err(Error::ThetaSearchFailure(format!(
        "root refinement stalled: |phi - delta| = {achieved:.3e}, target {target:.3e}, bracket [{lo:.6e}, {hi:.6e}]"
    )))
}

/// Closed-form fast path: the piece equation
/// `P theta^2 + C xi^2 (1 + rho theta)^2 = delta^2 theta^2 (1 + rho theta)^2`
/// is a quartic in `theta`; this solves it by Ferrari's method and applies a
/// short unguarded Newton polish. Returns `None` when no real root lands in
/// the bracket, in which case callers fall back to the iterative path.
pub fn find_theta_quartic(
    magnitudes_sorted: &[f64],
    xi: f64,
    rho: f64,
    delta: f64,
) -> Option<f64> {
    if !(xi > 0.0 && rho > 0.0 && delta > 0.0) {
        return None;
    }
    let bp = Breakpoints::new(magnitudes_sorted, xi, rho);
    let n = bp.len();
    if bp.norm() <= delta {
        return Some(0.0);
    }
    let kbar = magnitudes_sorted.partition_point(|&v| v <= rho * xi);
    if kbar == n {
        return Some((bp.norm() / delta - 1.0) / rho);
    }
    let mut j_star = kbar;
    for j in (kbar..=n).rev() {
        if bp.phi_at_breakpoint(j, kbar) <= delta {
            j_star = j;
            break;
        }
    }
    if j_star == n {
        return Some((bp.norm() / delta - 1.0) / rho);
    }
    let p = bp.prefix[j_star];
    let c = (n - j_star) as f64;
    let lo = bp.theta_at(j_star + 1);
    let hi = if j_star == kbar {
        (p / (rho * rho) + c * xi * xi).sqrt() / delta
    } else {
        bp.theta_at(j_star)
    };

    // delta^2 rho^2 t^4 + 2 delta^2 rho t^3 + (delta^2 - P - C xi^2 rho^2) t^2
    //   - 2 C xi^2 rho t - C xi^2 = 0
    let d2 = delta * delta;
    let coeffs = [
        -c * xi * xi,
        -2.0 * c * xi * xi * rho,
        d2 - p - c * xi * xi * rho * rho,
        2.0 * d2 * rho,
        d2 * rho * rho,
    ];
    let roots = quartic_real_roots(coeffs)?;
    let slack = 1e-6 * hi.max(1.0);
    let mut best: Option<f64> = None;
    for r in roots {
        if r > 0.0 && r >= lo - slack && r <= hi + slack {
            let d = |cand: f64| (bp.phi_piece(j_star, cand) - delta).abs();
            best = match best {
                Some(b) if d(b) <= d(r) => Some(b),
                _ => Some(r),
            };
        }
    }
    let mut theta = best?;
    // Short polish; deliberately unguarded so a wrong Ferrari root is not
    // silently repaired.
    for _ in 0..3 {
        let value = bp.phi_piece(j_star, theta);
        let shrink = 1.0 / (1.0 + rho * theta);
        let dphi =
            (-rho * p * shrink * shrink * shrink - c * xi * xi / (theta * theta * theta)) / value;
        let next = theta - (value - delta) / dphi;
        if next.is_finite() && next > 0.0 {
            theta = next;
        }
    }
    Some(theta)
}

/// Real roots of `c[4] x^4 + c[3] x^3 + c[2] x^2 + c[1] x + c[0] = 0`
/// (Ferrari resolvent-cubic construction).
fn quartic_real_roots(c: [f64; 5]) -> Option<Vec<f64>> {
    let c4 = c[4];
    if c4 == 0.0 {
        return None;
    }
    let a = c[3] / c4;
    let b = c[2] / c4;
    let cc = c[1] / c4;
    let d = c[0] / c4;

    // Depress: x = y - a/4.
    let a2 = a * a;
    let p = b - 3.0 * a2 / 8.0;
    let q = cc - a * b / 2.0 + a2 * a / 8.0;
    let r = d - a * cc / 4.0 + a2 * b / 16.0 - 3.0 * a2 * a2 / 256.0;

    let shift = a / 4.0;
    let mut roots = Vec::with_capacity(4);
    if q.abs() < 1e-14 * (1.0 + p.abs() + r.abs()) {
        // Biquadratic.
        let disc = p * p - 4.0 * r;
        if disc < 0.0 {
            return Some(roots);
        }
        for s in [(-p + disc.sqrt()) / 2.0, (-p - disc.sqrt()) / 2.0] {
            if s >= 0.0 {
                roots.push(s.sqrt() - shift);
                roots.push(-s.sqrt() - shift);
            }
        }
        return Some(roots);
    }

    // Resolvent cubic z^3 - p z^2 - 4 r z + (4 p r - q^2) = 0; any real root
    // with z > p splits the quartic into two quadratics.
    let z = cubic_real_roots(1.0, -p, -4.0 * r, 4.0 * p * r - q * q)
        .into_iter()
        .filter(|&z| z - p > 1e-300)
        .fold(f64::NAN, f64::max);
    if !z.is_finite() {
        return None;
    }
    let u = (z - p).sqrt();
    let half_z = z / 2.0;
    let q_term = q / (2.0 * u);
    for (lin, con) in [(u, half_z - q_term), (-u, half_z + q_term)] {
        // y^2 + lin*y + con = 0
        let disc = lin * lin - 4.0 * con;
        if disc >= 0.0 {
            let s = disc.sqrt();
            roots.push((-lin + s) / 2.0 - shift);
            roots.push((-lin - s) / 2.0 - shift);
        }
    }
    Some(roots)
}

/// Real roots of `a x^3 + b x^2 + c x + d = 0`.
fn cubic_real_roots(a: f64, b: f64, c: f64, d: f64) -> Vec<f64> {
    let b = b / a;
    let c = c / a;
    let d = d / a;
    // Depress: x = t - b/3.
    let p = c - b * b / 3.0;
    let q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
    let shift = b / 3.0;
    let disc = q * q / 4.0 + p * p * p / 27.0;
    if disc > 0.0 {
        let s = disc.sqrt();
        let u = (-q / 2.0 + s).cbrt();
        let v = (-q / 2.0 - s).cbrt();
        vec![u + v - shift]
    } else if p == 0.0 && q == 0.0 {
        vec![-shift]
    } else {
        // Three real roots: trigonometric form.
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
        let phase = arg.acos() / 3.0;
        (0..3)
            .map(|k| m * (phase - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos() - shift)
            .collect()
    }
}

/// The shrinkage level `t >= 0` with `|| min(|a|, t) ||_2 = delta`, for
/// magnitudes sorted ascending with `||a||_2 > delta`. Closed form per piece:
/// on `[a_(j), a_(j+1))`, `t^2 = (delta^2 - prefix_j) / (N - j)`.
pub fn shrink_level_for_norm(magnitudes_sorted: &[f64], delta: f64) -> Result<f64> {
    if !(delta >= 0.0) {
        return Err(Error::InvalidConfig(format!(
            "delta must be nonnegative, got {delta}"
        )));
    }
    debug_assert!(magnitudes_sorted.windows(2).all(|w| w[0] <= w[1]));
    let n = magnitudes_sorted.len();
    let mut prefix = Vec::with_capacity(n + 1);
    let mut acc = 0.0;
    prefix.push(0.0);
    for &v in magnitudes_sorted {
        acc += v * v;
        prefix.push(acc);
    }
    if prefix[n].sqrt() <= delta {
        return Err(Error::InvalidConfig(
            "residual already fits in the ball; no shrink level needed".into(),
        ));
    }
    // psi(t)^2 = prefix_j + (N - j) t^2 on the j-th piece, increasing in t.
    let psi_sq_at = |j: usize| prefix[j] + (n - j) as f64 * magnitudes_sorted[j - 1].powi(2);
    let delta_sq = delta * delta;
    let (mut lo, mut hi) = (0usize, n);
    while lo < hi {
        let mid = (lo + hi + 1) / 2;
        if psi_sq_at(mid) <= delta_sq {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    let j_star = lo;
    Ok(((delta_sq - prefix[j_star]) / (n - j_star) as f64).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pseudo_uniform(seed: &mut u64) -> f64 {
        *seed ^= *seed << 13;
        *seed ^= *seed >> 7;
        *seed ^= *seed << 17;
        (*seed >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    #[test]
    fn feasible_data_gives_zero() {
        let a = vec![0.1, 0.2];
        let theta = find_theta(&a, 0.5, 1.0, 10.0, 1e-10).unwrap();
        assert_eq!(theta, 0.0);
    }

    #[test]
    fn all_data_branch_closed_form() {
        // Every magnitude below rho * xi: theta* = ((||a||/delta) - 1)/rho.
        let a = vec![0.01, 0.02, 0.05];
        let (xi, rho, delta) = (1.0, 0.2, 0.03);
        assert!(a.iter().all(|&v| v <= rho * xi));
        let theta = find_theta(&a, xi, rho, delta, 1e-12).unwrap();
        let norm = a.iter().map(|v| v * v).sum::<f64>().sqrt();
        let expect = (norm / delta - 1.0) / rho;
        assert!((theta - expect).abs() <= 1e-12 * expect);
        assert!((phi_value(&a, xi, rho, theta) - delta).abs() < 1e-12);
    }

    #[test]
    fn random_cases_match_global_bisection() {
        let mut seed = 0xDEADBEEFu64;
        for trial in 0..300 {
            let n = 1 + (pseudo_uniform(&mut seed) * 40.0) as usize;
            let mut a: Vec<f64> = (0..n).map(|_| pseudo_uniform(&mut seed) * 3.0).collect();
            a.sort_by(|x, y| x.partial_cmp(y).unwrap());
            let xi = 0.05 + pseudo_uniform(&mut seed);
            let rho = 0.05 + pseudo_uniform(&mut seed) * 2.0;
            let norm = a.iter().map(|v| v * v).sum::<f64>().sqrt();
            let delta = norm * (0.05 + 0.9 * pseudo_uniform(&mut seed));
            if delta <= 0.0 {
                continue;
            }
            let theta = find_theta(&a, xi, rho, delta, 1e-12).unwrap();
            assert!(
                (phi_value(&a, xi, rho, theta) - delta).abs() <= 1e-9 * delta.max(1.0),
                "trial {trial}: phi mismatch"
            );
            // Bisection oracle on the direct evaluation.
            let (mut lo, mut hi) = (1e-12, 1e12);
            for _ in 0..220 {
                let mid = 0.5 * (lo + hi);
                if phi_value(&a, xi, rho, mid) > delta {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let oracle = 0.5 * (lo + hi);
            assert!(
                (theta - oracle).abs() <= 1e-9 * oracle.max(1.0),
                "trial {trial}: theta {theta} vs oracle {oracle}"
            );
        }
    }

    #[test]
    fn quartic_path_agrees_with_iterative() {
        let mut seed = 0xABCDu64;
        let mut used = 0;
        for _ in 0..300 {
            let n = 2 + (pseudo_uniform(&mut seed) * 30.0) as usize;
            let mut a: Vec<f64> = (0..n).map(|_| pseudo_uniform(&mut seed) * 2.0).collect();
            a.sort_by(|x, y| x.partial_cmp(y).unwrap());
            let xi = 0.1 + pseudo_uniform(&mut seed) * 0.5;
            let rho = 0.1 + pseudo_uniform(&mut seed);
            let norm = a.iter().map(|v| v * v).sum::<f64>().sqrt();
            let delta = norm * (0.1 + 0.8 * pseudo_uniform(&mut seed));
            let iterative = find_theta(&a, xi, rho, delta, 1e-12).unwrap();
            if let Some(fast) = find_theta_quartic(&a, xi, rho, delta) {
                used += 1;
                assert!(
                    (fast - iterative).abs() <= 1e-9 * iterative.max(1.0),
                    "quartic {fast} vs iterative {iterative}"
                );
            }
        }
        assert!(used > 250, "quartic path produced roots in only {used} cases");
    }

    #[test]
    fn shrink_level_hits_requested_norm() {
        let mut seed = 77u64;
        for _ in 0..200 {
            let n = 1 + (pseudo_uniform(&mut seed) * 30.0) as usize;
            let mut a: Vec<f64> = (0..n).map(|_| pseudo_uniform(&mut seed) * 4.0).collect();
            a.sort_by(|x, y| x.partial_cmp(y).unwrap());
            let norm = a.iter().map(|v| v * v).sum::<f64>().sqrt();
            let delta = norm * 0.6 * pseudo_uniform(&mut seed);
            let t = shrink_level_for_norm(&a, delta).unwrap();
            let achieved = a
                .iter()
                .map(|&v| v.min(t).powi(2))
                .sum::<f64>()
                .sqrt();
            assert!(
                (achieved - delta).abs() <= 1e-10 * delta.max(1.0),
                "achieved {achieved} target {delta}"
            );
        }
    }
}
