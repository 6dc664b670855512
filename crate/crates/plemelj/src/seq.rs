//! Analysis of limit sequences sampled at geometric parameters.
//!
//! Two consumers: Richardson extrapolation of excision traces (values at
//! epsilon = 2^-k approaching a principal value), and convergence/divergence
//! classification of tail-integral sequences I_k = int_{2^-k}^1 g(t) dt.

use num_complex::Complex64;

/// Tail depths delta = 2^-k probed by the Dini and existence tests.
pub const TAIL_DEPTHS: std::ops::RangeInclusive<u32> = 3..=20;

/// Result of a power-law extrapolation of a geometric trace.
#[derive(Debug, Clone, Copy)]
pub struct PowerExtrapolation {
    pub limit: Complex64,
    /// Per-step decrement ratio rho = 2^-beta of the fitted tail.
    pub ratio: f64,
    /// Relative inconsistency of the ratio across the fitting window.
    pub fit_residual: f64,
}

/// Fit v_k = A + C * rho^k to the last four trace values (consecutive,
/// geometric parameter) and extrapolate to A. Returns `None` when fewer
/// than four points are available, the decrements have stalled at rounding
/// level, or the fitted ratio is not a contraction.
pub fn power_extrapolate(values: &[Complex64]) -> Option<PowerExtrapolation> {
    if values.len() < 4 {
        return None;
    }
    let v = &values[values.len() - 4..];
    let d1 = v[1] - v[0];
    let d2 = v[2] - v[1];
    let d3 = v[3] - v[2];
    let scale = v[3].norm().max(1.0);
    if d2.norm() <= 1e-15 * scale || d1.norm() <= 1e-15 * scale {
        // decrements at rounding level: the raw value is already the limit
        return Some(PowerExtrapolation {
            limit: v[3],
            ratio: 0.0,
            fit_residual: 0.0,
        });
    }
    // least-squares real ratio of consecutive complex decrements
    let r1 = (d2 * d1.conj()).re / d1.norm_sqr();
    let r2 = (d3 * d2.conj()).re / d2.norm_sqr();
    let fit_residual = (r2 - r1).abs() / (r1.abs() + r2.abs()).max(1e-300);
    let rho = r2;
    // ratios near 1 mean a slower-than-power tail (log-type); extrapolating
    // those with a power model silently undercorrects, so refuse
    if !(0.0..=0.9).contains(&rho) {
        return None;
    }
    let limit = v[3] + d3 * (rho / (1.0 - rho));
    Some(PowerExtrapolation {
        limit,
        ratio: rho,
        fit_residual,
    })
}

/// Verdict on a non-decreasing tail sequence I_k (k the geometric depth).
#[derive(Debug, Clone, PartialEq)]
pub enum TailVerdict {
    /// The sequence settles; `limit` extrapolates the remaining tail.
    Convergent { limit: f64 },
    /// The sequence grows without bound at `rate` per unit depth.
    Divergent { rate: f64 },
    /// Neither test is conclusive (e.g. borderline logarithmic behavior).
    Inconclusive,
}

/// Classify a tail-integral sequence sampled at depths `k0, k0+1, ...`.
///
/// Convergence is declared on either of two tests:
/// (a) the last three increments each shrink by a factor >= 1.5, or
/// (b) the increments decay like k^-p with fitted p >= 1.25, which covers
///     log-modulus tails whose increment ratios tend to 1 from above
///     (1/log^2 gives p near 2) while excluding the divergent 1/log case
///     (p near 1).
/// Divergence is declared when increments stop decaying (p <= 0.5) while
/// staying above rounding noise.
pub fn classify_tail(depth0: usize, values: &[f64]) -> TailVerdict {
    let n = values.len();
    if n < 5 {
        return TailVerdict::Inconclusive;
    }
    let scale = values
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()))
        .max(1e-30);
    let noise = 1e-13 * scale;

    let increments: Vec<f64> = values.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    let last = *increments.last().expect("n >= 5");

    if increments.iter().all(|&d| d <= noise) {
        return TailVerdict::Convergent {
            limit: values[n - 1],
        };
    }

    // (a) geometric shrink of the last three increments
    let m = increments.len();
    if m >= 4 {
        let geometric = (m - 3..m).all(|i| {
            let prev = increments[i - 1];
            let cur = increments[i];
            cur <= noise || (prev > 0.0 && prev / cur.max(1e-300) >= 1.5)
        });
        if geometric {
            let rho = (increments[m - 1] / increments[m - 2].max(1e-300)).clamp(0.0, 0.95);
            return TailVerdict::Convergent {
                limit: values[n - 1] + (values[n - 1] - values[n - 2]).signum() * last * rho / (1.0 - rho),
            };
        }
    }

    // (b) power-law decay of increments vs depth
    let pts: Vec<(f64, f64)> = increments
        .iter()
        .enumerate()
        .filter(|(_, &d)| d > noise)
        .map(|(i, &d)| (((depth0 + i) as f64).ln(), d.ln()))
        .collect();
    if pts.len() < 4 {
        return TailVerdict::Inconclusive;
    }
    let tail_pts = &pts[pts.len() / 2..];
    let p_hat = -linear_slope(tail_pts);

    if p_hat >= 1.25 {
        // tail of sum c j^-p beyond depth k is ~ d_k * k / (p - 1)
        let k_last = (depth0 + m - 1) as f64;
        let tail = last * k_last / (p_hat - 1.0);
        let dir = (values[n - 1] - values[n - 2]).signum();
        return TailVerdict::Convergent {
            limit: values[n - 1] + dir * tail,
        };
    }
    if p_hat <= 0.5 && last > noise {
        let lin: Vec<(f64, f64)> = values
            .iter()
            .enumerate()
            .map(|(i, &v)| ((depth0 + i) as f64, v))
            .collect();
        return TailVerdict::Divergent {
            rate: linear_slope(&lin),
        };
    }
    TailVerdict::Inconclusive
}

fn linear_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-300 {
        return 0.0;
    }
    (n * sxy - sx * sy) / denom
}

/// Ordinary least squares in log-log space: returns (exponent, log-coefficient,
/// rms residual in log space). Used by the Holder fit.
pub fn log_log_fit(pts: &[(f64, f64)]) -> Option<(f64, f64, f64)> {
    let lp: Vec<(f64, f64)> = pts
        .iter()
        .filter(|(t, w)| *t > 0.0 && *w > 0.0)
        .map(|(t, w)| (t.ln(), w.ln()))
        .collect();
    if lp.len() < 3 {
        return None;
    }
    let n = lp.len() as f64;
    let sx: f64 = lp.iter().map(|p| p.0).sum();
    let sy: f64 = lp.iter().map(|p| p.1).sum();
    let slope = linear_slope(&lp);
    let intercept = (sy - slope * sx) / n;
    let rms = (lp
        .iter()
        .map(|(x, y)| {
            let r = y - (slope * x + intercept);
            r * r
        })
        .sum::<f64>()
        / n)
        .sqrt();
    Some((slope, intercept, rms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn power_extrapolation_recovers_limit() {
        // v_k = 3 - 0.7 * 2^-k, k = 4..12
        let vals: Vec<Complex64> = (4..12)
            .map(|k| Complex64::new(3.0 - 0.7 * (2f64).powi(-k), 0.0))
            .collect();
        let ex = power_extrapolate(&vals).unwrap();
        assert_abs_diff_eq!(ex.limit.re, 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(ex.ratio, 0.5, epsilon = 1e-9);
        assert!(ex.fit_residual < 1e-6);
    }

    #[test]
    fn power_extrapolation_rejects_log_tail() {
        // v_k = 1 - 1/k has ratio -> 1 with inconsistent fit
        let vals: Vec<Complex64> = (4..12)
            .map(|k| Complex64::new(1.0 - 1.0 / k as f64, 0.0))
            .collect();
        let ex = power_extrapolate(&vals).unwrap();
        // ratio close to 1 or residual visible; either way callers see a poor fit
        assert!(ex.ratio > 0.75 || ex.fit_residual > 0.02);
    }

    #[test]
    fn tail_geometric_convergence() {
        // I_k = 1 - 2^-k: increments shrink by 2
        let vals: Vec<f64> = (3..=20).map(|k| 1.0 - (2f64).powi(-k)).collect();
        match classify_tail(3, &vals) {
            TailVerdict::Convergent { limit } => assert_abs_diff_eq!(limit, 1.0, epsilon = 1e-6),
            v => panic!("expected convergent, got {v:?}"),
        }
    }

    #[test]
    fn tail_inverse_square_log_converges() {
        // I_k = C - 1/(k ln 2): increments ~ 1/k^2, ratios -> 1
        let vals: Vec<f64> = (3..=20)
            .map(|k| 0.3 - 1.0 / (k as f64 * std::f64::consts::LN_2))
            .collect();
        match classify_tail(3, &vals) {
            TailVerdict::Convergent { limit } => {
                // extrapolated limit should beat the raw last value
                assert!((limit - 0.3).abs() < (vals[vals.len() - 1] - 0.3).abs());
            }
            v => panic!("expected convergent, got {v:?}"),
        }
    }

    #[test]
    fn tail_linear_growth_diverges() {
        // I_k = k ln 2 (the 1/|x| case)
        let vals: Vec<f64> = (3..=20).map(|k| k as f64 * std::f64::consts::LN_2).collect();
        match classify_tail(3, &vals) {
            TailVerdict::Divergent { rate } => {
                assert_abs_diff_eq!(rate, std::f64::consts::LN_2, epsilon = 1e-9)
            }
            v => panic!("expected divergent, got {v:?}"),
        }
    }

    #[test]
    fn tail_log_growth_is_inconclusive() {
        // I_k = ln k: increments ~ 1/k (p-hat near 1)
        let vals: Vec<f64> = (3..=20).map(|k| (k as f64).ln()).collect();
        assert_eq!(classify_tail(3, &vals), TailVerdict::Inconclusive);
    }

    #[test]
    fn tail_constant_sequence() {
        let vals = vec![2.5; 18];
        match classify_tail(3, &vals) {
            TailVerdict::Convergent { limit } => assert_eq!(limit, 2.5),
            v => panic!("expected convergent, got {v:?}"),
        }
    }
}
