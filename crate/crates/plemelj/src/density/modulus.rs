//! Modulus-of-continuity estimation and Holder/Dini classification.
//!
//! The estimator takes the running maximum of |phi(x1) - phi(x2)| over
//! sampled point pairs at Euclidean separations up to each grid value. As a
//! maximum over finitely many pairs it underestimates the true supremum;
//! property tests account for that with a bootstrap slack.
//!
//! Classification is heuristic, never a proof. Holder: a log-log least
//! squares fit of omega against t on small t. Dini: convergence of the tail
//! integrals int_delta^1 omega(t)/t dt as delta -> 0, judged by the shared
//! tail classifier.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Density;
use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::seq::{classify_tail, log_log_fit, TailVerdict, TAIL_DEPTHS};

/// Range of t used by the Holder fit.
pub const HOLDER_FIT_RANGE: (f64, f64) = (1e-6, 1e-1);
/// Log-space rms threshold under which a power law is accepted.
pub const HOLDER_RESIDUAL_TOL: f64 = 0.05;

/// One sampled pair: Euclidean separation of the two curve points and the
/// modulus of the density difference.
#[derive(Debug, Clone, Copy)]
pub struct PairRecord {
    pub separation: f64,
    pub delta: f64,
}

/// Power-law fit omega(t) ~ coeff * t^alpha over the small-t grid.
#[derive(Debug, Clone, Copy)]
pub struct HolderFit {
    pub alpha: f64,
    pub coeff: f64,
    pub residual: f64,
}

/// Estimated modulus of continuity on a grid, with the derived Dini tail
/// integrals and Holder fit.
#[derive(Debug, Clone)]
pub struct ModulusEstimate {
    pub grid: Vec<f64>,
    pub omega: Vec<f64>,
    /// (delta, int_delta^1 omega/t dt) for decreasing delta = 2^-k.
    pub dini_tail: Vec<(f64, f64)>,
    pub holder_fit: Option<HolderFit>,
    /// The sampled pairs behind `omega`; empty for analytic estimates.
    pub records: Vec<PairRecord>,
}

/// Verdict of [`classify_regularity`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Regularity {
    Holder { alpha: f64 },
    Dini,
    Inconclusive,
}

/// Log-spaced default grid on [1e-7, 1], eight points per decade.
pub fn default_grid() -> Vec<f64> {
    let per_decade = 8;
    let decades = 7;
    let n = per_decade * decades;
    (0..=n)
        .map(|i| 10f64.powf(-7.0 + 7.0 * i as f64 / n as f64))
        .collect()
}

impl ModulusEstimate {
    /// Build from sampled pairs: running maximum over separations up to each
    /// grid value, which is non-decreasing by construction.
    pub fn from_samples(grid: &[f64], records: Vec<PairRecord>) -> Result<ModulusEstimate> {
        validate_grid(grid, false)?;
        let mut sorted: Vec<usize> = (0..records.len()).collect();
        sorted.sort_by(|&i, &j| {
            records[i]
                .separation
                .partial_cmp(&records[j].separation)
                .expect("finite separations")
        });
        let mut omega = Vec::with_capacity(grid.len());
        let mut running = 0.0f64;
        let mut idx = 0;
        for &t in grid {
            while idx < sorted.len() && records[sorted[idx]].separation <= t {
                running = running.max(records[sorted[idx]].delta);
                idx += 1;
            }
            omega.push(running);
        }
        Ok(Self::assemble(grid.to_vec(), omega, records))
    }

    /// Build from a closed-form modulus function (enforcing monotonicity by
    /// running maximum, as the definition's growing supremum does).
    pub fn from_modulus_fn<F: Fn(f64) -> f64>(omega_fn: F, grid: &[f64]) -> Result<ModulusEstimate> {
        validate_grid(grid, false)?;
        let mut running = 0.0f64;
        let mut omega = Vec::with_capacity(grid.len());
        for &t in grid {
            running = running.max(omega_fn(t).max(0.0));
            omega.push(running);
        }
        Ok(Self::assemble(grid.to_vec(), omega, Vec::new()))
    }

    fn assemble(grid: Vec<f64>, omega: Vec<f64>, records: Vec<PairRecord>) -> ModulusEstimate {
        let dini_tail = tail_integrals(&grid, &omega);
        let holder_fit = holder_fit(&grid, &omega);
        ModulusEstimate {
            grid,
            omega,
            dini_tail,
            holder_fit,
            records,
        }
    }

    /// Piecewise-linear evaluation of the estimated modulus.
    pub fn omega_at(&self, t: f64) -> f64 {
        let n = self.grid.len();
        if t <= self.grid[0] {
            return self.omega[0];
        }
        if t >= self.grid[n - 1] {
            return self.omega[n - 1];
        }
        let i = match self
            .grid
            .binary_search_by(|v| v.partial_cmp(&t).expect("finite grid"))
        {
            Ok(i) => return self.omega[i],
            Err(i) => i - 1,
        };
        let (t0, t1) = (self.grid[i], self.grid[i + 1]);
        let w = (t - t0) / (t1 - t0);
        self.omega[i] * (1.0 - w) + self.omega[i + 1] * w
    }
}

fn validate_grid(grid: &[f64], unit_range: bool) -> Result<()> {
    if grid.len() < 4 {
        return Err(Error::InvalidConfig(format!(
            "modulus grid needs >= 4 points, got {}",
            grid.len()
        )));
    }
    for (i, w) in grid.windows(2).enumerate() {
        if !(w[0] > 0.0 && w[1] > w[0]) {
            return Err(Error::InvalidConfig(format!(
                "modulus grid must be positive and increasing (violation at {i})"
            )));
        }
    }
    if unit_range && *grid.last().expect("non-empty") > 1.0 {
        return Err(Error::InvalidConfig(
            "modulus grid must lie in (0, 1]".to_string(),
        ));
    }
    Ok(())
}

/// Estimate the modulus of continuity of `density` on `curve` with the
/// Euclidean metric between curve points.
///
/// Pair sampling is stratified by grid value: for each grid t, separations
/// are drawn uniformly from (0, t], otherwise small-t bins starve. The
/// pseudo-random stream is fully determined by `seed`.
pub fn estimate_modulus(
    density: &Density,
    curve: &Curve,
    n_pairs: usize,
    t_grid: &[f64],
    seed: u64,
) -> Result<ModulusEstimate> {
    if n_pairs < 1000 {
        return Err(Error::InvalidConfig(format!(
            "need at least 1000 pairs, got {n_pairs}"
        )));
    }
    validate_grid(t_grid, true)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (a, b) = curve.domain();
    let quota = n_pairs / t_grid.len() + 1;
    let grid_max = *t_grid.last().expect("non-empty grid");
    let mut records = Vec::with_capacity(quota * t_grid.len());

    for &t in t_grid {
        for _ in 0..quota {
            let tau1 = rng.gen_range(a..b);
            let s = t * (1.0 - rng.gen::<f64>());
            let speed = curve.tangent(tau1).norm();
            let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
            let mut tau2 = tau1 + sign * s / speed;
            if !curve.is_closed() && !(a..=b).contains(&tau2) {
                tau2 = tau1 - sign * s / speed;
                if !(a..=b).contains(&tau2) {
                    tau2 = tau2.clamp(a, b);
                }
            }
            let p1 = curve.point(tau1);
            let p2 = curve.point(tau2);
            let separation = (p1 - p2).norm();
            if separation == 0.0 || separation > grid_max {
                continue;
            }
            let v1 = density.try_eval(tau1)?;
            let v2 = density.try_eval(tau2)?;
            records.push(PairRecord {
                separation,
                delta: (v1 - v2).norm(),
            });
        }
    }
    ModulusEstimate::from_samples(t_grid, records)
}

/// Tail integrals int_delta^1 omega/t dt of the piecewise-linear estimate,
/// for delta = 2^-k within the grid's span.
fn tail_integrals(grid: &[f64], omega: &[f64]) -> Vec<(f64, f64)> {
    let lo = grid[0];
    let hi = grid.last().copied().expect("non-empty").min(1.0);
    let mut out = Vec::new();
    for k in TAIL_DEPTHS {
        let delta = (2f64).powi(-(k as i32));
        if delta < lo || delta >= hi {
            continue;
        }
        out.push((delta, linear_log_integral(grid, omega, delta, hi)));
    }
    out
}

/// Integral of the piecewise-linear (grid, omega) interpolant times 1/t.
fn linear_log_integral(grid: &[f64], omega: &[f64], lo: f64, hi: f64) -> f64 {
    let mut total = 0.0;
    for i in 0..grid.len() - 1 {
        let (t0, t1) = (grid[i], grid[i + 1]);
        let (a, b) = (t0.max(lo), t1.min(hi));
        if b <= a {
            continue;
        }
        let slope = (omega[i + 1] - omega[i]) / (t1 - t0);
        let intercept = omega[i] - slope * t0;
        total += intercept * (b / a).ln() + slope * (b - a);
    }
    total
}

fn holder_fit(grid: &[f64], omega: &[f64]) -> Option<HolderFit> {
    let pts: Vec<(f64, f64)> = grid
        .iter()
        .zip(omega)
        .filter(|(&t, &w)| t >= HOLDER_FIT_RANGE.0 && t <= HOLDER_FIT_RANGE.1 && w > 0.0)
        .map(|(&t, &w)| (t, w))
        .collect();
    let (alpha, log_coeff, residual) = log_log_fit(&pts)?;
    Some(HolderFit {
        alpha,
        coeff: log_coeff.exp(),
        residual,
    })
}

/// Heuristic Holder/Dini classification of a modulus estimate.
///
/// Holder wins when the log-log fit is tight (rms below
/// [`HOLDER_RESIDUAL_TOL`]) with exponent >= 0.05. Otherwise the Dini tail
/// integrals are handed to the shared tail classifier; convergence means
/// Dini, anything else is inconclusive.
pub fn classify_regularity(estimate: &ModulusEstimate) -> Regularity {
    if let Some(fit) = &estimate.holder_fit {
        if fit.residual <= HOLDER_RESIDUAL_TOL && fit.alpha >= 0.05 {
            return Regularity::Holder { alpha: fit.alpha };
        }
    }
    if estimate.dini_tail.len() >= 5 {
        let depth0 = -(estimate.dini_tail[0].0.log2().round()) as usize;
        let values: Vec<f64> = estimate.dini_tail.iter().map(|&(_, v)| v).collect();
        if let TailVerdict::Convergent { .. } = classify_tail(depth0, &values) {
            return Regularity::Dini;
        }
    }
    Regularity::Inconclusive
}

/// Bootstrap standard error of the modulus estimate at each grid point:
/// resample the pair records with replacement and take the standard
/// deviation across `resamples` replicas.
pub fn bootstrap_se(
    records: &[PairRecord],
    grid: &[f64],
    resamples: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut replicas: Vec<Vec<f64>> = Vec::with_capacity(resamples);
    for _ in 0..resamples {
        let resampled: Vec<PairRecord> = (0..records.len())
            .map(|_| records[rng.gen_range(0..records.len())])
            .collect();
        let est = ModulusEstimate::from_samples(grid, resampled)?;
        replicas.push(est.omega);
    }
    let mut se = vec![0.0; grid.len()];
    for (j, se_j) in se.iter_mut().enumerate() {
        let mean: f64 = replicas.iter().map(|r| r[j]).sum::<f64>() / resamples as f64;
        let var: f64 = replicas.iter().map(|r| (r[j] - mean).powi(2)).sum::<f64>()
            / (resamples as f64 - 1.0);
        *se_j = var.sqrt();
    }
    Ok(se)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::dini_log_cut;

    fn segment() -> Curve {
        Curve::builtin("segment", &[-1.0, 1.0]).unwrap()
    }

    fn coarse_grid() -> Vec<f64> {
        // log-spaced on [1e-3, 1]: dense enough for sampled estimates
        (0..=24).map(|i| 10f64.powf(-3.0 + 3.0 * i as f64 / 24.0)).collect()
    }

    #[test]
    fn constant_density_has_zero_modulus() {
        let d = Density::builtin("constant", &[1.0]).unwrap();
        let est = estimate_modulus(&d, &segment(), 2000, &coarse_grid(), 7).unwrap();
        assert!(est.omega.iter().all(|&w| w == 0.0));
    }

    #[test]
    fn linear_density_modulus_tracks_t() {
        // exact omega(t) = t on the segment
        let d = Density::builtin("linear", &[]).unwrap();
        let est = estimate_modulus(&d, &segment(), 60_000, &coarse_grid(), 11).unwrap();
        for (t, w) in est.grid.iter().zip(&est.omega) {
            if *t <= 0.5 {
                assert!(
                    (w - t).abs() <= 0.05 * t,
                    "omega({t}) = {w}, expected within 5% of t"
                );
            }
        }
        // brute-force oracle at small n: enumerate all pairs of a coarse
        // sample and compare the running max at one grid point
        let taus: Vec<f64> = (0..=200).map(|i| -1.0 + 2.0 * i as f64 / 200.0).collect();
        let mut brute = 0.0f64;
        let t_check = 0.1;
        for (i, &x) in taus.iter().enumerate() {
            for &y in &taus[i + 1..] {
                if (x - y).abs() <= t_check {
                    brute = brute.max((d.eval(x) - d.eval(y)).norm());
                }
            }
        }
        let est_val = est.omega_at(t_check);
        assert!(
            (brute - est_val).abs() <= 0.05 * brute,
            "brute {brute} vs estimator {est_val}"
        );
    }

    #[test]
    fn monotone_by_construction() {
        let d = Density::builtin("holder-power", &[0.5]).unwrap();
        let est = estimate_modulus(&d, &segment(), 5000, &coarse_grid(), 3).unwrap();
        for w in est.omega.windows(2) {
            assert!(w[1] >= w[0]);
        }
    }

    #[test]
    fn holder_power_fit_from_samples() {
        let d = Density::builtin("holder-power", &[0.5]).unwrap();
        let est = estimate_modulus(&d, &segment(), 200_000, &coarse_grid(), 5).unwrap();
        let fit = est.holder_fit.expect("fit range populated");
        assert!(
            (0.45..=0.55).contains(&fit.alpha),
            "alpha = {}, residual = {}",
            fit.alpha,
            fit.residual
        );
    }

    #[test]
    fn holder_fit_on_exact_modulus_over_spec_range() {
        let est = ModulusEstimate::from_modulus_fn(|t| t.sqrt(), &default_grid()).unwrap();
        let fit = est.holder_fit.expect("fit exists");
        assert!((fit.alpha - 0.5).abs() < 1e-6);
        assert!(fit.residual < 1e-9);
        assert!(matches!(
            classify_regularity(&est),
            Regularity::Holder { alpha } if (alpha - 0.5).abs() < 1e-6
        ));
    }

    #[test]
    fn dini_log_classifies_as_dini_from_exact_modulus() {
        // true modulus of the dini-log profile near 0: log(t)^-2, saturating
        // at the profile's maximum for large t
        let cap = dini_log_profile_max();
        let est = ModulusEstimate::from_modulus_fn(
            |t| if t < 1e-2 { t.ln().powi(-2) } else { cap },
            &default_grid(),
        )
        .unwrap();
        // the log-log fit must fail: strongly concave in log-log
        if let Some(fit) = &est.holder_fit {
            assert!(fit.residual > HOLDER_RESIDUAL_TOL, "residual {}", fit.residual);
        }
        assert_eq!(classify_regularity(&est), Regularity::Dini);
    }

    fn dini_log_profile_max() -> f64 {
        let cut = dini_log_cut();
        (0..1000)
            .map(|i| crate::density::dini_log_profile(cut * i as f64 / 1000.0))
            .fold(0.0, f64::max)
    }

    #[test]
    fn inverse_log_modulus_is_inconclusive() {
        // omega(t) = 1/|log t| is continuous but not Dini: the tail integral
        // diverges logarithmically
        let est = ModulusEstimate::from_modulus_fn(
            |t| if t < 0.3 { 1.0 / t.ln().abs() } else { 1.0 / 0.3f64.ln().abs() },
            &default_grid(),
        )
        .unwrap();
        assert_eq!(classify_regularity(&est), Regularity::Inconclusive);
    }

    #[test]
    fn subadditivity_within_statistical_slack() {
        let d = Density::builtin("holder-power", &[0.5]).unwrap();
        let grid = coarse_grid();
        let est = estimate_modulus(&d, &segment(), 50_000, &grid, 17).unwrap();
        let se = bootstrap_se(&est.records, &grid, 16, 99).unwrap();
        for i in 0..grid.len() {
            for j in i..grid.len() {
                let sum_t = grid[i] + grid[j];
                if sum_t > *grid.last().unwrap() {
                    continue;
                }
                let lhs = est.omega_at(sum_t);
                let rhs = est.omega[i] + est.omega[j] + 3.0 * (se[i] + se[j]) + 1e-12;
                assert!(
                    lhs <= rhs,
                    "subadditivity violated at t1={}, t2={}: {lhs} > {rhs}",
                    grid[i],
                    grid[j]
                );
            }
        }
    }

    #[test]
    fn estimator_rejects_bad_input() {
        let d = Density::builtin("constant", &[1.0]).unwrap();
        assert!(estimate_modulus(&d, &segment(), 10, &coarse_grid(), 0).is_err());
        assert!(estimate_modulus(&d, &segment(), 2000, &[0.5, 0.4, 0.3, 0.2], 0).is_err());
        assert!(estimate_modulus(&d, &segment(), 2000, &[0.1, 0.2, 0.5, 1.5], 0).is_err());
    }
}
