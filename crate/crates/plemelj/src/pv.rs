//! Cauchy principal-value integrals.
//!
//! Three routes to P.V. int f(t)/(t - t0) dt:
//! - symmetric excision: integrals outside shrinking disks around t0, with
//!   the full epsilon trace kept and optionally Richardson-extrapolated;
//! - singularity subtraction: int (f(t) - f(t0))/(t - t0) dt plus the
//!   closed-form log term, with graded panels toward t0 down to the same
//!   resolution as the excision sequence's smallest epsilon, so the two
//!   routes stay comparable even when the density is merely Dini at t0;
//! - pullback: a curve integral reduced to the interval case through a
//!   normalized frame and the regularized kernel.
//!
//! Both interval routes work in u = t - t0 coordinates, where the kernel
//! 1/u is exact and no digits are lost subtracting nearly-equal abscissae.

use num_complex::Complex64;

use crate::curve::{Curve, NormalizedFrame};
use crate::density::Density;
use crate::error::{Error, Result};
use crate::quad::{integrate, integrate_split, QuadConfig, QuadOutcome};
use crate::seq::{classify_tail, power_extrapolate, TailVerdict, TAIL_DEPTHS};

/// Singular point must keep this distance from the endpoints.
pub const ENDPOINT_MARGIN: f64 = 1e-12;
/// Richardson extrapolation is dropped when the ratio fit disagrees by more
/// than this relative amount across the fitting window.
pub const RICHARDSON_RESIDUAL_TOL: f64 = 0.25;

/// Configuration shared by the principal-value routines.
#[derive(Debug, Clone)]
pub struct PvConfig {
    /// Strictly decreasing excision radii; the last entry is also the
    /// resolution floor of the subtraction route.
    pub excision_seq: Vec<f64>,
    pub quad: QuadConfig,
    /// Extrapolate the excision tail with a fitted power law.
    pub richardson: bool,
}

impl Default for PvConfig {
    fn default() -> Self {
        Self {
            excision_seq: (4..=40).map(|k| (2f64).powi(-k)).collect(),
            quad: QuadConfig::default(),
            richardson: true,
        }
    }
}

impl PvConfig {
    /// Excision radii 2^-k for k in [4, depth].
    pub fn with_depth(depth: u32) -> Self {
        Self {
            excision_seq: (4..=depth.max(8) as i32).map(|k| (2f64).powi(-k)).collect(),
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if self.excision_seq.len() < 4 {
            return Err(Error::InvalidConfig(
                "excision sequence needs at least 4 radii".to_string(),
            ));
        }
        for (i, w) in self.excision_seq.windows(2).enumerate() {
            if !(w[0] > 0.0 && w[1] > 0.0 && w[1] < w[0]) {
                return Err(Error::InvalidConfig(format!(
                    "excision sequence must be strictly decreasing and positive (entry {i})"
                )));
            }
        }
        if !(self.quad.abs_tol > 0.0 && self.quad.rel_tol > 0.0) {
            return Err(Error::InvalidConfig("tolerances must be positive".to_string()));
        }
        Ok(())
    }
}

/// Which route produced a [`PvResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PvMethod {
    Excision,
    Subtraction,
    Pullback,
}

/// A principal value with its excision trace and error estimate.
#[derive(Debug, Clone)]
pub struct PvResult {
    pub value: Complex64,
    /// (epsilon, partial value outside the epsilon-disk), decreasing epsilon.
    pub excision_trace: Vec<(f64, Complex64)>,
    /// Spread of the last three trace entries plus accumulated quadrature
    /// error; `converged` means it met the requested absolute tolerance.
    pub error_estimate: f64,
    pub method: PvMethod,
    pub converged: bool,
}

fn check_interval(t0: f64, a: f64, b: f64) -> Result<(f64, f64)> {
    if !(a < b) {
        return Err(Error::InvalidConfig(format!("[{a}, {b}] is not an interval")));
    }
    let d1 = t0 - a;
    let d2 = b - t0;
    if d1 <= ENDPOINT_MARGIN || d2 <= ENDPOINT_MARGIN {
        return Err(Error::SingularPointAtEndpoint {
            t0,
            tol: ENDPOINT_MARGIN,
        });
    }
    Ok((d1, d2))
}

/// Telescoping partial integrals of `g` over [-d1, d2] minus shrinking
/// symmetric windows (-eps, eps): returns the trace of partials and the
/// accumulated quadrature error.
fn excision_partials<F: Fn(f64) -> Complex64>(
    g: &F,
    d1: f64,
    d2: f64,
    eps: &[f64],
    quad_cfg: &QuadConfig,
) -> Result<(Vec<(f64, Complex64)>, f64)> {
    // the tolerance budget is shared by ~2 len(eps) telescoping pieces
    let quad_cfg = &QuadConfig {
        abs_tol: quad_cfg.abs_tol / 256.0,
        rel_tol: quad_cfg.rel_tol / 256.0,
        max_subdivisions: quad_cfg.max_subdivisions,
    };
    let mut quad_err = 0.0;
    let mut add = |out: QuadOutcome| -> Complex64 {
        quad_err += out.abs_error;
        out.value
    };
    // the outer panels are wide: pre-split so that densities supported on a
    // narrow window cannot slip between the nodes of a single GK15 panel
    let eps0 = eps[0];
    let left = integrate_split(|u| g(u), -d1, -eps0, 16, quad_cfg)?;
    let right = integrate_split(|u| g(u), eps0, d2, 16, quad_cfg)?;
    let mut partial = add(left) + add(right);
    let mut trace = Vec::with_capacity(eps.len());
    trace.push((eps0, partial));
    for w in eps.windows(2) {
        let (outer, inner) = (w[0], w[1]);
        let l = integrate(|u| g(u), -outer, -inner, quad_cfg)?;
        let r = integrate(|u| g(u), inner, outer, quad_cfg)?;
        partial += add(l) + add(r);
        trace.push((inner, partial));
    }
    Ok((trace, quad_err))
}

fn spread_of_last(trace: &[(f64, Complex64)], n: usize) -> f64 {
    let tail = &trace[trace.len().saturating_sub(n)..];
    let mut worst = 0.0f64;
    for i in 0..tail.len() {
        for j in i + 1..tail.len() {
            worst = worst.max((tail[i].1 - tail[j].1).norm());
        }
    }
    worst
}

/// P.V. int_a^b f(t)/(t - t0) dt by the excision definition: the limit of
/// integrals outside symmetric windows around t0, extrapolated when the
/// trace tail follows a power law.
pub fn pv_interval_excision<F: Fn(f64) -> Complex64>(
    f: F,
    t0: f64,
    a: f64,
    b: f64,
    cfg: &PvConfig,
) -> Result<PvResult> {
    cfg.validate()?;
    let (d1, d2) = check_interval(t0, a, b)?;
    let dmin = d1.min(d2);
    let eps: Vec<f64> = cfg
        .excision_seq
        .iter()
        .copied()
        .filter(|&e| e < dmin)
        .collect();
    if eps.len() < 4 {
        return Err(Error::InvalidConfig(format!(
            "excision sequence has fewer than 4 radii below the endpoint distance {dmin:.3e}"
        )));
    }
    let g = |u: f64| f(t0 + u) / u;
    let (trace, quad_err) = excision_partials(&g, d1, d2, &eps, &cfg.quad)?;

    let raw = trace.last().expect("non-empty trace").1;
    let mut value = raw;
    if cfg.richardson {
        let values: Vec<Complex64> = trace.iter().map(|&(_, v)| v).collect();
        if let Some(ex) = power_extrapolate(&values) {
            if ex.fit_residual <= RICHARDSON_RESIDUAL_TOL {
                value = ex.limit;
            }
        }
    }
    let error_estimate = spread_of_last(&trace, 3) + quad_err;
    Ok(PvResult {
        value,
        converged: error_estimate <= cfg.quad.abs_tol,
        excision_trace: trace,
        error_estimate,
        method: PvMethod::Excision,
    })
}

/// P.V. by singularity subtraction:
/// int (f(t) - f(t0))/(t - t0) dt + f(t0) log((b - t0)/(t0 - a)).
///
/// The subtracted integrand is bounded by omega_f(|u|)/|u|, integrable for
/// Dini f; it is integrated with the same telescoping rings as the excision
/// route down to the excision sequence's smallest radius, which fixes the
/// method's resolution scale.
pub fn pv_interval_subtraction<F: Fn(f64) -> Complex64>(
    f: F,
    t0: f64,
    a: f64,
    b: f64,
    cfg: &PvConfig,
) -> Result<PvResult> {
    cfg.validate()?;
    let (d1, d2) = check_interval(t0, a, b)?;
    let f0 = f(t0);
    if !(f0.re.is_finite() && f0.im.is_finite()) {
        return Err(Error::NonFiniteIntegrand { t: t0 });
    }
    let dmin = d1.min(d2);
    let eps: Vec<f64> = cfg
        .excision_seq
        .iter()
        .copied()
        .filter(|&e| e < dmin)
        .collect();
    if eps.len() < 4 {
        return Err(Error::InvalidConfig(format!(
            "excision sequence has fewer than 4 radii below the endpoint distance {dmin:.3e}"
        )));
    }
    let g = |u: f64| (f(t0 + u) - f0) / u;
    let (mut trace, quad_err) = excision_partials(&g, d1, d2, &eps, &cfg.quad)?;
    let log_term = f0 * (d2 / d1).ln();
    for entry in &mut trace {
        entry.1 += log_term;
    }
    let value = trace.last().expect("non-empty trace").1;
    // remaining symmetric window below the floor, estimated from the last ring
    let last_ring = if trace.len() >= 2 {
        (trace[trace.len() - 1].1 - trace[trace.len() - 2].1).norm()
    } else {
        0.0
    };
    let error_estimate = quad_err + last_ring;
    Ok(PvResult {
        value,
        converged: error_estimate <= cfg.quad.abs_tol,
        excision_trace: trace,
        error_estimate,
        method: PvMethod::Subtraction,
    })
}

/// P.V. int_C phi(s)/(s - psi(tau0)) ds pulled back to the parameter
/// interval through the normalized frame at tau0.
///
/// In frame coordinates the integrand factors as W(sigma)/sigma with
/// numerator W = (phi o psi) psi~' h, where h is the regularized kernel;
/// W is continuous at 0 with W(0) = phi(t0), so the interval subtraction
/// route applies. The result is independent of the admissible
/// parameterization within tolerance.
pub fn pv_curve(curve: &Curve, density: &Density, tau0: f64, cfg: &PvConfig) -> Result<PvResult> {
    let frame = curve.normalize_at(tau0)?;
    let mut res = pv_curve_in_frame(&frame, density, cfg)?;
    res.method = PvMethod::Pullback;
    Ok(res)
}

pub(crate) fn pv_curve_in_frame(
    frame: &NormalizedFrame,
    density: &Density,
    cfg: &PvConfig,
) -> Result<PvResult> {
    let (lo, hi) = frame.sigma_domain();
    let numerator = |sigma: f64| {
        let tau = frame.curve().wrap_param(frame.tau_of_sigma(sigma));
        density.eval(tau) * frame.psi_tilde_deriv(sigma) * frame.kernel_h(sigma)
    };
    pv_interval_subtraction(numerator, 0.0, lo, hi, cfg)
}

/// Even/odd decomposition at a point: returns (f_e(x), f_o(x)). The odd
/// part is the exact difference f(x) - f_e(x), so the reconstruction
/// f_e + f_o returns f(x) to within one rounding.
pub fn even_odd_split<F: Fn(f64) -> Complex64>(f: F, x: f64) -> (Complex64, Complex64) {
    let fx = f(x);
    let fe = (fx + f(-x)) / 2.0;
    (fe, fx - fe)
}

/// Verdict of the principal-value existence predicate.
#[derive(Debug, Clone)]
pub enum PvExistence {
    /// The odd-part tail integrals settle; `l1_estimate` approximates
    /// int_0^1 |f_o(x)| / x dx.
    Exists { l1_estimate: f64 },
    /// The tail integrals grow without bound; `rate` is the measured growth
    /// per halving of the cutoff, `trace` the (delta, integral) sequence.
    Fails { rate: f64, trace: Vec<(f64, f64)> },
    Inconclusive,
}

/// Existence test for P.V. int_{-1}^1 f(x)/x dx via the integrability of the
/// odd part: estimates int_delta^1 |f_o(x)|/x dx for delta = 2^-k and
/// classifies the tail. When the P.V. exists it equals
/// 2 P.V. int_0^1 f_o(x)/x dx.
pub fn pv_exists_predicate<F: Fn(f64) -> Complex64>(f: F, cfg: &PvConfig) -> Result<PvExistence> {
    cfg.validate()?;
    let odd_abs = |x: f64| {
        let (_, fo) = even_odd_split(&f, x);
        Complex64::new(fo.norm() / x, 0.0)
    };
    let depths: Vec<u32> = TAIL_DEPTHS.collect();
    let mut trace: Vec<(f64, f64)> = Vec::with_capacity(depths.len());
    let mut acc = 0.0;
    let mut upper = 1.0;
    for &k in &depths {
        let delta = (2f64).powi(-(k as i32));
        let out = integrate(&odd_abs, delta, upper, &cfg.quad)?;
        acc += out.value.re;
        trace.push((delta, acc));
        upper = delta;
    }
    let values: Vec<f64> = trace.iter().map(|&(_, v)| v).collect();
    Ok(match classify_tail(depths[0] as usize, &values) {
        TailVerdict::Convergent { limit } => PvExistence::Exists { l1_estimate: limit },
        TailVerdict::Divergent { rate } => PvExistence::Fails { rate, trace },
        TailVerdict::Inconclusive => PvExistence::Inconclusive,
    })
}

/// Parameters (tau_left, tau_right) where the curve crosses the circle
/// |psi(tau) - psi(tau0)| = eps on either side of tau0, found by bisection.
/// Realizes the disk definition of curve excision geometrically.
pub fn disk_excision_cuts(curve: &Curve, tau0: f64, eps: f64) -> Result<(f64, f64)> {
    let (a, b) = curve.domain();
    let tau0 = curve.wrap_param(tau0);
    let t0 = curve.point(tau0);
    let dist = |tau: f64| (curve.point(tau) - t0).norm();
    let half_span = if curve.is_closed() {
        0.5 * (b - a)
    } else {
        (tau0 - a).min(b - tau0)
    };
    if eps <= 0.0 || dist(tau0 + half_span) <= eps || dist(tau0 - half_span) <= eps {
        return Err(Error::InvalidConfig(format!(
            "excision radius {eps:.3e} does not cut the curve on both sides of tau0"
        )));
    }
    let solve = |dir: f64| -> f64 {
        // march outward until the circle is crossed, then bisect
        let mut step = half_span * 1e-6;
        while dist(tau0 + dir * step) < eps {
            step = (step * 2.0).min(half_span);
            if step >= half_span {
                break;
            }
        }
        let mut lo = 0.0f64;
        let mut hi = step;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if dist(tau0 + dir * mid) < eps {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= f64::EPSILON * half_span {
                break;
            }
        }
        tau0 + dir * 0.5 * (lo + hi)
    };
    Ok((solve(-1.0), solve(1.0)))
}
