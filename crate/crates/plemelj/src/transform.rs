//! The Cauchy transform, its lateral boundary values, and convergence
//! experiments toward them.
//!
//! Phi(z) = (1/2 pi i) int_C phi(s)/(s - z) ds is holomorphic off the curve.
//! Its boundary values from the left and right of the oriented curve are
//! Phi_pm(t) = +-phi(t)/2 + (1/2 pi i) P.V. int_C phi(s)/(s - t) ds, so the
//! jump across the curve is phi(t) and the two-sided mean is the P.V. term.
//! [`run_convergence`] measures |Phi(z_n) - Phi_pm(t)| along approach
//! sequences; [`verify_jump`] rebuilds the jump and sum relations from two
//! independent runs rather than from the constructed boundary values.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::curve::{Curve, NormalizedFrame, Side};
use crate::density::Density;
use crate::error::{Error, Result};
use crate::pv::{pv_curve_in_frame, PvConfig, PvResult};
use crate::quad::{integrate, integrate_graded_toward, integrate_split, QuadConfig};

/// Distance to the curve below which the transform integral switches to
/// geometrically graded panels around the nearest parameter.
pub const NEAR_CURVE_THRESHOLD: f64 = 1e-3;
/// Points closer to the curve than this are treated as on it.
pub const ON_CURVE_DISTANCE: f64 = 1e-13;

/// Configuration for transform evaluation and convergence runs.
#[derive(Debug, Clone)]
pub struct TransformConfig {
    pub quad: QuadConfig,
    pub pv: PvConfig,
    /// Convergence verdict tolerance on |Phi(z_n) - Phi_side|.
    pub tol: f64,
    /// Depth of the default approach radii 2^-n, n = 1..=depth.
    pub depth: u32,
    /// Worker threads for independent sequence points (0 = all available).
    pub threads: usize,
}

impl Default for TransformConfig {
    fn default() -> Self {
        Self {
            quad: QuadConfig::default(),
            pv: PvConfig::default(),
            tol: 1e-6,
            depth: 20,
            threads: 0,
        }
    }
}

/// Lateral boundary values at one curve point, assembled from the
/// principal value: phi_plus - phi_minus = phi(t) and
/// phi_plus + phi_minus = 2 pv_part hold by construction.
#[derive(Debug, Clone)]
pub struct BoundaryValue {
    pub point: Complex64,
    pub phi_plus: Complex64,
    pub phi_minus: Complex64,
    /// (1/2 pi i) P.V. int phi(s)/(s - t) ds.
    pub pv_part: Complex64,
    pub density_value: Complex64,
    /// The principal value behind `pv_part`, with its convergence verdict.
    pub pv: PvResult,
}

/// How an approach sequence is generated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SequenceShape {
    /// z_n = t + r_n times the unit normal on the requested side.
    Normal,
    /// Frame points x_n + i (G(x_n) +- ratio x_n): an approach along the
    /// local graph, offset above or below it by a fixed slope.
    TangentialGraph { offset_ratio: f64 },
    /// Caller-supplied points.
    Custom,
}

/// A one-sided sequence approaching a curve point, with every member's side
/// verified at construction.
#[derive(Debug, Clone)]
pub struct ApproachSequence {
    pub target_tau: f64,
    pub target: Complex64,
    pub side: Side,
    pub shape: SequenceShape,
    pub radii: Vec<f64>,
    pub points: Vec<Complex64>,
}

/// The radii 2^-n, n = 1..=depth.
pub fn default_radii(depth: u32) -> Vec<f64> {
    (1..=depth as i32).map(|n| (2f64).powi(-n)).collect()
}

/// Build an approach sequence on one side of the frame's base point.
///
/// Every generated point is classified and must land strictly on the
/// requested side. Custom point lists go through
/// [`ApproachSequence::from_points`] instead; note that sequences hugging
/// the curve are admissible but increasingly ill-conditioned to evaluate,
/// which is why the built-in tangential shape keeps a fixed offset slope.
pub fn make_sequence(
    frame: &NormalizedFrame,
    side: Side,
    shape: SequenceShape,
    radii: &[f64],
) -> Result<ApproachSequence> {
    if side == Side::OnCurve {
        return Err(Error::InvalidConfig(
            "approach side must be left or right".to_string(),
        ));
    }
    if radii.is_empty() || radii.windows(2).any(|w| w[1] >= w[0]) || radii[0] <= 0.0 {
        return Err(Error::InvalidRadii);
    }
    if radii.iter().any(|&r| !(r > 0.0)) {
        return Err(Error::InvalidRadii);
    }
    let target = frame.base_point();
    let points: Vec<Complex64> = match shape {
        SequenceShape::Normal => {
            let normal = match side {
                Side::Left => frame.left_normal(),
                Side::Right => -frame.left_normal(),
                Side::OnCurve => unreachable!(),
            };
            radii.iter().map(|&r| target + r * normal).collect()
        }
        SequenceShape::TangentialGraph { offset_ratio } => {
            if offset_ratio <= 0.0 {
                return Err(Error::InvalidConfig(
                    "tangential offset ratio must be positive".to_string(),
                ));
            }
            let (_, hi) = frame.footprint();
            if radii[0] >= hi {
                return Err(Error::InvalidConfig(format!(
                    "leading radius {} exceeds the frame window footprint {hi:.3e}",
                    radii[0]
                )));
            }
            let sign = if side == Side::Left { 1.0 } else { -1.0 };
            radii
                .iter()
                .map(|&x| {
                    let g = frame.graph(x)?;
                    Ok(frame.from_frame(Complex64::new(x, g + sign * offset_ratio * x)))
                })
                .collect::<Result<_>>()?
        }
        SequenceShape::Custom => {
            return Err(Error::InvalidConfig(
                "use ApproachSequence::from_points for custom sequences".to_string(),
            ))
        }
    };
    verify_sides(frame, side, &points)?;
    Ok(ApproachSequence {
        target_tau: frame.tau0(),
        target,
        side,
        shape,
        radii: radii.to_vec(),
        points,
    })
}

impl ApproachSequence {
    /// Wrap a caller-supplied point list, verifying the side of every entry.
    pub fn from_points(
        frame: &NormalizedFrame,
        side: Side,
        points: Vec<Complex64>,
    ) -> Result<ApproachSequence> {
        if points.is_empty() {
            return Err(Error::InvalidRadii);
        }
        verify_sides(frame, side, &points)?;
        let radii = points
            .iter()
            .map(|&z| (z - frame.base_point()).norm())
            .collect();
        Ok(ApproachSequence {
            target_tau: frame.tau0(),
            target: frame.base_point(),
            side,
            shape: SequenceShape::Custom,
            radii,
            points,
        })
    }
}

fn verify_sides(frame: &NormalizedFrame, want: Side, points: &[Complex64]) -> Result<()> {
    for (index, &z) in points.iter().enumerate() {
        match frame.classify_side(z)? {
            Side::OnCurve => return Err(Error::SequencePointOnCurve { index }),
            got if got != want => {
                return Err(Error::SequenceSideMismatch { index, got, want })
            }
            _ => {}
        }
    }
    Ok(())
}

/// Phi(z) for z off the curve.
pub fn cauchy_transform(
    curve: &Curve,
    density: &Density,
    z: Complex64,
    cfg: &TransformConfig,
) -> Result<Complex64> {
    cauchy_transform_detailed(curve, density, z, cfg).map(|(v, _)| v)
}

/// Phi(z) together with the quadrature error estimate of the defining
/// integral (before the 1/2 pi factor is applied to the error).
pub fn cauchy_transform_detailed(
    curve: &Curve,
    density: &Density,
    z: Complex64,
    cfg: &TransformConfig,
) -> Result<(Complex64, f64)> {
    let (tau_near, dist) = curve.nearest(z);
    if dist <= ON_CURVE_DISTANCE {
        return Err(Error::PointOnCurve {
            re: z.re,
            im: z.im,
            dist,
        });
    }
    let integrand = |tau: f64| {
        let tw = curve.wrap_param(tau);
        density.eval(tw) * curve.tangent(tw) / (curve.point(tw) - z)
    };
    let (a, b) = curve.domain();
    let two_pi_i = Complex64::new(0.0, 2.0 * PI);

    let (raw, err) = if dist >= NEAR_CURVE_THRESHOLD {
        // pre-split wide spans so narrowly supported densities cannot slip
        // between the nodes of one GK15 panel
        if curve.is_closed() {
            // split at the near parameter so the seam never bisects a peak
            let lo = tau_near - 0.5 * (b - a);
            let hi = tau_near + 0.5 * (b - a);
            let left = integrate_split(&integrand, lo, tau_near, 8, &cfg.quad)?;
            let right = integrate_split(&integrand, tau_near, hi, 8, &cfg.quad)?;
            (left.value + right.value, left.abs_error + right.abs_error)
        } else {
            let out = integrate_split(&integrand, a, b, 16, &cfg.quad)?;
            (out.value, out.abs_error)
        }
    } else {
        // the integrand peaks with width ~ dist around tau_near: grade
        // panels geometrically toward it on both sides, then pick up the
        // innermost slivers (the integrand is bounded by ~1/dist there)
        let floor = (0.01 * dist).max(1e-15);
        let (lo, hi) = if curve.is_closed() {
            (tau_near - 0.5 * (b - a), tau_near + 0.5 * (b - a))
        } else {
            (a, b)
        };
        let left = integrate_graded_toward(&integrand, lo, tau_near, false, floor, &cfg.quad)?;
        let right = integrate_graded_toward(&integrand, tau_near, hi, true, floor, &cfg.quad)?;
        let sl = integrate(&integrand, (tau_near - floor).max(lo), tau_near, &cfg.quad)?;
        let sr = integrate(&integrand, tau_near, (tau_near + floor).min(hi), &cfg.quad)?;
        (
            left.value + right.value + sl.value + sr.value,
            left.abs_error + right.abs_error + sl.abs_error + sr.abs_error,
        )
    };
    Ok((raw / two_pi_i, err / (2.0 * PI)))
}

/// Boundary values Phi_pm at an interior curve parameter, assembled from the
/// pullback principal value. Non-convergence of the P.V. is embedded in the
/// returned structure rather than fabricated away.
pub fn boundary_values(
    curve: &Curve,
    density: &Density,
    tau0: f64,
    cfg: &TransformConfig,
) -> Result<BoundaryValue> {
    let frame = curve.normalize_at(tau0)?;
    boundary_values_in_frame(&frame, density, cfg)
}

fn boundary_values_in_frame(
    frame: &NormalizedFrame,
    density: &Density,
    cfg: &TransformConfig,
) -> Result<BoundaryValue> {
    let tau0 = frame.curve().wrap_param(frame.tau0());
    let density_value = density.try_eval(tau0)?;
    let mut pv = pv_curve_in_frame(frame, density, &cfg.pv)?;
    pv.method = crate::pv::PvMethod::Pullback;
    let pv_part = pv.value / Complex64::new(0.0, 2.0 * PI);
    let half = density_value / 2.0;
    Ok(BoundaryValue {
        point: frame.base_point(),
        phi_plus: half + pv_part,
        phi_minus: -half + pv_part,
        pv_part,
        density_value,
        pv,
    })
}

/// One evaluated approach point.
#[derive(Debug, Clone, Copy)]
pub struct ConvergenceRecord {
    pub n: usize,
    pub z: Complex64,
    pub phi: Complex64,
    /// |Phi(z_n) - Phi_side(t)|.
    pub error: f64,
    pub quad_error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Converged,
    NotConverged,
}

/// Outcome of a convergence experiment along one approach sequence.
#[derive(Debug, Clone)]
pub struct ConvergenceReport {
    pub target: Complex64,
    pub side: Side,
    pub phi_side: Complex64,
    pub boundary: BoundaryValue,
    pub records: Vec<ConvergenceRecord>,
    /// Converged means the last five errors sit under the tolerance and do
    /// not increase beyond noise (factor 2 between consecutive entries).
    pub verdict: Verdict,
    pub final_error: f64,
    /// Phi at the deepest evaluated point: the sequence's own limit estimate,
    /// independent of the constructed boundary value.
    pub empirical_limit: Complex64,
    /// Spread of Phi over the last three records.
    pub cauchy_spread: f64,
    /// True when the run was cut short because quadrature error reached 10%
    /// of the distance to the limit, or a point failed to evaluate.
    pub truncated: bool,
}

/// Evaluate Phi along the sequence and compare with the boundary value on
/// the sequence's side. Points are independent and evaluated concurrently;
/// records assemble in index order.
pub fn run_convergence(
    curve: &Curve,
    density: &Density,
    seq: &ApproachSequence,
    cfg: &TransformConfig,
) -> Result<ConvergenceReport> {
    let frame = curve.normalize_at(seq.target_tau)?;
    let boundary = boundary_values_in_frame(&frame, density, cfg)?;
    let phi_side = match seq.side {
        Side::Left => boundary.phi_plus,
        Side::Right => boundary.phi_minus,
        Side::OnCurve => unreachable!("sequence sides are validated"),
    };

    let evals = evaluate_points(curve, density, &seq.points, cfg);
    let mut records = Vec::with_capacity(seq.points.len());
    let mut truncated = false;
    for (n, outcome) in evals.into_iter().enumerate() {
        match outcome {
            Ok((phi, quad_error)) => {
                let error = (phi - phi_side).norm();
                records.push(ConvergenceRecord {
                    n: n + 1,
                    z: seq.points[n],
                    phi,
                    error,
                    quad_error,
                });
                // quadrature noise at 10% of a still-unmet distance: deeper
                // points would report noise, not convergence
                if error > cfg.tol && quad_error > 0.1 * error && n + 1 < seq.points.len() {
                    truncated = true;
                    break;
                }
            }
            Err(e) => {
                if records.is_empty() {
                    return Err(e);
                }
                truncated = true;
                break;
            }
        }
    }

    let tail = &records[records.len().saturating_sub(5)..];
    let within_tol = tail.iter().all(|r| r.error <= cfg.tol);
    // factor-2 noise allowance, with a floor so errors at quadrature noise
    // level are not flagged as growth
    let non_increasing = tail
        .windows(2)
        .all(|w| w[1].error <= 2.0 * w[0].error + 10.0 * w[1].quad_error + 1e-14);
    let verdict = if records.len() >= 5 && within_tol && non_increasing {
        Verdict::Converged
    } else {
        Verdict::NotConverged
    };
    let final_error = records.last().map(|r| r.error).unwrap_or(f64::INFINITY);
    let empirical_limit = records.last().map(|r| r.phi).unwrap_or_default();
    let last3 = &records[records.len().saturating_sub(3)..];
    let mut cauchy_spread = 0.0f64;
    for i in 0..last3.len() {
        for j in i + 1..last3.len() {
            cauchy_spread = cauchy_spread.max((last3[i].phi - last3[j].phi).norm());
        }
    }

    Ok(ConvergenceReport {
        target: seq.target,
        side: seq.side,
        phi_side,
        boundary,
        records,
        verdict,
        final_error,
        empirical_limit,
        cauchy_spread,
        truncated,
    })
}

fn evaluate_points(
    curve: &Curve,
    density: &Density,
    points: &[Complex64],
    cfg: &TransformConfig,
) -> Vec<Result<(Complex64, f64)>> {
    let threads = if cfg.threads == 0 {
        std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1)
    } else {
        cfg.threads
    }
    .min(points.len().max(1));

    if threads <= 1 || points.len() <= 2 {
        return points
            .iter()
            .map(|&z| cauchy_transform_detailed(curve, density, z, cfg))
            .collect();
    }
    let mut results: Vec<Option<Result<(Complex64, f64)>>> = Vec::new();
    results.resize_with(points.len(), || None);
    let chunk = points.len().div_ceil(threads);
    std::thread::scope(|scope| {
        for (slot, zs) in results.chunks_mut(chunk).zip(points.chunks(chunk)) {
            scope.spawn(move || {
                for (out, &z) in slot.iter_mut().zip(zs) {
                    *out = Some(cauchy_transform_detailed(curve, density, z, cfg));
                }
            });
        }
    });
    results
        .into_iter()
        .map(|r| r.expect("every chunk filled"))
        .collect()
}

/// Jump and sum residuals measured from two independent convergence runs.
#[derive(Debug, Clone)]
pub struct JumpCheck {
    /// | (Phi_left_limit - Phi_right_limit) - phi(t) |.
    pub jump_residual: f64,
    /// | (Phi_left_limit + Phi_right_limit) - 2 pv_part |.
    pub sum_residual: f64,
    pub left: ConvergenceReport,
    pub right: ConvergenceReport,
}

/// Rebuild the jump and sum relations from the empirical limits of a left
/// and a right approach, not from the constructed boundary values. A
/// discontinuous density leaves both limits well-defined while the jump
/// residual stays at the size of the discontinuity.
pub fn verify_jump(
    curve: &Curve,
    density: &Density,
    tau0: f64,
    cfg: &TransformConfig,
) -> Result<JumpCheck> {
    let frame = curve.normalize_at(tau0)?;
    let radii = default_radii(cfg.depth);
    let left_seq = make_sequence(&frame, Side::Left, SequenceShape::Normal, &radii)?;
    let right_seq = make_sequence(&frame, Side::Right, SequenceShape::Normal, &radii)?;
    let left = run_convergence(curve, density, &left_seq, cfg)?;
    let right = run_convergence(curve, density, &right_seq, cfg)?;

    // the runs themselves must settle (their own limits must exist), even if
    // they disagree with the constructed boundary values
    for (name, run) in [("left", &left), ("right", &right)] {
        let scale = 1.0 + run.empirical_limit.norm();
        if run.cauchy_spread > 0.05 * scale {
            return Err(Error::NotConverged(format!(
                "{name} approach did not settle (spread {:.3e})",
                run.cauchy_spread
            )));
        }
    }
    let density_value = density.try_eval(curve.wrap_param(tau0))?;
    let jump = left.empirical_limit - right.empirical_limit;
    let total = left.empirical_limit + right.empirical_limit;
    Ok(JumpCheck {
        jump_residual: (jump - density_value).norm(),
        sum_residual: (total - 2.0 * left.boundary.pv_part).norm(),
        left,
        right,
    })
}
