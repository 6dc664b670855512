//! Point-local normalized coordinates on a curve.
//!
//! At an interior parameter tau0 the curve is translated by -psi(tau0),
//! rotated so the tangent points along +1, and the parameter is rescaled by
//! the local speed, giving frame coordinates psi~ with psi~(0) = 0 and
//! psi~'(0) = 1. Within the local window the real part u of the frame
//! coordinate is strictly monotone, so the curve is the graph y = G(x) there
//! and points off the curve have a well-defined side: left is +y (the side
//! the +90 degree rotation of the tangent points into; for a counterclockwise
//! closed curve, the interior).

use num_complex::Complex64;

use super::Curve;
use crate::error::{Error, Result};

/// Which side of the oriented curve a point lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
    OnCurve,
}

/// Switch between direct division and the Taylor branch of the regularized
/// kernel, in frame arc-length units.
pub const H_SWITCH: f64 = 1e-4;
/// Distance below which a frame point counts as lying on the curve.
pub const ON_CURVE_TOL: f64 = 1e-12;
/// An open curve cannot be normalized closer to an endpoint than this.
pub const ENDPOINT_TOL: f64 = 1e-9;

/// Normalized local coordinates at one interior curve point.
#[derive(Clone)]
pub struct NormalizedFrame {
    curve: Curve,
    tau0: f64,
    base_point: Complex64,
    rotation: Complex64,
    param_scale: f64,
    window: f64,
    /// psi~''(0), from 4th-order central differences in frame coordinates.
    psi2: Complex64,
    /// psi~'''(0), from central differences.
    psi3: Complex64,
}

impl std::fmt::Debug for NormalizedFrame {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("NormalizedFrame")
            .field("tau0", &self.tau0)
            .field("base_point", &self.base_point)
            .field("rotation", &self.rotation)
            .field("param_scale", &self.param_scale)
            .field("window", &self.window)
            .finish()
    }
}

impl NormalizedFrame {
    pub(super) fn new(curve: &Curve, tau0: f64) -> Result<Self> {
        let (a, b) = curve.domain();
        let tau0 = curve.wrap_param(tau0);
        if !curve.is_closed() && (tau0 - a <= ENDPOINT_TOL || b - tau0 <= ENDPOINT_TOL) {
            return Err(Error::EndpointParameter {
                tau: tau0,
                tol: ENDPOINT_TOL,
            });
        }
        if tau0 < a || tau0 > b {
            return Err(Error::ParameterOutOfDomain { tau: tau0, a, b });
        }
        let base_point = curve.point(tau0);
        let deriv = curve.tangent(tau0);
        let param_scale = deriv.norm();
        let rotation = deriv.conj() / param_scale;

        let mut frame = NormalizedFrame {
            curve: curve.clone(),
            tau0,
            base_point,
            rotation,
            param_scale,
            window: 0.0,
            psi2: Complex64::new(0.0, 0.0),
            psi3: Complex64::new(0.0, 0.0),
        };
        frame.window = frame.find_window();
        let (psi2, psi3) = frame.estimate_derivatives();
        frame.psi2 = psi2;
        frame.psi3 = psi3;
        Ok(frame)
    }

    /// Largest symmetric window (tau0 - delta, tau0 + delta) on which u is
    /// strictly increasing: doubling until the monotonicity check fails, then
    /// bisection, returning the passing (smaller) end of the bracket.
    fn find_window(&self) -> f64 {
        let (a, b) = self.curve.domain();
        let delta_max = if self.curve.is_closed() {
            0.5 * (b - a) * (1.0 - 1e-9)
        } else {
            (self.tau0 - a).min(b - self.tau0)
        };
        let monotone = |delta: f64| -> bool {
            let m = 129;
            for i in 0..=m {
                let tau = self.tau0 - delta + 2.0 * delta * i as f64 / m as f64;
                if self.u_prime(tau) <= 1e-9 * self.param_scale {
                    return false;
                }
            }
            true
        };
        let mut delta = delta_max * 2f64.powi(-20);
        if !monotone(delta) {
            // pathological curvature at tau0; fall back to a tiny window
            return delta;
        }
        while delta < delta_max {
            let next = (delta * 2.0).min(delta_max);
            if monotone(next) {
                delta = next;
            } else {
                // bisect [delta, next]
                let mut lo = delta;
                let mut hi = next;
                for _ in 0..50 {
                    let mid = 0.5 * (lo + hi);
                    if monotone(mid) {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                return lo;
            }
        }
        delta_max
    }

    fn estimate_derivatives(&self) -> (Complex64, Complex64) {
        // frame arc-length step; stay inside the window and the domain
        let h = (0.3 * self.window * self.param_scale).min(1e-2).max(1e-6);
        let p = |sigma: f64| self.psi_tilde(sigma);
        let (p1, m1) = (p(h), p(-h));
        let (p2, m2) = (p(2.0 * h), p(-2.0 * h));
        // 4th-order central second difference (psi~(0) = 0)
        let psi2 = (-p2 + 16.0 * p1 + 16.0 * m1 - m2) / (12.0 * h * h);
        // central third difference
        let psi3 = (p2 - 2.0 * p1 + 2.0 * m1 - m2) / (2.0 * h * h * h);
        (psi2, psi3)
    }

    pub fn tau0(&self) -> f64 {
        self.tau0
    }

    /// The curve this frame was built on.
    pub fn curve(&self) -> &Curve {
        &self.curve
    }

    pub fn base_point(&self) -> Complex64 {
        self.base_point
    }

    /// Translation applied to reach frame coordinates.
    pub fn shift(&self) -> Complex64 {
        -self.base_point
    }

    /// Unit complex number aligning the tangent at tau0 with +1.
    pub fn rotation(&self) -> Complex64 {
        self.rotation
    }

    /// |psi'(tau0)|: ratio between the original parameter and the frame's.
    pub fn param_scale(&self) -> f64 {
        self.param_scale
    }

    /// The window (tau0 - delta, tau0 + delta) in original parameter units.
    pub fn local_window(&self) -> (f64, f64) {
        (self.tau0 - self.window, self.tau0 + self.window)
    }

    /// psi~''(0) estimate used by the kernel's Taylor branch.
    pub fn psi2(&self) -> Complex64 {
        self.psi2
    }

    /// Unit tangent of the curve at the base point.
    pub fn unit_tangent(&self) -> Complex64 {
        self.rotation.conj()
    }

    /// Unit normal pointing to the left of the curve.
    pub fn left_normal(&self) -> Complex64 {
        Complex64::new(0.0, 1.0) * self.rotation.conj()
    }

    /// Map a plane point into frame coordinates.
    pub fn to_frame(&self, z: Complex64) -> Complex64 {
        self.rotation * (z - self.base_point)
    }

    /// Inverse of [`Self::to_frame`].
    pub fn from_frame(&self, w: Complex64) -> Complex64 {
        self.base_point + w * self.rotation.conj()
    }

    /// Original curve parameter for a frame parameter sigma.
    pub fn tau_of_sigma(&self, sigma: f64) -> f64 {
        self.tau0 + sigma / self.param_scale
    }

    /// The frame parameterization psi~(sigma) = rotation (psi(tau0 + sigma/s0) - t0).
    pub fn psi_tilde(&self, sigma: f64) -> Complex64 {
        self.rotation * (self.curve.point(self.tau_of_sigma(sigma)) - self.base_point)
    }

    /// d/d sigma of psi~; equals 1 at sigma = 0.
    pub fn psi_tilde_deriv(&self, sigma: f64) -> Complex64 {
        self.rotation * self.curve.tangent(self.tau_of_sigma(sigma)) / self.param_scale
    }

    /// Frame parameter range corresponding to the curve's domain: closed
    /// curves get one period centered on tau0.
    pub fn sigma_domain(&self) -> (f64, f64) {
        let (a, b) = self.curve.domain();
        if self.curve.is_closed() {
            let half = 0.5 * (b - a) * self.param_scale;
            (-half, half)
        } else {
            (
                (a - self.tau0) * self.param_scale,
                (b - self.tau0) * self.param_scale,
            )
        }
    }

    /// Regularized kernel h(sigma) = sigma / psi~(sigma), extended by
    /// h(0) = 1. Below [`H_SWITCH`] the direct quotient loses digits to
    /// cancellation, so a second-order Taylor expansion with the
    /// finite-difference psi~''(0), psi~'''(0) is used instead.
    pub fn kernel_h(&self, sigma: f64) -> Complex64 {
        if sigma.abs() <= H_SWITCH {
            let a = self.psi2 * 0.5;
            let b = self.psi3 / 6.0;
            Complex64::new(1.0, 0.0) - a * sigma + (a * a - b) * sigma * sigma
        } else {
            sigma / self.psi_tilde(sigma)
        }
    }

    /// u(tau) = Re psi~ at the original parameter tau; strictly increasing on
    /// the local window.
    pub fn u(&self, tau: f64) -> f64 {
        (self.rotation * (self.curve.point(tau) - self.base_point)).re
    }

    fn u_prime(&self, tau: f64) -> f64 {
        (self.rotation * self.curve.tangent(tau)).re
    }

    /// Range of u over the local window.
    pub fn footprint(&self) -> (f64, f64) {
        (self.u(self.tau0 - self.window), self.u(self.tau0 + self.window))
    }

    /// The local graph G with curve points (x, G(x)) in frame coordinates.
    pub fn graph(&self, x: f64) -> Result<f64> {
        let tau = self.u_inverse(x)?;
        Ok((self.rotation * (self.curve.point(tau) - self.base_point)).im)
    }

    fn u_inverse(&self, x: f64) -> Result<f64> {
        let (lo_u, hi_u) = self.footprint();
        let tol = 1e-12 * (1.0 + x.abs());
        if x < lo_u - tol || x > hi_u + tol {
            return Err(Error::OutsideFrameWindow { re: x, im: 0.0 });
        }
        let mut lo = self.tau0 - self.window;
        let mut hi = self.tau0 + self.window;
        let mut tau = self.tau0 + (x / self.param_scale).clamp(lo - self.tau0, hi - self.tau0);
        for _ in 0..100 {
            let g = self.u(tau) - x;
            if g.abs() <= 1e-15 * (1.0 + x.abs()) {
                return Ok(tau);
            }
            if g > 0.0 {
                hi = tau;
            } else {
                lo = tau;
            }
            let d = self.u_prime(tau);
            let mut next = tau - g / d.max(1e-300);
            if !(lo..=hi).contains(&next) {
                next = 0.5 * (lo + hi);
            }
            if (next - tau).abs() <= f64::EPSILON * (1.0 + tau.abs()) {
                return Ok(next);
            }
            tau = next;
        }
        Ok(tau)
    }

    /// Classify which side of the curve `z` lies on, in this frame.
    ///
    /// `z` must project into the window footprint; left means y > G(x) in
    /// frame coordinates (interior of a counterclockwise closed curve).
    pub fn classify_side(&self, z: Complex64) -> Result<Side> {
        let w = self.to_frame(z);
        let (lo_u, hi_u) = self.footprint();
        if w.re < lo_u || w.re > hi_u {
            return Err(Error::OutsideFrameWindow { re: w.re, im: w.im });
        }
        let g = self.graph(w.re)?;
        let dy = w.im - g;
        Ok(if dy.abs() <= ON_CURVE_TOL {
            Side::OnCurve
        } else if dy > 0.0 {
            Side::Left
        } else {
            Side::Right
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn segment_frame_is_identity() {
        let c = Curve::builtin("segment", &[-1.0, 1.0]).unwrap();
        let f = c.normalize_at(0.0).unwrap();
        assert_abs_diff_eq!(f.rotation().re, 1.0);
        assert_abs_diff_eq!(f.rotation().im, 0.0);
        assert_abs_diff_eq!(f.param_scale(), 1.0);
        let (lo, hi) = f.local_window();
        assert_abs_diff_eq!(lo, -1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(hi, 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(f.psi_tilde(0.5).re, 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(f.psi_tilde(0.5).im, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn endpoint_normalization_rejected() {
        let c = Curve::builtin("segment", &[-1.0, 1.0]).unwrap();
        assert!(matches!(
            c.normalize_at(-1.0),
            Err(Error::EndpointParameter { .. })
        ));
        assert!(c.normalize_at(-1.0 + 1e-12).is_err());
    }

    #[test]
    fn circle_frame_normalization_and_graph() {
        let c = Curve::builtin("circle", &[1.0]).unwrap();
        let f = c.normalize_at(PI / 2.0).unwrap();
        assert_abs_diff_eq!((f.base_point() - Complex64::new(0.0, 1.0)).norm(), 0.0, epsilon = 1e-14);
        // psi~(0) = 0, psi~'(0) = 1
        assert_abs_diff_eq!(f.psi_tilde(0.0).norm(), 0.0);
        assert_abs_diff_eq!((f.psi_tilde_deriv(0.0) - Complex64::new(1.0, 0.0)).norm(), 0.0, epsilon = 1e-14);
        // G(0) = 0 and G'(0) = 0 by finite differences
        let h = 1e-5;
        assert_abs_diff_eq!(f.graph(0.0).unwrap(), 0.0, epsilon = 1e-12);
        let gp = (f.graph(h).unwrap() - f.graph(-h).unwrap()) / (2.0 * h);
        assert!(gp.abs() < 1e-6, "G'(0) = {gp:.3e}");
    }

    #[test]
    fn kernel_on_segment_is_one() {
        let c = Curve::builtin("segment", &[-1.0, 1.0]).unwrap();
        let f = c.normalize_at(0.2).unwrap();
        for sigma in [-0.9, -1e-5, 1e-7, 0.0, 1e-3, 0.7] {
            let h = f.kernel_h(sigma);
            assert_abs_diff_eq!(h.re, 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(h.im, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn kernel_on_circle_matches_derivative_limit() {
        // frame at point 1: psi~(sigma) = -i (e^{i sigma} - 1), psi~''(0) = i,
        // so h(0) = 1 and h'(0) = -i/2
        let c = Curve::builtin("circle", &[1.0]).unwrap();
        let f = c.normalize_at(0.0).unwrap();
        assert_abs_diff_eq!((f.kernel_h(0.0) - Complex64::new(1.0, 0.0)).norm(), 0.0);
        assert_abs_diff_eq!((f.psi2() - Complex64::new(0.0, 1.0)).norm(), 0.0, epsilon = 1e-7);
        let h = 1e-3;
        let hp = (f.kernel_h(h) - f.kernel_h(-h)) / (2.0 * h);
        let expect = -f.psi2() / 2.0;
        assert!((hp - expect).norm() < 1e-6, "h'(0) = {hp}, expected {expect}");
    }

    #[test]
    fn kernel_is_continuous_across_the_switch() {
        let c = Curve::builtin("circle", &[1.0]).unwrap();
        let f = c.normalize_at(1.1).unwrap();
        for sign in [-1.0, 1.0] {
            let s = sign * H_SWITCH;
            let below = f.kernel_h(s * (1.0 - 1e-9));
            let above = f.kernel_h(s * (1.0 + 1e-9));
            assert!(
                (below - above).norm() < 1e-10,
                "switch jump {:.3e}",
                (below - above).norm()
            );
        }
    }

    #[test]
    fn kernel_grid_differences_shrink_and_h0_is_exact() {
        let c = Curve::builtin("parabola-graph", &[0.5]).unwrap();
        let f = c.normalize_at(0.1).unwrap();
        let (lo, hi) = f.sigma_domain();
        let max_diff = |n: usize| -> f64 {
            let mut worst: f64 = 0.0;
            let mut prev = f.kernel_h(lo * 0.9);
            for i in 1..=n {
                let s = lo * 0.9 + (hi * 0.9 - lo * 0.9) * i as f64 / n as f64;
                let cur = f.kernel_h(s);
                worst = worst.max((cur - prev).norm());
                prev = cur;
            }
            worst
        };
        let d1 = max_diff(1000);
        let d2 = max_diff(4000);
        assert!(d2 < d1, "refinement should shrink grid jumps: {d1:.3e} vs {d2:.3e}");
        assert_eq!(f.kernel_h(0.0), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn classify_sides_of_segment() {
        let c = Curve::builtin("segment", &[-1.0, 1.0]).unwrap();
        let f = c.normalize_at(0.0).unwrap();
        assert_eq!(f.classify_side(Complex64::new(0.0, 0.1)).unwrap(), Side::Left);
        assert_eq!(f.classify_side(Complex64::new(0.0, -0.1)).unwrap(), Side::Right);
        assert_eq!(f.classify_side(Complex64::new(0.3, 0.0)).unwrap(), Side::OnCurve);
        // reflected points swap sides
        for &(x, y) in &[(0.2, 0.4), (-0.5, 0.01), (0.9, 0.3)] {
            let up = f.classify_side(Complex64::new(x, y)).unwrap();
            let down = f.classify_side(Complex64::new(x, -y)).unwrap();
            assert_eq!(
                (up, down),
                (Side::Left, Side::Right),
                "reflection must swap sides at ({x}, {y})"
            );
        }
        assert!(f.classify_side(Complex64::new(5.0, 0.1)).is_err());
    }

    #[test]
    fn circle_interior_is_left() {
        // counterclockwise circle: winding-number interior = left of the tangent
        let c = Curve::builtin("circle", &[1.0]).unwrap();
        let f = c.normalize_at(0.0).unwrap();
        assert_eq!(f.classify_side(Complex64::new(0.9, 0.0)).unwrap(), Side::Left);
        assert_eq!(f.classify_side(Complex64::new(1.1, 0.0)).unwrap(), Side::Right);
        // reversed (clockwise) circle: interior becomes the right side
        let r = c.reversed();
        let fr = r.normalize_at(0.0).unwrap();
        assert_eq!(fr.classify_side(Complex64::new(0.9, 0.0)).unwrap(), Side::Right);
    }

    #[test]
    fn closed_curve_window_wraps_the_seam() {
        let c = Curve::builtin("circle", &[1.0]).unwrap();
        // tau0 = 0 sits exactly on the parameter seam of the closed curve
        let f = c.normalize_at(0.0).unwrap();
        assert!(f.local_window().0 < 0.0);
        assert!(f.classify_side(Complex64::new(1.0 - 1e-3, -1e-3)).is_ok());
    }
}
