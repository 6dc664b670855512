//! Simple smooth oriented curves in the complex plane.
//!
//! A [`Curve`] owns a parameterization psi: [a, b] -> C with non-vanishing
//! derivative, validated at construction on a dense grid: the derivative must
//! not vanish and the trace must not self-intersect. Closed curves wrap their
//! parameter modulo the period. Builtins cover the segment, circle, circular
//! arc, and a parabola graph; arbitrary point sets are ingested through a C2
//! cubic spline followed by arc-length reparameterization.

mod arclength;
mod frame;
pub(crate) mod spline;

pub use frame::{NormalizedFrame, Side};

use num_complex::Complex64;
use std::sync::Arc;

use crate::error::{Error, Result};
use arclength::ArcLengthParam;
use spline::{CubicSpline, SplineBc};

/// Number of grid cells used for construction-time invariant checks.
const CHECK_GRID: usize = 4096;
/// Pairwise minimum-distance threshold of the simplicity check.
const MIN_SEPARATION: f64 = 1e-9;
/// Relative floor for |psi'| on the check grid.
const MIN_SPEED_RATIO: f64 = 1e-9;

/// A parameterization of a planar curve and its derivative.
pub trait Parameterization: Send + Sync {
    fn point(&self, tau: f64) -> Complex64;
    fn tangent(&self, tau: f64) -> Complex64;
}

/// How the curve was constructed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveKind {
    AnalyticBuiltin,
    SplineFromPoints,
    Custom,
}

/// A simple smooth oriented curve.
#[derive(Clone)]
pub struct Curve {
    param: Arc<dyn Parameterization>,
    domain: (f64, f64),
    closed: bool,
    orientation: i8,
    kind: CurveKind,
    length: f64,
    samples: Vec<(f64, Complex64)>,
}

impl std::fmt::Debug for Curve {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Curve")
            .field("kind", &self.kind)
            .field("domain", &self.domain)
            .field("closed", &self.closed)
            .field("orientation", &self.orientation)
            .field("length", &self.length)
            .finish()
    }
}

struct Segment;
impl Parameterization for Segment {
    fn point(&self, tau: f64) -> Complex64 {
        Complex64::new(tau, 0.0)
    }
    fn tangent(&self, _tau: f64) -> Complex64 {
        Complex64::new(1.0, 0.0)
    }
}

struct Circle {
    radius: f64,
}
impl Parameterization for Circle {
    fn point(&self, tau: f64) -> Complex64 {
        self.radius * Complex64::new(tau.cos(), tau.sin())
    }
    fn tangent(&self, tau: f64) -> Complex64 {
        self.radius * Complex64::new(-tau.sin(), tau.cos())
    }
}

struct ParabolaGraph {
    coeff: f64,
}
impl Parameterization for ParabolaGraph {
    fn point(&self, tau: f64) -> Complex64 {
        Complex64::new(tau, self.coeff * tau * tau)
    }
    fn tangent(&self, tau: f64) -> Complex64 {
        Complex64::new(1.0, 2.0 * self.coeff * tau)
    }
}

struct FnParam<P, T> {
    point: P,
    tangent: T,
}
impl<P, T> Parameterization for FnParam<P, T>
where
    P: Fn(f64) -> Complex64 + Send + Sync,
    T: Fn(f64) -> Complex64 + Send + Sync,
{
    fn point(&self, tau: f64) -> Complex64 {
        (self.point)(tau)
    }
    fn tangent(&self, tau: f64) -> Complex64 {
        (self.tangent)(tau)
    }
}

struct Reversed {
    inner: Arc<dyn Parameterization>,
    sum: f64,
}
impl Parameterization for Reversed {
    fn point(&self, tau: f64) -> Complex64 {
        self.inner.point(self.sum - tau)
    }
    fn tangent(&self, tau: f64) -> Complex64 {
        -self.inner.tangent(self.sum - tau)
    }
}

struct SplineParam {
    re: CubicSpline,
    im: CubicSpline,
}
impl Parameterization for SplineParam {
    fn point(&self, tau: f64) -> Complex64 {
        Complex64::new(self.re.eval(tau), self.im.eval(tau))
    }
    fn tangent(&self, tau: f64) -> Complex64 {
        Complex64::new(self.re.deriv(tau), self.im.deriv(tau))
    }
}

impl Curve {
    /// Construct a builtin analytic curve.
    ///
    /// Supported names: `segment` (params `[a, b]` on the real axis),
    /// `circle` (`[radius]`, counterclockwise, closed), `arc`
    /// (`[radius, theta0, theta1]`), `parabola-graph` (`[coeff]` for
    /// tau + i coeff tau^2 on [-1, 1]).
    pub fn builtin(name: &str, params: &[f64]) -> Result<Curve> {
        match name {
            "segment" => {
                if params.len() != 2 {
                    return Err(Error::InvalidCurveParams(
                        "segment takes [a, b]".to_string(),
                    ));
                }
                let (a, b) = (params[0], params[1]);
                if !(b - a).is_finite() || b - a <= 1e-12 {
                    return Err(Error::InvalidCurveParams(format!(
                        "segment [{a}, {b}] has non-positive length"
                    )));
                }
                Curve::validated(Arc::new(Segment), (a, b), false, CurveKind::AnalyticBuiltin)
            }
            "circle" => {
                if params.len() != 1 {
                    return Err(Error::InvalidCurveParams("circle takes [radius]".to_string()));
                }
                let r = params[0];
                if !(r.is_finite() && r > 0.0) {
                    return Err(Error::InvalidCurveParams(format!("circle radius {r} <= 0")));
                }
                Curve::validated(
                    Arc::new(Circle { radius: r }),
                    (0.0, 2.0 * std::f64::consts::PI),
                    true,
                    CurveKind::AnalyticBuiltin,
                )
            }
            "arc" => {
                if params.len() != 3 {
                    return Err(Error::InvalidCurveParams(
                        "arc takes [radius, theta0, theta1]".to_string(),
                    ));
                }
                let (r, t0, t1) = (params[0], params[1], params[2]);
                if !(r.is_finite() && r > 0.0) {
                    return Err(Error::InvalidCurveParams(format!("arc radius {r} <= 0")));
                }
                if !(t1 - t0).is_finite()
                    || t1 - t0 <= 1e-12
                    || t1 - t0 >= 2.0 * std::f64::consts::PI
                {
                    return Err(Error::InvalidCurveParams(format!(
                        "arc angles [{t0}, {t1}] must span (0, 2 pi)"
                    )));
                }
                Curve::validated(
                    Arc::new(Circle { radius: r }),
                    (t0, t1),
                    false,
                    CurveKind::AnalyticBuiltin,
                )
            }
            "parabola-graph" => {
                if params.len() != 1 {
                    return Err(Error::InvalidCurveParams(
                        "parabola-graph takes [coeff]".to_string(),
                    ));
                }
                let c = params[0];
                if !c.is_finite() {
                    return Err(Error::InvalidCurveParams("non-finite coefficient".to_string()));
                }
                Curve::validated(
                    Arc::new(ParabolaGraph { coeff: c }),
                    (-1.0, 1.0),
                    false,
                    CurveKind::AnalyticBuiltin,
                )
            }
            other => Err(Error::UnknownCurve(other.to_string())),
        }
    }

    /// Build a curve through the given points: C2 cubic spline over the chord
    /// parameter, then arc-length reparameterized. `closed` curves get a
    /// periodic spline (the first point must not be repeated at the end).
    pub fn from_points(points: &[Complex64], closed: bool) -> Result<Curve> {
        let mut pts = points.to_vec();
        if closed && pts.len() >= 2 {
            let first = pts[0];
            let last = *pts.last().expect("non-empty");
            if (last - first).norm() <= 1e-12 * (1.0 + first.norm()) {
                pts.pop();
            }
        }
        if pts.len() < 4 {
            return Err(Error::TooFewPoints {
                min: 4,
                got: pts.len(),
            });
        }
        for (i, w) in pts.windows(2).enumerate() {
            if (w[1] - w[0]).norm() == 0.0 {
                return Err(Error::DuplicatePoint { index: i });
            }
        }

        // chord-length parameter
        let mut knots = Vec::with_capacity(pts.len() + 1);
        knots.push(0.0);
        let mut acc = 0.0;
        for w in pts.windows(2) {
            acc += (w[1] - w[0]).norm();
            knots.push(acc);
        }
        let (xs, re, im, bc) = if closed {
            let mut xs = knots;
            let last_chord = (pts[0] - *pts.last().expect("non-empty")).norm();
            if last_chord == 0.0 {
                return Err(Error::DuplicatePoint {
                    index: pts.len() - 1,
                });
            }
            let total = acc + last_chord;
            xs.push(total);
            let mut re: Vec<f64> = pts.iter().map(|p| p.re).collect();
            let mut im: Vec<f64> = pts.iter().map(|p| p.im).collect();
            re.push(pts[0].re);
            im.push(pts[0].im);
            (xs, re, im, SplineBc::Periodic)
        } else {
            let re = pts.iter().map(|p| p.re).collect();
            let im = pts.iter().map(|p| p.im).collect();
            (knots, re, im, SplineBc::NotAKnot)
        };

        let (a, b) = (xs[0], *xs.last().expect("non-empty"));
        let spline = SplineParam {
            re: CubicSpline::new(xs.clone(), re, bc),
            im: CubicSpline::new(xs, im, bc),
        };
        let arclen = ArcLengthParam::new(Arc::new(spline), a, b);
        let total = arclen.total_length();
        Curve::validated(
            Arc::new(arclen),
            (0.0, total),
            closed,
            CurveKind::SplineFromPoints,
        )
    }

    /// Wrap caller-supplied parameterization closures in a validated curve.
    pub fn from_fns<P, T>(point: P, tangent: T, domain: (f64, f64), closed: bool) -> Result<Curve>
    where
        P: Fn(f64) -> Complex64 + Send + Sync + 'static,
        T: Fn(f64) -> Complex64 + Send + Sync + 'static,
    {
        Curve::validated(
            Arc::new(FnParam { point, tangent }),
            domain,
            closed,
            CurveKind::Custom,
        )
    }

    fn validated(
        param: Arc<dyn Parameterization>,
        domain: (f64, f64),
        closed: bool,
        kind: CurveKind,
    ) -> Result<Curve> {
        let (a, b) = domain;
        if !(a.is_finite() && b.is_finite() && b > a) {
            return Err(Error::InvalidCurveParams(format!(
                "domain [{a}, {b}] is not a proper interval"
            )));
        }
        let n = CHECK_GRID;
        let dt = (b - a) / n as f64;
        let mut samples = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let tau = a + i as f64 * dt;
            samples.push((tau, param.point(tau)));
        }

        // derivative must not vanish
        let speeds: Vec<f64> = (0..=n)
            .map(|i| param.tangent(a + i as f64 * dt).norm())
            .collect();
        let max_speed = speeds.iter().cloned().fold(0.0, f64::max);
        if max_speed == 0.0 || !max_speed.is_finite() {
            return Err(Error::VanishingDerivative { tau: a });
        }
        if let Some(i) = speeds.iter().position(|&s| s < MIN_SPEED_RATIO * max_speed) {
            return Err(Error::VanishingDerivative {
                tau: a + i as f64 * dt,
            });
        }

        // closed flag must match the geometry
        let scale = samples
            .iter()
            .map(|(_, p)| p.norm())
            .fold(0.0, f64::max)
            .max(1.0);
        let gap = (samples[n].1 - samples[0].1).norm();
        if closed && gap > 1e-7 * scale {
            return Err(Error::InvalidCurveParams(format!(
                "declared closed but endpoints are {gap:.3e} apart"
            )));
        }

        check_simplicity(&samples, closed)?;

        // composite Simpson for the total arc length
        let mut length = 0.0;
        for i in 0..n {
            let t0 = a + i as f64 * dt;
            let tm = t0 + 0.5 * dt;
            length += dt / 6.0
                * (speeds[i] + 4.0 * param.tangent(tm).norm() + speeds[i + 1]);
        }

        Ok(Curve {
            param,
            domain,
            closed,
            orientation: 1,
            kind,
            length,
            samples,
        })
    }

    /// Map a parameter into the fundamental domain (closed curves wrap).
    pub fn wrap_param(&self, tau: f64) -> f64 {
        let (a, b) = self.domain;
        if self.closed {
            a + (tau - a).rem_euclid(b - a)
        } else {
            tau
        }
    }

    pub fn point(&self, tau: f64) -> Complex64 {
        self.param.point(self.wrap_param(tau))
    }

    pub fn tangent(&self, tau: f64) -> Complex64 {
        self.param.tangent(self.wrap_param(tau))
    }

    pub fn unit_tangent(&self, tau: f64) -> Complex64 {
        let d = self.tangent(tau);
        d / d.norm()
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    /// +1 when the curve is traversed in its constructed direction, -1 after
    /// an odd number of `reversed` calls.
    pub fn orientation(&self) -> i8 {
        self.orientation
    }

    pub fn kind(&self) -> CurveKind {
        self.kind
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    /// The same geometric curve traversed the other way.
    pub fn reversed(&self) -> Curve {
        let (a, b) = self.domain;
        let param: Arc<dyn Parameterization> = Arc::new(Reversed {
            inner: Arc::clone(&self.param),
            sum: a + b,
        });
        let samples = self
            .samples
            .iter()
            .rev()
            .map(|(t, p)| (a + b - t, *p))
            .collect();
        Curve {
            param,
            domain: self.domain,
            closed: self.closed,
            orientation: -self.orientation,
            kind: self.kind,
            length: self.length,
            samples,
        }
    }

    /// Reparameterize by arc length; the new domain is [0, length] and
    /// |psi'| = 1 everywhere.
    pub fn to_arc_length(&self) -> Result<Curve> {
        let (a, b) = self.domain;
        let arclen = ArcLengthParam::new(Arc::clone(&self.param), a, b);
        let total = arclen.total_length();
        let mut c = Curve::validated(Arc::new(arclen), (0.0, total), self.closed, self.kind)?;
        c.orientation = self.orientation;
        Ok(c)
    }

    /// Nearest parameter and distance from `z` to the curve (grid scan plus
    /// golden-section refinement).
    pub fn nearest(&self, z: Complex64) -> (f64, f64) {
        let mut best_i = 0;
        let mut best = f64::INFINITY;
        for (i, (_, p)) in self.samples.iter().enumerate() {
            let d = (p - z).norm_sqr();
            if d < best {
                best = d;
                best_i = i;
            }
        }
        let (a, b) = self.domain;
        let step = (b - a) / CHECK_GRID as f64;
        let t_hit = self.samples[best_i].0;
        let (mut lo, mut hi) = (t_hit - step, t_hit + step);
        if !self.closed {
            lo = lo.max(a);
            hi = hi.min(b);
        }
        let dist2 = |t: f64| (self.point(t) - z).norm_sqr();
        // golden-section search on the bracketing interval
        let phi = (5f64.sqrt() - 1.0) / 2.0;
        let mut c = hi - phi * (hi - lo);
        let mut d = lo + phi * (hi - lo);
        let (mut fc, mut fd) = (dist2(c), dist2(d));
        for _ in 0..80 {
            if fc < fd {
                hi = d;
                d = c;
                fd = fc;
                c = hi - phi * (hi - lo);
                fc = dist2(c);
            } else {
                lo = c;
                c = d;
                fc = fd;
                d = lo + phi * (hi - lo);
                fd = dist2(d);
            }
            if hi - lo <= 1e-15 * (1.0 + t_hit.abs()) {
                break;
            }
        }
        let t = self.wrap_param(0.5 * (lo + hi));
        (t, dist2(t).sqrt().min(best.sqrt()))
    }

    /// Normalize coordinates at an interior parameter: see [`NormalizedFrame`].
    pub fn normalize_at(&self, tau0: f64) -> Result<NormalizedFrame> {
        NormalizedFrame::new(self, tau0)
    }
}

/// Squared distance between 2D segments [p0, p1] and [q0, q1].
fn segment_distance_sq(p0: Complex64, p1: Complex64, q0: Complex64, q1: Complex64) -> f64 {
    let cross = |u: Complex64, v: Complex64| u.re * v.im - u.im * v.re;
    let d1 = p1 - p0;
    let d2 = q1 - q0;
    let r = q0 - p0;
    let c1 = cross(d1, r);
    let c2 = cross(d1, q1 - p0);
    let c3 = cross(d2, p0 - q0);
    let c4 = cross(d2, p1 - q0);
    if ((c1 > 0.0) != (c2 > 0.0)) && ((c3 > 0.0) != (c4 > 0.0)) {
        return 0.0; // proper crossing
    }
    let point_seg = |p: Complex64, a: Complex64, b: Complex64| -> f64 {
        let ab = b - a;
        let len2 = ab.norm_sqr();
        if len2 == 0.0 {
            return (p - a).norm_sqr();
        }
        let t = (((p - a) * ab.conj()).re / len2).clamp(0.0, 1.0);
        (p - (a + t * ab)).norm_sqr()
    };
    point_seg(p0, q0, q1)
        .min(point_seg(p1, q0, q1))
        .min(point_seg(q0, p0, p1))
        .min(point_seg(q1, p0, p1))
}

/// Grid-based simplicity guard: no two non-adjacent grid segments may come
/// closer than [`MIN_SEPARATION`]. A guard, not a proof.
fn check_simplicity(samples: &[(f64, Complex64)], closed: bool) -> Result<()> {
    let nseg = samples.len() - 1;
    let mut max_len: f64 = 0.0;
    for w in samples.windows(2) {
        max_len = max_len.max((w[1].1 - w[0].1).norm());
    }
    let cell = (2.0 * max_len).max(MIN_SEPARATION);
    use std::collections::HashMap;
    let mut bins: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    let key = |p: Complex64| ((p.re / cell).floor() as i64, (p.im / cell).floor() as i64);
    for i in 0..nseg {
        let mid = 0.5 * (samples[i].1 + samples[i + 1].1);
        bins.entry(key(mid)).or_default().push(i);
    }
    let adjacent = |i: usize, j: usize| -> bool {
        let d = i.abs_diff(j);
        d <= 1 || (closed && d >= nseg - 1)
    };
    for (&(kx, ky), members) in &bins {
        for dx in -1..=1i64 {
            for dy in -1..=1i64 {
                let neigh = match bins.get(&(kx + dx, ky + dy)) {
                    Some(v) => v,
                    None => continue,
                };
                for &i in members {
                    for &j in neigh {
                        if j <= i || adjacent(i, j) {
                            continue;
                        }
                        let d2 = segment_distance_sq(
                            samples[i].1,
                            samples[i + 1].1,
                            samples[j].1,
                            samples[j + 1].1,
                        );
                        if d2 < MIN_SEPARATION * MIN_SEPARATION {
                            return Err(Error::SelfIntersection {
                                tau1: samples[i].0,
                                tau2: samples[j].0,
                                dist: d2.sqrt(),
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn segment_is_identity() {
        let c = Curve::builtin("segment", &[-1.0, 1.0]).unwrap();
        assert_eq!(c.kind(), CurveKind::AnalyticBuiltin);
        assert!(!c.is_closed());
        assert_abs_diff_eq!(c.point(0.3).re, 0.3);
        assert_abs_diff_eq!(c.point(0.3).im, 0.0);
        assert_abs_diff_eq!(c.tangent(-0.7).re, 1.0);
        assert_abs_diff_eq!(c.length(), 2.0, epsilon = 1e-10);
    }

    #[test]
    fn unit_circle_is_closed_unit_speed() {
        let c = Curve::builtin("circle", &[1.0]).unwrap();
        assert!(c.is_closed());
        assert_abs_diff_eq!(c.length(), 2.0 * PI, epsilon = 1e-9);
        for i in 0..16 {
            let tau = 2.0 * PI * i as f64 / 16.0;
            assert_abs_diff_eq!(c.tangent(tau).norm(), 1.0, epsilon = 1e-12);
        }
        // parameter wraps
        assert_abs_diff_eq!((c.point(2.0 * PI + 0.25) - c.point(0.25)).norm(), 0.0);
    }

    #[test]
    fn parabola_graph_is_simple_with_nonvanishing_derivative() {
        let c = Curve::builtin("parabola-graph", &[0.5]).unwrap();
        let (a, b) = c.domain();
        let n = 10_000;
        for i in 0..=n {
            let tau = a + (b - a) * i as f64 / n as f64;
            assert!(c.tangent(tau).norm() > 0.9);
        }
        assert_abs_diff_eq!(c.point(0.5).im, 0.125);
    }

    #[test]
    fn builtin_errors() {
        assert!(matches!(
            Curve::builtin("helix", &[1.0]),
            Err(Error::UnknownCurve(_))
        ));
        assert!(matches!(
            Curve::builtin("circle", &[0.0]),
            Err(Error::InvalidCurveParams(_))
        ));
        assert!(matches!(
            Curve::builtin("segment", &[1.0, 1.0]),
            Err(Error::InvalidCurveParams(_))
        ));
    }

    #[test]
    fn spline_circle_stays_on_unit_circle() {
        let n = 64;
        let pts: Vec<Complex64> = (0..n)
            .map(|i| {
                let th = 2.0 * PI * i as f64 / n as f64;
                Complex64::new(th.cos(), th.sin())
            })
            .collect();
        let c = Curve::from_points(&pts, true).unwrap();
        assert!(c.is_closed());
        assert_eq!(c.kind(), CurveKind::SplineFromPoints);
        let (a, b) = c.domain();
        let mut worst: f64 = 0.0;
        for i in 0..=4096 {
            let tau = a + (b - a) * i as f64 / 4096.0;
            worst = worst.max((c.point(tau).norm() - 1.0).abs());
        }
        assert!(worst < 1e-6, "deviation from unit circle {worst:.3e}");
        // arc-length: unit speed
        for i in 0..32 {
            let tau = a + (b - a) * i as f64 / 32.0;
            assert_abs_diff_eq!(c.tangent(tau).norm(), 1.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn collinear_points_make_a_segment() {
        let pts: Vec<Complex64> = [0.0, 0.4, 0.7, 1.0]
            .iter()
            .map(|&x| Complex64::new(x, 0.0))
            .collect();
        let c = Curve::from_points(&pts, false).unwrap();
        assert_abs_diff_eq!(c.length(), 1.0, epsilon = 1e-9);
        let (a, b) = c.domain();
        for i in 0..=64 {
            let tau = a + (b - a) * i as f64 / 64.0;
            assert_abs_diff_eq!(c.point(tau).im, 0.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn figure_eight_is_rejected() {
        let n = 48;
        let pts: Vec<Complex64> = (0..n)
            .map(|i| {
                let t = 2.0 * PI * i as f64 / n as f64;
                Complex64::new(t.sin(), t.sin() * t.cos())
            })
            .collect();
        match Curve::from_points(&pts, true) {
            Err(Error::SelfIntersection { .. }) => {}
            other => panic!("expected self-intersection, got {other:?}"),
        }
    }

    #[test]
    fn too_few_points() {
        let pts = vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(2.0, 0.0),
        ];
        assert!(matches!(
            Curve::from_points(&pts, false),
            Err(Error::TooFewPoints { .. })
        ));
    }

    #[test]
    fn nearest_point_on_circle() {
        let c = Curve::builtin("circle", &[1.0]).unwrap();
        let (tau, dist) = c.nearest(Complex64::new(0.0, 2.0));
        assert_abs_diff_eq!(dist, 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(tau, PI / 2.0, epsilon = 1e-6);
    }

    #[test]
    fn reversed_flips_orientation_and_geometry_matches() {
        let c = Curve::builtin("parabola-graph", &[0.3]).unwrap();
        let r = c.reversed();
        assert_eq!(r.orientation(), -1);
        let (a, b) = c.domain();
        for i in 0..=16 {
            let tau = a + (b - a) * i as f64 / 16.0;
            let mirror = a + b - tau;
            assert_abs_diff_eq!((c.point(tau) - r.point(mirror)).norm(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn arc_length_variant_has_unit_speed() {
        let c = Curve::builtin("parabola-graph", &[0.5]).unwrap();
        let al = c.to_arc_length().unwrap();
        assert_abs_diff_eq!(al.length(), c.length(), epsilon = 1e-8);
        let (a, b) = al.domain();
        for i in 0..=64 {
            let s = a + (b - a) * i as f64 / 64.0;
            assert_abs_diff_eq!(al.tangent(s).norm(), 1.0, epsilon = 1e-10);
        }
    }
}
