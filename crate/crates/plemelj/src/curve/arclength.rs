//! Arc-length reparameterization of a curve parameterization.
//!
//! A cumulative Simpson table of |psi'| over a dense grid maps the original
//! parameter to arc length; the inverse map is computed per query by a
//! bracketed Newton iteration against the table, so the reparameterized
//! tangent psi'(tau)/|psi'(tau)| has unit modulus by construction.

use num_complex::Complex64;
use std::sync::Arc;

use super::Parameterization;

const TABLE_CELLS: usize = 4096;

#[derive(Clone)]
pub struct ArcLengthParam {
    inner: Arc<dyn Parameterization>,
    taus: Vec<f64>,
    cums: Vec<f64>,
    total: f64,
}

impl ArcLengthParam {
    pub fn new(inner: Arc<dyn Parameterization>, a: f64, b: f64) -> Self {
        let n = TABLE_CELLS;
        let dt = (b - a) / n as f64;
        let speed = |t: f64| inner.tangent(t).norm();
        let mut taus = Vec::with_capacity(n + 1);
        let mut cums = Vec::with_capacity(n + 1);
        taus.push(a);
        cums.push(0.0);
        let mut acc = 0.0;
        for i in 0..n {
            let t0 = a + i as f64 * dt;
            let t1 = t0 + dt;
            let tm = 0.5 * (t0 + t1);
            acc += dt / 6.0 * (speed(t0) + 4.0 * speed(tm) + speed(t1));
            taus.push(t1);
            cums.push(acc);
        }
        let total = acc;
        Self {
            inner,
            taus,
            cums,
            total,
        }
    }

    pub fn total_length(&self) -> f64 {
        self.total
    }

    /// Original parameter at arc length `s` (clamped to the table range).
    pub fn tau_of_s(&self, s: f64) -> f64 {
        let s = s.clamp(0.0, self.total);
        let idx = match self
            .cums
            .binary_search_by(|v| v.partial_cmp(&s).unwrap())
        {
            Ok(i) => return self.taus[i],
            Err(i) => i.clamp(1, self.cums.len() - 1) - 1,
        };
        let (s0, s1) = (self.cums[idx], self.cums[idx + 1]);
        let (t0, t1) = (self.taus[idx], self.taus[idx + 1]);
        // bracketed Newton on g(t) = s0 + simpson(t0 -> t) - s
        let speed = |t: f64| self.inner.tangent(t).norm();
        let local = |t: f64| {
            let tm = 0.5 * (t0 + t);
            (t - t0) / 6.0 * (speed(t0) + 4.0 * speed(tm) + speed(t))
        };
        let mut lo = t0;
        let mut hi = t1;
        let mut t = t0 + (t1 - t0) * (s - s0) / (s1 - s0).max(1e-300);
        for _ in 0..30 {
            let g = s0 + local(t) - s;
            if g.abs() <= 1e-14 * self.total.max(1.0) {
                break;
            }
            if g > 0.0 {
                hi = t;
            } else {
                lo = t;
            }
            let dg = speed(t);
            let mut next = t - g / dg.max(1e-300);
            if !(lo..=hi).contains(&next) {
                next = 0.5 * (lo + hi);
            }
            if (next - t).abs() <= 1e-16 * (t1 - t0).abs() {
                t = next;
                break;
            }
            t = next;
        }
        t
    }
}

impl Parameterization for ArcLengthParam {
    fn point(&self, s: f64) -> Complex64 {
        self.inner.point(self.tau_of_s(s))
    }

    fn tangent(&self, s: f64) -> Complex64 {
        let tau = self.tau_of_s(s);
        let d = self.inner.tangent(tau);
        d / d.norm()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    struct Scaled;
    impl Parameterization for Scaled {
        fn point(&self, t: f64) -> Complex64 {
            2.0 * Complex64::new(t.cos(), t.sin())
        }
        fn tangent(&self, t: f64) -> Complex64 {
            2.0 * Complex64::new(-t.sin(), t.cos())
        }
    }

    #[test]
    fn circle_radius_two_arclength() {
        let p = ArcLengthParam::new(Arc::new(Scaled), 0.0, 2.0 * PI);
        assert_abs_diff_eq!(p.total_length(), 4.0 * PI, epsilon = 1e-10);
        for i in 0..=37 {
            let s = 4.0 * PI * i as f64 / 37.0;
            assert_abs_diff_eq!(p.tangent(s).norm(), 1.0, epsilon = 1e-12);
            // point at arc length s sits at angle s/2
            let expect = 2.0 * Complex64::new((s / 2.0).cos(), (s / 2.0).sin());
            assert_abs_diff_eq!((p.point(s) - expect).norm(), 0.0, epsilon = 1e-9);
        }
    }
}
