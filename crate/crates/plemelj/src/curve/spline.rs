//! Cubic spline interpolation: C2 splines (not-a-knot and periodic boundary
//! conditions) for curve parameterizations, and monotone-safe cubic Hermite
//! (Fritsch-Carlson) for tabulated densities.

/// C2 cubic spline through (xs[i], ys[i]).
#[derive(Debug, Clone)]
pub struct CubicSpline {
    xs: Vec<f64>,
    ys: Vec<f64>,
    /// second derivatives at the knots
    m: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplineBc {
    /// Third derivative continuous across the second and second-to-last knots.
    NotAKnot,
    /// ys[n-1] must equal ys[0]; value and first two derivatives wrap.
    Periodic,
}

impl CubicSpline {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>, bc: SplineBc) -> Self {
        assert_eq!(xs.len(), ys.len());
        let n = xs.len();
        assert!(n >= 4, "cubic spline needs at least 4 knots");
        for w in xs.windows(2) {
            assert!(w[1] > w[0], "spline knots must be strictly increasing");
        }
        let m = match bc {
            SplineBc::NotAKnot => solve_not_a_knot(&xs, &ys),
            SplineBc::Periodic => {
                assert!(
                    (ys[n - 1] - ys[0]).abs() <= 1e-12 * (1.0 + ys[0].abs()),
                    "periodic spline data must close up"
                );
                solve_periodic(&xs, &ys)
            }
        };
        Self { xs, ys, m }
    }

    fn interval(&self, x: f64) -> usize {
        let n = self.xs.len();
        match self.xs.binary_search_by(|v| v.partial_cmp(&x).unwrap()) {
            Ok(i) => i.min(n - 2),
            Err(0) => 0,
            Err(i) if i >= n => n - 2,
            Err(i) => i - 1,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let i = self.interval(x);
        let (x0, x1) = (self.xs[i], self.xs[i + 1]);
        let h = x1 - x0;
        let (a, b) = (x1 - x, x - x0);
        self.m[i] * a * a * a / (6.0 * h)
            + self.m[i + 1] * b * b * b / (6.0 * h)
            + (self.ys[i] / h - self.m[i] * h / 6.0) * a
            + (self.ys[i + 1] / h - self.m[i + 1] * h / 6.0) * b
    }

    pub fn deriv(&self, x: f64) -> f64 {
        let i = self.interval(x);
        let (x0, x1) = (self.xs[i], self.xs[i + 1]);
        let h = x1 - x0;
        let (a, b) = (x1 - x, x - x0);
        -self.m[i] * a * a / (2.0 * h)
            + self.m[i + 1] * b * b / (2.0 * h)
            + (self.ys[i + 1] - self.ys[i]) / h
            - (self.m[i + 1] - self.m[i]) * h / 6.0
    }

}

/// Thomas algorithm for a tridiagonal system; diagonals (sub, diag, sup).
fn solve_tridiagonal(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    c[0] = sup[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for i in 1..n {
        let m = diag[i] - sub[i] * c[i - 1];
        c[i] = if i < n - 1 { sup[i] / m } else { 0.0 };
        d[i] = (rhs[i] - sub[i] * d[i - 1]) / m;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    x
}

fn solve_not_a_knot(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    let n = xs.len();
    let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
    let slope: Vec<f64> = (0..n - 1).map(|i| (ys[i + 1] - ys[i]) / h[i]).collect();

    // unknowns M_1..M_{n-2}; M_0 and M_{n-1} eliminated via the
    // not-a-knot relations M_0 = (1 + h0/h1) M_1 - (h0/h1) M_2 (mirrored at
    // the right end)
    let k = n - 2;
    let mut sub = vec![0.0; k];
    let mut diag = vec![0.0; k];
    let mut sup = vec![0.0; k];
    let mut rhs = vec![0.0; k];
    for (row, i) in (1..n - 1).enumerate() {
        let hl = h[i - 1];
        let hr = h[i];
        sub[row] = hl / 6.0;
        diag[row] = (hl + hr) / 3.0;
        sup[row] = hr / 6.0;
        rhs[row] = slope[i] - slope[i - 1];
    }
    // fold M_0 into the first row
    let r0 = h[0] / h[1];
    diag[0] += sub[0] * (1.0 + r0);
    sup[0] -= sub[0] * r0;
    sub[0] = 0.0;
    // fold M_{n-1} into the last row
    let r1 = h[n - 2] / h[n - 3];
    diag[k - 1] += sup[k - 1] * (1.0 + r1);
    sub[k - 1] -= sup[k - 1] * r1;
    sup[k - 1] = 0.0;

    let inner = solve_tridiagonal(&sub, &diag, &sup, &rhs);
    let mut m = vec![0.0; n];
    m[1..n - 1].copy_from_slice(&inner);
    m[0] = (1.0 + r0) * m[1] - r0 * m[2];
    m[n - 1] = (1.0 + r1) * m[n - 2] - r1 * m[n - 3];
    m
}

fn solve_periodic(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    // unknowns M_0..M_{n-2}, with M_{n-1} = M_0; cyclic tridiagonal solved
    // by Sherman-Morrison on top of two Thomas solves
    let n = xs.len();
    let k = n - 1;
    let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
    let slope: Vec<f64> = (0..k).map(|i| (ys[i + 1] - ys[i]) / h[i]).collect();

    let hl = |i: usize| h[(i + k - 1) % k];
    let hr = |i: usize| h[i];
    let sl = |i: usize| slope[(i + k - 1) % k];
    let sr = |i: usize| slope[i];

    let mut sub = vec![0.0; k];
    let mut diag = vec![0.0; k];
    let mut sup = vec![0.0; k];
    let mut rhs = vec![0.0; k];
    for i in 0..k {
        sub[i] = hl(i) / 6.0;
        diag[i] = (hl(i) + hr(i)) / 3.0;
        sup[i] = hr(i) / 6.0;
        rhs[i] = sr(i) - sl(i);
    }
    if k == 1 {
        return vec![rhs[0] / diag[0]; n];
    }
    // corner entries: top-right A[0][k-1] = sub[0], bottom-left A[k-1][0] = sup[k-1]
    let top_right = sub[0];
    let bottom_left = sup[k - 1];
    let gamma = -diag[0];
    let mut diag_mod = diag.clone();
    diag_mod[0] -= gamma;
    diag_mod[k - 1] -= top_right * bottom_left / gamma;
    let mut sub_t = sub;
    sub_t[0] = 0.0;
    let mut sup_t = sup;
    sup_t[k - 1] = 0.0;

    let y = solve_tridiagonal(&sub_t, &diag_mod, &sup_t, &rhs);
    let mut u = vec![0.0; k];
    u[0] = gamma;
    u[k - 1] = bottom_left;
    let z = solve_tridiagonal(&sub_t, &diag_mod, &sup_t, &u);

    let fact = (y[0] + top_right * y[k - 1] / gamma) / (1.0 + z[0] + top_right * z[k - 1] / gamma);
    let mut m = vec![0.0; n];
    for i in 0..k {
        m[i] = y[i] - fact * z[i];
    }
    m[n - 1] = m[0];
    m
}

/// Monotone-safe piecewise cubic Hermite interpolant (Fritsch-Carlson
/// slopes). Does not extrapolate: `eval` returns `None` outside the data.
#[derive(Debug, Clone)]
pub struct Pchip {
    xs: Vec<f64>,
    ys: Vec<f64>,
    d: Vec<f64>,
}

impl Pchip {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Self {
        assert_eq!(xs.len(), ys.len());
        let n = xs.len();
        assert!(n >= 2);
        let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
        let delta: Vec<f64> = (0..n - 1).map(|i| (ys[i + 1] - ys[i]) / h[i]).collect();
        let mut d = vec![0.0; n];
        for i in 1..n - 1 {
            if delta[i - 1] * delta[i] <= 0.0 {
                d[i] = 0.0;
            } else {
                let w1 = 2.0 * h[i] + h[i - 1];
                let w2 = h[i] + 2.0 * h[i - 1];
                d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
            }
        }
        d[0] = edge_slope(h[0], h.get(1).copied().unwrap_or(h[0]), delta[0], delta.get(1).copied().unwrap_or(delta[0]));
        let dn = edge_slope(
            h[n - 2],
            if n >= 3 { h[n - 3] } else { h[n - 2] },
            delta[n - 2],
            if n >= 3 { delta[n - 3] } else { delta[n - 2] },
        );
        d[n - 1] = dn;
        Self { xs, ys, d }
    }

    pub fn eval(&self, x: f64) -> Option<f64> {
        let n = self.xs.len();
        if x < self.xs[0] || x > self.xs[n - 1] {
            return None;
        }
        let i = match self.xs.binary_search_by(|v| v.partial_cmp(&x).unwrap()) {
            Ok(i) => i.min(n - 2),
            Err(i) => i.saturating_sub(1).min(n - 2),
        };
        let h = self.xs[i + 1] - self.xs[i];
        let t = (x - self.xs[i]) / h;
        let h00 = (1.0 + 2.0 * t) * (1.0 - t) * (1.0 - t);
        let h10 = t * (1.0 - t) * (1.0 - t);
        let h01 = t * t * (3.0 - 2.0 * t);
        let h11 = t * t * (t - 1.0);
        Some(h00 * self.ys[i] + h10 * h * self.d[i] + h01 * self.ys[i + 1] + h11 * h * self.d[i + 1])
    }

}

fn edge_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    // one-sided three-point estimate, clipped for shape preservation
    let d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if d * d0 <= 0.0 {
        0.0
    } else if d0 * d1 <= 0.0 && d.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        d
    }
}
