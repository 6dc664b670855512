//! Property tests for the algebraic invariants that hold pointwise.

use num_complex::Complex64;
use plemelj::curve::Curve;
use plemelj::pv::even_odd_split;
use plemelj::report::fmt17;
use proptest::prelude::*;

proptest! {
    /// The even/odd split reconstructs f(x) exactly (the odd part is defined
    /// as the difference), the even part is symmetric, and the odd part is
    /// antisymmetric up to rounding in the averaged term.
    #[test]
    fn even_odd_split_reconstructs_and_has_parity(
        c0 in -10.0..10.0f64,
        c1 in -10.0..10.0f64,
        c2 in -10.0..10.0f64,
        c3 in -10.0..10.0f64,
        x in -1.0..1.0f64,
    ) {
        let f = move |t: f64| Complex64::new(c0 + c1 * t + c2 * t * t, c3 * t);
        let (fe, fo) = even_odd_split(f, x);
        prop_assert_eq!(fe + fo, f(x));
        let (fe_m, _) = even_odd_split(f, -x);
        prop_assert!((fe - fe_m).norm() <= 1e-12 * (1.0 + fe.norm()));
        let (_, fo_m) = even_odd_split(f, -x);
        prop_assert!((fo + fo_m).norm() <= 1e-12 * (1.0 + fo.norm()));
    }

    /// Closed-curve parameters wrap: psi(tau + period) = psi(tau).
    #[test]
    fn closed_curve_parameter_wraps(tau in -20.0..20.0f64) {
        let c = Curve::builtin("circle", &[1.0]).unwrap();
        let (a, b) = c.domain();
        let period = b - a;
        let d = (c.point(tau + period) - c.point(tau)).norm();
        prop_assert!(d <= 1e-12, "wrap gap {d:.3e}");
    }

    /// 17-significant-digit formatting round-trips every finite double.
    #[test]
    fn fmt17_round_trips(x in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL | proptest::num::f64::ZERO) {
        let parsed: f64 = fmt17(x).parse().unwrap();
        prop_assert_eq!(parsed.to_bits(), x.to_bits());
    }
}
