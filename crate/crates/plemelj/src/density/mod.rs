//! Densities on curves and their regularity.
//!
//! A [`Density`] evaluates a complex value at a curve parameter. Builtins
//! supply the canonical regularity examples: a density that is Dini but not
//! Holder continuous at 0 (`dini-log`), Holder powers, and the discontinuous
//! `step` counterexample for which the jump relation fails while the lateral
//! limits and the principal value still exist.

mod modulus;

pub use modulus::{
    bootstrap_se, classify_regularity, default_grid, estimate_modulus, HolderFit,
    ModulusEstimate, PairRecord, Regularity, HOLDER_FIT_RANGE, HOLDER_RESIDUAL_TOL,
};

use num_complex::Complex64;
use std::sync::Arc;

use crate::curve::spline::Pchip;
use crate::error::{Error, Result};

/// Where a density came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DensitySource {
    Builtin(String),
    Tabulated,
    Custom,
}

/// Declared (not verified) regularity of a density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RegularityClass {
    Holder(f64),
    Dini,
    ContinuousOnly,
    Discontinuous,
}

/// A complex-valued density on a curve, evaluated at the curve parameter.
/// For the segment builtin the parameter is the point itself.
#[derive(Clone)]
pub struct Density {
    eval: Arc<dyn Fn(f64) -> Complex64 + Send + Sync>,
    source: DensitySource,
    declared: Option<RegularityClass>,
}

impl std::fmt::Debug for Density {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Density")
            .field("source", &self.source)
            .field("declared", &self.declared)
            .finish()
    }
}

/// Cut point of the dini-log builtin.
pub fn dini_log_cut() -> f64 {
    (-3.0f64).exp()
}

/// The dini-log profile: log(x)^-2 on (0, e^-3), tapered to 0 at the cut by
/// a C1 smoothstep on [e^-3/2, e^-3] so the density is continuous there, and
/// 0 elsewhere. Near 0 this is Dini continuous but Holder continuous for no
/// exponent.
pub fn dini_log_profile(x: f64) -> f64 {
    let cut = dini_log_cut();
    if x <= 0.0 || x >= cut {
        return 0.0;
    }
    let v = x.ln().powi(-2);
    if x <= 0.5 * cut {
        v
    } else {
        let s = (x - 0.5 * cut) / (0.5 * cut);
        v * (1.0 - s * s * (3.0 - 2.0 * s))
    }
}

impl Density {
    /// Builtin densities.
    ///
    /// - `constant` `[c]`: phi = c, Holder(1)
    /// - `linear` `[]` or `[slope, intercept]`: phi(tau) = slope tau + intercept
    /// - `holder-power` `[alpha]` or `[alpha, shift]`: |tau - shift|^alpha,
    ///   alpha in (0, 1]
    /// - `dini-log` `[]` or `[shift]`: the tapered log(x)^-2 profile at
    ///   x = tau - shift; continuous, Dini, not Holder at the shift
    /// - `step` `[]` or `[shift]`: tau - shift away from the shift but 1 at
    ///   it; the discontinuous counterexample
    pub fn builtin(name: &str, params: &[f64]) -> Result<Density> {
        let source = DensitySource::Builtin(name.to_string());
        match name {
            "constant" => {
                let c = match params {
                    [] => Complex64::new(1.0, 0.0),
                    [re] => Complex64::new(*re, 0.0),
                    [re, im] => Complex64::new(*re, *im),
                    _ => {
                        return Err(Error::InvalidDensityParams(
                            "constant takes [] | [re] | [re, im]".to_string(),
                        ))
                    }
                };
                Ok(Density {
                    eval: Arc::new(move |_| c),
                    source,
                    declared: Some(RegularityClass::Holder(1.0)),
                })
            }
            "linear" => {
                let (m, q) = match params {
                    [] => (1.0, 0.0),
                    [m] => (*m, 0.0),
                    [m, q] => (*m, *q),
                    _ => {
                        return Err(Error::InvalidDensityParams(
                            "linear takes [] | [slope] | [slope, intercept]".to_string(),
                        ))
                    }
                };
                Ok(Density {
                    eval: Arc::new(move |tau| Complex64::new(m * tau + q, 0.0)),
                    source,
                    declared: Some(RegularityClass::Holder(1.0)),
                })
            }
            "holder-power" => {
                let (alpha, shift) = match params {
                    [a] => (*a, 0.0),
                    [a, s] => (*a, *s),
                    _ => {
                        return Err(Error::InvalidDensityParams(
                            "holder-power takes [alpha] | [alpha, shift]".to_string(),
                        ))
                    }
                };
                if !(alpha > 0.0 && alpha <= 1.0) {
                    return Err(Error::InvalidDensityParams(format!(
                        "holder exponent {alpha} outside (0, 1]"
                    )));
                }
                Ok(Density {
                    eval: Arc::new(move |tau| Complex64::new((tau - shift).abs().powf(alpha), 0.0)),
                    source,
                    declared: Some(RegularityClass::Holder(alpha)),
                })
            }
            "dini-log" => {
                let shift = match params {
                    [] => 0.0,
                    [s] => *s,
                    _ => {
                        return Err(Error::InvalidDensityParams(
                            "dini-log takes [] | [shift]".to_string(),
                        ))
                    }
                };
                Ok(Density {
                    eval: Arc::new(move |tau| Complex64::new(dini_log_profile(tau - shift), 0.0)),
                    source,
                    declared: Some(RegularityClass::Dini),
                })
            }
            "step" => {
                let shift = match params {
                    [] => 0.0,
                    [s] => *s,
                    _ => {
                        return Err(Error::InvalidDensityParams(
                            "step takes [] | [shift]".to_string(),
                        ))
                    }
                };
                Ok(Density {
                    eval: Arc::new(move |tau| {
                        if tau == shift {
                            Complex64::new(1.0, 0.0)
                        } else {
                            Complex64::new(tau - shift, 0.0)
                        }
                    }),
                    source,
                    declared: Some(RegularityClass::Discontinuous),
                })
            }
            other => Err(Error::UnknownDensity(other.to_string())),
        }
    }

    /// Density from a closure over the curve parameter.
    pub fn from_fn<F>(f: F) -> Density
    where
        F: Fn(f64) -> Complex64 + Send + Sync + 'static,
    {
        Density {
            eval: Arc::new(f),
            source: DensitySource::Custom,
            declared: None,
        }
    }

    /// Tabulated density over strictly increasing parameters, interpolated by
    /// monotone-safe cubics; evaluation outside the table is an error surfaced
    /// as NaN and caught by the integration layer.
    pub fn from_table(taus: &[f64], values: &[Complex64]) -> Result<Density> {
        if taus.len() != values.len() {
            return Err(Error::InvalidDensityParams(
                "tau and value columns differ in length".to_string(),
            ));
        }
        if taus.len() < 4 {
            return Err(Error::TooFewSamples {
                min: 4,
                got: taus.len(),
            });
        }
        for (i, w) in taus.windows(2).enumerate() {
            if w[1] <= w[0] {
                return Err(Error::NonMonotoneTable { index: i + 1 });
            }
        }
        for (i, v) in values.iter().enumerate() {
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(Error::DensityEvaluation { tau: taus[i] });
            }
        }
        let re = Pchip::new(taus.to_vec(), values.iter().map(|v| v.re).collect());
        let im = Pchip::new(taus.to_vec(), values.iter().map(|v| v.im).collect());
        Ok(Density {
            eval: Arc::new(move |tau| match (re.eval(tau), im.eval(tau)) {
                (Some(r), Some(i)) => Complex64::new(r, i),
                _ => Complex64::new(f64::NAN, f64::NAN),
            }),
            source: DensitySource::Tabulated,
            declared: None,
        })
    }

    /// Evaluate at a curve parameter.
    pub fn eval(&self, tau: f64) -> Complex64 {
        (self.eval)(tau)
    }

    /// Evaluate, reporting non-finite values as errors.
    pub fn try_eval(&self, tau: f64) -> Result<Complex64> {
        let v = self.eval(tau);
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(Error::DensityEvaluation { tau })
        }
    }

    pub fn source(&self) -> &DensitySource {
        &self.source
    }

    pub fn declared_class(&self) -> Option<RegularityClass> {
        self.declared
    }

    /// Same density with a declared class attached.
    pub fn with_declared(mut self, class: RegularityClass) -> Density {
        self.declared = Some(class);
        self
    }
}
