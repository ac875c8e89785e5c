//! Curve inputs and uniform periodic sampling with derivatives up to order 5.
//!
//! All curves are closed and 2*pi-periodic in the parameter `t`. Analytic
//! specs are differentiated term by term; sampled input goes through
//! discrete-Fourier spectral differentiation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::TrigSeries;
use crate::vec2::Vec2;

/// Highest parameter-derivative order carried by a [`SampledCurve`].
/// Order 5 is what the third arclength derivative of the affine curvature
/// needs after chain-rule expansion.
pub const MAX_DERIV_ORDER: usize = 5;

/// Relative spectral-tail threshold above which sampled input is rejected
/// as undersampled.
pub const SPECTRAL_NOISE_THRESHOLD: f64 = 1e-6;

/// One harmonic of a trigonometric polynomial: `c*cos(k t) + s*sin(k t)`.
/// Serialized as the triple `[k, c, s]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "(u32, f64, f64)", into = "(u32, f64, f64)")]
pub struct HarmonicTerm {
    pub harmonic: u32,
    pub cos: f64,
    pub sin: f64,
}

impl HarmonicTerm {
    pub fn new(harmonic: u32, cos: f64, sin: f64) -> Self {
        HarmonicTerm { harmonic, cos, sin }
    }
}

impl From<(u32, f64, f64)> for HarmonicTerm {
    fn from((harmonic, cos, sin): (u32, f64, f64)) -> Self {
        HarmonicTerm { harmonic, cos, sin }
    }
}

impl From<HarmonicTerm> for (u32, f64, f64) {
    fn from(term: HarmonicTerm) -> Self {
        (term.harmonic, term.cos, term.sin)
    }
}

/// Declarative description of a closed plane curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum CurveSpec {
    /// `(a cos t, b sin t)` with `a, b > 0`.
    Ellipse { a: f64, b: f64 },
    /// Trigonometric polynomial with independent harmonic lists per coordinate.
    #[serde(rename = "trigpoly")]
    TrigPolynomial {
        x: Vec<HarmonicTerm>,
        y: Vec<HarmonicTerm>,
    },
    /// Uniformly spaced samples over one period, first point not repeated.
    #[serde(rename = "samples")]
    SampledClosed { points: Vec<[f64; 2]> },
}

impl CurveSpec {
    pub fn ellipse(a: f64, b: f64) -> Self {
        CurveSpec::Ellipse { a, b }
    }

    pub fn circle(r: f64) -> Self {
        CurveSpec::Ellipse { a: r, b: r }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            CurveSpec::Ellipse { a, b } => {
                if !(a.is_finite() && b.is_finite() && *a > 0.0 && *b > 0.0) {
                    return Err(Error::EmptySpec {
                        reason: format!("ellipse semi-axes must be positive, got a={a}, b={b}"),
                    });
                }
            }
            CurveSpec::TrigPolynomial { x, y } => {
                for (name, terms) in [("x", x), ("y", y)] {
                    let has_wave = terms
                        .iter()
                        .any(|t| t.harmonic >= 1 && (t.cos != 0.0 || t.sin != 0.0));
                    if !has_wave {
                        return Err(Error::EmptySpec {
                            reason: format!("coordinate {name} has no nonzero harmonic"),
                        });
                    }
                    if terms.iter().any(|t| !t.cos.is_finite() || !t.sin.is_finite()) {
                        return Err(Error::EmptySpec {
                            reason: format!("coordinate {name} has non-finite coefficients"),
                        });
                    }
                }
            }
            CurveSpec::SampledClosed { points } => {
                if points.len() < 16 {
                    return Err(Error::SampleCountTooSmall {
                        n: points.len(),
                        min: 16,
                    });
                }
                if points.iter().any(|p| !p[0].is_finite() || !p[1].is_finite()) {
                    return Err(Error::EmptySpec {
                        reason: "non-finite sample point".into(),
                    });
                }
                if points.first() == points.last() {
                    return Err(Error::EmptySpec {
                        reason: "first point repeated at the end; drop the duplicate".into(),
                    });
                }
            }
        }
        Ok(())
    }

    /// Coordinate series `(x(t), y(t))`, exact for analytic specs.
    fn coordinate_series(&self) -> Result<(TrigSeries, TrigSeries)> {
        self.validate()?;
        match self {
            CurveSpec::Ellipse { a, b } => Ok((
                TrigSeries::new(0.0, vec![*a], vec![0.0]),
                TrigSeries::new(0.0, vec![0.0], vec![*b]),
            )),
            CurveSpec::TrigPolynomial { x, y } => {
                Ok((series_from_terms(x), series_from_terms(y)))
            }
            CurveSpec::SampledClosed { points } => {
                let xs: Vec<f64> = points.iter().map(|p| p[0]).collect();
                let ys: Vec<f64> = points.iter().map(|p| p[1]).collect();
                let sx = TrigSeries::from_samples(&xs);
                let sy = TrigSeries::from_samples(&ys);
                let k0 = points.len() / 4;
                let fraction = sx.tail_fraction(k0).max(sy.tail_fraction(k0));
                if fraction > SPECTRAL_NOISE_THRESHOLD {
                    return Err(Error::Undersampled {
                        fraction,
                        threshold: SPECTRAL_NOISE_THRESHOLD,
                    });
                }
                Ok((sx, sy))
            }
        }
    }

    fn min_samples(&self) -> usize {
        match self {
            CurveSpec::SampledClosed { points } => points.len().max(64),
            _ => 64,
        }
    }
}

fn series_from_terms(terms: &[HarmonicTerm]) -> TrigSeries {
    let max_k = terms.iter().map(|t| t.harmonic).max().unwrap_or(0) as usize;
    let mut mean = 0.0;
    let mut cos = vec![0.0; max_k];
    let mut sin = vec![0.0; max_k];
    for term in terms {
        if term.harmonic == 0 {
            mean += term.cos;
        } else {
            cos[term.harmonic as usize - 1] += term.cos;
            sin[term.harmonic as usize - 1] += term.sin;
        }
    }
    TrigSeries::new(mean, cos, sin)
}

/// A curve sampled on the uniform grid `t_i = 2*pi*i/n` together with its
/// parameter derivatives `d[k][i]`, k = 0..=5.
///
/// Immutable after construction; safe to share across threads.
#[derive(Debug, Clone)]
pub struct SampledCurve {
    n: usize,
    t: Vec<f64>,
    d: Vec<Vec<Vec2>>,
    x_series: Vec<TrigSeries>,
    y_series: Vec<TrigSeries>,
}

impl SampledCurve {
    fn from_series(sx: TrigSeries, sy: TrigSeries, n: usize) -> SampledCurve {
        let t = (0..n)
            .map(|i| 2.0 * std::f64::consts::PI * i as f64 / n as f64)
            .collect();
        let mut x_series = vec![sx];
        let mut y_series = vec![sy];
        for k in 1..=MAX_DERIV_ORDER {
            x_series.push(x_series[k - 1].derivative());
            y_series.push(y_series[k - 1].derivative());
        }
        let d = (0..=MAX_DERIV_ORDER)
            .map(|k| {
                let xs = x_series[k].eval_grid(n);
                let ys = y_series[k].eval_grid(n);
                xs.into_iter()
                    .zip(ys)
                    .map(|(x, y)| Vec2::new(x, y))
                    .collect()
            })
            .collect();
        SampledCurve {
            n,
            t,
            d,
            x_series,
            y_series,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Parameter grid `t_i = 2*pi*i/n`.
    pub fn grid(&self) -> &[f64] {
        &self.t
    }

    /// The k-th parameter derivative on the grid (k = 0 is the curve itself).
    pub fn derivs(&self, order: usize) -> &[Vec2] {
        &self.d[order]
    }

    /// The k-th parameter derivative at an arbitrary parameter value.
    pub fn deriv_at(&self, t: f64, order: usize) -> Vec2 {
        Vec2::new(self.x_series[order].eval(t), self.y_series[order].eval(t))
    }

    /// Curve with the parameter direction reversed (`t -> -t`).
    pub fn reversed(&self) -> SampledCurve {
        SampledCurve::from_series(
            self.x_series[0].time_reversed(),
            self.y_series[0].time_reversed(),
            self.n,
        )
    }

    /// Returns a positively oriented copy (`[gamma_t, gamma_tt] > 0`) and
    /// whether the orientation was flipped. Rejects curves whose bracket
    /// changes sign or falls below `inflexion_tol` in magnitude.
    pub fn oriented(&self, inflexion_tol: f64) -> Result<(SampledCurve, bool)> {
        let kappa = affine_speed_raw(self);
        let min = kappa.iter().cloned().fold(f64::INFINITY, f64::min);
        let max = kappa.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if min > 0.0 && max > 0.0 {
            if min <= inflexion_tol {
                return Err(Error::Inflexional {
                    min_kappa: min,
                    threshold: inflexion_tol,
                });
            }
            Ok((self.clone(), false))
        } else if min < 0.0 && max < 0.0 {
            if -max <= inflexion_tol {
                return Err(Error::Inflexional {
                    min_kappa: -max,
                    threshold: inflexion_tol,
                });
            }
            Ok((self.reversed(), true))
        } else {
            let min_abs = kappa.iter().map(|k| k.abs()).fold(f64::INFINITY, f64::min);
            if min_abs <= inflexion_tol {
                Err(Error::Inflexional {
                    min_kappa: min_abs,
                    threshold: inflexion_tol,
                })
            } else {
                Err(Error::KappaSignChange)
            }
        }
    }
}

fn affine_speed_raw(curve: &SampledCurve) -> Vec<f64> {
    curve
        .derivs(1)
        .iter()
        .zip(curve.derivs(2))
        .map(|(d1, d2)| d1.cross(*d2))
        .collect()
}

/// Sample `spec` on a power-of-two grid of `n` nodes with derivatives up to
/// order 5.
pub fn sample_curve(spec: &CurveSpec, n: usize) -> Result<SampledCurve> {
    if !n.is_power_of_two() {
        return Err(Error::SampleCountNotPowerOfTwo { n });
    }
    let min = spec.min_samples();
    if n < min {
        return Err(Error::SampleCountTooSmall { n, min });
    }
    let (sx, sy) = spec.coordinate_series()?;
    Ok(SampledCurve::from_series(sx, sy, n))
}

/// Minimum of `|[gamma_t, gamma_tt]|` over the grid. Values at or below the
/// inflexion threshold mean the affine frame is undefined somewhere.
pub fn check_no_inflexions(curve: &SampledCurve) -> f64 {
    affine_speed_raw(curve)
        .iter()
        .map(|k| k.abs())
        .fold(f64::INFINITY, f64::min)
}
