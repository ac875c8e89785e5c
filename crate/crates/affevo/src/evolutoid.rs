//! The evolutoid envelope `E_alpha`, its regularity function, singular
//! points with A2/A3 classification, and the first singular alpha.
//!
//! `E_alpha` is the envelope of the lines through `gamma(s)` with direction
//! `v = (1-alpha) gamma_s + alpha gamma_ss`; it interpolates between the
//! curve itself (`alpha = 0`) and the affine evolute (`alpha = 1`). With
//! `D = (1-alpha)^2 + mu alpha^2` the envelope point is
//! `X = gamma + (alpha / D) v` and `X_s = A v` with
//! `A = (1-alpha)/D - alpha^3 mu_s / D^2`.
//!
//! Root finding works on the cleared-denominator function
//! `g = alpha^3 mu_s - (1-alpha) D`, which satisfies `A = -g / D^2`; g is
//! polynomial in alpha and avoids the benign blow-up of A near alpha = 0.

use crate::affine::{AffineJetTable, JetPoint};
use crate::error::{Error, Result};
use crate::vec2::Vec2;

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Evolutoid denominator `(1-alpha)^2 + mu alpha^2`.
pub fn denom_value(mu: f64, alpha: f64) -> f64 {
    let b = 1.0 - alpha;
    b * b + mu * alpha * alpha
}

/// Cleared-denominator singularity function
/// `g = alpha^3 mu_s - (1-alpha) ((1-alpha)^2 + mu alpha^2)`.
pub fn g_value(mu: f64, mu_s: f64, alpha: f64) -> f64 {
    alpha.powi(3) * mu_s - (1.0 - alpha) * denom_value(mu, alpha)
}

/// Ordinary-cusp discriminator `h = alpha mu_ss - (1-alpha) mu_s`.
/// Along `{g = 0}` this is `g_s / alpha^2`.
pub fn h_value(mu_s: f64, mu_ss: f64, alpha: f64) -> f64 {
    alpha * mu_ss - (1.0 - alpha) * mu_s
}

/// Swallowtail discriminator
/// `q = alpha^5 mu_sss + (1-alpha)^3 ((1-alpha)^2 + mu alpha^2)`.
pub fn q_value(mu: f64, mu_sss: f64, alpha: f64) -> f64 {
    alpha.powi(5) * mu_sss + (1.0 - alpha).powi(3) * denom_value(mu, alpha)
}

fn g_at(jets: &AffineJetTable, t: f64, alpha: f64) -> f64 {
    g_value(jets.mu_at(t), jets.mu_s_at(t), alpha)
}

/// s-derivative of g at fixed alpha.
pub(crate) fn g_s_at(jets: &AffineJetTable, t: f64, alpha: f64) -> f64 {
    alpha.powi(3) * jets.mu_ss_at(t) - (1.0 - alpha) * alpha * alpha * jets.mu_s_at(t)
}

fn g_ss_at(jets: &AffineJetTable, t: f64, alpha: f64) -> f64 {
    alpha.powi(3) * jets.mu_sss_at(t) - (1.0 - alpha) * alpha * alpha * jets.mu_ss_at(t)
}

/// alpha-derivative of g at fixed s.
pub(crate) fn g_alpha_at(jets: &AffineJetTable, t: f64, alpha: f64) -> f64 {
    let b = 1.0 - alpha;
    3.0 * alpha * alpha * jets.mu_s_at(t) + 3.0 * b * b
        - (2.0 * alpha - 3.0 * alpha * alpha) * jets.mu_at(t)
}

fn g_s_alpha_at(jets: &AffineJetTable, t: f64, alpha: f64) -> f64 {
    3.0 * alpha * alpha * jets.mu_ss_at(t) - (2.0 * alpha - 3.0 * alpha * alpha) * jets.mu_s_at(t)
}

pub(crate) fn h_at(jets: &AffineJetTable, t: f64, alpha: f64) -> f64 {
    h_value(jets.mu_s_at(t), jets.mu_ss_at(t), alpha)
}

pub(crate) fn h_s_at(jets: &AffineJetTable, t: f64, alpha: f64) -> f64 {
    alpha * jets.mu_sss_at(t) - (1.0 - alpha) * jets.mu_ss_at(t)
}

pub(crate) fn h_alpha_at(jets: &AffineJetTable, t: f64, _alpha: f64) -> f64 {
    jets.mu_ss_at(t) + jets.mu_s_at(t)
}

fn validate_alpha(alpha: f64, range: &'static str, lo_open: bool) -> Result<()> {
    if alpha < 0.0 {
        return Err(Error::NegativeAlpha { alpha });
    }
    if !alpha.is_finite() || alpha > 1.0 || (lo_open && alpha == 0.0) {
        return Err(Error::AlphaOutOfRange { alpha, range });
    }
    Ok(())
}

/// One evolutoid point with its regularity data.
#[derive(Debug, Clone, Copy)]
pub struct EvolutoidSample {
    pub t: f64,
    /// Affine arclength of the foot point on the curve.
    pub s: f64,
    pub alpha: f64,
    /// Envelope point `X = gamma + (alpha / D) v`.
    pub x: Vec2,
    /// Denominator `D = (1-alpha)^2 + mu alpha^2`.
    pub denom: f64,
    /// Regularity value `A = (1-alpha)/D - alpha^3 mu_s / D^2`; zero exactly
    /// at non-regular envelope points.
    pub reg: f64,
    /// Line direction `v = (1-alpha) gamma_s + alpha gamma_ss`.
    pub dir: Vec2,
}

pub(crate) fn sample_from_jet(
    jet: &JetPoint,
    alpha: f64,
    denom_min: f64,
) -> Result<EvolutoidSample> {
    let denom = denom_value(jet.mu, alpha);
    if denom < denom_min {
        return Err(Error::DenominatorUnderflow {
            value: denom,
            threshold: denom_min,
        });
    }
    let dir = jet.gamma_s * (1.0 - alpha) + jet.gamma_ss * alpha;
    let x = jet.gamma + dir * (alpha / denom);
    let reg = (1.0 - alpha) / denom - alpha.powi(3) * jet.mu_s / (denom * denom);
    Ok(EvolutoidSample {
        t: jet.t,
        s: jet.s,
        alpha,
        x,
        denom,
        reg,
        dir,
    })
}

/// Evolutoid point above grid node `i`.
pub fn evolutoid_point(jets: &AffineJetTable, i: usize, alpha: f64) -> Result<EvolutoidSample> {
    validate_alpha(alpha, "[0, 1]", false)?;
    sample_from_jet(&jets.node(i), alpha, jets.tolerances().denom_min)
}

/// Evolutoid point above an arbitrary parameter value.
pub fn evolutoid_point_at(jets: &AffineJetTable, t: f64, alpha: f64) -> Result<EvolutoidSample> {
    validate_alpha(alpha, "[0, 1]", false)?;
    sample_from_jet(&jets.at(t), alpha, jets.tolerances().denom_min)
}

/// The full envelope `E_alpha` as a closed polyline, one sample per node.
pub fn evolutoid_curve(jets: &AffineJetTable, alpha: f64) -> Result<Vec<EvolutoidSample>> {
    validate_alpha(alpha, "[0, 1]", false)?;
    (0..jets.n())
        .map(|i| sample_from_jet(&jets.node(i), alpha, jets.tolerances().denom_min))
        .collect()
}

/// Regularity value `A(s_i; alpha)` at node `i`.
pub fn regularity_function(jets: &AffineJetTable, i: usize, alpha: f64) -> Result<f64> {
    Ok(evolutoid_point(jets, i, alpha)?.reg)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SingularityKind {
    /// Ordinary cusp: `h != 0` at the singular point.
    A2,
    /// Swallowtail-type point: `h = 0`, `q != 0`.
    A3,
    Degenerate,
}

impl SingularityKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SingularityKind::A2 => "A2",
            SingularityKind::A3 => "A3",
            SingularityKind::Degenerate => "degenerate",
        }
    }
}

/// A located singular point of `E_alpha` with its classification diagnostics.
#[derive(Debug, Clone, Copy)]
pub struct SingularityRecord {
    pub t0: f64,
    pub s0: f64,
    pub alpha0: f64,
    pub x0: Vec2,
    pub kind: SingularityKind,
    pub g: f64,
    pub h: f64,
    pub q: f64,
}

/// A-priori magnitude of `g(., alpha)` used to scale residual tolerances.
fn g_scale(jets: &AffineJetTable, alpha: f64) -> f64 {
    let d_sup = (1.0 - alpha).powi(2) + alpha * alpha * jets.sup_mu();
    alpha.powi(3) * jets.sup_mu_s() + (1.0 - alpha) * d_sup + 1e-14
}

fn classify_values(jets: &AffineJetTable, h: f64, q: f64) -> SingularityKind {
    let threshold = jets.tolerances().class_rel * jets.classification_scale();
    if h.abs() > threshold {
        SingularityKind::A2
    } else if q.abs() > threshold {
        SingularityKind::A3
    } else {
        SingularityKind::Degenerate
    }
}

fn record_at(jets: &AffineJetTable, t0: f64, alpha: f64) -> Result<SingularityRecord> {
    let jet = jets.at(t0);
    let sample = sample_from_jet(&jet, alpha, jets.tolerances().denom_min)?;
    let g = g_value(jet.mu, jet.mu_s, alpha);
    let h = h_value(jet.mu_s, jet.mu_ss, alpha);
    let q = q_value(jet.mu, jet.mu_sss, alpha);
    Ok(SingularityRecord {
        t0,
        s0: sample.s,
        alpha0: alpha,
        x0: sample.x,
        kind: classify_values(jets, h, q),
        g,
        h,
        q,
    })
}

/// Transversal roots of `g(., alpha)` in `t`, bisected to the configured
/// arclength tolerance and deduplicated within one grid spacing.
pub(crate) fn roots_of_g(jets: &AffineJetTable, alpha: f64) -> Vec<f64> {
    let n = jets.n();
    let dt = TWO_PI / n as f64;
    let g_grid: Vec<f64> = (0..n)
        .map(|i| g_value(jets.mu()[i], jets.mu_s()[i], alpha))
        .collect();

    let max_speed = jets
        .kappa()
        .iter()
        .map(|k| k.cbrt())
        .fold(0.0_f64, f64::max);
    let dt_tol = (jets.tolerances().root_ds / max_speed).max(1e-15);

    let mut roots: Vec<f64> = Vec::new();
    for i in 0..n {
        let (ga, gb) = (g_grid[i], g_grid[(i + 1) % n]);
        if ga * gb >= 0.0 {
            continue;
        }
        let mut lo = jets.grid()[i];
        let mut hi = lo + dt;
        let mut g_lo = ga;
        while hi - lo > dt_tol {
            let mid = 0.5 * (lo + hi);
            let g_mid = g_at(jets, mid, alpha);
            if g_mid == 0.0 {
                lo = mid;
                hi = mid;
                break;
            }
            if (g_mid > 0.0) == (g_lo > 0.0) {
                lo = mid;
                g_lo = g_mid;
            } else {
                hi = mid;
            }
        }
        roots.push((0.5 * (lo + hi)).rem_euclid(TWO_PI));
    }
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());

    // merge roots closer than one grid spacing (periodic), keeping the one
    // with the smaller residual
    let mut merged: Vec<f64> = Vec::with_capacity(roots.len());
    for r in roots {
        if let Some(&last) = merged.last() {
            if r - last < dt {
                if g_at(jets, r, alpha).abs() < g_at(jets, last, alpha).abs() {
                    *merged.last_mut().unwrap() = r;
                }
                continue;
            }
        }
        merged.push(r);
    }
    if merged.len() > 1 {
        let first = merged[0];
        let last = *merged.last().unwrap();
        if first + TWO_PI - last < dt {
            if g_at(jets, last, alpha).abs() < g_at(jets, first, alpha).abs() {
                merged[0] = last;
            }
            merged.pop();
        }
    }
    merged
}

/// Singular points of `E_alpha` for `alpha in (0, 1]`, sorted by arclength.
/// An empty list means the evolutoid is smooth.
pub fn singular_points(jets: &AffineJetTable, alpha: f64) -> Result<Vec<SingularityRecord>> {
    validate_alpha(alpha, "(0, 1]", true)?;
    roots_of_g(jets, alpha)
        .into_iter()
        .map(|t0| record_at(jets, t0, alpha))
        .collect()
}

/// Classify the singularity of `E_alpha` at arclength `s0`.
///
/// Errors when `(s0, alpha)` is not a root of g within the residual
/// tolerance, or when `mu(s0)` is numerically zero (the classification
/// hypotheses require `mu != 0`).
pub fn classify_singularity(
    jets: &AffineJetTable,
    s0: f64,
    alpha: f64,
) -> Result<SingularityKind> {
    validate_alpha(alpha, "(0, 1]", true)?;
    let t0 = jets.t_of_s(s0);
    let g = g_at(jets, t0, alpha);
    let tolerance = jets.tolerances().class_rel * g_scale(jets, alpha);
    if g.abs() > tolerance {
        return Err(Error::NotASingularPoint {
            s0,
            alpha,
            g,
            tolerance,
        });
    }
    let mu = jets.mu_at(t0);
    if mu.abs() <= jets.tolerances().class_rel * jets.classification_scale() {
        return Err(Error::MuNearZero { s0, mu });
    }
    let h = h_value(jets.mu_s_at(t0), jets.mu_ss_at(t0), alpha);
    let q = q_value(mu, jets.mu_sss_at(t0), alpha);
    Ok(classify_values(jets, h, q))
}

/// Result of the first-singular-alpha search.
#[derive(Debug, Clone, Copy)]
pub struct AlphaBorn {
    pub alpha_star: f64,
    pub s_star: f64,
    pub t_star: f64,
}

/// Smallest `alpha in (0, 1]` at which `g(., alpha)` acquires a zero.
///
/// The predicate "g attains a zero" is evaluated on the sample grid with a
/// scale-aware slack, bisected in alpha to `alpha_tol`, then the tangential
/// birth point is polished by a two-variable Newton iteration on
/// `(g, g_s) = (0, 0)`. Conics have no tangential birth (the zero set
/// appears as the whole degenerate stratum at alpha = 1), in which case the
/// bisected value is returned unpolished.
pub fn alpha_born(jets: &AffineJetTable, alpha_tol: f64) -> Result<AlphaBorn> {
    let n = jets.n();
    let slack = 1e-8 * (1.0 + jets.sup_mu() + jets.sup_mu_s());
    let max_g = |alpha: f64| -> f64 {
        (0..n)
            .map(|i| g_value(jets.mu()[i], jets.mu_s()[i], alpha))
            .fold(f64::NEG_INFINITY, f64::max)
    };
    let predicate = |alpha: f64| max_g(alpha) >= -slack;

    if !predicate(1.0) {
        return Err(Error::Internal(
            "g(., 1) = mu_s has no zero on the grid; upstream data is corrupt".into(),
        ));
    }

    // coarse upward scan, then bisection on the predicate
    let coarse = 256;
    let mut lo = 0.0;
    let mut hi = 1.0;
    for k in 1..=coarse {
        let alpha = k as f64 / coarse as f64;
        if predicate(alpha) {
            hi = alpha;
            lo = (k - 1) as f64 / coarse as f64;
            break;
        }
    }
    while hi - lo > alpha_tol.max(1e-15) {
        let mid = 0.5 * (lo + hi);
        if predicate(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let alpha_hat = hi;

    // starting point for the polish: node maximizing g at alpha_hat
    let mut best = (f64::NEG_INFINITY, 0usize);
    for i in 0..n {
        let v = g_value(jets.mu()[i], jets.mu_s()[i], alpha_hat);
        if v > best.0 {
            best = (v, i);
        }
    }
    let t_hat = jets.grid()[best.1];

    let polished = newton_tangential(jets, t_hat, alpha_hat);
    let (t_star, alpha_star) = polished.unwrap_or((t_hat, alpha_hat));
    let t_star = t_star.rem_euclid(TWO_PI);
    Ok(AlphaBorn {
        alpha_star,
        s_star: jets.s_of_t(t_star),
        t_star,
    })
}

/// Damped Newton on `(g, g_s) = (0, 0)` in `(t, alpha)`. Returns `None` when
/// the Jacobian degenerates or the iteration fails to contract (conics).
fn newton_tangential(jets: &AffineJetTable, t0: f64, alpha0: f64) -> Option<(f64, f64)> {
    let scale = 1.0 + jets.classification_scale();
    let target = 1e-12 * scale;
    let mut t = t0;
    let mut alpha = alpha0;
    let mut residual = g_at(jets, t, alpha).abs().max(g_s_at(jets, t, alpha).abs());
    for _ in 0..50 {
        if residual <= target {
            return Some((t, alpha));
        }
        let st = jets.kappa_at(t).cbrt();
        let j00 = g_s_at(jets, t, alpha) * st;
        let j01 = g_alpha_at(jets, t, alpha);
        let j10 = g_ss_at(jets, t, alpha) * st;
        let j11 = g_s_alpha_at(jets, t, alpha);
        let det = j00 * j11 - j01 * j10;
        let row_scale = (j00.abs() + j01.abs()) * (j10.abs() + j11.abs());
        if det.abs() <= 1e-14 * row_scale + 1e-300 {
            return None;
        }
        let f0 = g_at(jets, t, alpha);
        let f1 = g_s_at(jets, t, alpha);
        let mut dt = -(j11 * f0 - j01 * f1) / det;
        let mut da = -(-j10 * f0 + j00 * f1) / det;
        let mut accepted = false;
        for _ in 0..8 {
            let (tn, an) = (t + dt, (alpha + da).clamp(1e-9, 1.0));
            let rn = g_at(jets, tn, an).abs().max(g_s_at(jets, tn, an).abs());
            if rn < residual {
                t = tn;
                alpha = an;
                residual = rn;
                accepted = true;
                break;
            }
            dt *= 0.5;
            da *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    if residual <= 1e-8 * scale {
        Some((t, alpha))
    } else {
        None
    }
}

/// Newton refinement of a swallowtail candidate on `(g, h) = (0, 0)`,
/// with 0.5 step damping on residual increase. Shared with the
/// discriminant tracer.
pub(crate) fn newton_fold(jets: &AffineJetTable, t0: f64, alpha0: f64) -> Result<(f64, f64)> {
    let scale = 1.0 + jets.classification_scale();
    let target = 1e-12 * scale;
    let mut t = t0;
    let mut alpha = alpha0;
    let mut residual = g_at(jets, t, alpha).abs().max(h_at(jets, t, alpha).abs());
    for iteration in 0..50 {
        if residual <= target {
            return Ok((t, alpha));
        }
        let st = jets.kappa_at(t).cbrt();
        let j00 = g_s_at(jets, t, alpha) * st;
        let j01 = g_alpha_at(jets, t, alpha);
        let j10 = h_s_at(jets, t, alpha) * st;
        let j11 = h_alpha_at(jets, t, alpha);
        let det = j00 * j11 - j01 * j10;
        let row_scale = (j00.abs() + j01.abs()) * (j10.abs() + j11.abs());
        if det.abs() <= 1e-14 * row_scale + 1e-300 {
            return Err(Error::NewtonDidNotConverge {
                iterations: iteration,
                residual,
            });
        }
        let f0 = g_at(jets, t, alpha);
        let f1 = h_at(jets, t, alpha);
        let mut dt = -(j11 * f0 - j01 * f1) / det;
        let mut da = -(-j10 * f0 + j00 * f1) / det;
        let mut accepted = false;
        for _ in 0..8 {
            let (tn, an) = (t + dt, (alpha + da).clamp(1e-9, 1.0));
            let rn = g_at(jets, tn, an).abs().max(h_at(jets, tn, an).abs());
            if rn < residual {
                t = tn;
                alpha = an;
                residual = rn;
                accepted = true;
                break;
            }
            dt *= 0.5;
            da *= 0.5;
        }
        if !accepted {
            return Err(Error::NewtonDidNotConverge {
                iterations: iteration,
                residual,
            });
        }
    }
    Err(Error::NewtonDidNotConverge {
        iterations: 50,
        residual,
    })
}

/// Build a full singularity record at a refined `(t, alpha)` point.
pub(crate) fn record_at_point(
    jets: &AffineJetTable,
    t0: f64,
    alpha: f64,
) -> Result<SingularityRecord> {
    record_at(jets, t0.rem_euclid(TWO_PI), alpha)
}

/// Ordinary-cusp cross-check at a singular point: the bracket
/// `[X_ss, X_sss]` from centered finite differences of the envelope against
/// the closed form `2 A_s^2 D`. Both vanish iff the cusp is not ordinary.
pub fn cusp_third_derivative_check(
    jets: &AffineJetTable,
    s0: f64,
    alpha: f64,
    ds: f64,
) -> Result<(f64, f64)> {
    validate_alpha(alpha, "(0, 1]", true)?;
    if ds < 1e-6 {
        return Err(Error::StepUnderflow {
            step: ds,
            limit: 1e-6,
        });
    }
    let t0 = jets.t_of_s(s0);
    let g = g_at(jets, t0, alpha);
    let tolerance = jets.tolerances().class_rel * g_scale(jets, alpha);
    if g.abs() > tolerance {
        return Err(Error::NotASingularPoint {
            s0,
            alpha,
            g,
            tolerance,
        });
    }

    let x_at = |k: i32| -> Result<Vec2> {
        let t = jets.t_of_s(s0 + k as f64 * ds);
        Ok(sample_from_jet(&jets.at(t), alpha, jets.tolerances().denom_min)?.x)
    };
    let pts: Vec<Vec2> = (-3..=3).map(x_at).collect::<Result<_>>()?;
    // 4th-order centered stencils
    let x_ss = (pts[1] * -1.0 + pts[2] * 16.0 - pts[3] * 30.0 + pts[4] * 16.0 - pts[5] * 1.0)
        / (12.0 * ds * ds);
    let x_sss = (pts[0] - pts[1] * 8.0 + pts[2] * 13.0 - pts[4] * 13.0 + pts[5] * 8.0 - pts[6])
        / (8.0 * ds.powi(3));
    let numeric = x_ss.cross(x_sss);

    let mu = jets.mu_at(t0);
    let mu_s = jets.mu_s_at(t0);
    let denom = denom_value(mu, alpha);
    let g_s = g_s_at(jets, t0, alpha);
    // A_s = -g_s / D^2 + 2 g D_s / D^3 with D_s = alpha^2 mu_s
    let a_s = -g_s / (denom * denom) + 2.0 * g * alpha * alpha * mu_s / denom.powi(3);
    let analytic = 2.0 * a_s * a_s * denom;
    Ok((numeric, analytic))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{sample_curve, CurveSpec, HarmonicTerm};
    use crate::Tolerances;

    fn sigma_spec(phase: f64) -> CurveSpec {
        CurveSpec::TrigPolynomial {
            x: vec![
                HarmonicTerm::new(2, 1.0, 0.0),
                HarmonicTerm::new(1, -phase.cos(), phase.sin()),
            ],
            y: vec![
                HarmonicTerm::new(2, 0.0, 1.0),
                HarmonicTerm::new(1, 0.0, 1.0),
            ],
        }
    }

    fn jets_for(spec: &CurveSpec, n: usize) -> AffineJetTable {
        let curve = sample_curve(spec, n).unwrap();
        AffineJetTable::build(&curve, Tolerances::default()).unwrap()
    }

    #[test]
    fn alpha_zero_returns_the_curve() {
        let jets = jets_for(&CurveSpec::ellipse(2.0, 3.0), 256);
        for i in (0..256).step_by(17) {
            let sample = evolutoid_point(&jets, i, 0.0).unwrap();
            assert!((sample.x - jets.gamma()[i]).norm() <= 1e-12);
        }
    }

    #[test]
    fn alpha_one_is_the_affine_evolute() {
        let jets = jets_for(&sigma_spec(1.9), 512);
        for i in (0..512).step_by(31) {
            let p = jets.node(i);
            let sample = evolutoid_point(&jets, i, 1.0).unwrap();
            let evolute = p.gamma + p.gamma_ss / p.mu;
            assert!((sample.x - evolute).norm() <= 1e-10);
        }
    }

    #[test]
    fn ellipse_point_at_alpha_075() {
        let jets = jets_for(&CurveSpec::ellipse(2.0, 3.0), 256);
        let sample = evolutoid_point(&jets, 0, 0.75).unwrap();
        let mu = 6.0_f64.cbrt().powi(2).recip();
        let denom = 0.0625 + 0.5625 * mu;
        assert!((sample.denom - denom).abs() < 1e-12);
        assert!((sample.denom - 0.2328550).abs() < 1e-7);
        // hand-substituted envelope value
        let gamma_s = Vec2::new(0.0, 3.0 / 6.0_f64.cbrt());
        let gamma_ss = Vec2::new(-2.0 / 6.0_f64.cbrt().powi(2), 0.0);
        let v = gamma_s * 0.25 + gamma_ss * 0.75;
        let x = Vec2::new(2.0, 0.0) + v * (0.75 / denom);
        assert!((sample.x - x).norm() < 1e-12);
        assert!((sample.x.x - 0.5368146278).abs() < 1e-9);
        assert!((sample.x.y - 1.3293921354).abs() < 1e-9);
    }

    #[test]
    fn ellipse_evolute_degenerates_to_center() {
        let jets = jets_for(&CurveSpec::ellipse(2.0, 3.0), 256);
        for sample in evolutoid_curve(&jets, 1.0).unwrap() {
            assert!(sample.x.norm() <= 1e-8);
        }
        // smooth for alpha < 1
        for alpha in [0.1, 0.5, 0.9, 0.99] {
            let min_reg = evolutoid_curve(&jets, alpha)
                .unwrap()
                .iter()
                .map(|s| s.reg.abs())
                .fold(f64::INFINITY, f64::min);
            assert!(min_reg > 0.0);
        }
    }

    #[test]
    fn conic_regularity_closed_form() {
        let jets = jets_for(&CurveSpec::ellipse(2.0, 3.0), 256);
        let mu = 6.0_f64.cbrt().powi(2).recip();
        let a = regularity_function(&jets, 40, 0.5).unwrap();
        assert!((a - 2.0 / (1.0 + mu)).abs() < 1e-10);
    }

    #[test]
    fn sigma_has_sign_changing_regularity_at_09() {
        let jets = jets_for(&sigma_spec(1.9), 1024);
        let samples = evolutoid_curve(&jets, 0.9).unwrap();
        let has_pos = samples.iter().any(|s| s.reg > 0.0);
        let has_neg = samples.iter().any(|s| s.reg < 0.0);
        assert!(has_pos && has_neg);
    }

    #[test]
    fn negative_alpha_rejected() {
        let jets = jets_for(&CurveSpec::circle(1.0), 64);
        assert!(matches!(
            evolutoid_point(&jets, 0, -0.25),
            Err(Error::NegativeAlpha { .. })
        ));
        assert!(matches!(
            singular_points(&jets, -0.25),
            Err(Error::NegativeAlpha { .. })
        ));
    }

    #[test]
    fn ellipse_alpha09_has_no_singular_points() {
        let jets = jets_for(&CurveSpec::ellipse(2.0, 3.0), 512);
        assert!(singular_points(&jets, 0.9).unwrap().is_empty());
    }

    #[test]
    fn sigma_singular_point_counts() {
        let jets = jets_for(&sigma_spec(1.9), 1024);
        let at_one = singular_points(&jets, 1.0).unwrap();
        assert_eq!(at_one.len(), 6);
        for r in &at_one {
            assert_eq!(r.kind, SingularityKind::A2);
            assert!(r.g.abs() < 1e-8, "residual {}", r.g);
        }
        let at_09 = singular_points(&jets, 0.9).unwrap();
        assert_eq!(at_09.len(), 6);
        assert_eq!(at_09.len() % 2, 0);
        assert!(at_09.windows(2).all(|w| w[0].s0 < w[1].s0));
        for r in &at_09 {
            assert_eq!(r.kind, SingularityKind::A2);
        }
    }

    #[test]
    fn classify_errors_away_from_roots() {
        let jets = jets_for(&sigma_spec(1.9), 512);
        let roots = singular_points(&jets, 0.9).unwrap();
        let off = roots[0].s0 + 0.8;
        assert!(matches!(
            classify_singularity(&jets, off, 0.9),
            Err(Error::NotASingularPoint { .. })
        ));
        let kind = classify_singularity(&jets, roots[0].s0, 0.9).unwrap();
        assert_eq!(kind, SingularityKind::A2);
    }

    #[test]
    fn conic_alpha_one_classifies_degenerate() {
        let jets = jets_for(&CurveSpec::ellipse(2.0, 3.0), 256);
        for s0 in [0.0, 1.0, 3.7] {
            let kind = classify_singularity(&jets, s0, 1.0).unwrap();
            assert_eq!(kind, SingularityKind::Degenerate);
        }
    }

    #[test]
    fn alpha_born_on_conics_is_one() {
        for spec in [CurveSpec::ellipse(2.0, 3.0), CurveSpec::circle(1.0)] {
            let jets = jets_for(&spec, 256);
            let born = alpha_born(&jets, 1e-6).unwrap();
            assert!(
                (born.alpha_star - 1.0).abs() <= 1e-6,
                "alpha* = {}",
                born.alpha_star
            );
        }
    }

    #[test]
    fn alpha_born_on_sigma_regression() {
        let jets = jets_for(&sigma_spec(1.9), 1024);
        let born = alpha_born(&jets, 1e-8).unwrap();
        // regression constant, cross-checked against a dense 2-D scan
        assert!(
            (born.alpha_star - 0.416410532687846).abs() < 1e-6,
            "alpha* = {}",
            born.alpha_star
        );
        // the birth is tangential: g = g_s = 0 there
        assert!(g_at(&jets, born.t_star, born.alpha_star).abs() < 1e-9);
        assert!(g_s_at(&jets, born.t_star, born.alpha_star).abs() < 1e-8);
    }

    #[test]
    fn third_derivative_check_agrees_at_vertices() {
        let jets = jets_for(&sigma_spec(1.9), 1024);
        for record in singular_points(&jets, 1.0).unwrap() {
            let (numeric, analytic) =
                cusp_third_derivative_check(&jets, record.s0, 1.0, 1e-4).unwrap();
            assert!(
                (numeric - analytic).abs() <= 1e-4 * analytic.abs().max(1.0),
                "numeric {numeric} vs analytic {analytic}"
            );
            assert!(
                analytic.abs() > 1e-6,
                "ordinary cusp should have nonzero bracket"
            );
        }
    }

    #[test]
    fn step_underflow_rejected() {
        let jets = jets_for(&sigma_spec(1.9), 512);
        let record = &singular_points(&jets, 1.0).unwrap()[0];
        assert!(matches!(
            cusp_third_derivative_check(&jets, record.s0, 1.0, 1e-9),
            Err(Error::StepUnderflow { .. })
        ));
    }
}
