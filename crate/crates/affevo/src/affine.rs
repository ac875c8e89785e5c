//! Affine frame, affine arclength, affine curvature and its arclength
//! derivatives for positively oriented closed curves.
//!
//! With `kappa = [gamma_t, gamma_tt]` the arclength relation is
//! `ds/dt = kappa^(1/3)`; every s-derivative here is a t-derivative
//! chain-ruled through that factor.

use crate::curve::SampledCurve;
use crate::error::{Error, Result};
use crate::spectral::TrigSeries;
use crate::vec2::Vec2;
use crate::Tolerances;

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// `kappa[i] = [gamma_t, gamma_tt]` at node i.
pub fn affine_speed(curve: &SampledCurve) -> Vec<f64> {
    curve
        .derivs(1)
        .iter()
        .zip(curve.derivs(2))
        .map(|(d1, d2)| d1.cross(*d2))
        .collect()
}

fn require_positive(kappa: &[f64], inflexion_tol: f64) -> Result<()> {
    let min = kappa.iter().cloned().fold(f64::INFINITY, f64::min);
    if min <= inflexion_tol {
        return Err(Error::Inflexional {
            min_kappa: min,
            threshold: inflexion_tol,
        });
    }
    Ok(())
}

/// Affine arclength per node and the total affine length
/// `L = integral of kappa^(1/3) dt` over one period.
///
/// Requires a positively oriented curve; see [`SampledCurve::oriented`].
pub fn affine_arclength(curve: &SampledCurve, inflexion_tol: f64) -> Result<(Vec<f64>, f64)> {
    let kappa = affine_speed(curve);
    require_positive(&kappa, inflexion_tol)?;
    let speed: Vec<f64> = kappa.iter().map(|k| k.cbrt()).collect();
    let (mean, periodic) = TrigSeries::from_samples(&speed).antiderivative();
    let p0 = periodic.eval(0.0);
    let s = curve
        .grid()
        .iter()
        .map(|&t| mean * t + periodic.eval(t) - p0)
        .collect();
    Ok((s, mean * TWO_PI))
}

/// Affine normal `xi = kappa^(-2/3) gamma_tt - (1/3) kappa_t kappa^(-5/3) gamma_t`
/// per node, with `kappa_t = [gamma_t, gamma_ttt]`. Equals `gamma_ss`.
pub fn affine_normal(curve: &SampledCurve, inflexion_tol: f64) -> Result<Vec<Vec2>> {
    let kappa = affine_speed(curve);
    require_positive(&kappa, inflexion_tol)?;
    let out = (0..curve.n())
        .map(|i| {
            let d1 = curve.derivs(1)[i];
            let d2 = curve.derivs(2)[i];
            let kappa_t = d1.cross(curve.derivs(3)[i]);
            affine_normal_point(d1, d2, kappa[i], kappa_t)
        })
        .collect();
    Ok(out)
}

fn affine_normal_point(d1: Vec2, d2: Vec2, kappa: f64, kappa_t: f64) -> Vec2 {
    let cr = kappa.cbrt();
    let inv2 = 1.0 / (cr * cr);
    let inv5 = inv2 / kappa;
    d2 * inv2 - d1 * (kappa_t * inv5 / 3.0)
}

/// Affine curvature per node:
/// `mu = (3 kappa kappa_tt - 5 kappa_t^2 + 9 kappa [gamma_tt, gamma_ttt]) / (9 kappa^(8/3))`
/// with `kappa_tt` obtained by spectral differentiation of the exact
/// `kappa_t = [gamma_t, gamma_ttt]` samples.
pub fn affine_curvature(curve: &SampledCurve, inflexion_tol: f64) -> Result<Vec<f64>> {
    let kappa = affine_speed(curve);
    require_positive(&kappa, inflexion_tol)?;
    let kappa_t: Vec<f64> = (0..curve.n())
        .map(|i| curve.derivs(1)[i].cross(curve.derivs(3)[i]))
        .collect();
    let kappa_tt = TrigSeries::from_samples(&kappa_t)
        .derivative()
        .eval_grid(curve.n());
    let mu = (0..curve.n())
        .map(|i| {
            let br23 = curve.derivs(2)[i].cross(curve.derivs(3)[i]);
            mu_from_brackets(kappa[i], kappa_t[i], kappa_tt[i], br23)
        })
        .collect();
    Ok(mu)
}

fn mu_from_brackets(kappa: f64, kappa_t: f64, kappa_tt: f64, bracket23: f64) -> f64 {
    let cr = kappa.cbrt();
    let inv8 = 1.0 / cr.powi(8);
    (3.0 * kappa * kappa_tt - 5.0 * kappa_t * kappa_t + 9.0 * kappa * bracket23) * inv8 / 9.0
}

/// Affine curvature at a single point from the first four parameter
/// derivatives, expanding `kappa_tt = [gamma_t, gamma_tttt] + [gamma_tt, gamma_ttt]`.
/// Valid for any regular parametrization with `[gamma_t, gamma_tt] != 0`;
/// negative brackets use the real cube root.
pub fn affine_curvature_from_derivs(d1: Vec2, d2: Vec2, d3: Vec2, d4: Vec2) -> f64 {
    let kappa = d1.cross(d2);
    let kappa_t = d1.cross(d3);
    let kappa_tt = d1.cross(d4) + d2.cross(d3);
    mu_from_brackets(kappa, kappa_t, kappa_tt, d2.cross(d3))
}

/// Monge-form jet `y = a2 t^2/2 + a3 t^3/6 + a4 t^4/24 + ...` at the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MongeJet {
    pub a2: f64,
    pub a3: f64,
    pub a4: f64,
}

impl MongeJet {
    pub fn new(a2: f64, a3: f64, a4: f64) -> Self {
        MongeJet { a2, a3, a4 }
    }
}

/// Affine curvature at the origin of a Monge-form curve:
/// `mu(0) = (3 a2 a4 - 5 a3^2) / (9 a2^(8/3))`.
pub fn monge_affine_curvature(jet: &MongeJet) -> Result<f64> {
    if jet.a2 == 0.0 {
        return Err(Error::MongeA2Zero);
    }
    Ok((3.0 * jet.a2 * jet.a4 - 5.0 * jet.a3 * jet.a3) / (9.0 * jet.a2.cbrt().powi(8)))
}

/// Per-node affine data of a positively oriented closed curve, plus the
/// trigonometric interpolants needed to evaluate everything off-grid.
///
/// Immutable after construction; all downstream computations are pure
/// functions of this table.
#[derive(Debug, Clone)]
pub struct AffineJetTable {
    curve: SampledCurve,
    orientation_flipped: bool,
    tol: Tolerances,
    s: Vec<f64>,
    length: f64,
    gamma_s: Vec<Vec2>,
    gamma_ss: Vec<Vec2>,
    kappa: Vec<f64>,
    kappa_t: Vec<f64>,
    mu: Vec<f64>,
    mu_s: Vec<f64>,
    mu_ss: Vec<f64>,
    mu_sss: Vec<f64>,
    kappa_series: TrigSeries,
    kappa_t_series: TrigSeries,
    mu_series: TrigSeries,
    mu_s_series: TrigSeries,
    mu_ss_series: TrigSeries,
    mu_sss_series: TrigSeries,
    s_mean: f64,
    s_periodic: TrigSeries,
    s_periodic_0: f64,
    sup_mu: f64,
    sup_mu_s: f64,
    sup_mu_ss: f64,
    sup_mu_sss: f64,
}

/// All affine data at one parameter value.
#[derive(Debug, Clone, Copy)]
pub struct JetPoint {
    pub t: f64,
    pub s: f64,
    pub gamma: Vec2,
    pub gamma_s: Vec2,
    pub gamma_ss: Vec2,
    pub kappa: f64,
    pub mu: f64,
    pub mu_s: f64,
    pub mu_ss: f64,
    pub mu_sss: f64,
}

impl JetPoint {
    /// `gamma_sss = -mu gamma_s` (the structural ODE of affine arclength).
    pub fn gamma_sss(&self) -> Vec2 {
        self.gamma_s * (-self.mu)
    }
}

fn sup(values: &[f64]) -> f64 {
    values.iter().map(|v| v.abs()).fold(0.0, f64::max)
}

impl AffineJetTable {
    /// Build the table. Flips orientation internally when the bracket is
    /// uniformly negative; rejects inflexional curves.
    pub fn build(curve: &SampledCurve, tol: Tolerances) -> Result<AffineJetTable> {
        let (curve, orientation_flipped) = curve.oriented(tol.inflexion)?;
        let n = curve.n();

        let kappa = affine_speed(&curve);
        let kappa_t: Vec<f64> = (0..n)
            .map(|i| curve.derivs(1)[i].cross(curve.derivs(3)[i]))
            .collect();
        let kappa_series = TrigSeries::from_samples(&kappa);
        let kappa_t_series = TrigSeries::from_samples(&kappa_t);
        let kappa_tt = kappa_t_series.derivative().eval_grid(n);

        let speed: Vec<f64> = kappa.iter().map(|k| k.cbrt()).collect();
        let (s_mean, s_periodic) = TrigSeries::from_samples(&speed).antiderivative();
        let s_periodic_0 = s_periodic.eval(0.0);
        let s: Vec<f64> = curve
            .grid()
            .iter()
            .map(|&t| s_mean * t + s_periodic.eval(t) - s_periodic_0)
            .collect();
        let length = s_mean * TWO_PI;

        let mut gamma_s = Vec::with_capacity(n);
        let mut gamma_ss = Vec::with_capacity(n);
        let mut mu = Vec::with_capacity(n);
        for i in 0..n {
            let d1 = curve.derivs(1)[i];
            let d2 = curve.derivs(2)[i];
            let d3 = curve.derivs(3)[i];
            gamma_s.push(d1 / speed[i]);
            gamma_ss.push(affine_normal_point(d1, d2, kappa[i], kappa_t[i]));
            mu.push(mu_from_brackets(
                kappa[i],
                kappa_t[i],
                kappa_tt[i],
                d2.cross(d3),
            ));
        }

        let mu_series = TrigSeries::from_samples(&mu);
        let chain = |f: &TrigSeries| -> (Vec<f64>, TrigSeries) {
            let ft = f.derivative().eval_grid(n);
            let fs: Vec<f64> = ft.iter().zip(&speed).map(|(v, sp)| v / sp).collect();
            let series = TrigSeries::from_samples(&fs);
            (fs, series)
        };
        let (mu_s, mu_s_series) = chain(&mu_series);
        let (mu_ss, mu_ss_series) = chain(&mu_s_series);
        let (mu_sss, mu_sss_series) = chain(&mu_ss_series);

        Ok(AffineJetTable {
            sup_mu: sup(&mu),
            sup_mu_s: sup(&mu_s),
            sup_mu_ss: sup(&mu_ss),
            sup_mu_sss: sup(&mu_sss),
            curve,
            orientation_flipped,
            tol,
            s,
            length,
            gamma_s,
            gamma_ss,
            kappa,
            kappa_t,
            mu,
            mu_s,
            mu_ss,
            mu_sss,
            kappa_series,
            kappa_t_series,
            mu_series,
            mu_s_series,
            mu_ss_series,
            mu_sss_series,
            s_mean,
            s_periodic,
            s_periodic_0,
        })
    }

    pub fn n(&self) -> usize {
        self.curve.n()
    }

    /// The (possibly orientation-flipped) sampled curve the table was built from.
    pub fn curve(&self) -> &SampledCurve {
        &self.curve
    }

    pub fn orientation_flipped(&self) -> bool {
        self.orientation_flipped
    }

    pub fn tolerances(&self) -> Tolerances {
        self.tol
    }

    pub fn grid(&self) -> &[f64] {
        self.curve.grid()
    }

    pub fn s(&self) -> &[f64] {
        &self.s
    }

    /// Total affine length of one period.
    pub fn total_length(&self) -> f64 {
        self.length
    }

    pub fn gamma(&self) -> &[Vec2] {
        self.curve.derivs(0)
    }

    pub fn gamma_s(&self) -> &[Vec2] {
        &self.gamma_s
    }

    pub fn gamma_ss(&self) -> &[Vec2] {
        &self.gamma_ss
    }

    pub fn kappa(&self) -> &[f64] {
        &self.kappa
    }

    pub fn kappa_t(&self) -> &[f64] {
        &self.kappa_t
    }

    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    pub fn mu_s(&self) -> &[f64] {
        &self.mu_s
    }

    pub fn mu_ss(&self) -> &[f64] {
        &self.mu_ss
    }

    pub fn mu_sss(&self) -> &[f64] {
        &self.mu_sss
    }

    pub fn sup_mu(&self) -> f64 {
        self.sup_mu
    }

    /// Curve-dependent normalizer for classification thresholds:
    /// the largest sup-norm among `mu` and its first three s-derivatives.
    pub fn classification_scale(&self) -> f64 {
        self.sup_mu
            .max(self.sup_mu_s)
            .max(self.sup_mu_ss)
            .max(self.sup_mu_sss)
            .max(1e-14)
    }

    pub fn sup_mu_s(&self) -> f64 {
        self.sup_mu_s
    }

    /// Jet data at grid node `i` (exactly the stored arrays).
    pub fn node(&self, i: usize) -> JetPoint {
        JetPoint {
            t: self.curve.grid()[i],
            s: self.s[i],
            gamma: self.curve.derivs(0)[i],
            gamma_s: self.gamma_s[i],
            gamma_ss: self.gamma_ss[i],
            kappa: self.kappa[i],
            mu: self.mu[i],
            mu_s: self.mu_s[i],
            mu_ss: self.mu_ss[i],
            mu_sss: self.mu_sss[i],
        }
    }

    /// Jet data at an arbitrary parameter value, via the trigonometric
    /// interpolants.
    pub fn at(&self, t: f64) -> JetPoint {
        let d1 = self.curve.deriv_at(t, 1);
        let d2 = self.curve.deriv_at(t, 2);
        let kappa = self.kappa_series.eval(t);
        let kappa_t = self.kappa_t_series.eval(t);
        JetPoint {
            t,
            s: self.s_of_t(t),
            gamma: self.curve.deriv_at(t, 0),
            gamma_s: d1 / kappa.cbrt(),
            gamma_ss: affine_normal_point(d1, d2, kappa, kappa_t),
            kappa,
            mu: self.mu_series.eval(t),
            mu_s: self.mu_s_series.eval(t),
            mu_ss: self.mu_ss_series.eval(t),
            mu_sss: self.mu_sss_series.eval(t),
        }
    }

    pub fn mu_at(&self, t: f64) -> f64 {
        self.mu_series.eval(t)
    }

    pub fn mu_s_at(&self, t: f64) -> f64 {
        self.mu_s_series.eval(t)
    }

    pub fn mu_ss_at(&self, t: f64) -> f64 {
        self.mu_ss_series.eval(t)
    }

    pub fn mu_sss_at(&self, t: f64) -> f64 {
        self.mu_sss_series.eval(t)
    }

    pub fn kappa_at(&self, t: f64) -> f64 {
        self.kappa_series.eval(t)
    }

    /// Affine arclength at parameter `t` (extends over the cover:
    /// `s(t + 2*pi) = s(t) + L`).
    pub fn s_of_t(&self, t: f64) -> f64 {
        self.s_mean * t + self.s_periodic.eval(t) - self.s_periodic_0
    }

    /// Invert `s(t)` by Newton iteration on the monotone arclength map.
    pub fn t_of_s(&self, s: f64) -> f64 {
        let wraps = (s / self.length).floor();
        let s_red = s - wraps * self.length;
        // grid bracket as initial guess
        let idx = self.s.partition_point(|&v| v < s_red);
        let mut t = if idx == 0 || idx >= self.n() {
            self.curve.grid()[idx % self.n()]
        } else {
            let (s0, s1) = (self.s[idx - 1], self.s[idx]);
            let (t0, t1) = (self.curve.grid()[idx - 1], self.curve.grid()[idx]);
            t0 + (t1 - t0) * (s_red - s0) / (s1 - s0)
        };
        for _ in 0..40 {
            let f = self.s_of_t(t) - s_red;
            t -= f / self.kappa_at(t).cbrt();
            if f.abs() < 3e-14 * self.length.max(1.0) {
                break;
            }
        }
        t + wraps * TWO_PI
    }
}

/// The chain-ruled arclength derivatives of `mu` stored in the table.
pub fn mu_derivatives(jets: &AffineJetTable) -> (&[f64], &[f64], &[f64]) {
    (jets.mu_s(), jets.mu_ss(), jets.mu_sss())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{sample_curve, CurveSpec, HarmonicTerm};

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

    fn ellipse_table(a: f64, b: f64, n: usize) -> AffineJetTable {
        let curve = sample_curve(&CurveSpec::ellipse(a, b), n).unwrap();
        AffineJetTable::build(&curve, Tolerances::default()).unwrap()
    }

    #[test]
    fn ellipse_affine_length() {
        let curve = sample_curve(&CurveSpec::ellipse(2.0, 3.0), 256).unwrap();
        let (s, total) = affine_arclength(&curve, 1e-8).unwrap();
        assert!((total - TWO_PI * 6.0_f64.cbrt()).abs() < 1e-10);
        assert!(s[0].abs() < 1e-14);
        assert!(s.windows(2).all(|w| w[1] > w[0]));
        // circle: L = 2 pi
        let circle = sample_curve(&CurveSpec::circle(1.0), 256).unwrap();
        let (_, l) = affine_arclength(&circle, 1e-8).unwrap();
        assert!((l - TWO_PI).abs() < 1e-12);
    }

    #[test]
    fn ellipse_affine_normal_points_to_center() {
        let curve = sample_curve(&CurveSpec::ellipse(2.0, 3.0), 256).unwrap();
        let xi = affine_normal(&curve, 1e-8).unwrap();
        let scale = 6.0_f64.cbrt().powi(2).recip();
        for (i, p) in curve.derivs(0).iter().enumerate() {
            let expected = -*p * scale;
            assert!((xi[i] - expected).norm() < 1e-10);
        }
        assert!((xi[0].x - (-2.0 * scale)).abs() < 1e-10);
        assert!((xi[0].x + 0.605707).abs() < 1e-6);
    }

    #[test]
    fn conic_affine_curvature_is_constant() {
        for (a, b) in [(2.0, 3.0), (1.0, 1.0), (0.7, 2.4)] {
            let curve = sample_curve(&CurveSpec::ellipse(a, b), 256).unwrap();
            let mu = affine_curvature(&curve, 1e-8).unwrap();
            let expected = (a * b).cbrt().powi(2).recip();
            for v in &mu {
                assert!((v - expected).abs() < 1e-12, "{v} vs {expected}");
            }
        }
        let mu = affine_curvature(
            &sample_curve(&CurveSpec::ellipse(2.0, 3.0), 256).unwrap(),
            1e-8,
        )
        .unwrap();
        assert!((mu[0] - 0.3028534).abs() < 1e-7);
    }

    #[test]
    fn monge_formula_values() {
        assert_eq!(
            monge_affine_curvature(&MongeJet::new(1.0, 0.0, 0.0)).unwrap(),
            0.0
        );
        assert!((monge_affine_curvature(&MongeJet::new(1.0, 0.0, 3.0)).unwrap() - 1.0).abs() < 1e-15);
        assert!(
            (monge_affine_curvature(&MongeJet::new(1.0, 1.0, 0.0)).unwrap() + 5.0 / 9.0).abs()
                < 1e-15
        );
        assert!(monge_affine_curvature(&MongeJet::new(0.0, 1.0, 1.0)).is_err());
    }

    #[test]
    fn monge_matches_general_formula_on_circle_jet() {
        // Unit circle near t = 0: y = 1 - sqrt(1 - t^2) = t^2/2 + t^4/8 + ...
        // so (a2, a3, a4) = (1, 0, 3) and mu = 1.
        let jet = MongeJet::new(1.0, 0.0, 3.0);
        let mu = monge_affine_curvature(&jet).unwrap();
        let d1 = Vec2::new(1.0, 0.0);
        let d2 = Vec2::new(0.0, jet.a2);
        let d3 = Vec2::new(0.0, jet.a3);
        let d4 = Vec2::new(0.0, jet.a4);
        let general = affine_curvature_from_derivs(d1, d2, d3, d4);
        assert!((mu - general).abs() < 1e-14);
        assert!((mu - 1.0).abs() < 1e-14);
    }

    #[test]
    fn normalization_holds_on_jet_table() {
        for spec in [CurveSpec::ellipse(2.0, 3.0), sigma_spec(1.9)] {
            let curve = sample_curve(&spec, 1024).unwrap();
            let jets = AffineJetTable::build(&curve, Tolerances::default()).unwrap();
            for i in 0..jets.n() {
                let p = jets.node(i);
                assert!(
                    (p.gamma_s.cross(p.gamma_ss) - 1.0).abs() <= 1e-8,
                    "node {i}"
                );
            }
        }
    }

    #[test]
    fn structural_ode_residual_small() {
        let curve = sample_curve(&sigma_spec(1.9), 1024).unwrap();
        let jets = AffineJetTable::build(&curve, Tolerances::default()).unwrap();
        // gamma_sss by one more chain-rule step, using spectral derivatives
        // of the stored gamma_ss samples.
        let gx: Vec<f64> = jets.gamma_ss().iter().map(|v| v.x).collect();
        let gy: Vec<f64> = jets.gamma_ss().iter().map(|v| v.y).collect();
        let dx = TrigSeries::from_samples(&gx).derivative().eval_grid(jets.n());
        let dy = TrigSeries::from_samples(&gy).derivative().eval_grid(jets.n());
        for i in 0..jets.n() {
            let p = jets.node(i);
            let gamma_sss = Vec2::new(dx[i], dy[i]) / p.kappa.cbrt();
            let residual = gamma_sss + p.gamma_s * p.mu;
            assert!(residual.norm() <= 1e-6, "node {i}: {}", residual.norm());
        }
    }

    #[test]
    fn conic_mu_derivatives_vanish() {
        let jets = ellipse_table(2.0, 3.0, 512);
        let (mu_s, mu_ss, mu_sss) = mu_derivatives(&jets);
        assert!(sup(mu_s) <= 1e-8);
        assert!(sup(mu_ss) <= 1e-8);
        assert!(sup(mu_sss) <= 1e-8);
    }

    #[test]
    fn sigma_mu_s_has_six_zeros() {
        let curve = sample_curve(&sigma_spec(1.9), 1024).unwrap();
        let jets = AffineJetTable::build(&curve, Tolerances::default()).unwrap();
        let mu_s = jets.mu_s();
        let mut changes = 0;
        for i in 0..jets.n() {
            let a = mu_s[i];
            let b = mu_s[(i + 1) % jets.n()];
            if a * b < 0.0 {
                changes += 1;
            }
        }
        assert_eq!(changes, 6);
        assert_eq!(changes % 2, 0);
    }

    #[test]
    fn t_of_s_round_trips() {
        let curve = sample_curve(&sigma_spec(1.9), 512).unwrap();
        let jets = AffineJetTable::build(&curve, Tolerances::default()).unwrap();
        for i in (0..512).step_by(37) {
            let s = jets.s()[i];
            let t = jets.t_of_s(s);
            assert!(
                (t - jets.grid()[i]).abs() < 1e-10,
                "i={i}: {t} vs {}",
                jets.grid()[i]
            );
        }
        // extension over the cover
        let t = jets.t_of_s(jets.s()[10] + jets.total_length());
        assert!((t - (jets.grid()[10] + TWO_PI)).abs() < 1e-9);
    }

    #[test]
    fn off_grid_jet_matches_node() {
        let curve = sample_curve(&sigma_spec(1.9), 512).unwrap();
        let jets = AffineJetTable::build(&curve, Tolerances::default()).unwrap();
        let i = 97;
        let p = jets.node(i);
        let q = jets.at(jets.grid()[i]);
        assert!((p.mu - q.mu).abs() < 1e-10);
        assert!((p.mu_s - q.mu_s).abs() < 1e-9);
        assert!((p.s - q.s).abs() < 1e-10);
        assert!((p.gamma_ss - q.gamma_ss).norm() < 1e-10);
    }
}
