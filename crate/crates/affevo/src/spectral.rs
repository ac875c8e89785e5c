//! Real trigonometric series on `[0, 2*pi)`: the workhorse for spectral
//! differentiation, quadrature and off-grid interpolation of periodic data.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

/// Coefficients below `TAIL_CUTOFF * max|coef|` are FFT round-off, not signal.
/// Keeping them would let high-order derivatives amplify pure noise by k^d.
const TAIL_CUTOFF: f64 = 1e-13;

/// A truncated real Fourier series
/// `f(t) = mean + sum_k ( cos_k * cos(k t) + sin_k * sin(k t) )`, k = 1..=K.
#[derive(Debug, Clone, Default)]
pub struct TrigSeries {
    mean: f64,
    cos: Vec<f64>,
    sin: Vec<f64>,
}

impl TrigSeries {
    pub fn new(mean: f64, cos: Vec<f64>, sin: Vec<f64>) -> Self {
        assert_eq!(cos.len(), sin.len());
        TrigSeries { mean, cos, sin }
    }

    pub fn constant(mean: f64) -> Self {
        TrigSeries {
            mean,
            cos: Vec::new(),
            sin: Vec::new(),
        }
    }

    /// Highest retained harmonic.
    pub fn max_harmonic(&self) -> usize {
        self.cos.len()
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Magnitude of harmonic `k` (`max(|a_k|, |b_k|)`, `|mean|` for k = 0).
    pub fn harmonic_magnitude(&self, k: usize) -> f64 {
        if k == 0 {
            self.mean.abs()
        } else if k <= self.cos.len() {
            self.cos[k - 1].abs().max(self.sin[k - 1].abs())
        } else {
            0.0
        }
    }

    /// Interpolating series through `samples` on the uniform grid
    /// `t_i = 2*pi*i/n`. Round-off-level trailing coefficients are dropped.
    pub fn from_samples(samples: &[f64]) -> Self {
        let n = samples.len();
        assert!(n >= 2, "need at least two samples");
        let mut buf: Vec<Complex<f64>> = samples.iter().map(|&v| Complex::new(v, 0.0)).collect();
        let mut planner = FftPlanner::new();
        planner.plan_fft_forward(n).process(&mut buf);

        let half = n / 2;
        let mean = buf[0].re / n as f64;
        let mut cos = Vec::with_capacity(half);
        let mut sin = Vec::with_capacity(half);
        for k in 1..=half {
            if 2 * k == n {
                // Nyquist mode of an even grid: only the cosine part is observable.
                cos.push(buf[k].re / n as f64);
                sin.push(0.0);
            } else {
                cos.push(2.0 * buf[k].re / n as f64);
                sin.push(-2.0 * buf[k].im / n as f64);
            }
        }
        let mut series = TrigSeries { mean, cos, sin };
        series.truncate_noise();
        series
    }

    /// Drop the trailing block of coefficients that sits at the FFT noise floor.
    fn truncate_noise(&mut self) {
        let max_mag = (0..=self.max_harmonic())
            .map(|k| self.harmonic_magnitude(k))
            .fold(0.0_f64, f64::max);
        if max_mag == 0.0 {
            self.cos.clear();
            self.sin.clear();
            return;
        }
        let cutoff = TAIL_CUTOFF * max_mag;
        let mut keep = 0;
        for k in (1..=self.max_harmonic()).rev() {
            if self.harmonic_magnitude(k) > cutoff {
                keep = k;
                break;
            }
        }
        self.cos.truncate(keep);
        self.sin.truncate(keep);
    }

    /// Evaluate at an arbitrary parameter value.
    pub fn eval(&self, t: f64) -> f64 {
        let (s1, c1) = t.sin_cos();
        let mut ck = 1.0;
        let mut sk = 0.0;
        let mut acc = self.mean;
        for k in 0..self.cos.len() {
            let c_next = ck * c1 - sk * s1;
            let s_next = sk * c1 + ck * s1;
            acc += self.cos[k] * c_next + self.sin[k] * s_next;
            ck = c_next;
            sk = s_next;
        }
        acc
    }

    /// Evaluate on the uniform grid `t_i = 2*pi*i/m` via an inverse FFT.
    ///
    /// `m` must resolve every retained harmonic (`m/2 >= max_harmonic`).
    pub fn eval_grid(&self, m: usize) -> Vec<f64> {
        assert!(
            m / 2 >= self.max_harmonic(),
            "grid of {m} points cannot resolve harmonic {}",
            self.max_harmonic()
        );
        let mut buf = vec![Complex::new(0.0, 0.0); m];
        buf[0] = Complex::new(self.mean * m as f64, 0.0);
        for k in 1..=self.max_harmonic() {
            let (a, b) = (self.cos[k - 1], self.sin[k - 1]);
            if 2 * k == m {
                // The sine part vanishes on this grid.
                buf[k] = Complex::new(a * m as f64, 0.0);
            } else {
                let c = Complex::new(a * m as f64 / 2.0, -b * m as f64 / 2.0);
                buf[k] = c;
                buf[m - k] = c.conj();
            }
        }
        let mut planner = FftPlanner::new();
        planner.plan_fft_inverse(m).process(&mut buf);
        buf.into_iter().map(|c| c.re / m as f64).collect()
    }

    /// Term-by-term derivative.
    pub fn derivative(&self) -> TrigSeries {
        let mut cos = Vec::with_capacity(self.cos.len());
        let mut sin = Vec::with_capacity(self.sin.len());
        for k in 1..=self.cos.len() {
            let kk = k as f64;
            cos.push(kk * self.sin[k - 1]);
            sin.push(-kk * self.cos[k - 1]);
        }
        TrigSeries { mean: 0.0, cos, sin }
    }

    /// Antiderivative split as `F(t) = mean * t + P(t)` with `P` periodic.
    /// Returns `(mean, P)`; `P` is not normalized to vanish anywhere.
    pub fn antiderivative(&self) -> (f64, TrigSeries) {
        let mut cos = Vec::with_capacity(self.cos.len());
        let mut sin = Vec::with_capacity(self.sin.len());
        for k in 1..=self.cos.len() {
            let kk = k as f64;
            cos.push(-self.sin[k - 1] / kk);
            sin.push(self.cos[k - 1] / kk);
        }
        (
            self.mean,
            TrigSeries {
                mean: 0.0,
                cos,
                sin,
            },
        )
    }

    /// Series of `t -> f(-t)`: cosine coefficients kept, sine negated.
    pub fn time_reversed(&self) -> TrigSeries {
        TrigSeries {
            mean: self.mean,
            cos: self.cos.clone(),
            sin: self.sin.iter().map(|b| -b).collect(),
        }
    }

    /// Largest coefficient magnitude at harmonics `>= k0`, relative to the
    /// largest overall (0 when the series is empty). Used to detect
    /// undersampled input before differentiating it.
    pub fn tail_fraction(&self, k0: usize) -> f64 {
        let overall = (1..=self.max_harmonic())
            .map(|k| self.harmonic_magnitude(k))
            .fold(0.0_f64, f64::max);
        if overall == 0.0 {
            return 0.0;
        }
        let tail = (k0.max(1)..=self.max_harmonic())
            .map(|k| self.harmonic_magnitude(k))
            .fold(0.0_f64, f64::max);
        tail / overall
    }
}
