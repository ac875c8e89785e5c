//! Affine-invariant geometry of smooth closed plane curves.
//!
//! The crate computes the affine arclength frame and affine curvature `mu`
//! of a closed curve without affine inflexions, evaluates the one-parameter
//! family of evolutoid envelopes `E_alpha` (the curve itself at `alpha = 0`,
//! the affine evolute at `alpha = 1`), finds and classifies the envelope
//! singularities (ordinary cusps / swallowtail points), and assembles the
//! discriminant surface of the family in `(x, y, alpha)`-space together with
//! its cuspidal-edge curves.
//!
//! Pipeline:
//!
//! * [`curve`] — curve specs, uniform sampling, spectral derivatives.
//! * [`affine`] — arclength, frame, `mu` and its arclength derivatives.
//! * [`evolutoid`] — envelope points, regularity, singular points,
//!   classification, the first singular `alpha`.
//! * [`discriminant`] — family values, versality diagnostics, the meshed
//!   discriminant surface with traced cuspidal edges and swallowtails.
//! * [`oracle`] — independent brute-force cross-checks used by tests and the
//!   CLI `--verify` flag, never by the main pipeline.
//! * [`export`] — CSV / SVG / OBJ / JSON artifact writers.

pub mod affine;
pub mod curve;
pub mod discriminant;
pub mod error;
pub mod evolutoid;
pub mod export;
pub mod oracle;
pub mod spectral;
mod vec2;

pub use error::{Error, Result};
pub use vec2::Vec2;

/// Numerical cutoffs used across the pipeline. Defaults are scaled for
/// analytic specs sampled at n = 256..1024.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    /// Absolute threshold on `|[gamma_t, gamma_tt]|` below which a curve is
    /// rejected as inflexional.
    pub inflexion: f64,
    /// Bisection width (in affine arclength) for singular-point roots.
    pub root_ds: f64,
    /// Relative classification threshold for the A2/A3/degenerate decision.
    pub class_rel: f64,
    /// Smallest admissible evolutoid denominator `(1-a)^2 + mu a^2`.
    pub denom_min: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            inflexion: 1e-8,
            root_ds: 1e-10,
            class_rel: 1e-6,
            denom_min: 1e-12,
        }
    }
}
