//! Beam-gain evaluation and one-dimensional pattern cuts through the focal point.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::array::{nf_steering, path_difference, ArrayConfig, FocusPoint, SteeringModel};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    #[default]
    PeakOne,
    UnitEnergy,
}

/// Real, nonnegative element amplitudes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Taper {
    weights: Vec<f64>,
    normalization: Normalization,
}

impl Taper {
    /// Validates and normalizes raw weights.
    pub fn new(weights: Vec<f64>, normalization: Normalization) -> Result<Self> {
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidConfig(
                "taper weights must be finite and nonnegative".into(),
            ));
        }
        let scale = match normalization {
            Normalization::PeakOne => weights.iter().cloned().fold(0.0, f64::max),
            Normalization::UnitEnergy => weights.iter().map(|w| w * w).sum::<f64>().sqrt(),
        };
        if !(scale > 0.0) {
            return Err(Error::InvalidConfig(
                "taper needs at least one positive weight".into(),
            ));
        }
        let weights = weights.into_iter().map(|w| w / scale).collect();
        Ok(Self {
            weights,
            normalization,
        })
    }

    pub fn peak_one(weights: Vec<f64>) -> Result<Self> {
        Self::new(weights, Normalization::PeakOne)
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn renormalized(&self, normalization: Normalization) -> Self {
        Self::new(self.weights.clone(), normalization).expect("valid taper stays valid")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CutAxis {
    AngleFixedRange,
    AngleDistanceRing,
    Range,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AngleCutMode {
    /// `G(θ, r_f)`.
    #[default]
    FixedRange,
    /// `G(θ, r_f cos²θ / cos²θᵤ)`.
    DistanceRing,
}

/// A normalized gain slice; coordinates are radians or meters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatternCut {
    pub axis: CutAxis,
    pub coordinates: Vec<f64>,
    pub gain_linear: Vec<f64>,
    pub gain_db: Vec<f64>,
    pub focus: FocusPoint,
}

impl PatternCut {
    fn from_raw(
        axis: CutAxis,
        coordinates: Vec<f64>,
        raw: Vec<f64>,
        focus: FocusPoint,
    ) -> Result<Self> {
        let peak = raw.iter().cloned().fold(0.0, f64::max);
        if !(peak > 0.0 && peak.is_finite()) {
            return Err(Error::NotNormalized { peak });
        }
        let gain_linear: Vec<f64> = raw.iter().map(|g| g / peak).collect();
        let gain_db = gain_linear.iter().map(|g| 10.0 * g.log10()).collect();
        Ok(Self {
            axis,
            coordinates,
            gain_linear,
            gain_db,
            focus,
        })
    }

    pub fn len(&self) -> usize {
        self.coordinates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coordinates.is_empty()
    }

    /// Index of the global maximum (first occurrence).
    pub fn peak_index(&self) -> usize {
        let mut best = 0;
        for (i, g) in self.gain_linear.iter().enumerate() {
            if *g > self.gain_linear[best] {
                best = i;
            }
        }
        best
    }
}

/// Focused beam `g = w ⊙ conj(b(θᵤ, r_f))`, ready for repeated gain evaluation.
#[derive(Debug, Clone)]
pub struct Beam {
    config: ArrayConfig,
    model: SteeringModel,
    focus: FocusPoint,
    offsets: Vec<f64>,
    coefficients: Vec<Complex64>,
}

impl Beam {
    pub fn new(
        config: &ArrayConfig,
        taper: &Taper,
        focus: FocusPoint,
        model: SteeringModel,
    ) -> Result<Self> {
        if taper.len() != config.element_count() {
            return Err(Error::InvalidConfig(format!(
                "taper has {} weights for a {}-element array",
                taper.len(),
                config.element_count()
            )));
        }
        let b = nf_steering(config, model, focus.theta, focus.range)?;
        let coefficients = taper
            .weights()
            .iter()
            .zip(&b)
            .map(|(w, z)| z.conj() * *w)
            .collect();
        Ok(Self {
            config: *config,
            model,
            focus,
            offsets: config.offsets(),
            coefficients,
        })
    }

    pub fn focus(&self) -> FocusPoint {
        self.focus
    }

    /// Unnormalized gain at `(θ, r)`; inputs must already be validated.
    fn gain_unchecked(&self, theta: f64, r: f64) -> f64 {
        let k = self.config.wavenumber();
        let d = self.config.spacing();
        let (s, c) = theta.sin_cos();
        let curvature = c * c / (2.0 * r);
        let mut acc = Complex64::new(0.0, 0.0);
        for (g, &n) in self.coefficients.iter().zip(&self.offsets) {
            let x = n * d;
            let delta = match self.model {
                SteeringModel::Exact => -path_difference(r, x, s),
                SteeringModel::Fresnel => x * s - x * x * curvature,
            };
            let (sp, cp) = (-k * delta).sin_cos();
            acc += g * Complex64::new(cp, sp);
        }
        acc.norm_sqr() / self.config.element_count() as f64
    }

    /// Unnormalized gain `|(w ⊙ b(θᵤ, r_f))ᴴ b(θ, r)|²`.
    pub fn gain(&self, theta: f64, r: f64) -> Result<f64> {
        if theta.abs() > FRAC_PI_2 {
            return Err(Error::Domain(format!(
                "angle must lie in [-π/2, π/2], got {theta}"
            )));
        }
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::Domain(format!("range must be positive, got {r}")));
        }
        Ok(self.gain_unchecked(theta, r))
    }

    pub fn angle_cut(&self, theta_grid: &[f64], mode: AngleCutMode) -> Result<PatternCut> {
        check_grid(theta_grid, self.focus.theta, "angle")?;
        if theta_grid.iter().any(|t| t.abs() > FRAC_PI_2) {
            return Err(Error::Grid("angle grid must lie within [-π/2, π/2]".into()));
        }
        let cu2 = self.focus.theta.cos().powi(2);
        let r_f = self.focus.range;
        let range_at = |t: f64| match mode {
            AngleCutMode::FixedRange => r_f,
            AngleCutMode::DistanceRing => r_f * t.cos().powi(2) / cu2,
        };
        if mode == AngleCutMode::DistanceRing && theta_grid.iter().any(|t| t.abs() >= FRAC_PI_2) {
            return Err(Error::Grid(
                "distance-ring cut needs angles strictly inside (-π/2, π/2)".into(),
            ));
        }
        let raw: Vec<f64> = theta_grid
            .par_iter()
            .map(|&t| self.gain_unchecked(t, range_at(t)))
            .collect();
        let axis = match mode {
            AngleCutMode::FixedRange => CutAxis::AngleFixedRange,
            AngleCutMode::DistanceRing => CutAxis::AngleDistanceRing,
        };
        PatternCut::from_raw(axis, theta_grid.to_vec(), raw, self.focus)
    }

    pub fn range_cut(&self, r_grid: &[f64]) -> Result<PatternCut> {
        check_grid(r_grid, self.focus.range, "range")?;
        if r_grid.iter().any(|r| !(*r > 0.0 && r.is_finite())) {
            return Err(Error::Grid("range grid must be positive".into()));
        }
        let theta = self.focus.theta;
        let raw: Vec<f64> = r_grid
            .par_iter()
            .map(|&r| self.gain_unchecked(theta, r))
            .collect();
        PatternCut::from_raw(CutAxis::Range, r_grid.to_vec(), raw, self.focus)
    }
}

fn check_grid(grid: &[f64], target: f64, what: &str) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::Grid(format!("{what} grid is empty")));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Grid(format!(
            "{what} grid must be strictly increasing"
        )));
    }
    let step = grid.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
    let first = grid[0];
    let last = grid[grid.len() - 1];
    if target < first - step || target > last + step {
        return Err(Error::Grid(format!(
            "{what} grid [{first}, {last}] does not reach the focus at {target}"
        )));
    }
    Ok(())
}

/// Unnormalized beam gain at a single observation point.
pub fn beam_gain(
    config: &ArrayConfig,
    taper: &Taper,
    focus: FocusPoint,
    model: SteeringModel,
    theta: f64,
    r: f64,
) -> Result<f64> {
    Beam::new(config, taper, focus, model)?.gain(theta, r)
}

pub fn angle_cut(
    config: &ArrayConfig,
    taper: &Taper,
    focus: FocusPoint,
    model: SteeringModel,
    theta_grid: &[f64],
    mode: AngleCutMode,
) -> Result<PatternCut> {
    Beam::new(config, taper, focus, model)?.angle_cut(theta_grid, mode)
}

pub fn range_cut(
    config: &ArrayConfig,
    taper: &Taper,
    focus: FocusPoint,
    model: SteeringModel,
    r_grid: &[f64],
) -> Result<PatternCut> {
    Beam::new(config, taper, focus, model)?.range_cut(r_grid)
}

/// `n` cell midpoints of `[a, b]`.
pub fn midpoint_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    let h = (b - a) / n as f64;
    (0..n).map(|i| a + (i as f64 + 0.5) * h).collect()
}

/// `n` points spaced evenly in log from `a` to `b` inclusive.
pub fn log_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    let (la, lb) = (a.ln(), b.ln());
    (0..n)
        .map(|i| {
            if i + 1 == n {
                b
            } else {
                (la + (lb - la) * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect()
}

pub const DEFAULT_ANGLE_SAMPLES: usize = 8192;
pub const DEFAULT_RANGE_SAMPLES: usize = 65536;
pub const DEFAULT_RANGE_SPAN: f64 = 5.0;

/// Angle grid over the visible region, avoiding the endfire singularities.
pub fn default_angle_grid(samples: usize) -> Vec<f64> {
    midpoint_grid(-FRAC_PI_2, FRAC_PI_2, samples)
}

/// Log-spaced range grid over `[r_f/span, span·r_f]`, clamped to `[λ, R_D]`.
pub fn default_range_grid(
    config: &ArrayConfig,
    focus: FocusPoint,
    samples: usize,
    span: f64,
) -> Vec<f64> {
    let lo = (focus.range / span).max(config.wavelength());
    let hi = (focus.range * span)
        .min(config.rayleigh_distance())
        .max(focus.range);
    log_grid(lo, hi, samples)
}

/// Far-field uniform array factor `|sin(Nx/2) / (N sin(x/2))|²`.
pub fn uniform_array_factor(n: usize, x: f64) -> f64 {
    let half = 0.5 * x;
    let s = half.sin();
    if s.abs() < 1e-12 {
        return 1.0;
    }
    let v = (n as f64 * half).sin() / (n as f64 * s);
    v * v
}
