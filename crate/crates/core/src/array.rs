//! Uniform linear array geometry, field-region boundaries and steering vectors.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// How element indices enter the phase terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IndexConvention {
    /// Offsets `n - (N-1)/2`, symmetric about the array center.
    #[default]
    Centered,
    /// Offsets `0..N`, referenced to the first element.
    ZeroBased,
}

/// Definition of the aperture length `D`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ApertureRule {
    /// `D = (N-1) d`, the physical end-to-end span.
    #[default]
    EndToEnd,
    /// `D = N d`.
    ElementCount,
}

/// Which near-field steering model to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SteeringModel {
    /// Spherical wavefront, law-of-cosines distances.
    #[default]
    Exact,
    /// Second-order (Fresnel) expansion of the element distance.
    Fresnel,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArrayConfig {
    element_count: usize,
    spacing: f64,
    carrier_frequency: f64,
    pub index_convention: IndexConvention,
    pub aperture_rule: ApertureRule,
}

impl ArrayConfig {
    pub fn new(element_count: usize, carrier_frequency: f64, spacing: f64) -> Result<Self> {
        if element_count < 2 {
            return Err(Error::InvalidConfig(format!(
                "element count must be at least 2, got {element_count}"
            )));
        }
        if !(spacing > 0.0 && spacing.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "spacing must be positive, got {spacing}"
            )));
        }
        if !(carrier_frequency > 0.0 && carrier_frequency.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "carrier frequency must be positive, got {carrier_frequency}"
            )));
        }
        Ok(Self {
            element_count,
            spacing,
            carrier_frequency,
            index_convention: IndexConvention::default(),
            aperture_rule: ApertureRule::default(),
        })
    }

    /// Array with half-wavelength spacing at the given carrier.
    pub fn half_wavelength(element_count: usize, carrier_frequency: f64) -> Result<Self> {
        if !(carrier_frequency > 0.0 && carrier_frequency.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "carrier frequency must be positive, got {carrier_frequency}"
            )));
        }
        Self::new(
            element_count,
            carrier_frequency,
            0.5 * SPEED_OF_LIGHT / carrier_frequency,
        )
    }

    pub fn with_index_convention(mut self, convention: IndexConvention) -> Self {
        self.index_convention = convention;
        self
    }

    pub fn with_aperture_rule(mut self, rule: ApertureRule) -> Self {
        self.aperture_rule = rule;
        self
    }

    pub fn element_count(&self) -> usize {
        self.element_count
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn carrier_frequency(&self) -> f64 {
        self.carrier_frequency
    }

    pub fn wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / self.carrier_frequency
    }

    /// Wavenumber `2π/λ`.
    pub fn wavenumber(&self) -> f64 {
        2.0 * PI / self.wavelength()
    }

    pub fn aperture_length(&self) -> f64 {
        aperture_length(self)
    }

    pub fn field_bounds(&self) -> FieldBounds {
        field_bounds(self)
    }

    pub fn rayleigh_distance(&self) -> f64 {
        let d = self.aperture_length();
        2.0 * d * d / self.wavelength()
    }

    /// Element offset (in units of `d`) for index `k` under `convention`.
    pub fn offset_with(&self, k: usize, convention: IndexConvention) -> f64 {
        match convention {
            IndexConvention::Centered => k as f64 - 0.5 * (self.element_count as f64 - 1.0),
            IndexConvention::ZeroBased => k as f64,
        }
    }

    pub fn offsets_with(&self, convention: IndexConvention) -> Vec<f64> {
        (0..self.element_count)
            .map(|k| self.offset_with(k, convention))
            .collect()
    }

    /// Element offsets under the configured convention.
    pub fn offsets(&self) -> Vec<f64> {
        self.offsets_with(self.index_convention)
    }

    /// Largest admissible `|Ω| = d/λ`.
    pub fn omega_limit(&self) -> f64 {
        self.spacing / self.wavelength()
    }
}

/// Lateral angle and axial range of a focal point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FocusPoint {
    pub theta: f64,
    pub range: f64,
}

impl FocusPoint {
    pub fn new(theta: f64, range: f64) -> Result<Self> {
        if !(theta.abs() < FRAC_PI_2) {
            return Err(Error::Domain(format!(
                "focus angle must lie in (-π/2, π/2), got {theta}"
            )));
        }
        if !(range > 0.0 && range.is_finite()) {
            return Err(Error::Domain(format!(
                "focus range must be positive, got {range}"
            )));
        }
        Ok(Self { theta, range })
    }
}

/// Inner (radiative near-field) and outer (Rayleigh) boundaries, meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldBounds {
    pub fresnel_inner: f64,
    pub rayleigh_distance: f64,
}

pub fn aperture_length(config: &ArrayConfig) -> f64 {
    let n = config.element_count as f64;
    match config.aperture_rule {
        ApertureRule::EndToEnd => (n - 1.0) * config.spacing,
        ApertureRule::ElementCount => n * config.spacing,
    }
}

pub fn field_bounds(config: &ArrayConfig) -> FieldBounds {
    let d = aperture_length(config);
    let lambda = config.wavelength();
    FieldBounds {
        fresnel_inner: 0.62 * (d * d * d / lambda).sqrt(),
        rayleigh_distance: 2.0 * d * d / lambda,
    }
}

fn check_angle(theta: f64) -> Result<()> {
    if theta.abs() <= FRAC_PI_2 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "angle must lie in [-π/2, π/2], got {theta}"
        )))
    }
}

fn check_range(r: f64) -> Result<()> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("range must be positive, got {r}")))
    }
}

fn unit_phasors(phases: impl Iterator<Item = f64>, n: usize) -> Vec<Complex64> {
    let scale = 1.0 / (n as f64).sqrt();
    phases.map(|p| Complex64::from_polar(scale, p)).collect()
}

/// Far-field (planar wavefront) response `a(θ)`.
pub fn ff_steering(config: &ArrayConfig, theta: f64) -> Result<Vec<Complex64>> {
    check_angle(theta)?;
    let kd = config.wavenumber() * config.spacing * theta.sin();
    let offsets = config.offsets();
    Ok(unit_phasors(
        offsets.iter().map(|&n| -kd * n),
        config.element_count,
    ))
}

/// Path-length difference `sqrt(r² + x² - 2 r x sinθ) - r`, evaluated without cancellation.
#[inline]
pub(crate) fn path_difference(r: f64, x: f64, sin_theta: f64) -> f64 {
    let num = x * x - 2.0 * r * x * sin_theta;
    num / ((r * r + num).sqrt() + r)
}

/// Spherical-wave near-field response `b(θ, r)`, with the sign convention of
/// the far-field and Fresnel vectors (phase `ν(r⁽ⁿ⁾ − r)`).
pub fn nf_steering_exact(config: &ArrayConfig, theta: f64, r: f64) -> Result<Vec<Complex64>> {
    check_angle(theta)?;
    check_range(r)?;
    let k = config.wavenumber();
    let d = config.spacing;
    let s = theta.sin();
    let offsets = config.offsets();
    Ok(unit_phasors(
        offsets.iter().map(|&n| k * path_difference(r, n * d, s)),
        config.element_count,
    ))
}

/// Fresnel-approximated near-field response.
pub fn nf_steering_fresnel(config: &ArrayConfig, theta: f64, r: f64) -> Result<Vec<Complex64>> {
    check_angle(theta)?;
    check_range(r)?;
    let k = config.wavenumber();
    let d = config.spacing;
    let (s, c) = theta.sin_cos();
    let curvature = c * c / (2.0 * r);
    let offsets = config.offsets();
    Ok(unit_phasors(
        offsets
            .iter()
            .map(|&n| -k * (n * d * s - n * n * d * d * curvature)),
        config.element_count,
    ))
}

/// Fresnel response parameterized by `Ω = (d/λ) sinθ`.
pub fn nf_steering_omega(config: &ArrayConfig, omega: f64, r: f64) -> Result<Vec<Complex64>> {
    let limit = config.omega_limit();
    if !(omega.abs() <= limit * (1.0 + 1e-12)) {
        return Err(Error::Domain(format!(
            "|Ω| must not exceed d/λ = {limit}, got {omega}"
        )));
    }
    check_range(r)?;
    let offsets = config.offsets();
    Ok(unit_phasors(
        offsets.iter().map(|&n| omega_phase(config, omega, r, n)),
        config.element_count,
    ))
}

#[inline]
pub(crate) fn omega_phase(config: &ArrayConfig, omega: f64, r: f64, n: f64) -> f64 {
    let lambda = config.wavelength();
    let d = config.spacing;
    -2.0 * PI
        * (omega * n - n * n * d * d / (2.0 * r * lambda)
            + omega * omega * n * n * lambda / (2.0 * r))
}

/// Near-field steering under the chosen model.
pub fn nf_steering(
    config: &ArrayConfig,
    model: SteeringModel,
    theta: f64,
    r: f64,
) -> Result<Vec<Complex64>> {
    match model {
        SteeringModel::Exact => nf_steering_exact(config, theta, r),
        SteeringModel::Fresnel => nf_steering_fresnel(config, theta, r),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn norm(v: &[Complex64]) -> f64 {
        v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    fn wrap(p: f64) -> f64 {
        (p + PI).rem_euclid(2.0 * PI) - PI
    }

    fn reference_array() -> ArrayConfig {
        ArrayConfig::half_wavelength(128, 15e9).unwrap()
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(ArrayConfig::new(1, 15e9, 0.01).is_err());
        assert!(ArrayConfig::new(4, 0.0, 0.01).is_err());
        assert!(ArrayConfig::new(4, 15e9, -0.01).is_err());
        assert!(FocusPoint::new(FRAC_PI_2, 1.0).is_err());
        assert!(FocusPoint::new(0.0, 0.0).is_err());
    }

    #[test]
    fn aperture_examples() {
        let c = ArrayConfig::new(2, 15e9, 0.01).unwrap();
        assert_relative_eq!(c.aperture_length(), 0.01);
        let c = ArrayConfig::new(128, 15e9, 0.01).unwrap();
        assert_relative_eq!(c.aperture_length(), 1.27, max_relative = 1e-14);
        let c = c.with_aperture_rule(ApertureRule::ElementCount);
        assert_relative_eq!(c.aperture_length(), 1.28, max_relative = 1e-14);
    }

    #[test]
    fn wavelength_uses_exact_speed_of_light() {
        let c = reference_array();
        assert_eq!(c.wavelength(), SPEED_OF_LIGHT / 15e9);
        assert_relative_eq!(c.spacing(), c.wavelength() / 2.0, max_relative = 1e-15);
    }

    #[test]
    fn field_bounds_for_reference_array() {
        let c = reference_array();
        let lambda = c.wavelength();
        let d = 127.0 * lambda / 2.0;
        let b = c.field_bounds();
        assert_relative_eq!(
            b.rayleigh_distance,
            2.0 * d * d / lambda,
            max_relative = 1e-14
        );
        // 127² λ / 2 with λ = c/15 GHz
        assert!((b.rayleigh_distance - 161.178).abs() < 1e-3);
        assert!((b.fresnel_inner - 6.270).abs() < 1e-3);
        assert!(b.fresnel_inner < b.rayleigh_distance);
    }

    #[test]
    fn field_bounds_vanish_with_aperture() {
        let c = ArrayConfig::new(2, 15e9, 1e-9).unwrap();
        let b = c.field_bounds();
        assert!(b.fresnel_inner < 1e-9 && b.rayleigh_distance < 1e-9);
    }

    #[test]
    fn ff_broadside_is_flat() {
        let c = reference_array();
        let a = ff_steering(&c, 0.0).unwrap();
        for z in &a {
            assert_relative_eq!(z.re, 1.0 / 128f64.sqrt(), max_relative = 1e-14);
            assert!(z.im.abs() < 1e-15);
        }
        assert_relative_eq!(
            norm(&ff_steering(&c, 0.3).unwrap()),
            1.0,
            max_relative = 1e-12
        );
    }

    #[test]
    fn ff_endfire_two_elements() {
        let c = ArrayConfig::half_wavelength(2, 15e9)
            .unwrap()
            .with_index_convention(IndexConvention::ZeroBased);
        let a = ff_steering(&c, FRAC_PI_2).unwrap();
        let s = 1.0 / 2f64.sqrt();
        assert_relative_eq!(a[0].re, s, max_relative = 1e-14);
        assert_relative_eq!(a[1].re, -s, max_relative = 1e-12);
        assert!(a[1].im.abs() < 1e-12);
    }

    #[test]
    fn exact_reference_element_has_zero_phase() {
        let c = ArrayConfig::half_wavelength(5, 15e9).unwrap();
        // centered, N odd: index 2 sits at offset 0
        let b = nf_steering_exact(&c, 0.4, 3.0).unwrap();
        assert_relative_eq!(b[2].re, 1.0 / 5f64.sqrt(), max_relative = 1e-14);
        assert!(nf_steering_exact(&c, 0.0, 0.0).is_err());
        assert!(nf_steering_fresnel(&c, 0.0, -1.0).is_err());
    }

    #[test]
    fn exact_approaches_far_field() {
        let c = reference_array();
        let rd = c.rayleigh_distance();
        let theta = 0.2;
        let a = ff_steering(&c, theta).unwrap();
        let b = nf_steering_exact(&c, theta, 1e6 * rd).unwrap();
        let worst = a
            .iter()
            .zip(&b)
            .map(|(x, y)| wrap((y / x).arg()).abs())
            .fold(0.0, f64::max);
        assert!(worst < 1e-3, "phase deviation {worst}");
    }

    #[test]
    fn exact_far_field_convergence_is_monotone() {
        let c = reference_array();
        let rd = c.rayleigh_distance();
        let a = ff_steering(&c, 0.0).unwrap();
        let mut last = f64::INFINITY;
        for decade in 0..6 {
            let r = rd * 10f64.powi(decade) * 1.5;
            let b = nf_steering_exact(&c, 0.0, r).unwrap();
            let dev = a
                .iter()
                .zip(&b)
                .map(|(x, y)| wrap((y / x).arg()).abs())
                .fold(0.0, f64::max);
            assert!(dev < last, "not decreasing at decade {decade}");
            last = dev;
        }
    }

    #[test]
    fn fresnel_matches_exact_at_rayleigh_distance() {
        let c = reference_array();
        let rd = c.rayleigh_distance();
        let e = nf_steering_exact(&c, 0.0, rd).unwrap();
        let f = nf_steering_fresnel(&c, 0.0, rd).unwrap();
        let worst = e
            .iter()
            .zip(&f)
            .map(|(x, y)| wrap((y / x).arg()).abs())
            .fold(0.0, f64::max);
        assert!(worst < 0.05, "phase error {worst}");
    }

    #[test]
    fn fresnel_far_broadside_is_flat() {
        let c = reference_array();
        let b = nf_steering_fresnel(&c, 0.0, 1e12).unwrap();
        for z in &b {
            assert!((z.re - 1.0 / 128f64.sqrt()).abs() < 1e-9);
        }
    }

    #[test]
    fn fresnel_angle_reflection_symmetry() {
        let c = ArrayConfig::half_wavelength(16, 15e9).unwrap();
        let plus = nf_steering_fresnel(&c, 0.3, 2.0).unwrap();
        let minus = nf_steering_fresnel(&c, -0.3, 2.0).unwrap();
        for k in 0..16 {
            let z = plus[k];
            let w = minus[15 - k];
            assert!((z - w).norm() < 1e-13);
        }
    }

    #[test]
    fn omega_parameterization_matches_fresnel() {
        let c = reference_array();
        let r = 3.7;
        let theta = PI / 6.0;
        let omega = 0.5 * theta.sin();
        assert_relative_eq!(omega, 0.25, max_relative = 1e-15);
        let a = nf_steering_omega(&c, omega, r).unwrap();
        let b = nf_steering_fresnel(&c, theta, r).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).norm() <= 1e-12 * x.norm().max(1e-300));
        }
        let z0 = nf_steering_omega(&c, 0.0, r).unwrap();
        let f0 = nf_steering_fresnel(&c, 0.0, r).unwrap();
        for (x, y) in z0.iter().zip(&f0) {
            assert!((x - y).norm() < 1e-13);
        }
        assert!(nf_steering_omega(&c, 0.51, r).is_err());
    }

    #[test]
    fn steering_vectors_have_unit_norm() {
        let c = ArrayConfig::half_wavelength(37, 28e9).unwrap();
        for (theta, r) in [(0.0, 0.5), (0.7, 2.0), (-1.2, 40.0)] {
            assert_relative_eq!(
                norm(&nf_steering_exact(&c, theta, r).unwrap()),
                1.0,
                max_relative = 1e-12
            );
            assert_relative_eq!(
                norm(&nf_steering_fresnel(&c, theta, r).unwrap()),
                1.0,
                max_relative = 1e-12
            );
            assert_relative_eq!(
                norm(&nf_steering_omega(&c, 0.5 * theta.sin(), r).unwrap()),
                1.0,
                max_relative = 1e-12
            );
        }
    }
}
