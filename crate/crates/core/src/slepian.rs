//! Range–angle concentration matrices and the near-field Slepian taper.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::array::{ArrayConfig, FocusPoint, IndexConvention};
use crate::error::{Error, Result};
use crate::fresnel::alpha_3db;
use crate::gram::{hermitian_gram, RowSpec};
use crate::metrics::{hpbd_analytic, hpbw_analytic, BeamDepth};
use crate::pattern::Taper;

/// How the range side of the mainlobe region grows with `k_range`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnlargementRule {
    /// Scale `α₃dB` in the half-power range limits, widening the interval in `1/r`.
    #[default]
    InverseRange,
    /// Scale the distances `r_f − r_min` and `r_max − r_f` separately.
    LinearPerSide,
}

/// Lower range bound of the total region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TotalRegionMode {
    /// Lowered to the mainlobe region when needed so the numerator region is a subset.
    #[default]
    SubsetAdjusted,
    /// The radiative near-field boundary as is.
    Strict,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RangeSpacing {
    #[default]
    Linear,
    Logarithmic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub n_omega: usize,
    pub n_r: usize,
    pub r_spacing: RangeSpacing,
}

impl GridSpec {
    pub fn new(n_omega: usize, n_r: usize, r_spacing: RangeSpacing) -> Self {
        Self {
            n_omega,
            n_r,
            r_spacing,
        }
    }

    pub fn doubled(&self) -> Self {
        Self {
            n_omega: 2 * self.n_omega,
            n_r: 2 * self.n_r,
            r_spacing: self.r_spacing,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n_omega < 2 || self.n_r < 2 {
            return Err(Error::Grid(format!(
                "concentration grid needs at least 2 samples per dimension, got {} × {}",
                self.n_omega, self.n_r
            )));
        }
        Ok(())
    }
}

/// Rectangular `(Ω, r)` integration region.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub omega_min: f64,
    pub omega_max: f64,
    pub r_lo: f64,
    pub r_hi: f64,
}

impl Region {
    pub fn new(omega_min: f64, omega_max: f64, r_lo: f64, r_hi: f64) -> Result<Self> {
        if !(omega_min < omega_max && 0.0 < r_lo && r_lo < r_hi && r_hi.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "invalid region Ω ∈ [{omega_min}, {omega_max}], r ∈ [{r_lo}, {r_hi}]"
            )));
        }
        Ok(Self {
            omega_min,
            omega_max,
            r_lo,
            r_hi,
        })
    }

    pub fn area(&self) -> f64 {
        (self.omega_max - self.omega_min) * (self.r_hi - self.r_lo)
    }

    pub fn contains(&self, other: &Region) -> bool {
        self.omega_min <= other.omega_min
            && other.omega_max <= self.omega_max
            && self.r_lo <= other.r_lo
            && other.r_hi <= self.r_hi
    }
}

/// Enlarged half-power region around the focus, with any clamps that were applied.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MainlobeRegion {
    pub region: Region,
    pub k_angle: f64,
    pub k_range: f64,
    pub rule: EnlargementRule,
    pub clamped_low: bool,
    pub clamped_high: bool,
}

pub fn mainlobe_region(
    config: &ArrayConfig,
    focus: FocusPoint,
    k_angle: f64,
    k_range: f64,
    rule: EnlargementRule,
) -> Result<MainlobeRegion> {
    if !(k_angle >= 1.0 && k_range >= 1.0) {
        return Err(Error::InvalidConfig(format!(
            "enlargement factors must be at least 1, got ({k_angle}, {k_range})"
        )));
    }
    let lambda = config.wavelength();
    let rd = config.rayleigh_distance();
    let limit = config.omega_limit();
    let (r_min, r_max) = match hpbd_analytic(config, focus) {
        BeamDepth::Finite { r_min, r_max, .. } => (r_min, r_max),
        BeamDepth::Infinite { .. } => {
            let rc = rd * focus.theta.cos().powi(2);
            return Err(Error::InfiniteBeamdepth {
                focus_range: focus.range,
                limit: rc / (4.0 * alpha_3db()),
            });
        }
    };
    let hpbw = hpbw_analytic(config, focus.theta)?;
    let omega_u = limit * focus.theta.sin();
    let half = limit * (0.5 * k_angle * hpbw).min(0.5 * PI).sin();
    let omega_min = (omega_u - half).max(-limit);
    let omega_max = (omega_u + half).min(limit);
    let (lo, hi) = match rule {
        EnlargementRule::InverseRange => {
            let rc = rd * focus.theta.cos().powi(2);
            let a = 4.0 * focus.range * alpha_3db() * k_range;
            let lo = focus.range * rc / (rc + a);
            let hi = if rc > a {
                focus.range * rc / (rc - a)
            } else {
                f64::INFINITY
            };
            (lo, hi)
        }
        EnlargementRule::LinearPerSide => (
            focus.range - k_range * (focus.range - r_min),
            focus.range + k_range * (r_max - focus.range),
        ),
    };
    let r_lo = lo.max(lambda);
    let r_hi = hi.min(rd);
    Ok(MainlobeRegion {
        region: Region::new(omega_min, omega_max, r_lo, r_hi)?,
        k_angle,
        k_range,
        rule,
        clamped_low: lo < lambda,
        clamped_high: hi > rd,
    })
}

/// Whole visible angular span over the radiative near field.
pub fn total_region(
    config: &ArrayConfig,
    mainlobe: &Region,
    mode: TotalRegionMode,
) -> Result<Region> {
    let bounds = config.field_bounds();
    let limit = config.omega_limit();
    let r_lo = match mode {
        TotalRegionMode::SubsetAdjusted => bounds.fresnel_inner.min(mainlobe.r_lo),
        TotalRegionMode::Strict => bounds.fresnel_inner,
    };
    Region::new(-limit, limit, r_lo, bounds.rayleigh_distance)
}

/// Midpoint nodes and cell widths for `n` cells of `[a, b]`.
pub fn midpoint_cells(a: f64, b: f64, n: usize, spacing: RangeSpacing) -> (Vec<f64>, Vec<f64>) {
    match spacing {
        RangeSpacing::Linear => {
            let h = (b - a) / n as f64;
            (
                (0..n).map(|i| a + (i as f64 + 0.5) * h).collect(),
                vec![h; n],
            )
        }
        RangeSpacing::Logarithmic => {
            let (la, lb) = (a.ln(), b.ln());
            let edges: Vec<f64> = (0..=n)
                .map(|i| match i {
                    0 => a,
                    i if i == n => b,
                    i => (la + (lb - la) * i as f64 / n as f64).exp(),
                })
                .collect();
            edges
                .windows(2)
                .map(|e| (0.5 * (e[0] + e[1]), e[1] - e[0]))
                .unzip()
        }
    }
}

/// First element offset under a convention; offsets then step by one.
fn first_offset(config: &ArrayConfig, convention: IndexConvention) -> f64 {
    config.offset_with(0, convention)
}

/// Midpoint-rule `Σ b(Ω_i, r_j) b(Ω_i, r_j)ᴴ ΔΩ Δr` over a region.
pub fn concentration_matrix(
    config: &ArrayConfig,
    region: &Region,
    grid: &GridSpec,
    convention: IndexConvention,
) -> Result<DMatrix<Complex64>> {
    grid.validate()?;
    let n = config.element_count();
    let (omegas, d_omega) = midpoint_cells(
        region.omega_min,
        region.omega_max,
        grid.n_omega,
        RangeSpacing::Linear,
    );
    let (ranges, d_r) = midpoint_cells(region.r_lo, region.r_hi, grid.n_r, grid.r_spacing);
    let lambda = config.wavelength();
    let d = config.spacing();
    let inv_n = 1.0 / n as f64;
    let n_r = grid.n_r;
    let row_at = |idx: usize| {
        let (i, j) = (idx / n_r, idx % n_r);
        let omega = omegas[i];
        RowSpec {
            omega,
            q: (omega * omega * lambda * lambda - d * d) / (2.0 * ranges[j] * lambda),
            scale: (d_omega[i] * d_r[j] * inv_n).sqrt(),
        }
    };
    Ok(hermitian_gram(
        n,
        first_offset(config, convention),
        grid.n_omega * n_r,
        row_at,
    ))
}

/// Numerator and denominator matrices with the regions and grids that produced them.
#[derive(Debug, Clone)]
pub struct ConcentrationPair {
    pub a: DMatrix<Complex64>,
    pub b: DMatrix<Complex64>,
    pub a_region: Region,
    pub b_region: Region,
    pub a_grid: GridSpec,
    pub b_grid: GridSpec,
}

impl ConcentrationPair {
    pub fn build(
        config: &ArrayConfig,
        a_region: Region,
        a_grid: GridSpec,
        b_region: Region,
        b_grid: GridSpec,
        convention: IndexConvention,
    ) -> Result<Self> {
        Ok(Self {
            a: concentration_matrix(config, &a_region, &a_grid, convention)?,
            b: concentration_matrix(config, &b_region, &b_grid, convention)?,
            a_region,
            b_region,
            a_grid,
            b_grid,
        })
    }
}

#[derive(Debug, Clone)]
pub struct EigenResult {
    /// Real eigenvalues, descending.
    pub eigenvalues: Vec<f64>,
    /// B-orthonormal eigenvectors as columns, in eigenvalue order.
    pub eigenvectors: DMatrix<Complex64>,
    /// `‖A v − λ B v‖` per pair.
    pub residuals: Vec<f64>,
    /// Diagonal shift added to B, zero when none was needed.
    pub regularization: f64,
}

const REGULARIZATION_EPS: f64 = 1e-10;

fn hermitian_deviation(m: &DMatrix<Complex64>) -> f64 {
    (m - m.adjoint()).norm() / m.norm().max(f64::MIN_POSITIVE)
}

fn hermitize(m: &mut DMatrix<Complex64>) {
    let n = m.nrows();
    for i in 0..n {
        m[(i, i)].im = 0.0;
        for j in 0..i {
            let v = 0.5 * (m[(i, j)] + m[(j, i)].conj());
            m[(i, j)] = v;
            m[(j, i)] = v.conj();
        }
    }
}

/// Solves `A v = λ B v` for Hermitian `A` and Hermitian positive definite `B`.
pub fn generalized_herm_eig(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> Result<EigenResult> {
    let n = a.nrows();
    if a.ncols() != n || b.nrows() != n || b.ncols() != n {
        return Err(Error::InvalidConfig(
            "A and B must be square and of equal size".into(),
        ));
    }
    for (name, m) in [("A", a), ("B", b)] {
        let dev = hermitian_deviation(m);
        if dev > 1e-12 {
            return Err(Error::Eigen(format!(
                "{name} is not Hermitian (relative deviation {dev:e})"
            )));
        }
    }
    let mut b_used = b.clone();
    let shift = REGULARIZATION_EPS * b.trace().re / n as f64;
    let b_eigs = SymmetricEigen::new(b_used.clone()).eigenvalues;
    let (b_min, b_max) = b_eigs
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    let regularization = if b_min < shift { shift } else { 0.0 };
    for i in 0..n {
        b_used[(i, i)] += Complex64::new(regularization, 0.0);
    }
    let chol = b_used.clone().cholesky().ok_or(Error::Factorization {
        condition_estimate: b_max / (b_min + regularization),
    })?;
    let l = chol.l();
    let x = l
        .solve_lower_triangular(a)
        .ok_or_else(|| Error::Eigen("triangular solve failed".into()))?;
    // L⁻¹ A L⁻ᴴ = (L⁻¹ (L⁻¹ A)ᴴ)ᴴ
    let mut c = l
        .solve_lower_triangular(&x.adjoint())
        .ok_or_else(|| Error::Eigen("triangular solve failed".into()))?
        .adjoint();
    hermitize(&mut c);
    let eig = SymmetricEigen::new(c);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let lt = l.adjoint();
    let mut vectors = DMatrix::<Complex64>::zeros(n, n);
    let mut eigenvalues = Vec::with_capacity(n);
    let mut residuals = Vec::with_capacity(n);
    for (col, &k) in order.iter().enumerate() {
        let y: DVector<Complex64> = eig.eigenvectors.column(k).into_owned();
        let v = lt
            .solve_upper_triangular(&y)
            .ok_or_else(|| Error::Eigen("back substitution failed".into()))?;
        let lambda = eig.eigenvalues[k];
        let r = a * &v - (&b_used * &v) * Complex64::new(lambda, 0.0);
        residuals.push(r.norm());
        eigenvalues.push(lambda);
        vectors.set_column(col, &v);
    }
    Ok(EigenResult {
        eigenvalues,
        eigenvectors: vectors,
        residuals,
        regularization,
    })
}

/// Generalized Rayleigh quotient `wᴴAw / wᴴBw`.
pub fn concentration_j(
    w: &[Complex64],
    a: &DMatrix<Complex64>,
    b: &DMatrix<Complex64>,
) -> Result<f64> {
    if w.iter().all(|z| *z == Complex64::new(0.0, 0.0)) {
        return Err(Error::ZeroVector);
    }
    let v = DVector::from_column_slice(w);
    let num = v.dotc(&(a * &v));
    let den = v.dotc(&(b * &v));
    Ok(num.re / den.re)
}

/// Grids and conventions for a Slepian design.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlepianOptions {
    pub a_grid: GridSpec,
    pub b_grid: GridSpec,
    pub convention: IndexConvention,
    pub total_mode: TotalRegionMode,
    pub enlargement: EnlargementRule,
}

impl Default for SlepianOptions {
    fn default() -> Self {
        Self {
            a_grid: GridSpec::new(512, 512, RangeSpacing::Linear),
            b_grid: GridSpec::new(1024, 2048, RangeSpacing::Logarithmic),
            convention: IndexConvention::ZeroBased,
            total_mode: TotalRegionMode::SubsetAdjusted,
            enlargement: EnlargementRule::InverseRange,
        }
    }
}

/// A near-field Slepian taper with its diagnostics.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SlepianDesign {
    pub taper: Taper,
    /// Concentration of the complex dominant eigenvector.
    pub j: f64,
    /// Leading eigenvalues, descending.
    pub leading_eigenvalues: Vec<f64>,
    pub mainlobe: MainlobeRegion,
    pub total: Region,
    pub options: SlepianOptions,
    pub regularization: f64,
    pub max_residual: f64,
    /// Amplitude-weighted RMS of the phase discarded when taking magnitudes, radians.
    pub phase_rms: f64,
}

/// Rotates `v` so the center element is real positive.
pub fn fix_phase(v: &mut [Complex64]) {
    let center = v[v.len() / 2];
    if center.norm() > 0.0 {
        let rot = center.conj() / center.norm();
        v.iter_mut().for_each(|z| *z *= rot);
    }
}

fn phase_rms(v: &[Complex64]) -> f64 {
    let energy: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    (v.iter()
        .map(|z| z.norm_sqr() * z.arg().powi(2))
        .sum::<f64>()
        / energy)
        .sqrt()
}

/// Magnitude taper from the dominant eigenvector of an assembled pair.
pub fn design_from_pair(pair: &ConcentrationPair) -> Result<(Taper, f64, EigenResult, f64)> {
    let eig = generalized_herm_eig(&pair.a, &pair.b)?;
    let mut v: Vec<Complex64> = eig.eigenvectors.column(0).iter().cloned().collect();
    fix_phase(&mut v);
    let j = concentration_j(&v, &pair.a, &pair.b)?;
    let taper = Taper::peak_one(v.iter().map(|z| z.norm()).collect())?;
    Ok((taper, j, eig, phase_rms(&v)))
}

pub fn slepian_taper(
    config: &ArrayConfig,
    focus: FocusPoint,
    k_angle: f64,
    k_range: f64,
    options: &SlepianOptions,
) -> Result<SlepianDesign> {
    let mainlobe = mainlobe_region(config, focus, k_angle, k_range, options.enlargement)?;
    let total = total_region(config, &mainlobe.region, options.total_mode)?;
    let pair = ConcentrationPair::build(
        config,
        mainlobe.region,
        options.a_grid,
        total,
        options.b_grid,
        options.convention,
    )?;
    let (taper, j, eig, phase_rms) = design_from_pair(&pair)?;
    Ok(SlepianDesign {
        taper,
        j,
        leading_eigenvalues: eig.eigenvalues.iter().take(4).cloned().collect(),
        mainlobe,
        total,
        options: *options,
        regularization: eig.regularization,
        max_residual: eig.residuals.iter().cloned().fold(0.0, f64::max),
        phase_rms,
    })
}
