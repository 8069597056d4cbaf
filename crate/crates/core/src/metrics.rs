//! Mainlobe segmentation, sidelobe levels, and half-power width/depth.

use serde::{Deserialize, Serialize};

use crate::array::{ArrayConfig, FocusPoint};
use crate::error::{Error, Result};
use crate::fresnel::alpha_3db;
use crate::pattern::PatternCut;

/// Minimum rebound after a local minimum for it to count as a mainlobe null.
pub const DEFAULT_PROMINENCE_DB: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SegmentStatus {
    Found,
    Undefined,
}

/// Mainlobe bounds as grid indices and coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MainlobeSegment {
    pub peak_index: usize,
    pub lower_index: Option<usize>,
    pub upper_index: Option<usize>,
    pub lower_bound: Option<f64>,
    pub upper_bound: Option<f64>,
}

impl MainlobeSegment {
    pub fn status(&self) -> SegmentStatus {
        if self.lower_index.is_some() && self.upper_index.is_some() {
            SegmentStatus::Found
        } else {
            SegmentStatus::Undefined
        }
    }

    pub fn indices(&self) -> Option<(usize, usize)> {
        Some((self.lower_index?, self.upper_index?))
    }
}

/// Quantity integrated for the integrated sidelobe level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IsllIntegrand {
    /// The normalized power pattern `G`.
    #[default]
    Power,
    /// Its square `G²`.
    PowerSquared,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricOptions {
    pub prominence_db: f64,
    pub integrand: IsllIntegrand,
}

impl Default for MetricOptions {
    fn default() -> Self {
        Self {
            prominence_db: DEFAULT_PROMINENCE_DB,
            integrand: IsllIntegrand::default(),
        }
    }
}

/// Sidelobe metrics of one cut; `None` marks an undefined value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SidelobeReport {
    pub psll_db: Option<f64>,
    pub isll_db: Option<f64>,
    /// Numeric half-power width; infinite when a crossing is missing.
    pub width: f64,
    pub mainlobe: MainlobeSegment,
}

fn ensure_normalized(cut: &PatternCut) -> Result<()> {
    let peak = cut
        .gain_linear
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max);
    if cut.is_empty() || (peak - 1.0).abs() > 1e-12 {
        return Err(Error::NotNormalized { peak });
    }
    Ok(())
}

/// Walks outward from the peak to the first local minimum on each side whose
/// rebound exceeds `prominence_db` before the pattern dips below it again.
pub fn segment_mainlobe(cut: &PatternCut, prominence_db: f64) -> Result<MainlobeSegment> {
    ensure_normalized(cut)?;
    let g = &cut.gain_linear;
    let db = &cut.gain_db;
    let peak = cut.peak_index();
    let n = g.len() as isize;
    let walk = |step: isize| -> Option<usize> {
        let mut i = peak as isize;
        while (0..n).contains(&(i + step)) {
            let j = i + step;
            let next = j + step;
            if (0..n).contains(&next)
                && g[j as usize] < g[i as usize]
                && g[j as usize] <= g[next as usize]
            {
                let floor = db[j as usize];
                let mut k = j;
                let mut high = floor;
                while (0..n).contains(&(k + step)) {
                    k += step;
                    high = high.max(db[k as usize]);
                    if high - floor > prominence_db {
                        return Some(j as usize);
                    }
                    if db[k as usize] < floor {
                        break;
                    }
                }
            }
            i = j;
        }
        None
    };
    let lower_index = walk(-1);
    let upper_index = walk(1);
    Ok(MainlobeSegment {
        peak_index: peak,
        lower_index,
        upper_index,
        lower_bound: lower_index.map(|i| cut.coordinates[i]),
        upper_bound: upper_index.map(|i| cut.coordinates[i]),
    })
}

fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    x.windows(2)
        .zip(y.windows(2))
        .map(|(xs, ys)| 0.5 * (xs[1] - xs[0]) * (ys[0] + ys[1]))
        .sum()
}

fn to_db(ratio: f64) -> f64 {
    if ratio > 0.0 {
        10.0 * ratio.log10()
    } else {
        f64::NEG_INFINITY
    }
}

/// Peak sidelobe level in dB; `-inf` when the sidelobe region carries no power.
pub fn psll(cut: &PatternCut, segment: &MainlobeSegment) -> Option<f64> {
    let (lo, hi) = segment.indices()?;
    let g = &cut.gain_linear;
    let side = g[..=lo].iter().chain(&g[hi..]).cloned().fold(0.0, f64::max);
    Some(to_db(side))
}

/// Integrated sidelobe level in dB by the trapezoid rule on the cut grid.
pub fn isll(cut: &PatternCut, segment: &MainlobeSegment, integrand: IsllIntegrand) -> Option<f64> {
    let (lo, hi) = segment.indices()?;
    let x = &cut.coordinates;
    let h: Vec<f64> = match integrand {
        IsllIntegrand::Power => cut.gain_linear.clone(),
        IsllIntegrand::PowerSquared => cut.gain_linear.iter().map(|g| g * g).collect(),
    };
    let main = trapezoid(&x[lo..=hi], &h[lo..=hi]);
    let side = trapezoid(&x[..=lo], &h[..=lo]) + trapezoid(&x[hi..], &h[hi..]);
    Some(to_db(side / main))
}

/// Distance between the half-power crossings around the peak, or infinity.
pub fn numeric_3db_width(cut: &PatternCut) -> Result<f64> {
    ensure_normalized(cut)?;
    let g = &cut.gain_linear;
    let x = &cut.coordinates;
    let peak = cut.peak_index() as isize;
    let n = g.len() as isize;
    let cross = |step: isize| -> Option<f64> {
        let mut i = peak;
        while (0..n).contains(&(i + step)) {
            let j = i + step;
            let (gi, gj) = (g[i as usize], g[j as usize]);
            if gj < 0.5 {
                let t = (gi - 0.5) / (gi - gj);
                let (xi, xj) = (x[i as usize], x[j as usize]);
                return Some(xi + t * (xj - xi));
            }
            i = j;
        }
        None
    };
    Ok(match (cross(-1), cross(1)) {
        (Some(a), Some(b)) => b - a,
        _ => f64::INFINITY,
    })
}

pub fn analyze_cut(cut: &PatternCut, options: &MetricOptions) -> Result<SidelobeReport> {
    let mainlobe = segment_mainlobe(cut, options.prominence_db)?;
    Ok(SidelobeReport {
        psll_db: psll(cut, &mainlobe),
        isll_db: isll(cut, &mainlobe, options.integrand),
        width: numeric_3db_width(cut)?,
        mainlobe,
    })
}

/// Half-power beamwidth `0.886 λ / (N d cosθᵤ)` in radians.
pub fn hpbw_analytic(config: &ArrayConfig, theta_u: f64) -> Result<f64> {
    let c = theta_u.cos();
    if !(c >= 1e-6) {
        return Err(Error::Domain(format!(
            "beamwidth undefined near endfire (cos θ = {c})"
        )));
    }
    Ok(0.886 * config.wavelength() / (config.element_count() as f64 * config.spacing() * c))
}

/// Analytic half-power range interval about a focus.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum BeamDepth {
    Finite { r_min: f64, r_max: f64, depth: f64 },
    Infinite { r_min: f64 },
}

impl BeamDepth {
    pub fn depth(&self) -> f64 {
        match self {
            BeamDepth::Finite { depth, .. } => *depth,
            BeamDepth::Infinite { .. } => f64::INFINITY,
        }
    }

    pub fn r_min(&self) -> f64 {
        match self {
            BeamDepth::Finite { r_min, .. } | BeamDepth::Infinite { r_min } => *r_min,
        }
    }

    pub fn r_max(&self) -> f64 {
        match self {
            BeamDepth::Finite { r_max, .. } => *r_max,
            BeamDepth::Infinite { .. } => f64::INFINITY,
        }
    }
}

/// Range limits `r_f R_D cos²θ / (R_D cos²θ ± 4 r_f α)` for a given `α`.
pub fn beamdepth_limits(config: &ArrayConfig, focus: FocusPoint, alpha: f64) -> BeamDepth {
    let rc = config.rayleigh_distance() * focus.theta.cos().powi(2);
    let rf = focus.range;
    let r_min = rf * rc / (rc + 4.0 * rf * alpha);
    if rf >= rc / (4.0 * alpha) {
        return BeamDepth::Infinite { r_min };
    }
    let r_max = rf * rc / (rc - 4.0 * rf * alpha);
    BeamDepth::Finite {
        r_min,
        r_max,
        depth: r_max - r_min,
    }
}

pub fn hpbd_analytic(config: &ArrayConfig, focus: FocusPoint) -> BeamDepth {
    beamdepth_limits(config, focus, alpha_3db())
}
