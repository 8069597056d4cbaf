//! Configuration-driven comparison of tapers on angle and range cuts.

use serde::{Deserialize, Serialize};

use crate::array::{ArrayConfig, FocusPoint, SteeringModel};
use crate::error::{Error, Result};
use crate::fresnel::alpha_3db;
use crate::metrics::{
    analyze_cut, hpbd_analytic, hpbw_analytic, BeamDepth, IsllIntegrand, MetricOptions,
    SidelobeReport, DEFAULT_PROMINENCE_DB,
};
use crate::pattern::{
    default_angle_grid, default_range_grid, AngleCutMode, Beam, PatternCut, Taper,
    DEFAULT_ANGLE_SAMPLES, DEFAULT_RANGE_SAMPLES, DEFAULT_RANGE_SPAN,
};
use crate::slepian::{slepian_taper, GridSpec, SlepianDesign, SlepianOptions, TotalRegionMode};
use crate::windows::{classic_slepian, hamming, nf_hamming, uniform, NfIndexing};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArraySpec {
    pub elements: usize,
    pub frequency_hz: f64,
    /// Element spacing in meters; half a wavelength when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spacing_m: Option<f64>,
}

impl ArraySpec {
    pub fn resolve(&self) -> Result<ArrayConfig> {
        match self.spacing_m {
            Some(d) => ArrayConfig::new(self.elements, self.frequency_hz, d),
            None => ArrayConfig::half_wavelength(self.elements, self.frequency_hz),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FocusSpec {
    pub theta_deg: f64,
    /// Focus range as a fraction of the Rayleigh distance.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub range_fraction: Option<f64>,
    /// Focus range in meters.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub range_m: Option<f64>,
}

impl FocusSpec {
    pub fn resolve(&self, config: &ArrayConfig) -> Result<FocusPoint> {
        let range = match (self.range_fraction, self.range_m) {
            (Some(f), None) => {
                if !(f > 0.0 && f <= 1.0) {
                    return Err(Error::InvalidConfig(format!(
                        "focus.range_fraction must lie in (0, 1], got {f}"
                    )));
                }
                f * config.rayleigh_distance()
            }
            (None, Some(r)) => r,
            _ => {
                return Err(Error::InvalidConfig(
                    "focus needs exactly one of range_fraction or range_m".into(),
                ))
            }
        };
        FocusPoint::new(self.theta_deg.to_radians(), range)
    }
}

fn default_k() -> f64 {
    1.0
}

/// A taper to evaluate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum WindowSpec {
    Uniform,
    Hamming,
    NfHamming {
        #[serde(default)]
        indexing: NfIndexing,
    },
    ClassicSlepian {
        w_ratio: f64,
    },
    Slepian {
        #[serde(default = "default_k")]
        k_angle: f64,
        #[serde(default = "default_k")]
        k_range: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        a_grid: Option<GridSpec>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        b_grid: Option<GridSpec>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowEntry {
    pub name: String,
    #[serde(flatten)]
    pub spec: WindowSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CutSpec {
    pub angle_samples: usize,
    pub range_samples: usize,
    /// Range cut covers `[r_f/span, span·r_f]`, clamped to `[λ, R_D]`.
    pub range_span: f64,
}

impl Default for CutSpec {
    fn default() -> Self {
        Self {
            angle_samples: DEFAULT_ANGLE_SAMPLES,
            range_samples: DEFAULT_RANGE_SAMPLES,
            range_span: DEFAULT_RANGE_SPAN,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModeFlags {
    /// Keep the literal total-region lower bound for concentration matrices.
    pub strict_paper: bool,
    pub steering: SteeringModel,
    /// Evaluate angle cuts along the distance ring instead of at fixed range.
    pub ring_cut: bool,
    pub prominence_db: f64,
    pub isll_integrand: IsllIntegrand,
}

impl Default for ModeFlags {
    fn default() -> Self {
        Self {
            strict_paper: false,
            steering: SteeringModel::Exact,
            ring_cut: false,
            prominence_db: DEFAULT_PROMINENCE_DB,
            isll_integrand: IsllIntegrand::Power,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub array: ArraySpec,
    pub focus: FocusSpec,
    pub windows: Vec<WindowEntry>,
    #[serde(default)]
    pub cuts: CutSpec,
    #[serde(default)]
    pub modes: ModeFlags,
    #[serde(default)]
    pub slepian: SlepianOptions,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<String>,
}

impl Default for ExperimentConfig {
    /// 128 elements at 15 GHz focused at broadside, one hundredth of the Rayleigh distance.
    fn default() -> Self {
        let slepian = |name: &str, k_angle: f64, k_range: f64| WindowEntry {
            name: name.into(),
            spec: WindowSpec::Slepian {
                k_angle,
                k_range,
                a_grid: None,
                b_grid: None,
            },
        };
        Self {
            array: ArraySpec {
                elements: 128,
                frequency_hz: 15e9,
                spacing_m: None,
            },
            focus: FocusSpec {
                theta_deg: 0.0,
                range_fraction: Some(0.01),
                range_m: None,
            },
            windows: vec![
                WindowEntry {
                    name: "uniform".into(),
                    spec: WindowSpec::Uniform,
                },
                WindowEntry {
                    name: "hamming".into(),
                    spec: WindowSpec::Hamming,
                },
                WindowEntry {
                    name: "nf-hamming".into(),
                    spec: WindowSpec::NfHamming {
                        indexing: NfIndexing::Integer,
                    },
                },
                slepian("slepian-1", 1.0, 1.0),
                slepian("slepian-2", 5.0, 50.0),
                slepian("slepian-3", 10.0, 100.0),
            ],
            cuts: CutSpec::default(),
            modes: ModeFlags::default(),
            slepian: SlepianOptions::default(),
            output_dir: None,
        }
    }
}

/// Fully resolved geometry shared by every window of a run.
#[derive(Debug, Clone, Copy)]
pub struct Setup {
    pub array: ArrayConfig,
    pub focus: FocusPoint,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<Setup> {
        if self.windows.is_empty() {
            return Err(Error::InvalidConfig("windows: list is empty".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for w in &self.windows {
            if !seen.insert(w.name.as_str()) {
                return Err(Error::InvalidConfig(format!(
                    "windows: duplicate name {:?}",
                    w.name
                )));
            }
        }
        if self.cuts.angle_samples < 3 || self.cuts.range_samples < 3 {
            return Err(Error::InvalidConfig(
                "cuts: need at least 3 samples per cut".into(),
            ));
        }
        if !(self.cuts.range_span > 1.0) {
            return Err(Error::InvalidConfig("cuts.range_span must exceed 1".into()));
        }
        let array = self.array.resolve()?;
        let focus = self.focus.resolve(&array)?;
        Ok(Setup { array, focus })
    }

    pub fn window(&self, name: &str) -> Result<&WindowEntry> {
        self.windows
            .iter()
            .find(|w| w.name == name)
            .ok_or_else(|| Error::InvalidConfig(format!("no window named {name:?}")))
    }

    pub fn slepian_options(
        &self,
        a_grid: Option<GridSpec>,
        b_grid: Option<GridSpec>,
    ) -> SlepianOptions {
        let mut o = self.slepian;
        if let Some(g) = a_grid {
            o.a_grid = g;
        }
        if let Some(g) = b_grid {
            o.b_grid = g;
        }
        if self.modes.strict_paper {
            o.total_mode = TotalRegionMode::Strict;
        }
        o
    }

    pub fn angle_grid(&self) -> Vec<f64> {
        default_angle_grid(self.cuts.angle_samples)
    }

    pub fn range_grid(&self, setup: &Setup) -> Vec<f64> {
        default_range_grid(
            &setup.array,
            setup.focus,
            self.cuts.range_samples,
            self.cuts.range_span,
        )
    }

    pub fn metric_options(&self) -> MetricOptions {
        MetricOptions {
            prominence_db: self.modes.prominence_db,
            integrand: self.modes.isll_integrand,
        }
    }

    pub fn angle_mode(&self) -> AngleCutMode {
        if self.modes.ring_cut {
            AngleCutMode::DistanceRing
        } else {
            AngleCutMode::FixedRange
        }
    }
}

/// A built taper plus whatever the generator reports about it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BuiltTaper {
    pub taper: Taper,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slepian: Option<SlepianDesign>,
    /// Concentration of a classic Slepian window.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classic_lambda: Option<f64>,
}

pub fn build_taper(
    config: &ExperimentConfig,
    setup: &Setup,
    entry: &WindowEntry,
) -> Result<BuiltTaper> {
    let n = setup.array.element_count();
    let plain = |taper| BuiltTaper {
        taper,
        slepian: None,
        classic_lambda: None,
    };
    Ok(match &entry.spec {
        WindowSpec::Uniform => plain(uniform(n)?),
        WindowSpec::Hamming => plain(hamming(n)?),
        WindowSpec::NfHamming { indexing } => plain(nf_hamming(n, *indexing)?),
        WindowSpec::ClassicSlepian { w_ratio } => {
            let (taper, lambda) = classic_slepian(n, *w_ratio)?;
            BuiltTaper {
                taper,
                slepian: None,
                classic_lambda: Some(lambda),
            }
        }
        WindowSpec::Slepian {
            k_angle,
            k_range,
            a_grid,
            b_grid,
        } => {
            let options = config.slepian_options(*a_grid, *b_grid);
            let design = slepian_taper(&setup.array, setup.focus, *k_angle, *k_range, &options)?;
            BuiltTaper {
                taper: design.taper.clone(),
                slepian: Some(design),
                classic_lambda: None,
            }
        }
    })
}

/// Angle and range cuts of one taper.
pub fn cuts_for(
    config: &ExperimentConfig,
    setup: &Setup,
    taper: &Taper,
) -> Result<(PatternCut, PatternCut)> {
    let beam = Beam::new(&setup.array, taper, setup.focus, config.modes.steering)?;
    let angle = beam.angle_cut(&config.angle_grid(), config.angle_mode())?;
    let range = beam.range_cut(&config.range_grid(setup))?;
    Ok((angle, range))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TaperStats {
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    pub argmax: usize,
}

impl TaperStats {
    pub fn of(taper: &Taper) -> Self {
        let w = taper.weights();
        let mut argmax = 0;
        for (i, x) in w.iter().enumerate() {
            if *x > w[argmax] {
                argmax = i;
            }
        }
        Self {
            min: w.iter().cloned().fold(f64::INFINITY, f64::min),
            max: w[argmax],
            mean: w.iter().sum::<f64>() / w.len() as f64,
            argmax,
        }
    }
}

/// One row of the comparison table; `None` marks an undefined metric.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RowMetrics {
    pub psll_range_db: Option<f64>,
    pub psll_angle_db: Option<f64>,
    pub isll_range_db: Option<f64>,
    pub isll_angle_db: Option<f64>,
    /// Numeric half-power beamdepth in meters, infinite when unbounded.
    pub bd_m: Option<f64>,
    /// Numeric half-power beamwidth in degrees.
    pub bw_deg: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WindowResult {
    pub name: String,
    pub spec: WindowSpec,
    pub taper: Option<BuiltTaper>,
    pub taper_stats: Option<TaperStats>,
    pub metrics: Option<RowMetrics>,
    pub angle: Option<SidelobeReport>,
    pub range: Option<SidelobeReport>,
    pub error: Option<String>,
    pub seconds: f64,
}

/// Defaults and derived quantities behind a run.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ResolvedSetup {
    pub wavelength_m: f64,
    pub spacing_m: f64,
    pub aperture_m: f64,
    pub rayleigh_distance_m: f64,
    pub fresnel_inner_m: f64,
    pub focus_theta_deg: f64,
    pub focus_range_m: f64,
    pub alpha_3db: f64,
    pub hpbw_analytic_deg: f64,
    pub hpbd_analytic: BeamDepth,
    pub angle_grid: (f64, f64, usize),
    pub range_grid: (f64, f64, usize),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Table2Report {
    pub config_echo: ExperimentConfig,
    pub resolved: ResolvedSetup,
    pub per_window: Vec<WindowResult>,
}

fn finite_or_none(x: f64) -> Option<f64> {
    if x.is_nan() {
        None
    } else {
        Some(x)
    }
}

fn resolve(config: &ExperimentConfig, setup: &Setup) -> Result<ResolvedSetup> {
    let a = setup.array;
    let b = a.field_bounds();
    let ag = config.angle_grid();
    let rg = config.range_grid(setup);
    Ok(ResolvedSetup {
        wavelength_m: a.wavelength(),
        spacing_m: a.spacing(),
        aperture_m: a.aperture_length(),
        rayleigh_distance_m: b.rayleigh_distance,
        fresnel_inner_m: b.fresnel_inner,
        focus_theta_deg: setup.focus.theta.to_degrees(),
        focus_range_m: setup.focus.range,
        alpha_3db: alpha_3db(),
        hpbw_analytic_deg: hpbw_analytic(&a, setup.focus.theta)?.to_degrees(),
        hpbd_analytic: hpbd_analytic(&a, setup.focus),
        angle_grid: (ag[0], ag[ag.len() - 1], ag.len()),
        range_grid: (rg[0], rg[rg.len() - 1], rg.len()),
    })
}

/// Builds, cuts and measures one window.
pub fn evaluate_window(
    config: &ExperimentConfig,
    setup: &Setup,
    entry: &WindowEntry,
) -> WindowResult {
    let start = std::time::Instant::now();
    let mut result = WindowResult {
        name: entry.name.clone(),
        spec: entry.spec.clone(),
        taper: None,
        taper_stats: None,
        metrics: None,
        angle: None,
        range: None,
        error: None,
        seconds: 0.0,
    };
    let outcome = (|| -> Result<()> {
        let built = build_taper(config, setup, entry)?;
        result.taper_stats = Some(TaperStats::of(&built.taper));
        let (angle_cut, range_cut) = cuts_for(config, setup, &built.taper)?;
        result.taper = Some(built);
        let options = config.metric_options();
        let angle = analyze_cut(&angle_cut, &options)?;
        let range = analyze_cut(&range_cut, &options)?;
        result.metrics = Some(RowMetrics {
            psll_range_db: range.psll_db,
            psll_angle_db: angle.psll_db,
            isll_range_db: range.isll_db,
            isll_angle_db: angle.isll_db,
            bd_m: finite_or_none(range.width),
            bw_deg: finite_or_none(angle.width.to_degrees()),
        });
        result.angle = Some(angle);
        result.range = Some(range);
        Ok(())
    })();
    if let Err(e) = outcome {
        result.error = Some(e.to_string());
    }
    result.seconds = start.elapsed().as_secs_f64();
    result
}

/// Evaluates every configured window in order.
pub fn run_table2(config: &ExperimentConfig) -> Result<Table2Report> {
    let setup = config.validate()?;
    let resolved = resolve(config, &setup)?;
    let per_window = config
        .windows
        .iter()
        .map(|w| evaluate_window(config, &setup, w))
        .collect();
    Ok(Table2Report {
        config_echo: config.clone(),
        resolved,
        per_window,
    })
}

fn cell(v: Option<f64>, digits: usize) -> String {
    match v {
        None => "NA".into(),
        Some(x) if x.is_infinite() && x > 0.0 => "inf".into(),
        Some(x) if x.is_infinite() => "-inf".into(),
        Some(x) => format!("{x:.digits$}"),
    }
}

impl Table2Report {
    /// Fixed-width text table with `NA` for undefined entries.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{:<14}{:>12}{:>12}{:>12}{:>12}{:>10}{:>10}\n",
            "window", "PSLL_r[dB]", "PSLL_a[dB]", "ISLL_r[dB]", "ISLL_a[dB]", "BD[m]", "BW[deg]"
        );
        for w in &self.per_window {
            match (&w.metrics, &w.error) {
                (Some(m), _) => out.push_str(&format!(
                    "{:<14}{:>12}{:>12}{:>12}{:>12}{:>10}{:>10}\n",
                    w.name,
                    cell(m.psll_range_db, 2),
                    cell(m.psll_angle_db, 2),
                    cell(m.isll_range_db, 2),
                    cell(m.isll_angle_db, 2),
                    cell(m.bd_m, 3),
                    cell(m.bw_deg, 2),
                )),
                (None, err) => out.push_str(&format!(
                    "{:<14}  failed: {}\n",
                    w.name,
                    err.as_deref().unwrap_or("unknown error")
                )),
            }
        }
        out
    }

    pub fn row(&self, name: &str) -> Option<&WindowResult> {
        self.per_window.iter().find(|w| w.name == name)
    }
}
