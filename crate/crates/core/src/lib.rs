//! Near-field beam patterns, sidelobe metrics and amplitude tapers for uniform linear arrays.
//!
//! The crate evaluates focused beam patterns of a ULA in the radiative near field,
//! measures lateral (angle) and axial (range) sidelobes, and designs tapers that
//! maximize energy concentration in a range–angle mainlobe region.

pub mod array;
pub mod error;
pub mod experiment;
pub mod fresnel;
mod gram;
pub mod metrics;
pub mod pattern;
pub mod slepian;
pub mod windows;

pub use array::{
    ff_steering, nf_steering, nf_steering_exact, nf_steering_fresnel, nf_steering_omega,
    ApertureRule, ArrayConfig, FieldBounds, FocusPoint, IndexConvention, SteeringModel,
    SPEED_OF_LIGHT,
};
pub use error::{Error, Result};
pub use fresnel::{alpha_3db, fresnel_c, fresnel_range_gain, fresnel_s, gamma_param};
pub use metrics::{
    analyze_cut, hpbd_analytic, hpbw_analytic, isll, numeric_3db_width, psll, segment_mainlobe,
    BeamDepth, IsllIntegrand, MainlobeSegment, MetricOptions, SegmentStatus, SidelobeReport,
};
pub use pattern::{
    angle_cut, beam_gain, range_cut, AngleCutMode, Beam, CutAxis, Normalization, PatternCut, Taper,
};
pub use slepian::{
    concentration_j, concentration_matrix, generalized_herm_eig, mainlobe_region, slepian_taper,
    total_region, ConcentrationPair, EigenResult, EnlargementRule, GridSpec, MainlobeRegion,
    RangeSpacing, Region, SlepianDesign, SlepianOptions, TotalRegionMode,
};
