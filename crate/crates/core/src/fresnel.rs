//! Fresnel integrals and the closed-form range response of a focused uniform aperture.

use std::f64::consts::FRAC_PI_2;
use std::sync::OnceLock;

use crate::array::ArrayConfig;
use crate::error::{Error, Result};

const GK_NODES: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const KRONROD_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5, 7).
const GAUSS_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

const SUBINTERVAL: f64 = 0.5;
const TOLERANCE: f64 = 1e-14;
const MAX_DEPTH: u32 = 16;

/// One G7/K15 panel: returns (Kronrod estimate, |Kronrod - Gauss|).
fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = KRONROD_WEIGHTS[7] * fc;
    let mut gauss = GAUSS_WEIGHTS[3] * fc;
    for i in 0..7 {
        let x = h * GK_NODES[i];
        let pair = f(c - x) + f(c + x);
        kronrod += KRONROD_WEIGHTS[i] * pair;
        if i % 2 == 1 {
            gauss += GAUSS_WEIGHTS[i / 2] * pair;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

fn adaptive(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let (value, err) = gk15(f, a, b);
    // the Kronrod-Gauss difference overestimates the error, so the tolerance is not split
    if err <= tol || depth == 0 {
        return value;
    }
    let m = 0.5 * (a + b);
    adaptive(f, a, m, tol, depth - 1) + adaptive(f, m, b, tol, depth - 1)
}

/// Integral of `f` over `[0, x]` split into panels no wider than 0.5.
fn integrate_from_zero(f: impl Fn(f64) -> f64, x: f64) -> f64 {
    let panels = (x / SUBINTERVAL).ceil().max(1.0) as usize;
    let h = x / panels as f64;
    // fixed left-to-right summation keeps the result deterministic
    (0..panels)
        .map(|i| {
            let a = i as f64 * h;
            let b = if i + 1 == panels { x } else { a + h };
            adaptive(&f, a, b, TOLERANCE, MAX_DEPTH)
        })
        .sum()
}

/// Fresnel cosine integral `C(γ) = ∫₀^γ cos(πx²/2) dx`, odd in `γ`.
pub fn fresnel_c(gamma: f64) -> f64 {
    if gamma < 0.0 {
        return -fresnel_c(-gamma);
    }
    integrate_from_zero(|x| (FRAC_PI_2 * x * x).cos(), gamma)
}

/// Fresnel sine integral `S(γ) = ∫₀^γ sin(πx²/2) dx`, odd in `γ`.
pub fn fresnel_s(gamma: f64) -> f64 {
    if gamma < 0.0 {
        return -fresnel_s(-gamma);
    }
    integrate_from_zero(|x| (FRAC_PI_2 * x * x).sin(), gamma)
}

/// Normalized range gain `(C²(γ) + S²(γ)) / γ²`, equal to 1 at `γ = 0`.
pub fn fresnel_range_gain(gamma: f64) -> f64 {
    let g = gamma.abs();
    if g == 0.0 {
        return 1.0;
    }
    let c = fresnel_c(g);
    let s = fresnel_s(g);
    (c * c + s * s) / (g * g)
}

/// `γ = sqrt(N²d²cos²θ/λ · |r − r_f| / (2 r r_f))`.
pub fn gamma_param(config: &ArrayConfig, theta: f64, r: f64, r_f: f64) -> Result<f64> {
    if !(r > 0.0 && r_f > 0.0 && r.is_finite() && r_f.is_finite()) {
        return Err(Error::Domain(format!(
            "ranges must be positive, got r = {r}, r_f = {r_f}"
        )));
    }
    let nd = config.element_count() as f64 * config.spacing();
    let c = theta.cos();
    Ok((nd * nd * c * c / config.wavelength() * (r - r_f).abs() / (2.0 * r * r_f)).sqrt())
}

/// The `γ` at which the range gain falls to one half, by bisection.
pub fn alpha_3db() -> f64 {
    static ALPHA: OnceLock<f64> = OnceLock::new();
    *ALPHA.get_or_init(|| {
        let (mut lo, mut hi) = (1.0_f64, 1.4_f64);
        while hi - lo > 1e-12 {
            let mid = 0.5 * (lo + hi);
            if fresnel_range_gain(mid) > 0.5 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Composite Simpson on a fine grid, independent of the adaptive scheme.
    fn simpson(f: impl Fn(f64) -> f64, x: f64, n: usize) -> f64 {
        let h = x / n as f64;
        let mut acc = f(0.0) + f(x);
        for i in 1..n {
            acc += if i % 2 == 1 { 4.0 } else { 2.0 } * f(i as f64 * h);
        }
        acc * h / 3.0
    }

    /// Power series `C(x) = Σ (-1)^k (π/2)^{2k} x^{4k+1} / ((2k)! (4k+1))`.
    fn series_c(x: f64) -> f64 {
        let a = FRAC_PI_2;
        let mut term = x;
        let mut sum = 0.0;
        for k in 0..60 {
            sum += term / (4 * k + 1) as f64;
            let k = k as f64;
            term *= -a * a * x.powi(4) / ((2.0 * k + 1.0) * (2.0 * k + 2.0));
        }
        sum
    }

    fn series_s(x: f64) -> f64 {
        let a = FRAC_PI_2;
        let mut term = a * x.powi(3);
        let mut sum = 0.0;
        for k in 0..60 {
            sum += term / (4 * k + 3) as f64;
            let k = k as f64;
            term *= -a * a * x.powi(4) / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
        }
        sum
    }

    #[test]
    fn zero_at_origin() {
        assert_eq!(fresnel_c(0.0), 0.0);
        assert_eq!(fresnel_s(0.0), 0.0);
        assert_eq!(fresnel_range_gain(0.0), 1.0);
    }

    #[test]
    fn matches_power_series() {
        for &x in &[0.1, 0.5, 1.0, 1.7, 2.28, 3.0] {
            assert!((fresnel_c(x) - series_c(x)).abs() < 1e-10, "C({x})");
            assert!((fresnel_s(x) - series_s(x)).abs() < 1e-10, "S({x})");
        }
        assert!((fresnel_c(1.0) - 0.779893).abs() < 1e-6);
        assert!((fresnel_s(1.0) - 0.438259).abs() < 1e-6);
    }

    #[test]
    fn matches_simpson_at_large_argument() {
        let x = 7.3;
        let c = simpson(|t| (FRAC_PI_2 * t * t).cos(), x, 200_000);
        let s = simpson(|t| (FRAC_PI_2 * t * t).sin(), x, 200_000);
        assert!((fresnel_c(x) - c).abs() < 1e-9);
        assert!((fresnel_s(x) - s).abs() < 1e-9);
    }

    #[test]
    fn asymptotic_limit() {
        // C(x) ≈ 1/2 + sin(πx²/2)/(πx), S(x) ≈ 1/2 − cos(πx²/2)/(πx)
        let x = 50.0;
        // sin(1250π) = 0 and cos(1250π) = 1, so S sits 1/(50π) below its limit
        assert!((fresnel_c(x) - 0.5).abs() < 1e-3);
        assert!((fresnel_s(x) - 0.5).abs() < 1.0 / (50.0 * std::f64::consts::PI) + 1e-4);
        let p = std::f64::consts::PI;
        let c_asym = 0.5 + (FRAC_PI_2 * x * x).sin() / (p * x);
        let s_asym = 0.5 - (FRAC_PI_2 * x * x).cos() / (p * x);
        assert!((fresnel_c(x) - c_asym).abs() < 1e-5);
        assert!((fresnel_s(x) - s_asym).abs() < 1e-5);
    }

    #[test]
    fn odd_extension() {
        for &x in &[0.3, 1.1, 4.2] {
            assert_eq!(fresnel_c(-x), -fresnel_c(x));
            assert_eq!(fresnel_s(-x), -fresnel_s(x));
        }
    }

    #[test]
    fn first_sidelobe_gain() {
        assert!((fresnel_range_gain(2.28) - 0.1323).abs() < 1e-3);
        assert!(fresnel_range_gain(1.0) > fresnel_range_gain(1.5));
        assert!((fresnel_range_gain(1.0) - 0.80).abs() < 0.01);
        assert!((fresnel_range_gain(1.4) - 0.41).abs() < 0.03);
    }

    #[test]
    fn alpha_root() {
        let a = alpha_3db();
        assert!(a > 1.0 && a < 1.4);
        assert!((fresnel_range_gain(a) - 0.5).abs() < 1e-8);
        assert_eq!(a, alpha_3db());
        let series = (series_c(a).powi(2) + series_s(a).powi(2)) / (a * a);
        assert!((series - 0.5).abs() < 1e-9);
    }

    #[test]
    fn gamma_examples() {
        let c = ArrayConfig::half_wavelength(128, 15e9).unwrap();
        let rf = c.rayleigh_distance() / 100.0;
        assert_eq!(gamma_param(&c, 0.0, rf, rf).unwrap(), 0.0);
        let g = gamma_param(&c, 0.0, 2.0 * rf, rf).unwrap();
        let nd = 128.0 * c.spacing();
        assert_relative_eq!(
            g,
            (nd * nd / (c.wavelength() * 4.0 * rf)).sqrt(),
            max_relative = 1e-14
        );
        // N²d²/(4λ r_f) = 1024 λ / r_f at d = λ/2
        assert_relative_eq!(g * g, 1024.0 * c.wavelength() / rf, max_relative = 1e-12);
        let near = gamma_param(&c, 0.0, rf - 0.1, rf).unwrap();
        let far = gamma_param(&c, 0.0, rf + 0.1, rf).unwrap();
        assert!(near > far);
        assert!(gamma_param(&c, 0.0, 0.0, rf).is_err());
    }
}
