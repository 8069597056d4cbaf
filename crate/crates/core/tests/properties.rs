use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

use nftaper::metrics::{beamdepth_limits, segment_mainlobe};
use nftaper::pattern::{angle_cut, midpoint_grid, range_cut};
use nftaper::slepian::{
    concentration_matrix, generalized_herm_eig, GridSpec, RangeSpacing, Region,
};
use nftaper::windows::{hamming, nf_hamming, uniform, NfIndexing};
use nftaper::{
    analyze_cut, concentration_j, fresnel_c, fresnel_range_gain, fresnel_s, nf_steering,
    nf_steering_fresnel, nf_steering_omega, AngleCutMode, ArrayConfig, FocusPoint, IndexConvention,
    MetricOptions, Normalization, SteeringModel, Taper,
};

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn model() -> impl Strategy<Value = SteeringModel> {
    prop_oneof![Just(SteeringModel::Exact), Just(SteeringModel::Fresnel)]
}

fn small_pair(seed_region: (f64, f64, f64)) -> (DMatrix<Complex64>, DMatrix<Complex64>) {
    let c = ArrayConfig::half_wavelength(8, 15e9).unwrap();
    let rd = c.rayleigh_distance();
    let (w, lo, hi) = seed_region;
    let a_region = Region::new(-w, w, lo * rd, hi * rd).unwrap();
    let b_region = Region::new(-0.5, 0.5, 0.01 * rd, rd).unwrap();
    let grid = GridSpec::new(24, 24, RangeSpacing::Linear);
    let a = concentration_matrix(&c, &a_region, &grid, IndexConvention::ZeroBased).unwrap();
    let b = concentration_matrix(
        &c,
        &b_region,
        &GridSpec::new(48, 48, RangeSpacing::Logarithmic),
        IndexConvention::ZeroBased,
    )
    .unwrap();
    (a, b)
}

fn region() -> impl Strategy<Value = (f64, f64, f64)> {
    (0.01f64..0.5, 0.01f64..0.3, 0.35f64..1.0)
}

fn complex_vec(n: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n).prop_map(|v| {
        v.into_iter()
            .map(|(re, im)| Complex64::new(re, im))
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn steering_has_unit_norm(n in 2usize..64, theta in -1.5f64..1.5, r in 0.05f64..100.0, m in model()) {
        let c = ArrayConfig::half_wavelength(n, 15e9).unwrap();
        let b = nf_steering(&c, m, theta, r).unwrap();
        prop_assert_eq!(b.len(), n);
        prop_assert!((norm(&b) - 1.0).abs() < 1e-12);
        prop_assert!(b.iter().all(|z| (z.norm() - (n as f64).powf(-0.5)).abs() < 1e-12));
    }

    #[test]
    fn omega_form_matches_fresnel(n in 2usize..64, theta in -1.5f64..1.5, r in 0.05f64..100.0, ratio in 0.2f64..0.5) {
        let lambda = ArrayConfig::half_wavelength(n, 15e9).unwrap().wavelength();
        let c = ArrayConfig::new(n, 15e9, ratio * lambda).unwrap();
        let a = nf_steering_omega(&c, ratio * theta.sin(), r).unwrap();
        let b = nf_steering_fresnel(&c, theta, r).unwrap();
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).norm() < 1e-9, "{x} vs {y}");
        }
    }

    #[test]
    fn fresnel_integrals_are_odd(x in 0.0f64..30.0) {
        prop_assert_eq!(fresnel_c(-x), -fresnel_c(x));
        prop_assert_eq!(fresnel_s(-x), -fresnel_s(x));
        let g = fresnel_range_gain(x);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&g));
    }

    #[test]
    fn cuts_ignore_taper_scale(
        w in prop::collection::vec(0.05f64..1.0, 16),
        scale in 0.01f64..100.0,
        m in model(),
    ) {
        let c = ArrayConfig::half_wavelength(16, 15e9).unwrap();
        let f = FocusPoint::new(0.2, c.rayleigh_distance() / 10.0).unwrap();
        let a = Taper::peak_one(w.clone()).unwrap();
        let b = Taper::new(w.iter().map(|x| x * scale).collect(), Normalization::UnitEnergy).unwrap();
        let grid = midpoint_grid(-1.5, 1.5, 512);
        let ca = angle_cut(&c, &a, f, m, &grid, AngleCutMode::FixedRange).unwrap();
        let cb = angle_cut(&c, &b, f, m, &grid, AngleCutMode::FixedRange).unwrap();
        for (x, y) in ca.gain_linear.iter().zip(&cb.gain_linear) {
            prop_assert!((x - y).abs() < 1e-12);
        }
        let ra = analyze_cut(&ca, &MetricOptions::default()).unwrap();
        let rb = analyze_cut(&cb, &MetricOptions::default()).unwrap();
        prop_assert_eq!(ra.mainlobe, rb.mainlobe);
    }

    #[test]
    fn segmentation_is_deterministic_and_brackets_peak(
        w in prop::collection::vec(0.05f64..1.0, 24),
        fraction in 0.02f64..0.5,
    ) {
        let c = ArrayConfig::half_wavelength(24, 15e9).unwrap();
        let f = FocusPoint::new(0.0, fraction * c.rayleigh_distance()).unwrap();
        let t = Taper::peak_one(w).unwrap();
        let rd = c.rayleigh_distance();
        let grid: Vec<f64> = midpoint_grid(0.0, 1.0, 1024).iter().map(|u| f.range / 5.0 + u * (rd - f.range / 5.0)).collect();
        let cut = range_cut(&c, &t, f, SteeringModel::Exact, &grid).unwrap();
        let a = segment_mainlobe(&cut, 0.01).unwrap();
        let b = segment_mainlobe(&cut.clone(), 0.01).unwrap();
        prop_assert_eq!(a, b);
        if let Some((lo, hi)) = a.indices() {
            prop_assert!(lo <= a.peak_index && a.peak_index <= hi);
        }
        prop_assert_eq!(a.peak_index, cut.peak_index());
    }

    #[test]
    fn beamdepth_is_harmonic_about_focus(n in 8usize..256, theta in -1.2f64..1.2, fraction in 0.001f64..0.5, alpha in 0.5f64..2.0) {
        let c = ArrayConfig::half_wavelength(n, 15e9).unwrap();
        let f = FocusPoint::new(theta, fraction * c.rayleigh_distance()).unwrap();
        let bd = beamdepth_limits(&c, f, alpha);
        let rc = c.rayleigh_distance() * theta.cos().powi(2);
        let step = 4.0 * alpha / rc;
        prop_assert!(bd.r_min() < f.range);
        prop_assert!((1.0 / bd.r_min() - 1.0 / f.range - step).abs() < 1e-9 / f.range);
        if bd.depth().is_finite() {
            prop_assert!(bd.r_max() > f.range);
            prop_assert!((1.0 / f.range - 1.0 / bd.r_max() - step).abs() < 1e-9 / f.range);
        } else {
            prop_assert!(f.range >= rc / (4.0 * alpha));
        }
    }

    #[test]
    fn windows_are_symmetric_and_peak_one(n in 2usize..200) {
        let mut tapers = vec![uniform(n).unwrap(), hamming(n).unwrap(), nf_hamming(n, NfIndexing::Normalized).unwrap()];
        if n % 2 == 1 {
            tapers.push(nf_hamming(n, NfIndexing::Integer).unwrap());
        }
        for t in tapers {
            let w = t.weights();
            prop_assert_eq!(w.iter().cloned().fold(0.0, f64::max), 1.0);
            prop_assert!(w.iter().all(|x| *x >= 0.0));
            for k in 0..n {
                prop_assert!((w[k] - w[n - 1 - k]).abs() < 1e-12);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn gram_matrices_are_hermitian_psd(r in region()) {
        let (a, _) = small_pair(r);
        prop_assert_eq!(&a, &a.adjoint());
        let ev = nalgebra::SymmetricEigen::new(a.clone()).eigenvalues;
        let top = ev.max();
        prop_assert!(ev.iter().all(|l| *l >= -1e-12 * top));
    }

    #[test]
    fn concentration_is_scale_invariant_and_bounded(r in region(), w in complex_vec(8), s in (0.1f64..10.0, -3.0f64..3.0)) {
        prop_assume!(norm(&w) > 1e-3);
        let (a, b) = small_pair(r);
        let eig = generalized_herm_eig(&a, &b).unwrap();
        let j = concentration_j(&w, &a, &b).unwrap();
        let alpha = Complex64::from_polar(s.0, s.1);
        let scaled: Vec<Complex64> = w.iter().map(|z| z * alpha).collect();
        prop_assert!((concentration_j(&scaled, &a, &b).unwrap() - j).abs() < 1e-12);
        let lambda = eig.eigenvalues[0];
        prop_assert!(j <= lambda * (1.0 + 1e-10));
        let top: Vec<Complex64> = eig.eigenvectors.column(0).iter().cloned().collect();
        prop_assert!((concentration_j(&top, &a, &b).unwrap() - lambda).abs() < 1e-10);
        prop_assert!(lambda > 0.0 && lambda <= 1.0 + 1e-10);
    }
}
