//! Classical window generators, the near-field window transform and the classic Slepian taper.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pattern::Taper;

fn check_len(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidConfig(format!(
            "window length must be at least 2, got {n}"
        )));
    }
    Ok(())
}

pub fn uniform(n: usize) -> Result<Taper> {
    check_len(n)?;
    Taper::peak_one(vec![1.0; n])
}

/// Symmetric Hamming formula `0.54 − 0.46 cos(2πk/(N−1))`, valid for any real `k`.
pub fn hamming_at(n: usize, k: f64) -> f64 {
    0.54 - 0.46 * (2.0 * PI * k / (n as f64 - 1.0)).cos()
}

/// Raw symmetric Hamming weights (endpoints 0.08).
pub fn hamming_weights(n: usize) -> Vec<f64> {
    (0..n).map(|k| hamming_at(n, k as f64)).collect()
}

pub fn hamming(n: usize) -> Result<Taper> {
    check_len(n)?;
    Taper::peak_one(hamming_weights(n))
}

/// Centered normalized coordinate `x_k = 2k/(N−1) − 1`.
pub fn normalized_coordinate(n: usize, k: usize) -> f64 {
    2.0 * k as f64 / (n as f64 - 1.0) - 1.0
}

/// Raw near-field transform `|x_k| · prototype(x_k²)` of a window on `[0, 1]`.
pub fn nf_transform_weights(prototype: impl Fn(f64) -> f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| {
            let x = normalized_coordinate(n, k);
            x.abs() * prototype(x * x)
        })
        .collect()
}

/// Near-field transform on the normalized coordinate, peak-one normalized.
pub fn nf_transform(prototype: impl Fn(f64) -> f64, n: usize) -> Result<Taper> {
    check_len(n)?;
    Taper::peak_one(nf_transform_weights(prototype, n))
}

/// Centered integer index `k − ⌊N/2⌋`.
pub fn integer_offset(n: usize, k: usize) -> f64 {
    k as f64 - (n / 2) as f64
}

/// Near-field transform on raw integer indices: `|m| · window(m²)` with `m = k − ⌊N/2⌋`.
pub fn nf_transform_indexed(window: impl Fn(f64) -> f64, n: usize) -> Result<Taper> {
    check_len(n)?;
    let w = (0..n)
        .map(|k| {
            let m = integer_offset(n, k);
            m.abs() * window(m * m)
        })
        .collect();
    Taper::peak_one(w)
}

/// Hamming prototype on `[0, 1]`: `0.54 − 0.46 cos(2πu)`.
pub fn hamming_prototype(u: f64) -> f64 {
    0.54 - 0.46 * (2.0 * PI * u).cos()
}

/// How the near-field Hamming window reads its argument.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NfIndexing {
    /// The length-N Hamming formula evaluated at the squared integer offset.
    #[default]
    Integer,
    /// The Hamming prototype evaluated at the squared normalized coordinate.
    Normalized,
}

pub fn nf_hamming(n: usize, indexing: NfIndexing) -> Result<Taper> {
    match indexing {
        NfIndexing::Integer => nf_transform_indexed(|m2| hamming_at(n, m2), n),
        NfIndexing::Normalized => nf_transform(hamming_prototype, n),
    }
}

fn sinc(t: f64) -> f64 {
    if t == 0.0 {
        1.0
    } else {
        (PI * t).sin() / (PI * t)
    }
}

/// Kernel `(2W/f_s) sinc((2W/f_s)(n − m))`.
pub fn slepian_kernel(n: usize, w_ratio: f64) -> Result<DMatrix<f64>> {
    check_len(n)?;
    if !(w_ratio > 0.0 && w_ratio < 0.5) {
        return Err(Error::InvalidConfig(format!(
            "half-bandwidth ratio must lie in (0, 1/2), got {w_ratio}"
        )));
    }
    let b = 2.0 * w_ratio;
    Ok(DMatrix::from_fn(n, n, |i, j| {
        b * sinc(b * (i as f64 - j as f64))
    }))
}

/// Eigenvalues of the Slepian kernel, descending.
pub fn classic_slepian_spectrum(n: usize, w_ratio: f64) -> Result<Vec<f64>> {
    let k = slepian_kernel(n, w_ratio)?;
    let mut ev: Vec<f64> = SymmetricEigen::new(k).eigenvalues.iter().cloned().collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    Ok(ev)
}

/// Dominant eigenvector of the Slepian kernel and its concentration.
pub fn classic_slepian(n: usize, w_ratio: f64) -> Result<(Taper, f64)> {
    let k = slepian_kernel(n, w_ratio)?;
    let eig = SymmetricEigen::new(k);
    let top = eig.eigenvalues.imax();
    let lambda = eig.eigenvalues[top];
    let mut v: Vec<f64> = eig.eigenvectors.column(top).iter().cloned().collect();
    let center = v[n / 2] + v[(n - 1) / 2];
    if center < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
    let scale = v.iter().cloned().fold(0.0, f64::max);
    if v.iter().any(|x| *x < -1e-12 * scale) {
        return Err(Error::Eigen(
            "dominant Slepian eigenvector changes sign".into(),
        ));
    }
    let w = v.into_iter().map(|x| x.max(0.0)).collect();
    Ok((Taper::peak_one(w)?, lambda))
}
