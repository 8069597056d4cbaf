//! Weighted Gram-matrix assembly `Σ_k c_k z_k z_kᴴ` over Ω-parameterized steering rows.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

/// Rows per dgemm call.
const BLOCK_ROWS: usize = 256;
/// Fixed number of partial sums, reduced in order, so results do not depend on thread count.
const TILES: usize = 8;

/// One steering row: entries `s · exp(−j2π(Ω n + q n²))` for `n = n0, n0+1, …`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct RowSpec {
    pub omega: f64,
    pub q: f64,
    pub scale: f64,
}

fn cis(phase: f64) -> Complex64 {
    let (s, c) = phase.sin_cos();
    Complex64::new(c, s)
}

/// Writes a row into `re`/`im` by the quadratic-phase recurrence.
fn fill_row(row: RowSpec, n0: f64, re: &mut [f64], im: &mut [f64]) {
    let mut z = cis(-2.0 * PI * (row.omega * n0 + row.q * n0 * n0)) * row.scale;
    let mut ratio = cis(-2.0 * PI * (row.omega + row.q * (2.0 * n0 + 1.0)));
    let step = cis(-4.0 * PI * row.q);
    for (r, i) in re.iter_mut().zip(im.iter_mut()) {
        *r = z.re;
        *i = z.im;
        z *= ratio;
        ratio *= step;
    }
}

/// Accumulates `XᵀX` for the rows in `range` into a `2N × 2N` real buffer,
/// where each row of `X` is `[Re z, Im z]`.
fn accumulate<F>(n: usize, n0: f64, range: std::ops::Range<usize>, row_at: &F) -> Vec<f64>
where
    F: Fn(usize) -> RowSpec + Sync,
{
    let w = 2 * n;
    let mut c = vec![0.0; w * w];
    let mut x = vec![0.0; BLOCK_ROWS * w];
    let mut start = range.start;
    while start < range.end {
        let rows = BLOCK_ROWS.min(range.end - start);
        for k in 0..rows {
            let (re, im) = x[k * w..(k + 1) * w].split_at_mut(n);
            fill_row(row_at(start + k), n0, re, im);
        }
        // SAFETY: x holds rows × w values, c holds w × w; strides match those layouts.
        unsafe {
            matrixmultiply::dgemm(
                w,
                rows,
                w,
                1.0,
                x.as_ptr(),
                1,
                w as isize,
                x.as_ptr(),
                w as isize,
                1,
                1.0,
                c.as_mut_ptr(),
                w as isize,
                1,
            );
        }
        start += rows;
    }
    c
}

/// Hermitian `Σ_k z_k z_kᴴ` over `count` rows, exactly Hermitian by construction.
pub(crate) fn hermitian_gram<F>(n: usize, n0: f64, count: usize, row_at: F) -> DMatrix<Complex64>
where
    F: Fn(usize) -> RowSpec + Sync,
{
    let w = 2 * n;
    let bounds: Vec<usize> = (0..=TILES).map(|t| t * count / TILES).collect();
    let partials: Vec<Vec<f64>> = (0..TILES)
        .into_par_iter()
        .map(|t| accumulate(n, n0, bounds[t]..bounds[t + 1], &row_at))
        .collect();
    let mut c = vec![0.0; w * w];
    for p in &partials {
        for (acc, v) in c.iter_mut().zip(p) {
            *acc += v;
        }
    }
    let at = |i: usize, j: usize| c[i * w + j];
    let mut g = DMatrix::<Complex64>::zeros(n, n);
    for a in 0..n {
        g[(a, a)] = Complex64::new(at(a, a) + at(n + a, n + a), 0.0);
        for b in 0..a {
            // Σ z_a conj(z_b): real part Re·Re + Im·Im, imaginary part Im_a·Re_b − Re_a·Im_b
            let re = at(a, b) + at(n + a, n + b);
            let im = at(n + a, b) - at(a, n + b);
            g[(a, b)] = Complex64::new(re, im);
            g[(b, a)] = Complex64::new(re, -im);
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    fn direct_row(row: RowSpec, n0: f64, n: usize) -> Vec<Complex64> {
        (0..n)
            .map(|k| {
                let m = n0 + k as f64;
                cis(-2.0 * PI * (row.omega * m + row.q * m * m)) * row.scale
            })
            .collect()
    }

    #[test]
    fn recurrence_matches_direct_phases() {
        let row = RowSpec {
            omega: 0.37,
            q: -0.0123,
            scale: 0.5,
        };
        for n0 in [0.0, -63.5] {
            let mut re = vec![0.0; 128];
            let mut im = vec![0.0; 128];
            fill_row(row, n0, &mut re, &mut im);
            for (k, z) in direct_row(row, n0, 128).iter().enumerate() {
                assert!((z.re - re[k]).abs() < 1e-11 && (z.im - im[k]).abs() < 1e-11);
            }
        }
    }

    #[test]
    fn gram_matches_naive_sum() {
        let n = 7;
        let rows: Vec<RowSpec> = (0..700)
            .map(|i| RowSpec {
                omega: -0.5 + i as f64 / 700.0,
                q: 0.01 * ((i % 13) as f64 - 6.0),
                scale: 1.0 + (i % 5) as f64 * 0.1,
            })
            .collect();
        let g = hermitian_gram(n, -3.0, rows.len(), |i| rows[i]);
        let mut naive = DMatrix::<Complex64>::zeros(n, n);
        for r in &rows {
            let z = direct_row(*r, -3.0, n);
            for a in 0..n {
                for b in 0..n {
                    naive[(a, b)] += z[a] * z[b].conj();
                }
            }
        }
        assert!((&g - &naive).norm() < 1e-10 * naive.norm());
        assert_eq!(g, g.adjoint());
    }

    #[test]
    fn gram_is_deterministic() {
        let f = |i: usize| RowSpec {
            omega: (i as f64 * 0.001).sin() * 0.5,
            q: 0.002,
            scale: 1.0,
        };
        let a = hermitian_gram(16, 0.0, 5000, f);
        let b = hermitian_gram(16, 0.0, 5000, f);
        assert_eq!(a, b);
    }
}
