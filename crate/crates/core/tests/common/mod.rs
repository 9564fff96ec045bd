//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use hanner_core::block::DenseMatrix;
use hanner_core::rng::SplitMix64;
use hanner_core::{ComplexMatrix2, Lemma2State};
use nalgebra::{Complex, DMatrix, Matrix2};
use num_complex::Complex64;

/// Singular values of a 2×2 complex matrix from nalgebra's SVD, descending.
pub fn svd_2x2(m: &ComplexMatrix2) -> (f64, f64) {
    let mat = Matrix2::new(
        Complex::new(m.a.re, m.a.im),
        Complex::new(m.b.re, m.b.im),
        Complex::new(m.c.re, m.c.im),
        Complex::new(m.d.re, m.d.im),
    );
    let s = mat.singular_values();
    (s[0].max(s[1]), s[0].min(s[1]))
}

pub fn schatten_svd_2x2(m: &ComplexMatrix2, p: f64) -> f64 {
    let (s1, s2) = svd_2x2(m);
    (s1.powf(p) + s2.powf(p)).powf(1.0 / p)
}

/// Schatten norm of a dense matrix from the eigenvalues `±σ_i` of its
/// Hermitian dilation `[[0, M], [M*, 0]]`.
pub fn schatten_dense_dilation(m: &DenseMatrix, p: f64) -> f64 {
    let n = m.dim;
    let mut h = DMatrix::<Complex<f64>>::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let z = m.get(i, j);
            h[(i, n + j)] = Complex::new(z.re, z.im);
            h[(n + j, i)] = Complex::new(z.re, -z.im);
        }
    }
    let eig = h.symmetric_eigenvalues();
    let sum: f64 = eig.iter().map(|l| l.abs().powf(p)).sum();
    (0.5 * sum).powf(1.0 / p)
}

/// Central difference with one Richardson step: `(4 D(t/2) - D(t)) / 3`.
pub fn richardson(f: impl Fn(f64) -> f64, x: f64, step: f64) -> f64 {
    let d = |t: f64| (f(x + t) - f(x - t)) / (2.0 * t);
    (4.0 * d(0.5 * step) - d(step)) / 3.0
}

pub fn complex(rng: &mut SplitMix64, lo: f64, hi: f64) -> Complex64 {
    Complex64::from_polar(rng.log_uniform(lo, hi), rng.phase())
}

pub fn complex_matrix(rng: &mut SplitMix64) -> ComplexMatrix2 {
    ComplexMatrix2::new(
        complex(rng, 1e-3, 1e3),
        complex(rng, 1e-3, 1e3),
        complex(rng, 1e-3, 1e3),
        complex(rng, 1e-3, 1e3),
    )
}

/// `a1 >= a2`, `b1 >= b2`, `c2 > c1 >= 0` and both summands PSD.
pub fn canonical_lemma2_state(rng: &mut SplitMix64) -> Lemma2State {
    let (x, y) = (rng.log_uniform(1e-2, 1e2), rng.log_uniform(1e-2, 1e2));
    let (a1, a2) = (x.max(y), x.min(y));
    let (x, y) = (rng.log_uniform(1e-2, 1e2), rng.log_uniform(1e-2, 1e2));
    let (b1, b2) = (x.max(y), x.min(y));
    let cmax = (a2 * b2).sqrt();
    let c2 = cmax * rng.range(0.05, 1.0);
    let c1 = c2 * rng.range(0.0, 0.95);
    Lemma2State::new(a1, a2, b1, b2, c1, c2).unwrap()
}
