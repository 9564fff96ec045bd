//! Real powers of 2×2 symmetric positive semidefinite matrices, by spectral
//! decomposition and by the Stieltjes-type integral
//! `K^{p-1} = γ_p ∫_0^∞ t^{p-2} (tK + det K · I) / (t^2 + t tr K + det K) dt`,
//! `γ_p = sin((p-1)π)/π`, valid for `1 < p < 2` and positive definite `K`.

use std::f64::consts::PI;

use super::quadrature::integrate;
use crate::error::{Error, Result};
use crate::schatten::RealMatrix2;

/// Relative tolerance for symmetry and for rounding a tiny negative eigenvalue to 0.
pub const SYM_TOL: f64 = 1e-12;

/// Eigen-decomposition of a symmetric 2×2 matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymEigen {
    pub lambda_max: f64,
    pub lambda_min: f64,
    /// Unit eigenvector for `lambda_max`; the other one is `(-v.1, v.0)`.
    pub v: (f64, f64),
}

pub fn sym_eigen(k: &RealMatrix2) -> Result<SymEigen> {
    if !k.is_finite() {
        return Err(Error::NonFinite("symmetric matrix"));
    }
    let scale = k.max_abs();
    if (k.b - k.c).abs() > SYM_TOL * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::OutOfRange(format!("matrix is not symmetric: b = {}, c = {}", k.b, k.c)));
    }
    let off = 0.5 * (k.b + k.c);
    let mean = 0.5 * (k.a + k.d);
    let half_diff = 0.5 * (k.a - k.d);
    let r = half_diff.hypot(off);
    let lambda_max = mean + r;
    let det = k.a * k.d - off * off;
    // Avoid cancellation in mean - r when both eigenvalues are positive.
    let lambda_min = if mean > 0.0 && lambda_max > 0.0 { det / lambda_max } else { mean - r };
    let phi = 0.5 * (2.0 * off).atan2(k.a - k.d);
    Ok(SymEigen { lambda_max, lambda_min, v: (phi.cos(), phi.sin()) })
}

/// `K^q` for symmetric PSD `K` via its eigen-decomposition. Negative exponents
/// need `K` positive definite.
pub fn frac_power_spectral(k: &RealMatrix2, q: f64) -> Result<RealMatrix2> {
    if !q.is_finite() {
        return Err(Error::NonFinite("fractional exponent"));
    }
    let e = sym_eigen(k)?;
    let mut lmin = e.lambda_min;
    if lmin < 0.0 {
        if lmin >= -SYM_TOL * e.lambda_max.abs() {
            lmin = 0.0;
        } else {
            return Err(Error::NotPositiveDefinite(format!("eigenvalue {lmin:e} < 0")));
        }
    }
    let lmax = e.lambda_max.max(0.0);
    let pw = |l: f64| -> Result<f64> {
        if l > 0.0 {
            Ok(l.powf(q))
        } else if q > 0.0 {
            Ok(0.0)
        } else if q == 0.0 {
            Ok(1.0)
        } else {
            Err(Error::NotPositiveDefinite(format!("singular matrix raised to q = {q}")))
        }
    };
    let (m1, m2) = (pw(lmax)?, pw(lmin)?);
    let (c, s) = e.v;
    Ok(RealMatrix2::new(
        m1 * c * c + m2 * s * s,
        (m1 - m2) * c * s,
        (m1 - m2) * c * s,
        m1 * s * s + m2 * c * c,
    ))
}

/// `K^{p-1}` for `1 < p < 2` from the integral representation.
///
/// The integral is split at `s = λ_max(K)`. On `[0, s]` the substitution
/// `t = s u^{1/(p-1)}` removes the `t^{p-2}` singularity; on `[s, ∞)` the
/// substitution `t = s v^{-1/(2-p)}` maps the slowly decaying tail onto
/// `(0, 1]` with a bounded, smooth integrand.
pub fn frac_power_integral(k: &RealMatrix2, p: f64) -> Result<RealMatrix2> {
    if !(p > 1.0 && p < 2.0) {
        return Err(Error::Exponent { value: p, requirement: "integral representation needs 1 < p < 2" });
    }
    let e = sym_eigen(k)?;
    if !(e.lambda_min > 0.0) {
        return Err(Error::NotPositiveDefinite(format!("smallest eigenvalue {:e}", e.lambda_min)));
    }
    let off = 0.5 * (k.b + k.c);
    let (k11, k12, k22) = (k.a, off, k.d);
    let tr = k.a + k.d;
    let det = e.lambda_max * e.lambda_min;
    let s = e.lambda_max;

    // φ(t) = (tK + det I) / (t^2 + t tr + det)
    let phi = |t: f64| -> [f64; 3] {
        let den = t * t + t * tr + det;
        [(t * k11 + det) / den, t * k12 / den, (t * k22 + det) / den]
    };
    let head_scale = s.powf(p - 1.0) / (p - 1.0);
    let head = integrate(
        |u: f64| {
            let v = phi(s * u.powf(1.0 / (p - 1.0)));
            [head_scale * v[0], head_scale * v[1], head_scale * v[2]]
        },
        0.0,
        1.0,
        1e-13,
        0.0,
        2000,
    );
    let tail = integrate(
        |v: f64| {
            // r = 1/t; integrand = (s^{p-2} K + s^{p-3} det v^{1/(2-p)} I) / ((2-p)(1 + r tr + r^2 det))
            let w = v.powf(1.0 / (2.0 - p));
            let r = w / s;
            let den = (2.0 - p) * (1.0 + r * tr + r * r * det);
            let lead = s.powf(p - 2.0);
            let extra = s.powf(p - 3.0) * det * w;
            [(lead * k11 + extra) / den, lead * k12 / den, (lead * k22 + extra) / den]
        },
        0.0,
        1.0,
        1e-13,
        0.0,
        2000,
    );
    let gamma = ((p - 1.0) * PI).sin() / PI;
    let v: Vec<f64> = (0..3).map(|i| gamma * (head.value[i] + tail.value[i])).collect();
    Ok(RealMatrix2::new(v[0], v[1], v[1], v[2]))
}
