//! Directional derivative of `g(A) = Tr |A^{∘1/p}|^p` on entrywise
//! nonnegative 2×2 matrices.

use serde::Serialize;

use super::fractional::frac_power_spectral;
use crate::error::{Error, Result};
use crate::schatten::{g_func, PExponent, RealMatrix2};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DerivativeMethod {
    /// `Tr(|M|^{p-1} Uᵀ L)` from the polar decomposition `M = U|M|`.
    Polar,
    /// Richardson-extrapolated forward difference, used when `A` has a zero
    /// entry (the entrywise root is not differentiable there).
    OneSidedDifference,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DirectionalDerivative {
    pub value: f64,
    pub method: DerivativeMethod,
}

/// `d/dt g(A + tB)` at `t = 0+`. Needs `A`, `B` entrywise nonnegative.
pub fn g_directional_derivative(a: &RealMatrix2, b: &RealMatrix2, p: PExponent) -> Result<DirectionalDerivative> {
    a.require_nonneg("base point of g")?;
    b.require_nonneg("direction of g")?;
    let pv = p.get();
    if a.entries().contains(&0.0) {
        return one_sided(a, b, p);
    }
    let mut m = a.map(|v| v.powf(1.0 / pv));
    let mut a = *a;
    let mut b = *b;
    if m.det() < 0.0 {
        // Swapping rows changes no singular value and makes det M > 0.
        m = m.swap_rows();
        a = a.swap_rows();
        b = b.swap_rows();
    }
    let det = m.det();
    if pv == 1.0 && det == 0.0 {
        return one_sided(&a, &b, p);
    }
    let (u1, u2) = (m.a + m.d, m.c - m.b);
    let r = u1.hypot(u2);
    let u = RealMatrix2::new(u1 / r, -u2 / r, u2 / r, u1 / r);
    let abs_m = u.transpose().mul(&m);
    let sym = RealMatrix2::new(abs_m.a, 0.5 * (abs_m.b + abs_m.c), 0.5 * (abs_m.b + abs_m.c), abs_m.d);
    let pow = frac_power_spectral(&sym, pv - 1.0)?;
    let e = (1.0 - pv) / pv;
    let l = RealMatrix2::new(a.a.powf(e) * b.a, a.b.powf(e) * b.b, a.c.powf(e) * b.c, a.d.powf(e) * b.d);
    let value = pow.mul(&u.transpose()).mul(&l).trace();
    if !value.is_finite() {
        return Err(Error::NonFinite("directional derivative"));
    }
    Ok(DirectionalDerivative { value, method: DerivativeMethod::Polar })
}

fn one_sided(a: &RealMatrix2, b: &RealMatrix2, p: PExponent) -> Result<DirectionalDerivative> {
    let scale = a.max_abs().max(f64::MIN_POSITIVE) / b.max_abs().max(f64::MIN_POSITIVE);
    let g0 = g_func(a, p)?;
    let diff = |t: f64| -> Result<f64> { Ok((g_func(&a.add(&b.scale(t)), p)? - g0) / t) };
    let t = 1e-5 * scale;
    let value = 2.0 * diff(0.5 * t)? - diff(t)?;
    Ok(DirectionalDerivative { value, method: DerivativeMethod::OneSidedDifference })
}
