//! The one-parameter family interpolating a two-index state and its
//! rearrangement.
//!
//! With `y = (c1 + c2)/2`, `A(h) = [[a1, y+h], [y+h, b1]]` and
//! `B(h) = [[a2, y+h], [y+h, b2]]`,
//! `f(h) = ||A(h)||^p - ||A(-h)||^p + ||B(-h)||^p - ||B(h)||^p`
//! vanishes at `h = 0` and equals `||M_r||^p - ||M||^p` at `h = c2 - y`
//! when `c2 >= c1`.

use super::fractional::{frac_power_integral, frac_power_spectral};
use crate::block::Lemma2State;
use crate::error::{Error, Result};
use crate::schatten::{schatten_p_power_2x2, PExponent, RealMatrix2};

/// Relative slack on the admissible range `|h| <= c2 - y`.
pub const RANGE_SLACK: f64 = 1e-12;

fn midpoint(s: &Lemma2State) -> f64 {
    0.5 * (s.c1 + s.c2)
}

/// `c2 - y = (c2 - c1)/2`, the largest admissible `|h|`.
pub fn h_max(s: &Lemma2State) -> f64 {
    0.5 * (s.c2 - s.c1)
}

fn check_range(s: &Lemma2State, h: f64) -> Result<()> {
    let hm = h_max(s);
    let slack = RANGE_SLACK * s.c1.max(s.c2).max(1.0);
    if !h.is_finite() {
        return Err(Error::NonFinite("interpolation parameter h"));
    }
    if hm < 0.0 || h.abs() > hm + slack {
        return Err(Error::OutOfRange(format!("|h| = {} exceeds c2 - y = {hm}", h.abs())));
    }
    Ok(())
}

/// `y + h`, returning `c2` and `c1` exactly at the two ends of the range.
fn offdiag(s: &Lemma2State, h: f64) -> f64 {
    let hm = h_max(s);
    if h == hm {
        s.c2
    } else if h == -hm {
        s.c1
    } else {
        midpoint(s) + h
    }
}

fn a_at(s: &Lemma2State, h: f64) -> RealMatrix2 {
    let o = offdiag(s, h);
    RealMatrix2::new(s.a1, o, o, s.b1)
}

fn b_at(s: &Lemma2State, h: f64) -> RealMatrix2 {
    let o = offdiag(s, h);
    RealMatrix2::new(s.a2, o, o, s.b2)
}

fn npow(m: &RealMatrix2, p: PExponent) -> Result<f64> {
    schatten_p_power_2x2(&m.to_complex(), p)
}

/// Summed as `(||A(h)||^p + ||B(-h)||^p) - (||A(-h)||^p + ||B(h)||^p)`; at
/// `h = c2 - y` the two sums are `||M_r||^p` and `||M||^p` term for term.
pub fn lemma2_f(s: &Lemma2State, p: PExponent, h: f64) -> Result<f64> {
    check_range(s, h)?;
    Ok((npow(&a_at(s, h), p)? + npow(&b_at(s, -h), p)?) - (npow(&a_at(s, -h), p)? + npow(&b_at(s, h), p)?))
}

/// `(A(h)^{p-1})_12 - (B(h)^{p-1})_12`, the off-diagonal gap at a common
/// off-diagonal entry `y + h`.
pub fn offdiag_gap(s: &Lemma2State, p: PExponent, h: f64) -> Result<f64> {
    let q = p.get() - 1.0;
    Ok(frac_power_spectral(&a_at(s, h), q)?.b - frac_power_spectral(&b_at(s, h), q)?.b)
}

/// [`offdiag_gap`] from the integral representation; needs `1 < p < 2` and
/// both matrices positive definite.
pub fn offdiag_gap_integral(s: &Lemma2State, p: PExponent, h: f64) -> Result<f64> {
    Ok(frac_power_integral(&a_at(s, h), p.get())?.b - frac_power_integral(&b_at(s, h), p.get())?.b)
}

/// `f'(h) = 2p (gap(h) + gap(-h))`.
pub fn lemma2_f_prime(s: &Lemma2State, p: PExponent, h: f64) -> Result<f64> {
    check_range(s, h)?;
    Ok(2.0 * p.get() * (offdiag_gap(s, p, h)? + offdiag_gap(s, p, -h)?))
}
