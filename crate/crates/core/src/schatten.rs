//! Closed-form Schatten p-norms of 2×2 complex matrices.
//!
//! For a 2×2 matrix `m` with `T = Tr m*m` and `D = det m*m = |ad - bc|^2`
//! the squared singular values are `(T ± sqrt(T^2 - 4D)) / 2`, so every
//! Schatten norm is available without an eigensolver. Block matrices whose
//! four blocks are diagonal decompose into direct sums of such matrices
//! (see [`crate::block`]).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Slack allowed for a negative radicand, relative to `max(T^2, 1)`.
pub const RADICAND_SLACK: f64 = 1e-10;

/// A Schatten exponent `p >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct PExponent(f64);

impl PExponent {
    pub fn new(p: f64) -> Result<Self> {
        if p.is_finite() && p >= 1.0 {
            Ok(Self(p))
        } else {
            Err(Error::Exponent {
                value: p,
                requirement: "p must be finite and >= 1",
            })
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }

    /// Hölder conjugate `q = p / (p - 1)`; `None` for `p = 1`.
    pub fn conjugate(self) -> Option<PExponent> {
        (self.0 > 1.0).then(|| PExponent(self.0 / (self.0 - 1.0)))
    }

    /// True in the regime `1 <= p <= 2` where the inequalities point "≥".
    #[inline]
    pub fn at_most_two(self) -> bool {
        self.0 <= 2.0
    }
}

impl TryFrom<f64> for PExponent {
    type Error = Error;

    fn try_from(p: f64) -> Result<Self> {
        PExponent::new(p)
    }
}

impl From<PExponent> for f64 {
    fn from(p: PExponent) -> f64 {
        p.0
    }
}

/// `x^q` with `0^q = 0` for every `q > 0`.
#[inline]
pub(crate) fn pow0(x: f64, q: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x.powf(q)
    }
}

/// A 2×2 complex matrix `[[a, b], [c, d]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexMatrix2 {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl ComplexMatrix2 {
    pub const fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        Self { a, b, c, d }
    }

    pub fn from_real(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn identity() -> Self {
        Self::from_real(1.0, 0.0, 0.0, 1.0)
    }

    pub fn entries(&self) -> [Complex64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn is_finite(&self) -> bool {
        self.entries().iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// `T = Tr m*m`, the squared Frobenius norm.
    pub fn gram_trace(&self) -> f64 {
        self.entries().iter().map(|z| z.norm_sqr()).sum()
    }

    /// `D = det m*m = |ad - bc|^2`.
    pub fn gram_det(&self) -> f64 {
        (self.a * self.d - self.b * self.c).norm_sqr()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.a * s, self.b * s, self.c * s, self.d * s)
    }

    pub fn max_modulus(&self) -> f64 {
        self.entries().iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Each entry replaced by its modulus.
    pub fn abs_entrywise(&self) -> Self {
        Self::from_real(self.a.norm(), self.b.norm(), self.c.norm(), self.d.norm())
    }

    pub fn mul_row(&self, row: usize, z: Complex64) -> Self {
        let mut m = *self;
        match row {
            0 => {
                m.a *= z;
                m.b *= z;
            }
            _ => {
                m.c *= z;
                m.d *= z;
            }
        }
        m
    }

    pub fn mul_col(&self, col: usize, z: Complex64) -> Self {
        let mut m = *self;
        match col {
            0 => {
                m.a *= z;
                m.c *= z;
            }
            _ => {
                m.b *= z;
                m.d *= z;
            }
        }
        m
    }
}

/// A 2×2 real matrix `[[a, b], [c, d]]`, used for the nonnegative matrices
/// fed to [`g_func`] and for the rotations of the critical-point analysis.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct RealMatrix2 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl RealMatrix2 {
    pub const fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self { a, b, c, d }
    }

    pub const fn identity() -> Self {
        Self::new(1.0, 0.0, 0.0, 1.0)
    }

    /// Counter-clockwise rotation by `theta`.
    pub fn rotation(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self::new(c, -s, s, c)
    }

    pub fn entries(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self::new(f(self.a), f(self.b), f(self.c), f(self.d))
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|x| x * s)
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }

    pub fn transpose(&self) -> Self {
        Self::new(self.a, self.c, self.b, self.d)
    }

    pub fn trace(&self) -> f64 {
        self.a + self.d
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    /// Swap the two rows (left multiplication by `[[0, 1], [1, 0]]`).
    pub fn swap_rows(&self) -> Self {
        Self::new(self.c, self.d, self.a, self.b)
    }

    pub fn is_finite(&self) -> bool {
        self.entries().iter().all(|x| x.is_finite())
    }

    pub fn is_nonneg(&self) -> bool {
        self.entries().iter().all(|&x| x >= 0.0)
    }

    pub fn max_abs(&self) -> f64 {
        self.entries().iter().map(|x| x.abs()).fold(0.0, f64::max)
    }

    pub fn to_complex(&self) -> ComplexMatrix2 {
        ComplexMatrix2::from_real(self.a, self.b, self.c, self.d)
    }

    pub(crate) fn require_nonneg(&self, context: &'static str) -> Result<()> {
        if !self.is_finite() {
            return Err(Error::NonFinite(context));
        }
        match self.entries().into_iter().find(|&x| x < 0.0) {
            Some(value) => Err(Error::Negative { context, value }),
            None => Ok(()),
        }
    }
}

/// Squared singular values `(s1^2, s2^2)` with `s1 >= s2`, of a matrix whose
/// largest entry modulus is at most 1.
fn gram_eigenvalues_unit(m: &ComplexMatrix2) -> Result<(f64, f64)> {
    let t = m.gram_trace();
    let d = m.gram_det();
    let mut radicand = t * t - 4.0 * d;
    if radicand < 0.0 {
        if radicand >= -RADICAND_SLACK * (t * t).max(1.0) {
            radicand = 0.0;
        } else {
            return Err(Error::Radicand { radicand, trace: t });
        }
    }
    let big = t + radicand.sqrt();
    // (T + r)(T - r) = 4D; avoids cancellation in T - r.
    let small = if big > 0.0 { 4.0 * d / big } else { 0.0 };
    Ok((0.5 * big, 0.5 * small))
}

fn check_input(m: &ComplexMatrix2) -> Result<()> {
    if m.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite("2x2 matrix"))
    }
}

/// Singular values `(s1, s2)`, `s1 >= s2 >= 0`, from the closed form in `T`, `D`.
pub fn singular_values_2x2(m: &ComplexMatrix2) -> Result<(f64, f64)> {
    check_input(m)?;
    let scale = m.max_modulus();
    if scale == 0.0 {
        return Ok((0.0, 0.0));
    }
    let (l1, l2) = gram_eigenvalues_unit(&m.scale(1.0 / scale))?;
    Ok((scale * l1.sqrt(), scale * l2.sqrt()))
}

/// `||m||_p^p = Tr |m|^p`, computed from `T` and `D` without taking the outer root.
pub fn schatten_p_power_2x2(m: &ComplexMatrix2, p: PExponent) -> Result<f64> {
    check_input(m)?;
    let scale = m.max_modulus();
    if scale == 0.0 {
        return Ok(0.0);
    }
    let (l1, l2) = gram_eigenvalues_unit(&m.scale(1.0 / scale))?;
    let half = 0.5 * p.get();
    Ok(scale.powf(p.get()) * (pow0(l1, half) + pow0(l2, half)))
}

/// `||m||_p = (Tr |m|^p)^{1/p}`, the ℓ_p norm of the two singular values.
pub fn schatten_2x2(m: &ComplexMatrix2, p: PExponent) -> Result<f64> {
    check_input(m)?;
    let scale = m.max_modulus();
    if scale == 0.0 {
        return Ok(0.0);
    }
    let (l1, l2) = gram_eigenvalues_unit(&m.scale(1.0 / scale))?;
    let half = 0.5 * p.get();
    Ok(scale * (pow0(l1, half) + pow0(l2, half)).powf(1.0 / p.get()))
}

/// Largest singular value; the `p -> ∞` limit of [`schatten_2x2`].
pub fn operator_norm_2x2(m: &ComplexMatrix2) -> Result<f64> {
    singular_values_2x2(m).map(|(s1, _)| s1)
}

/// Moduli of `d` sorted in decreasing order.
pub fn sing_diag(d: &[Complex64]) -> Vec<f64> {
    let mut s: Vec<f64> = d.iter().map(|z| z.norm()).collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

/// ℓ_p norm of a sequence of nonnegative magnitudes.
pub fn lp_norm<I>(values: I, p: PExponent) -> f64
where
    I: IntoIterator<Item = f64>,
{
    let v: Vec<f64> = values.into_iter().map(f64::abs).collect();
    let scale = v.iter().copied().fold(0.0, f64::max);
    if scale == 0.0 {
        return 0.0;
    }
    let sum: f64 = v.iter().map(|&x| pow0(x / scale, p.get())).sum();
    scale * sum.powf(1.0 / p.get())
}

/// `g(x) = Tr |x^{∘1/p}|^p` for a 2×2 matrix with nonnegative entries.
pub fn g_func(x: &RealMatrix2, p: PExponent) -> Result<f64> {
    x.require_nonneg("argument of g")?;
    let root = x.map(|v| pow0(v, 1.0 / p.get()));
    schatten_p_power_2x2(&root.to_complex(), p)
}
