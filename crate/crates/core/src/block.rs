//! Block matrices `[[A, B], [C, D]]` whose four n×n blocks are diagonal.
//!
//! Conjugating by the permutation that interleaves index `i` of the first
//! block row with index `i` of the second turns such a matrix into the direct
//! sum of the n matrices `[[a_i, b_i], [c_i, d_i]]`, so
//! `||M||_p^p = Σ_i ||[[a_i, b_i], [c_i, d_i]]||_p^p`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::schatten::{lp_norm, schatten_p_power_2x2, sing_diag, ComplexMatrix2, PExponent, RealMatrix2};

/// Largest n accepted by the dense exports.
pub const MAX_DENSE_N: usize = 64;

/// Relative slack used by the PSD tests `a b >= |c|^2`.
pub const PSD_REL_TOL: f64 = 1e-12;

fn finite(v: &[Complex64]) -> bool {
    v.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

fn apply(v: &[Complex64], sigma: &[usize]) -> Vec<Complex64> {
    sigma.iter().map(|&j| v[j]).collect()
}

/// Dense row-major complex matrix. Only used for oracles and export.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    pub dim: usize,
    pub data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![Complex64::new(0.0, 0.0); dim * dim] }
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, z: Complex64) {
        self.data[i * self.dim + j] = z;
    }

    /// Read the four diagonals back out of a `[[A, B], [C, D]]` layout.
    pub fn extract_diag_blocks(&self) -> Result<DiagBlockMatrix> {
        if self.dim % 2 != 0 {
            return Err(Error::Length(format!("dense dimension {} is odd", self.dim)));
        }
        let n = self.dim / 2;
        let diag = |r0: usize, c0: usize| (0..n).map(|i| self.get(r0 + i, c0 + i)).collect();
        DiagBlockMatrix::new(diag(0, 0), diag(0, n), diag(n, 0), diag(n, n))
    }
}

/// Result of a per-index PSD test: `margins[i] = a_i b_i - |c_i|^2`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PsdCheck {
    pub holds: bool,
    pub margins: Vec<f64>,
}

fn psd_index_ok(a: f64, b: f64, c2: f64) -> bool {
    a >= 0.0 && b >= 0.0 && a * b - c2 >= -PSD_REL_TOL * (a * b).max(c2)
}

fn psd_check(a: &[f64], b: &[f64], c2: impl Iterator<Item = f64>) -> (PsdCheck, Option<(usize, f64)>) {
    let mut holds = true;
    let mut first = None;
    let margins = a
        .iter()
        .zip(b)
        .zip(c2)
        .enumerate()
        .map(|(i, ((&ai, &bi), ci2))| {
            let margin = ai * bi - ci2;
            if !psd_index_ok(ai, bi, ci2) {
                holds = false;
                first.get_or_insert((i + 1, margin));
            }
            margin
        })
        .collect();
    (PsdCheck { holds, margins }, first)
}

/// First pair `(i, j)` (1-based) with `a_i > a_j` but `b_i < b_j`, if any.
fn discordant_pair(a: &[f64], b: &[f64]) -> Option<(usize, usize)> {
    let n = a.len();
    (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .find(|&(i, j)| (a[i] - a[j]) * (b[i] - b[j]) < 0.0)
        .map(|(i, j)| (i + 1, j + 1))
}

/// The 2n×2n matrix `[[A, B], [C, D]]` with diagonal blocks, stored as the
/// four diagonals.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagBlockMatrix {
    a: Vec<Complex64>,
    b: Vec<Complex64>,
    c: Vec<Complex64>,
    d: Vec<Complex64>,
}

impl DiagBlockMatrix {
    pub fn new(a: Vec<Complex64>, b: Vec<Complex64>, c: Vec<Complex64>, d: Vec<Complex64>) -> Result<Self> {
        let n = a.len();
        if n == 0 {
            return Err(Error::Length("n must be at least 1".into()));
        }
        for (name, v) in [("b", &b), ("c", &c), ("d", &d)] {
            if v.len() != n {
                return Err(Error::Length(format!("block {name} has length {}, expected n = {n}", v.len())));
            }
        }
        if ![&a, &b, &c, &d].iter().all(|v| finite(v)) {
            return Err(Error::NonFinite("block diagonal"));
        }
        Ok(Self { a, b, c, d })
    }

    pub fn from_real(a: &[f64], b: &[f64], c: &[f64], d: &[f64]) -> Result<Self> {
        let cx = |v: &[f64]| v.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::new(cx(a), cx(b), cx(c), cx(d))
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self) -> &[Complex64] {
        &self.a
    }

    pub fn b(&self) -> &[Complex64] {
        &self.b
    }

    pub fn c(&self) -> &[Complex64] {
        &self.c
    }

    pub fn d(&self) -> &[Complex64] {
        &self.d
    }

    /// The n independent 2×2 summands `[[a_i, b_i], [c_i, d_i]]`.
    pub fn decompose(&self) -> Vec<ComplexMatrix2> {
        (0..self.n())
            .map(|i| ComplexMatrix2::new(self.a[i], self.b[i], self.c[i], self.d[i]))
            .collect()
    }

    pub fn block_norm_pow(&self, p: PExponent) -> Result<f64> {
        self.decompose().iter().map(|m| schatten_p_power_2x2(m, p)).sum()
    }

    pub fn block_norm(&self, p: PExponent) -> Result<f64> {
        Ok(self.block_norm_pow(p)?.powf(1.0 / p.get()))
    }

    /// `[[|A|, |B|], [|C|, |D|]]`.
    pub fn abs(&self) -> Self {
        let m = |v: &[Complex64]| v.iter().map(|z| Complex64::new(z.norm(), 0.0)).collect();
        Self { a: m(&self.a), b: m(&self.b), c: m(&self.c), d: m(&self.d) }
    }

    /// Every block replaced by `Sing` of itself.
    pub fn sing(&self) -> Self {
        let s = |v: &[Complex64]| sing_diag(v).into_iter().map(|x| Complex64::new(x, 0.0)).collect();
        Self { a: s(&self.a), b: s(&self.b), c: s(&self.c), d: s(&self.d) }
    }

    /// Block-wise ℓ_p norms `[[||A||_p, ||B||_p], [||C||_p, ||D||_p]]`.
    pub fn block_lp_norms(&self, p: PExponent) -> RealMatrix2 {
        let n = |v: &[Complex64]| lp_norm(v.iter().map(|z| z.norm()), p);
        RealMatrix2::new(n(&self.a), n(&self.b), n(&self.c), n(&self.d))
    }

    pub fn scale(&self, s: f64) -> Self {
        let m = |v: &[Complex64]| v.iter().map(|z| z * s).collect();
        Self { a: m(&self.a), b: m(&self.b), c: m(&self.c), d: m(&self.d) }
    }

    /// Relabel indices simultaneously in all four blocks: entry `i` of the
    /// result is entry `sigma[i]` of `self`.
    pub fn permute(&self, sigma: &[usize]) -> Self {
        self.permute_blocks(sigma, sigma, sigma, sigma)
    }

    /// Independent reorderings of each block's diagonal.
    pub fn permute_blocks(&self, sa: &[usize], sb: &[usize], sc: &[usize], sd: &[usize]) -> Self {
        Self {
            a: apply(&self.a, sa),
            b: apply(&self.b, sb),
            c: apply(&self.c, sc),
            d: apply(&self.d, sd),
        }
    }

    pub fn to_dense(&self) -> Result<DenseMatrix> {
        let n = self.n();
        if n > MAX_DENSE_N {
            return Err(Error::TooLarge { what: "dense export", n, max: MAX_DENSE_N });
        }
        let mut m = DenseMatrix::zeros(2 * n);
        for i in 0..n {
            m.set(i, i, self.a[i]);
            m.set(i, n + i, self.b[i]);
            m.set(n + i, i, self.c[i]);
            m.set(n + i, n + i, self.d[i]);
        }
        Ok(m)
    }
}

/// The Hermitian matrix `[[A, C], [C*, B]]` with diagonal blocks,
/// `A, B` real and `C` complex. Positive semidefiniteness is checked by
/// [`PsdDiagBlock::is_psd`], not enforced at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct PsdDiagBlock {
    a: Vec<f64>,
    b: Vec<f64>,
    c: Vec<Complex64>,
}

impl PsdDiagBlock {
    pub fn new(a: Vec<f64>, b: Vec<f64>, c: Vec<Complex64>) -> Result<Self> {
        let n = a.len();
        if n == 0 {
            return Err(Error::Length("n must be at least 1".into()));
        }
        if b.len() != n || c.len() != n {
            return Err(Error::Length(format!(
                "lengths a = {n}, b = {}, c = {} differ",
                b.len(),
                c.len()
            )));
        }
        if !a.iter().chain(&b).all(|x| x.is_finite()) || !finite(&c) {
            return Err(Error::NonFinite("psd block diagonal"));
        }
        Ok(Self { a, b, c })
    }

    pub fn from_real(a: &[f64], b: &[f64], c: &[f64]) -> Result<Self> {
        Self::new(a.to_vec(), b.to_vec(), c.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn c(&self) -> &[Complex64] {
        &self.c
    }

    pub fn is_psd(&self) -> PsdCheck {
        psd_check(&self.a, &self.b, self.c.iter().map(|z| z.norm_sqr())).0
    }

    /// Error naming the first (1-based) index that fails `a_i b_i >= |c_i|^2`.
    pub fn require_psd(&self) -> Result<()> {
        match psd_check(&self.a, &self.b, self.c.iter().map(|z| z.norm_sqr())).1 {
            Some((index, margin)) => Err(Error::NotPsd { index, margin }),
            None => Ok(()),
        }
    }

    /// True when one permutation sorts both `a` and `b` in decreasing order.
    pub fn is_comonotone(&self) -> bool {
        discordant_pair(&self.a, &self.b).is_none()
    }

    pub fn require_comonotone(&self) -> Result<()> {
        match discordant_pair(&self.a, &self.b) {
            Some((i, j)) => Err(Error::Discordant { i, j }),
            None => Ok(()),
        }
    }

    /// Common relabeling that lists `a` (ties: `b`) in decreasing order.
    pub fn sorted_by_diagonal(&self) -> Self {
        let mut sigma: Vec<usize> = (0..self.n()).collect();
        sigma.sort_by(|&i, &j| self.a[j].total_cmp(&self.a[i]).then(self.b[j].total_cmp(&self.b[i])));
        self.permute(&sigma)
    }

    pub fn permute(&self, sigma: &[usize]) -> Self {
        Self {
            a: sigma.iter().map(|&j| self.a[j]).collect(),
            b: sigma.iter().map(|&j| self.b[j]).collect(),
            c: apply(&self.c, sigma),
        }
    }

    /// Reorder only the diagonal of `C`.
    pub fn permute_c(&self, sigma: &[usize]) -> Self {
        Self { a: self.a.clone(), b: self.b.clone(), c: apply(&self.c, sigma) }
    }

    /// Replace `C` by `|C|`.
    pub fn abs_c(&self) -> Self {
        Self {
            a: self.a.clone(),
            b: self.b.clone(),
            c: self.c.iter().map(|z| Complex64::new(z.norm(), 0.0)).collect(),
        }
    }

    /// `[[Sing A, Sing C], [Sing C, Sing B]]`.
    pub fn sing(&self) -> Self {
        let mut a = self.a.iter().map(|x| x.abs()).collect::<Vec<_>>();
        let mut b = self.b.iter().map(|x| x.abs()).collect::<Vec<_>>();
        a.sort_by(|x, y| y.total_cmp(x));
        b.sort_by(|x, y| y.total_cmp(x));
        let c = sing_diag(&self.c).into_iter().map(|x| Complex64::new(x, 0.0)).collect();
        Self { a, b, c }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            a: self.a.iter().map(|x| x * s).collect(),
            b: self.b.iter().map(|x| x * s).collect(),
            c: self.c.iter().map(|z| z * s).collect(),
        }
    }

    /// The same matrix in the general layout: `[[A, C], [C*, B]]`.
    pub fn to_block_matrix(&self) -> DiagBlockMatrix {
        let re = |v: &[f64]| v.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        DiagBlockMatrix {
            a: re(&self.a),
            b: self.c.clone(),
            c: self.c.iter().map(|z| z.conj()).collect(),
            d: re(&self.b),
        }
    }

    pub fn block_norm(&self, p: PExponent) -> Result<f64> {
        self.to_block_matrix().block_norm(p)
    }

    pub fn block_norm_pow(&self, p: PExponent) -> Result<f64> {
        self.to_block_matrix().block_norm_pow(p)
    }

    pub fn to_dense(&self) -> Result<DenseMatrix> {
        self.to_block_matrix().to_dense()
    }

    /// The 4×4 two-index state formed by indices `i` and `j`.
    pub fn pair_state(&self, i: usize, j: usize) -> Result<Lemma2State> {
        Lemma2State::new(self.a[i], self.a[j], self.b[i], self.b[j], self.c[i].norm(), self.c[j].norm())
    }
}

/// The 4×4 matrix
/// `[[a1, 0, c1, 0], [0, a2, 0, c2], [c1, 0, b1, 0], [0, c2, 0, b2]]`
/// with the phases of `c1, c2` removed (a diagonal unitary conjugation,
/// which changes no norm).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Lemma2State {
    pub a1: f64,
    pub a2: f64,
    pub b1: f64,
    pub b2: f64,
    pub c1: f64,
    pub c2: f64,
}

impl Lemma2State {
    /// `c1` and `c2` are stored by modulus.
    pub fn new(a1: f64, a2: f64, b1: f64, b2: f64, c1: f64, c2: f64) -> Result<Self> {
        let s = Self { a1, a2, b1, b2, c1: c1.abs(), c2: c2.abs() };
        if ![a1, a2, b1, b2, c1, c2].iter().all(|x| x.is_finite()) {
            return Err(Error::NonFinite("two-index state"));
        }
        if let Some(&value) = [a1, a2, b1, b2].iter().find(|&&x| x < 0.0) {
            return Err(Error::Negative { context: "diagonal of a two-index state", value });
        }
        Ok(s)
    }

    pub fn from_complex(a1: f64, a2: f64, b1: f64, b2: f64, c1: Complex64, c2: Complex64) -> Result<Self> {
        Self::new(a1, a2, b1, b2, c1.norm(), c2.norm())
    }

    /// The two 2×2 summands `[[a1, c1], [c1, b1]]` and `[[a2, c2], [c2, b2]]`.
    pub fn blocks(&self) -> (RealMatrix2, RealMatrix2) {
        (
            RealMatrix2::new(self.a1, self.c1, self.c1, self.b1),
            RealMatrix2::new(self.a2, self.c2, self.c2, self.b2),
        )
    }

    pub fn is_psd(&self) -> PsdCheck {
        psd_check(&[self.a1, self.a2], &[self.b1, self.b2], [self.c1 * self.c1, self.c2 * self.c2].into_iter()).0
    }

    pub fn require_psd(&self) -> Result<()> {
        match psd_check(&[self.a1, self.a2], &[self.b1, self.b2], [self.c1 * self.c1, self.c2 * self.c2].into_iter()).1 {
            Some((index, margin)) => Err(Error::NotPsd { index, margin }),
            None => Ok(()),
        }
    }

    /// `(a1 - a2)(b1 - b2) >= 0`.
    pub fn is_comonotone(&self) -> bool {
        (self.a1 - self.a2) * (self.b1 - self.b2) >= 0.0
    }

    pub fn require_comonotone(&self) -> Result<()> {
        if self.is_comonotone() {
            Ok(())
        } else {
            Err(Error::Discordant { i: 1, j: 2 })
        }
    }

    /// Relabel the two indices so that `a1 >= a2` (ties broken by `b`).
    /// For a comonotone state this also gives `b1 >= b2`.
    pub fn canonical(&self) -> Self {
        if self.a1 < self.a2 || (self.a1 == self.a2 && self.b1 < self.b2) {
            self.swapped()
        } else {
            *self
        }
    }

    pub fn swapped(&self) -> Self {
        Self { a1: self.a2, a2: self.a1, b1: self.b2, b2: self.b1, c1: self.c2, c2: self.c1 }
    }

    /// `M_r`: large `a` paired with large `b` and large `c`.
    pub fn make_rearranged(&self) -> Self {
        Self {
            a1: self.a1.max(self.a2),
            a2: self.a1.min(self.a2),
            b1: self.b1.max(self.b2),
            b2: self.b1.min(self.b2),
            c1: self.c1.max(self.c2),
            c2: self.c1.min(self.c2),
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            a1: self.a1 * s,
            a2: self.a2 * s,
            b1: self.b1 * s,
            b2: self.b2 * s,
            c1: self.c1 * s,
            c2: self.c2 * s,
        }
    }

    /// `||M||_p^p = ||first block||_p^p + ||second block||_p^p`.
    pub fn norm_pow(&self, p: PExponent) -> Result<f64> {
        let (x, y) = self.blocks();
        Ok(schatten_p_power_2x2(&x.to_complex(), p)? + schatten_p_power_2x2(&y.to_complex(), p)?)
    }

    pub fn norm(&self, p: PExponent) -> Result<f64> {
        Ok(self.norm_pow(p)?.powf(1.0 / p.get()))
    }

    pub fn to_psd_block(&self) -> PsdDiagBlock {
        PsdDiagBlock {
            a: vec![self.a1, self.a2],
            b: vec![self.b1, self.b2],
            c: vec![Complex64::new(self.c1, 0.0), Complex64::new(self.c2, 0.0)],
        }
    }

    /// The 4×4 matrix in the layout shown in the type docs.
    pub fn to_dense(&self) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(4);
        let r = |x: f64| Complex64::new(x, 0.0);
        m.set(0, 0, r(self.a1));
        m.set(1, 1, r(self.a2));
        m.set(2, 2, r(self.b1));
        m.set(3, 3, r(self.b2));
        for (i, j, c) in [(0, 2, self.c1), (1, 3, self.c2)] {
            m.set(i, j, r(c));
            m.set(j, i, r(c));
        }
        m
    }
}
