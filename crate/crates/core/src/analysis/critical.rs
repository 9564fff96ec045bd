//! The critical-point system for the directional derivative of `g`.
//!
//! A state `(α, β, h)` parametrizes `M = U|M|` with
//! `|M| = P1 + h P2`, `P1 = e1 e1ᵀ`, `P2 = e2 e2ᵀ`, `e1 = (cos α, sin α)`,
//! `e2 = (sin α, -cos α)` and `U` the rotation by `θ = β - α`:
//!
//! ```text
//! M = [[cα cβ + h sα sβ,  sα cβ - h cα sβ],
//!      [cα sβ - h sα cβ,  sα sβ + h cα cβ]]
//! ```
//!
//! With `A = M^{∘p}` and a direction `B = [[x, y], [w, z]]`, the derivative
//! `d/dt g(A + tB)` at `t = 0` is
//! `F = F1 x + F2 y + F3 w + F4 z`, `F1 = j11 / M11^{p-1}`, `F2 = j21 / M12^{p-1}`,
//! `F3 = j12 / M21^{p-1}`, `F4 = j22 / M22^{p-1}` where `J = |M|^{p-1} Uᵀ`.

use serde::Serialize;
use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::schatten::RealMatrix2;

/// Entries of `M` may dip this far below zero before a state is rejected.
pub const ENTRY_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalState {
    pub alpha: f64,
    pub beta: f64,
    pub h: f64,
    pub p: f64,
}

/// Direction `B = [[x, y], [w, z]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DirectionMatrix {
    pub x: f64,
    pub y: f64,
    pub w: f64,
    pub z: f64,
}

impl DirectionMatrix {
    pub const fn new(x: f64, y: f64, w: f64, z: f64) -> Self {
        Self { x, y, w, z }
    }

    pub const fn ones() -> Self {
        Self::new(1.0, 1.0, 1.0, 1.0)
    }

    pub fn as_matrix(&self) -> RealMatrix2 {
        RealMatrix2::new(self.x, self.y, self.w, self.z)
    }
}

impl CriticalState {
    /// Requires `α, β ∈ [0, π/2]`, `h ∈ [0, 1]`, `p >= 1`, and every entry of `M`
    /// nonnegative (up to [`ENTRY_SLACK`]), i.e. `cα sβ >= h sα cβ` and
    /// `sα cβ >= h cα sβ`.
    pub fn new(alpha: f64, beta: f64, h: f64, p: f64) -> Result<Self> {
        if ![alpha, beta, h, p].iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite("critical state"));
        }
        if !(0.0..=FRAC_PI_2).contains(&alpha) || !(0.0..=FRAC_PI_2).contains(&beta) {
            return Err(Error::OutOfRange(format!("angles must lie in [0, π/2]: α = {alpha}, β = {beta}")));
        }
        if !(0.0..=1.0).contains(&h) {
            return Err(Error::OutOfRange(format!("h = {h} not in [0, 1]")));
        }
        if p < 1.0 {
            return Err(Error::Exponent { value: p, requirement: "p must be >= 1" });
        }
        let s = Self { alpha, beta, h, p };
        let m = s.m_raw();
        if let Some(v) = m.entries().into_iter().find(|&v| v < -ENTRY_SLACK) {
            return Err(Error::Boundary(format!(
                "entry {v:e} of M is negative at (α, β, h) = ({alpha}, {beta}, {h})"
            )));
        }
        Ok(s)
    }

    pub fn theta(&self) -> f64 {
        self.beta - self.alpha
    }

    fn trig(&self) -> (f64, f64, f64, f64) {
        let (sa, ca) = self.alpha.sin_cos();
        let (sb, cb) = self.beta.sin_cos();
        (ca, sa, cb, sb)
    }

    fn m_raw(&self) -> RealMatrix2 {
        let (ca, sa, cb, sb) = self.trig();
        let h = self.h;
        RealMatrix2::new(ca * cb + h * sa * sb, sa * cb - h * ca * sb, ca * sb - h * sa * cb, sa * sb + h * ca * cb)
    }

    /// `M = U|M|`, entries clamped at zero.
    pub fn m(&self) -> RealMatrix2 {
        self.m_raw().map(|v| v.max(0.0))
    }

    pub fn rotation(&self) -> RealMatrix2 {
        RealMatrix2::rotation(self.theta())
    }

    /// `P1 + h^s P2`; `s = 1` gives `|M|`.
    pub fn abs_m_pow(&self, s: f64) -> RealMatrix2 {
        let (sa, ca) = self.alpha.sin_cos();
        let hs = if s == 0.0 { 1.0 } else { crate::schatten::pow0(self.h, s) };
        RealMatrix2::new(ca * ca + hs * sa * sa, (1.0 - hs) * ca * sa, (1.0 - hs) * ca * sa, sa * sa + hs * ca * ca)
    }

    /// `J = |M|^{p-1} Uᵀ` in closed form.
    pub fn j(&self) -> RealMatrix2 {
        let (ca, sa, cb, sb) = self.trig();
        let hp = crate::schatten::pow0(self.h, self.p - 1.0);
        let hp = if self.p == 1.0 { 1.0 } else { hp };
        RealMatrix2::new(ca * cb + hp * sa * sb, ca * sb - hp * sa * cb, sa * cb - hp * ca * sb, sa * sb + hp * ca * cb)
    }

    /// `A = M^{∘p}`, the point at which `g` is differentiated.
    pub fn a_matrix(&self) -> RealMatrix2 {
        self.m().map(|v| crate::schatten::pow0(v, self.p))
    }

    /// Interior: `0 < h < 1`, both angles strictly inside `(0, π/2)` and every
    /// entry of `M` strictly positive.
    pub fn is_interior(&self) -> bool {
        self.h > 0.0
            && self.h < 1.0
            && self.alpha > 0.0
            && self.alpha < FRAC_PI_2
            && self.beta > 0.0
            && self.beta < FRAC_PI_2
            && self.m().entries().iter().all(|&v| v > 0.0)
    }

    fn require_positive_entries(&self) -> Result<RealMatrix2> {
        let m = self.m();
        if m.entries().iter().all(|&v| v > 0.0) {
            Ok(m)
        } else {
            Err(Error::Boundary(format!("M has a zero entry at {self:?}")))
        }
    }

    fn require_interior(&self) -> Result<()> {
        if self.is_interior() {
            Ok(())
        } else {
            Err(Error::Boundary(format!("state {self:?} is not interior")))
        }
    }
}

/// `[F1, F2, F3, F4]`; needs every entry of `M` positive.
pub fn f_components(s: &CriticalState) -> Result<[f64; 4]> {
    let m = s.require_positive_entries()?;
    let j = s.j();
    let q = s.p - 1.0;
    Ok([j.a / m.a.powf(q), j.c / m.b.powf(q), j.b / m.c.powf(q), j.d / m.d.powf(q)])
}

/// `F = F1 x + F2 y + F3 w + F4 z`.
pub fn f_eval(s: &CriticalState, dir: &DirectionMatrix) -> Result<f64> {
    let f = f_components(s)?;
    Ok(f[0] * dir.x + f[1] * dir.y + f[2] * dir.w + f[3] * dir.z)
}

/// `Tr(J L)` with `L_ij = A_ij^{(1-p)/p} B_ij`, assembled from matrix products
/// rather than the closed-form components.
pub fn f_eval_trace(s: &CriticalState, dir: &DirectionMatrix) -> Result<f64> {
    s.require_positive_entries()?;
    let a = s.a_matrix();
    let e = (1.0 - s.p) / s.p;
    let b = dir.as_matrix();
    let l = RealMatrix2::new(a.a.powf(e) * b.a, a.b.powf(e) * b.b, a.c.powf(e) * b.c, a.d.powf(e) * b.d);
    let j = s.abs_m_pow(s.p - 1.0).mul(&s.rotation().transpose());
    Ok(j.mul(&l).trace())
}

/// `∂F/∂h = (p-1)/4 (h^{p-2} - 1) sin 2α sin 2β (x/a - y/b - w/c + z/d)`
/// with `(a, b, c, d)` the entries of `A = M^{∘p}`.
pub fn df_dh(s: &CriticalState, dir: &DirectionMatrix) -> Result<f64> {
    s.require_positive_entries()?;
    if s.h <= 0.0 {
        return Err(Error::Boundary("∂F/∂h is unbounded at h = 0".into()));
    }
    let a = s.a_matrix();
    let k = (s.p - 1.0) / 4.0 * (s.h.powf(s.p - 2.0) - 1.0) * (2.0 * s.alpha).sin() * (2.0 * s.beta).sin();
    Ok(k * (dir.x / a.a - dir.y / a.b - dir.w / a.c + dir.z / a.d))
}

/// The 3×4 first-order system in the unknowns `(x/a, y/b, w/c, z/d)`.
///
/// Row 0 is `(1, -1, -1, 1)`, which times `h_scale` gives `∂F/∂h`; rows 1 and 2
/// hold `(E, F, G, H)` and `(P, Q, R, S)`, the coefficients in `∂F/∂α` and
/// `∂F/∂β`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhiMatrix {
    pub rows: [[f64; 4]; 3],
    /// `(p-1)/4 (h^{p-2} - 1) sin 2α sin 2β`.
    pub h_scale: f64,
}

impl PhiMatrix {
    /// `(∂F/∂h, ∂F/∂α, ∂F/∂β)` along `dir`.
    pub fn partials(&self, s: &CriticalState, dir: &DirectionMatrix) -> [f64; 3] {
        let a = s.a_matrix();
        let v = [dir.x / a.a, dir.y / a.b, dir.w / a.c, dir.z / a.d];
        let dot = |r: &[f64; 4]| r.iter().zip(v).map(|(c, x)| c * x).sum::<f64>();
        [self.h_scale * dot(&self.rows[0]), dot(&self.rows[1]), dot(&self.rows[2])]
    }

    /// `Φ (1, 1, 1, 1)ᵀ`.
    pub fn kernel_residual(&self) -> [f64; 3] {
        self.rows.map(|r| r.iter().sum())
    }

    /// Determinant of the first three columns. It equals
    /// `(E+F)(P+R) - (P+Q)(E+G)`, so it is nonzero exactly when the
    /// determinant identity's right side is.
    pub fn minor_123(&self) -> f64 {
        let [r0, r1, r2] = self.rows;
        r0[0] * (r1[1] * r2[2] - r1[2] * r2[1]) - r0[1] * (r1[0] * r2[2] - r1[2] * r2[0])
            + r0[2] * (r1[0] * r2[1] - r1[1] * r2[0])
    }
}

pub fn phi_matrix(s: &CriticalState) -> Result<PhiMatrix> {
    s.require_interior()?;
    let m = s.m();
    let j = s.j();
    let q = s.p - 1.0;
    let (m11, m12, m21, m22) = (m.a, m.b, m.c, m.d);
    let (j11, j12, j21, j22) = (j.a, j.b, j.c, j.d);
    let e = -j21 * m11 + q * j11 * m12;
    let f = j11 * m12 - q * j21 * m11;
    let g = -j22 * m21 + q * j12 * m22;
    let h = j12 * m22 - q * j22 * m21;
    let pp = -j12 * m11 + q * j11 * m21;
    let qq = -j22 * m12 + q * j21 * m22;
    let r = j11 * m21 - q * j12 * m11;
    let ss = j21 * m22 - q * j22 * m12;
    let k = q / 4.0 * (s.h.powf(s.p - 2.0) - 1.0) * (2.0 * s.alpha).sin() * (2.0 * s.beta).sin();
    Ok(PhiMatrix { rows: [[1.0, -1.0, -1.0, 1.0], [e, f, g, h], [pp, qq, r, ss]], h_scale: k })
}

/// `p^2 (h^{p-1} - h)^2 - (p-2)^2 (1 - h^p)^2`.
pub fn det_bracket(h: f64, p: f64) -> f64 {
    let u = p * (h.powf(p - 1.0) - h);
    let v = (p - 2.0) * (1.0 - h.powf(p));
    u * u - v * v
}

/// The determinant identity
/// `(E+F)(P+R) - (P+Q)(E+G) = ¼ sin 2α sin 2β · bracket(h, p)`
/// together with the four pair sums it is assembled from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DetIdentity {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    /// `(computed, closed form)` for `E+F`, `P+R`, `E+G`, `P+Q`.
    pub pair_sums: [(f64, f64); 4],
    /// `E+F+G+H` and `P+Q+R+S`; both vanish identically.
    pub row_sums: [f64; 2],
}

pub fn det_identity(s: &CriticalState) -> Result<DetIdentity> {
    let phi = phi_matrix(s)?;
    let [_, [e, f, g, h], [pp, qq, r, ss]] = phi.rows;
    let (s2a, s2b) = ((2.0 * s.alpha).sin(), (2.0 * s.beta).sin());
    let (hh, p) = (s.h, s.p);
    let lhs = (e + f) * (pp + r) - (pp + qq) * (e + g);
    let rhs = 0.25 * s2a * s2b * det_bracket(hh, p);
    let pair_sums = [
        (e + f, 0.5 * p * s2b * (hh.powf(p - 1.0) - hh)),
        (pp + r, 0.5 * p * s2a * (hh.powf(p - 1.0) - hh)),
        (e + g, 0.5 * (p - 2.0) * s2a * (1.0 - hh.powf(p))),
        (pp + qq, 0.5 * (p - 2.0) * s2b * (1.0 - hh.powf(p))),
    ];
    Ok(DetIdentity { lhs, rhs, residual: lhs - rhs, pair_sums, row_sums: [e + f + g + h, pp + qq + r + ss] })
}

/// `ρ = tan β / tan α`, the value of `h` at which `M21` vanishes.
pub fn rho(alpha: f64, beta: f64) -> f64 {
    beta.tan() / alpha.tan()
}

/// `F3` sampled along `h = ρ (1 - δ)` for each `δ` in `deltas`, approaching
/// the edge `M21 = 0` from the interior. Needs `β < α` so that `ρ < 1`.
pub fn f3_towards_rho(alpha: f64, beta: f64, p: f64, deltas: &[f64]) -> Result<Vec<(f64, f64)>> {
    let r = rho(alpha, beta);
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::OutOfRange(format!("ρ = {r} must lie in (0, 1); take β < α")));
    }
    deltas
        .iter()
        .map(|&d| {
            let h = r * (1.0 - d);
            let s = CriticalState::new(alpha, beta, h, p)?;
            Ok((h, f_components(&s)?[2]))
        })
        .collect()
}

/// Closed form of `F2 = F3` on the diagonal `α = β`:
/// `(1 - h^{p-1}) / (1 - h)^{p-1} · (sin 2α / 2)^{2-p}`.
pub fn diagonal_off_component(alpha: f64, h: f64, p: f64) -> f64 {
    (1.0 - h.powf(p - 1.0)) / (1.0 - h).powf(p - 1.0) * (0.5 * (2.0 * alpha).sin()).powf(2.0 - p)
}

/// One row of the explorer grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExplorerRow {
    pub alpha: f64,
    pub beta: f64,
    pub h: f64,
    pub p: f64,
    #[serde(rename = "F")]
    pub f: f64,
    #[serde(rename = "dF_dh")]
    pub df_dh: f64,
    /// Residual of the determinant identity; `NaN` at `p = 2`, where `h` drops out.
    pub residual: f64,
}

/// Evaluates the interior points of the Cartesian grid; other points are skipped.
pub fn explore_grid(
    alphas: &[f64],
    betas: &[f64],
    hs: &[f64],
    ps: &[f64],
    dir: &DirectionMatrix,
) -> Vec<ExplorerRow> {
    let mut rows = Vec::new();
    for &p in ps {
        for &alpha in alphas {
            for &beta in betas {
                for &h in hs {
                    let Ok(s) = CriticalState::new(alpha, beta, h, p) else { continue };
                    if !s.is_interior() {
                        continue;
                    }
                    let (Ok(f), Ok(d), Ok(det)) = (f_eval(&s, dir), df_dh(&s, dir), det_identity(&s)) else {
                        continue;
                    };
                    rows.push(ExplorerRow { alpha, beta, h, p, f, df_dh: d, residual: det.residual });
                }
            }
        }
    }
    rows
}
