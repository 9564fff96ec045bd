use num_complex::Complex64;

use super::{Direction, InequalityReport};
use crate::analysis::frac_power_spectral;
use crate::block::{DiagBlockMatrix, Lemma2State, PsdDiagBlock};
use crate::error::{Error, Result};
use crate::schatten::{g_func, lp_norm, schatten_2x2, ComplexMatrix2, PExponent, RealMatrix2};

/// `||u+v||^p + ||u-v||^p` against `(||u|| + ||v||)^p + | ||u|| - ||v|| |^p` in ℓ_p.
pub fn check_scalar_hanner(u: &[Complex64], v: &[Complex64], p: PExponent) -> Result<InequalityReport> {
    if u.len() != v.len() {
        return Err(Error::Length(format!("vectors of length {} and {}", u.len(), v.len())));
    }
    if !u.iter().chain(v).all(|z| z.is_finite()) {
        return Err(Error::NonFinite("Hanner vectors"));
    }
    let pv = p.get();
    let nu = lp_norm(u.iter().map(|z| z.norm()), p);
    let nv = lp_norm(v.iter().map(|z| z.norm()), p);
    let plus = lp_norm(u.iter().zip(v).map(|(a, b)| (a + b).norm()), p);
    let minus = lp_norm(u.iter().zip(v).map(|(a, b)| (a - b).norm()), p);
    let lhs = plus.powf(pv) + minus.powf(pv);
    let rhs = (nu + nv).powf(pv) + (nu - nv).abs().powf(pv);
    Ok(InequalityReport::from_chain("scalar_hanner", pv, vec![lhs, rhs], Direction::for_p(pv)))
}

/// `||M||_p` vs `|| |M| ||_p` vs the norm of the 2×2 matrix of blockwise ℓ_p norms.
pub fn check_theorem1(bm: &DiagBlockMatrix, p: PExponent) -> Result<InequalityReport> {
    let pv = p.get();
    let outer = bm.block_lp_norms(p);
    let chain = vec![bm.block_norm(p)?, bm.abs().block_norm(p)?, schatten_2x2(&outer.to_complex(), p)?];
    Ok(InequalityReport::from_chain("theorem1", pv, chain, Direction::for_p(pv))
        .with_detail("norm_a", outer.a)
        .with_detail("norm_b", outer.b)
        .with_detail("norm_c", outer.c)
        .with_detail("norm_d", outer.d))
}

/// `||m||_p` vs `|| |m| ||_p` for a single 2×2 matrix. The details carry
/// `D = |ad - bc|^2` and `D' = (|a||d| - |b||c|)^2`; the two share the trace
/// `T`, so the comparison reduces to one between `D` and `D'`.
pub fn check_lemma1(m: &ComplexMatrix2, p: PExponent) -> Result<InequalityReport> {
    let pv = p.get();
    let abs = m.abs_entrywise();
    let chain = vec![schatten_2x2(m, p)?, schatten_2x2(&abs, p)?];
    let d = (m.a * m.d - m.b * m.c).norm_sqr();
    let dp = (abs.a.re * abs.d.re - abs.b.re * abs.c.re).powi(2);
    Ok(InequalityReport::from_chain("lemma1", pv, chain, Direction::for_p(pv))
        .with_detail("d", d)
        .with_detail("d_prime", dp))
}

/// `g(x) + g(y)` vs `g(x + y)`.
pub fn check_g_superadd(x: &RealMatrix2, y: &RealMatrix2, p: PExponent) -> Result<InequalityReport> {
    let pv = p.get();
    let gx = g_func(x, p)?;
    let gy = g_func(y, p)?;
    let gxy = g_func(&x.add(y), p)?;
    Ok(InequalityReport::from_chain("g_superadd", pv, vec![gx + gy, gxy], Direction::for_p(pv))
        .with_detail("g_x", gx)
        .with_detail("g_y", gy))
}

/// `||M||_p` vs `||M_r||_p` for a PSD, similarly ordered two-index state.
pub fn check_lemma2(s: &Lemma2State, p: PExponent) -> Result<InequalityReport> {
    s.require_psd()?;
    s.require_comonotone()?;
    let pv = p.get();
    let chain = vec![s.norm(p)?, s.make_rearranged().norm(p)?];
    Ok(InequalityReport::from_chain("lemma2", pv, chain, Direction::for_p(pv)))
}

/// `||[[A, C], [C*, B]]||_p` vs `||[[||A||_p, ||C||_p], [||C||_p, ||B||_p]]||_p` for PSD input.
pub fn check_pos_block_2x2(pb: &PsdDiagBlock, p: PExponent) -> Result<InequalityReport> {
    pb.require_psd()?;
    let pv = p.get();
    let na = lp_norm(pb.a().iter().copied(), p);
    let nb = lp_norm(pb.b().iter().copied(), p);
    let nc = lp_norm(pb.c().iter().map(|z| z.norm()), p);
    let outer = RealMatrix2::new(na, nc, nc, nb);
    let chain = vec![pb.block_norm(p)?, schatten_2x2(&outer.to_complex(), p)?];
    Ok(InequalityReport::from_chain("pos_block", pv, chain, Direction::for_p(pv)))
}

/// `||M||_p` vs `||Sing M||_p` with no hypotheses; a diagnostic, not a theorem.
pub fn check_sing_ordering(bm: &DiagBlockMatrix, p: PExponent) -> Result<InequalityReport> {
    let pv = p.get();
    let chain = vec![bm.block_norm(p)?, bm.sing().block_norm(p)?];
    Ok(InequalityReport::from_chain("sing_ordering", pv, chain, Direction::for_p(pv)))
}

/// `||[[A, C], [C*, B]]||_p` vs the same with every diagonal sorted by modulus.
/// Needs PSD input and similarly ordered `A`, `B`.
pub fn check_theorem2(pb: &PsdDiagBlock, p: PExponent) -> Result<InequalityReport> {
    pb.require_psd()?;
    pb.require_comonotone()?;
    let pv = p.get();
    let chain = vec![pb.block_norm(p)?, pb.sing().block_norm(p)?];
    Ok(InequalityReport::from_chain("theorem2", pv, chain, Direction::for_p(pv)))
}

fn block_pow(s: &Lemma2State, q: f64) -> Result<(RealMatrix2, RealMatrix2)> {
    let (x, y) = s.blocks();
    Ok((frac_power_spectral(&x, q)?, frac_power_spectral(&y, q)?))
}

/// The dual element `N = M^{p-1} / ||M^{p-1}||_q` saturating Hölder's
/// inequality: `Tr(MN) = ||M||_p` and `||N||_q = 1`.
pub fn hoelder_dual(s: &Lemma2State, p: PExponent) -> Result<Lemma2State> {
    s.require_psd()?;
    let (x, y) = block_pow(s, p.get() - 1.0)?;
    let n = Lemma2State::new(x.a, y.a, x.d, y.d, x.b, y.b)?;
    let q = p
        .conjugate()
        .ok_or(Error::Exponent { value: p.get(), requirement: "dual exponent needs p > 1" })?;
    let norm = n.norm(q)?;
    if norm == 0.0 {
        return Err(Error::Boundary("M = 0 has no normalized dual".into()));
    }
    Ok(n.scale(1.0 / norm))
}

fn trace_product(m: &Lemma2State, n: &Lemma2State) -> f64 {
    let (m1, m2) = m.blocks();
    let (n1, n2) = n.blocks();
    m1.mul(&n1).trace() + m2.mul(&n2).trace()
}

/// Duality route for `p > 2`:
/// `Tr(MN) <= Tr(M_r N_r) <= ||M_r||_p ||N_r||_q`, together with Hölder's
/// `Tr(MN) <= ||M||_p ||N||_q`. With `N` the saturating dual this forces
/// `||M_r||_p >= ||M||_p`.
pub fn check_hoelder_duality(m: &Lemma2State, n: &Lemma2State, p: PExponent) -> Result<InequalityReport> {
    if p.get() <= 2.0 {
        return Err(Error::Exponent { value: p.get(), requirement: "duality check needs p > 2" });
    }
    m.require_psd()?;
    n.require_psd()?;
    let q = p.conjugate().expect("p > 2");
    let (mr, nr) = (m.make_rearranged(), n.make_rearranged());
    let tr = trace_product(m, n);
    let tr_r = trace_product(&mr, &nr);
    let (nm, nn) = (m.norm(p)?, n.norm(q)?);
    let (nmr, nnr) = (mr.norm(p)?, nr.norm(q)?);
    let bound = nm * nn;
    let chain = vec![tr, tr_r, nmr * nnr];
    Ok(InequalityReport::from_chain("hoelder", p.get(), chain, Direction::NonDecreasing)
        .with_extra_link(bound - tr)
        .with_detail("hoelder_bound", bound)
        .with_detail("norm_m", nm)
        .with_detail("norm_n", nn)
        .with_detail("norm_m_rearranged", nmr)
        .with_detail("norm_n_rearranged", nnr))
}
