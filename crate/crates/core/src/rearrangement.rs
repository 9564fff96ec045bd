//! Orderings of the block diagonals: exhaustive optimization, the landscape
//! of all orderings, and the adjacent-swap sort for PSD instances.

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;
use std::fmt::Write as _;
use std::io::Write;

use crate::block::{DiagBlockMatrix, PsdDiagBlock};
use crate::error::{Error, Result};
use crate::schatten::{schatten_p_power_2x2, ComplexMatrix2, PExponent};

/// Largest `n` for [`exhaustive_optimize`] (`(n!)^3` orderings).
pub const MAX_EXHAUSTIVE_N: usize = 6;
/// Largest `n` for [`ordering_landscape`].
pub const MAX_LANDSCAPE_N: usize = 4;
/// Largest `n` for [`exhaustive_c_permutations`] (`n!` orderings).
pub const MAX_C_PERMUTATION_N: usize = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    Min,
    Max,
}

impl Objective {
    fn better(self, x: f64, y: f64) -> bool {
        match self {
            Objective::Min => x < y,
            Objective::Max => x > y,
        }
    }
}

impl std::str::FromStr for Objective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "min" => Ok(Objective::Min),
            "max" => Ok(Objective::Max),
            _ => Err(Error::Parse(format!("unknown objective `{s}` (expected min or max)"))),
        }
    }
}

/// Permutations of the `B`, `C`, `D` diagonals relative to `A`
/// (`new[i] = old[sigma[i]]`, 0-based) and the resulting norm.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderingAssignment {
    pub sigma_b: Vec<usize>,
    pub sigma_c: Vec<usize>,
    pub sigma_d: Vec<usize>,
    pub value: f64,
}

impl OrderingAssignment {
    pub fn apply(&self, bm: &DiagBlockMatrix) -> DiagBlockMatrix {
        let id: Vec<usize> = (0..bm.n()).collect();
        bm.permute_blocks(&id, &self.sigma_b, &self.sigma_c, &self.sigma_d)
    }
}

/// 1-based cycle notation on one line, fixed points omitted; `()` for the identity.
pub fn cycle_notation(sigma: &[usize]) -> String {
    let mut seen = vec![false; sigma.len()];
    let mut out = String::new();
    for start in 0..sigma.len() {
        if seen[start] || sigma[start] == start {
            seen[start] = true;
            continue;
        }
        out.push('(');
        let mut i = start;
        let mut first = true;
        while !seen[i] {
            seen[i] = true;
            if !first {
                out.push(' ');
            }
            let _ = write!(out, "{}", i + 1);
            first = false;
            i = sigma[i];
        }
        out.push(')');
    }
    if out.is_empty() {
        out.push_str("()");
    }
    out
}

/// `table[((i*n + jb)*n + jc)*n + jd] = ||[[|a_i|, |b_jb|], [|c_jc|, |d_jd|]]||_p^p`.
fn power_table(bm: &DiagBlockMatrix, p: PExponent) -> Result<Vec<f64>> {
    let n = bm.n();
    let m = bm.abs();
    let mut t = Vec::with_capacity(n.pow(4));
    for i in 0..n {
        for jb in 0..n {
            for jc in 0..n {
                for jd in 0..n {
                    let k = ComplexMatrix2::new(m.a()[i], m.b()[jb], m.c()[jc], m.d()[jd]);
                    t.push(schatten_p_power_2x2(&k, p)?);
                }
            }
        }
    }
    Ok(t)
}

fn perms(n: usize) -> Vec<Vec<usize>> {
    (0..n).permutations(n).collect()
}

/// Best ordering of the (entrywise absolute) `B`, `C`, `D` diagonals against
/// a fixed `A`. Ties go to the lexicographically smallest `(σ_b, σ_c, σ_d)`.
pub fn exhaustive_optimize(bm: &DiagBlockMatrix, p: PExponent, objective: Objective) -> Result<OrderingAssignment> {
    let n = bm.n();
    if n > MAX_EXHAUSTIVE_N {
        return Err(Error::TooLarge { what: "exhaustive ordering search", n, max: MAX_EXHAUSTIVE_N });
    }
    let table = power_table(bm, p)?;
    let ps = perms(n);
    let idx = |i: usize, b: usize, c: usize, d: usize| ((i * n + b) * n + c) * n + d;
    let best = ps
        .par_iter()
        .enumerate()
        .map(|(kb, sb)| {
            let mut best: Option<(f64, usize, usize, usize)> = None;
            for (kc, sc) in ps.iter().enumerate() {
                for (kd, sd) in ps.iter().enumerate() {
                    let v: f64 = (0..n).map(|i| table[idx(i, sb[i], sc[i], sd[i])]).sum();
                    if best.is_none_or(|b| objective.better(v, b.0)) {
                        best = Some((v, kb, kc, kd));
                    }
                }
            }
            best.expect("at least one permutation")
        })
        .reduce_with(|x, y| {
            if objective.better(y.0, x.0) || (y.0 == x.0 && (y.1, y.2, y.3) < (x.1, x.2, x.3)) {
                y
            } else {
                x
            }
        })
        .expect("at least one permutation");
    let mut a = OrderingAssignment {
        sigma_b: ps[best.1].clone(),
        sigma_c: ps[best.2].clone(),
        sigma_d: ps[best.3].clone(),
        value: 0.0,
    };
    a.value = a.apply(&bm.abs()).block_norm(p)?;
    Ok(a)
}

/// Best ordering of `C` alone for a PSD instance, keeping `(a_i, b_i)`
/// paired: `σ_b = id`, `σ_d = id`, `C -> C∘σ`, `C* -> (C∘σ)*`.
pub fn exhaustive_c_permutations(pb: &PsdDiagBlock, p: PExponent, objective: Objective) -> Result<OrderingAssignment> {
    let n = pb.n();
    if n > MAX_C_PERMUTATION_N {
        return Err(Error::TooLarge { what: "C-permutation search", n, max: MAX_C_PERMUTATION_N });
    }
    let abs = pb.abs_c();
    let mut best: Option<(f64, Vec<usize>)> = None;
    for sigma in (0..n).permutations(n) {
        let v = abs.permute_c(&sigma).block_norm_pow(p)?;
        if best.as_ref().is_none_or(|b| objective.better(v, b.0)) {
            best = Some((v, sigma));
        }
    }
    let (_, sigma) = best.expect("at least one permutation");
    let id: Vec<usize> = (0..n).collect();
    Ok(OrderingAssignment {
        value: abs.permute_c(&sigma).block_norm(p)?,
        sigma_b: id.clone(),
        sigma_c: sigma.clone(),
        sigma_d: id,
    })
}

/// Every `(σ_b, σ_c, σ_d)` in lexicographic order with its norm.
pub fn ordering_landscape(bm: &DiagBlockMatrix, p: PExponent) -> Result<Vec<OrderingAssignment>> {
    let n = bm.n();
    if n > MAX_LANDSCAPE_N {
        return Err(Error::TooLarge { what: "ordering landscape", n, max: MAX_LANDSCAPE_N });
    }
    let table = power_table(bm, p)?;
    let ps = perms(n);
    let inv = 1.0 / p.get();
    let idx = |i: usize, b: usize, c: usize, d: usize| ((i * n + b) * n + c) * n + d;
    let mut out = Vec::with_capacity(ps.len().pow(3));
    for sb in &ps {
        for sc in &ps {
            for sd in &ps {
                let v: f64 = (0..n).map(|i| table[idx(i, sb[i], sc[i], sd[i])]).sum();
                out.push(OrderingAssignment {
                    sigma_b: sb.clone(),
                    sigma_c: sc.clone(),
                    sigma_d: sd.clone(),
                    value: v.powf(inv),
                });
            }
        }
    }
    Ok(out)
}

/// Landscape as CSV: `sigma_b,sigma_c,sigma_d,value`.
pub fn write_landscape_csv<W: Write>(rows: &[OrderingAssignment], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let err = |e: csv::Error| Error::Parse(format!("CSV write failed: {e}"));
    w.write_record(["sigma_b", "sigma_c", "sigma_d", "value"]).map_err(err)?;
    for r in rows {
        w.write_record([
            cycle_notation(&r.sigma_b),
            cycle_notation(&r.sigma_c),
            cycle_notation(&r.sigma_d),
            format!("{:.17e}", r.value),
        ])
        .map_err(err)?;
    }
    w.flush().map_err(|e| Error::Parse(format!("CSV write failed: {e}")))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SwapStep {
    /// 0-based positions swapped (`i + 1 == j`).
    pub i: usize,
    pub j: usize,
    /// Change in `||M||_p^p` caused by this swap.
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SwapSortResult {
    /// Input reordered so that `a` and `b` are non-increasing; `c` by modulus.
    pub start: PsdDiagBlock,
    pub sorted: PsdDiagBlock,
    pub steps: Vec<SwapStep>,
    pub initial_pow: f64,
    pub final_pow: f64,
}

/// Bubble-sorts `|c|` into non-increasing order by adjacent swaps after
/// sorting `(a_i, b_i, c_i)` jointly so that `a`, `b` are non-increasing.
/// Each swap exchanges two `c` values at positions whose `a`, `b` are
/// ordered, so it replaces a two-index state by its rearrangement. Equal
/// neighbours are never swapped.
pub fn swap_sort_psd(pb: &PsdDiagBlock, p: PExponent) -> Result<SwapSortResult> {
    pb.require_psd()?;
    pb.require_comonotone()?;
    let start = pb.sorted_by_diagonal().abs_c();
    let n = start.n();
    let a = start.a().to_vec();
    let b = start.b().to_vec();
    let mut c: Vec<f64> = start.c().iter().map(|z| z.re).collect();
    let term = |i: usize, ci: f64| -> Result<f64> {
        schatten_p_power_2x2(&ComplexMatrix2::from_real(a[i], ci, ci, b[i]), p)
    };
    let initial_pow = start.block_norm_pow(p)?;
    let mut steps = Vec::new();
    for pass in 0..n {
        let mut swapped = false;
        for k in 0..n.saturating_sub(1 + pass) {
            if c[k] < c[k + 1] {
                let before = term(k, c[k])? + term(k + 1, c[k + 1])?;
                c.swap(k, k + 1);
                let after = term(k, c[k])? + term(k + 1, c[k + 1])?;
                steps.push(SwapStep { i: k, j: k + 1, delta: after - before });
                swapped = true;
            }
        }
        if !swapped {
            break;
        }
    }
    let sorted = PsdDiagBlock::from_real(&a, &b, &c)?;
    let final_pow = sorted.block_norm_pow(p)?;
    Ok(SwapSortResult { start, sorted, steps, initial_pow, final_pow })
}
