//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

mod common;

use std::time::{Duration, Instant};

use common::*;
use hanner_core::analysis::*;
use hanner_core::inequality::*;
use hanner_core::rearrangement::{exhaustive_c_permutations, swap_sort_psd, Objective};
use hanner_core::rng::SplitMix64;
use hanner_core::schatten::{g_func, schatten_2x2};
use hanner_core::{DiagBlockMatrix, PExponent, RealMatrix2};

const SEED: u64 = 20240611;

// Criterion 1
const CROSSOVER_WINDOW: (f64, f64) = (1.15, 1.25);
// Criterion 2
const STRICT_REL: f64 = 1e-8;
const EQUAL_REL: f64 = 1e-10;
// Criterion 3
const T1_TRIALS: u64 = 10_000;
const T1_PS: [f64; 6] = [1.0, 1.3, 1.7, 2.0, 2.6, 4.0];
const T1_TOL: f64 = 1e-9;
// Criterion 4
const T2_INSTANCES: usize = 2_000;
const T2_PS: [f64; 6] = [1.0, 1.25, 1.6, 2.4, 3.0, 5.0];
const SWAP_REL: f64 = 1e-10;
// Criterion 5
const CRIT_STATES: usize = 500;
const CRIT_PS: [f64; 5] = [1.2, 1.5, 1.8, 2.5, 3.0];
const MIN_ENTRY: f64 = 0.05;
const ROW_SUM_REL: f64 = 1e-10;
const DET_REL: f64 = 1e-9;
const FD_ABS: f64 = 1e-6;
const DIRECTION_REL: f64 = 1e-9;
// Criterion 6
const FRAC_MATRICES: usize = 200;
const FRAC_MAX_COND: f64 = 1e4;
const FRAC_PS: [f64; 3] = [1.1, 1.5, 1.9];
const FRAC_REL: f64 = 1e-8;
// Criterion 7
const L2_STATES: usize = 500;
const L2_PS: [f64; 5] = [1.1, 1.3, 1.5, 1.7, 1.9];
const L2_GRID: usize = 50;
const L2_ZERO_REL: f64 = 1e-12;
const L2_SLOPE_REL: f64 = 1e-9;
const L2_END_REL: f64 = 1e-10;
// Criterion 8
const SVD_MATRICES: usize = 100_000;
const SVD_PS: [f64; 4] = [1.0, 1.5, 2.0, 3.7];
const SVD_REL: f64 = 1e-12;
const DENSE_INSTANCES: usize = 2_000;
const DENSE_REL: f64 = 1e-10;

struct Outcome {
    ok: bool,
    detail: String,
}

fn p(v: f64) -> PExponent {
    PExponent::new(v).unwrap()
}

fn rel(x: f64, y: f64) -> f64 {
    if x == y {
        0.0
    } else {
        (x - y).abs() / x.abs().max(y.abs())
    }
}

fn run(id: usize, title: &str, limit: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let t = Instant::now();
    let out = f();
    let el = t.elapsed();
    let ok = out.ok && el < limit;
    println!(
        "criterion {id} [{title}]: {} ({}; {:.3} s, limit {} s)",
        if ok { "PASS" } else { "FAIL" },
        out.detail,
        el.as_secs_f64(),
        limit.as_secs()
    );
    ok
}

fn first_counterexample_check() -> Outcome {
    let bm = first_counterexample().to_block_matrix();
    let m1 = check_sing_ordering(&bm, p(1.0)).unwrap().margin;
    let studies = reproduce_counterexamples().unwrap();
    let ps = studies[0].crossover.as_ref().and_then(|c| c.p_star);
    let inside = ps.is_some_and(|v| v > CROSSOVER_WINDOW.0 && v < CROSSOVER_WINDOW.1);
    Outcome { ok: m1 < 0.0 && inside, detail: format!("margin(1) = {m1:.6}, p* = {ps:?}") }
}

fn second_counterexample_check() -> Outcome {
    let bm = second_counterexample();
    let mut worst = f64::NEG_INFINITY;
    for v in [1.0, 1.25, 1.5, 1.75, 1.99] {
        let r = check_sing_ordering(&bm, p(v)).unwrap();
        worst = worst.max(r.margin / r.scale());
    }
    let r2 = check_sing_ordering(&bm, p(2.0)).unwrap();
    let at2 = r2.margin.abs() / r2.scale();
    Outcome {
        ok: worst < -STRICT_REL && at2 <= EQUAL_REL,
        detail: format!("largest margin/scale below 2 = {worst:.3e}, |margin|/scale at 2 = {at2:.1e}"),
    }
}

fn theorem1_suite() -> Outcome {
    let ps: Vec<PExponent> = T1_PS.iter().map(|&v| p(v)).collect();
    let out = random_search(Checker::Theorem1, Family::General, &ps, T1_TRIALS, SEED, T1_TOL).unwrap();
    Outcome {
        ok: out.violations.is_empty() && out.evaluations == T1_TRIALS * ps.len() as u64,
        detail: format!(
            "{} evaluations, {} violations, worst relative margin {:.2e}",
            out.evaluations,
            out.violations.len(),
            out.worst_relative_margin
        ),
    }
}

fn theorem2_suite() -> Outcome {
    let mut rng = SplitMix64::new(SEED ^ 2);
    let (mut checks, mut fails, mut worst_swap) = (0usize, 0usize, 0.0f64);
    for _ in 0..T2_INSTANCES {
        let n = 1 + rng.below(MAX_SAMPLED_N);
        let boundary = rng.chance(0.2);
        let pb = sample_psd(&mut rng, n, boundary);
        for &pv in &T2_PS {
            checks += 1;
            fails += usize::from(!check_theorem2(&pb, p(pv)).unwrap().holds);
            for i in 0..n {
                for j in i + 1..n {
                    checks += 1;
                    fails += usize::from(!check_lemma2(&pb.pair_state(i, j).unwrap(), p(pv)).unwrap().holds);
                }
            }
        }
        let pb4 = sample_psd(&mut rng, 4, false);
        let pv = if rng.chance(0.5) { rng.range(1.0, 2.0) } else { rng.range(2.0, 6.0) };
        let obj = if pv < 2.0 { Objective::Min } else { Objective::Max };
        let swept = swap_sort_psd(&pb4, p(pv)).unwrap().final_pow;
        let best = exhaustive_c_permutations(&pb4, p(pv), obj).unwrap().value.powf(pv);
        worst_swap = worst_swap.max(rel(swept, best));
    }
    Outcome {
        ok: fails == 0 && worst_swap <= SWAP_REL,
        detail: format!("{checks} chain checks, {fails} failures, worst swap-sort vs exhaustive rel {worst_swap:.1e}"),
    }
}

/// Richardson step for `g` near `a`: small against the smallest entry so the
/// entrywise root stays smooth over the stencil.
fn g_step(a: &RealMatrix2) -> f64 {
    1e-3 * a.entries().iter().fold(1.0f64, |m, &v| m.min(v))
}

fn critical_suite() -> Outcome {
    let mut rng = SplitMix64::new(SEED ^ 5);
    let mut triples = Vec::with_capacity(CRIT_STATES);
    while triples.len() < CRIT_STATES {
        let (a, b, h) = (rng.range(0.05, 1.52), rng.range(0.05, 1.52), rng.range(0.02, 0.98));
        if let Ok(s) = CriticalState::new(a, b, h, 1.5) {
            if s.is_interior() && s.m().entries().iter().all(|&v| v >= MIN_ENTRY) {
                triples.push((a, b, h));
            }
        }
    }
    let (mut row, mut det, mut dfh, mut dg, mut dirn) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, f64::NEG_INFINITY);
    let mut count = 0;
    for &(a, b, h) in &triples {
        for &pv in &CRIT_PS {
            count += 1;
            let s = CriticalState::new(a, b, h, pv).unwrap();
            let phi = phi_matrix(&s).unwrap();
            let scale = phi.rows.iter().flatten().fold(1.0f64, |m, v| m.max(v.abs()));
            for r in phi.kernel_residual() {
                row = row.max(r.abs() / scale);
            }
            let d = det_identity(&s).unwrap();
            let [ef, pr, eg, pq] = d.pair_sums.map(|x| x.0);
            let dscale = (ef * pr).abs().max((pq * eg).abs()).max(1.0);
            det = det.max(d.residual.abs() / dscale);

            let dir = DirectionMatrix::new(rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform());
            let step = 1e-3 * s.h.min(1.0 - s.h).min(s.m().entries().iter().fold(1.0f64, |m, &v| m.min(v)));
            let fd = richardson(|x| f_eval(&CriticalState { h: x, ..s }, &dir).unwrap(), s.h, step);
            dfh = dfh.max((df_dh(&s, &dir).unwrap() - fd).abs());

            let am = s.a_matrix();
            let bm = dir.as_matrix();
            let gd = g_directional_derivative(&am, &bm, p(pv)).unwrap().value;
            let fd = richardson(|t| g_func(&am.add(&bm.scale(t)), p(pv)).unwrap(), 0.0, g_step(&am));
            dg = dg.max((gd - fd).abs());
            let gb = g_func(&bm, p(pv)).unwrap();
            // signed so that positive means the wrong side of g(B)
            let excess = if pv <= 2.0 { gd - gb } else { gb - gd };
            dirn = dirn.max(excess / gb.abs().max(1.0));
        }
    }
    Outcome {
        ok: row <= ROW_SUM_REL && det <= DET_REL && dfh <= FD_ABS && dg <= FD_ABS && dirn <= DIRECTION_REL,
        detail: format!(
            "{count} states: row sums {row:.1e}, det {det:.1e}, dF/dh fd {dfh:.1e}, dg fd {dg:.1e}, direction excess {dirn:.1e}"
        ),
    }
}

fn fractional_suite() -> Outcome {
    let mut rng = SplitMix64::new(SEED ^ 6);
    let mut worst = 0.0f64;
    for _ in 0..FRAC_MATRICES {
        let l1 = rng.log_uniform(1e-2, 1e2);
        let l2 = l1 / rng.log_uniform(1.0, FRAC_MAX_COND);
        let t = rng.phase();
        let (c, s) = (t.cos(), t.sin());
        let off = (l1 - l2) * c * s;
        let k = RealMatrix2::new(l1 * c * c + l2 * s * s, off, off, l1 * s * s + l2 * c * c);
        for &pv in &FRAC_PS {
            let a = frac_power_integral(&k, pv).unwrap();
            let b = frac_power_spectral(&k, pv - 1.0).unwrap();
            worst = worst.max(a.sub(&b).max_abs() / b.max_abs());
        }
    }
    Outcome { ok: worst <= FRAC_REL, detail: format!("worst rel {worst:.1e}") }
}

fn lemma2_suite() -> Outcome {
    let mut rng = SplitMix64::new(SEED ^ 7);
    let (mut zero, mut slope, mut end, mut end_abs) = (0.0f64, f64::NEG_INFINITY, 0.0f64, 0.0f64);
    for _ in 0..L2_STATES {
        let s = canonical_lemma2_state(&mut rng);
        let hm = h_max(&s);
        for &pv in &L2_PS {
            let pe = p(pv);
            let scale = s.norm_pow(pe).unwrap();
            zero = zero.max(lemma2_f(&s, pe, 0.0).unwrap().abs() / scale);
            for k in 0..L2_GRID {
                let h = hm * k as f64 / (L2_GRID - 1) as f64;
                slope = slope.max(lemma2_f_prime(&s, pe, h).unwrap() / scale);
            }
            let f_end = lemma2_f(&s, pe, hm).unwrap();
            let expect = s.make_rearranged().norm_pow(pe).unwrap() - scale;
            end = end.max(rel(f_end, expect));
            end_abs = end_abs.max((f_end - expect).abs() / scale);
        }
    }
    Outcome {
        ok: zero <= L2_ZERO_REL && slope <= L2_SLOPE_REL && end <= L2_END_REL,
        detail: format!(
            "|f(0)|/scale {zero:.1e}, max f'/scale {slope:.1e}, endpoint rel {end:.1e} (vs scale {end_abs:.1e})"
        ),
    }
}

fn kernel_suite() -> Outcome {
    let mut rng = SplitMix64::new(SEED ^ 8);
    let mut svd = 0.0f64;
    for _ in 0..SVD_MATRICES {
        let m = complex_matrix(&mut rng);
        for &pv in &SVD_PS {
            svd = svd.max(rel(schatten_2x2(&m, p(pv)).unwrap(), schatten_svd_2x2(&m, pv)));
        }
    }
    let mut dense = 0.0f64;
    for _ in 0..DENSE_INSTANCES {
        let n = 1 + rng.below(3);
        let v = |rng: &mut SplitMix64| (0..n).map(|_| complex(rng, 1e-2, 1e2)).collect::<Vec<_>>();
        let bm = DiagBlockMatrix::new(v(&mut rng), v(&mut rng), v(&mut rng), v(&mut rng)).unwrap();
        let d = bm.to_dense().unwrap();
        for &pv in &SVD_PS {
            dense = dense.max(rel(bm.block_norm(p(pv)).unwrap(), schatten_dense_dilation(&d, pv)));
        }
    }
    Outcome {
        ok: svd <= SVD_REL && dense <= DENSE_REL,
        detail: format!("closed form vs SVD rel {svd:.1e}, block vs dense rel {dense:.1e}"),
    }
}

fn main() {
    let s = Duration::from_secs;
    let results = [
        run(1, "first counterexample", s(1), first_counterexample_check),
        run(2, "second counterexample", s(1), second_counterexample_check),
        run(3, "general block chain", s(30), theorem1_suite),
        run(4, "PSD block and two-index statements", s(60), theorem2_suite),
        run(5, "critical-point identities", s(60), critical_suite),
        run(6, "fractional powers", s(30), fractional_suite),
        run(7, "interpolation monotonicity", s(30), lemma2_suite),
        run(8, "norm kernels", s(30), kernel_suite),
    ];
    let failed = results.iter().filter(|&&ok| !ok).count();
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
