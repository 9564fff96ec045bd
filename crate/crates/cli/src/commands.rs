use anyhow::{anyhow, bail, Context, Result};
use serde::Serialize;

use hanner_core::analysis::{explore_grid, DirectionMatrix, ExplorerRow};
use hanner_core::inequality::{
    random_search, reproduce_counterexamples, Checker, CounterexampleStudy, Family, InequalityReport, Instance,
};
use hanner_core::io::{read_instance, write_reports, InstanceFile, ReportFormat};
use hanner_core::rearrangement::{
    exhaustive_c_permutations, exhaustive_optimize, ordering_landscape, swap_sort_psd, write_landscape_csv, Objective,
    OrderingAssignment, SwapSortResult, MAX_EXHAUSTIVE_N, MAX_LANDSCAPE_N,
};
use hanner_core::{PExponent, PsdDiagBlock};

use crate::config::RunConfig;

/// What a command found; mapped to exit codes 0 and 2 by `main`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Holds,
    Violation,
}

impl Status {
    fn from_ok(ok: bool) -> Self {
        if ok {
            Status::Holds
        } else {
            Status::Violation
        }
    }
}

pub struct Output {
    pub body: Vec<u8>,
    pub status: Status,
    /// One-line summary for stderr.
    pub summary: String,
}

fn load(cfg: &RunConfig) -> Result<InstanceFile> {
    let path = cfg.instance_path.as_ref().ok_or_else(|| anyhow!("this command needs --instance FILE"))?;
    read_instance(path).with_context(|| format!("cannot load instance {}", path.display()))
}

fn json<T: Serialize + ?Sized>(value: &T) -> Result<Vec<u8>> {
    let mut v = serde_json::to_vec_pretty(value)?;
    v.push(b'\n');
    Ok(v)
}

fn reports_body(reports: &[InequalityReport], format: ReportFormat) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    write_reports(reports, format, &mut buf)?;
    Ok(buf)
}

fn psd_ready(pb: &PsdDiagBlock) -> hanner_core::Result<()> {
    pb.require_psd()?;
    pb.require_comonotone()
}

fn pair_reports(pb: &PsdDiagBlock, p: PExponent, tol: f64) -> Result<Vec<InequalityReport>> {
    let n = pb.n();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let mut r = Checker::Lemma2.evaluate(&Instance::Lemma2(pb.pair_state(i, j)?), p)?.with_tol(tol);
            r.name = format!("{} ({}, {})", r.name, i + 1, j + 1);
            out.push(r);
        }
    }
    Ok(out)
}

pub fn verify(cfg: &RunConfig) -> Result<Output> {
    let file = load(cfg)?;
    let inst = match &file {
        InstanceFile::Block(b) => Instance::Block(b.clone()),
        InstanceFile::Psd(p) => Instance::Psd(p.clone()),
    };
    let mut notes = Vec::new();
    let (checkers, pairs) = match (&file, cfg.checker) {
        (_, Some(c)) => (vec![c], false),
        (InstanceFile::Block(_), None) => (vec![Checker::Theorem1], false),
        (InstanceFile::Psd(pb), None) => match psd_ready(pb) {
            Ok(()) => (vec![Checker::Theorem1, Checker::PosBlock, Checker::Theorem2], pb.n() >= 2),
            Err(e) => {
                notes.push(format!("PSD checkers skipped: {e}"));
                (vec![Checker::Theorem1], false)
            }
        },
    };
    let mut reports = Vec::new();
    for &p in &cfg.p_list {
        for &c in &checkers {
            let r = c.evaluate(&inst, p).with_context(|| format!("{c} at p = {}", p.get()))?;
            reports.push(r.with_tol(cfg.tol));
        }
        if pairs {
            if let InstanceFile::Psd(pb) = &file {
                reports.extend(pair_reports(pb, p, cfg.tol)?);
            }
        }
    }
    let failed = reports.iter().filter(|r| !r.holds).count();
    let mut summary = format!("verify: {} reports, {failed} failing", reports.len());
    for n in notes {
        summary.push_str("; ");
        summary.push_str(&n);
    }
    Ok(Output { body: reports_body(&reports, cfg.format)?, status: Status::from_ok(failed == 0), summary })
}

pub fn reproduce(cfg: &RunConfig) -> Result<Output> {
    let studies: Vec<CounterexampleStudy> = reproduce_counterexamples()?;
    let summary = studies
        .iter()
        .map(|s| {
            let cross = s.crossover.as_ref().and_then(|c| c.p_star);
            match cross {
                Some(p) => format!("{}: {} strict violations, sign change at p = {p:.6}", s.label, s.strict_violations),
                None => format!("{}: {} strict violations, no sign change", s.label, s.strict_violations),
            }
        })
        .collect::<Vec<_>>()
        .join("; ");
    let body = match cfg.format {
        ReportFormat::Json => json(&studies)?,
        ReportFormat::Csv => {
            let reports: Vec<InequalityReport> = studies
                .iter()
                .flat_map(|s| {
                    s.reports.iter().map(|r| InequalityReport { name: format!("{}: {}", s.label, r.name), ..r.clone() })
                })
                .collect();
            reports_body(&reports, ReportFormat::Csv)?
        }
    };
    // These instances are known to break the ordering; finding that is the expected result.
    Ok(Output { body, status: Status::Holds, summary: format!("reproduce: {summary}") })
}

#[derive(Debug, Serialize)]
struct PsdOrdering {
    swap_sort: SwapSortResult,
    /// Best `C` permutation in the direction the sorted order should win.
    c_permutation: OrderingAssignment,
    sing_value: f64,
    agrees: bool,
}

#[derive(Debug, Serialize)]
struct OptimizeResult {
    p: f64,
    objective: Objective,
    sing_value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    exhaustive: Option<OrderingAssignment>,
    #[serde(skip_serializing_if = "Option::is_none")]
    psd: Option<PsdOrdering>,
}

fn regime_objective(p: PExponent) -> Objective {
    if p.get() <= 2.0 {
        Objective::Min
    } else {
        Objective::Max
    }
}

fn close(x: f64, y: f64, tol: f64) -> bool {
    (x - y).abs() <= tol * x.abs().max(y.abs()).max(1.0)
}

fn psd_ordering(pb: &PsdDiagBlock, p: PExponent, tol: f64) -> Result<PsdOrdering> {
    let swap_sort = swap_sort_psd(pb, p)?;
    let c_permutation = exhaustive_c_permutations(pb, p, regime_objective(p))?;
    let sing_value = pb.sing().block_norm(p)?;
    let swept = swap_sort.final_pow.powf(1.0 / p.get());
    let agrees = close(c_permutation.value, sing_value, tol) && close(swept, sing_value, tol);
    Ok(PsdOrdering { swap_sort, c_permutation, sing_value, agrees })
}

pub fn optimize(cfg: &RunConfig) -> Result<Output> {
    let file = load(cfg)?;
    let bm = match &file {
        InstanceFile::Block(b) => b.clone(),
        InstanceFile::Psd(p) => p.to_block_matrix(),
    };
    if cfg.format == ReportFormat::Csv {
        if cfg.p_list.len() != 1 {
            bail!("optimize --format csv writes one ordering landscape; pass a single --p");
        }
        if bm.n() > MAX_LANDSCAPE_N {
            bail!("ordering landscape needs n <= {MAX_LANDSCAPE_N}, instance has n = {}", bm.n());
        }
        let p = cfg.p_list[0];
        let rows = ordering_landscape(&bm, p)?;
        let mut body = Vec::new();
        write_landscape_csv(&rows, &mut body)?;
        let best = rows.iter().map(|r| r.value).fold(f64::INFINITY, f64::min);
        let summary = format!("optimize: {} orderings at p = {}, minimum {best:.12e}", rows.len(), p.get());
        return Ok(Output { body, status: Status::Holds, summary });
    }
    let psd = match &file {
        InstanceFile::Psd(pb) => match psd_ready(pb) {
            Ok(()) => Some(pb),
            Err(e) => {
                eprintln!("optimize: PSD ordering checks skipped: {e}");
                None
            }
        },
        InstanceFile::Block(_) => None,
    };
    let mut results = Vec::new();
    for &p in &cfg.p_list {
        let objective = cfg.objective.unwrap_or_else(|| regime_objective(p));
        let exhaustive = if bm.n() <= MAX_EXHAUSTIVE_N { Some(exhaustive_optimize(&bm, p, objective)?) } else { None };
        results.push(OptimizeResult {
            p: p.get(),
            objective,
            sing_value: bm.sing().block_norm(p)?,
            exhaustive,
            psd: psd.map(|pb| psd_ordering(pb, p, cfg.tol)).transpose()?,
        });
    }
    let disagree = results.iter().filter(|r| r.psd.as_ref().is_some_and(|o| !o.agrees)).count();
    let summary = if psd.is_some() {
        format!("optimize: {} exponents, sorted order optimal in {} of them", results.len(), results.len() - disagree)
    } else {
        format!("optimize: {} exponents", results.len())
    };
    Ok(Output { body: json(&results)?, status: Status::from_ok(disagree == 0), summary })
}

/// `lo, lo + step, ..., hi` with the endpoint snapped.
fn grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step).round() as usize;
    (0..=n).map(|k| if k == n { hi } else { lo + step * k as f64 }).collect()
}

pub const EXPLORE_PS: [f64; 5] = [1.2, 1.5, 1.8, 2.5, 3.0];

pub fn explore(cfg: &RunConfig) -> Result<Output> {
    let angles = grid(0.2, 1.4, 0.2);
    let hs = grid(0.05, 0.95, 0.05);
    let ps: Vec<f64> = if cfg.p_given { cfg.p_list.iter().map(|p| p.get()).collect() } else { EXPLORE_PS.to_vec() };
    let rows: Vec<ExplorerRow> = explore_grid(&angles, &angles, &hs, &ps, &DirectionMatrix::ones());
    let worst = rows.iter().map(|r| r.residual.abs()).filter(|r| !r.is_nan()).fold(0.0f64, f64::max);
    let body = match cfg.format {
        ReportFormat::Json => json(&rows)?,
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in &rows {
                w.serialize(r)?;
            }
            w.into_inner().map_err(|e| anyhow!("CSV write failed: {e}"))?
        }
    };
    let summary = format!("explore: {} grid points, largest |residual| {worst:.3e}", rows.len());
    Ok(Output { body, status: Status::from_ok(worst <= cfg.tol), summary })
}

pub fn fuzz(cfg: &RunConfig) -> Result<Output> {
    let checker = cfg.checker.unwrap_or(Checker::Theorem1);
    let family: Family = cfg.family;
    let out = random_search(checker, family, &cfg.p_list, cfg.trials, cfg.seed, cfg.tol)?;
    let body = match cfg.format {
        ReportFormat::Json => json(&out)?,
        ReportFormat::Csv => {
            let reports: Vec<InequalityReport> = out.violations.iter().map(|v| v.report.clone()).collect();
            reports_body(&reports, ReportFormat::Csv)?
        }
    };
    let summary = format!(
        "fuzz {checker} on {family}: {} evaluations, {} violations{}, worst relative margin {:.3e}",
        out.evaluations,
        out.violations.len(),
        if out.theorem_backed { "" } else { " (not theorem-backed)" },
        out.worst_relative_margin
    );
    let bug = out.theorem_backed && !out.violations.is_empty();
    Ok(Output { body, status: Status::from_ok(!bug), summary })
}
