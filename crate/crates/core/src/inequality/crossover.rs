use serde::{Serialize, Serializer};

use super::search::{Checker, Instance};
use super::InequalityReport;
use crate::block::{DiagBlockMatrix, PsdDiagBlock};
use crate::error::{Error, Result};
use crate::schatten::PExponent;

/// Upper end of the admissible scan range.
pub const P_MAX: f64 = 8.0;
/// Default bisection width for a located crossover.
pub const DEFAULT_RESOLUTION: f64 = 1e-6;

fn none_sentinel<S: Serializer>(v: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(x) => s.serialize_f64(*x),
        None => s.serialize_str("none"),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossoverResult {
    pub checker: Checker,
    /// Midpoint of the final bracket around the first sign change.
    #[serde(serialize_with = "none_sentinel")]
    pub p_star: Option<f64>,
    pub bracket: Option<(f64, f64)>,
    /// `(p, margin)` on the scan grid.
    pub samples: Vec<(f64, f64)>,
    /// Sign changes between consecutive grid margins outside the deadband.
    pub sign_changes: usize,
}

fn sign(r: &InequalityReport) -> i8 {
    if r.margin.abs() <= r.threshold() {
        0
    } else if r.margin > 0.0 {
        1
    } else {
        -1
    }
}

fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    if let Some(p) = grid.iter().find(|&&p| !(1.0..=P_MAX).contains(&p)) {
        return Err(Error::OutOfRange(format!("grid value p = {p} outside [1, {P_MAX}]")));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::OutOfRange("p grid must be strictly increasing".into()));
    }
    Ok(())
}

/// Scans the margin of `checker` on `inst` over `grid` and bisects the first
/// sign change to width `resolution`. Margins within the report threshold of
/// zero count as sign 0 and never open a bracket on their own.
pub fn crossover_scan(inst: &Instance, checker: Checker, grid: &[f64], resolution: f64) -> Result<CrossoverResult> {
    validate_grid(grid)?;
    if !(resolution > 0.0) {
        return Err(Error::OutOfRange(format!("resolution {resolution} must be positive")));
    }
    let eval = |p: f64| checker.evaluate(inst, PExponent::new(p)?);
    let mut samples = Vec::with_capacity(grid.len());
    let mut last: Option<(f64, i8)> = None;
    let mut first_bracket = None;
    let mut sign_changes = 0;
    for &p in grid {
        let r = eval(p)?;
        samples.push((p, r.margin));
        let s = sign(&r);
        if s == 0 {
            continue;
        }
        if let Some((lp, ls)) = last {
            if ls != s {
                sign_changes += 1;
                first_bracket.get_or_insert((lp, p, ls));
            }
        }
        last = Some((p, s));
    }
    let Some((mut lo, mut hi, s_lo)) = first_bracket else {
        return Ok(CrossoverResult { checker, p_star: None, bracket: None, samples, sign_changes });
    };
    while hi - lo > resolution {
        let mid = 0.5 * (lo + hi);
        if sign(&eval(mid)?) == s_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(CrossoverResult { checker, p_star: Some(0.5 * (lo + hi)), bracket: Some((lo, hi)), samples, sign_changes })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CounterexampleStudy {
    pub label: String,
    pub description: String,
    pub instance: Instance,
    pub checker: Checker,
    pub reports: Vec<InequalityReport>,
    /// Reports failing by more than the strict factor.
    pub strict_violations: usize,
    pub crossover: Option<CrossoverResult>,
}

/// The non-PSD instance `A = diag(4, 0)`, `B = diag(7, 6)`, `C = diag(7, 10)`.
pub fn first_counterexample() -> PsdDiagBlock {
    PsdDiagBlock::from_real(&[4.0, 0.0], &[7.0, 6.0], &[7.0, 10.0]).expect("constant instance")
}

/// The general instance with blocks `0`, `diag(5, 6)`, `diag(5, 1)`, `diag(6, 5)`.
pub fn second_counterexample() -> DiagBlockMatrix {
    DiagBlockMatrix::from_real(&[0.0, 0.0], &[5.0, 6.0], &[5.0, 1.0], &[6.0, 5.0]).expect("constant instance")
}

fn unit_grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step).round() as usize;
    (0..=n).map(|k| lo + step * k as f64).collect()
}

fn study(
    label: &str,
    description: &str,
    instance: Instance,
    ps: &[f64],
    scan: bool,
) -> Result<CounterexampleStudy> {
    let checker = Checker::SingOrdering;
    let reports = ps
        .iter()
        .map(|&p| checker.evaluate(&instance, PExponent::new(p)?))
        .collect::<Result<Vec<_>>>()?;
    let crossover = if scan {
        Some(crossover_scan(&instance, checker, &unit_grid(1.0, 2.0, 0.01), DEFAULT_RESOLUTION)?)
    } else {
        None
    };
    Ok(CounterexampleStudy {
        label: label.into(),
        description: description.into(),
        strict_violations: reports.iter().filter(|r| r.strictly_violated()).count(),
        instance,
        checker,
        reports,
        crossover,
    })
}

/// Evaluates sorting the block diagonals by modulus on the two fixed
/// instances where it increases the norm for `p < 2`.
pub fn reproduce_counterexamples() -> Result<Vec<CounterexampleStudy>> {
    Ok(vec![
        study(
            "first",
            "non-PSD: A = diag(4,0), B = diag(7,6), C = diag(7,10); the sign of the margin flips inside (1, 1.5)",
            Instance::Block(first_counterexample().to_block_matrix()),
            &[1.0, 1.1, 1.2, 1.25, 1.5, 2.0],
            true,
        )?,
        study(
            "second",
            "blocks 0, diag(5,6), diag(5,1), diag(6,5): sorting increases the norm for every p in [1, 2)",
            Instance::Block(second_counterexample()),
            &[1.0, 1.25, 1.5, 1.75, 1.99, 2.0],
            true,
        )?,
    ])
}
