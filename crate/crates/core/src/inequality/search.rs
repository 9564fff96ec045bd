use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::checkers::*;
use super::InequalityReport;
use crate::block::{DiagBlockMatrix, Lemma2State, PsdDiagBlock};
use crate::error::{Error, Result};
use crate::rng::SplitMix64;
use crate::schatten::{ComplexMatrix2, PExponent, RealMatrix2};

/// Range of the log-uniform modulus distribution.
pub const MODULUS_RANGE: (f64, f64) = (1e-3, 1e3);
/// Largest `n` drawn by the samplers.
pub const MAX_SAMPLED_N: usize = 5;

/// Anything a checker can be run on.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Instance {
    Block(DiagBlockMatrix),
    Psd(PsdDiagBlock),
    Matrix(ComplexMatrix2),
    GPair { x: RealMatrix2, y: RealMatrix2 },
    Lemma2(Lemma2State),
    Vectors { u: Vec<Complex64>, v: Vec<Complex64> },
    /// `n = None` pairs `m` with its saturating Hölder dual at each `p`.
    Hoelder { m: Lemma2State, n: Option<Lemma2State> },
}

impl Instance {
    pub fn kind(&self) -> &'static str {
        match self {
            Instance::Block(_) => "block",
            Instance::Psd(_) => "psd",
            Instance::Matrix(_) => "matrix",
            Instance::GPair { .. } => "g_pair",
            Instance::Lemma2(_) => "lemma2",
            Instance::Vectors { .. } => "vectors",
            Instance::Hoelder { .. } => "hoelder",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Checker {
    ScalarHanner,
    Theorem1,
    Theorem2,
    Lemma1,
    GSuperadd,
    Lemma2,
    PosBlock,
    SingOrdering,
    Hoelder,
}

impl Checker {
    pub const ALL: [Checker; 9] = [
        Checker::ScalarHanner,
        Checker::Theorem1,
        Checker::Theorem2,
        Checker::Lemma1,
        Checker::GSuperadd,
        Checker::Lemma2,
        Checker::PosBlock,
        Checker::SingOrdering,
        Checker::Hoelder,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Checker::ScalarHanner => "scalar_hanner",
            Checker::Theorem1 => "theorem1",
            Checker::Theorem2 => "theorem2",
            Checker::Lemma1 => "lemma1",
            Checker::GSuperadd => "g_superadd",
            Checker::Lemma2 => "lemma2",
            Checker::PosBlock => "pos_block",
            Checker::SingOrdering => "sing_ordering",
            Checker::Hoelder => "hoelder",
        }
    }

    /// Whether a failure on `family` would contradict a proved statement.
    /// `sing_ordering` is only backed on similarly ordered PSD input.
    pub fn theorem_backed(self, family: Family) -> bool {
        match self {
            Checker::SingOrdering => family != Family::General,
            _ => true,
        }
    }

    fn unsupported(self, what: &str) -> Error {
        Error::Unsupported { checker: self.id().to_string(), family: what.to_string() }
    }

    pub fn evaluate(self, inst: &Instance, p: PExponent) -> Result<InequalityReport> {
        use Instance as I;
        match (self, inst) {
            (Checker::Theorem1, I::Block(bm)) => check_theorem1(bm, p),
            (Checker::Theorem1, I::Psd(pb)) => check_theorem1(&pb.to_block_matrix(), p),
            (Checker::Theorem1, I::Matrix(m)) => check_theorem1(&single(m), p),
            (Checker::SingOrdering, I::Block(bm)) => check_sing_ordering(bm, p),
            (Checker::SingOrdering, I::Psd(pb)) => check_sing_ordering(&pb.to_block_matrix(), p),
            (Checker::Theorem2, I::Psd(pb)) => check_theorem2(pb, p),
            (Checker::Theorem2, I::Lemma2(s)) => check_theorem2(&s.to_psd_block(), p),
            (Checker::PosBlock, I::Psd(pb)) => check_pos_block_2x2(pb, p),
            (Checker::PosBlock, I::Lemma2(s)) => check_pos_block_2x2(&s.to_psd_block(), p),
            (Checker::Lemma1, I::Matrix(m)) => check_lemma1(m, p),
            (Checker::Lemma1, I::Block(bm)) if bm.n() == 1 => check_lemma1(&bm.decompose()[0], p),
            (Checker::GSuperadd, I::GPair { x, y }) => check_g_superadd(x, y, p),
            (Checker::Lemma2, I::Lemma2(s)) => check_lemma2(s, p),
            (Checker::Lemma2, I::Psd(pb)) if pb.n() == 2 => check_lemma2(&pb.pair_state(0, 1)?, p),
            (Checker::ScalarHanner, I::Vectors { u, v }) => check_scalar_hanner(u, v, p),
            (Checker::Hoelder, I::Hoelder { m, n }) => match n {
                Some(n) => check_hoelder_duality(m, n, p),
                None => check_hoelder_duality(m, &hoelder_dual(m, p)?, p),
            },
            (Checker::Hoelder, I::Lemma2(m)) => check_hoelder_duality(m, &hoelder_dual(m, p)?, p),
            _ => Err(self.unsupported(inst.kind())),
        }
    }
}

fn single(m: &ComplexMatrix2) -> DiagBlockMatrix {
    DiagBlockMatrix::new(vec![m.a], vec![m.b], vec![m.c], vec![m.d]).expect("finite 2x2 matrix")
}

impl fmt::Display for Checker {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Checker {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = |x: &str| x.trim().to_ascii_lowercase().replace(['-', '_'], "");
        let key = norm(s);
        Checker::ALL
            .into_iter()
            .find(|c| norm(c.id()) == key)
            .ok_or_else(|| Error::UnknownChecker(s.to_string()))
    }
}

/// Instance distributions for the random search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// Complex entries with log-uniform moduli and uniform phases.
    General,
    /// PSD instances whose diagonals are similarly ordered.
    Psd,
    /// As above but with forced zeros and saturated `|c|^2 = ab`.
    Boundary,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::General, Family::Psd, Family::Boundary];

    pub fn id(self) -> &'static str {
        match self {
            Family::General => "general",
            Family::Psd => "psd",
            Family::Boundary => "boundary",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase();
        Family::ALL
            .into_iter()
            .find(|f| f.id() == key)
            .ok_or_else(|| Error::Parse(format!("unknown family `{s}` (expected general, psd or boundary)")))
    }
}

fn modulus(rng: &mut SplitMix64) -> f64 {
    rng.log_uniform(MODULUS_RANGE.0, MODULUS_RANGE.1)
}

fn complex(rng: &mut SplitMix64, zero_prob: f64) -> Complex64 {
    if zero_prob > 0.0 && rng.chance(zero_prob) {
        Complex64::new(0.0, 0.0)
    } else {
        Complex64::from_polar(modulus(rng), rng.phase())
    }
}

fn complex_vec(rng: &mut SplitMix64, n: usize, zero_prob: f64) -> Vec<Complex64> {
    (0..n).map(|_| complex(rng, zero_prob)).collect()
}

fn dim(rng: &mut SplitMix64) -> usize {
    1 + rng.below(MAX_SAMPLED_N)
}

fn sample_block(rng: &mut SplitMix64, n: usize, zero_prob: f64) -> DiagBlockMatrix {
    let a = complex_vec(rng, n, zero_prob);
    let b = complex_vec(rng, n, zero_prob);
    let c = complex_vec(rng, n, zero_prob);
    let d = complex_vec(rng, n, zero_prob);
    DiagBlockMatrix::new(a, b, c, d).expect("finite samples")
}

/// A PSD instance with `a`, `b` sorted by one common permutation and
/// `|c_i| = u_i sqrt(a_i b_i)`. In boundary mode some diagonal entries are
/// zero and about half of the `c_i` saturate `|c_i|^2 = a_i b_i`.
pub fn sample_psd(rng: &mut SplitMix64, n: usize, boundary: bool) -> PsdDiagBlock {
    let zero = |rng: &mut SplitMix64| boundary && rng.chance(0.25);
    let mut a: Vec<f64> = (0..n).map(|_| if zero(rng) { 0.0 } else { modulus(rng) }).collect();
    let mut b: Vec<f64> = (0..n).map(|_| if zero(rng) { 0.0 } else { modulus(rng) }).collect();
    a.sort_by(|x, y| y.total_cmp(x));
    b.sort_by(|x, y| y.total_cmp(x));
    let c: Vec<Complex64> = (0..n)
        .map(|i| {
            let u = if boundary && rng.chance(0.5) { 1.0 } else { rng.uniform() };
            Complex64::from_polar((a[i] * b[i]).sqrt() * u, rng.phase())
        })
        .collect();
    let mut sigma: Vec<usize> = (0..n).collect();
    rng.shuffle(&mut sigma);
    PsdDiagBlock::new(a, b, c).expect("finite samples").permute(&sigma)
}

fn sample_real(rng: &mut SplitMix64, zero_prob: f64) -> RealMatrix2 {
    let mut e = || if zero_prob > 0.0 && rng.chance(zero_prob) { 0.0 } else { modulus(rng) };
    RealMatrix2::new(e(), e(), e(), e())
}

fn sample_pair_state(rng: &mut SplitMix64, boundary: bool) -> Lemma2State {
    sample_psd(rng, 2, boundary).pair_state(0, 1).expect("valid sample")
}

/// Draws one instance suited to `checker` from `family`.
pub fn sample_instance(checker: Checker, family: Family, rng: &mut SplitMix64) -> Result<Instance> {
    let boundary = family == Family::Boundary;
    let zp = if boundary { 0.3 } else { 0.0 };
    let unsupported = || Err(checker.unsupported(family.id()));
    let n = dim(rng);
    Ok(match (checker, family) {
        (Checker::Theorem1, Family::Psd) => Instance::Psd(sample_psd(rng, n, false)),
        (Checker::Theorem1, _) => Instance::Block(sample_block(rng, n, zp)),
        (Checker::SingOrdering, Family::General) => Instance::Block(sample_block(rng, n, 0.0)),
        (Checker::Theorem2 | Checker::PosBlock, Family::General) => return unsupported(),
        (Checker::SingOrdering | Checker::Theorem2 | Checker::PosBlock, _) => {
            Instance::Psd(sample_psd(rng, n, boundary))
        }
        (Checker::Lemma1, Family::Psd) => {
            let pb = sample_psd(rng, 1, false);
            Instance::Matrix(pb.to_block_matrix().decompose()[0])
        }
        (Checker::Lemma1, _) => Instance::Matrix(sample_block(rng, 1, zp).decompose()[0]),
        (Checker::GSuperadd, Family::Psd) => return unsupported(),
        (Checker::GSuperadd, _) => Instance::GPair { x: sample_real(rng, zp), y: sample_real(rng, zp) },
        (Checker::Lemma2, Family::General) => return unsupported(),
        (Checker::Lemma2, _) => Instance::Lemma2(sample_pair_state(rng, boundary)),
        (Checker::ScalarHanner, Family::Psd) => return unsupported(),
        (Checker::ScalarHanner, _) => {
            Instance::Vectors { u: complex_vec(rng, n, zp), v: complex_vec(rng, n, zp) }
        }
        (Checker::Hoelder, Family::General) => return unsupported(),
        (Checker::Hoelder, Family::Psd) => Instance::Hoelder { m: sample_pair_state(rng, false), n: None },
        (Checker::Hoelder, Family::Boundary) => {
            let m = sample_pair_state(rng, true);
            let n = sample_pair_state(rng, true);
            Instance::Hoelder { m, n: Some(n) }
        }
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub trial: u64,
    pub p: f64,
    pub instance: Instance,
    pub report: InequalityReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchOutcome {
    pub checker: Checker,
    pub family: Family,
    pub seed: u64,
    pub trials: u64,
    pub evaluations: u64,
    pub theorem_backed: bool,
    /// Smallest relative margin seen over all evaluations.
    pub worst_relative_margin: f64,
    pub violations: Vec<Violation>,
}

/// Runs `checker` on `trials` instances from `family`, each at every `p` in
/// `ps`. Trial `t` draws from `SplitMix64::for_trial(seed, t)`, so results do
/// not depend on thread scheduling.
pub fn random_search(
    checker: Checker,
    family: Family,
    ps: &[PExponent],
    trials: u64,
    seed: u64,
    tol: f64,
) -> Result<SearchOutcome> {
    if ps.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let per_trial: Vec<(Vec<Violation>, f64)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = SplitMix64::for_trial(seed, t);
            let inst = sample_instance(checker, family, &mut rng)?;
            let mut found = Vec::new();
            let mut worst = f64::INFINITY;
            for &p in ps {
                let r = checker.evaluate(&inst, p)?.with_tol(tol);
                worst = worst.min(r.relative_margin());
                if !r.holds {
                    found.push(Violation { trial: t, p: p.get(), instance: inst.clone(), report: r });
                }
            }
            Ok((found, worst))
        })
        .collect::<Result<_>>()?;
    let worst_relative_margin = per_trial.iter().map(|x| x.1).fold(f64::INFINITY, f64::min);
    Ok(SearchOutcome {
        checker,
        family,
        seed,
        trials,
        evaluations: trials * ps.len() as u64,
        theorem_backed: checker.theorem_backed(family),
        worst_relative_margin: if trials == 0 { 0.0 } else { worst_relative_margin },
        violations: per_trial.into_iter().flat_map(|x| x.0).collect(),
    })
}
