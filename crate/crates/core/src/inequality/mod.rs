//! Checkers for the norm inequalities. Each returns an [`InequalityReport`]
//! holding the evaluated chain, its claimed direction and the worst link.

mod checkers;
mod crossover;
mod search;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use checkers::{
    check_g_superadd, check_hoelder_duality, check_lemma1, check_lemma2, check_pos_block_2x2, check_scalar_hanner,
    check_sing_ordering, check_theorem1, check_theorem2, hoelder_dual,
};
pub use crossover::{
    crossover_scan, first_counterexample, reproduce_counterexamples, second_counterexample, CounterexampleStudy,
    CrossoverResult, DEFAULT_RESOLUTION, P_MAX,
};
pub use search::{
    random_search, sample_instance, sample_psd, Checker, Family, Instance, SearchOutcome, Violation, MAX_SAMPLED_N, MODULUS_RANGE,
};

/// Default absolute/relative tolerance for a chain link.
pub const DEFAULT_TOL: f64 = 1e-9;

/// A link is a *strict* violation when it fails by more than this multiple
/// of the acceptance threshold.
pub const STRICT_FACTOR: f64 = 10.0;

/// Which way the chain is claimed to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// `chain[0] >= chain[1] >= ...`
    NonIncreasing,
    /// `chain[0] <= chain[1] <= ...`
    NonDecreasing,
}

impl Direction {
    /// `≥` for `p <= 2`, `≤` for `p >= 2`.
    pub fn for_p(p: f64) -> Self {
        if p <= 2.0 {
            Direction::NonIncreasing
        } else {
            Direction::NonDecreasing
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Direction::NonIncreasing => ">=",
            Direction::NonDecreasing => "<=",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub name: String,
    pub p: f64,
    pub chain: Vec<f64>,
    pub direction: Direction,
    /// Smallest link difference, signed so that `>= 0` means the claimed
    /// direction holds.
    pub margin: f64,
    pub holds: bool,
    pub tol: f64,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub details: BTreeMap<String, f64>,
}

impl InequalityReport {
    pub fn from_chain(name: impl Into<String>, p: f64, chain: Vec<f64>, direction: Direction) -> Self {
        let margin = chain
            .windows(2)
            .map(|w| match direction {
                Direction::NonIncreasing => w[0] - w[1],
                Direction::NonDecreasing => w[1] - w[0],
            })
            .reduce(f64::min)
            .unwrap_or(0.0);
        let mut r = Self {
            name: name.into(),
            p,
            chain,
            direction,
            margin,
            holds: true,
            tol: DEFAULT_TOL,
            details: BTreeMap::new(),
        };
        r.holds = r.evaluate_holds();
        r
    }

    /// Largest magnitude in the chain; the relative part of the threshold.
    pub fn scale(&self) -> f64 {
        self.chain.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// `tol · (1 + scale)`: a link may fail by this much and still hold.
    pub fn threshold(&self) -> f64 {
        self.tol * (1.0 + self.scale())
    }

    fn evaluate_holds(&self) -> bool {
        self.margin.is_finite() && self.margin >= -self.threshold()
    }

    /// Re-evaluates `holds` under a different tolerance.
    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self.holds = self.evaluate_holds();
        self
    }

    /// Folds an extra link difference into the margin.
    pub fn with_extra_link(mut self, diff: f64) -> Self {
        self.margin = self.margin.min(diff);
        self.holds = self.evaluate_holds();
        self
    }

    pub fn with_detail(mut self, key: &str, value: f64) -> Self {
        self.details.insert(key.to_string(), value);
        self
    }

    /// Margin normalized by the chain scale.
    pub fn relative_margin(&self) -> f64 {
        let s = self.scale();
        if s > 0.0 {
            self.margin / s
        } else {
            self.margin
        }
    }

    /// Fails by more than [`STRICT_FACTOR`] times the threshold.
    pub fn strictly_violated(&self) -> bool {
        self.margin < -STRICT_FACTOR * self.threshold()
    }
}
