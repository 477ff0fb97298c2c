//! Instance representation for deterministic and probabilistic set covering.
//!
//! Column indices are 0-based everywhere inside the crate. The text formats
//! (ORLIB and the PSCP instance file) are 1-based and convert at the boundary.

mod format;
mod orlib;

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

pub use format::{read_instance, write_instance, FORMAT_VERSION};
pub use orlib::{parse_orlib, write_orlib, ParseWarning};

/// Absolute tolerance on `sum_w p_i^w = 1`.
pub const PROB_SUM_TOL: f64 = 1e-9;

/// Slack allowed when comparing a covered probability against `1 - eps_i`.
///
/// Probabilities are sums of floating-point weights, so an exactly feasible
/// row can land a few ulps below its threshold.
pub const PROB_TOL: f64 = 1e-9;

/// A deterministic set covering instance `min c^T x, A x >= 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeterministicScp {
    pub n: usize,
    pub cost: Vec<u64>,
    /// `rows[i]` is `supp(A_i)`, sorted, 0-based.
    pub rows: Vec<Vec<usize>>,
}

impl DeterministicScp {
    pub fn m(&self) -> usize {
        self.rows.len()
    }
}

/// The random data of one row: its scenarios, their weights and the
/// row's reliability level, plus a column-major index of the scenarios.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioBlock {
    scenarios: Vec<Vec<usize>>,
    prob: Vec<f64>,
    epsilon: f64,
    #[serde(skip)]
    col_index: Vec<Vec<usize>>,
}

impl ScenarioBlock {
    /// Builds a block over `n` columns. Supports are expected sorted; no other
    /// invariant is enforced here, see [`Instance::validate`].
    pub fn new(n: usize, scenarios: Vec<Vec<usize>>, prob: Vec<f64>, epsilon: f64) -> Self {
        let col_index = build_column_index(n, &scenarios);
        ScenarioBlock { scenarios, prob, epsilon, col_index }
    }

    /// Number of scenarios `s_i`.
    pub fn len(&self) -> usize {
        self.scenarios.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scenarios.is_empty()
    }

    pub fn scenarios(&self) -> &[Vec<usize>] {
        &self.scenarios
    }

    pub fn scenario(&self, w: usize) -> &[usize] {
        &self.scenarios[w]
    }

    pub fn prob(&self) -> &[f64] {
        &self.prob
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// `col_index()[j]` lists the scenarios whose support contains `j`.
    pub fn col_index(&self) -> &[Vec<usize>] {
        &self.col_index
    }

    /// Probability that the row is covered by the 0-1 point `x`.
    pub fn covered_probability(&self, x: &[bool]) -> f64 {
        self.scenarios
            .iter()
            .zip(&self.prob)
            .filter(|(support, _)| support.iter().any(|&j| x[j]))
            .map(|(_, &p)| p)
            .sum()
    }

    /// Whether a covered probability meets `1 - eps` (with [`PROB_TOL`] slack).
    pub fn meets_reliability(&self, covered: f64) -> bool {
        covered >= 1.0 - self.epsilon - PROB_TOL
    }
}

/// A probabilistic set covering instance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Instance {
    pub n: usize,
    pub cost: Vec<f64>,
    pub blocks: Vec<ScenarioBlock>,
    /// Generator provenance (seed, distribution, flags) as flat key/value pairs.
    pub meta: BTreeMap<String, String>,
}

impl Instance {
    pub fn new(n: usize, cost: Vec<f64>, blocks: Vec<ScenarioBlock>) -> Self {
        Instance { n, cost, blocks, meta: BTreeMap::new() }
    }

    pub fn m(&self) -> usize {
        self.blocks.len()
    }

    /// Total number of scenarios across all rows.
    pub fn scenario_count(&self) -> usize {
        self.blocks.iter().map(ScenarioBlock::len).sum()
    }

    pub fn cost_of(&self, x: &[bool]) -> f64 {
        self.cost.iter().zip(x).filter(|(_, &xj)| xj).map(|(c, _)| c).sum()
    }

    /// True when every cost is a (nonnegative) integer, so objective values
    /// of integer points are integral.
    pub fn has_integral_costs(&self) -> bool {
        self.cost.iter().all(|c| c.fract() == 0.0 && c.abs() < 2f64.powi(52))
    }

    /// Checks every type invariant and returns the violations found.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.cost.len() != self.n {
            out.push(Violation::global(ViolationKind::CostLength));
        }
        for (j, &c) in self.cost.iter().enumerate() {
            if !(c >= 0.0) || !c.is_finite() {
                out.push(Violation { row: None, scenario: None, column: Some(j), kind: ViolationKind::CostNegative });
            }
        }
        for (i, block) in self.blocks.iter().enumerate() {
            let eps = block.epsilon;
            if !(eps > 0.0 && eps < 1.0) {
                out.push(Violation::row(i, ViolationKind::EpsilonRange));
            }
            if block.prob.len() != block.scenarios.len() {
                out.push(Violation::row(i, ViolationKind::ProbCount));
            }
            for (w, &p) in block.prob.iter().enumerate() {
                if !(p > 0.0) || !p.is_finite() {
                    out.push(Violation::scenario(i, w, ViolationKind::ProbNonPositive));
                }
            }
            let total: f64 = block.prob.iter().sum();
            if (total - 1.0).abs() > PROB_SUM_TOL {
                out.push(Violation::row(i, ViolationKind::ProbSum));
            }
            for (w, support) in block.scenarios.iter().enumerate() {
                if support.iter().any(|&j| j >= self.n) {
                    out.push(Violation::scenario(i, w, ViolationKind::SupportRange));
                }
                if support.windows(2).any(|p| p[0] >= p[1]) {
                    out.push(Violation::scenario(i, w, ViolationKind::SupportOrder));
                }
            }
            if block.col_index != build_column_index(self.n, &block.scenarios) {
                out.push(Violation::row(i, ViolationKind::ColumnIndex));
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    CostLength,
    CostNegative,
    EpsilonRange,
    ProbCount,
    ProbNonPositive,
    ProbSum,
    SupportRange,
    SupportOrder,
    ColumnIndex,
}

impl ViolationKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ViolationKind::CostLength => "cost length",
            ViolationKind::CostNegative => "cost sign",
            ViolationKind::EpsilonRange => "epsilon range",
            ViolationKind::ProbCount => "prob count",
            ViolationKind::ProbNonPositive => "prob positive",
            ViolationKind::ProbSum => "prob sum",
            ViolationKind::SupportRange => "support range",
            ViolationKind::SupportOrder => "support order",
            ViolationKind::ColumnIndex => "column index",
        }
    }
}

/// One failed invariant. Rows, scenarios and columns are 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub row: Option<usize>,
    pub scenario: Option<usize>,
    pub column: Option<usize>,
    pub kind: ViolationKind,
}

impl Violation {
    fn global(kind: ViolationKind) -> Self {
        Violation { row: None, scenario: None, column: None, kind }
    }

    fn row(i: usize, kind: ViolationKind) -> Self {
        Violation { row: Some(i), scenario: None, column: None, kind }
    }

    fn scenario(i: usize, w: usize, kind: ViolationKind) -> Self {
        Violation { row: Some(i), scenario: Some(w), column: None, kind }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.kind.as_str())?;
        if let Some(i) = self.row {
            write!(f, " (row {}", i + 1)?;
            if let Some(w) = self.scenario {
                write!(f, ", scenario {}", w + 1)?;
            }
            f.write_str(")")?;
        }
        if let Some(j) = self.column {
            write!(f, " (column {})", j + 1)?;
        }
        Ok(())
    }
}

/// Transposes scenario supports into per-column scenario lists.
pub fn build_column_index(n: usize, scenarios: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut index = vec![Vec::new(); n];
    for (w, support) in scenarios.iter().enumerate() {
        for &j in support {
            if j < n {
                index[j].push(w);
            }
        }
    }
    index
}
