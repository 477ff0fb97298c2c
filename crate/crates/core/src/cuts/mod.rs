//! Valid inequalities for the Benders master problem.
//!
//! For a row `i` and a point `xbar in [0,1]^n`, the separated cut is
//!
//! ```text
//!   sum_{w : A^w xbar <= 1} p^w A^w x  >=  1 - eps - sum_{w : A^w xbar > 1} p^w
//! ```
//!
//! obtained from the closed-form extreme ray of the dual subproblem. All such
//! cuts have nonnegative coefficients. MIR enhancement (see [`mir`]) produces
//! inequalities with terms on both `x_j` and `1 - x_j`; [`Cut`] stores both
//! kinds and [`Cut::folded`] turns them into a plain `>=` row.

mod mir;

use std::collections::HashSet;

use serde::Serialize;

use crate::instance::{Instance, ScenarioBlock};

pub use mir::{best_mir_cut, mir_cut, mir_g, MirContext};

/// Minimum normalized violation for a cut to be reported.
pub const VIOLATION_TOL: f64 = 1e-6;
/// Distance from 0/1 below which an LP value counts as integral.
pub const INT_TOL: f64 = 1e-6;
/// Coverage values up to this threshold take the `(p, 0)` branch of the ray.
pub const COVER_THRESHOLD: f64 = 1.0 + 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CutOrigin {
    Initial,
    Benders,
    Mir,
}

impl CutOrigin {
    pub fn as_str(self) -> &'static str {
        match self {
            CutOrigin::Initial => "initial",
            CutOrigin::Benders => "benders",
            CutOrigin::Mir => "mir",
        }
    }
}

/// `sum coeffs_j x_j + sum complemented_j (1 - x_j) >= rhs`.
///
/// Initial and Benders cuts have strictly positive `coeffs`, no complemented
/// terms and `rhs > 0`. MIR cuts may carry signed terms of either kind.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cut {
    pub row: usize,
    pub origin: CutOrigin,
    pub coeffs: Vec<(usize, f64)>,
    pub complemented: Vec<(usize, f64)>,
    pub rhs: f64,
}

impl Cut {
    pub fn lhs(&self, x: &[f64]) -> f64 {
        let direct: f64 = self.coeffs.iter().map(|&(j, a)| a * x[j]).sum();
        let comp: f64 = self.complemented.iter().map(|&(j, a)| a * (1.0 - x[j])).sum();
        direct + comp
    }

    pub fn lhs_binary(&self, x: &[bool]) -> f64 {
        let direct: f64 = self.coeffs.iter().filter(|&&(j, _)| x[j]).map(|&(_, a)| a).sum();
        let comp: f64 = self.complemented.iter().filter(|&&(j, _)| !x[j]).map(|&(_, a)| a).sum();
        direct + comp
    }

    /// Rewrites the cut over `x` alone: complemented constants move to the
    /// right-hand side. Terms are sorted by column.
    pub fn folded(&self) -> (Vec<(usize, f64)>, f64) {
        let mut terms: Vec<(usize, f64)> = self.coeffs.clone();
        let mut rhs = self.rhs;
        for &(j, a) in &self.complemented {
            terms.push((j, -a));
            rhs -= a;
        }
        terms.sort_by_key(|&(j, _)| j);
        (terms, rhs)
    }

    /// `max(rhs - lhs, 0) / ||pi||` for the folded form `pi^T x >= pi_0`.
    pub fn violation(&self, x: &[f64]) -> f64 {
        let (terms, rhs) = self.folded();
        normalized_violation(&terms, rhs, x)
    }

    /// True when every coefficient is nonnegative and the rhs is positive.
    pub fn is_covering(&self) -> bool {
        self.complemented.is_empty() && self.rhs > 0.0 && self.coeffs.iter().all(|&(_, a)| a >= 0.0)
    }
}

pub(crate) fn normalized_violation(terms: &[(usize, f64)], rhs: f64, x: &[f64]) -> f64 {
    let lhs: f64 = terms.iter().map(|&(j, a)| a * x[j]).sum();
    let gap = rhs - lhs;
    if gap <= 0.0 {
        return 0.0;
    }
    let norm = terms.iter().map(|&(_, a)| a * a).sum::<f64>().sqrt();
    if norm > 0.0 {
        gap / norm
    } else {
        f64::INFINITY
    }
}

/// The Benders cut `sum c_j x_j >= b` in the shape used by strengthening
/// and MIR. `coeffs` is sparse, sorted and strictly positive.
#[derive(Debug, Clone, PartialEq)]
pub struct CutBase {
    pub row: usize,
    pub coeffs: Vec<(usize, f64)>,
    pub rhs: f64,
}

impl CutBase {
    pub fn to_cut(&self, origin: CutOrigin) -> Cut {
        Cut { row: self.row, origin, coeffs: self.coeffs.clone(), complemented: Vec::new(), rhs: self.rhs }
    }

    pub fn coeff(&self, j: usize) -> f64 {
        self.coeffs
            .binary_search_by_key(&j, |&(k, _)| k)
            .map_or(0.0, |p| self.coeffs[p].1)
    }
}

/// Extreme ray `(pi, sigma, gamma = 1)` of the dual subproblem that
/// generates a Benders cut.
#[derive(Debug, Clone, PartialEq)]
pub struct DualRay {
    pub pi: Vec<f64>,
    pub sigma: Vec<f64>,
    pub gamma: f64,
}

impl DualRay {
    pub fn from_coverage(block: &ScenarioBlock, coverage: &[f64]) -> Self {
        let mut pi = vec![0.0; block.len()];
        let mut sigma = vec![0.0; block.len()];
        for (w, (&v, &p)) in coverage.iter().zip(block.prob()).enumerate() {
            if v <= COVER_THRESHOLD {
                pi[w] = p;
            } else {
                sigma[w] = p;
            }
        }
        DualRay { pi, sigma, gamma: 1.0 }
    }
}

/// Indices with `xbar_j > 0`.
pub fn support_of(xbar: &[f64]) -> Vec<usize> {
    xbar.iter().enumerate().filter(|(_, &v)| v > 0.0).map(|(j, _)| j).collect()
}

/// `A^w xbar` for every scenario, accumulated column by column over
/// `support` (the indices where `xbar` is nonzero).
pub fn eval_coverage(block: &ScenarioBlock, xbar: &[f64], support: &[usize]) -> Vec<f64> {
    let mut cov = vec![0.0; block.len()];
    let index = block.col_index();
    for &j in support {
        let v = xbar[j];
        for &w in &index[j] {
            cov[w] += v;
        }
    }
    cov
}

/// Builds `(c, b)` from a coverage vector; `None` when `b <= 0`, i.e. the
/// row's probabilistic constraint cannot be violated by any point.
pub fn cut_base(block: &ScenarioBlock, row: usize, n: usize, coverage: &[f64]) -> Option<CutBase> {
    let exceeding: f64 = coverage
        .iter()
        .zip(block.prob())
        .filter(|(&v, _)| v > COVER_THRESHOLD)
        .map(|(_, &p)| p)
        .sum();
    let rhs = (1.0 - block.epsilon()) - exceeding;
    if rhs <= 0.0 {
        return None;
    }
    let mut dense = vec![0.0; n];
    for (w, (&v, &p)) in coverage.iter().zip(block.prob()).enumerate() {
        if v <= COVER_THRESHOLD {
            for &j in block.scenario(w) {
                dense[j] += p;
            }
        }
    }
    Some(CutBase { row, coeffs: sparse(&dense), rhs })
}

fn sparse(dense: &[f64]) -> Vec<(usize, f64)> {
    dense.iter().enumerate().filter(|(_, &a)| a != 0.0).map(|(j, &a)| (j, a)).collect()
}

/// The cut induced by `xbar = 0`: `sum_w p^w A^w x >= 1 - eps`.
pub fn initial_cut(block: &ScenarioBlock, row: usize, n: usize) -> Cut {
    let mut dense = vec![0.0; n];
    for (support, &p) in block.scenarios().iter().zip(block.prob()) {
        for &j in support {
            dense[j] += p;
        }
    }
    Cut {
        row,
        origin: CutOrigin::Initial,
        coeffs: sparse(&dense),
        complemented: Vec::new(),
        rhs: 1.0 - block.epsilon(),
    }
}

#[derive(Debug, Clone)]
pub struct Separation {
    pub base: CutBase,
    pub cut: Cut,
    pub violation: f64,
    pub ray: DualRay,
}

/// Separates the Benders feasibility cut of `row` at `xbar`. Returns it when
/// its normalized violation exceeds `tol`.
pub fn separate_row(
    block: &ScenarioBlock,
    row: usize,
    xbar: &[f64],
    support: &[usize],
    tol: f64,
) -> Option<Separation> {
    let coverage = eval_coverage(block, xbar, support);
    // cheap test before building coefficients:
    // c^T xbar = sum_{w: v_w <= 1} p_w v_w and b = 1 - eps - sum_{w: v_w > 1} p_w
    let mut lhs = 0.0;
    let mut exceeding = 0.0;
    for (&v, &p) in coverage.iter().zip(block.prob()) {
        if v <= COVER_THRESHOLD {
            lhs += p * v;
        } else {
            exceeding += p;
        }
    }
    if (1.0 - block.epsilon()) - exceeding - lhs <= 0.0 {
        return None;
    }
    let base = cut_base(block, row, xbar.len(), &coverage)?;
    let violation = normalized_violation(&base.coeffs, base.rhs, xbar);
    if violation <= tol {
        return None;
    }
    let ray = DualRay::from_coverage(block, &coverage);
    Some(Separation { cut: base.to_cut(CutOrigin::Benders), base, violation, ray })
}

/// Rows whose nonempty scenarios carry less than `1 - eps` probability.
/// A nonempty result means no 0-1 point is feasible.
pub fn infeasibility_screen(inst: &Instance) -> Vec<usize> {
    inst.blocks
        .iter()
        .enumerate()
        .filter(|(_, block)| {
            let nonempty: f64 = block
                .scenarios()
                .iter()
                .zip(block.prob())
                .filter(|(s, _)| !s.is_empty())
                .map(|(_, &p)| p)
                .sum();
            !block.meets_reliability(nonempty)
        })
        .map(|(i, _)| i)
        .collect()
}

/// Coefficient strengthening: `sum min(c_j, b) x_j >= b`.
pub fn strengthen_cut(base: &CutBase) -> Cut {
    Cut {
        row: base.row,
        origin: CutOrigin::Benders,
        coeffs: base.coeffs.iter().map(|&(j, c)| (j, c.min(base.rhs))).collect(),
        complemented: Vec::new(),
        rhs: base.rhs,
    }
}

/// Hash key: row plus the folded coefficient pattern and rhs on a 1e-9 grid.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct CutKey {
    row: usize,
    terms: Vec<(usize, i64)>,
    rhs: i64,
}

fn grid(v: f64) -> i64 {
    (v * 1e9).round() as i64
}

impl CutKey {
    fn of(cut: &Cut) -> Self {
        let (terms, rhs) = cut.folded();
        CutKey { row: cut.row, terms: terms.iter().map(|&(j, a)| (j, grid(a))).collect(), rhs: grid(rhs) }
    }
}

/// Append-only cut store that drops duplicates.
#[derive(Debug, Clone, Default)]
pub struct CutPool {
    cuts: Vec<Cut>,
    seen: HashSet<CutKey>,
}

impl CutPool {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `cut` unless an equivalent one is already stored.
    pub fn insert(&mut self, cut: Cut) -> bool {
        if self.seen.insert(CutKey::of(&cut)) {
            self.cuts.push(cut);
            true
        } else {
            false
        }
    }

    pub fn cuts(&self) -> &[Cut] {
        &self.cuts
    }

    pub fn len(&self) -> usize {
        self.cuts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cuts.is_empty()
    }
}
