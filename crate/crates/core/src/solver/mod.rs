//! Branch-and-Benders-cut search for the PSCP master problem.
//!
//! The master keeps only `x` and a pool of feasibility cuts. Every node LP
//! point that is integral is checked against all rows before it may become
//! the incumbent; fractional points are separated at every node (`Mode::Bd`)
//! or only at the root (`Mode::Rbd`).

mod rens;
mod search;

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::cuts::{
    cut_base, eval_coverage, infeasibility_screen, initial_cut, strengthen_cut, Cut, CutOrigin,
};
use crate::error::{Error, Result};
use crate::instance::Instance;

pub use rens::{greedy_repair, rens, RensFixing, RensOutcome, RensResult};
use search::{Search, Step};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Separate fractional points at every node.
    Bd,
    /// Separate fractional points at the root only.
    Rbd,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Bd => "bd",
            Mode::Rbd => "rbd",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolverConfig {
    pub mode: Mode,
    pub use_initial_cuts: bool,
    pub use_mir: bool,
    pub use_rens: bool,
    pub rens_theta: f64,
    pub time_limit_s: Option<f64>,
    pub node_limit: Option<usize>,
    /// Relative gap in percent at which the search may stop.
    pub gap_tol: f64,
    pub root_separation_rounds: usize,
    pub node_separation_rounds: usize,
    pub rens_node_budget: usize,
    /// Echoed into reports; the search itself is deterministic.
    pub seed: u64,
    /// Known optimum used to report the RENS primal gap.
    pub reference_objective: Option<f64>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            mode: Mode::Bd,
            use_initial_cuts: true,
            use_mir: true,
            use_rens: true,
            rens_theta: 0.01,
            time_limit_s: None,
            node_limit: None,
            gap_tol: 0.0,
            root_separation_rounds: 10,
            node_separation_rounds: 1,
            rens_node_budget: 1000,
            seed: 0,
            reference_objective: None,
        }
    }
}

impl SolverConfig {
    pub fn with_mode(mode: Mode) -> Self {
        SolverConfig { mode, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidConfig(msg.to_string()));
        if !(self.rens_theta > 0.0 && self.rens_theta < 0.5) {
            return bad("theta must lie in (0, 0.5)");
        }
        if let Some(t) = self.time_limit_s {
            if !(t > 0.0) {
                return bad("time limit must be positive");
            }
        }
        if self.node_limit == Some(0) {
            return bad("node limit must be positive");
        }
        if !(self.gap_tol >= 0.0) {
            return bad("gap tolerance must be nonnegative");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SolveStatus {
    Optimal,
    /// The tree was closed using a positive gap tolerance.
    Feasible,
    Infeasible,
    Limit,
}

impl SolveStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SolveStatus::Optimal => "optimal",
            SolveStatus::Feasible => "feasible",
            SolveStatus::Infeasible => "infeasible",
            SolveStatus::Limit => "limit",
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct CutCounts {
    pub initial: usize,
    pub benders: usize,
    pub mir: usize,
}

impl CutCounts {
    pub fn total(&self) -> usize {
        self.initial + self.benders + self.mir
    }

    pub(crate) fn record(&mut self, origin: CutOrigin) {
        match origin {
            CutOrigin::Initial => self.initial += 1,
            CutOrigin::Benders => self.benders += 1,
            CutOrigin::Mir => self.mir += 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveReport {
    pub status: SolveStatus,
    pub x: Option<Vec<bool>>,
    pub objective: Option<f64>,
    pub bound: f64,
    /// `100 (incumbent - bound) / max(|incumbent|, 1e-10)`.
    pub end_gap: Option<f64>,
    pub root_bound: Option<f64>,
    /// `100 (objective - root_bound) / max(|objective|, 1e-10)`, measured
    /// against the final incumbent.
    pub root_gap: Option<f64>,
    pub nodes: usize,
    pub cuts: CutCounts,
    pub rens: Option<RensOutcome>,
    /// Rows flagged by the infeasibility screen.
    pub infeasible_rows: Vec<usize>,
    pub wall_time: f64,
    pub separation_time: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum IncumbentSource {
    /// The all-ones point, feasible whenever the screen passes.
    Trivial,
    Tree,
    Rens,
}

/// One entry of the run log.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum Event<'a> {
    CutAdded { cut: &'a Cut, heuristic: bool },
    Incumbent { objective: f64, source: IncumbentSource, heuristic: bool },
    NodeProcessed { node: usize, depth: usize, lp_bound: Option<f64>, global_bound: f64, open: usize, heuristic: bool },
    RootFinished { bound: Option<f64>, cuts: usize },
}

/// Gap in percent between an upper and a lower value.
pub fn gap_percent(upper: f64, lower: f64) -> f64 {
    100.0 * (upper - lower) / upper.abs().max(1e-10)
}

/// Lazy check of an integer point: one violated (strengthened) feasibility
/// cut for every row the point fails to cover with enough probability.
/// Empty exactly when `x` is feasible.
pub fn check_candidate(inst: &Instance, x: &[bool]) -> Vec<Cut> {
    let xf: Vec<f64> = x.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect();
    let support: Vec<usize> = (0..x.len()).filter(|&j| x[j]).collect();
    inst.blocks
        .iter()
        .enumerate()
        .filter(|(_, block)| !block.meets_reliability(block.covered_probability(x)))
        .filter_map(|(i, block)| {
            let coverage = eval_coverage(block, &xf, &support);
            let base = cut_base(block, i, inst.n, &coverage)?;
            Some(strengthen_cut(&base))
        })
        .collect()
}

pub fn solve(inst: &Instance, cfg: &SolverConfig) -> Result<SolveReport> {
    solve_with_log(inst, cfg, &mut |_| {})
}

/// [`solve`], reporting every event to `sink`.
pub fn solve_with_log(inst: &Instance, cfg: &SolverConfig, sink: &mut dyn FnMut(&Event)) -> Result<SolveReport> {
    cfg.validate()?;
    let violations = inst.validate();
    if let Some(v) = violations.first() {
        return Err(Error::InvalidInstance(format!("{v} ({} violations)", violations.len())));
    }
    let start = Instant::now();
    let deadline = cfg.time_limit_s.map(|t| start + Duration::from_secs_f64(t));

    let flagged = infeasibility_screen(inst);
    if !flagged.is_empty() {
        return Ok(SolveReport {
            status: SolveStatus::Infeasible,
            x: None,
            objective: None,
            bound: f64::INFINITY,
            end_gap: None,
            root_bound: None,
            root_gap: None,
            nodes: 0,
            cuts: CutCounts::default(),
            rens: None,
            infeasible_rows: flagged,
            wall_time: start.elapsed().as_secs_f64(),
            separation_time: 0.0,
        });
    }

    let n = inst.n;
    let mut search = Search::new(inst, cfg, Default::default(), vec![None; n], deadline, cfg.node_limit, sink, false);
    search.offer_incumbent(vec![true; n], IncumbentSource::Trivial);
    if cfg.use_initial_cuts {
        for (i, block) in inst.blocks.iter().enumerate() {
            search.add_cut(initial_cut(block, i, n));
        }
    }
    search.push_root();

    let mut root_bound = None;
    let mut rens_outcome = None;
    let mut limit = false;
    match search.step() {
        Step::Processed(info) => {
            root_bound = info.lp_bound;
            let cuts = search.pool.len();
            (search.sink)(&Event::RootFinished { bound: root_bound, cuts });
            if let (true, Some(x_lp)) = (cfg.use_rens, info.lp_x) {
                let res = rens::run_rens(inst, &x_lp, &search.pool, cfg, deadline, &mut *search.sink);
                search.offer_incumbent(res.x, IncumbentSource::Rens);
                rens_outcome = Some(res.outcome);
            }
        }
        Step::Limit => limit = true,
        Step::Exhausted => {}
    }
    if !limit {
        loop {
            match search.step() {
                Step::Processed(_) => {}
                Step::Limit => {
                    limit = true;
                    break;
                }
                Step::Exhausted => break,
            }
        }
    }

    let bound = search.global_bound();
    let (x, objective) = match search.incumbent.take() {
        Some((x, obj)) => (Some(x), Some(obj)),
        None => (None, None),
    };
    let status = match (limit, objective) {
        (true, _) => SolveStatus::Limit,
        (false, None) => SolveStatus::Infeasible,
        (false, Some(_)) if search.tol_pruned => SolveStatus::Feasible,
        (false, Some(_)) => SolveStatus::Optimal,
    };
    let bound = match objective {
        Some(obj) if status == SolveStatus::Optimal => obj,
        Some(obj) => bound.min(obj),
        None => bound,
    };
    if let Some(r) = rens_outcome.as_mut() {
        let reference = cfg.reference_objective.or(if status == SolveStatus::Optimal { objective } else { None });
        r.primal_gap = reference.map(|o| 100.0 * (r.objective - o) / o.abs().max(1e-10));
    }
    Ok(SolveReport {
        status,
        end_gap: objective.map(|o| gap_percent(o, bound)),
        root_gap: match (objective, root_bound) {
            (Some(o), Some(r)) => Some(gap_percent(o, r)),
            _ => None,
        },
        x,
        objective,
        bound,
        root_bound,
        nodes: search.nodes,
        cuts: search.counts,
        rens: rens_outcome,
        infeasible_rows: Vec::new(),
        wall_time: start.elapsed().as_secs_f64(),
        separation_time: search.sep_time.as_secs_f64(),
    })
}
