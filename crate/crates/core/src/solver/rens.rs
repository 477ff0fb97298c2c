//! Relaxation enforced neighbourhood search: fix the coordinates of an LP
//! point that are within `theta` of 0 or 1 and search the rest with a
//! bounded sub-tree.

use std::time::{Duration, Instant};

use serde::Serialize;

use super::search::Search;
use super::{check_candidate, Event, SolverConfig};
use crate::cuts::CutPool;
use crate::instance::Instance;

/// Coordinates fixed to zero (`x_lp <= theta`) and to one (`x_lp >= 1 - theta`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RensFixing {
    pub zeros: Vec<usize>,
    pub ones: Vec<usize>,
}

impl RensFixing {
    pub fn new(x_lp: &[f64], theta: f64) -> Self {
        let zeros = (0..x_lp.len()).filter(|&j| x_lp[j] <= theta).collect();
        let ones = (0..x_lp.len()).filter(|&j| x_lp[j] >= 1.0 - theta).collect();
        RensFixing { zeros, ones }
    }

    pub fn free(&self, n: usize) -> Vec<usize> {
        let mut fixed = vec![false; n];
        for &j in self.zeros.iter().chain(&self.ones) {
            fixed[j] = true;
        }
        (0..n).filter(|&j| !fixed[j]).collect()
    }

    fn as_bounds(&self, n: usize) -> Vec<Option<bool>> {
        let mut f = vec![None; n];
        for &j in &self.zeros {
            f[j] = Some(false);
        }
        for &j in &self.ones {
            f[j] = Some(true);
        }
        f
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RensOutcome {
    pub objective: f64,
    /// Percent above the reference optimum, when one is known.
    pub primal_gap: Option<f64>,
    /// The sub-search found nothing and the point is the rounded-up LP point.
    pub used_fallback: bool,
    /// The candidate failed the feasibility check and was greedily repaired.
    pub repaired: bool,
    pub free_vars: usize,
    pub nodes: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RensResult {
    pub x: Vec<bool>,
    pub outcome: RensOutcome,
}

/// RENS around `x_lp` with the cuts of `pool`. Always returns a feasible
/// point for instances that pass the infeasibility screen.
pub fn rens(inst: &Instance, x_lp: &[f64], pool: &CutPool, cfg: &SolverConfig) -> RensResult {
    let deadline = cfg.time_limit_s.map(|t| Instant::now() + Duration::from_secs_f64(t));
    run_rens(inst, x_lp, pool, cfg, deadline, &mut |_| {})
}

pub(crate) fn run_rens(
    inst: &Instance,
    x_lp: &[f64],
    pool: &CutPool,
    cfg: &SolverConfig,
    deadline: Option<Instant>,
    sink: &mut dyn FnMut(&Event),
) -> RensResult {
    let n = inst.n;
    let fixing = RensFixing::new(x_lp, cfg.rens_theta);
    let mut found = None;
    let mut nodes = 0;
    if cfg.rens_node_budget > 0 {
        let sub_cfg = SolverConfig { use_rens: false, ..cfg.clone() };
        let mut sub = Search::new(
            inst,
            &sub_cfg,
            pool.clone(),
            fixing.as_bounds(n),
            deadline,
            Some(cfg.rens_node_budget),
            sink,
            true,
        );
        sub.push_root();
        sub.run();
        nodes = sub.nodes;
        found = sub.incumbent.take().map(|(x, _)| x);
    }
    let used_fallback = found.is_none();
    let x = found.unwrap_or_else(|| x_lp.iter().map(|&v| v > 1e-9).collect());
    let (x, repaired) = if check_candidate(inst, &x).is_empty() { (x, false) } else { (greedy_repair(inst, x), true) };
    let outcome = RensOutcome {
        objective: inst.cost_of(&x),
        primal_gap: None,
        used_fallback,
        repaired,
        free_vars: fixing.free(n).len(),
        nodes,
    };
    RensResult { x, outcome }
}

/// Adds columns until every row meets its reliability level, each time the
/// column with the largest capped probability gain per unit cost (ties to the
/// lowest index). Terminates with a feasible point whenever the all-ones
/// point is feasible.
pub fn greedy_repair(inst: &Instance, mut x: Vec<bool>) -> Vec<bool> {
    loop {
        let deficits: Vec<(usize, f64)> = inst
            .blocks
            .iter()
            .enumerate()
            .filter_map(|(i, b)| {
                let covered = b.covered_probability(&x);
                (!b.meets_reliability(covered)).then(|| (i, 1.0 - b.epsilon() - covered))
            })
            .collect();
        if deficits.is_empty() {
            return x;
        }
        let mut gain = vec![0.0; inst.n];
        for &(i, deficit) in &deficits {
            let block = &inst.blocks[i];
            let mut row_gain = vec![0.0; inst.n];
            for (support, &p) in block.scenarios().iter().zip(block.prob()) {
                if !support.iter().any(|&j| x[j]) {
                    for &j in support {
                        row_gain[j] += p;
                    }
                }
            }
            for (g, r) in gain.iter_mut().zip(row_gain) {
                *g += r.min(deficit);
            }
        }
        let mut best: Option<(usize, f64)> = None;
        for j in (0..inst.n).filter(|&j| !x[j] && gain[j] > 0.0) {
            let score = if inst.cost[j] > 0.0 { gain[j] / inst.cost[j] } else { f64::INFINITY };
            if best.is_none_or(|(_, s)| score > s) {
                best = Some((j, score));
            }
        }
        match best {
            Some((j, _)) => x[j] = true,
            None => return x,
        }
    }
}
