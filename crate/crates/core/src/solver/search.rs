use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use super::{check_candidate, CutCounts, Event, IncumbentSource, Mode, SolverConfig};
use crate::cuts::{best_mir_cut, separate_row, strengthen_cut, support_of, Cut, CutPool, INT_TOL, VIOLATION_TOL};
use crate::instance::Instance;
use crate::lp::{DualSimplex, LpModel, LpRow, LpSolution, LpStatus};

#[derive(Debug, Clone)]
struct Node {
    id: usize,
    bound: f64,
    depth: usize,
    fixings: Vec<(usize, bool)>,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Node {}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Node {
    // BinaryHeap is a max-heap: the best node has the lowest bound, then the lowest id.
    fn cmp(&self, other: &Self) -> Ordering {
        other.bound.total_cmp(&self.bound).then_with(|| other.id.cmp(&self.id))
    }
}

pub(crate) struct NodeInfo {
    pub lp_x: Option<Vec<f64>>,
    pub lp_bound: Option<f64>,
}

pub(crate) enum Step {
    Processed(NodeInfo),
    Exhausted,
    Limit,
}

pub(crate) fn lp_row(cut: &Cut) -> LpRow {
    let (coeffs, rhs) = cut.folded();
    LpRow { coeffs, rhs }
}

pub(crate) struct Search<'a, 's> {
    inst: &'a Instance,
    cfg: &'a SolverConfig,
    pub pool: CutPool,
    lp: DualSimplex,
    fixed: Vec<Option<bool>>,
    lo: Vec<f64>,
    hi: Vec<f64>,
    heap: BinaryHeap<Node>,
    next_id: usize,
    deadline: Option<Instant>,
    node_limit: Option<usize>,
    pub sink: &'s mut dyn FnMut(&Event),
    heuristic: bool,
    integral_costs: bool,
    pub incumbent: Option<(Vec<bool>, f64)>,
    pub counts: CutCounts,
    pub sep_time: Duration,
    pub nodes: usize,
    pub tol_pruned: bool,
    bound: f64,
}

impl<'a, 's> Search<'a, 's> {
    /// `fixed` holds fixings that apply to the whole search; the rows of
    /// `pool` are loaded into the LP.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        inst: &'a Instance,
        cfg: &'a SolverConfig,
        pool: CutPool,
        fixed: Vec<Option<bool>>,
        deadline: Option<Instant>,
        node_limit: Option<usize>,
        sink: &'s mut dyn FnMut(&Event),
        heuristic: bool,
    ) -> Self {
        let n = inst.n;
        let mut lp = DualSimplex::new(&LpModel::new(inst.cost.clone()));
        for cut in pool.cuts() {
            lp.add_row(lp_row(cut));
        }
        Search {
            inst,
            cfg,
            pool,
            lp,
            fixed,
            lo: vec![0.0; n],
            hi: vec![1.0; n],
            heap: BinaryHeap::new(),
            next_id: 0,
            deadline,
            node_limit,
            sink,
            heuristic,
            integral_costs: inst.has_integral_costs(),
            incumbent: None,
            counts: CutCounts::default(),
            sep_time: Duration::ZERO,
            nodes: 0,
            tol_pruned: false,
            bound: 0.0,
        }
    }

    pub fn push_root(&mut self) {
        self.push(0.0, 0, Vec::new());
    }

    fn push(&mut self, bound: f64, depth: usize, fixings: Vec<(usize, bool)>) {
        let id = self.next_id;
        self.next_id += 1;
        self.heap.push(Node { id, bound, depth, fixings });
    }

    pub fn add_cut(&mut self, cut: Cut) -> bool {
        if !self.pool.insert(cut.clone()) {
            return false;
        }
        self.lp.add_row(lp_row(&cut));
        self.counts.record(cut.origin);
        (self.sink)(&Event::CutAdded { cut: &cut, heuristic: self.heuristic });
        true
    }

    /// Offers a feasible point; it replaces the incumbent when strictly cheaper.
    pub fn offer_incumbent(&mut self, x: Vec<bool>, source: IncumbentSource) {
        let obj = self.inst.cost_of(&x);
        if self.incumbent.as_ref().is_none_or(|(_, inc)| obj < inc - 1e-9) {
            (self.sink)(&Event::Incumbent { objective: obj, source, heuristic: self.heuristic });
            self.incumbent = Some((x, obj));
        }
    }

    fn out_of_time(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d)
    }

    /// Lower bound over all open nodes, or the incumbent value when none remain.
    pub fn global_bound(&self) -> f64 {
        let open = match self.heap.peek() {
            Some(node) => node.bound,
            None => self.incumbent.as_ref().map_or(f64::INFINITY, |(_, o)| *o),
        };
        open.max(self.bound)
    }

    fn prunable(&mut self, bound: f64) -> bool {
        let Some((_, inc)) = self.incumbent.as_ref() else { return false };
        let inc = *inc;
        let effective = if self.integral_costs { (bound - 1e-6).ceil() } else { bound };
        if effective >= inc - 1e-9 * inc.abs().max(1.0) {
            return true;
        }
        if self.cfg.gap_tol > 0.0 && bound >= inc - self.cfg.gap_tol / 100.0 * inc.abs().max(1e-10) {
            self.tol_pruned = true;
            return true;
        }
        false
    }

    pub fn step(&mut self) -> Step {
        loop {
            if self.heap.is_empty() {
                return Step::Exhausted;
            }
            if self.out_of_time() || self.node_limit.is_some_and(|l| self.nodes >= l) {
                return Step::Limit;
            }
            let node = self.heap.pop().expect("heap is nonempty");
            if self.prunable(node.bound) {
                continue;
            }
            let info = self.process(&node);
            self.bound = self.global_bound();
            (self.sink)(&Event::NodeProcessed {
                node: node.id,
                depth: node.depth,
                lp_bound: info.lp_bound,
                global_bound: self.bound,
                open: self.heap.len(),
                heuristic: self.heuristic,
            });
            return Step::Processed(info);
        }
    }

    fn apply_bounds(&mut self, node: &Node) {
        let n = self.inst.n;
        let mut lo = vec![0.0; n];
        let mut hi = vec![1.0; n];
        for (j, f) in self.fixed.iter().enumerate() {
            if let Some(v) = f {
                let v = if *v { 1.0 } else { 0.0 };
                lo[j] = v;
                hi[j] = v;
            }
        }
        for &(j, v) in &node.fixings {
            let v = if v { 1.0 } else { 0.0 };
            lo[j] = v;
            hi[j] = v;
        }
        for j in 0..n {
            if lo[j] != self.lo[j] || hi[j] != self.hi[j] {
                self.lp.set_bounds(j, lo[j], hi[j]);
            }
        }
        self.lo = lo;
        self.hi = hi;
    }

    fn solve_lp(&mut self) -> LpSolution {
        let sol = self.lp.solve();
        if sol.status != LpStatus::IterationLimit {
            return sol;
        }
        log::warn!("LP iteration limit reached; rebuilding from the cut pool");
        let model = LpModel {
            objective: self.inst.cost.clone(),
            rows: self.pool.cuts().iter().map(lp_row).collect(),
            lower: self.lo.clone(),
            upper: self.hi.clone(),
        };
        self.lp = DualSimplex::new(&model);
        self.lp.solve()
    }

    fn free_var(&self) -> Option<usize> {
        (0..self.inst.n).find(|&j| self.lo[j] != self.hi[j])
    }

    fn branch(&mut self, node: &Node, j: usize, bound: f64) {
        for v in [true, false] {
            let mut fixings = node.fixings.clone();
            fixings.push((j, v));
            self.push(bound, node.depth + 1, fixings);
        }
    }

    fn process(&mut self, node: &Node) -> NodeInfo {
        self.nodes += 1;
        self.apply_bounds(node);
        let cap = if node.id == 0 {
            self.cfg.root_separation_rounds
        } else if self.cfg.mode == Mode::Bd {
            self.cfg.node_separation_rounds
        } else {
            0
        };
        let mut rounds = 0;
        let mut last_integral: Option<Vec<bool>> = None;
        loop {
            let sol = self.solve_lp();
            match sol.status {
                LpStatus::Optimal => {}
                LpStatus::Infeasible => return NodeInfo { lp_x: None, lp_bound: None },
                LpStatus::IterationLimit => {
                    // No trustworthy point: split on a free variable instead.
                    match self.free_var() {
                        Some(j) => self.branch(node, j, node.bound),
                        None => {
                            let x: Vec<bool> = self.lo.iter().map(|&v| v > 0.5).collect();
                            if check_candidate(self.inst, &x).is_empty() {
                                self.offer_incumbent(x, IncumbentSource::Tree);
                            }
                        }
                    }
                    return NodeInfo { lp_x: None, lp_bound: None };
                }
            }
            let bound = sol.objective.max(node.bound);
            let info = NodeInfo { lp_x: Some(sol.x.clone()), lp_bound: Some(bound) };
            if self.prunable(bound) {
                return info;
            }
            match most_fractional(&sol.x) {
                None => {
                    let x: Vec<bool> = sol.x.iter().map(|&v| v > 0.5).collect();
                    let cuts = check_candidate(self.inst, &x);
                    if cuts.is_empty() {
                        self.offer_incumbent(x, IncumbentSource::Tree);
                        return info;
                    }
                    let mut added = 0;
                    if last_integral.as_ref() != Some(&x) {
                        for cut in cuts {
                            added += usize::from(self.add_cut(cut));
                        }
                    }
                    last_integral = Some(x);
                    if added == 0 {
                        // The LP keeps returning a point its rows cannot cut off
                        // within tolerance: split instead.
                        if let Some(j) = self.free_var() {
                            self.branch(node, j, bound);
                        }
                        return info;
                    }
                }
                Some(j) => {
                    if rounds < cap && !self.out_of_time() {
                        rounds += 1;
                        if self.separate(&sol.x) > 0 {
                            continue;
                        }
                    }
                    self.branch(node, j, bound);
                    return info;
                }
            }
        }
    }

    /// Separates every row at the fractional point `x`; returns the number
    /// of new cuts.
    fn separate(&mut self, x: &[f64]) -> usize {
        let started = Instant::now();
        let support = support_of(x);
        let use_mir = self.cfg.use_mir;
        let found: Vec<(Cut, Option<Cut>)> = self
            .inst
            .blocks
            .par_iter()
            .enumerate()
            .filter_map(|(i, block)| {
                let sep = separate_row(block, i, x, &support, VIOLATION_TOL)?;
                let mir = if use_mir { best_mir_cut(&sep.base, x, VIOLATION_TOL) } else { None };
                Some((strengthen_cut(&sep.base), mir))
            })
            .collect();
        self.sep_time += started.elapsed();
        let mut added = 0;
        for (cut, mir) in found {
            added += usize::from(self.add_cut(cut));
            if let Some(m) = mir {
                added += usize::from(self.add_cut(m));
            }
        }
        added
    }

    /// Runs the tree to completion or to a limit; true when a limit stopped it.
    pub fn run(&mut self) -> bool {
        loop {
            match self.step() {
                Step::Processed(_) => {}
                Step::Exhausted => return false,
                Step::Limit => return true,
            }
        }
    }
}

/// The most fractional coordinate (ties to the lowest index), or `None`
/// when `x` is integral within [`INT_TOL`].
fn most_fractional(x: &[f64]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (j, &v) in x.iter().enumerate() {
        let f = v.min(1.0 - v);
        if f > INT_TOL && best.is_none_or(|(_, bf)| f > bf) {
            best = Some((j, f));
        }
    }
    best.map(|(j, _)| j)
}
