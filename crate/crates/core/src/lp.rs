//! LP relaxations of the Benders master problem:
//! `min c^T x` subject to `>=` rows and bounds `0 <= lo <= x <= hi <= 1`.
//!
//! The solver is a bounded-variable dual simplex on a dense tableau. Every
//! structural variable has two finite bounds, so any basis can be made dual
//! feasible by parking each nonbasic variable at the bound matching the sign
//! of its reduced cost. That gives a valid starting point for a cold start
//! (all slacks basic), after appending rows (the new slack enters the basis)
//! and after bound changes from branching, without a phase one.
//!
//! Row `k` is stored as `-a_k x + s_k = -b_k` with slack `s_k >= 0`, so the
//! initial basis is the slacks with tableau `[-A | I]`.

use crate::error::{Error, Result};

/// Primal feasibility tolerance.
pub const FEAS_TOL: f64 = 1e-7;
/// Smallest pivot magnitude accepted in the ratio test.
pub const PIVOT_TOL: f64 = 1e-9;
const DUAL_TOL: f64 = 1e-9;
/// Iterations without dual objective progress before switching to Bland's rule.
const STALL_LIMIT: usize = 50;
const REFACTOR_EVERY: usize = 2000;
/// Basic values are updated incrementally and recomputed this often.
const RECOMPUTE_EVERY: usize = 50;
const NONE: usize = usize::MAX;

/// `sum coeffs x >= rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct LpRow {
    pub coeffs: Vec<(usize, f64)>,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpModel {
    pub objective: Vec<f64>,
    pub rows: Vec<LpRow>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl LpModel {
    /// Model with no rows and bounds `[0, 1]`.
    pub fn new(objective: Vec<f64>) -> Self {
        let n = objective.len();
        LpModel { objective, rows: Vec::new(), lower: vec![0.0; n], upper: vec![1.0; n] }
    }

    pub fn n(&self) -> usize {
        self.objective.len()
    }

    pub fn add_rows(mut self, rows: impl IntoIterator<Item = LpRow>) -> Self {
        self.rows.extend(rows);
        self
    }

    /// Fixes `x_j` to 0 or 1.
    pub fn fix_var(mut self, j: usize, value: f64) -> Result<Self> {
        if value != 0.0 && value != 1.0 {
            return Err(Error::InvalidFixing { var: j, value });
        }
        self.lower[j] = value;
        self.upper[j] = value;
        Ok(self)
    }

    pub fn is_well_formed(&self) -> bool {
        let n = self.n();
        self.lower.len() == n
            && self.upper.len() == n
            && self.lower.iter().zip(&self.upper).all(|(l, u)| 0.0 <= *l && l <= u && *u <= 1.0)
            && self.rows.iter().all(|r| r.coeffs.iter().all(|&(j, _)| j < n))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    IterationLimit,
}

/// Warm-start token: the basic variables and the bound each nonbasic
/// variable sits at. Variables `0..n` are structural, `n + k` is the slack
/// of the `k`-th nonempty row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Basis {
    basic: Vec<usize>,
    at_upper: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    pub x: Vec<f64>,
    pub objective: f64,
    pub basis: Basis,
    /// On infeasibility: the model row that could not be repaired and the
    /// multipliers of the row combination proving it, as `(model row, y)`.
    pub certificate: Option<(usize, Vec<(usize, f64)>)>,
    pub iterations: usize,
}

/// Solves `model` from scratch, or from `warm` when given.
pub fn lp_solve(model: &LpModel, warm: Option<&Basis>) -> LpSolution {
    debug_assert!(model.is_well_formed());
    let mut lp = DualSimplex::new(model);
    if let Some(b) = warm {
        lp.install_basis(b);
    }
    lp.solve()
}

/// Persistent dual simplex state. Rows can be appended and bounds changed
/// between calls to [`DualSimplex::solve`]; each call starts from the last
/// basis.
///
/// The tableau is kept in condensed form: one row per basic variable and one
/// column per nonbasic variable (always exactly `n` of them), so row `i`
/// reads `basic[i] = rhs[i] - sum_k tab[i][k] * value(nonbasic[k])`.
#[derive(Debug, Clone)]
pub struct DualSimplex {
    n: usize,
    cost: Vec<f64>,
    rows: Vec<LpRow>,
    row_ids: Vec<usize>,
    added: usize,
    empty_infeasible: Option<usize>,
    lo: Vec<f64>,
    hi: Vec<f64>,
    at_upper: Vec<bool>,
    /// Row-major, `rows x n`.
    tab: Vec<f64>,
    rhs: Vec<f64>,
    /// Reduced costs of the nonbasic columns.
    dj: Vec<f64>,
    basic: Vec<usize>,
    nonbasic: Vec<usize>,
    row_of: Vec<usize>,
    col_of: Vec<usize>,
    pivots_since_refactor: usize,
    iteration_limit: usize,
}

impl DualSimplex {
    pub fn new(model: &LpModel) -> Self {
        let n = model.n();
        let mut lp = DualSimplex {
            n,
            cost: model.objective.clone(),
            rows: Vec::new(),
            row_ids: Vec::new(),
            added: 0,
            empty_infeasible: None,
            lo: model.lower.clone(),
            hi: model.upper.clone(),
            at_upper: vec![false; n],
            tab: Vec::new(),
            rhs: Vec::new(),
            dj: model.objective.clone(),
            basic: Vec::new(),
            nonbasic: (0..n).collect(),
            row_of: vec![NONE; n],
            col_of: (0..n).collect(),
            pivots_since_refactor: 0,
            iteration_limit: 100_000,
        };
        for row in &model.rows {
            lp.add_row(row.clone());
        }
        lp.restore_dual_feasibility();
        lp
    }

    pub fn set_iteration_limit(&mut self, limit: usize) {
        self.iteration_limit = limit;
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of rows stored in the tableau (empty rows are not stored).
    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn bounds(&self, j: usize) -> (f64, f64) {
        (self.lo[j], self.hi[j])
    }

    /// Appends `row` with its slack basic; the basis stays dual feasible.
    pub fn add_row(&mut self, row: LpRow) {
        let id = self.added;
        self.added += 1;
        let coeffs: Vec<(usize, f64)> = row.coeffs.iter().copied().filter(|&(_, a)| a != 0.0).collect();
        if coeffs.is_empty() {
            if row.rhs > FEAS_TOL && self.empty_infeasible.is_none() {
                self.empty_infeasible = Some(id);
            }
            return;
        }
        let row = LpRow { coeffs, rhs: row.rhs };

        let n = self.n;
        let mut t = vec![0.0; n];
        let mut r = -row.rhs;
        for &(j, a) in &row.coeffs {
            let c = self.col_of[j];
            if c != NONE {
                t[c] -= a;
            } else {
                // substitute the basic variable's row
                let p = self.row_of[j];
                r += a * self.rhs[p];
                for (tk, &src) in t.iter_mut().zip(&self.tab[p * n..(p + 1) * n]) {
                    *tk += a * src;
                }
            }
        }
        let var = n + self.rows.len();
        self.tab.extend_from_slice(&t);
        self.rhs.push(r);
        self.lo.push(0.0);
        self.hi.push(f64::INFINITY);
        self.at_upper.push(false);
        self.row_of.push(self.basic.len());
        self.col_of.push(NONE);
        self.basic.push(var);
        self.rows.push(row);
        self.row_ids.push(id);
    }

    /// Changes the bounds of structural variable `j`.
    pub fn set_bounds(&mut self, j: usize, lo: f64, hi: f64) {
        debug_assert!(j < self.n && lo <= hi);
        self.lo[j] = lo;
        self.hi[j] = hi;
        if self.col_of[j] != NONE {
            self.park(j);
        }
    }

    /// Puts nonbasic `k` on the bound its reduced cost prefers.
    fn park(&mut self, k: usize) {
        let d = self.dj[self.col_of[k]];
        if self.lo[k] == self.hi[k] || k >= self.n {
            self.at_upper[k] = false;
        } else if d < -DUAL_TOL {
            self.at_upper[k] = true;
        } else if d > DUAL_TOL {
            self.at_upper[k] = false;
        }
    }

    fn restore_dual_feasibility(&mut self) {
        for c in 0..self.n {
            let k = self.nonbasic[c];
            if k < self.n {
                self.park(k);
            }
        }
    }

    fn value_of_nonbasic(&self, k: usize) -> f64 {
        if self.at_upper[k] {
            self.hi[k]
        } else {
            self.lo[k]
        }
    }

    fn basic_values(&self) -> Vec<f64> {
        let n = self.n;
        let shifts: Vec<(usize, f64)> = (0..n)
            .map(|c| (c, self.value_of_nonbasic(self.nonbasic[c])))
            .filter(|&(_, v)| v != 0.0)
            .collect();
        self.rhs
            .iter()
            .enumerate()
            .map(|(i, &r)| {
                let t = &self.tab[i * n..(i + 1) * n];
                r - shifts.iter().map(|&(c, v)| t[c] * v).sum::<f64>()
            })
            .collect()
    }

    fn primal(&self, xb: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|j| match self.row_of[j] {
                NONE => self.value_of_nonbasic(j),
                p => xb[p].clamp(self.lo[j], self.hi[j]),
            })
            .collect()
    }

    fn objective_of(&self, x: &[f64]) -> f64 {
        self.cost.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    fn rows_satisfied(&self, x: &[f64]) -> bool {
        self.rows.iter().all(|row| {
            let lhs: f64 = row.coeffs.iter().map(|&(j, a)| a * x[j]).sum();
            let scale = row.coeffs.iter().fold(1.0f64, |m, &(_, a)| m.max(a.abs()));
            lhs >= row.rhs - FEAS_TOL * scale
        })
    }

    fn choose_leaving(&self, xb: &[f64], bland: bool) -> Option<(usize, bool)> {
        let mut best: Option<(usize, bool, f64)> = None;
        for (r, &v) in xb.iter().enumerate() {
            let k = self.basic[r];
            let (below, infeas) = if v < self.lo[k] - FEAS_TOL {
                (true, self.lo[k] - v)
            } else if v > self.hi[k] + FEAS_TOL {
                (false, v - self.hi[k])
            } else {
                continue;
            };
            let better = match best {
                None => true,
                Some((rb, _, ib)) => {
                    if bland {
                        k < self.basic[rb]
                    } else {
                        infeas > ib
                    }
                }
            };
            if better {
                best = Some((r, below, infeas));
            }
        }
        best.map(|(r, below, _)| (r, below))
    }

    /// Entering column for leaving row `r`.
    fn choose_entering(&self, r: usize, below: bool, bland: bool) -> Option<usize> {
        let n = self.n;
        let row = &self.tab[r * n..(r + 1) * n];
        // (column, |alpha|, reduced cost toward the bound)
        let mut cands: Vec<(usize, f64, f64)> = Vec::new();
        for (c, &alpha) in row.iter().enumerate() {
            let k = self.nonbasic[c];
            if self.lo[k] == self.hi[k] || alpha.abs() <= PIVOT_TOL {
                continue;
            }
            let up = self.at_upper[k];
            let ok = if below { (!up && alpha < 0.0) || (up && alpha > 0.0) } else { (!up && alpha > 0.0) || (up && alpha < 0.0) };
            if !ok {
                continue;
            }
            let d = if up { (-self.dj[c]).max(0.0) } else { self.dj[c].max(0.0) };
            cands.push((c, alpha.abs(), d));
        }
        if cands.is_empty() {
            return None;
        }
        if bland {
            let min = cands.iter().map(|&(_, a, d)| d / a).fold(f64::INFINITY, f64::min);
            return cands
                .iter()
                .filter(|&&(_, a, d)| d / a <= min + 1e-12)
                .min_by_key(|&&(c, _, _)| self.nonbasic[c])
                .map(|&(c, _, _)| c);
        }
        // Harris two-pass ratio test
        let bound = cands.iter().map(|&(_, a, d)| (d + DUAL_TOL) / a).fold(f64::INFINITY, f64::min);
        let mut pick: Option<(usize, f64)> = None;
        for &(c, a, d) in &cands {
            if d / a <= bound && pick.is_none_or(|(_, pa)| a > pa) {
                pick = Some((c, a));
            }
        }
        pick.map(|(c, _)| c)
    }

    /// Exchanges the basic variable of row `r` with the nonbasic variable of
    /// column `q`; returns the old entries of column `q`.
    fn pivot(&mut self, r: usize, q: usize) -> Vec<f64> {
        let n = self.n;
        let old_col: Vec<f64> = (0..self.basic.len()).map(|i| self.tab[i * n + q]).collect();
        let piv = self.tab[r * n + q];
        let prow: Vec<f64> = {
            let row = &mut self.tab[r * n..(r + 1) * n];
            for v in row.iter_mut() {
                *v /= piv;
            }
            row[q] = 1.0 / piv;
            row.to_vec()
        };
        self.rhs[r] /= piv;
        let rr = self.rhs[r];
        let nz: Vec<usize> = (0..n).filter(|&k| prow[k] != 0.0).collect();
        for (i, t) in self.tab.chunks_exact_mut(n).enumerate() {
            if i == r {
                continue;
            }
            let f = t[q];
            if f != 0.0 {
                t[q] = 0.0;
                for &k in &nz {
                    t[k] -= f * prow[k];
                }
                self.rhs[i] -= f * rr;
            }
        }
        let f = self.dj[q];
        if f != 0.0 {
            self.dj[q] = 0.0;
            for &k in &nz {
                self.dj[k] -= f * prow[k];
            }
        }
        let entering = self.nonbasic[q];
        let leaving = self.basic[r];
        self.basic[r] = entering;
        self.nonbasic[q] = leaving;
        self.row_of[entering] = r;
        self.col_of[entering] = NONE;
        self.row_of[leaving] = NONE;
        self.col_of[leaving] = q;
        self.pivots_since_refactor += 1;
        old_col
    }

    /// Rebuilds the slack-basis tableau from the stored rows.
    fn reset(&mut self) {
        let n = self.n;
        let m = self.rows.len();
        self.tab = vec![0.0; m * n];
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, a) in &row.coeffs {
                self.tab[i * n + j] -= a;
            }
        }
        self.rhs = self.rows.iter().map(|r| -r.rhs).collect();
        self.dj = self.cost.clone();
        self.basic = (n..n + m).collect();
        self.nonbasic = (0..n).collect();
        self.row_of = vec![NONE; n];
        self.row_of.extend(0..m);
        self.col_of = (0..n).collect();
        self.col_of.extend(std::iter::repeat_n(NONE, m));
        self.at_upper.iter_mut().skip(n).for_each(|u| *u = false);
        self.pivots_since_refactor = 0;
    }

    /// Refactors onto `target` (basic variable list), falling back to the
    /// slack basis when the target is singular or not dual feasible.
    fn refactor_onto(&mut self, target: &[usize], at_upper: &[bool]) {
        self.reset();
        let n = self.n;
        let mut in_target = vec![false; self.lo.len()];
        for &k in target {
            in_target[k] = true;
        }
        for &k in target.iter().filter(|&&k| k < n) {
            let c = self.col_of[k];
            let mut best: Option<(usize, f64)> = None;
            for p in 0..self.basic.len() {
                let b = self.basic[p];
                let a = self.tab[p * n + c].abs();
                if b >= n && !in_target[b] && a > 1e-7 && best.is_none_or(|(_, ba)| a > ba) {
                    best = Some((p, a));
                }
            }
            if let Some((p, _)) = best {
                self.pivot(p, c);
            }
        }
        for k in 0..n.min(at_upper.len()) {
            if self.col_of[k] != NONE {
                self.at_upper[k] = at_upper[k];
            }
        }
        let slack_ok = (0..n).all(|c| self.nonbasic[c] < n || self.dj[c] >= -1e-7);
        if !slack_ok {
            self.reset();
        }
        self.pivots_since_refactor = 0;
        self.restore_dual_feasibility();
    }

    fn refactor(&mut self) {
        let target = self.basic.clone();
        let at_upper = self.at_upper.clone();
        self.refactor_onto(&target, &at_upper);
    }

    /// Loads a warm-start basis. Slacks of rows added after the token was
    /// taken are kept basic.
    pub fn install_basis(&mut self, basis: &Basis) {
        let nvars = self.n + self.rows.len();
        if basis.basic.iter().any(|&k| k >= nvars) {
            return;
        }
        let mut target = basis.basic.clone();
        let known = basis.at_upper.len().saturating_sub(self.n);
        target.extend((known..self.rows.len()).map(|i| self.n + i));
        if target.len() != self.rows.len() {
            return;
        }
        self.refactor_onto(&target, &basis.at_upper);
    }

    pub fn basis(&self) -> Basis {
        Basis { basic: self.basic.clone(), at_upper: self.at_upper.clone() }
    }

    fn certificate(&self, r: usize) -> Vec<(usize, f64)> {
        let n = self.n;
        let mut y: Vec<(usize, f64)> = (0..n)
            .filter(|&c| self.nonbasic[c] >= n && self.tab[r * n + c] != 0.0)
            .map(|c| (self.row_ids[self.nonbasic[c] - n], self.tab[r * n + c]))
            .collect();
        if self.basic[r] >= n {
            y.push((self.row_ids[self.basic[r] - n], 1.0));
        }
        y.sort_by_key(|&(i, _)| i);
        y
    }

    pub fn solve(&mut self) -> LpSolution {
        if let Some(id) = self.empty_infeasible {
            return self.finish(LpStatus::Infeasible, Some((id, vec![(id, 1.0)])), 0);
        }
        self.restore_dual_feasibility();
        let mut iterations = 0;
        let mut bland = false;
        let mut stall = 0;
        let mut last_obj = f64::NEG_INFINITY;
        let mut repairs = 0;
        let mut xb = Vec::new();
        loop {
            if iterations >= self.iteration_limit {
                return self.finish(LpStatus::IterationLimit, None, iterations);
            }
            if self.pivots_since_refactor >= REFACTOR_EVERY {
                self.refactor();
                xb = self.basic_values();
            }
            if iterations % RECOMPUTE_EVERY == 0 {
                xb = self.basic_values();
            }
            if iterations > 0 {
                let obj = self.objective_of(&self.primal(&xb));
                if obj <= last_obj + 1e-12 {
                    stall += 1;
                    if stall > STALL_LIMIT {
                        bland = true;
                    }
                } else {
                    stall = 0;
                }
                last_obj = last_obj.max(obj);
            }
            let Some((r, below)) = self.choose_leaving(&xb, bland) else {
                let x = self.primal(&xb);
                if self.rows_satisfied(&x) || repairs >= 2 {
                    if repairs >= 2 && !self.rows_satisfied(&x) {
                        log::warn!("dual simplex: residuals above tolerance after refactoring");
                    }
                    return self.finish(LpStatus::Optimal, None, iterations);
                }
                repairs += 1;
                self.refactor();
                xb = self.basic_values();
                continue;
            };
            let Some(q) = self.choose_entering(r, below, bland) else {
                if self.pivots_since_refactor > 0 && repairs < 2 {
                    repairs += 1;
                    self.refactor();
                    xb = self.basic_values();
                    continue;
                }
                let leaving = self.basic[r];
                let id = if leaving >= self.n { self.row_ids[leaving - self.n] } else { usize::MAX };
                return self.finish(LpStatus::Infeasible, Some((id, self.certificate(r))), iterations);
            };
            let leaving = self.basic[r];
            let entering_value = self.value_of_nonbasic(self.nonbasic[q]);
            let old_col = self.pivot(r, q);
            self.at_upper[leaving] = !below && leaving < self.n;
            iterations += 1;
            // x_B(i) += f_i (v_entering - new value of the entering variable)
            let n = self.n;
            let new_value = self.rhs[r]
                - (0..n).map(|c| self.tab[r * n + c] * self.value_of_nonbasic(self.nonbasic[c])).sum::<f64>();
            let delta = entering_value - new_value;
            for (i, (v, &f)) in xb.iter_mut().zip(&old_col).enumerate() {
                if i == r {
                    *v = new_value;
                } else if f != 0.0 {
                    *v += f * delta;
                }
            }
        }
    }

    fn finish(
        &self,
        status: LpStatus,
        certificate: Option<(usize, Vec<(usize, f64)>)>,
        iterations: usize,
    ) -> LpSolution {
        let x = if status == LpStatus::Infeasible { self.lo[..self.n].to_vec() } else { self.primal(&self.basic_values()) };
        let objective = if status == LpStatus::Infeasible { f64::INFINITY } else { self.objective_of(&x) };
        LpSolution { status, x, objective, basis: self.basis(), certificate, iterations }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(c: &[(usize, f64)], b: f64) -> LpRow {
        LpRow { coeffs: c.to_vec(), rhs: b }
    }

    #[test]
    fn unconstrained_box_minimum() {
        let mut m = LpModel::new(vec![1.0, 2.0, 0.5]);
        m.lower[2] = 1.0;
        let s = lp_solve(&m, None);
        assert_eq!(s.status, LpStatus::Optimal);
        assert_eq!(s.x, vec![0.0, 0.0, 1.0]);
        assert_eq!(s.objective, 0.5);
    }

    #[test]
    fn single_covering_row() {
        let m = LpModel::new(vec![1.0, 2.0]).add_rows([row(&[(0, 1.0), (1, 1.0)], 1.0)]);
        let s = lp_solve(&m, None);
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.x[0] - 1.0).abs() < 1e-12 && s.x[1].abs() < 1e-12);
        assert!((s.objective - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fully_fixed_model() {
        let m = LpModel::new(vec![3.0, 1.0, 2.0])
            .add_rows([row(&[(0, 1.0), (2, 1.0)], 1.0)])
            .fix_var(0, 1.0)
            .unwrap()
            .fix_var(1, 0.0)
            .unwrap()
            .fix_var(2, 1.0)
            .unwrap();
        let s = lp_solve(&m, None);
        assert_eq!(s.x, vec![1.0, 0.0, 1.0]);
        assert_eq!(s.objective, 5.0);
    }

    #[test]
    fn fixing_rejects_fractions() {
        assert!(LpModel::new(vec![1.0]).fix_var(0, 0.5).is_err());
    }

    #[test]
    fn fix_to_one_is_exact() {
        let m = LpModel::new(vec![5.0, 1.0]).add_rows([row(&[(0, 0.3), (1, 0.3)], 0.3)]).fix_var(0, 1.0).unwrap();
        let s = lp_solve(&m, None);
        assert_eq!(s.x[0], 1.0);
    }

    #[test]
    fn infeasible_rows() {
        let m = LpModel::new(vec![1.0, 1.0]).add_rows([row(&[(0, 1.0), (1, 1.0)], 3.0)]);
        let s = lp_solve(&m, None);
        assert_eq!(s.status, LpStatus::Infeasible);
        assert!(s.certificate.is_some());
        let m = LpModel::new(vec![1.0]).add_rows([row(&[], 0.5)]);
        assert_eq!(lp_solve(&m, None).status, LpStatus::Infeasible);
        let m = LpModel::new(vec![1.0]).add_rows([row(&[(0, 0.0)], -1.0)]);
        assert_eq!(lp_solve(&m, None).status, LpStatus::Optimal);
    }

    #[test]
    fn incremental_rows_match_fresh_solve() {
        let base = LpModel::new(vec![2.0, 3.0, 4.0]).add_rows([row(&[(0, 1.0), (1, 1.0)], 1.0)]);
        let extra = [row(&[(0, 0.5), (2, 1.0)], 0.8), row(&[(1, 1.0), (2, 0.4)], 0.6)];
        let mut lp = DualSimplex::new(&base);
        lp.solve();
        for r in &extra {
            lp.add_row(r.clone());
        }
        let inc = lp.solve();
        let fresh = lp_solve(&base.clone().add_rows(extra.clone()), None);
        assert!((inc.objective - fresh.objective).abs() < 1e-7);
    }

    #[test]
    fn warm_basis_survives_row_additions() {
        let base = LpModel::new(vec![2.0, 3.0, 4.0]).add_rows([row(&[(0, 1.0), (1, 1.0)], 1.0)]);
        let first = lp_solve(&base, None);
        let ext = base.add_rows([row(&[(1, 1.0), (2, 1.0)], 1.0)]);
        let warm = lp_solve(&ext, Some(&first.basis));
        let cold = lp_solve(&ext, None);
        assert_eq!(warm.status, LpStatus::Optimal);
        assert!((warm.objective - cold.objective).abs() < 1e-7);
    }

    #[test]
    fn duplicate_row_changes_nothing() {
        let r = row(&[(0, 1.0), (1, 2.0)], 1.5);
        let a = LpModel::new(vec![1.0, 1.0]).add_rows([r.clone()]);
        let b = a.clone().add_rows([r]);
        assert!((lp_solve(&a, None).objective - lp_solve(&b, None).objective).abs() < 1e-12);
    }

    #[test]
    fn bound_changes_between_solves() {
        let m = LpModel::new(vec![1.0, 2.0]).add_rows([row(&[(0, 1.0), (1, 1.0)], 1.0)]);
        let mut lp = DualSimplex::new(&m);
        assert!((lp.solve().objective - 1.0).abs() < 1e-12);
        lp.set_bounds(0, 0.0, 0.0);
        let s = lp.solve();
        assert!((s.objective - 2.0).abs() < 1e-12);
        lp.set_bounds(0, 0.0, 1.0);
        assert!((lp.solve().objective - 1.0).abs() < 1e-12);
        lp.set_bounds(1, 1.0, 1.0);
        lp.set_bounds(0, 0.0, 0.0);
        assert!((lp.solve().objective - 2.0).abs() < 1e-12);
    }

    #[test]
    fn negative_costs_and_signed_rows() {
        // min -x0 + x1  s.t.  x0 - x1 >= 0.5 , -x0 >= -0.8
        let m = LpModel::new(vec![-1.0, 1.0]).add_rows([row(&[(0, 1.0), (1, -1.0)], 0.5), row(&[(0, -1.0)], -0.8)]);
        let s = lp_solve(&m, None);
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.objective + 0.8).abs() < 1e-9);
    }
}
