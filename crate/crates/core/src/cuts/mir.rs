//! Mixed integer rounding applied to a single Benders cut `sum c_j x_j >= b`
//! over binary `x`.
//!
//! With a partition `(L, U)` of the columns and a divisor `delta > 0`,
//!
//! ```text
//!   sum_{j in L} G(c_j / delta) x_j + sum_{j in U} G(-c_j / delta) (1 - x_j) >= ceil(beta)
//!   beta = (b - sum_{j in U} c_j) / delta
//!   G(d) = floor(d) + min(f_d / f_beta, 1),  f_t = t - floor(t)
//! ```
//!
//! is valid for every binary point satisfying the base cut.

use super::{normalized_violation, Cut, CutBase, CutOrigin, INT_TOL};

/// Fractional parts of `beta` at or below this are treated as zero and the
/// MIR step is skipped.
const MIN_F_BETA: f64 = 1e-9;

/// `G(d) = floor(d) + min(f_d / f_beta, 1)`. `f_beta` must be positive.
pub fn mir_g(d: f64, f_beta: f64) -> f64 {
    debug_assert!(f_beta > 0.0);
    let fl = d.floor();
    fl + ((d - fl) / f_beta).min(1.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MirContext {
    /// Columns in `U`, sorted; every other column is in `L`.
    pub upper: Vec<usize>,
    pub delta: f64,
    pub beta: f64,
    pub f_beta: f64,
}

impl MirContext {
    /// `None` when `delta <= 0`.
    pub fn new(base: &CutBase, mut upper: Vec<usize>, delta: f64) -> Option<Self> {
        if !(delta > 0.0) {
            return None;
        }
        upper.sort_unstable();
        upper.dedup();
        let in_upper: f64 = upper.iter().map(|&j| base.coeff(j)).sum();
        let beta = (base.rhs - in_upper) / delta;
        Some(MirContext { upper, delta, beta, f_beta: beta - beta.floor() })
    }

    fn is_upper(&self, j: usize) -> bool {
        self.upper.binary_search(&j).is_ok()
    }
}

/// The MIR inequality of `base` under `ctx`, kept in mixed form. `None` when
/// `f_beta` is (numerically) zero.
pub fn mir_cut(base: &CutBase, ctx: &MirContext) -> Option<Cut> {
    if ctx.f_beta <= MIN_F_BETA {
        return None;
    }
    let mut coeffs = Vec::new();
    let mut complemented = Vec::new();
    for &(j, c) in &base.coeffs {
        if ctx.is_upper(j) {
            let g = mir_g(-c / ctx.delta, ctx.f_beta);
            if g != 0.0 {
                complemented.push((j, g));
            }
        } else {
            let g = mir_g(c / ctx.delta, ctx.f_beta);
            if g != 0.0 {
                coeffs.push((j, g));
            }
        }
    }
    Some(Cut { row: base.row, origin: CutOrigin::Mir, coeffs, complemented, rhs: ctx.beta.floor() + 1.0 })
}

/// Heuristic MIR separation at `xbar`: `U = {j : xbar_j >= 1/2}` and `delta`
/// ranges over `|c_j|` for fractional `xbar_j`. Returns the most violated
/// candidate (smallest `delta` on ties) if its violation exceeds `tol`.
pub fn best_mir_cut(base: &CutBase, xbar: &[f64], tol: f64) -> Option<Cut> {
    let upper: Vec<usize> = base.coeffs.iter().filter(|&&(j, _)| xbar[j] >= 0.5).map(|&(j, _)| j).collect();
    let mut deltas: Vec<f64> = base
        .coeffs
        .iter()
        .filter(|&&(j, c)| c != 0.0 && xbar[j] > INT_TOL && xbar[j] < 1.0 - INT_TOL)
        .map(|&(_, c)| c.abs())
        .collect();
    deltas.sort_by(f64::total_cmp);
    deltas.dedup();

    let mut best: Option<(f64, Cut)> = None;
    for delta in deltas {
        let Some(ctx) = MirContext::new(base, upper.clone(), delta) else { continue };
        let Some(cut) = mir_cut(base, &ctx) else { continue };
        let (terms, rhs) = cut.folded();
        let v = normalized_violation(&terms, rhs, xbar);
        if best.as_ref().is_none_or(|(bv, _)| v > *bv) {
            best = Some((v, cut));
        }
    }
    best.filter(|(v, _)| *v > tol).map(|(_, c)| c)
}
