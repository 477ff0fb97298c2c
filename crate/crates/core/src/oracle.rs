//! Ground truth by enumeration of `{0,1}^n` for small instances.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::instance::Instance;

/// Largest `n` the enumeration accepts.
pub const MAX_ENUMERATION_N: usize = 25;

#[derive(Debug, Clone, PartialEq)]
pub enum OracleResult {
    Optimal { x: Vec<bool>, objective: f64 },
    Infeasible,
}

impl OracleResult {
    pub fn objective(&self) -> Option<f64> {
        match self {
            OracleResult::Optimal { objective, .. } => Some(*objective),
            OracleResult::Infeasible => None,
        }
    }

    /// One-line record `"<objective> <bits>"`, e.g. `"2 11"`, or `"infeasible"`.
    pub fn record(&self) -> String {
        match self {
            OracleResult::Optimal { x, objective } => format!("{objective} {}", bitstring(x)),
            OracleResult::Infeasible => "infeasible".to_string(),
        }
    }
}

pub fn bitstring(x: &[bool]) -> String {
    x.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Feasibility {
    /// Covered probability of each row.
    pub probabilities: Vec<f64>,
    pub feasible: bool,
}

/// Direct evaluation of `P{A_i x >= 1}` for every row.
pub fn check_feasibility(inst: &Instance, x: &[bool]) -> Feasibility {
    let probabilities: Vec<f64> = inst.blocks.iter().map(|b| b.covered_probability(x)).collect();
    let feasible = inst.blocks.iter().zip(&probabilities).all(|(b, &p)| b.meets_reliability(p));
    Feasibility { probabilities, feasible }
}

/// Point `mask` with `x_1` as the most significant bit, so increasing masks
/// enumerate points in lexicographic order.
fn point(mask: u32, n: usize) -> Vec<bool> {
    (0..n).map(|j| mask >> (n - 1 - j) & 1 == 1).collect()
}

struct Masks {
    n: usize,
    cost: Vec<f64>,
    /// Per row: scenario masks, probabilities, `1 - eps`.
    rows: Vec<(Vec<u32>, Vec<f64>, f64)>,
}

impl Masks {
    fn new(inst: &Instance) -> Self {
        let n = inst.n;
        let rows = inst
            .blocks
            .iter()
            .map(|b| {
                let masks = b.scenarios().iter().map(|s| s.iter().fold(0u32, |m, &j| m | 1 << (n - 1 - j))).collect();
                (masks, b.prob().to_vec(), b.epsilon())
            })
            .collect();
        Masks { n, cost: inst.cost.clone(), rows }
    }

    fn cost(&self, mask: u32) -> f64 {
        (0..self.n).filter(|&j| mask >> (self.n - 1 - j) & 1 == 1).map(|j| self.cost[j]).sum()
    }

    /// Same test and summation order as [`check_feasibility`].
    fn feasible(&self, mask: u32, inst: &Instance) -> bool {
        self.rows.iter().zip(&inst.blocks).all(|((masks, prob, _), block)| {
            let covered: f64 = masks.iter().zip(prob).filter(|(&m, _)| m & mask != 0).map(|(_, &p)| p).sum();
            block.meets_reliability(covered)
        })
    }
}

/// Minimum-cost feasible point, ties broken toward the lexicographically
/// smallest `x`.
pub fn brute_force(inst: &Instance) -> Result<OracleResult> {
    let n = inst.n;
    if n > MAX_ENUMERATION_N {
        return Err(Error::TooLarge { n, max: MAX_ENUMERATION_N });
    }
    let masks = Masks::new(inst);
    let total: u64 = 1 << n;
    let shard: u64 = 1 << 12;
    let shards = total.div_ceil(shard);
    let best = (0..shards)
        .into_par_iter()
        .map(|k| {
            let mut best: Option<(u32, f64)> = None;
            for mask in (k * shard)..((k + 1) * shard).min(total) {
                let mask = mask as u32;
                let c = masks.cost(mask);
                if best.is_some_and(|(_, bc)| c >= bc) {
                    continue;
                }
                if masks.feasible(mask, inst) {
                    best = Some((mask, c));
                }
            }
            best
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .fold(None, |acc: Option<(u32, f64)>, (m, c)| match acc {
            Some((_, bc)) if c >= bc => acc,
            _ => Some((m, c)),
        });
    Ok(match best {
        Some((mask, objective)) => OracleResult::Optimal { x: point(mask, n), objective },
        None => OracleResult::Infeasible,
    })
}

/// Optimum of the big-M model with `z` either binary or relaxed to `[0, 1]`,
/// by enumerating `x` and solving the inner `z` problem in closed form:
/// relaxed `z_w = min(A^w x, 1)`, binary `z_w = [A^w x >= 1]`.
pub fn bigm_optimum(inst: &Instance, relax_z: bool) -> Result<Option<f64>> {
    let n = inst.n;
    if n > MAX_ENUMERATION_N {
        return Err(Error::TooLarge { n, max: MAX_ENUMERATION_N });
    }
    let masks = Masks::new(inst);
    let mut best: Option<f64> = None;
    for mask in 0..(1u64 << n) {
        let mask = mask as u32;
        let c = masks.cost(mask);
        if best.is_some_and(|b| c >= b) {
            continue;
        }
        let ok = masks.rows.iter().zip(&inst.blocks).all(|((row_masks, prob, _), block)| {
            let achieved: f64 = row_masks
                .iter()
                .zip(prob)
                .map(|(&m, &p)| {
                    let z = if relax_z {
                        f64::from((m & mask).count_ones()).min(1.0)
                    } else if m & mask != 0 {
                        1.0
                    } else {
                        0.0
                    };
                    p * z
                })
                .sum();
            block.meets_reliability(achieved)
        });
        if ok {
            best = Some(c);
        }
    }
    Ok(best)
}
