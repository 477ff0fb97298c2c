#![allow(dead_code)]

use pscp_core::cuts::{initial_cut, separate_row, strengthen_cut, support_of, CutPool, VIOLATION_TOL};
use pscp_core::lp::{lp_solve, LpModel, LpRow, LpStatus};
use pscp_core::scenario_gen::{generate, synthetic_scp, GenConfig, GenKind};
use pscp_core::{Instance, ScenarioBlock};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const EPSILONS: [f64; 3] = [0.05, 0.1, 0.3];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Small generated instance with the shape drawn from `seed`.
pub fn small_instance(seed: u64) -> Instance {
    let mut r = rng(seed);
    let n = r.gen_range(4..=12);
    let m = r.gen_range(1..=4);
    let s = r.gen_range(3..=20);
    let eps = EPSILONS[r.gen_range(0..3)];
    let kind = if seed % 2 == 0 { GenKind::Independent } else { GenKind::Mixture };
    let density = r.gen_range(0.25..0.6);
    let scp = synthetic_scp(m, n, density, seed);
    generate(&scp, &GenConfig::new(kind, s, eps, seed)).unwrap()
}

/// Random scenario block over `n` columns with scenario count in `[1, s_max]`.
/// Scenarios are empty with probability `p_empty`.
pub fn random_block(r: &mut ChaCha8Rng, n: usize, s_max: usize, p_empty: f64) -> ScenarioBlock {
    let s = r.gen_range(1..=s_max);
    let scenarios: Vec<Vec<usize>> = (0..s)
        .map(|_| {
            if r.gen::<f64>() < p_empty {
                Vec::new()
            } else {
                let k = r.gen_range(1..=n.min(4));
                let mut v: Vec<usize> = (0..k).map(|_| r.gen_range(0..n)).collect();
                v.sort_unstable();
                v.dedup();
                v
            }
        })
        .collect();
    let weights: Vec<f64> = (0..s).map(|_| r.gen_range(0.05..1.0)).collect();
    let total: f64 = weights.iter().sum();
    let prob = weights.iter().map(|w| w / total).collect();
    ScenarioBlock::new(n, scenarios, prob, EPSILONS[r.gen_range(0..3)])
}

/// Random instance built directly from [`random_block`].
pub fn random_instance(seed: u64, p_empty: f64) -> Instance {
    let mut r = rng(seed);
    let n = r.gen_range(2..=10);
    let m = r.gen_range(1..=3);
    let blocks = (0..m).map(|_| random_block(&mut r, n, 8, p_empty)).collect();
    let cost = (0..n).map(|_| r.gen_range(1..=20) as f64).collect();
    Instance::new(n, cost, blocks)
}

/// All points of `{0,1}^n`, `x_1` varying slowest.
pub fn all_points(n: usize) -> impl Iterator<Item = Vec<bool>> {
    (0u32..1 << n).map(move |mask| (0..n).map(|j| mask >> (n - 1 - j) & 1 == 1).collect())
}

/// LP relaxation point of the master with initial cuts, separated until no
/// Benders cut is violated or `max_rounds` is reached. Returns the point,
/// the pool and whether separation converged.
pub fn separated_lp_point(inst: &Instance, max_rounds: usize) -> Option<(Vec<f64>, CutPool, bool)> {
    let mut pool = CutPool::new();
    for (i, b) in inst.blocks.iter().enumerate() {
        pool.insert(initial_cut(b, i, inst.n));
    }
    for _ in 0..max_rounds {
        let rows = pool.cuts().iter().map(|c| {
            let (coeffs, rhs) = c.folded();
            LpRow { coeffs, rhs }
        });
        let sol = lp_solve(&LpModel::new(inst.cost.clone()).add_rows(rows), None);
        if sol.status != LpStatus::Optimal {
            return None;
        }
        let support = support_of(&sol.x);
        let mut added = false;
        for (i, b) in inst.blocks.iter().enumerate() {
            if let Some(sep) = separate_row(b, i, &sol.x, &support, VIOLATION_TOL) {
                added |= pool.insert(strengthen_cut(&sep.base));
            }
        }
        if !added {
            return Some((sol.x, pool, true));
        }
    }
    let rows = pool.cuts().iter().map(|c| {
        let (coeffs, rhs) = c.folded();
        LpRow { coeffs, rhs }
    });
    let sol = lp_solve(&LpModel::new(inst.cost.clone()).add_rows(rows), None);
    (sol.status == LpStatus::Optimal).then_some((sol.x, pool, false))
}
