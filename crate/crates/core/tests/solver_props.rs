mod common;

use common::{random_instance, small_instance};
use pscp_core::oracle::{brute_force, check_feasibility, OracleResult};
use pscp_core::solver::{solve_with_log, Event};
use pscp_core::{solve, Mode, SolveStatus, SolverConfig};
use proptest::prelude::*;

fn configs() -> Vec<SolverConfig> {
    let mut out = Vec::new();
    for mode in [Mode::Bd, Mode::Rbd] {
        for (ic, mir, rens) in [(true, true, true), (false, false, false), (true, false, true), (false, true, false)] {
            out.push(SolverConfig { use_initial_cuts: ic, use_mir: mir, use_rens: rens, ..SolverConfig::with_mode(mode) });
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn every_config_reaches_the_oracle_optimum(seed in 0u64..1_000_000, direct in any::<bool>()) {
        let inst = if direct { random_instance(seed, 0.1) } else { small_instance(seed) };
        let truth = brute_force(&inst).unwrap();
        for cfg in configs() {
            let r = solve(&inst, &cfg).unwrap();
            match &truth {
                OracleResult::Optimal { objective, .. } => {
                    prop_assert_eq!(r.status, SolveStatus::Optimal);
                    prop_assert_eq!(r.objective, Some(*objective));
                    let x = r.x.as_ref().unwrap();
                    prop_assert!(check_feasibility(&inst, x).feasible);
                    prop_assert_eq!(inst.cost_of(x), *objective);
                    prop_assert_eq!(r.bound, *objective);
                    prop_assert_eq!(r.end_gap, Some(0.0));
                    prop_assert!(r.root_bound.unwrap() <= objective + 1e-9);
                    prop_assert!(r.root_gap.unwrap() >= -1e-9);
                }
                OracleResult::Infeasible => {
                    prop_assert_eq!(r.status, SolveStatus::Infeasible);
                    prop_assert!(r.x.is_none());
                }
            }
        }
    }

    #[test]
    fn logged_counts_match_report(seed in 0u64..1_000_000) {
        let inst = small_instance(seed);
        let mut tree_cuts = 0;
        let mut incumbents = Vec::new();
        let r = solve_with_log(&inst, &SolverConfig::default(), &mut |e| match e {
            Event::CutAdded { heuristic: false, .. } => tree_cuts += 1,
            Event::Incumbent { objective, heuristic: false, .. } => incumbents.push(*objective),
            _ => {}
        })
        .unwrap();
        prop_assert_eq!(tree_cuts, r.cuts.total());
        prop_assert!(incumbents.windows(2).all(|w| w[1] < w[0]));
        if let Some(o) = r.objective {
            prop_assert_eq!(incumbents.last().copied(), Some(o));
        }
    }

    #[test]
    fn solving_is_deterministic(seed in 0u64..1_000_000) {
        let inst = small_instance(seed);
        let a = solve(&inst, &SolverConfig::default()).unwrap();
        let b = solve(&inst, &SolverConfig::default()).unwrap();
        prop_assert_eq!(a.x, b.x);
        prop_assert_eq!(a.nodes, b.nodes);
        prop_assert_eq!(a.cuts, b.cuts);
    }
}

#[test]
fn node_limit_reports_limit_or_finishes() {
    for seed in 0..40 {
        let inst = small_instance(seed);
        let cfg = SolverConfig { node_limit: Some(1), use_rens: false, ..SolverConfig::default() };
        let r = solve(&inst, &cfg).unwrap();
        assert!(r.nodes <= 1);
        if r.status == SolveStatus::Limit {
            let o = r.objective.unwrap();
            assert!(r.bound <= o + 1e-9);
            assert!(r.end_gap.unwrap() >= 0.0);
        }
    }
}

#[test]
fn gap_tolerance_keeps_incumbent_within_tolerance() {
    for seed in 0..60 {
        let inst = small_instance(seed);
        let Some(opt) = brute_force(&inst).unwrap().objective() else { continue };
        let cfg = SolverConfig { gap_tol: 20.0, ..SolverConfig::default() };
        let r = solve(&inst, &cfg).unwrap();
        assert!(matches!(r.status, SolveStatus::Optimal | SolveStatus::Feasible));
        let o = r.objective.unwrap();
        assert!(o >= opt && 100.0 * (o - opt) / o <= 20.0 + 1e-9, "seed {seed}: {o} vs {opt}");
    }
}
