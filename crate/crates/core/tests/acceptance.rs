//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits nonzero if any failed.

mod common;

use std::hint::black_box;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use pscp_core::cuts::{
    eval_coverage, infeasibility_screen, initial_cut, mir_cut, separate_row, strengthen_cut, support_of, Cut,
    CutBase, MirContext,
};
use pscp_core::oracle::{bigm_optimum, brute_force, check_feasibility, OracleResult};
use pscp_core::scenario_gen::{generate, synthetic_scp, GenConfig, GenKind};
use pscp_core::solver::{rens, solve_with_log, Event};
use pscp_core::{solve, Instance, Mode, ScenarioBlock, SolveStatus, SolverConfig};
use rand::Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

/// Solves with the given mode and collects every emitted cut.
fn solve_collecting(inst: &Instance, mode: Mode) -> (pscp_core::SolveReport, Vec<Cut>) {
    let mut cuts = Vec::new();
    let report = solve_with_log(inst, &SolverConfig::with_mode(mode), &mut |e| {
        if let Event::CutAdded { cut, .. } = e {
            cuts.push((*cut).clone());
        }
    })
    .unwrap();
    (report, cuts)
}

/// Criteria 1 and 2 share their runs.
fn oracle_and_cuts() -> (Outcome, Outcome) {
    let t0 = Instant::now();
    let mut mismatches = Vec::new();
    let mut infeasible = 0;
    let mut cuts_checked = 0usize;
    let mut violations = 0usize;
    for seed in 0..500u64 {
        let inst = small_instance(seed);
        let truth = brute_force(&inst).unwrap();
        if truth == OracleResult::Infeasible {
            infeasible += 1;
        }
        let feasible: Vec<Vec<bool>> =
            all_points(inst.n).filter(|x| check_feasibility(&inst, x).feasible).collect();
        for mode in [Mode::Bd, Mode::Rbd] {
            let (report, cuts) = solve_collecting(&inst, mode);
            let ok = match &truth {
                OracleResult::Optimal { objective, .. } => {
                    report.status == SolveStatus::Optimal && report.objective == Some(*objective)
                }
                OracleResult::Infeasible => report.status == SolveStatus::Infeasible,
            };
            if !ok {
                mismatches.push(format!("seed {seed} {}: {:?} vs {}", mode.as_str(), report.objective, truth.record()));
            }
            for cut in &cuts {
                cuts_checked += 1;
                violations += feasible.iter().filter(|x| cut.lhs_binary(x) < cut.rhs - 1e-9).count();
            }
        }
    }
    let secs = t0.elapsed().as_secs_f64();
    let c1 = outcome(
        mismatches.is_empty() && secs < 60.0,
        format!(
            "500 instances ({infeasible} infeasible), BD and RBD, {} mismatches, {secs:.1} s{}",
            mismatches.len(),
            mismatches.first().map(|m| format!("; first: {m}")).unwrap_or_default()
        ),
    );
    let c2 = outcome(violations == 0, format!("{cuts_checked} cuts checked against all feasible points, {violations} violations"));
    (c1, c2)
}

fn random_base(r: &mut rand_chacha::ChaCha8Rng) -> CutBase {
    let n = r.gen_range(1..=20);
    let mut coeffs: Vec<(usize, f64)> = Vec::new();
    for j in 0..n {
        let c: f64 = match r.gen_range(0..10) {
            0 => 1.0,
            1 => continue,
            _ => r.gen_range(1e-6..1.0),
        };
        coeffs.push((j, c));
    }
    if coeffs.is_empty() {
        coeffs.push((0, 0.5));
    }
    CutBase { row: 0, coeffs, rhs: r.gen_range(1e-6..1.0) }
}

fn strengthening_equivalence() -> Outcome {
    let mut r = rng(3);
    let mut worst = 0.0f64;
    let mut failures = 0;
    for _ in 0..1000 {
        let base = random_base(&mut r);
        let b = base.rhs;
        let strong = strengthen_cut(&base);
        let Some(mir) = MirContext::new(&base, vec![], 1.0).and_then(|ctx| mir_cut(&base, &ctx)) else {
            failures += 1;
            continue;
        };
        let same_support = mir.complemented.is_empty()
            && mir.coeffs.len() == strong.coeffs.len()
            && mir.coeffs.iter().zip(&strong.coeffs).all(|(a, s)| a.0 == s.0);
        if !same_support {
            failures += 1;
            continue;
        }
        for (a, s) in mir.coeffs.iter().zip(&strong.coeffs) {
            worst = worst.max((b * a.1 - s.1).abs());
        }
        worst = worst.max((b * mir.rhs - strong.rhs).abs());
    }
    outcome(failures == 0 && worst <= 1e-9, format!("1000 bases, max |b*mir - strengthened| = {worst:.2e}, {failures} structural failures"))
}

fn cover_form_and_dominance() -> Outcome {
    let mut r = rng(4);
    let mut failures = 0;
    for _ in 0..1000 {
        let b: f64 = r.gen_range(0.05..1.0);
        let n = r.gen_range(2..=20);
        let in_s: Vec<bool> = {
            let mut v: Vec<bool> = (0..n).map(|_| r.gen_bool(0.4)).collect();
            let a = r.gen_range(0..n);
            let mut c = r.gen_range(0..n);
            while c == a {
                c = r.gen_range(0..n);
            }
            v[a] = true;
            v[c] = false;
            v
        };
        let outside = in_s.iter().filter(|&&s| !s).count();
        let total = r.gen_range(0.01..0.99) * b;
        let weights: Vec<f64> = (0..outside).map(|_| r.gen_range(0.1..1.0)).collect();
        let wsum: f64 = weights.iter().sum();
        let mut w = weights.iter();
        let coeffs: Vec<(usize, f64)> = (0..n)
            .map(|j| if in_s[j] { (j, r.gen_range(b..=1.0)) } else { (j, total * w.next().unwrap() / wsum) })
            .collect();
        let base = CutBase { row: 0, coeffs, rhs: b };
        let pre: f64 = base.coeffs.iter().filter(|&&(_, c)| c < b).map(|&(_, c)| c).sum();
        assert!(pre > 0.0 && pre < b);
        let s: Vec<usize> = base.coeffs.iter().filter(|&&(_, c)| c >= b).map(|&(j, _)| j).collect();
        let u: Vec<usize> = base.coeffs.iter().filter(|&&(_, c)| c < b).map(|&(j, _)| j).collect();
        let Some(mir) = MirContext::new(&base, u, 1.0).and_then(|ctx| mir_cut(&base, &ctx)) else {
            failures += 1;
            continue;
        };
        let cover = mir.complemented.is_empty()
            && mir.coeffs.iter().map(|&(j, _)| j).collect::<Vec<_>>() == s
            && mir.coeffs.iter().all(|&(_, a)| (a - 1.0).abs() <= 1e-9)
            && (mir.rhs - 1.0).abs() <= 1e-9;
        let strong = strengthen_cut(&base);
        let dominated = strong.coeffs.iter().all(|&(j, c)| {
            let a = mir.coeffs.iter().find(|&&(k, _)| k == j).map_or(0.0, |&(_, a)| a);
            b * a <= c + 1e-9
        }) && (b * mir.rhs - strong.rhs).abs() <= 1e-9;
        if !(cover && dominated) {
            failures += 1;
        }
    }
    outcome(failures == 0, format!("1000 bases, {failures} failures"))
}

fn rens_guarantee() -> Outcome {
    let mut runs = 0;
    let mut infeasible = 0;
    let mut fallback = 0;
    let mut repaired = 0;
    let mut unconverged = 0;
    let mut seed = 10_000u64;
    while runs < 200 {
        seed += 1;
        let mut r = rng(seed);
        let m = r.gen_range(3..=10);
        let n = r.gen_range(10..=40);
        let kind = if seed % 2 == 0 { GenKind::Independent } else { GenKind::Mixture };
        let scp = synthetic_scp(m, n, 0.2, seed);
        let inst = generate(&scp, &GenConfig::new(kind, r.gen_range(5..=30), EPSILONS[r.gen_range(0..3)], seed)).unwrap();
        if !infeasibility_screen(&inst).is_empty() {
            continue;
        }
        let Some((x_lp, pool, converged)) = separated_lp_point(&inst, 200) else { continue };
        unconverged += usize::from(!converged);
        let budget = if runs % 2 == 0 { 0 } else { 50 };
        let cfg = SolverConfig { rens_node_budget: budget, ..SolverConfig::default() };
        let res = rens(&inst, &x_lp, &pool, &cfg);
        runs += 1;
        fallback += usize::from(res.outcome.used_fallback);
        repaired += usize::from(res.outcome.repaired);
        if !check_feasibility(&inst, &res.x).feasible {
            infeasible += 1;
        }
    }
    outcome(
        infeasible == 0,
        format!("200 runs, {infeasible} infeasible, {fallback} fallbacks, {repaired} repaired, {unconverged} unconverged separations"),
    )
}

fn screen_agreement() -> Outcome {
    let mut disagreements = 0;
    let mut flagged = 0;
    for k in 0..200u64 {
        let inst = if k % 2 == 0 {
            random_instance(20_000 + k, 0.3)
        } else {
            let mut r = rng(20_000 + k);
            let scp = synthetic_scp(r.gen_range(1..=4), r.gen_range(4..=10), 0.3, k);
            let kind = if k % 4 == 1 { GenKind::Independent } else { GenKind::Mixture };
            let mut cfg = GenConfig::new(kind, r.gen_range(3..=20), EPSILONS[r.gen_range(0..3)], k);
            cfg.dropout_hi = 0.95;
            generate(&scp, &cfg).unwrap()
        };
        let screen = !infeasibility_screen(&inst).is_empty();
        flagged += usize::from(screen);
        if screen != (brute_force(&inst).unwrap() == OracleResult::Infeasible) {
            disagreements += 1;
        }
    }
    outcome(disagreements == 0, format!("200 instances, {flagged} flagged, {disagreements} disagreements"))
}

fn initial_cut_identity() -> Outcome {
    let mut r = rng(7);
    let mut mismatches = 0;
    for k in 0..100 {
        let n = r.gen_range(1..=30);
        let block = random_block(&mut r, n, 40, 0.1);
        let zero = vec![0.0; n];
        let expected = initial_cut(&block, k, n);
        let same = separate_row(&block, k, &zero, &support_of(&zero), 0.0).is_some_and(|sep| {
            sep.cut.rhs.to_bits() == expected.rhs.to_bits()
                && sep.cut.coeffs.len() == expected.coeffs.len()
                && sep.cut.coeffs.iter().zip(&expected.coeffs).all(|(a, b)| a.0 == b.0 && a.1.to_bits() == b.1.to_bits())
        });
        if !same {
            mismatches += 1;
        }
    }
    outcome(mismatches == 0, format!("100 blocks, {mismatches} mismatches"))
}

fn naive_coverage(block: &ScenarioBlock, xbar: &[f64]) -> Vec<f64> {
    block.scenarios().iter().map(|s| s.iter().map(|&j| xbar[j]).sum()).collect()
}

fn median(mut v: Vec<Duration>) -> Duration {
    v.sort();
    v[v.len() / 2]
}

fn column_speedup() -> Outcome {
    let (n, s) = (2000, 2000);
    let mut r = rng(8);
    let scenarios: Vec<Vec<usize>> =
        (0..s).map(|_| (0..n).filter(|_| r.gen_bool(100.0 / n as f64)).collect()).collect();
    let mean_support = scenarios.iter().map(Vec::len).sum::<usize>() as f64 / s as f64;
    let block = ScenarioBlock::new(n, scenarios, vec![1.0 / s as f64; s], 0.1);
    let mut xbar = vec![0.0; n];
    while support_of(&xbar).len() < 20 {
        xbar[r.gen_range(0..n)] = r.gen_range(0.01..1.0);
    }
    let support = support_of(&xbar);
    let fast = eval_coverage(&block, &xbar, &support);
    let slow = naive_coverage(&block, &xbar);
    let diff = fast.iter().zip(&slow).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);

    let reps = 20;
    let mut t_fast = Vec::new();
    let mut t_slow = Vec::new();
    for _ in 0..20 {
        let t = Instant::now();
        for _ in 0..reps {
            black_box(eval_coverage(black_box(&block), black_box(&xbar), black_box(&support)));
        }
        t_fast.push(t.elapsed());
        let t = Instant::now();
        for _ in 0..reps {
            black_box(naive_coverage(black_box(&block), black_box(&xbar)));
        }
        t_slow.push(t.elapsed());
    }
    let (f, sl) = (median(t_fast), median(t_slow));
    let speedup = sl.as_secs_f64() / f.as_secs_f64();
    outcome(
        speedup >= 5.0 && diff <= 1e-12,
        format!("mean support {mean_support:.1}, speedup {speedup:.1}x (median {f:?} vs {sl:?} per {reps} calls), max diff {diff:.1e}"),
    )
}

/// Shift used in the geometric mean of gaps, which may be zero.
const GAP_SHIFT: f64 = 1.0;

fn shifted_geomean(v: &[f64]) -> f64 {
    (v.iter().map(|g| (g + GAP_SHIFT).ln()).sum::<f64>() / v.len() as f64).exp() - GAP_SHIFT
}

fn mid_scale_suite() -> Vec<Instance> {
    let mut out = Vec::new();
    let mut seed = 30_000u64;
    while out.len() < 50 {
        seed += 1;
        let kind = if seed % 2 == 0 { GenKind::Independent } else { GenKind::Mixture };
        let scp = synthetic_scp(50, 200, 0.02, seed);
        let inst = generate(&scp, &GenConfig::new(kind, 500, 0.05, seed)).unwrap();
        if infeasibility_screen(&inst).is_empty() {
            out.push(inst);
        }
    }
    out
}

fn enhancement_direction() -> Outcome {
    const LIMIT: f64 = 60.0;
    /// Baseline runs always executed to completion before the early decision.
    const MIN_BASELINE_RUNS: usize = 3;
    let suite = mid_scale_suite();
    let full_cfg = SolverConfig { time_limit_s: Some(LIMIT), ..SolverConfig::default() };
    let base_cfg = SolverConfig { use_initial_cuts: false, use_mir: false, ..full_cfg.clone() };
    let t0 = Instant::now();

    let full: Vec<_> = suite.iter().map(|inst| solve(inst, &full_cfg).unwrap()).collect();
    let solved = |r: &pscp_core::SolveReport| r.status == SolveStatus::Optimal && r.wall_time <= LIMIT;
    let full_solved = full.iter().filter(|r| solved(r)).count();

    // Root bounds of the baseline come from root-only runs.
    let root_cfg = SolverConfig { node_limit: Some(1), use_rens: false, ..base_cfg.clone() };
    let base_roots: Vec<f64> =
        suite.iter().map(|inst| solve(inst, &root_cfg).unwrap().root_bound.expect("root LP feasible")).collect();

    // Full baseline runs until the solved-count comparison is decided.
    let mut base_solved = 0;
    let mut base_runs = 0;
    let mut best: Vec<f64> = full.iter().map(|r| r.objective.expect("feasible instance")).collect();
    for (k, inst) in suite.iter().enumerate() {
        let remaining = suite.len() - k;
        if k >= MIN_BASELINE_RUNS && base_solved + remaining <= full_solved {
            break;
        }
        let r = solve(inst, &base_cfg).unwrap();
        base_runs += 1;
        base_solved += usize::from(solved(&r));
        if let Some(o) = r.objective {
            best[k] = best[k].min(o);
        }
    }

    let gap = |o: f64, root: f64| (100.0 * (o - root) / o.abs().max(1e-10)).max(0.0);
    let full_gaps: Vec<f64> = full.iter().zip(&best).map(|(r, &o)| gap(o, r.root_bound.unwrap())).collect();
    let base_gaps: Vec<f64> = base_roots.iter().zip(&best).map(|(&root, &o)| gap(o, root)).collect();
    let (gf, gb) = (shifted_geomean(&full_gaps), shifted_geomean(&base_gaps));
    let decided = if base_runs < suite.len() {
        format!(", baseline stopped after {base_runs} runs once it could no longer exceed the full count")
    } else {
        String::new()
    };
    outcome(
        gf <= gb && full_solved >= base_solved,
        format!(
            "root gap geomean {gf:.2}% vs {gb:.2}%, solved {full_solved} vs {base_solved} of 50{decided}, {:.0} s",
            t0.elapsed().as_secs_f64()
        ),
    )
}

fn relaxed_z_integrality() -> Outcome {
    let mut mismatches = 0;
    let mut feasible = 0;
    for seed in 0..100u64 {
        let inst = small_instance(40_000 + seed);
        let relaxed = bigm_optimum(&inst, true).unwrap();
        let binary = bigm_optimum(&inst, false).unwrap();
        let truth = brute_force(&inst).unwrap().objective();
        feasible += usize::from(truth.is_some());
        if relaxed != binary || binary != truth {
            mismatches += 1;
        }
    }
    outcome(mismatches == 0, format!("100 instances ({feasible} feasible), {mismatches} mismatches"))
}

fn main() -> ExitCode {
    let mut all = true;
    let mut report = |k: usize, name: &str, o: Outcome| {
        all &= o.pass;
        println!("criterion {k:>2} {} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    };
    let (c1, c2) = oracle_and_cuts();
    report(1, "oracle equivalence", c1);
    report(2, "cut validity", c2);
    report(3, "strengthening as MIR", strengthening_equivalence());
    report(4, "cover form and dominance", cover_form_and_dominance());
    report(5, "RENS feasibility", rens_guarantee());
    report(6, "infeasibility screen", screen_agreement());
    report(7, "initial cut identity", initial_cut_identity());
    report(8, "column-oriented coverage", column_speedup());
    report(9, "enhancement direction", enhancement_direction());
    report(10, "relaxed z integrality", relaxed_z_integrality());
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
