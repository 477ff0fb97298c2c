//! The `pscp` command line: instance generation, solving, the enumeration
//! oracle, big-M export and batch benchmarks.
//!
//! Every command writes line-delimited JSON records tagged with a `schema`
//! field; `--pretty` switches to a human rendering. Exit codes: 0 success
//! (optimal or feasible), 2 infeasible, 3 limit reached, 1 error.

pub mod bench;
pub mod record;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use pscp_core::export::export_bigm;
use pscp_core::instance::{parse_orlib, read_instance, write_instance};
use pscp_core::oracle::{bitstring, brute_force, OracleResult};
use pscp_core::scenario_gen::{generate, GenConfig, GenKind, ScenarioCount};
use pscp_core::solver::solve_with_log;
use pscp_core::{Instance, SolveStatus};
use serde_json::json;

use record::{pretty_record, pretty_table, ConfigSpec, RunRecord, EVENT_SCHEMA, GENERATE_SCHEMA, ORACLE_SCHEMA};

pub const EXIT_OK: u8 = 0;
pub const EXIT_ERROR: u8 = 1;
pub const EXIT_INFEASIBLE: u8 = 2;
pub const EXIT_LIMIT: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "pscp", version, about = "Probabilistic set covering: generate, solve, verify, export")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a scenario instance from an ORLIB set covering file.
    Generate(GenerateArgs),
    /// Solve an instance with branch-and-Benders-cut.
    Solve(SolveArgs),
    /// Exact optimum by enumeration (n <= 25).
    Oracle(OracleArgs),
    /// Write the big-M model in LP format.
    Export(ExportArgs),
    /// Run every instance of a manifest under every config.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Dist {
    Indep,
    Mixture,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// ORLIB input file.
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "indep")]
    pub dist: Dist,
    /// Scenarios per row: one count, or a comma list with one count per row.
    #[arg(long, default_value = "100")]
    pub s: String,
    #[arg(long, default_value_t = 0.05)]
    pub eps: f64,
    /// Mixture components.
    #[arg(long = "L", default_value_t = 50)]
    pub l: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Upper end of the dropout probability range.
    #[arg(long, default_value_t = 0.4)]
    pub dropout_hi: f64,
    #[arg(short, long)]
    pub out: PathBuf,
    #[arg(long)]
    pub pretty: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SolverArgs {
    #[arg(long, default_value = "bd", value_parser = ["bd", "rbd"])]
    pub mode: String,
    #[arg(long)]
    pub no_initial_cuts: bool,
    #[arg(long)]
    pub no_mir: bool,
    #[arg(long)]
    pub no_rens: bool,
    /// RENS fixing threshold.
    #[arg(long, default_value_t = 0.01)]
    pub theta: f64,
    /// Seconds.
    #[arg(long)]
    pub time_limit: Option<f64>,
    #[arg(long)]
    pub node_limit: Option<usize>,
    /// Percent.
    #[arg(long, default_value_t = 0.0)]
    pub gap_tol: f64,
}

impl SolverArgs {
    pub fn spec(&self) -> ConfigSpec {
        ConfigSpec {
            name: "cli".into(),
            mode: self.mode.clone(),
            initial_cuts: !self.no_initial_cuts,
            mir: !self.no_mir,
            rens: !self.no_rens,
            theta: self.theta,
            time_limit: self.time_limit,
            node_limit: self.node_limit,
            gap_tol: self.gap_tol,
        }
    }
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    pub instance: PathBuf,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Known optimum, used for the RENS primal gap.
    #[arg(long)]
    pub reference: Option<f64>,
    /// Write the event log (JSON lines) to this file.
    #[arg(long)]
    pub log: Option<PathBuf>,
    #[arg(long)]
    pub pretty: bool,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    pub instance: PathBuf,
    /// Print only the `<objective> <bits>` line.
    #[arg(long)]
    pub pretty: bool,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    pub instance: PathBuf,
    /// Relax the scenario indicators to `0 <= z <= 1`.
    #[arg(long)]
    pub relax_z: bool,
    /// Output file; standard output when omitted.
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    pub manifest: PathBuf,
    /// Worker threads; capped by PSCP_THREADS.
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long)]
    pub pretty: bool,
}

pub fn load_instance(path: &Path) -> anyhow::Result<Instance> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    read_instance(&text).with_context(|| format!("parsing {}", path.display()))
}

fn instance_name(path: &Path) -> String {
    path.file_name().map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into_owned())
}

/// Solves `inst` under `spec` and summarizes the run; events go to `log`
/// when given.
pub fn run_solve(
    inst: &Instance,
    name: &str,
    spec: &ConfigSpec,
    reference: Option<f64>,
    log: Option<&mut dyn Write>,
) -> anyhow::Result<RunRecord> {
    let cfg = spec.to_solver_config(reference)?;
    let report = match log {
        None => solve_with_log(inst, &cfg, &mut |_| {})?,
        Some(w) => {
            let mut seq = 0usize;
            let mut failure = None;
            let report = solve_with_log(inst, &cfg, &mut |e| {
                if failure.is_some() {
                    return;
                }
                let mut v = serde_json::to_value(e).expect("events serialize");
                if let Some(obj) = v.as_object_mut() {
                    obj.insert("schema".into(), EVENT_SCHEMA.into());
                    obj.insert("seq".into(), seq.into());
                }
                seq += 1;
                if let Err(err) = writeln!(w, "{v}") {
                    failure = Some(err);
                }
            })?;
            if let Some(err) = failure {
                return Err(err).context("writing the event log");
            }
            report
        }
    };
    Ok(RunRecord::from_report(name, spec, &report))
}

fn status_code(status: &str) -> u8 {
    match status {
        "infeasible" => EXIT_INFEASIBLE,
        "limit" => EXIT_LIMIT,
        "error" => EXIT_ERROR,
        _ => EXIT_OK,
    }
}

fn parse_counts(s: &str) -> anyhow::Result<ScenarioCount> {
    let parts: Vec<usize> = s
        .split(',')
        .map(|p| p.trim().parse::<usize>().with_context(|| format!("bad scenario count {p:?}")))
        .collect::<anyhow::Result<_>>()?;
    Ok(match parts[..] {
        [one] => ScenarioCount::Uniform(one),
        _ => ScenarioCount::PerRow(parts),
    })
}

fn cmd_generate(a: &GenerateArgs, out: &mut dyn Write) -> anyhow::Result<u8> {
    let text = std::fs::read_to_string(&a.input).with_context(|| format!("reading {}", a.input.display()))?;
    let (scp, warnings) = parse_orlib(&text).with_context(|| format!("parsing {}", a.input.display()))?;
    for w in &warnings {
        log::warn!("{}: {w:?}", a.input.display());
    }
    let kind = match a.dist {
        Dist::Indep => GenKind::Independent,
        Dist::Mixture => GenKind::Mixture,
    };
    let cfg = GenConfig {
        kind,
        scenarios: parse_counts(&a.s)?,
        epsilon: a.eps,
        dropout_hi: a.dropout_hi,
        mixture_components: a.l,
        seed: a.seed,
    };
    let mut inst = generate(&scp, &cfg)?;
    inst.meta.insert("source".into(), instance_name(&a.input));
    std::fs::write(&a.out, write_instance(&inst)).with_context(|| format!("writing {}", a.out.display()))?;
    if a.pretty {
        writeln!(out, "wrote {} ({} rows, {} columns, {} scenarios)", a.out.display(), inst.m(), inst.n, inst.scenario_count())?;
    } else {
        let rec = json!({
            "schema": GENERATE_SCHEMA,
            "path": a.out.display().to_string(),
            "m": inst.m(),
            "n": inst.n,
            "scenarios": inst.scenario_count(),
            "meta": inst.meta,
        });
        writeln!(out, "{rec}")?;
    }
    Ok(EXIT_OK)
}

fn cmd_solve(a: &SolveArgs, out: &mut dyn Write) -> anyhow::Result<u8> {
    let inst = load_instance(&a.instance)?;
    let name = instance_name(&a.instance);
    let spec = a.solver.spec();
    let record = match &a.log {
        Some(path) => {
            let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
            let mut w = BufWriter::new(file);
            let r = run_solve(&inst, &name, &spec, a.reference, Some(&mut w))?;
            w.flush()?;
            r
        }
        None => run_solve(&inst, &name, &spec, a.reference, None)?,
    };
    if a.pretty {
        write!(out, "{}", pretty_record(&record))?;
    } else {
        writeln!(out, "{}", serde_json::to_string(&record)?)?;
    }
    Ok(status_code(&record.status))
}

fn cmd_oracle(a: &OracleArgs, out: &mut dyn Write) -> anyhow::Result<u8> {
    let inst = load_instance(&a.instance)?;
    let result = brute_force(&inst)?;
    if a.pretty {
        writeln!(out, "{}", result.record())?;
    } else {
        let (x, objective) = match &result {
            OracleResult::Optimal { x, objective } => (Some(bitstring(x)), Some(*objective)),
            OracleResult::Infeasible => (None, None),
        };
        let rec = json!({
            "schema": ORACLE_SCHEMA,
            "instance": instance_name(&a.instance),
            "status": if objective.is_some() { SolveStatus::Optimal.as_str() } else { SolveStatus::Infeasible.as_str() },
            "objective": objective,
            "x": x,
            "record": result.record(),
        });
        writeln!(out, "{rec}")?;
    }
    Ok(if result == OracleResult::Infeasible { EXIT_INFEASIBLE } else { EXIT_OK })
}

fn cmd_export(a: &ExportArgs, out: &mut dyn Write) -> anyhow::Result<u8> {
    let inst = load_instance(&a.instance)?;
    let text = export_bigm(&inst, a.relax_z);
    match &a.out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(EXIT_OK)
}

fn cmd_bench(a: &BenchArgs, out: &mut dyn Write) -> anyhow::Result<u8> {
    let (manifest, dir) = bench::Manifest::load(&a.manifest)?;
    for c in &manifest.configs {
        c.to_solver_config(None).with_context(|| format!("config {:?}", c.name))?;
    }
    let records = bench::run_bench(&manifest, &dir, bench::worker_count(a.jobs))?;
    let profiles = bench::profiles(&records, &manifest.instances, &manifest.configs);
    if a.pretty {
        write!(out, "{}", pretty_table(&records))?;
        for p in &profiles {
            let pts: Vec<String> = p.points.iter().map(|(t, f)| format!("({t:.3}, {f:.3})")).collect();
            writeln!(out, "profile {} {}: {}", p.metric, p.config, pts.join(" "))?;
        }
    } else {
        for r in &records {
            writeln!(out, "{}", serde_json::to_string(r)?)?;
        }
        for p in &profiles {
            writeln!(out, "{}", serde_json::to_string(p)?)?;
        }
    }
    Ok(EXIT_OK)
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> anyhow::Result<u8> {
    match &cli.command {
        Command::Generate(a) => cmd_generate(a, out),
        Command::Solve(a) => cmd_solve(a, out),
        Command::Oracle(a) => cmd_oracle(a, out),
        Command::Export(a) => cmd_export(a, out),
        Command::Bench(a) => cmd_bench(a, out),
    }
}
