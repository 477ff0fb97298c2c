use std::fmt::Write as _;

use pscp_core::solver::CutCounts;
use pscp_core::{Mode, SolveReport, SolveStatus, SolverConfig};
use serde::{Deserialize, Serialize};

pub const RUN_SCHEMA: &str = "pscp.run/1";
pub const EVENT_SCHEMA: &str = "pscp.event/1";
pub const PROFILE_SCHEMA: &str = "pscp.profile/1";
pub const GENERATE_SCHEMA: &str = "pscp.generate/1";
pub const ORACLE_SCHEMA: &str = "pscp.oracle/1";

/// Solver settings as they appear in manifests and run records.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConfigSpec {
    pub name: String,
    pub mode: String,
    pub initial_cuts: bool,
    pub mir: bool,
    pub rens: bool,
    pub theta: f64,
    pub time_limit: Option<f64>,
    pub node_limit: Option<usize>,
    pub gap_tol: f64,
}

impl Default for ConfigSpec {
    fn default() -> Self {
        let d = SolverConfig::default();
        ConfigSpec {
            name: "default".into(),
            mode: d.mode.as_str().into(),
            initial_cuts: d.use_initial_cuts,
            mir: d.use_mir,
            rens: d.use_rens,
            theta: d.rens_theta,
            time_limit: d.time_limit_s,
            node_limit: d.node_limit,
            gap_tol: d.gap_tol,
        }
    }
}

pub fn parse_mode(s: &str) -> anyhow::Result<Mode> {
    match s {
        "bd" => Ok(Mode::Bd),
        "rbd" => Ok(Mode::Rbd),
        _ => anyhow::bail!("unknown mode {s:?} (expected bd or rbd)"),
    }
}

impl ConfigSpec {
    pub fn to_solver_config(&self, reference: Option<f64>) -> anyhow::Result<SolverConfig> {
        let cfg = SolverConfig {
            mode: parse_mode(&self.mode)?,
            use_initial_cuts: self.initial_cuts,
            use_mir: self.mir,
            use_rens: self.rens,
            rens_theta: self.theta,
            time_limit_s: self.time_limit,
            node_limit: self.node_limit,
            gap_tol: self.gap_tol,
            reference_objective: reference,
            ..SolverConfig::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub schema: String,
    pub instance: String,
    pub config: ConfigSpec,
    /// `optimal`, `feasible`, `infeasible`, `limit`, or `error`.
    pub status: String,
    pub objective: Option<f64>,
    pub bound: Option<f64>,
    pub time_s: f64,
    pub separation_time_s: f64,
    pub end_gap: Option<f64>,
    pub root_gap: Option<f64>,
    pub nodes: usize,
    pub cuts: Cuts,
    pub rens_objective: Option<f64>,
    pub rens_primal_gap: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cuts {
    pub initial: usize,
    pub benders: usize,
    pub mir: usize,
}

impl From<CutCounts> for Cuts {
    fn from(c: CutCounts) -> Self {
        Cuts { initial: c.initial, benders: c.benders, mir: c.mir }
    }
}

impl RunRecord {
    pub fn from_report(instance: &str, config: &ConfigSpec, r: &SolveReport) -> Self {
        RunRecord {
            schema: RUN_SCHEMA.into(),
            instance: instance.into(),
            config: config.clone(),
            status: r.status.as_str().into(),
            objective: r.objective,
            bound: (r.status != SolveStatus::Infeasible).then_some(r.bound).filter(|b| b.is_finite()),
            time_s: r.wall_time,
            separation_time_s: r.separation_time,
            end_gap: r.end_gap,
            root_gap: r.root_gap,
            nodes: r.nodes,
            cuts: r.cuts.into(),
            rens_objective: r.rens.as_ref().map(|o| o.objective),
            rens_primal_gap: r.rens.as_ref().and_then(|o| o.primal_gap),
            error: None,
        }
    }

    pub fn failed(instance: &str, config: &ConfigSpec, err: &anyhow::Error) -> Self {
        RunRecord {
            schema: RUN_SCHEMA.into(),
            instance: instance.into(),
            config: config.clone(),
            status: "error".into(),
            objective: None,
            bound: None,
            time_s: 0.0,
            separation_time_s: 0.0,
            end_gap: None,
            root_gap: None,
            nodes: 0,
            cuts: Cuts::default(),
            rens_objective: None,
            rens_primal_gap: None,
            error: Some(format!("{err:#}")),
        }
    }

    pub fn solved(&self) -> bool {
        self.status == "optimal" || self.status == "feasible"
    }
}

fn opt(v: Option<f64>, digits: usize) -> String {
    v.map_or_else(|| "-".to_string(), |v| format!("{v:.digits$}"))
}

/// Key/value rendering of one record.
pub fn pretty_record(r: &RunRecord) -> String {
    let mut out = String::new();
    let rows = [
        ("instance", r.instance.clone()),
        ("config", format!("{} (mode {})", r.config.name, r.config.mode)),
        ("status", r.status.clone()),
        ("objective", opt(r.objective, 4)),
        ("bound", opt(r.bound, 4)),
        ("end gap %", opt(r.end_gap, 4)),
        ("root gap %", opt(r.root_gap, 4)),
        ("nodes", r.nodes.to_string()),
        ("cuts", format!("{} initial, {} benders, {} mir", r.cuts.initial, r.cuts.benders, r.cuts.mir)),
        ("rens objective", opt(r.rens_objective, 4)),
        ("rens primal gap %", opt(r.rens_primal_gap, 4)),
        ("time s", format!("{:.3} (separation {:.3})", r.time_s, r.separation_time_s)),
    ];
    for (k, v) in rows {
        let _ = writeln!(out, "{k:<18} {v}");
    }
    if let Some(e) = &r.error {
        let _ = writeln!(out, "{:<18} {e}", "error");
    }
    out
}

/// One line per record.
pub fn pretty_table(records: &[RunRecord]) -> String {
    let mut out = format!(
        "{:<24} {:<12} {:<10} {:>12} {:>9} {:>9} {:>8} {:>6} {:>9}\n",
        "instance", "config", "status", "objective", "end gap", "root gap", "nodes", "cuts", "time s"
    );
    for r in records {
        let _ = writeln!(
            out,
            "{:<24} {:<12} {:<10} {:>12} {:>9} {:>9} {:>8} {:>6} {:>9.3}",
            r.instance,
            r.config.name,
            r.status,
            opt(r.objective, 2),
            opt(r.end_gap, 2),
            opt(r.root_gap, 2),
            r.nodes,
            r.cuts.initial + r.cuts.benders + r.cuts.mir,
            r.time_s
        );
    }
    out
}
