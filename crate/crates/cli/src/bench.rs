//! Batch runs from a JSON manifest and performance profiles.
//!
//! ```json
//! {
//!   "instances": ["a.pscp", "b.pscp"],
//!   "configs": [{"name": "bd"}, {"name": "rbd", "mode": "rbd", "mir": false}],
//!   "reference": {"a.pscp": 1860}
//! }
//! ```
//!
//! Instance paths are relative to the manifest. Records come out
//! instance-major in manifest order whatever the parallelism.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::Context;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::record::{ConfigSpec, RunRecord, PROFILE_SCHEMA};
use crate::{load_instance, run_solve};

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    #[serde(default)]
    pub instances: Vec<String>,
    #[serde(default)]
    pub configs: Vec<ConfigSpec>,
    /// Known optima by instance entry, for the RENS primal gap.
    #[serde(default)]
    pub reference: BTreeMap<String, f64>,
}

impl Manifest {
    pub fn load(path: &Path) -> anyhow::Result<(Self, PathBuf)> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading manifest {}", path.display()))?;
        let m: Manifest = serde_json::from_str(&text).with_context(|| format!("parsing manifest {}", path.display()))?;
        let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok((m, dir))
    }
}

/// Worker count: the request (or the machine's parallelism), capped by
/// `PSCP_THREADS` when set.
pub fn worker_count(requested: Option<usize>) -> usize {
    let base = requested.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let cap = std::env::var("PSCP_THREADS").ok().and_then(|v| v.parse::<usize>().ok()).filter(|&c| c > 0);
    cap.map_or(base, |c| base.min(c)).max(1)
}

pub fn run_bench(manifest: &Manifest, dir: &Path, workers: usize) -> anyhow::Result<Vec<RunRecord>> {
    let runs: Vec<(&String, &ConfigSpec)> =
        manifest.instances.iter().flat_map(|i| manifest.configs.iter().map(move |c| (i, c))).collect();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build()?;
    Ok(pool.install(|| {
        runs.par_iter()
            .map(|&(entry, spec)| {
                let result = load_instance(&dir.join(entry))
                    .and_then(|inst| run_solve(&inst, entry, spec, manifest.reference.get(entry).copied(), None));
                result.unwrap_or_else(|e| {
                    log::warn!("{entry} / {}: {e:#}", spec.name);
                    RunRecord::failed(entry, spec, &e)
                })
            })
            .collect()
    }))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Profile {
    pub schema: String,
    /// `time`: fraction of instances solved within `tau` times the fastest
    /// config. `end_gap`: fraction of instances with end gap at most `tau`
    /// percent.
    pub metric: String,
    pub config: String,
    pub points: Vec<(f64, f64)>,
}

fn step_points(values: &[f64], taus: &[f64], total: usize) -> Vec<(f64, f64)> {
    taus.iter()
        .map(|&t| (t, values.iter().filter(|&&v| v <= t).count() as f64 / total.max(1) as f64))
        .collect()
}

fn sorted_unique(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

/// Floor on run times so that instant runs do not produce infinite ratios.
const MIN_TIME: f64 = 1e-6;

pub fn profiles(records: &[RunRecord], instances: &[String], configs: &[ConfigSpec]) -> Vec<Profile> {
    let find = |i: &str, c: &str| records.iter().find(|r| r.instance == i && r.config.name == c);
    let mut ratios: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
    let mut gaps: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
    for inst in instances {
        let best = configs
            .iter()
            .filter_map(|c| find(inst, &c.name).filter(|r| r.solved()).map(|r| r.time_s.max(MIN_TIME)))
            .fold(f64::INFINITY, f64::min);
        for c in configs {
            let rec = find(inst, &c.name);
            if let Some(r) = rec.filter(|r| r.solved()) {
                ratios.entry(&c.name).or_default().push(r.time_s.max(MIN_TIME) / best);
            }
            if let Some(g) = rec.and_then(|r| r.end_gap) {
                gaps.entry(&c.name).or_default().push(g);
            }
        }
    }
    let time_taus = sorted_unique(ratios.values().flatten().copied().chain([1.0]).collect());
    let gap_taus = sorted_unique(gaps.values().flatten().copied().chain([0.0]).collect());
    let mut out = Vec::new();
    for c in configs {
        let r = ratios.get(c.name.as_str()).map_or(&[][..], Vec::as_slice);
        out.push(Profile {
            schema: PROFILE_SCHEMA.into(),
            metric: "time".into(),
            config: c.name.clone(),
            points: step_points(r, &time_taus, instances.len()),
        });
    }
    for c in configs {
        let g = gaps.get(c.name.as_str()).map_or(&[][..], Vec::as_slice);
        out.push(Profile {
            schema: PROFILE_SCHEMA.into(),
            metric: "end_gap".into(),
            config: c.name.clone(),
            points: step_points(g, &gap_taus, instances.len()),
        });
    }
    out
}
