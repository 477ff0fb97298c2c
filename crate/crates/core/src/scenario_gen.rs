//! Scenario synthesis from deterministic SCP matrices.
//!
//! Two dropout models are supported. In the independent model every entry
//! `j in supp(A_i)` disappears with its own probability `p_ij`. In the
//! Bernoulli mixture model each scenario first draws a component `l` from a
//! prior and then drops entries independently with `p_ijl`. Columns outside
//! `supp(A_i)` never appear in a scenario of row `i`.
//!
//! # Random streams
//!
//! Every draw comes from a ChaCha8 generator keyed by
//! `ChaCha8Rng::seed_from_u64(seed)` and positioned on its own stream:
//!
//! ```text
//! stream = tag << 56 | row << 24 | index
//! ```
//!
//! with `tag` 1 for dropout probabilities (`index` = mixture component),
//! 2 for the mixture prior, 3 for the keep/drop draws of scenario `index`
//! and 4 for the component choice of scenario `index`. Rows are generated in
//! parallel; the stream layout makes the output independent of the worker
//! count. A mixture with one component consumes exactly the same dropout and
//! keep/drop streams as the independent model, so both produce identical
//! instances for the same seed.

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::instance::{DeterministicScp, Instance, ScenarioBlock};

const TAG_DROPOUT: u64 = 1;
const TAG_PRIOR: u64 = 2;
const TAG_KEEP: u64 = 3;
const TAG_COMPONENT: u64 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenKind {
    Independent,
    Mixture,
}

impl GenKind {
    pub fn as_str(self) -> &'static str {
        match self {
            GenKind::Independent => "indep",
            GenKind::Mixture => "mixture",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScenarioCount {
    Uniform(usize),
    PerRow(Vec<usize>),
}

impl ScenarioCount {
    fn for_row(&self, i: usize) -> usize {
        match self {
            ScenarioCount::Uniform(s) => *s,
            ScenarioCount::PerRow(v) => v[i],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenConfig {
    pub kind: GenKind,
    pub scenarios: ScenarioCount,
    pub epsilon: f64,
    pub dropout_hi: f64,
    pub mixture_components: usize,
    pub seed: u64,
}

impl GenConfig {
    pub fn new(kind: GenKind, s: usize, epsilon: f64, seed: u64) -> Self {
        GenConfig {
            kind,
            scenarios: ScenarioCount::Uniform(s),
            epsilon,
            dropout_hi: 0.4,
            mixture_components: 50,
            seed,
        }
    }

    pub fn validate(&self, m: usize) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        match &self.scenarios {
            ScenarioCount::Uniform(0) => return bad("scenario count must be at least 1".into()),
            ScenarioCount::PerRow(v) if v.len() != m => {
                return bad(format!("per-row scenario list has {} entries for {m} rows", v.len()))
            }
            ScenarioCount::PerRow(v) if v.contains(&0) => {
                return bad("scenario count must be at least 1".into())
            }
            _ => {}
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return bad(format!("epsilon {} outside (0,1)", self.epsilon));
        }
        if !(self.dropout_hi >= 0.0 && self.dropout_hi <= 1.0) {
            return bad(format!("dropout upper bound {} outside [0,1]", self.dropout_hi));
        }
        if self.mixture_components == 0 {
            return bad("mixture needs at least one component".into());
        }
        Ok(())
    }
}

fn stream(seed: u64, tag: u64, row: usize, index: usize) -> ChaCha8Rng {
    debug_assert!(row < 1 << 32 && index < 1 << 24);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(tag << 56 | (row as u64) << 24 | index as u64);
    rng
}

fn dropout_probs(seed: u64, row: usize, component: usize, len: usize, hi: f64) -> Vec<f64> {
    let mut rng = stream(seed, TAG_DROPOUT, row, component);
    (0..len).map(|_| hi * rng.gen::<f64>()).collect()
}

/// Keeps column `support[k]` unless a uniform draw falls strictly below its
/// dropout probability.
fn draw_scenario(rng: &mut ChaCha8Rng, support: &[usize], dropout: &[f64]) -> Vec<usize> {
    support
        .iter()
        .zip(dropout)
        .filter(|(_, &p)| !(rng.gen::<f64>() < p))
        .map(|(&j, _)| j)
        .collect()
}

/// Mixture parameters: a prior over components and per-(row, column,
/// component) dropout probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct MixtureModel {
    pub priors: Vec<f64>,
    /// `dropout[i][l][k]` belongs to column `supp(A_i)[k]`.
    pub dropout: Vec<Vec<Vec<f64>>>,
}

impl MixtureModel {
    pub fn draw(scp: &DeterministicScp, cfg: &GenConfig) -> Self {
        let l = cfg.mixture_components;
        let mut rng = stream(cfg.seed, TAG_PRIOR, 0, 0);
        let mut priors: Vec<f64> = (0..l).map(|_| rng.gen::<f64>()).collect();
        let total: f64 = priors.iter().sum();
        if total > 0.0 {
            priors.iter_mut().for_each(|p| *p /= total);
        } else {
            priors.fill(1.0 / l as f64);
        }
        let dropout = (0..scp.m())
            .into_par_iter()
            .map(|i| {
                (0..l)
                    .map(|c| dropout_probs(cfg.seed, i, c, scp.rows[i].len(), cfg.dropout_hi))
                    .collect()
            })
            .collect();
        MixtureModel { priors, dropout }
    }
}

/// Independent Bernoulli dropout with `p_ij ~ U[0, dropout_hi]`.
pub fn gen_independent(scp: &DeterministicScp, cfg: &GenConfig) -> Result<Instance> {
    cfg.validate(scp.m())?;
    let blocks = (0..scp.m())
        .into_par_iter()
        .map(|i| {
            let support = &scp.rows[i];
            let dropout = dropout_probs(cfg.seed, i, 0, support.len(), cfg.dropout_hi);
            let s = cfg.scenarios.for_row(i);
            let scenarios = (0..s)
                .map(|w| draw_scenario(&mut stream(cfg.seed, TAG_KEEP, i, w), support, &dropout))
                .collect();
            ScenarioBlock::new(scp.n, scenarios, vec![1.0 / s as f64; s], cfg.epsilon)
        })
        .collect();
    Ok(finish(scp, cfg, blocks))
}

/// Bernoulli mixture dropout: each scenario samples a component from the
/// prior, then drops entries independently with that component's `p_ijl`.
pub fn gen_mixture(scp: &DeterministicScp, cfg: &GenConfig) -> Result<Instance> {
    cfg.validate(scp.m())?;
    let model = MixtureModel::draw(scp, cfg);
    let chooser = WeightedIndex::new(&model.priors)
        .map_err(|e| Error::InvalidConfig(format!("mixture prior: {e}")))?;
    let blocks = (0..scp.m())
        .into_par_iter()
        .map(|i| {
            let support = &scp.rows[i];
            let s = cfg.scenarios.for_row(i);
            let scenarios = (0..s)
                .map(|w| {
                    let comp = if model.priors.len() == 1 {
                        0
                    } else {
                        chooser.sample(&mut stream(cfg.seed, TAG_COMPONENT, i, w))
                    };
                    draw_scenario(&mut stream(cfg.seed, TAG_KEEP, i, w), support, &model.dropout[i][comp])
                })
                .collect();
            ScenarioBlock::new(scp.n, scenarios, vec![1.0 / s as f64; s], cfg.epsilon)
        })
        .collect();
    Ok(finish(scp, cfg, blocks))
}

pub fn generate(scp: &DeterministicScp, cfg: &GenConfig) -> Result<Instance> {
    match cfg.kind {
        GenKind::Independent => gen_independent(scp, cfg),
        GenKind::Mixture => gen_mixture(scp, cfg),
    }
}

fn finish(scp: &DeterministicScp, cfg: &GenConfig, blocks: Vec<ScenarioBlock>) -> Instance {
    let mut inst = Instance::new(scp.n, scp.cost.iter().map(|&c| c as f64).collect(), blocks);
    inst.meta.insert("dist".into(), cfg.kind.as_str().into());
    inst.meta.insert("seed".into(), cfg.seed.to_string());
    inst.meta.insert("eps".into(), format!("{}", cfg.epsilon));
    inst.meta.insert("dropout_hi".into(), format!("{}", cfg.dropout_hi));
    match &cfg.scenarios {
        ScenarioCount::Uniform(s) => inst.meta.insert("s".into(), s.to_string()),
        ScenarioCount::PerRow(v) => {
            inst.meta.insert("s".into(), v.iter().map(usize::to_string).collect::<Vec<_>>().join(","))
        }
    };
    if cfg.kind == GenKind::Mixture {
        inst.meta.insert("L".into(), cfg.mixture_components.to_string());
    }
    inst
}

/// A random deterministic SCP in the style of the ORLIB `scp4x` family:
/// every row has at least two columns, every column covers at least one row,
/// costs are uniform integers in `[1, 100]`.
pub fn synthetic_scp(m: usize, n: usize, density: f64, seed: u64) -> DeterministicScp {
    let mut rng = stream(seed, 0, 0, 0);
    let mut rows: Vec<Vec<usize>> = (0..m)
        .map(|_| (0..n).filter(|_| rng.gen::<f64>() < density).collect())
        .collect();
    for row in rows.iter_mut() {
        while row.len() < 2.min(n) {
            let j = rng.gen_range(0..n);
            if !row.contains(&j) {
                row.push(j);
            }
        }
    }
    if m > 0 {
        for j in 0..n {
            if !rows.iter().any(|r| r.contains(&j)) {
                rows[rng.gen_range(0..m)].push(j);
            }
        }
    }
    rows.iter_mut().for_each(|r| r.sort_unstable());
    let cost = (0..n).map(|_| rng.gen_range(1..=100)).collect();
    DeterministicScp { n, cost, rows }
}
