use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::high_girth::{beta_bound, ruling_set_high_girth, ruling_set_tree_fast_delta};
use super::tree::ruling_set_tree;
use super::{AlgorithmError, CleanupMode, RulingSetResult, RunConfig};
use crate::graph::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InputRequirement {
    Forest,
    GirthAtLeastSeven,
}

/// A ruling-set pipeline selectable by name.
pub trait RulingSetAlgorithm: Send + Sync {
    fn name(&self) -> &'static str;
    fn requirement(&self) -> InputRequirement;
    /// Domination distance the pipeline guarantees on `g` under `cfg`.
    fn beta_bound(&self, g: &Graph, cfg: &RunConfig) -> usize;
    fn run(&self, g: &Graph, cfg: &RunConfig) -> Result<RulingSetResult, AlgorithmError>;
}

struct Tree2rs;
struct Girth2rs;
struct GirthRelaxedRs;
struct FastDeltaTree2rs;

impl RulingSetAlgorithm for Tree2rs {
    fn name(&self) -> &'static str {
        "tree2rs"
    }
    fn requirement(&self) -> InputRequirement {
        InputRequirement::Forest
    }
    fn beta_bound(&self, _: &Graph, _: &RunConfig) -> usize {
        2
    }
    fn run(&self, g: &Graph, cfg: &RunConfig) -> Result<RulingSetResult, AlgorithmError> {
        ruling_set_tree(g, cfg)
    }
}

impl RulingSetAlgorithm for Girth2rs {
    fn name(&self) -> &'static str {
        "girth2rs"
    }
    fn requirement(&self) -> InputRequirement {
        InputRequirement::GirthAtLeastSeven
    }
    fn beta_bound(&self, g: &Graph, cfg: &RunConfig) -> usize {
        beta_bound(g, cfg, cfg.cleanup_mode)
    }
    fn run(&self, g: &Graph, cfg: &RunConfig) -> Result<RulingSetResult, AlgorithmError> {
        ruling_set_high_girth(g, cfg, cfg.cleanup_mode)
    }
}

impl RulingSetAlgorithm for GirthRelaxedRs {
    fn name(&self) -> &'static str {
        "girth_relaxed_rs"
    }
    fn requirement(&self) -> InputRequirement {
        InputRequirement::GirthAtLeastSeven
    }
    fn beta_bound(&self, g: &Graph, cfg: &RunConfig) -> usize {
        beta_bound(g, cfg, CleanupMode::RelaxedRuling)
    }
    fn run(&self, g: &Graph, cfg: &RunConfig) -> Result<RulingSetResult, AlgorithmError> {
        ruling_set_high_girth(g, cfg, CleanupMode::RelaxedRuling)
    }
}

impl RulingSetAlgorithm for FastDeltaTree2rs {
    fn name(&self) -> &'static str {
        "fast_delta_tree2rs"
    }
    fn requirement(&self) -> InputRequirement {
        InputRequirement::Forest
    }
    fn beta_bound(&self, _: &Graph, _: &RunConfig) -> usize {
        2
    }
    fn run(&self, g: &Graph, cfg: &RunConfig) -> Result<RulingSetResult, AlgorithmError> {
        ruling_set_tree_fast_delta(g, cfg)
    }
}

/// Name-keyed table of pipelines.
pub struct Registry {
    algorithms: BTreeMap<&'static str, Box<dyn RulingSetAlgorithm>>,
}

impl Default for Registry {
    fn default() -> Self {
        let mut r = Registry::empty();
        r.register(Box::new(Tree2rs));
        r.register(Box::new(Girth2rs));
        r.register(Box::new(GirthRelaxedRs));
        r.register(Box::new(FastDeltaTree2rs));
        r
    }
}

impl Registry {
    pub fn empty() -> Self {
        Registry { algorithms: BTreeMap::new() }
    }

    /// Adds or replaces the pipeline registered under its name.
    pub fn register(&mut self, algorithm: Box<dyn RulingSetAlgorithm>) {
        self.algorithms.insert(algorithm.name(), algorithm);
    }

    pub fn get(&self, name: &str) -> Result<&dyn RulingSetAlgorithm, AlgorithmError> {
        self.algorithms
            .get(name)
            .map(|a| a.as_ref())
            .ok_or_else(|| AlgorithmError::UnknownAlgorithm(name.into()))
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.algorithms.keys().copied()
    }

    /// Runs the pipeline named by `cfg.algorithm`.
    pub fn run(&self, g: &Graph, cfg: &RunConfig) -> Result<RulingSetResult, AlgorithmError> {
        self.get(&cfg.algorithm)?.run(g, cfg)
    }
}
