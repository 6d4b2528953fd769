//! Ruling-set pipelines and their building blocks.

mod cleanup;
mod degree_drop;
mod high_girth;
mod lmj;
mod mis;
mod rake_compress;
mod registry;
mod sampling;
mod tree;

pub use cleanup::{clean_up, solve_small_components, CleanupOutput};
pub use degree_drop::{degree_drop, DegreeDropAudit, DegreeDropOutput, DegreeDropParams};
pub use high_girth::{relaxed_radius, ruling_set_high_girth, ruling_set_tree_fast_delta};
pub use lmj::local_minima_join;
pub use mis::{greedy_mis, mis_constant_degree};
pub use rake_compress::{rake_compress_decomposition, schedule_budget, NetworkDecomposition};
pub use registry::{InputRequirement, Registry, RulingSetAlgorithm};
pub use sampling::{degree_drop_sampling, lmj_sampling};
pub use tree::{ruling_set_tree, threshold_schedule};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::{PhaseRecord, RoundCost};
use crate::graph::NodeId;

#[derive(Debug, Error)]
pub enum AlgorithmError {
    #[error("input graph is not a forest")]
    NotAForest,
    #[error("input graph has girth {0}, at least 7 is required")]
    GirthTooSmall(usize),
    #[error("unknown algorithm {0:?}")]
    UnknownAlgorithm(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    /// An internal invariant failed; indicates a pipeline bug.
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
}

/// Activation threshold for the second phase of LMJ-Sampling.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase2Cutoff {
    /// Square root of the degree bound the iteration starts from.
    #[default]
    SqrtDelta,
    /// `Δ*^{3/4}` for the iteration's target threshold `Δ*`.
    DeltaStar34,
}

/// How the put-aside components of the high-girth pipeline are finished.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CleanupMode {
    #[default]
    ExactMis,
    RelaxedRuling,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub algorithm: String,
    pub seed: u64,
    /// Degree-Drop runs `16 * c` LMJ iterations.
    pub c: usize,
    /// Degree-Drop-Sampling runs `c_tilde` LMJ-Sampling iterations.
    pub c_tilde: usize,
    /// Degree bound handed to the final constant-degree MIS.
    pub mis_degree_cutoff: usize,
    /// `Δ_small = max(ceil(log2(n)^e), mis_degree_cutoff)`.
    pub delta_small_exponent: f64,
    pub phase2_cutoff: Phase2Cutoff,
    pub cleanup_mode: CleanupMode,
    /// Ruling radius inside put-aside components in relaxed mode;
    /// `None` derives it from the component size bound.
    pub relaxed_radius: Option<usize>,
    /// Rake-and-compress budget `ceil(a * log2(s)) + b`.
    pub rake_compress_a: f64,
    pub rake_compress_b: usize,
    /// Girth is checked exactly up to this many edges.
    pub girth_check_edge_limit: usize,
    pub cost: RoundCost,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            algorithm: "tree2rs".into(),
            seed: 0,
            c: 1,
            c_tilde: 8,
            mis_degree_cutoff: 18,
            delta_small_exponent: 3.0,
            phase2_cutoff: Phase2Cutoff::SqrtDelta,
            cleanup_mode: CleanupMode::ExactMis,
            relaxed_radius: None,
            rake_compress_a: 3.0,
            rake_compress_b: 7,
            girth_check_edge_limit: 100_000,
            cost: RoundCost::default(),
        }
    }
}

impl RunConfig {
    /// LMJ iterations per Degree-Drop call.
    pub fn lmj_iterations(&self) -> usize {
        16 * self.c
    }

    pub fn validate(&self) -> Result<(), AlgorithmError> {
        let bad = |m: &str| Err(AlgorithmError::InvalidConfig(m.into()));
        if self.c == 0 {
            return bad("c must be at least 1");
        }
        if self.mis_degree_cutoff == 0 {
            return bad("mis_degree_cutoff must be at least 1");
        }
        if !(self.delta_small_exponent.is_finite() && self.delta_small_exponent > 0.0) {
            return bad("delta_small_exponent must be positive");
        }
        if !(self.rake_compress_a.is_finite() && self.rake_compress_a >= 0.0) {
            return bad("rake_compress_a must be non-negative");
        }
        if self.relaxed_radius == Some(0) {
            return bad("relaxed_radius must be at least 1");
        }
        self.cost.validate().map_err(AlgorithmError::InvalidConfig)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    /// Degree-Drop-Sampling iteration (no put-aside set).
    Sampling,
    /// Degree-Drop iteration with put-aside set `W_i`.
    DegreeDrop,
}

/// One iteration of a pipeline loop.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub stage: Stage,
    pub index: usize,
    /// Degree bound of the residual graph when the iteration started.
    pub entry_bound: usize,
    /// Target threshold `Δ*` of the iteration.
    pub threshold: usize,
    /// `S_i` (or `P_i` in the second loop of the high-girth pipeline).
    pub joined: Vec<NodeId>,
    pub put_aside: Vec<NodeId>,
    /// Clean-up result `Z_i ⊆ W_i`.
    pub cleanup: Vec<NodeId>,
    pub max_alive_degree_after: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RulingSetResult {
    pub algorithm: String,
    pub seed: u64,
    pub n: usize,
    /// The ruling set, ascending.
    pub set: Vec<NodeId>,
    pub iterations: Vec<IterationRecord>,
    /// MIS of the residual constant-degree graph.
    pub final_mis: Vec<NodeId>,
    /// Domination distance the pipeline guarantees.
    pub beta_bound: usize,
    pub rounds_total: usize,
    pub phases: Vec<PhaseRecord>,
    pub delta_max: usize,
    pub delta_small: Option<usize>,
    pub audits: Vec<DegreeDropAudit>,
    pub decompositions: Vec<NetworkDecomposition>,
    /// Ruling radius used inside put-aside components (1 for an MIS).
    pub cleanup_radius: usize,
}

impl RulingSetResult {
    pub(crate) fn trivial(algorithm: &str, seed: u64, n: usize, beta_bound: usize) -> Self {
        RulingSetResult {
            algorithm: algorithm.into(),
            seed,
            n,
            set: Vec::new(),
            iterations: Vec::new(),
            final_mis: Vec::new(),
            beta_bound,
            rounds_total: 0,
            phases: Vec::new(),
            delta_max: 0,
            delta_small: None,
            audits: Vec::new(),
            decompositions: Vec::new(),
            cleanup_radius: 1,
        }
    }

    /// Put-aside sets `W_i` of the degree-drop iterations, in order.
    pub fn put_aside_sets(&self) -> Vec<&[NodeId]> {
        self.iterations
            .iter()
            .filter(|it| it.stage == Stage::DegreeDrop)
            .map(|it| it.put_aside.as_slice())
            .collect()
    }
}
