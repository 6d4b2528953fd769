use serde::{Deserialize, Serialize};

use super::lmj::lmj_round_all_alive;
use crate::engine::SimState;
use crate::graph::NodeId;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeDropParams {
    /// Nodes whose residual degree exceeds this are put aside.
    pub delta_star: usize,
    /// Length of the LMJ loop, `16c` for the constant `c`.
    pub lmj_iterations: usize,
}

impl DegreeDropParams {
    pub fn with_c(delta_star: usize, c: usize) -> Self {
        DegreeDropParams { delta_star, lmj_iterations: 16 * c }
    }

    /// Degree below which a neighbor counts as low-degree in the analysis.
    pub fn low_degree_cutoff(&self) -> f64 {
        (self.delta_star as f64).powf(0.75)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DegreeDropOutput {
    pub s: Vec<NodeId>,
    pub w: Vec<NodeId>,
}

/// Snapshot of one Degree-Drop call, enough to re-check its deterministic
/// guarantees from scratch.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeDropAudit {
    pub delta_star: usize,
    /// Residual graph the call started from.
    pub alive_before: Vec<bool>,
    /// Residual graph after the LMJ loop, before `W` is set aside.
    pub alive_after: Vec<bool>,
    pub s: Vec<NodeId>,
    pub w: Vec<NodeId>,
}

/// Runs `params.lmj_iterations` LMJ iterations with radius-2 removal, then returns the joiners
/// `S` and the put-aside set `W` of survivors with residual degree above
/// `Δ*`. `W` is left alive; the caller decides how to remove it.
pub fn degree_drop(state: &mut SimState<'_>, params: DegreeDropParams) -> DegreeDropOutput {
    degree_drop_impl(state, params, false).0
}

pub(crate) fn degree_drop_audited(
    state: &mut SimState<'_>,
    params: DegreeDropParams,
) -> (DegreeDropOutput, DegreeDropAudit) {
    let (out, audit) = degree_drop_impl(state, params, true);
    (out, audit.expect("audit requested"))
}

fn degree_drop_impl(
    state: &mut SimState<'_>,
    params: DegreeDropParams,
    audit: bool,
) -> (DegreeDropOutput, Option<DegreeDropAudit>) {
    let alive_before = audit.then(|| state.alive_mask().to_vec());
    let mut s = Vec::new();
    for _ in 0..params.lmj_iterations {
        s.extend(lmj_round_all_alive(state));
    }
    s.sort_unstable();
    state.charge(state.cost().degree_check);
    let w: Vec<NodeId> = state
        .alive_nodes()
        .into_iter()
        .filter(|&v| state.alive_degree(v) > params.delta_star)
        .collect();
    let record = alive_before.map(|before| DegreeDropAudit {
        delta_star: params.delta_star,
        alive_before: before,
        alive_after: state.alive_mask().to_vec(),
        s: s.clone(),
        w: w.clone(),
    });
    (DegreeDropOutput { s, w }, record)
}
