use rand::RngCore;

use super::lmj::select;
use super::Phase2Cutoff;
use crate::engine::SimState;
use crate::graph::NodeId;

/// LMJ-Sampling. Phase 1: every alive node is active with probability 1/2
/// and active local minima join. Phase 2: uncovered nodes whose degree at
/// the start of the call is at most `phase2_cutoff` are active and their
/// local minima join. Each phase removes the 2-hop neighborhood of its
/// joiners. Returns all joiners.
pub fn lmj_sampling(state: &mut SimState<'_>, phase2_cutoff: f64) -> Vec<NodeId> {
    let n = state.graph().node_count();
    let alive = state.alive_nodes();
    let low: Vec<bool> = {
        let mut low = vec![false; n];
        for &v in &alive {
            low[v] = state.alive_degree(v) as f64 <= phase2_cutoff;
        }
        low
    };

    let mut mask = vec![false; n];
    let mut active = Vec::new();
    for &v in &alive {
        if state.rng().next_u64() >> 63 == 1 {
            mask[v] = true;
            active.push(v);
        }
    }
    let mut joined = select(state, &active, &mask);
    state.remove_covered(&joined, 2);

    mask.fill(false);
    let active: Vec<NodeId> = alive.into_iter().filter(|&v| state.is_alive(v) && low[v]).collect();
    for &v in &active {
        mask[v] = true;
    }
    let second = select(state, &active, &mask);
    state.remove_covered(&second, 2);
    joined.extend(second);
    joined.sort_unstable();
    joined
}

/// Phase-2 cutoff for an iteration that starts from degree bound
/// `entry_bound` and targets `delta_star`.
pub(crate) fn phase2_value(mode: Phase2Cutoff, entry_bound: usize, delta_star: usize) -> f64 {
    match mode {
        Phase2Cutoff::SqrtDelta => (entry_bound as f64).sqrt(),
        Phase2Cutoff::DeltaStar34 => (delta_star as f64).powf(0.75),
    }
}

/// `c_tilde` rounds of LMJ-Sampling; returns the accumulated joiners.
pub fn degree_drop_sampling(state: &mut SimState<'_>, c_tilde: usize, phase2_cutoff: f64) -> Vec<NodeId> {
    let mut s = Vec::new();
    for _ in 0..c_tilde {
        s.extend(lmj_sampling(state, phase2_cutoff));
    }
    s.sort_unstable();
    s
}
