use crate::engine::SimState;
use crate::graph::NodeId;

/// Draws fresh values for `candidates` (alive nodes) and returns those that
/// are local minima among their candidate neighbors. Nobody is removed.
pub fn local_minima_join(state: &mut SimState<'_>, candidates: &[NodeId]) -> Vec<NodeId> {
    let mut mask = vec![false; state.graph().node_count()];
    for &v in candidates {
        mask[v] = true;
    }
    select(state, candidates, &mask)
}

pub(crate) fn select(state: &mut SimState<'_>, candidates: &[NodeId], mask: &[bool]) -> Vec<NodeId> {
    state.charge(state.cost().lmj_selection());
    state.fresh_draws(candidates);
    candidates
        .iter()
        .copied()
        .filter(|&v| state.is_local_minimum(v, mask))
        .collect()
}

/// One LMJ iteration over every alive node followed by radius-2 removal.
pub(crate) fn lmj_round_all_alive(state: &mut SimState<'_>) -> Vec<NodeId> {
    let alive = state.alive_nodes();
    let mask = state.alive_mask().to_vec();
    let joined = select(state, &alive, &mask);
    state.remove_covered(&joined, 2);
    joined
}
