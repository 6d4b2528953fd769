use std::collections::HashSet;

use super::rake_compress::{rake_compress_decomposition, NetworkDecomposition};
use super::AlgorithmError;
use crate::engine::RoundCost;
use crate::graph::{bfs_ball, connected_components, diameter_of_induced, Graph, NodeId};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CleanupOutput {
    /// `Z_i` for every input set `W_i`, each ascending.
    pub z: Vec<Vec<NodeId>>,
    pub rounds: usize,
    pub decompositions: Vec<NetworkDecomposition>,
}

// Hard check that the put-aside sets can be solved independently.
fn check_separated(g: &Graph, w_sets: &[Vec<NodeId>], in_set: &[bool]) -> Result<(), AlgorithmError> {
    let mut owner = vec![usize::MAX; g.node_count()];
    for (i, w) in w_sets.iter().enumerate() {
        for &v in w {
            if owner[v] != usize::MAX || in_set[v] {
                return Err(AlgorithmError::PreconditionViolated(format!(
                    "node {v} of W_{} already assigned",
                    i + 1
                )));
            }
            owner[v] = i;
        }
    }
    for (i, w) in w_sets.iter().enumerate() {
        for &v in w {
            for &u in g.neighbors(v) {
                if in_set[u] || (owner[u] != usize::MAX && owner[u] != i) {
                    return Err(AlgorithmError::PreconditionViolated(format!(
                        "put-aside node {v} adjacent to {u}"
                    )));
                }
            }
        }
    }
    Ok(())
}

/// MIS of `T[W_1 ∪ … ∪ W_R]` via a rake-and-compress decomposition of every
/// component. Color-1 clusters are solved before color-2 clusters; each
/// cluster picks a lowest-id greedy extension of what is already chosen.
pub fn clean_up(
    tree: &Graph,
    w_sets: &[Vec<NodeId>],
    in_set: &[bool],
    cost: &RoundCost,
    rake_compress_a: f64,
    rake_compress_b: usize,
) -> Result<CleanupOutput, AlgorithmError> {
    check_separated(tree, w_sets, in_set)?;
    let mut out = CleanupOutput::default();
    let mut chosen = vec![false; tree.node_count()];
    let mut member = vec![false; tree.node_count()];
    let (mut max_iterations, mut max_diameter) = (0, 0);
    let mut any = false;
    for w in w_sets {
        for &v in w {
            member[v] = true;
        }
        let mut z = Vec::new();
        for component in connected_components(tree, w) {
            any = true;
            let nd = rake_compress_decomposition(tree, &component, rake_compress_a, rake_compress_b)?;
            max_iterations = max_iterations.max(nd.iterations);
            max_diameter = max_diameter.max(nd.max_cluster_diameter);
            for c in [1u8, 2] {
                let mut order: Vec<(usize, NodeId)> = (0..nd.nodes.len())
                    .filter(|&i| nd.color[i] == c)
                    .map(|i| (nd.cluster[i], nd.nodes[i]))
                    .collect();
                order.sort_unstable();
                for (_, v) in order {
                    if !tree.neighbors(v).iter().any(|&u| member[u] && chosen[u]) {
                        chosen[v] = true;
                        z.push(v);
                    }
                }
            }
            out.decompositions.push(nd);
        }
        z.sort_unstable();
        out.z.push(z);
    }
    if any {
        out.rounds = max_iterations * cost.rake_compress_iteration
            + 2 * (max_diameter + cost.gather_constant);
    }
    Ok(out)
}

/// Solves every component of every `G[W_i]` by gathering it at a leader:
/// a lowest-id greedy set whose picks are more than `radius` apart inside
/// the component (an MIS when `radius == 1`). Charges `2·diam + const`
/// for the largest component diameter.
pub fn solve_small_components(
    g: &Graph,
    w_sets: &[Vec<NodeId>],
    in_set: &[bool],
    radius: usize,
    cost: &RoundCost,
) -> Result<CleanupOutput, AlgorithmError> {
    check_separated(g, w_sets, in_set)?;
    let mut out = CleanupOutput::default();
    let mut max_diameter = None;
    for w in w_sets {
        let mut z = Vec::new();
        for component in connected_components(g, w) {
            let diam = diameter_of_induced(g, &component);
            max_diameter = Some(max_diameter.unwrap_or(0).max(diam));
            z.extend(greedy_ruling_in_component(g, &component, radius));
        }
        z.sort_unstable();
        out.z.push(z);
    }
    if let Some(d) = max_diameter {
        out.rounds = 2 * d + cost.gather_constant;
    }
    Ok(out)
}

fn greedy_ruling_in_component(g: &Graph, component: &[NodeId], radius: usize) -> Vec<NodeId> {
    let inside = |v: NodeId| component.binary_search(&v).is_ok();
    let mut covered: HashSet<NodeId> = HashSet::new();
    let mut picks = Vec::new();
    for &v in component {
        if covered.insert(v) {
            picks.push(v);
            covered.extend(bfs_ball(g, &[v], radius, inside).into_iter().map(|(u, _)| u));
        }
    }
    picks
}
