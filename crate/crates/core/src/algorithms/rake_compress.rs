//! Two-color network decomposition of a tree component by rake and compress.
//!
//! Each iteration first rakes every node of residual degree at most 1
//! (color 1), then compresses every maximal path of at least three
//! degree-2 nodes. A compressed path keeps its two ends as color-1
//! separators and splits its interior into color-2 chunks of at most two
//! nodes separated by single color-1 nodes.
//!
//! Every color-1 node has at most one color-1 neighbor removed strictly
//! later, and same-step color-1 neighbors only occur as a raked pair, so a
//! color-1 cluster has diameter at most `4T - 1` after `T` iterations.
//! Color-2 clusters are the chunks themselves.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::AlgorithmError;
use crate::graph::{connected_components, diameter_of_induced, Graph, NodeId};
use crate::verify::greedy_distance_dominating_set;

/// Distance of the dominating set the schedule is sized by.
pub const DOMINATION_DISTANCE: usize = 7;
const CHUNK_MAX: usize = 2;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetworkDecomposition {
    /// Component nodes, ascending.
    pub nodes: Vec<NodeId>,
    /// Color (1 or 2) of `nodes[i]`.
    pub color: Vec<u8>,
    /// Cluster id of `nodes[i]`; clusters are numbered per decomposition.
    pub cluster: Vec<usize>,
    pub cluster_diameter_bound: usize,
    pub max_cluster_diameter: usize,
    pub iterations: usize,
    pub budget_iterations: usize,
    pub dominating_set_size: usize,
    pub within_schedule: bool,
}

/// Iteration budget `ceil(a * log2(s)) + b` for a dominating set of size `s`.
pub fn schedule_budget(s: usize, a: f64, b: usize) -> usize {
    let log = if s <= 1 { 0.0 } else { (s as f64).log2() };
    (a * log).ceil() as usize + b
}

/// Decomposes the tree induced by `component` (connected in `tree`).
pub fn rake_compress_decomposition(
    tree: &Graph,
    component: &[NodeId],
    a: f64,
    b: usize,
) -> Result<NetworkDecomposition, AlgorithmError> {
    let mut nodes = component.to_vec();
    nodes.sort_unstable();
    nodes.dedup();
    let k = nodes.len();
    let index: HashMap<NodeId, usize> = nodes.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let adj: Vec<Vec<usize>> = nodes
        .iter()
        .map(|&v| tree.neighbors(v).iter().filter_map(|w| index.get(w).copied()).collect())
        .collect();
    let induced_edges: usize = adj.iter().map(Vec::len).sum::<usize>() / 2;
    if k > 0 && induced_edges + connected_components(tree, &nodes).len() != k {
        return Err(AlgorithmError::PreconditionViolated(
            "rake-and-compress component contains a cycle".into(),
        ));
    }

    let mut degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut removed = vec![false; k];
    let mut color = vec![0u8; k];
    let mut remaining = k;
    let mut iterations = 0;
    let remove = |i: usize, removed: &mut Vec<bool>, degree: &mut Vec<usize>| {
        removed[i] = true;
        for &j in &adj[i] {
            degree[j] -= 1;
        }
    };
    while remaining > 0 {
        iterations += 1;
        let leaves: Vec<usize> = (0..k).filter(|&i| !removed[i] && degree[i] <= 1).collect();
        for &i in &leaves {
            color[i] = 1;
            remove(i, &mut removed, &mut degree);
        }
        remaining -= leaves.len();

        let mut on_path = vec![false; k];
        let mut paths = Vec::new();
        for start in 0..k {
            if removed[start] || degree[start] != 2 || on_path[start] {
                continue;
            }
            on_path[start] = true;
            let mut halves = [Vec::new(), Vec::new()];
            let live: Vec<usize> = adj[start].iter().copied().filter(|&j| !removed[j]).collect();
            for (half, &first) in halves.iter_mut().zip(&live) {
                let (mut prev, mut cur) = (start, first);
                while !removed[cur] && degree[cur] == 2 && !on_path[cur] {
                    on_path[cur] = true;
                    half.push(cur);
                    let next = adj[cur].iter().copied().find(|&j| !removed[j] && j != prev);
                    match next {
                        Some(nx) => (prev, cur) = (cur, nx),
                        None => break,
                    }
                }
            }
            let [left, right] = halves;
            let mut path: Vec<usize> = left.into_iter().rev().collect();
            path.push(start);
            path.extend(right);
            paths.push(path);
        }
        for path in paths.into_iter().filter(|p| p.len() >= 3) {
            color_path(&path, &mut color);
            for &i in &path {
                remove(i, &mut removed, &mut degree);
            }
            remaining -= path.len();
        }
    }

    let mut cluster = vec![usize::MAX; k];
    let mut next_id = 0;
    let mut max_cluster_diameter = 0;
    for c in [1u8, 2] {
        let class: Vec<NodeId> = (0..k).filter(|&i| color[i] == c).map(|i| nodes[i]).collect();
        for members in connected_components(tree, &class) {
            max_cluster_diameter = max_cluster_diameter.max(diameter_of_induced(tree, &members));
            for v in members {
                cluster[index[&v]] = next_id;
            }
            next_id += 1;
        }
    }

    let dominating_set_size = greedy_distance_dominating_set(tree, &nodes, DOMINATION_DISTANCE).len();
    let budget = schedule_budget(dominating_set_size, a, b);
    Ok(NetworkDecomposition {
        nodes,
        color,
        cluster,
        cluster_diameter_bound: 4 * budget - 1,
        max_cluster_diameter,
        iterations,
        budget_iterations: budget,
        dominating_set_size,
        within_schedule: iterations <= budget,
    })
}

// Ends become separators; the interior alternates chunks of at most
// CHUNK_MAX nodes with single separators, starting and ending with a chunk.
fn color_path(path: &[usize], color: &mut [u8]) {
    let m = path.len();
    color[path[0]] = 1;
    color[path[m - 1]] = 1;
    let interior = &path[1..m - 1];
    let len = interior.len();
    let chunks = (len + 1).div_ceil(CHUNK_MAX + 1);
    let chunk_nodes = len - (chunks - 1);
    let doubles = chunk_nodes - chunks;
    let mut pos = 0;
    for c in 0..chunks {
        if c > 0 {
            color[interior[pos]] = 1;
            pos += 1;
        }
        let size = if c < doubles { 2 } else { 1 };
        for _ in 0..size {
            color[interior[pos]] = 2;
            pos += 1;
        }
    }
    debug_assert_eq!(pos, len);
}
