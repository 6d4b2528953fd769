use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Graph, GraphError, NodeId};

/// Attempts allowed per added edge before the high-girth generator stops
/// filling the current node.
pub const GIRTH_RETRY_BUDGET: usize = 100;

/// Instance families used by the experiments.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum GraphFamily {
    /// Uniformly random labeled tree on `n` nodes (Prüfer construction).
    UniformRandomTree { n: usize },
    /// Root with `d1` children, each with `d2` children; when `d3 > 0` every
    /// second-level node additionally gets `d3` leaf children.
    StarOfStars { d1: usize, d2: usize, d3: usize },
    /// Girth ≥ 7 graph with maximum degree `target_degree`.
    HighGirthRegularish { n: usize, target_degree: usize },
    Path { n: usize },
    Star { n: usize },
    /// Spine path of `spine` nodes, each carrying `legs` leaves.
    Caterpillar { spine: usize, legs: usize },
    ExplicitFile { path: PathBuf },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphFamilySpec {
    #[serde(flatten)]
    pub family: GraphFamily,
    pub seed: u64,
}

impl GraphFamilySpec {
    pub fn new(family: GraphFamily, seed: u64) -> Self {
        GraphFamilySpec { family, seed }
    }

    pub fn validate(&self) -> Result<(), GraphError> {
        let bad = |m: &str| Err(GraphError::InvalidSpec(m.to_string()));
        match self.family {
            GraphFamily::UniformRandomTree { n }
            | GraphFamily::Path { n }
            | GraphFamily::Star { n }
                if n == 0 =>
            {
                bad("n must be positive")
            }
            GraphFamily::StarOfStars { d1, d2, .. } if d1 == 0 || d2 == 0 => {
                bad("star_of_stars needs d1, d2 >= 1")
            }
            GraphFamily::HighGirthRegularish { n, target_degree } if n == 0 || target_degree < 2 => {
                bad("high_girth_regularish needs n >= 1 and target_degree >= 2")
            }
            GraphFamily::Caterpillar { spine: 0, .. } => bad("spine must be positive"),
            _ => Ok(()),
        }
    }
}

/// Builds an instance of the requested family, deterministic per seed.
pub fn generate(spec: &GraphFamilySpec) -> Result<Graph, GraphError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    match &spec.family {
        GraphFamily::UniformRandomTree { n } => Ok(random_tree(*n, &mut rng)),
        GraphFamily::StarOfStars { d1, d2, d3 } => Ok(star_of_stars(*d1, *d2, *d3)),
        GraphFamily::HighGirthRegularish { n, target_degree } => {
            high_girth(*n, *target_degree, &mut rng)
        }
        GraphFamily::Path { n } => Graph::from_edges(*n, (1..*n).map(|i| (i - 1, i))),
        GraphFamily::Star { n } => Graph::from_edges(*n, (1..*n).map(|i| (0, i))),
        GraphFamily::Caterpillar { spine, legs } => {
            let n = spine * (legs + 1);
            let mut edges: Vec<(NodeId, NodeId)> = (1..*spine).map(|i| (i - 1, i)).collect();
            for s in 0..*spine {
                for l in 0..*legs {
                    edges.push((s, spine + s * legs + l));
                }
            }
            Graph::from_edges(n, edges)
        }
        GraphFamily::ExplicitFile { path } => super::io::load_edge_list_file(path),
    }
}

fn random_tree(n: usize, rng: &mut ChaCha8Rng) -> Graph {
    if n <= 2 {
        return Graph::from_edges(n, (1..n).map(|i| (0, i))).expect("valid");
    }
    let seq: Vec<NodeId> = (0..n - 2).map(|_| rng.random_range(0..n)).collect();
    Graph::from_edges(n, prufer_decode(&seq, n)).expect("Prüfer decoding yields a tree")
}

/// Linear-time Prüfer decoding; `seq` has length `n - 2` with entries `< n`.
pub fn prufer_decode(seq: &[NodeId], n: usize) -> Vec<(NodeId, NodeId)> {
    assert!(n >= 2 && seq.len() == n - 2);
    let mut degree = vec![1usize; n];
    for &v in seq {
        degree[v] += 1;
    }
    let mut ptr = (0..n).find(|&v| degree[v] == 1).expect("a leaf exists");
    let mut leaf = ptr;
    let mut edges = Vec::with_capacity(n - 1);
    for &v in seq {
        edges.push((leaf, v));
        degree[v] -= 1;
        if degree[v] == 1 && v < ptr {
            leaf = v;
        } else {
            ptr += 1;
            while degree[ptr] != 1 {
                ptr += 1;
            }
            leaf = ptr;
        }
    }
    edges.push((leaf, n - 1));
    edges
}

fn star_of_stars(d1: usize, d2: usize, d3: usize) -> Graph {
    let n = 1 + d1 + d1 * d2 + d1 * d2 * d3;
    let mut edges = Vec::with_capacity(n - 1);
    let mut next = 1 + d1;
    for c in 1..=d1 {
        edges.push((0, c));
        for _ in 0..d2 {
            let g = next;
            next += 1;
            edges.push((c, g));
        }
    }
    if d3 > 0 {
        for g in (1 + d1)..(1 + d1 + d1 * d2) {
            for _ in 0..d3 {
                edges.push((g, next));
                next += 1;
            }
        }
    }
    Graph::from_edges(n, edges).expect("valid")
}

// Random recursive tree in random label order: each node attaches to a
// uniformly chosen earlier node that still has degree below `max_degree`.
fn bounded_random_tree(n: usize, max_degree: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<NodeId>> {
    let mut labels: Vec<NodeId> = (0..n).collect();
    for i in (1..n).rev() {
        labels.swap(i, rng.random_range(0..=i));
    }
    let mut adj: Vec<Vec<NodeId>> = vec![Vec::new(); n];
    let mut open: Vec<NodeId> = Vec::with_capacity(n);
    for &v in &labels {
        if !open.is_empty() {
            let i = rng.random_range(0..open.len());
            let parent = open[i];
            adj[parent].push(v);
            adj[v].push(parent);
            if adj[parent].len() >= max_degree {
                open.swap_remove(i);
            }
        }
        open.push(v);
    }
    adj
}

// Degree-bounded random tree plus random extra edges, each joining nodes at distance >= 6,
// so every cycle has length >= 7. Nodes are filled to `target` in random
// order with partners drawn uniformly from the unsaturated nodes; a node
// stops once one edge has failed `GIRTH_RETRY_BUDGET` attempts.
fn high_girth(n: usize, target: usize, rng: &mut ChaCha8Rng) -> Result<Graph, GraphError> {
    let mut adj = bounded_random_tree(n, target, rng);
    let mut order: Vec<NodeId> = (0..n).collect();
    for i in (1..n).rev() {
        order.swap(i, rng.random_range(0..=i));
    }

    // Unsaturated nodes, for uniform partner draws without wasted attempts.
    let mut open: Vec<NodeId> = (0..n).filter(|&v| adj[v].len() < target).collect();
    let mut slot = vec![usize::MAX; n];
    for (i, &v) in open.iter().enumerate() {
        slot[v] = i;
    }
    let close = |v: NodeId, open: &mut Vec<NodeId>, slot: &mut Vec<usize>| {
        let i = slot[v];
        let last = *open.last().expect("nonempty");
        open.swap_remove(i);
        if last != v {
            slot[last] = i;
        }
        slot[v] = usize::MAX;
    };

    // near[x] == u  <=>  dist(u, x) <= 3 for the node u being filled.
    let mut near = vec![usize::MAX; n];
    let mut frontier = Vec::new();
    let mut next = Vec::new();
    for &u in &order {
        if adj[u].len() >= target {
            continue;
        }
        ball(&adj, u, 3, &mut near, u, &mut frontier, &mut next);
        let mut failures = 0;
        while adj[u].len() < target && failures < GIRTH_RETRY_BUDGET && open.len() > 1 {
            let w = open[rng.random_range(0..open.len())];
            if near[w] == u || touches_within_2(&adj, w, &near, u) {
                failures += 1;
                continue;
            }
            // ball_2(w) is now within distance 3 of u.
            near[w] = u;
            for &x in &adj[w] {
                near[x] = u;
                for &y in &adj[x] {
                    near[y] = u;
                }
            }
            adj[u].push(w);
            adj[w].push(u);
            for v in [u, w] {
                if adj[v].len() >= target {
                    close(v, &mut open, &mut slot);
                }
            }
            failures = 0;
        }
    }
    let max_degree = adj.iter().map(Vec::len).max().unwrap_or(0);
    if max_degree < target {
        return Err(GraphError::GenerationFailure(format!(
            "could not reach degree {target} with girth >= 7 on {n} nodes (best {max_degree})"
        )));
    }
    let edges: Vec<(NodeId, NodeId)> = adj
        .iter()
        .enumerate()
        .flat_map(|(u, list)| list.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
        .collect();
    Graph::from_edges(n, edges)
}

// True iff some node within distance 2 of `w` is marked for `u`.
fn touches_within_2(adj: &[Vec<NodeId>], w: NodeId, near: &[usize], u: NodeId) -> bool {
    adj[w]
        .iter()
        .any(|&x| near[x] == u || adj[x].iter().any(|&y| near[y] == u))
}

// Marks every node within `radius` of `src` with `epoch`; returns them.
fn ball<'a>(
    adj: &[Vec<NodeId>],
    src: NodeId,
    radius: usize,
    mark: &mut [usize],
    epoch: usize,
    collected: &'a mut Vec<NodeId>,
    next: &mut Vec<NodeId>,
) -> &'a [NodeId] {
    collected.clear();
    collected.push(src);
    mark[src] = epoch;
    let mut start = 0;
    for _ in 0..radius {
        next.clear();
        for &x in &collected[start..] {
            for &y in &adj[x] {
                if mark[y] != epoch {
                    mark[y] = epoch;
                    next.push(y);
                }
            }
        }
        start = collected.len();
        collected.extend_from_slice(next);
    }
    collected
}
