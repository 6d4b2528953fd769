//! Static undirected simple graphs, generators and structural queries.

mod generate;
mod io;
mod query;

pub use generate::{generate, prufer_decode, GraphFamily, GraphFamilySpec};
pub use generate::GIRTH_RETRY_BUDGET;
pub use io::{load_edge_list, load_edge_list_file, read_edge_list, save_edge_list, write_edge_list};
pub use query::{
    bfs_ball,
    bfs_distances, connected_components, diameter_of_induced, girth, has_girth_at_least,
    k_hop_neighborhood, UNREACHED,
};

use thiserror::Error;

/// Index of a node, always `< node_count`.
pub type NodeId = usize;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("self-loop on node {0}")]
    SelfLoop(NodeId),
    #[error("duplicate edge {0} {1}")]
    DuplicateEdge(NodeId, NodeId),
    #[error("node id {id} out of range for {n} nodes")]
    OutOfRange { id: NodeId, n: usize },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid graph family parameters: {0}")]
    InvalidSpec(String),
    #[error("generation failure: {0}")]
    GenerationFailure(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Undirected simple graph in compressed adjacency form.
///
/// Neighbor lists are sorted and symmetric; the structure is immutable once
/// built, so one instance can be shared by any number of concurrent trials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<NodeId>,
}

impl Graph {
    /// Builds a graph from an undirected edge list.
    pub fn from_edges<I>(node_count: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let mut pairs = Vec::new();
        for (u, v) in edges {
            if u >= node_count || v >= node_count {
                return Err(GraphError::OutOfRange {
                    id: u.max(v),
                    n: node_count,
                });
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            pairs.push((u, v));
        }
        let mut degree = vec![0usize; node_count];
        for &(u, v) in &pairs {
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut offsets = Vec::with_capacity(node_count + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..node_count].to_vec();
        let mut targets = vec![0; offsets[node_count]];
        for &(u, v) in &pairs {
            targets[fill[u]] = v;
            fill[u] += 1;
            targets[fill[v]] = u;
            fill[v] += 1;
        }
        for u in 0..node_count {
            let adj = &mut targets[offsets[u]..offsets[u + 1]];
            adj.sort_unstable();
            if let Some(w) = adj.windows(2).find(|w| w[0] == w[1]) {
                return Err(GraphError::DuplicateEdge(u.min(w[0]), u.max(w[0])));
            }
        }
        Ok(Graph { offsets, targets })
    }

    /// Graph with `n` nodes and no edges.
    pub fn empty(n: usize) -> Self {
        Graph {
            offsets: vec![0; n + 1],
            targets: Vec::new(),
        }
    }

    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    #[inline]
    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    #[inline]
    pub fn degree(&self, v: NodeId) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn max_degree(&self) -> usize {
        (0..self.node_count())
            .map(|v| self.degree(v))
            .max()
            .unwrap_or(0)
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        (0..self.node_count()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    /// True iff the graph has no cycle.
    pub fn is_forest(&self) -> bool {
        let n = self.node_count();
        let components = connected_components(self, &(0..n).collect::<Vec<_>>()).len();
        self.edge_count() + components == n
    }
}
