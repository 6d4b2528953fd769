use std::collections::{HashMap, HashSet, VecDeque};

use super::{Graph, NodeId};

/// Distance marker for nodes a BFS did not reach.
pub const UNREACHED: usize = usize::MAX;

/// Length of the shortest cycle, `None` for forests.
pub fn girth(g: &Graph) -> Option<usize> {
    shortest_cycle_below(g, usize::MAX)
}

/// True iff every cycle of `g` has length at least `k`.
pub fn has_girth_at_least(g: &Graph, k: usize) -> bool {
    shortest_cycle_below(g, k).is_none()
}

// BFS from every root; a non-tree edge (u, w) closes a closed walk of length
// dist[u] + dist[w] + 1 that contains a cycle at most that long, and the
// minimum over all roots is exact.
fn shortest_cycle_below(g: &Graph, limit: usize) -> Option<usize> {
    let n = g.node_count();
    let mut best = limit;
    let mut dist = vec![0usize; n];
    let mut parent = vec![usize::MAX; n];
    let mut stamp = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for root in 0..n {
        queue.clear();
        stamp[root] = root;
        dist[root] = 0;
        parent[root] = usize::MAX;
        queue.push_back(root);
        'bfs: while let Some(u) = queue.pop_front() {
            if 2 * dist[u] + 1 >= best {
                break;
            }
            for &w in g.neighbors(u) {
                if stamp[w] != root {
                    stamp[w] = root;
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    queue.push_back(w);
                } else if parent[u] != w {
                    let len = dist[u] + dist[w] + 1;
                    if len < best {
                        best = len;
                        if best == 3 {
                            break 'bfs;
                        }
                    }
                }
            }
        }
        if best == 3 {
            break;
        }
    }
    (best < limit).then_some(best)
}

/// Alive nodes at distance `1..=k` from `v` along paths of alive nodes.
pub fn k_hop_neighborhood(g: &Graph, v: NodeId, k: usize, alive: &[bool]) -> Vec<NodeId> {
    let dist = bfs_distances(g, &[v], Some(alive), k);
    let mut out: Vec<NodeId> = (0..g.node_count())
        .filter(|&u| u != v && dist[u] != UNREACHED)
        .collect();
    out.sort_unstable();
    out
}

/// Multi-source BFS distances up to `max_depth`, optionally restricted to
/// nodes with `mask[u] == true` (sources are always admitted).
pub fn bfs_distances(
    g: &Graph,
    sources: &[NodeId],
    mask: Option<&[bool]>,
    max_depth: usize,
) -> Vec<usize> {
    let mut dist = vec![UNREACHED; g.node_count()];
    let mut queue = VecDeque::new();
    for &s in sources {
        if dist[s] == UNREACHED {
            dist[s] = 0;
            queue.push_back(s);
        }
    }
    while let Some(u) = queue.pop_front() {
        if dist[u] >= max_depth {
            continue;
        }
        for &w in g.neighbors(u) {
            if dist[w] == UNREACHED && mask.is_none_or(|m| m[w]) {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Connected components of the subgraph induced by `subset`.
///
/// Each component is sorted; components are ordered by their smallest node.
pub fn connected_components(g: &Graph, subset: &[NodeId]) -> Vec<Vec<NodeId>> {
    let n = g.node_count();
    let mut member = vec![false; n];
    for &v in subset {
        member[v] = true;
    }
    let mut seen = vec![false; n];
    let mut roots: Vec<NodeId> = subset.to_vec();
    roots.sort_unstable();
    let mut components = Vec::new();
    let mut stack = Vec::new();
    for root in roots {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        stack.push(root);
        let mut comp = Vec::new();
        while let Some(u) = stack.pop() {
            comp.push(u);
            for &w in g.neighbors(u) {
                if member[w] && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        comp.sort_unstable();
        components.push(comp);
    }
    components
}

/// Bounded BFS that only touches the nodes it reaches. Returns
/// `(node, distance)` pairs in BFS order; non-source nodes must satisfy
/// `allowed`.
pub fn bfs_ball(
    g: &Graph,
    sources: &[NodeId],
    max_depth: usize,
    allowed: impl Fn(NodeId) -> bool,
) -> Vec<(NodeId, usize)> {
    let mut seen: HashSet<NodeId> = HashSet::new();
    let mut out = Vec::new();
    for &s in sources {
        if seen.insert(s) {
            out.push((s, 0));
        }
    }
    let mut head = 0;
    while head < out.len() {
        let (u, d) = out[head];
        head += 1;
        if d >= max_depth {
            continue;
        }
        for &w in g.neighbors(u) {
            if allowed(w) && seen.insert(w) {
                out.push((w, d + 1));
            }
        }
    }
    out
}

/// Exact diameter of the subgraph induced by `nodes`, assumed connected.
pub fn diameter_of_induced(g: &Graph, nodes: &[NodeId]) -> usize {
    if nodes.len() <= 1 {
        return 0;
    }
    let index: HashMap<NodeId, usize> = nodes.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let adj: Vec<Vec<usize>> = nodes
        .iter()
        .map(|&v| g.neighbors(v).iter().filter_map(|w| index.get(w).copied()).collect())
        .collect();
    let mut dist = vec![UNREACHED; nodes.len()];
    let mut queue = VecDeque::new();
    let mut diameter = 0;
    for s in 0..nodes.len() {
        dist.fill(UNREACHED);
        dist[s] = 0;
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            diameter = diameter.max(dist[u]);
            for &w in &adj[u] {
                if dist[w] == UNREACHED {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
    }
    diameter
}

#[cfg(test)]
#[allow(clippy::needless_range_loop)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    fn petersen() -> Graph {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
        }
        Graph::from_edges(10, edges).unwrap()
    }

    // Shortest simple cycle by enumerating all simple paths that return to
    // their start, bounded by `max_len`.
    fn brute_force_girth(g: &Graph, max_len: usize) -> Option<usize> {
        fn dfs(g: &Graph, start: usize, u: usize, len: usize, on: &mut Vec<bool>, max_len: usize, best: &mut usize) {
            for &w in g.neighbors(u) {
                if w == start && len >= 3 {
                    *best = (*best).min(len);
                } else if !on[w] && w > start && len < max_len {
                    on[w] = true;
                    dfs(g, start, w, len + 1, on, max_len, best);
                    on[w] = false;
                }
            }
        }
        let mut best = usize::MAX;
        for s in 0..g.node_count() {
            let mut on = vec![false; g.node_count()];
            on[s] = true;
            dfs(g, s, s, 1, &mut on, max_len, &mut best);
        }
        (best != usize::MAX).then_some(best)
    }

    #[test]
    fn girth_examples() {
        assert_eq!(girth(&cycle(7)), Some(7));
        assert_eq!(girth(&path(20)), None);
        assert_eq!(brute_force_girth(&petersen(), 10), Some(5));
        assert_eq!(girth(&petersen()), Some(5));
        assert!(has_girth_at_least(&cycle(7), 7));
        assert!(!has_girth_at_least(&cycle(6), 7));
        assert!(has_girth_at_least(&path(5), 7));
    }

    #[test]
    fn k_hop_examples() {
        let g = path(3);
        let all = vec![true; 3];
        assert_eq!(k_hop_neighborhood(&g, 0, 2, &all), vec![1, 2]);
        let b_dead = vec![true, false, true];
        assert!(k_hop_neighborhood(&g, 0, 2, &b_dead).is_empty());
        let star = Graph::from_edges(6, (1..6).map(|i| (0, i))).unwrap();
        assert_eq!(k_hop_neighborhood(&star, 0, 1, &[true; 6]), vec![1, 2, 3, 4, 5]);
    }

    #[test]
    fn component_examples() {
        let g = path(5);
        assert_eq!(connected_components(&g, &[0, 1, 4]), vec![vec![0, 1], vec![4]]);
        assert!(connected_components(&g, &[]).is_empty());
        assert_eq!(connected_components(&g, &[4, 3, 2, 1, 0]).len(), 1);
    }

    #[test]
    fn diameter_of_path_and_star() {
        let g = path(6);
        assert_eq!(diameter_of_induced(&g, &[0, 1, 2, 3, 4, 5]), 5);
        assert_eq!(diameter_of_induced(&g, &[2]), 0);
    }

    fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
        (1usize..max_n).prop_flat_map(|n| {
            proptest::collection::vec((0..n, 0..n), 0..(2 * n)).prop_map(move |raw| {
                let mut edges: Vec<(usize, usize)> = raw
                    .into_iter()
                    .filter(|(u, v)| u != v)
                    .map(|(u, v)| (u.min(v), u.max(v)))
                    .collect();
                edges.sort_unstable();
                edges.dedup();
                Graph::from_edges(n, edges).unwrap()
            })
        })
    }

    // Floyd–Warshall distances as an independent oracle.
    fn all_pairs(g: &Graph) -> Vec<Vec<usize>> {
        let n = g.node_count();
        let inf = usize::MAX / 4;
        let mut d = vec![vec![inf; n]; n];
        for u in 0..n {
            d[u][u] = 0;
            for &w in g.neighbors(u) {
                d[u][w] = 1;
            }
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if d[i][k] + d[k][j] < d[i][j] {
                        d[i][j] = d[i][k] + d[k][j];
                    }
                }
            }
        }
        d
    }

    proptest! {
        #[test]
        fn k_hop_matches_all_pairs(g in arb_graph(60), k in 0usize..=4) {
            let d = all_pairs(&g);
            let alive = vec![true; g.node_count()];
            for v in 0..g.node_count() {
                let expect: Vec<usize> = (0..g.node_count())
                    .filter(|&u| u != v && d[v][u] <= k)
                    .collect();
                prop_assert_eq!(k_hop_neighborhood(&g, v, k, &alive), expect);
            }
        }

        #[test]
        fn girth_matches_brute_force(g in arb_graph(13)) {
            prop_assert_eq!(girth(&g), brute_force_girth(&g, g.node_count()));
        }
    }
}
