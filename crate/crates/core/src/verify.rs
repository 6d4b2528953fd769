//! Checkers for the structural properties a pipeline run claims.
//!
//! Every checker recomputes what it needs from the graph itself and never
//! trusts bookkeeping inside the run (alive masks are the one exception:
//! a Degree-Drop audit is a snapshot of the residual graph it is about).

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::algorithms::{DegreeDropAudit, NetworkDecomposition, RulingSetResult, Stage};
use crate::engine::PhaseRecord;
use crate::graph::{bfs_ball, bfs_distances, connected_components, diameter_of_induced, Graph, NodeId, UNREACHED};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub nodes: Vec<NodeId>,
    pub description: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check_name: String,
    pub pass: bool,
    pub violations: Vec<Violation>,
    pub measured: BTreeMap<String, f64>,
}

impl VerificationReport {
    pub fn new(check_name: impl Into<String>) -> Self {
        VerificationReport {
            check_name: check_name.into(),
            pass: true,
            violations: Vec::new(),
            measured: BTreeMap::new(),
        }
    }

    pub fn violate(&mut self, nodes: Vec<NodeId>, description: impl Into<String>) {
        self.violations.push(Violation { nodes, description: description.into() });
        self.pass = false;
    }

    pub fn measure(&mut self, key: &str, value: f64) {
        self.measured.insert(key.to_string(), value);
    }

    /// Folds another report's violations into this one, prefixed by its name.
    pub fn absorb(&mut self, other: VerificationReport) {
        for v in other.violations {
            self.violate(v.nodes, format!("{}: {}", other.check_name, v.description));
        }
    }

    /// One-line summary with the first few violations.
    pub fn summary(&self) -> String {
        let status = if self.pass { "pass" } else { "FAIL" };
        let mut s = format!("{}: {} ({} violations)", self.check_name, status, self.violations.len());
        for v in self.violations.iter().take(3) {
            s.push_str(&format!("; {} {:?}", v.description, v.nodes));
        }
        s
    }
}

fn membership(n: usize, nodes: &[NodeId]) -> Vec<bool> {
    let mut m = vec![false; n];
    for &v in nodes {
        m[v] = true;
    }
    m
}

fn out_of_range(report: &mut VerificationReport, g: &Graph, nodes: &[NodeId]) -> bool {
    let bad: Vec<_> = nodes.iter().copied().filter(|&v| v >= g.node_count()).collect();
    if !bad.is_empty() {
        report.violate(bad, "node id out of range");
    }
    !report.violations.is_empty()
}

/// One violation per edge with both endpoints in `s`.
pub fn check_independent(g: &Graph, s: &[NodeId]) -> VerificationReport {
    let mut r = VerificationReport::new("independent");
    if out_of_range(&mut r, g, s) {
        return r;
    }
    let inside = membership(g.node_count(), s);
    for (u, v) in g.edges() {
        if inside[u] && inside[v] {
            r.violate(vec![u, v], "edge inside the set");
        }
    }
    r.measure("set_size", s.len() as f64);
    r
}

/// One violation per node farther than `beta` from `s`; measures the true
/// maximum distance (`inf` if some node is unreachable).
pub fn check_domination(g: &Graph, s: &[NodeId], beta: usize) -> VerificationReport {
    let mut r = VerificationReport::new("domination");
    if out_of_range(&mut r, g, s) {
        return r;
    }
    let dist = bfs_distances(g, s, None, usize::MAX);
    let mut max = 0.0f64;
    for (v, &d) in dist.iter().enumerate() {
        if d == UNREACHED {
            max = f64::INFINITY;
            r.violate(vec![v], "no set node reachable");
        } else {
            max = max.max(d as f64);
            if d > beta {
                r.violate(vec![v], format!("distance {d} exceeds {beta}"));
            }
        }
    }
    r.measure("beta_measured", max);
    r.measure("beta", beta as f64);
    r
}

/// Greedy distance-`d` dominating set of `nodes`: repeatedly pick the lowest
/// uncovered id and cover its radius-`(d-1)` ball in `host`. The picks are
/// pairwise at host distance at least `d`.
pub fn greedy_distance_dominating_set(host: &Graph, nodes: &[NodeId], d: usize) -> Vec<NodeId> {
    let mut order = nodes.to_vec();
    order.sort_unstable();
    order.dedup();
    let mut covered: HashSet<NodeId> = HashSet::new();
    let mut picks = Vec::new();
    for &v in &order {
        if covered.contains(&v) {
            continue;
        }
        picks.push(v);
        for (u, _) in bfs_ball(host, &[v], d.saturating_sub(1), |_| true) {
            if order.binary_search(&u).is_ok() {
                covered.insert(u);
            }
        }
    }
    picks
}

/// Which size bound the put-aside components are held to.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum ShatteringBound {
    /// Greedy 7-distance dominating set of size at most `log_{Δ_i} n`.
    Tree,
    /// Component size at most `Δ_small^6 · log2 n`.
    Girth { delta_small: usize },
}

/// Bound on the dominating set of a `W_i` component in tree mode.
pub fn tree_shattering_bound(n: usize, delta: usize) -> f64 {
    if delta <= 1 {
        return f64::INFINITY;
    }
    (n as f64).ln() / (delta as f64).ln()
}

pub fn girth_shattering_bound(n: usize, delta_small: usize) -> f64 {
    (delta_small as f64).powi(6) * (n.max(2) as f64).log2()
}

/// Measures every component of every `G[W_i]` against the chosen bound.
/// `delta_per_iter[i]` is the degree bound in force when `W_i` was formed.
pub fn check_shattering(
    g: &Graph,
    w_sets: &[&[NodeId]],
    delta_per_iter: &[usize],
    n: usize,
    bound: ShatteringBound,
) -> VerificationReport {
    let mut r = VerificationReport::new("shattering");
    let (mut components, mut max_size, mut max_ds) = (0usize, 0usize, 0usize);
    let mut worst_ratio = 0.0f64;
    for (i, w) in w_sets.iter().enumerate() {
        for comp in connected_components(g, w) {
            components += 1;
            max_size = max_size.max(comp.len());
            match bound {
                ShatteringBound::Tree => {
                    let ds = greedy_distance_dominating_set(g, &comp, 7).len();
                    max_ds = max_ds.max(ds);
                    let limit = tree_shattering_bound(n, delta_per_iter.get(i).copied().unwrap_or(0));
                    worst_ratio = worst_ratio.max(ds as f64 / limit);
                    if ds as f64 > limit {
                        r.violate(
                            comp.clone(),
                            format!("W_{} component dominating set {ds} exceeds {limit:.3}", i + 1),
                        );
                    }
                }
                ShatteringBound::Girth { delta_small } => {
                    let limit = girth_shattering_bound(n, delta_small);
                    worst_ratio = worst_ratio.max(comp.len() as f64 / limit);
                    if comp.len() as f64 > limit {
                        r.violate(comp.clone(), format!("W_{} component size {} exceeds {limit:.3}", i + 1, comp.len()));
                    }
                }
            }
        }
    }
    r.measure("components", components as f64);
    r.measure("max_component_size", max_size as f64);
    if bound == ShatteringBound::Tree {
        r.measure("dominating_set_size", max_ds as f64);
    }
    r.measure("worst_bound_ratio", worst_ratio);
    r
}

/// `m` is an independent subset of `subset` that dominates `subset` inside
/// the induced subgraph.
pub fn check_mis(g: &Graph, subset: &[NodeId], m: &[NodeId]) -> VerificationReport {
    let mut r = VerificationReport::new("mis");
    if out_of_range(&mut r, g, subset) || out_of_range(&mut r, g, m) {
        return r;
    }
    let member = membership(g.node_count(), subset);
    let chosen = membership(g.node_count(), m);
    for &v in m {
        if !member[v] {
            r.violate(vec![v], "not in the subset");
        }
    }
    for &v in m {
        for &u in g.neighbors(v) {
            if chosen[u] && v < u {
                r.violate(vec![v, u], "adjacent members");
            }
        }
    }
    for &v in subset {
        if !chosen[v] && !g.neighbors(v).iter().any(|&u| chosen[u] && member[u]) {
            r.violate(vec![v], "not dominated");
        }
    }
    r
}

/// Picks are more than `radius` apart and every node is within `radius` of a
/// pick, both measured inside `G[component]`.
fn check_ruling_in_component(g: &Graph, component: &[NodeId], picks: &[NodeId], radius: usize) -> VerificationReport {
    let mut r = VerificationReport::new("component_ruling");
    let inside = |v: NodeId| component.binary_search(&v).is_ok();
    for &p in picks {
        for (q, _) in bfs_ball(g, &[p], radius, inside) {
            if q > p && picks.contains(&q) {
                r.violate(vec![p, q], format!("picks within distance {radius}"));
            }
        }
    }
    let reached: HashSet<NodeId> = bfs_ball(g, picks, radius, inside).into_iter().map(|(v, _)| v).collect();
    for &v in component {
        if !reached.contains(&v) {
            r.violate(vec![v], format!("no pick within distance {radius}"));
        }
    }
    r
}

/// Properties of one Degree-Drop call: (a) `S` independent, (b) no edge
/// between `S` and `W`, (c) the residual graph without `S`, its 2-hop
/// neighborhood and `W` has maximum degree at most `Δ*`.
pub fn check_degree_drop(g: &Graph, audit: &DegreeDropAudit) -> VerificationReport {
    let n = g.node_count();
    let mut r = VerificationReport::new("degree_drop");
    if audit.alive_before.len() != n || audit.alive_after.len() != n {
        r.violate(vec![], "audit masks do not match the graph");
        return r;
    }
    r.absorb(check_independent(g, &audit.s));
    let in_s = membership(n, &audit.s);
    let in_w = membership(n, &audit.w);
    for &v in &audit.w {
        if !audit.alive_before[v] {
            r.violate(vec![v], "put-aside node was not alive");
        }
        for &u in g.neighbors(v) {
            if in_s[u] {
                r.violate(vec![u, v], "edge between S and W");
            }
        }
    }
    for &v in &audit.s {
        if !audit.alive_before[v] {
            r.violate(vec![v], "joined node was not alive");
        }
    }

    // Literal form: recompute the remainder from the starting residual graph.
    let reach = bfs_distances(g, &audit.s, Some(&audit.alive_before), 2);
    let rest: Vec<bool> = (0..n)
        .map(|v| audit.alive_before[v] && reach[v] == UNREACHED && !in_w[v])
        .collect();
    let mut max_literal = 0;
    for v in (0..n).filter(|&v| rest[v]) {
        let d = g.neighbors(v).iter().filter(|&&u| rest[u]).count();
        max_literal = max_literal.max(d);
        if d > audit.delta_star {
            r.violate(vec![v], format!("remaining degree {d} exceeds {}", audit.delta_star));
        }
    }
    // Residual form: what the pipeline actually continues with.
    let mut max_residual = 0;
    for v in (0..n).filter(|&v| audit.alive_after[v] && !in_w[v]) {
        let d = g.neighbors(v).iter().filter(|&&u| audit.alive_after[u] && !in_w[u]).count();
        max_residual = max_residual.max(d);
        if d > audit.delta_star {
            r.violate(vec![v], format!("residual degree {d} exceeds {}", audit.delta_star));
        }
    }
    if (0..n).any(|v| rest[v] != (audit.alive_after[v] && !in_w[v])) {
        r.violate(vec![], "recomputed remainder differs from the run's residual graph");
    }
    r.measure("max_remaining_degree", max_literal.max(max_residual) as f64);
    r.measure("put_aside", audit.w.len() as f64);
    r
}

/// The clean-up sets of a finished run: each `Z_i` solves `G[W_i]`
/// (an MIS, or a ruling set at the run's clean-up radius inside each
/// component), and the `W_i` are pairwise non-adjacent and untouched by
/// the other set nodes.
pub fn check_parallel_cleanup(g: &Graph, result: &RulingSetResult) -> VerificationReport {
    let n = g.node_count();
    let mut r = VerificationReport::new("parallel_cleanup");
    let mut owner = vec![usize::MAX; n];
    let dd: Vec<_> = result.iterations.iter().filter(|it| it.stage == Stage::DegreeDrop).collect();
    for (i, it) in dd.iter().enumerate() {
        for &v in &it.put_aside {
            if owner[v] != usize::MAX {
                r.violate(vec![v], "node in two put-aside sets");
            }
            owner[v] = i;
        }
    }
    let in_set = membership(n, &result.set);
    for (i, it) in dd.iter().enumerate() {
        let z = membership(n, &it.cleanup);
        for &v in &it.put_aside {
            for &u in g.neighbors(v) {
                if owner[u] != usize::MAX && owner[u] != i {
                    r.violate(vec![v, u], "adjacent put-aside sets");
                } else if owner[u] == usize::MAX && in_set[u] {
                    r.violate(vec![v, u], "put-aside node adjacent to another set node");
                }
            }
        }
        if it.cleanup.iter().any(|&v| owner[v] != i) {
            r.violate(it.cleanup.clone(), format!("Z_{} not inside W_{}", i + 1, i + 1));
        }
        for comp in connected_components(g, &it.put_aside) {
            let picks: Vec<_> = comp.iter().copied().filter(|&v| z[v]).collect();
            if result.cleanup_radius <= 1 {
                r.absorb(check_mis(g, &comp, &picks));
            } else {
                r.absorb(check_ruling_in_component(g, &comp, &picks, result.cleanup_radius));
            }
        }
    }
    r.measure("put_aside_sets", dd.len() as f64);
    r
}

/// Colors are 1 or 2, same-colored neighbors share a cluster, every cluster
/// is connected and its diameter is within the stated bound.
pub fn check_network_decomposition(tree: &Graph, nd: &NetworkDecomposition) -> VerificationReport {
    let mut r = VerificationReport::new("network_decomposition");
    let k = nd.nodes.len();
    if nd.color.len() != k || nd.cluster.len() != k {
        r.violate(vec![], "length mismatch");
        return r;
    }
    let mut pos = vec![usize::MAX; tree.node_count()];
    for (i, &v) in nd.nodes.iter().enumerate() {
        pos[v] = i;
    }
    let mut clusters: BTreeMap<usize, (u8, Vec<NodeId>)> = BTreeMap::new();
    for i in 0..k {
        let v = nd.nodes[i];
        if nd.color[i] != 1 && nd.color[i] != 2 {
            r.violate(vec![v], format!("color {}", nd.color[i]));
        }
        let entry = clusters.entry(nd.cluster[i]).or_insert((nd.color[i], Vec::new()));
        if entry.0 != nd.color[i] {
            r.violate(vec![v], "cluster mixes colors");
        }
        entry.1.push(v);
        for &u in tree.neighbors(v) {
            let j = pos[u];
            if j != usize::MAX && nd.color[j] == nd.color[i] && nd.cluster[j] != nd.cluster[i] && v < u {
                r.violate(vec![v, u], "adjacent clusters share a color");
            }
        }
    }
    let mut max_diameter = 0;
    for (_, members) in clusters.values() {
        if connected_components(tree, members).len() != 1 {
            r.violate(members.clone(), "cluster not connected");
            continue;
        }
        let d = diameter_of_induced(tree, members);
        max_diameter = max_diameter.max(d);
        if d > nd.cluster_diameter_bound {
            r.violate(members.clone(), format!("cluster diameter {d} exceeds {}", nd.cluster_diameter_bound));
        }
    }
    r.measure("max_cluster_diameter", max_diameter as f64);
    r.measure("clusters", clusters.len() as f64);
    r.measure("iterations", nd.iterations as f64);
    r.measure("budget_iterations", nd.budget_iterations as f64);
    r.measure("dominating_set_size", nd.dominating_set_size as f64);
    r
}

/// Hard checks for a finished run: the set is independent and
/// `beta_bound`-dominating, the final MIS solves the residual graph,
/// every Degree-Drop call meets its contract, the clean-up is valid and
/// every decomposition is well formed.
pub fn check_result(g: &Graph, result: &RulingSetResult) -> Vec<VerificationReport> {
    let mut reports = vec![
        check_independent(g, &result.set),
        check_domination(g, &result.set, result.beta_bound),
    ];
    let mut dd = VerificationReport::new("degree_drop_calls");
    for audit in &result.audits {
        dd.absorb(check_degree_drop(g, audit));
    }
    dd.measure("calls", result.audits.len() as f64);
    reports.push(dd);
    reports.push(check_parallel_cleanup(g, result));
    let mut nd = VerificationReport::new("decompositions");
    let mut beyond_schedule = 0;
    for d in &result.decompositions {
        nd.absorb(check_network_decomposition(g, d));
        beyond_schedule += usize::from(!d.within_schedule);
    }
    nd.measure("count", result.decompositions.len() as f64);
    nd.measure("beyond_schedule", beyond_schedule as f64);
    reports.push(nd);
    reports
}

pub const SCHEMA_VERSION: u32 = 1;

/// Serialized form of a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub schema_version: u32,
    pub algorithm: String,
    pub seed: u64,
    pub n: usize,
    #[serde(rename = "S")]
    pub set: Vec<NodeId>,
    pub beta_measured: f64,
    pub beta_bound: usize,
    pub rounds_total: usize,
    pub phases: Vec<PhaseRecord>,
}

impl ResultDocument {
    pub fn new(g: &Graph, result: &RulingSetResult) -> Self {
        let dom = check_domination(g, &result.set, result.beta_bound);
        ResultDocument {
            schema_version: SCHEMA_VERSION,
            algorithm: result.algorithm.clone(),
            seed: result.seed,
            n: result.n,
            set: result.set.clone(),
            beta_measured: dom.measured["beta_measured"],
            beta_bound: result.beta_bound,
            rounds_total: result.rounds_total,
            phases: result.phases.clone(),
        }
    }
}
