//! Synchronous LOCAL execution state and round accounting.
//!
//! Per-node parallelism is simulated sequentially inside a round: every
//! decision in a round reads the state as it was when the round started.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::graph::{Graph, NodeId};

/// Round charges for the building blocks.
///
/// One LMJ iteration (selection plus radius-2 removal) costs
/// `rounds_per_lmj`: one round to exchange draws, one to announce
/// membership and two to push membership two hops out.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundCost {
    pub rounds_per_lmj: usize,
    /// Learning the own alive degree and comparing it with a threshold.
    pub degree_check: usize,
    /// Removing `W ∪ N(W)`.
    pub put_aside: usize,
    /// Per rake-and-compress iteration.
    pub rake_compress_iteration: usize,
    /// Added to twice the diameter when gathering a cluster at a leader.
    pub gather_constant: usize,
}

impl Default for RoundCost {
    fn default() -> Self {
        RoundCost {
            rounds_per_lmj: 4,
            degree_check: 1,
            put_aside: 1,
            rake_compress_iteration: 3,
            gather_constant: 2,
        }
    }
}

impl RoundCost {
    pub fn validate(&self) -> Result<(), String> {
        if self.rounds_per_lmj < 3 {
            return Err("rounds_per_lmj must be at least 3 (selection + 2-hop removal)".into());
        }
        let others = [
            self.degree_check,
            self.put_aside,
            self.rake_compress_iteration,
            self.gather_constant,
        ];
        if others.contains(&0) {
            return Err("every round cost must be at least 1".into());
        }
        Ok(())
    }

    /// Charge for the selection half of an LMJ iteration.
    pub fn lmj_selection(&self) -> usize {
        self.rounds_per_lmj - 2
    }
}

/// One entry of the phase trace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseRecord {
    pub phase: String,
    pub rounds: usize,
    #[serde(rename = "|S|")]
    pub set_size: usize,
    #[serde(rename = "|W|")]
    pub put_aside_size: usize,
    pub max_alive_degree: usize,
}

/// Derives an independent stream seed for trial `index` (splitmix64 finalizer).
pub fn trial_seed(master: u64, index: u64) -> u64 {
    let mut z = master
        .wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Evolving state of one simulated execution.
pub struct SimState<'g> {
    graph: &'g Graph,
    alive: Vec<bool>,
    in_set: Vec<bool>,
    draws: Vec<u64>,
    alive_degree: Vec<usize>,
    alive_count: usize,
    rounds: usize,
    rng: ChaCha8Rng,
    cost: RoundCost,
    trace: Vec<PhaseRecord>,
    phase_start: usize,
    stamp: Vec<u32>,
    epoch: u32,
}

impl<'g> SimState<'g> {
    pub fn new(graph: &'g Graph, seed: u64, cost: RoundCost) -> Self {
        let n = graph.node_count();
        SimState {
            graph,
            alive: vec![true; n],
            in_set: vec![false; n],
            draws: vec![0; n],
            alive_degree: (0..n).map(|v| graph.degree(v)).collect(),
            alive_count: n,
            rounds: 0,
            rng: ChaCha8Rng::seed_from_u64(seed),
            cost,
            trace: Vec::new(),
            phase_start: 0,
            stamp: vec![0; n],
            epoch: 0,
        }
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn cost(&self) -> &RoundCost {
        &self.cost
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    #[inline]
    pub fn is_alive(&self, v: NodeId) -> bool {
        self.alive[v]
    }

    pub fn alive_mask(&self) -> &[bool] {
        &self.alive
    }

    #[inline]
    pub fn in_set(&self, v: NodeId) -> bool {
        self.in_set[v]
    }

    pub fn alive_count(&self) -> usize {
        self.alive_count
    }

    pub fn alive_nodes(&self) -> Vec<NodeId> {
        (0..self.alive.len()).filter(|&v| self.alive[v]).collect()
    }

    /// Members of S so far, ascending.
    pub fn set_members(&self) -> Vec<NodeId> {
        (0..self.in_set.len()).filter(|&v| self.in_set[v]).collect()
    }

    #[inline]
    pub fn draw(&self, v: NodeId) -> u64 {
        self.draws[v]
    }

    pub fn rounds(&self) -> usize {
        self.rounds
    }

    pub fn charge(&mut self, rounds: usize) {
        self.rounds += rounds;
    }

    /// Number of alive neighbors of `v`.
    #[inline]
    pub fn alive_degree(&self, v: NodeId) -> usize {
        self.alive_degree[v]
    }

    pub fn max_alive_degree(&self) -> usize {
        (0..self.alive.len())
            .filter(|&v| self.alive[v])
            .map(|v| self.alive_degree[v])
            .max()
            .unwrap_or(0)
    }

    /// Fresh independent 64-bit draws for `subset`, taken in the given order.
    /// Local coin flips, no rounds charged.
    pub fn fresh_draws(&mut self, subset: &[NodeId]) {
        for &v in subset {
            debug_assert!(self.alive[v]);
            self.draws[v] = self.rng.next_u64();
        }
    }

    /// True iff `(r_v, v)` is smaller than `(r_w, w)` for every alive
    /// neighbor `w` with `candidate[w]`.
    pub fn is_local_minimum(&self, v: NodeId, candidate: &[bool]) -> bool {
        let key = (self.draws[v], v);
        self.graph
            .neighbors(v)
            .iter()
            .filter(|&&w| self.alive[w] && candidate[w])
            .all(|&w| key < (self.draws[w], w))
    }

    /// Adds `s_new` to S and kills every alive node within `radius` of it
    /// along alive paths. Charges `radius` rounds. Returns the number of
    /// nodes that died.
    pub fn remove_covered(&mut self, s_new: &[NodeId], radius: usize) -> usize {
        self.charge(radius);
        let reached = self.alive_ball(s_new, radius);
        for &v in s_new {
            self.in_set[v] = true;
        }
        self.kill_all(&reached)
    }

    /// Kills `w` and its alive neighbors without adding anything to S.
    /// Charges `put_aside` rounds. Returns the number of nodes that died.
    pub fn put_aside(&mut self, w: &[NodeId]) -> usize {
        self.charge(self.cost.put_aside);
        let reached = self.alive_ball(w, 1);
        self.kill_all(&reached)
    }

    /// Adds already-dead nodes to S (clean-up results).
    pub fn join_dead(&mut self, nodes: &[NodeId]) {
        for &v in nodes {
            debug_assert!(!self.alive[v]);
            self.in_set[v] = true;
        }
    }

    /// Adds alive nodes to S and kills exactly them (final MIS).
    pub fn join_and_kill(&mut self, nodes: &[NodeId]) {
        for &v in nodes {
            self.in_set[v] = true;
        }
        self.kill_all(nodes);
    }

    /// Kills every alive node without adding it to S.
    pub fn kill_remaining(&mut self) {
        let alive = self.alive_nodes();
        self.kill_all(&alive);
    }

    fn next_epoch(&mut self) -> u32 {
        if self.epoch == u32::MAX {
            self.stamp.fill(0);
            self.epoch = 0;
        }
        self.epoch += 1;
        self.epoch
    }

    // Alive nodes within `radius` of `sources` through alive nodes.
    fn alive_ball(&mut self, sources: &[NodeId], radius: usize) -> Vec<NodeId> {
        let epoch = self.next_epoch();
        let mut reached = Vec::new();
        for &s in sources {
            if self.alive[s] && self.stamp[s] != epoch {
                self.stamp[s] = epoch;
                reached.push(s);
            }
        }
        let mut start = 0;
        for _ in 0..radius {
            let end = reached.len();
            for i in start..end {
                let u = reached[i];
                for &w in self.graph.neighbors(u) {
                    if self.alive[w] && self.stamp[w] != epoch {
                        self.stamp[w] = epoch;
                        reached.push(w);
                    }
                }
            }
            if reached.len() == end {
                break;
            }
            start = end;
        }
        reached
    }

    fn kill_all(&mut self, nodes: &[NodeId]) -> usize {
        let mut killed = 0;
        for &v in nodes {
            if !self.alive[v] {
                continue;
            }
            self.alive[v] = false;
            self.alive_count -= 1;
            killed += 1;
            for &w in self.graph.neighbors(v) {
                self.alive_degree[w] -= 1;
            }
        }
        killed
    }

    /// Closes the current phase, recording the rounds spent since the
    /// previous record.
    pub fn record_phase(&mut self, phase: impl Into<String>, set_size: usize, put_aside_size: usize) {
        let record = PhaseRecord {
            phase: phase.into(),
            rounds: self.rounds - self.phase_start,
            set_size,
            put_aside_size,
            max_alive_degree: self.max_alive_degree(),
        };
        log::trace!("{}", serde_json::to_string(&record).unwrap_or_default());
        self.phase_start = self.rounds;
        self.trace.push(record);
    }

    pub fn trace(&self) -> &[PhaseRecord] {
        &self.trace
    }

    pub fn take_trace(&mut self) -> Vec<PhaseRecord> {
        std::mem::take(&mut self.trace)
    }
}
