use super::cleanup::clean_up;
use super::degree_drop::{degree_drop_audited, DegreeDropParams};
use super::mis::mis_constant_degree;
use super::{AlgorithmError, IterationRecord, RulingSetResult, RunConfig, Stage};
use crate::engine::SimState;
use crate::graph::{Graph, NodeId};

/// Thresholds `max(floor(Δ^{(3/4)^i}), floor_value)` for `i = 1, 2, …`,
/// continuing while the previous bound (starting at `Δ`) exceeds
/// `floor_value`. The last entry is `floor_value` whenever the list is
/// non-empty, so the residual degree ends at most `floor_value`.
pub fn threshold_schedule(delta: usize, floor_value: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut prev = delta;
    let mut exponent = 1.0f64;
    while prev > floor_value {
        exponent *= 0.75;
        let raw = ((delta as f64).powf(exponent) + 1e-9).floor() as usize;
        let t = raw.max(floor_value);
        out.push(t);
        prev = t;
    }
    out
}

/// State shared by the pipelines while they run their loops.
pub(crate) struct Pipeline<'g> {
    pub state: SimState<'g>,
    pub iterations: Vec<IterationRecord>,
    pub audits: Vec<super::DegreeDropAudit>,
}

impl<'g> Pipeline<'g> {
    pub fn new(g: &'g Graph, cfg: &RunConfig) -> Self {
        Pipeline {
            state: SimState::new(g, cfg.seed, cfg.cost),
            iterations: Vec::new(),
            audits: Vec::new(),
        }
    }

    /// Degree-Drop iterations with put-aside, one per threshold.
    pub fn degree_drop_loop(&mut self, entry: usize, thresholds: &[usize], lmj_iterations: usize) {
        let mut bound = entry;
        for (i, &t) in thresholds.iter().enumerate() {
            let (out, audit) = degree_drop_audited(&mut self.state, DegreeDropParams { delta_star: t, lmj_iterations });
            self.state.put_aside(&out.w);
            self.audits.push(audit);
            self.state.record_phase(format!("degree_drop[{}]", i + 1), out.s.len(), out.w.len());
            self.iterations.push(IterationRecord {
                stage: Stage::DegreeDrop,
                index: i + 1,
                entry_bound: bound,
                threshold: t,
                joined: out.s,
                put_aside: out.w,
                cleanup: Vec::new(),
                max_alive_degree_after: self.state.max_alive_degree(),
            });
            bound = t;
        }
    }

    pub fn put_aside_sets(&self) -> Vec<Vec<NodeId>> {
        self.iterations
            .iter()
            .filter(|it| it.stage == Stage::DegreeDrop)
            .map(|it| it.put_aside.clone())
            .collect()
    }

    pub fn attach_cleanup(&mut self, z: Vec<Vec<NodeId>>) {
        let mut z = z.into_iter();
        for it in self.iterations.iter_mut().filter(|it| it.stage == Stage::DegreeDrop) {
            it.cleanup = z.next().unwrap_or_default();
            self.state.join_dead(&it.cleanup);
        }
    }

    pub fn finish_mis(&mut self, delta_bound: usize, cutoff: usize) -> Result<Vec<NodeId>, AlgorithmError> {
        let mis = mis_constant_degree(&mut self.state, delta_bound, cutoff)?;
        self.state.record_phase("mis", mis.len(), 0);
        Ok(mis)
    }

    pub fn into_result(mut self, cfg: &RunConfig, final_mis: Vec<NodeId>, beta_bound: usize) -> RulingSetResult {
        let g = self.state.graph();
        let mut result = RulingSetResult::trivial(&cfg.algorithm, cfg.seed, g.node_count(), beta_bound);
        result.set = self.state.set_members();
        result.rounds_total = self.state.rounds();
        result.phases = self.state.take_trace();
        result.iterations = self.iterations;
        result.final_mis = final_mis;
        result.delta_max = g.max_degree();
        result.audits = self.audits;
        result
    }
}

/// Randomized 2-ruling set for forests.
pub fn ruling_set_tree(g: &Graph, cfg: &RunConfig) -> Result<RulingSetResult, AlgorithmError> {
    cfg.validate()?;
    if !g.is_forest() {
        return Err(AlgorithmError::NotAForest);
    }
    let n = g.node_count();
    if n <= 1 {
        let mut r = RulingSetResult::trivial(&cfg.algorithm, cfg.seed, n, 2);
        r.set = (0..n).collect();
        r.final_mis = r.set.clone();
        return Ok(r);
    }
    let delta = g.max_degree();
    let cutoff = cfg.mis_degree_cutoff;
    let mut p = Pipeline::new(g, cfg);
    p.degree_drop_loop(delta, &threshold_schedule(delta, cutoff), cfg.lmj_iterations());

    let w_sets = p.put_aside_sets();
    let in_set: Vec<bool> = (0..n).map(|v| p.state.in_set(v)).collect();
    let cleanup = clean_up(g, &w_sets, &in_set, &cfg.cost, cfg.rake_compress_a, cfg.rake_compress_b)?;
    p.state.charge(cleanup.rounds);
    let z_total = cleanup.z.iter().map(Vec::len).sum();
    p.attach_cleanup(cleanup.z);
    p.state.record_phase("cleanup", z_total, 0);

    let mis = p.finish_mis(delta.min(cutoff), cutoff)?;
    let mut result = p.into_result(cfg, mis, 2);
    result.decompositions = cleanup.decompositions;
    Ok(result)
}
