use super::cleanup::solve_small_components;
use super::sampling::{degree_drop_sampling, phase2_value};
use super::tree::{threshold_schedule, Pipeline};
use super::{AlgorithmError, CleanupMode, IterationRecord, RulingSetResult, RunConfig, Stage};
use crate::graph::{girth, Graph};

/// `max(ceil(log2(n)^exponent), floor_value)`.
pub fn delta_small(n: usize, exponent: f64, floor_value: usize) -> usize {
    let log = (n.max(2) as f64).log2();
    (log.powf(exponent).ceil() as usize).max(floor_value)
}

/// Ruling radius used inside put-aside components in relaxed mode:
/// `max(1, ceil(log2 log2 N))` for the component size bound
/// `N = Δ_small^6 · log2 n`.
pub fn relaxed_radius(n: usize, delta_small: usize) -> usize {
    let log2_n = (n.max(2) as f64).log2();
    let log2_size = 6.0 * (delta_small.max(2) as f64).log2() + log2_n.log2();
    (log2_size.log2().ceil() as usize).max(1)
}

fn cleanup_radius(g: &Graph, cfg: &RunConfig, mode: CleanupMode) -> usize {
    match mode {
        CleanupMode::ExactMis => 1,
        CleanupMode::RelaxedRuling => cfg.relaxed_radius.unwrap_or_else(|| {
            let n = g.node_count();
            relaxed_radius(n, delta_small(n, cfg.delta_small_exponent, cfg.mis_degree_cutoff))
        }),
    }
}

/// Domination distance guaranteed for a given clean-up radius.
pub(crate) fn beta_for_radius(radius: usize) -> usize {
    (radius + 1).max(2)
}

pub(crate) fn beta_bound(g: &Graph, cfg: &RunConfig, mode: CleanupMode) -> usize {
    beta_for_radius(cleanup_radius(g, cfg, mode))
}

/// Ruling set for graphs of girth at least 7: sampling degree drops down to
/// `Δ_small`, Degree-Drop with put-aside down to the MIS cutoff, final MIS,
/// then a gather-based solver on the put-aside components.
pub fn ruling_set_high_girth(
    g: &Graph,
    cfg: &RunConfig,
    mode: CleanupMode,
) -> Result<RulingSetResult, AlgorithmError> {
    cfg.validate()?;
    if g.edge_count() <= cfg.girth_check_edge_limit {
        if let Some(len) = girth(g).filter(|&len| len < 7) {
            return Err(AlgorithmError::GirthTooSmall(len));
        }
    } else {
        log::info!("girth not rechecked above {} edges", cfg.girth_check_edge_limit);
    }
    pipeline(g, cfg, mode)
}

/// The high-girth pipeline restricted to forests, with an exact clean-up.
pub fn ruling_set_tree_fast_delta(g: &Graph, cfg: &RunConfig) -> Result<RulingSetResult, AlgorithmError> {
    cfg.validate()?;
    if !g.is_forest() {
        return Err(AlgorithmError::NotAForest);
    }
    pipeline(g, cfg, CleanupMode::ExactMis)
}

fn pipeline(g: &Graph, cfg: &RunConfig, mode: CleanupMode) -> Result<RulingSetResult, AlgorithmError> {
    let n = g.node_count();
    let radius = cleanup_radius(g, cfg, mode);
    let beta = beta_for_radius(radius);
    if n <= 1 {
        let mut r = RulingSetResult::trivial(&cfg.algorithm, cfg.seed, n, beta);
        r.set = (0..n).collect();
        r.final_mis = r.set.clone();
        r.cleanup_radius = radius;
        return Ok(r);
    }
    let delta = g.max_degree();
    let cutoff = cfg.mis_degree_cutoff;
    let small = delta_small(n, cfg.delta_small_exponent, cutoff);
    let mut p = Pipeline::new(g, cfg);

    let mut bound = delta;
    for (i, t) in threshold_schedule(delta, small).into_iter().enumerate() {
        let cut = phase2_value(cfg.phase2_cutoff, bound, t);
        let s = degree_drop_sampling(&mut p.state, cfg.c_tilde, cut);
        p.state.record_phase(format!("sampling[{}]", i + 1), s.len(), 0);
        p.iterations.push(IterationRecord {
            stage: Stage::Sampling,
            index: i + 1,
            entry_bound: bound,
            threshold: t,
            joined: s,
            put_aside: Vec::new(),
            cleanup: Vec::new(),
            max_alive_degree_after: p.state.max_alive_degree(),
        });
        bound = t;
    }

    // Nodes the sampling loop failed to bring below Δ_small exceed the
    // first Degree-Drop threshold and end up put aside.
    let base = delta.min(small);
    p.degree_drop_loop(base, &threshold_schedule(base, cutoff), cfg.lmj_iterations());
    let mis = p.finish_mis(delta.min(cutoff), cutoff)?;

    let w_sets = p.put_aside_sets();
    let in_set: Vec<bool> = (0..n).map(|v| p.state.in_set(v)).collect();
    let cleanup = solve_small_components(g, &w_sets, &in_set, radius, &cfg.cost)?;
    p.state.charge(cleanup.rounds);
    let z_total = cleanup.z.iter().map(Vec::len).sum();
    p.attach_cleanup(cleanup.z);
    p.state.record_phase("cleanup", z_total, 0);

    let mut result = p.into_result(cfg, mis, beta);
    result.delta_small = Some(small);
    result.cleanup_radius = radius;
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, GraphFamily, GraphFamilySpec};

    fn cfg(seed: u64) -> RunConfig {
        RunConfig { seed, algorithm: "girth2rs".into(), ..RunConfig::default() }
    }

    fn dominated_within(g: &Graph, set: &[usize], beta: usize) -> bool {
        let d = crate::graph::bfs_distances(g, set, None, beta);
        d.iter().all(|&x| x != crate::graph::UNREACHED)
    }

    #[test]
    fn delta_small_and_radius() {
        assert_eq!(delta_small(1 << 16, 3.0, 18), 4096);
        assert_eq!(delta_small(1 << 16, 1.0, 18), 18);
        // N = 4096^6 * 16 = 2^76, log2 76 = 6.25
        assert_eq!(relaxed_radius(1 << 16, 4096), 7);
        assert_eq!(beta_for_radius(1), 2);
        assert_eq!(beta_for_radius(7), 8);
    }

    #[test]
    fn seven_cycle_every_seed() {
        let g = Graph::from_edges(7, (0..7).map(|i| (i, (i + 1) % 7))).unwrap();
        for seed in 0..200 {
            let r = ruling_set_high_girth(&g, &cfg(seed), CleanupMode::ExactMis).unwrap();
            assert!((1..=3).contains(&r.set.len()));
            assert!(dominated_within(&g, &r.set, 2));
        }
    }

    #[test]
    fn rejects_short_cycles() {
        let g = Graph::from_edges(6, (0..6).map(|i| (i, (i + 1) % 6))).unwrap();
        assert!(matches!(
            ruling_set_high_girth(&g, &cfg(0), CleanupMode::ExactMis),
            Err(AlgorithmError::GirthTooSmall(6))
        ));
    }

    #[test]
    fn fast_delta_on_a_big_star() {
        let g = generate(&GraphFamilySpec::new(GraphFamily::Star { n: 10_001 }, 0)).unwrap();
        let r = ruling_set_tree_fast_delta(&g, &cfg(3)).unwrap();
        assert!(dominated_within(&g, &r.set, 2));
        let sampling = r.phases.iter().filter(|p| p.phase.starts_with("sampling")).count();
        // log_{4/3}(log2 10^4) = 9.1
        assert!(sampling <= 10);
        assert!(sampling >= 1);
    }

    #[test]
    fn fast_delta_rejects_cycles() {
        let g = Graph::from_edges(7, (0..7).map(|i| (i, (i + 1) % 7))).unwrap();
        assert!(matches!(ruling_set_tree_fast_delta(&g, &cfg(0)), Err(AlgorithmError::NotAForest)));
    }
}
