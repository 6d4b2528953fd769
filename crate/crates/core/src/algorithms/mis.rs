//! Deterministic MIS for bounded-degree residual graphs: Linial-style color
//! reduction followed by a sweep over the color classes.

use super::AlgorithmError;
use crate::engine::SimState;
use crate::graph::{Graph, NodeId};

/// Lowest-id greedy MIS of the subgraph induced by `nodes`.
pub fn greedy_mis(g: &Graph, nodes: &[NodeId]) -> Vec<NodeId> {
    let mut order = nodes.to_vec();
    order.sort_unstable();
    let mut member = vec![false; g.node_count()];
    for &v in &order {
        member[v] = true;
    }
    let mut chosen = vec![false; g.node_count()];
    let mut out = Vec::new();
    for v in order {
        if !g.neighbors(v).iter().any(|&w| member[w] && chosen[w]) {
            chosen[v] = true;
            out.push(v);
        }
    }
    out
}

/// MIS of the alive subgraph; every member joins S and dies, the rest die
/// too. `delta_bound` is the degree bound known to all nodes.
pub fn mis_constant_degree(
    state: &mut SimState<'_>,
    delta_bound: usize,
    cutoff: usize,
) -> Result<Vec<NodeId>, AlgorithmError> {
    let alive = state.alive_nodes();
    if alive.is_empty() {
        return Ok(Vec::new());
    }
    let max_deg = state.max_alive_degree();
    if max_deg > cutoff || max_deg > delta_bound.max(1) {
        return Err(AlgorithmError::PreconditionViolated(format!(
            "final MIS called with alive degree {max_deg} above bound {}",
            delta_bound.min(cutoff)
        )));
    }
    let g = state.graph();
    let delta = delta_bound.max(1);
    let mut colors: Vec<usize> = (0..g.node_count()).collect();
    let mut palette = g.node_count();
    let mut iterations = 0;
    loop {
        let (d, q) = reduction_parameters(delta, palette);
        if q * q >= palette {
            break;
        }
        let next: Vec<(NodeId, usize)> = alive
            .iter()
            .map(|&v| {
                let own = colors[v];
                let x = (0..q)
                    .find(|&x| {
                        let pv = eval(own, d, q, x);
                        g.neighbors(v)
                            .iter()
                            .filter(|&&w| state.is_alive(w))
                            .all(|&w| eval(colors[w], d, q, x) != pv)
                    })
                    .expect("q > Δ·d leaves a free evaluation point");
                (v, x * q + eval(own, d, q, x))
            })
            .collect();
        for (v, c) in next {
            colors[v] = c;
        }
        palette = q * q;
        iterations += 1;
    }
    state.charge(iterations + palette);

    let mut order = alive.clone();
    order.sort_unstable_by_key(|&v| (colors[v], v));
    let mut chosen = vec![false; g.node_count()];
    let mut out = Vec::new();
    for v in order {
        if !g.neighbors(v).iter().any(|&w| state.is_alive(w) && chosen[w]) {
            chosen[v] = true;
            out.push(v);
        }
    }
    out.sort_unstable();
    state.join_and_kill(&out);
    state.kill_remaining();
    Ok(out)
}

// Polynomial of degree `d` over GF(q) whose coefficients are the base-q
// digits of `color`, evaluated at `x`.
fn eval(color: usize, d: usize, q: usize, x: usize) -> usize {
    let mut digits = color;
    let mut power = 1usize;
    let mut acc = 0usize;
    for _ in 0..=d {
        acc = (acc + (digits % q) * power) % q;
        digits /= q;
        power = power * x % q;
    }
    acc
}

// Smallest prime q over all d with q > Δ·d and q^(d+1) >= palette.
fn reduction_parameters(delta: usize, palette: usize) -> (usize, usize) {
    (1..=40)
        .map(|d| {
            let lower = (delta * d + 1).max(ceil_root(palette, d + 1));
            (d, next_prime(lower))
        })
        .min_by_key(|&(d, q)| (q, d))
        .expect("non-empty range")
}

fn ceil_root(m: usize, k: usize) -> usize {
    let mut r = (m as f64).powf(1.0 / k as f64).floor() as usize;
    r = r.saturating_sub(1).max(1);
    while (r as u128).pow(k as u32) < m as u128 {
        r += 1;
    }
    r
}

fn next_prime(from: usize) -> usize {
    (from.max(2)..)
        .find(|&p| (2..).take_while(|i| i * i <= p).all(|i| p % i != 0))
        .expect("primes are unbounded")
}
