//! Monte-Carlo checks of the probability lemmas behind LMJ and round-count
//! scaling runs.
//!
//! All sampling is split into fixed chunks with seeds derived from the
//! master seed, so results do not depend on the rayon thread count.

use std::io::Write;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{Beta, ContinuousCDF};
use thiserror::Error;

use crate::algorithms::{AlgorithmError, Registry, RunConfig};
use crate::engine::trial_seed;
use crate::graph::{bfs_distances, generate, Graph, GraphError, GraphFamily, GraphFamilySpec, NodeId, UNREACHED};
use crate::verify::check_result;

const CHUNK: u64 = 1 << 14;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid experiment configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Algorithm(#[from] AlgorithmError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

fn chunks(samples: u64) -> impl IndexedParallelIterator<Item = (u64, u64)> {
    let count = samples.div_ceil(CHUNK) as usize;
    (0..count).into_par_iter().map(move |c| {
        let c = c as u64;
        (c, CHUNK.min(samples - c * CHUNK))
    })
}

fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(trial_seed(seed, chunk))
}

/// Binomial proportion with a normal-approximation interval.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BinomialEstimate {
    pub successes: u64,
    pub trials: u64,
    pub p_hat: f64,
    /// Standard error `sqrt(p̂(1-p̂)/N)`.
    pub sigma: f64,
}

impl BinomialEstimate {
    pub fn new(successes: u64, trials: u64) -> Self {
        let p_hat = successes as f64 / trials as f64;
        let sigma = (p_hat * (1.0 - p_hat) / trials as f64).sqrt();
        BinomialEstimate { successes, trials, p_hat, sigma }
    }

    /// `p̂ ± z·σ`, clamped to [0, 1].
    pub fn normal_interval(&self, z: f64) -> (f64, f64) {
        ((self.p_hat - z * self.sigma).max(0.0), (self.p_hat + z * self.sigma).min(1.0))
    }

    /// Exact two-sided Clopper–Pearson interval at level `1 - alpha`.
    pub fn clopper_pearson(&self, alpha: f64) -> (f64, f64) {
        let (k, n) = (self.successes as f64, self.trials as f64);
        let lower = if self.successes == 0 {
            0.0
        } else {
            Beta::new(k, n - k + 1.0).expect("positive shape").inverse_cdf(alpha / 2.0)
        };
        let upper = if self.successes == self.trials {
            1.0
        } else {
            Beta::new(k + 1.0, n - k).expect("positive shape").inverse_cdf(1.0 - alpha / 2.0)
        };
        (lower, upper)
    }
}

/// Asymptotic 99% critical value of the one-sample KS statistic.
pub fn ks_critical_99(samples: u64) -> f64 {
    1.628 / (samples as f64).sqrt()
}

/// KS distance between the empirical CDF of `min(U_1..U_k)` and
/// `1 - (1 - x)^k`.
pub fn mc_min_cdf(k: usize, samples: u64, seed: u64) -> f64 {
    assert!(k >= 1 && samples > 0);
    let mut xs: Vec<f64> = chunks(samples)
        .flat_map_iter(|(c, len)| {
            let mut rng = chunk_rng(seed, c);
            (0..len)
                .map(|_| (0..k).map(|_| rng.random::<f64>()).fold(1.0, f64::min))
                .collect::<Vec<_>>()
        })
        .collect();
    xs.par_sort_unstable_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = 1.0 - (1.0 - x).powi(k as i32);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

/// Inverse-CDF draw from the density `k(1-x)^{k-1}` of a minimum of `k`
/// uniforms.
pub fn sample_min_of_uniforms<R: RngCore>(rng: &mut R, k: usize) -> f64 {
    let u: f64 = rng.random();
    1.0 - (1.0 - u).powf(1.0 / k as f64)
}

/// Estimate of `P[r < min(X_1..X_l)]` for `r` uniform and each `X_i`
/// distributed as a minimum of `k` uniforms. The exact value is `1/(kl+1)`.
pub fn mc_conditional_prob(k: usize, l: usize, samples: u64, seed: u64) -> BinomialEstimate {
    assert!(k >= 1 && l >= 1 && samples > 0);
    let hits: u64 = chunks(samples)
        .map(|(c, len)| {
            let mut rng = chunk_rng(seed, c);
            (0..len)
                .filter(|_| {
                    let r: f64 = rng.random();
                    (0..l).all(|_| r < sample_min_of_uniforms(&mut rng, k))
                })
                .count() as u64
        })
        .sum();
    BinomialEstimate::new(hits, samples)
}

/// Mass of the density `(k+1)(1-x)^k` on `[a, b]`.
pub fn exact_bin_mass(k: usize, a: f64, b: f64) -> f64 {
    (1.0 - a).powi(k as i32 + 1) - (1.0 - b).powi(k as i32 + 1)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityComparison {
    /// `Σ |empirical mass - exact mass|` over the bins.
    pub l1: f64,
    pub accepted: u64,
    pub attempts: u64,
    pub bins: Vec<u64>,
}

pub const DENSITY_BINS: usize = 100;

/// Rejection-samples `r` uniform conditioned on `r < min` of `k` uniforms
/// until `accepted` samples are kept, and compares their 100-bin histogram
/// with `(k+1)(1-x)^k`.
pub fn mc_conditional_density(k: usize, accepted: u64, seed: u64) -> DensityComparison {
    assert!(accepted > 0);
    let per_chunk: Vec<(Vec<u64>, u64)> = chunks(accepted)
        .map(|(c, len)| {
            let mut rng = chunk_rng(seed, c);
            let mut bins = vec![0u64; DENSITY_BINS];
            let (mut kept, mut attempts) = (0, 0u64);
            while kept < len {
                attempts += 1;
                let r: f64 = rng.random();
                if (0..k).all(|_| r < rng.random::<f64>()) {
                    bins[((r * DENSITY_BINS as f64) as usize).min(DENSITY_BINS - 1)] += 1;
                    kept += 1;
                }
            }
            (bins, attempts)
        })
        .collect();
    let mut bins = vec![0u64; DENSITY_BINS];
    let mut attempts = 0;
    for (b, a) in per_chunk {
        attempts += a;
        for (acc, x) in bins.iter_mut().zip(b) {
            *acc += x;
        }
    }
    let width = 1.0 / DENSITY_BINS as f64;
    let l1 = bins
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            let exact = exact_bin_mass(k, i as f64 * width, (i + 1) as f64 * width);
            (c as f64 / accepted as f64 - exact).abs()
        })
        .sum();
    DensityComparison { l1, accepted, attempts, bins }
}

/// Instances for the uncovered-probability experiment; the designated node
/// is always node 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UncoveredInstance {
    /// Star with `Δ` leaves.
    Star,
    /// Root with `round(Δ^0.8)` children, each with `round(Δ^0.5)` children,
    /// each of those with one leaf.
    StarOfStars,
}

impl UncoveredInstance {
    pub fn family(&self, delta: usize) -> GraphFamily {
        match self {
            UncoveredInstance::Star => GraphFamily::Star { n: delta + 1 },
            UncoveredInstance::StarOfStars => GraphFamily::StarOfStars {
                d1: ((delta as f64).powf(0.8).round() as usize).max(1),
                d2: ((delta as f64).sqrt().round() as usize).max(1),
                d3: 1,
            },
        }
    }
}

/// Number of trials in which `v` has no LMJ joiner within distance 2 after
/// one LMJ iteration on all of `g`.
///
/// Only the draws inside the 3-ball of `v` matter, so only those are
/// simulated; ties break by node id as in the engine.
pub fn lmj_uncovered_count(g: &Graph, v: NodeId, trials: u64, seed: u64) -> u64 {
    let dist = bfs_distances(g, &[v], None, 3);
    let ball: Vec<NodeId> = (0..g.node_count()).filter(|&u| dist[u] != UNREACHED).collect();
    let mut local = vec![usize::MAX; g.node_count()];
    for (i, &u) in ball.iter().enumerate() {
        local[u] = i;
    }
    let inner: Vec<(usize, Vec<usize>)> = ball
        .iter()
        .filter(|&&u| dist[u] <= 2)
        .map(|&u| (local[u], g.neighbors(u).iter().map(|&w| local[w]).collect()))
        .collect();
    chunks(trials)
        .map(|(c, len)| {
            let mut rng = chunk_rng(seed, c);
            let mut draws = vec![0u64; ball.len()];
            let mut count = 0;
            for _ in 0..len {
                for d in draws.iter_mut() {
                    *d = rng.next_u64();
                }
                // Local ids follow global ids, so (draw, local id) orders
                // like (draw, node id).
                let joins = inner
                    .iter()
                    .any(|(x, nbrs)| nbrs.iter().all(|&y| (draws[*x], *x) < (draws[y], y)));
                count += u64::from(!joins);
            }
            count
        })
        .sum()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UncoveredRow {
    pub delta_nominal: usize,
    pub delta_max: usize,
    pub designated_degree: usize,
    pub estimate: BinomialEstimate,
    /// `(1/Δ_max)^{1/16}`.
    pub bound: f64,
}

/// Per nominal `Δ`: empirical probability that node 0 stays uncovered after
/// one LMJ, next to the bound `(1/Δ_max)^{1/16}` for the measured maximum
/// degree.
pub fn mc_uncovered_probability(
    instance: UncoveredInstance,
    deltas: &[usize],
    trials: u64,
    seed: u64,
) -> Result<Vec<UncoveredRow>, ExperimentError> {
    deltas
        .iter()
        .enumerate()
        .map(|(i, &delta)| {
            let g = generate(&GraphFamilySpec::new(instance.family(delta), 0))?;
            let uncovered = lmj_uncovered_count(&g, 0, trials, trial_seed(seed, i as u64));
            let delta_max = g.max_degree();
            Ok(UncoveredRow {
                delta_nominal: delta,
                delta_max,
                designated_degree: g.degree(0),
                estimate: BinomialEstimate::new(uncovered, trials),
                bound: (1.0 / delta_max.max(1) as f64).powf(1.0 / 16.0),
            })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Lemma {
    MinCdf,
    ConditionalProb,
    ConditionalDensity,
    Uncovered,
}

/// Parameters of a Monte-Carlo suite.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct McConfig {
    pub lemma: Lemma,
    pub ks: Vec<usize>,
    pub ls: Vec<usize>,
    pub deltas: Vec<usize>,
    pub instance: UncoveredInstance,
    pub samples: u64,
    pub seed: u64,
    /// Width of the normal intervals in standard errors.
    pub sigmas: f64,
    /// Pass threshold for the density comparison.
    pub density_l1_tolerance: f64,
}

impl McConfig {
    pub fn new(lemma: Lemma, samples: u64, seed: u64) -> Self {
        McConfig {
            lemma,
            ks: vec![1],
            ls: vec![1],
            deltas: vec![256],
            instance: UncoveredInstance::Star,
            samples,
            seed,
            sigmas: 3.0,
            density_l1_tolerance: 0.02,
        }
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        let bad = |m: &str| Err(ExperimentError::InvalidConfig(m.into()));
        if self.samples < 1000 {
            return bad("samples must be at least 1000");
        }
        if self.sigmas.is_nan() || self.sigmas <= 0.0 {
            return bad("sigmas must be positive");
        }
        match self.lemma {
            Lemma::MinCdf | Lemma::ConditionalDensity if self.ks.is_empty() => bad("k grid is empty"),
            Lemma::MinCdf if self.ks.contains(&0) => bad("k must be at least 1"),
            Lemma::ConditionalProb if self.ks.is_empty() || self.ls.is_empty() => bad("k or l grid is empty"),
            Lemma::ConditionalProb if self.ks.contains(&0) || self.ls.contains(&0) => {
                bad("k and l must be at least 1")
            }
            Lemma::Uncovered if self.deltas.is_empty() || self.deltas.contains(&0) => {
                bad("delta grid must be nonempty and positive")
            }
            _ => Ok(()),
        }
    }
}

/// One grid point of a Monte-Carlo suite.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct McRow {
    pub lemma: Lemma,
    pub k: usize,
    pub l: usize,
    pub delta: usize,
    pub samples: u64,
    pub estimate: f64,
    /// Exact value or bound the estimate is compared with.
    pub reference: f64,
    pub lower: f64,
    pub upper: f64,
    pub pass: bool,
}

/// Runs every grid point of `cfg`; grid point `i` uses seed
/// `trial_seed(cfg.seed, i)`.
pub fn run_mc(cfg: &McConfig) -> Result<Vec<McRow>, ExperimentError> {
    cfg.validate()?;
    let seed = |i: usize| trial_seed(cfg.seed, i as u64);
    let row = |k, l, delta| McRow {
        lemma: cfg.lemma,
        k,
        l,
        delta,
        samples: cfg.samples,
        estimate: 0.0,
        reference: 0.0,
        lower: 0.0,
        upper: 0.0,
        pass: false,
    };
    let mut rows = Vec::new();
    match cfg.lemma {
        Lemma::MinCdf => {
            for (i, &k) in cfg.ks.iter().enumerate() {
                let ks = mc_min_cdf(k, cfg.samples, seed(i));
                let crit = ks_critical_99(cfg.samples);
                rows.push(McRow { estimate: ks, upper: crit, pass: ks < crit, ..row(k, 0, 0) });
            }
        }
        Lemma::ConditionalProb => {
            for (i, (&k, &l)) in cfg.ks.iter().flat_map(|k| cfg.ls.iter().map(move |l| (k, l))).enumerate() {
                let est = mc_conditional_prob(k, l, cfg.samples, seed(i));
                let exact = 1.0 / (k * l + 1) as f64;
                let (lower, upper) = est.normal_interval(cfg.sigmas);
                rows.push(McRow {
                    estimate: est.p_hat,
                    reference: exact,
                    lower,
                    upper,
                    pass: (lower..=upper).contains(&exact),
                    ..row(k, l, 0)
                });
            }
        }
        Lemma::ConditionalDensity => {
            for (i, &k) in cfg.ks.iter().enumerate() {
                let cmp = mc_conditional_density(k, cfg.samples, seed(i));
                rows.push(McRow {
                    estimate: cmp.l1,
                    upper: cfg.density_l1_tolerance,
                    pass: cmp.l1 < cfg.density_l1_tolerance,
                    ..row(k, 0, 0)
                });
            }
        }
        Lemma::Uncovered => {
            for r in mc_uncovered_probability(cfg.instance, &cfg.deltas, cfg.samples, cfg.seed)? {
                let (lower, upper) = r.estimate.normal_interval(cfg.sigmas);
                rows.push(McRow {
                    estimate: r.estimate.p_hat,
                    reference: r.bound,
                    lower,
                    upper,
                    pass: r.estimate.p_hat <= r.bound + cfg.sigmas * r.estimate.sigma,
                    ..row(0, 0, r.delta_max)
                });
            }
        }
    }
    Ok(rows)
}

/// Graph families for scaling runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScalingFamily {
    Tree,
    Girth7 { target_degree: usize },
}

impl ScalingFamily {
    pub fn name(&self) -> &'static str {
        match self {
            ScalingFamily::Tree => "tree",
            ScalingFamily::Girth7 { .. } => "girth7",
        }
    }

    pub fn spec(&self, n: usize, seed: u64) -> GraphFamilySpec {
        let family = match *self {
            ScalingFamily::Tree => GraphFamily::UniformRandomTree { n },
            ScalingFamily::Girth7 { target_degree } => GraphFamily::HighGirthRegularish { n, target_degree },
        };
        GraphFamilySpec::new(family, seed)
    }
}

/// One pipeline run of a scaling experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub n: usize,
    pub family: String,
    pub algorithm: String,
    pub trial: usize,
    pub graph_seed: u64,
    pub run_seed: u64,
    pub rounds_total: usize,
    pub max_degree: usize,
    pub rounds_sampling: usize,
    pub rounds_degree_drop: usize,
    pub rounds_cleanup: usize,
    pub rounds_mis: usize,
    pub checks_pass: bool,
}

pub const SCALING_HEADER: [&str; 13] = [
    "n",
    "family",
    "algorithm",
    "trial",
    "graph_seed",
    "run_seed",
    "rounds_total",
    "max_degree",
    "rounds_sampling",
    "rounds_degree_drop",
    "rounds_cleanup",
    "rounds_mis",
    "checks_pass",
];

/// Runs `cfg.algorithm` on `trials` fresh graphs per `n`. The graph for
/// point `p`, trial `t` uses seed `trial_seed(seed, p << 32 | t)` and the
/// run uses `trial_seed` of that with index 1. `cfg.seed` is ignored.
pub fn scaling_experiment(
    registry: &Registry,
    family: ScalingFamily,
    n_grid: &[usize],
    trials: usize,
    seed: u64,
    cfg: &RunConfig,
) -> Result<Vec<ScalingRow>, ExperimentError> {
    if n_grid.is_empty() || n_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(ExperimentError::InvalidConfig("n grid must be nonempty and increasing".into()));
    }
    registry.get(&cfg.algorithm)?;
    let jobs: Vec<(usize, usize)> = (0..n_grid.len()).flat_map(|p| (0..trials).map(move |t| (p, t))).collect();
    jobs.into_par_iter()
        .map(|(p, t)| {
            let n = n_grid[p];
            let graph_seed = trial_seed(seed, ((p as u64) << 32) | t as u64);
            let run_seed = trial_seed(graph_seed, 1);
            let g = generate(&family.spec(n, graph_seed))?;
            let run_cfg = RunConfig { seed: run_seed, ..cfg.clone() };
            let result = registry.run(&g, &run_cfg)?;
            let by_prefix = |prefix: &str| {
                result.phases.iter().filter(|ph| ph.phase.starts_with(prefix)).map(|ph| ph.rounds).sum()
            };
            Ok(ScalingRow {
                n,
                family: family.name().into(),
                algorithm: cfg.algorithm.clone(),
                trial: t,
                graph_seed,
                run_seed,
                rounds_total: result.rounds_total,
                max_degree: g.max_degree(),
                rounds_sampling: by_prefix("sampling"),
                rounds_degree_drop: by_prefix("degree_drop"),
                rounds_cleanup: by_prefix("cleanup"),
                rounds_mis: by_prefix("mis"),
                checks_pass: check_result(&g, &result).iter().all(|r| r.pass),
            })
        })
        .collect()
}

/// Least-squares fit `y = a + b·x`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub a: f64,
    pub b: f64,
    pub residuals: Vec<f64>,
    pub r_squared: f64,
}

impl LinearFit {
    pub fn predict(&self, x: f64) -> f64 {
        self.a + self.b * x
    }
}

pub fn fit_linear(xs: &[f64], ys: &[f64]) -> LinearFit {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let b = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let a = my - b * mx;
    let residuals: Vec<f64> = xs.iter().zip(ys).map(|(x, y)| y - (a + b * x)).collect();
    let ss_res: f64 = residuals.iter().map(|r| r * r).sum();
    let ss_tot: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let r_squared = if ss_tot > 0.0 { 1.0 - ss_res / ss_tot } else { 1.0 };
    LinearFit { a, b, residuals, r_squared }
}

pub fn log2_log2(n: usize) -> f64 {
    (n as f64).log2().log2()
}

/// Fit of `rounds_total` against `log2 log2 n` over all rows.
pub fn fit_rounds(rows: &[ScalingRow]) -> LinearFit {
    let xs: Vec<f64> = rows.iter().map(|r| log2_log2(r.n)).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.rounds_total as f64).collect();
    fit_linear(&xs, &ys)
}

/// `x` with 9 significant digits.
pub fn format_sig9(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { format!("{x}") };
    }
    let magnitude = x.abs().log10().floor() as i32;
    if (-5..=15).contains(&magnitude) {
        let decimals = (8 - magnitude).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.8e}")
    }
}

pub fn write_scaling_csv<W: Write>(rows: &[ScalingRow], sink: W) -> Result<(), ExperimentError> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(SCALING_HEADER)?;
    for r in rows {
        w.write_record([
            r.n.to_string(),
            r.family.clone(),
            r.algorithm.clone(),
            r.trial.to_string(),
            r.graph_seed.to_string(),
            r.run_seed.to_string(),
            r.rounds_total.to_string(),
            r.max_degree.to_string(),
            r.rounds_sampling.to_string(),
            r.rounds_degree_drop.to_string(),
            r.rounds_cleanup.to_string(),
            r.rounds_mis.to_string(),
            u8::from(r.checks_pass).to_string(),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub const MC_HEADER: [&str; 10] = ["lemma", "k", "l", "delta", "samples", "estimate", "reference", "lower", "upper", "pass"];

pub fn write_mc_csv<W: Write>(rows: &[McRow], sink: W) -> Result<(), ExperimentError> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(MC_HEADER)?;
    for r in rows {
        let lemma = serde_json::to_value(r.lemma).expect("enum serializes");
        w.write_record([
            lemma.as_str().unwrap_or_default().to_string(),
            r.k.to_string(),
            r.l.to_string(),
            r.delta.to_string(),
            r.samples.to_string(),
            format_sig9(r.estimate),
            format_sig9(r.reference),
            format_sig9(r.lower),
            format_sig9(r.upper),
            u8::from(r.pass).to_string(),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::local_minima_join;
    use crate::engine::{RoundCost, SimState};

    #[test]
    fn min_cdf_values() {
        // 1 - (1 - 0.5)^2
        assert_eq!(1.0 - (1.0f64 - 0.5).powi(2), 0.75);
        let n = 200_000;
        assert!(mc_min_cdf(1, n, 3) < ks_critical_99(n));
        assert!(mc_min_cdf(5, n, 4) < ks_critical_99(n));
        // wrong k is detected
        let wrong: f64 = {
            let mut rng = chunk_rng(9, 0);
            let mut xs: Vec<f64> = (0..20_000).map(|_| sample_min_of_uniforms(&mut rng, 3)).collect();
            xs.sort_by(f64::total_cmp);
            xs.iter().enumerate().map(|(i, &x)| ((1.0 - (1.0 - x).powi(2)) - i as f64 / 20_000.0).abs()).fold(0.0, f64::max)
        };
        assert!(wrong > ks_critical_99(20_000));
    }

    #[test]
    fn inverse_cdf_sampler_mean() {
        for k in [1usize, 2, 5, 20] {
            let n = 200_000;
            let mut rng = chunk_rng(k as u64, 0);
            let xs: Vec<f64> = (0..n).map(|_| sample_min_of_uniforms(&mut rng, k)).collect();
            let mean = xs.iter().sum::<f64>() / n as f64;
            let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n as f64;
            let expect = 1.0 / (k + 1) as f64;
            assert!((mean - expect).abs() < 3.0 * (var / n as f64).sqrt(), "k={k} mean={mean}");
        }
    }

    #[test]
    fn conditional_prob_small_cases() {
        for (k, l) in [(1usize, 1usize), (2, 3)] {
            let est = mc_conditional_prob(k, l, 200_000, 17);
            let (lo, hi) = est.normal_interval(3.0);
            let exact = 1.0 / (k * l + 1) as f64;
            assert!(lo <= exact && exact <= hi, "k={k} l={l} {est:?}");
        }
    }

    #[test]
    fn bin_mass_and_density() {
        assert!((exact_bin_mass(1, 0.0, 0.01) - 0.0199).abs() < 1e-12);
        let total: f64 = (0..DENSITY_BINS).map(|i| exact_bin_mass(4, i as f64 / 100.0, (i + 1) as f64 / 100.0)).sum();
        assert!((total - 1.0).abs() < 1e-12);
        let uniform = mc_conditional_density(0, 100_000, 2);
        assert_eq!(uniform.attempts, 100_000);
        assert!(uniform.l1 < 0.06);
        assert!(mc_conditional_density(3, 100_000, 2).l1 < 0.06);
    }

    #[test]
    fn results_do_not_depend_on_thread_count() {
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let many = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let a = one.install(|| (mc_min_cdf(3, 50_000, 1), mc_conditional_prob(2, 2, 50_000, 1)));
        let b = many.install(|| (mc_min_cdf(3, 50_000, 1), mc_conditional_prob(2, 2, 50_000, 1)));
        assert_eq!(a, b);
    }

    #[test]
    fn clopper_pearson_brackets_the_estimate() {
        let e = BinomialEstimate::new(30, 1000);
        let (lo, hi) = e.clopper_pearson(0.01);
        assert!(lo < 0.03 && 0.03 < hi);
        assert_eq!(BinomialEstimate::new(0, 100).clopper_pearson(0.05).0, 0.0);
        // 0 of 100: upper = 1 - 0.025^{1/100}
        let hi0 = BinomialEstimate::new(0, 100).clopper_pearson(0.05).1;
        assert!((hi0 - (1.0 - 0.025f64.powf(0.01))).abs() < 1e-9);
    }

    #[test]
    fn stars_are_always_covered() {
        let g = generate(&GraphFamilySpec::new(GraphFamily::Star { n: 2 }, 0)).unwrap();
        assert_eq!(lmj_uncovered_count(&g, 0, 5000, 1), 0);
        let g = generate(&GraphFamilySpec::new(GraphFamily::Star { n: 257 }, 0)).unwrap();
        assert_eq!(lmj_uncovered_count(&g, 0, 5000, 1), 0);
    }

    // Node 3 of a 7-node path is uncovered iff none of nodes 1..=5 is a
    // local minimum; count that over all 7! orders.
    fn path7_exact() -> f64 {
        fn permute(a: &mut [usize], k: usize, hits: &mut usize, total: &mut usize) {
            if k == a.len() {
                *total += 1;
                let min_at = |x: usize| a[x] < a[x - 1] && a[x] < a[x + 1];
                *hits += usize::from(!(1..=5).any(min_at));
                return;
            }
            for i in k..a.len() {
                a.swap(k, i);
                permute(a, k + 1, hits, total);
                a.swap(k, i);
            }
        }
        let (mut hits, mut total) = (0, 0);
        permute(&mut [0, 1, 2, 3, 4, 5, 6], 0, &mut hits, &mut total);
        hits as f64 / total as f64
    }

    #[test]
    fn uncovered_count_matches_exact_and_engine_routes() {
        let g = Graph::from_edges(7, (1..7).map(|i| (i - 1, i))).unwrap();
        let exact = path7_exact();
        assert!(exact > 0.0);
        let trials = 100_000;
        let local = BinomialEstimate::new(lmj_uncovered_count(&g, 3, trials, 5), trials);
        assert!((local.p_hat - exact).abs() < 4.0 * (exact * (1.0 - exact) / trials as f64).sqrt());

        let engine_hits = (0..trials)
            .filter(|&t| {
                let mut s = SimState::new(&g, trial_seed(6, t), RoundCost::default());
                let all: Vec<_> = (0..7).collect();
                let joined = local_minima_join(&mut s, &all);
                !joined.iter().any(|&x| x.abs_diff(3) <= 2)
            })
            .count();
        let engine = engine_hits as f64 / trials as f64;
        assert!((engine - exact).abs() < 4.0 * (exact * (1.0 - exact) / trials as f64).sqrt());
    }

    #[test]
    fn star_of_stars_shape() {
        let f = UncoveredInstance::StarOfStars.family(256);
        assert_eq!(f, GraphFamily::StarOfStars { d1: 84, d2: 16, d3: 1 });
    }

    #[test]
    fn mc_config_validation() {
        assert!(McConfig::new(Lemma::MinCdf, 999, 0).validate().is_err());
        let mut cfg = McConfig::new(Lemma::ConditionalProb, 1000, 0);
        cfg.ls.clear();
        assert!(cfg.validate().is_err());
        assert!(McConfig::new(Lemma::Uncovered, 1000, 0).validate().is_ok());
    }

    #[test]
    fn linear_fit() {
        let fit = fit_linear(&[1.0, 2.0, 3.0], &[3.0, 5.0, 7.0]);
        assert!((fit.a - 1.0).abs() < 1e-12 && (fit.b - 2.0).abs() < 1e-12);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
        assert_eq!(log2_log2(1 << 16), 4.0);
    }

    #[test]
    fn sig9_format() {
        assert_eq!(format_sig9(0.0), "0");
        assert_eq!(format_sig9(1.0 / 7.0), "0.142857143");
        assert_eq!(format_sig9(12345.678912345), "12345.6789");
        assert_eq!(format_sig9(1.5e-9), "1.50000000e-9");
    }

    #[test]
    fn scaling_rows_are_reproducible() {
        let reg = Registry::default();
        let cfg = RunConfig { mis_degree_cutoff: 3, ..RunConfig::default() };
        let a = scaling_experiment(&reg, ScalingFamily::Tree, &[256, 1024], 3, 7, &cfg).unwrap();
        let b = scaling_experiment(&reg, ScalingFamily::Tree, &[256, 1024], 3, 7, &cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 6);
        for r in &a {
            assert!(r.checks_pass);
            assert_eq!(r.rounds_total, r.rounds_sampling + r.rounds_degree_drop + r.rounds_cleanup + r.rounds_mis);
        }
        let mut buf = Vec::new();
        write_scaling_csv(&a, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 7);
        assert!(text.starts_with("n,family,algorithm"));
        assert!(scaling_experiment(&reg, ScalingFamily::Tree, &[1024, 256], 1, 7, &cfg).is_err());
    }
}
