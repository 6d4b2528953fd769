use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use ruling_sim::algorithms::{AlgorithmError, CleanupMode, Phase2Cutoff, Registry, RunConfig};
use ruling_sim::experiments::{
    fit_rounds, log2_log2, run_mc, scaling_experiment, write_mc_csv, write_scaling_csv, Lemma, McConfig,
    ScalingFamily, UncoveredInstance,
};
use ruling_sim::graph::{generate, has_girth_at_least, load_edge_list_file, write_edge_list, GraphFamily, GraphFamilySpec};
use ruling_sim::verify::{check_domination, check_independent, check_result, ResultDocument, SCHEMA_VERSION};

use crate::{
    CleanupArg, FamilyArg, GenArgs, InstanceArg, LemmaArg, McArgs, Phase2Arg, RunArgs, ScaleArgs, ScaleFamilyArg,
    VerifyArgs,
};

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn need(value: Option<usize>, flag: &str) -> Result<usize> {
    value.ok_or_else(|| anyhow!("--{flag} is required for this family"))
}

pub fn gen(a: GenArgs) -> Result<bool> {
    let family = match a.family {
        FamilyArg::Tree => GraphFamily::UniformRandomTree { n: need(a.n, "n")? },
        FamilyArg::Girth7 => GraphFamily::HighGirthRegularish {
            n: need(a.n, "n")?,
            target_degree: need(a.target_degree, "target-degree")?,
        },
        FamilyArg::Path => GraphFamily::Path { n: need(a.n, "n")? },
        FamilyArg::Star => GraphFamily::Star { n: need(a.n, "n")? },
        FamilyArg::StarOfStars => GraphFamily::StarOfStars { d1: need(a.d1, "d1")?, d2: need(a.d2, "d2")?, d3: a.d3 },
        FamilyArg::Caterpillar => GraphFamily::Caterpillar {
            spine: need(a.spine, "spine")?,
            legs: need(a.legs, "legs")?,
        },
    };
    let g = generate(&GraphFamilySpec::new(family, a.seed))?;
    let mut out = sink(a.out.as_deref())?;
    write_edge_list(&g, &mut out)?;
    out.flush()?;
    let shape = if g.is_forest() {
        "forest".to_string()
    } else {
        format!("girth>=7: {}", has_girth_at_least(&g, 7))
    };
    let summary = format!("n={} m={} max_degree={} {shape}", g.node_count(), g.edge_count(), g.max_degree());
    if a.out.is_some() {
        println!("{summary}");
    } else {
        eprintln!("{summary}");
    }
    Ok(true)
}

fn run_config(a: &RunArgs) -> RunConfig {
    RunConfig {
        algorithm: a.algorithm.clone(),
        seed: a.seed,
        c: a.c,
        c_tilde: a.c_tilde,
        mis_degree_cutoff: a.mis_cutoff,
        delta_small_exponent: a.delta_small_exponent,
        phase2_cutoff: match a.phase2_cutoff {
            Phase2Arg::SqrtDelta => Phase2Cutoff::SqrtDelta,
            Phase2Arg::DeltaStar34 => Phase2Cutoff::DeltaStar34,
        },
        cleanup_mode: match a.cleanup {
            CleanupArg::ExactMis => CleanupMode::ExactMis,
            CleanupArg::RelaxedRuling => CleanupMode::RelaxedRuling,
        },
        relaxed_radius: a.relaxed_radius,
        ..RunConfig::default()
    }
}

fn write_json<T: serde::Serialize>(path: Option<&PathBuf>, value: &T) -> Result<()> {
    let mut out = sink(path.map(PathBuf::as_path))?;
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

pub fn run(a: RunArgs) -> Result<bool> {
    let g = load_edge_list_file(&a.graph).with_context(|| format!("cannot load {}", a.graph.display()))?;
    let cfg = run_config(&a);
    let result = match Registry::default().run(&g, &cfg) {
        Ok(r) => r,
        Err(e @ AlgorithmError::PreconditionViolated(_)) => {
            eprintln!("check failure: {e}");
            return Ok(false);
        }
        Err(e) => return Err(e.into()),
    };
    let reports = check_result(&g, &result);
    let doc = ResultDocument::new(&g, &result);
    write_json(a.out.as_ref(), &doc)?;
    if let Some(path) = &a.trace {
        let mut out = sink(Some(path))?;
        for phase in &result.phases {
            serde_json::to_writer(&mut out, phase)?;
            writeln!(out)?;
        }
        out.flush()?;
    }
    if let Some(path) = &a.report {
        write_json(Some(path), &reports)?;
    }
    for r in &reports {
        eprintln!("{}", r.summary());
    }
    eprintln!(
        "{}: |S|={} beta_measured={} beta_bound={} rounds={}",
        result.algorithm,
        result.set.len(),
        doc.beta_measured,
        result.beta_bound,
        result.rounds_total
    );
    Ok(reports.iter().all(|r| r.pass))
}

pub fn verify(a: VerifyArgs) -> Result<bool> {
    let g = load_edge_list_file(&a.graph).with_context(|| format!("cannot load {}", a.graph.display()))?;
    let file = File::open(&a.set).with_context(|| format!("cannot open {}", a.set.display()))?;
    let doc: ResultDocument = serde_json::from_reader(io::BufReader::new(file)).context("malformed result JSON")?;
    if doc.schema_version != SCHEMA_VERSION {
        bail!("unsupported schema_version {}", doc.schema_version);
    }
    if doc.n != g.node_count() {
        bail!("result is for {} nodes, graph has {}", doc.n, g.node_count());
    }
    let reports = vec![check_independent(&g, &doc.set), check_domination(&g, &doc.set, a.beta)];
    if let Some(path) = &a.report {
        write_json(Some(path), &reports)?;
    }
    for r in &reports {
        println!("{}", r.summary());
    }
    if let Some(b) = reports[1].measured.get("beta_measured") {
        println!("beta_measured={b}");
    }
    Ok(reports.iter().all(|r| r.pass))
}

pub fn mc(a: McArgs) -> Result<bool> {
    let lemma = match a.lemma {
        LemmaArg::MinCdf => Lemma::MinCdf,
        LemmaArg::ConditionalProb => Lemma::ConditionalProb,
        LemmaArg::ConditionalDensity => Lemma::ConditionalDensity,
        LemmaArg::Uncovered => Lemma::Uncovered,
    };
    let mut cfg = McConfig::new(lemma, a.samples, a.seed);
    cfg.ks = a.k;
    cfg.ls = a.l;
    cfg.deltas = a.delta;
    cfg.sigmas = a.sigmas;
    cfg.instance = match a.instance {
        InstanceArg::Star => UncoveredInstance::Star,
        InstanceArg::StarOfStars => UncoveredInstance::StarOfStars,
    };
    let rows = run_mc(&cfg)?;
    write_mc_csv(&rows, sink(a.out.as_deref())?)?;
    let failed = rows.iter().filter(|r| !r.pass).count();
    // One miss per 16 cells is expected at 3σ when testing many cells.
    let allowed = if lemma == Lemma::ConditionalProb { rows.len() / 16 } else { 0 };
    eprintln!("{} of {} grid points pass (allowed misses: {allowed})", rows.len() - failed, rows.len());
    Ok(failed <= allowed)
}

fn parse_grid(spec: &str) -> Result<Vec<usize>> {
    if let Some((lo, hi)) = spec.split_once("..") {
        let (lo, hi): (usize, usize) = (lo.trim().parse()?, hi.trim().parse()?);
        if lo == 0 || lo > hi {
            bail!("bad range {spec}");
        }
        let mut grid = Vec::new();
        let mut n = lo;
        while n <= hi {
            grid.push(n);
            n = n.checked_mul(2).ok_or_else(|| anyhow!("range overflow"))?;
        }
        Ok(grid)
    } else {
        spec.split(',').map(|x| Ok(x.trim().parse()?)).collect()
    }
}

pub fn scale(a: ScaleArgs) -> Result<bool> {
    let grid = parse_grid(&a.n).context("--n")?;
    let family = match a.family {
        ScaleFamilyArg::Tree => ScalingFamily::Tree,
        ScaleFamilyArg::Girth7 => ScalingFamily::Girth7 { target_degree: a.target_degree },
    };
    let cfg = RunConfig {
        algorithm: a.algorithm.clone(),
        mis_degree_cutoff: a.mis_cutoff,
        delta_small_exponent: a.delta_small_exponent,
        ..RunConfig::default()
    };
    let rows = scaling_experiment(&Registry::default(), family, &grid, a.trials, a.seed, &cfg)?;
    write_scaling_csv(&rows, sink(a.out.as_deref())?)?;
    if rows.len() >= 2 {
        let fit = fit_rounds(&rows);
        eprintln!(
            "fit: rounds_total = {:.4} + {:.4} * log2 log2 n (R^2 = {:.4})",
            fit.a, fit.b, fit.r_squared
        );
        for &n in &grid {
            let at: Vec<f64> = rows
                .iter()
                .zip(&fit.residuals)
                .filter(|(r, _)| r.n == n)
                .map(|(_, e)| *e)
                .collect();
            let mean = at.iter().sum::<f64>() / at.len().max(1) as f64;
            eprintln!("  n={n} log2log2n={:.4} mean residual={mean:.4}", log2_log2(n));
        }
    }
    let failed = rows.iter().filter(|r| !r.checks_pass).count();
    if failed > 0 {
        eprintln!("{failed} runs failed their checks");
    }
    Ok(failed == 0)
}
