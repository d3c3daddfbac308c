//! Synthetic power-law graphs and the scalability benchmark.

use std::collections::HashSet;
use std::time::Instant;

use rand::distributions::Distribution;
use rand_distr::WeightedAliasIndex;
use serde::Serialize;

use crate::baselines::high_degree;
use crate::error::{invalid, Result};
use crate::graph::{Graph, NodeId};
use crate::model::{GapSet, Problem};
use crate::rng::{self, domain};
use crate::sandwich::{bound_gaps, BoundSide};
use crate::tim::{general_tim, TimParams};

/// Directed graph whose expected in- and out-degrees follow a power law with the given
/// exponent (Chung-Lu style weights `(i + 1)^(-1 / (exponent - 1))`). Sources and targets
/// are drawn independently by weight; self-loops and repeats are redrawn. Probabilities
/// follow the weighted-cascade rule.
pub fn power_law_graph(n: usize, exponent: f64, avg_degree: f64, master_seed: u64) -> Result<Graph> {
    if n < 2 || !(exponent > 1.0) || !(avg_degree > 0.0) {
        return Err(invalid("need n >= 2, exponent > 1 and a positive average degree"));
    }
    let m = (avg_degree * n as f64).round() as usize;
    if m > n * (n - 1) / 2 {
        return Err(invalid("average degree too large for n"));
    }
    let power = -1.0 / (exponent - 1.0);
    let weights: Vec<f64> = (0..n).map(|i| ((i + 1) as f64).powf(power)).collect();
    let alias = WeightedAliasIndex::new(weights).map_err(|e| invalid(e.to_string()))?;
    let mut rng = rng::stream(master_seed, domain::SYNTH_GRAPH, 0);
    // Out-hubs and in-hubs are different nodes.
    let mut perm: Vec<NodeId> = (0..n as NodeId).collect();
    rand::seq::SliceRandom::shuffle(perm.as_mut_slice(), &mut rng);
    let mut seen: HashSet<u64> = HashSet::with_capacity(m * 2);
    let mut edges = Vec::with_capacity(m);
    let mut attempts = 0usize;
    while edges.len() < m && attempts < 50 * m {
        attempts += 1;
        let u = alias.sample(&mut rng) as NodeId;
        let v = perm[alias.sample(&mut rng)];
        if u == v || !seen.insert((u as u64) << 32 | v as u64) {
            continue;
        }
        edges.push((u, v, None));
    }
    let mut g = Graph::from_edges(n, &edges)?;
    g.assign_weighted_cascade();
    Ok(g)
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchConfig {
    pub nodes: usize,
    pub exponent: f64,
    pub avg_degree: f64,
    pub problem: Problem,
    pub gaps: GapSet,
    /// Number of fixed seeds of the other item, taken by out-degree.
    pub fixed: usize,
    pub tim: TimParams,
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchReport {
    pub nodes: usize,
    pub edges: usize,
    pub theta: u64,
    pub lb: f64,
    pub ept_f: f64,
    pub ept_b1: f64,
    pub ept_b2: f64,
    pub ept_bs: f64,
    pub ept_bo: f64,
    /// Seed selection time, excluding graph generation.
    pub wall_time_ms: f64,
    pub generate_ms: f64,
    pub rr_members: usize,
    pub graph_bytes: usize,
}

/// Generates a graph and times one seed selection on it. GAPs outside the submodular
/// regime are replaced by their upper bound, which is what the sandwich selector optimizes.
pub fn run_bench(cfg: &BenchConfig, master_seed: u64) -> Result<BenchReport> {
    let t0 = Instant::now();
    let g = power_law_graph(cfg.nodes, cfg.exponent, cfg.avg_degree, master_seed)?;
    let generate_ms = t0.elapsed().as_secs_f64() * 1e3;
    let fixed = high_degree(&g, cfg.fixed, &[]);
    let submodular = match cfg.problem {
        Problem::SelfInfMax => cfg.gaps.is_self_submodular(),
        Problem::CompInfMax => cfg.gaps.is_cross_submodular(),
    };
    let q = if submodular { cfg.gaps } else { bound_gaps(&cfg.gaps, cfg.problem, BoundSide::Upper)?.expect("upper bound") };
    let r = general_tim(&g, &q, cfg.problem, &fixed, &cfg.tim, master_seed)?;
    Ok(BenchReport {
        nodes: g.n(),
        edges: g.m(),
        theta: r.stats.theta,
        lb: r.stats.lb,
        ept_f: r.stats.ept_f,
        ept_b1: r.stats.ept_b1,
        ept_b2: r.stats.ept_b2,
        ept_bs: r.stats.ept_bs,
        ept_bo: r.stats.ept_bo,
        wall_time_ms: r.stats.wall_time_ms,
        generate_ms,
        rr_members: r.rr_members,
        graph_bytes: g.heap_bytes(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_is_close_to_target() {
        let g = power_law_graph(5000, 2.16, 5.0, 1).unwrap();
        assert_eq!(g.m(), 25_000);
        let max_in = (0..g.n() as NodeId).map(|v| g.in_degree(v)).max().unwrap();
        assert!(max_in > 100, "expected heavy-tailed in-degrees, max {max_in}");
    }
}
