//! Reference seed selectors.

use rand::seq::index::sample;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::graph::{Graph, NodeId};
use crate::model::{estimate_spread, GapSet, Problem};
use crate::rng::{self, domain};
use crate::tim::{general_tim, TimParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Baseline {
    HighDegree,
    PageRank,
    Random,
    GreedyMc,
    VanillaIc,
    Copying,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BaselineParams {
    pub damping: f64,
    pub pagerank_iterations: usize,
    pub mc_iterations: usize,
    pub lazy: bool,
    pub exclude_fixed: bool,
    pub tim: TimParams,
}

impl Default for BaselineParams {
    fn default() -> Self {
        BaselineParams {
            damping: 0.85,
            pagerank_iterations: 100,
            mc_iterations: 10_000,
            lazy: true,
            exclude_fixed: false,
            tim: TimParams::default(),
        }
    }
}

fn top_k_by(scores: &[f64], k: usize, excluded: &[bool]) -> Vec<NodeId> {
    let mut order: Vec<NodeId> = (0..scores.len() as NodeId).filter(|&v| !excluded.get(v as usize).copied().unwrap_or(false)).collect();
    order.sort_by(|&a, &b| scores[b as usize].total_cmp(&scores[a as usize]).then(a.cmp(&b)));
    order.truncate(k);
    order
}

/// The `k` nodes of largest out-degree, ties to the smallest id.
pub fn high_degree(g: &Graph, k: usize, excluded: &[bool]) -> Vec<NodeId> {
    let deg: Vec<f64> = (0..g.n() as NodeId).map(|v| g.out_degree(v) as f64).collect();
    top_k_by(&deg, k, excluded)
}

/// PageRank with rank flowing from influenced to influencer: a node scores high when it
/// reaches nodes that score high. Dangling mass is spread uniformly.
pub fn page_rank_scores(g: &Graph, damping: f64, iterations: usize) -> Vec<f64> {
    let n = g.n();
    if n == 0 {
        return Vec::new();
    }
    let nf = n as f64;
    let mut r = vec![1.0 / nf; n];
    let mut next = vec![0.0; n];
    for _ in 0..iterations {
        let dangling: f64 = (0..n as NodeId).filter(|&v| g.in_degree(v) == 0).map(|v| r[v as usize]).sum();
        let base = (1.0 - damping) / nf + damping * dangling / nf;
        for u in 0..n as NodeId {
            let mut acc = 0.0;
            for e in g.out_edges(u) {
                let v = g.target(e);
                acc += r[v as usize] / g.in_degree(v) as f64;
            }
            next[u as usize] = base + damping * acc;
        }
        std::mem::swap(&mut r, &mut next);
    }
    r
}

pub fn page_rank(g: &Graph, k: usize, damping: f64, iterations: usize, excluded: &[bool]) -> Vec<NodeId> {
    top_k_by(&page_rank_scores(g, damping, iterations), k, excluded)
}

/// `k` distinct nodes drawn uniformly, in increasing id order.
pub fn random_seeds(g: &Graph, k: usize, master_seed: u64, excluded: &[bool]) -> Vec<NodeId> {
    let pool: Vec<NodeId> = (0..g.n() as NodeId).filter(|&v| !excluded.get(v as usize).copied().unwrap_or(false)).collect();
    let k = k.min(pool.len());
    let mut rng = rng::stream(master_seed, domain::BASELINE, 0);
    let mut out: Vec<NodeId> = sample(&mut rng, pool.len(), k).into_iter().map(|i| pool[i]).collect();
    out.sort_unstable();
    out
}

/// Greedy on Monte-Carlo estimates of the objective. Every evaluation reuses the same
/// master seed, so the estimated objective is a fixed function of the seed set. The
/// lazy variant re-evaluates only the head of a priority queue of stale gains; it makes
/// the same picks as the plain variant whenever the estimates are submodular.
#[allow(clippy::too_many_arguments)]
pub fn greedy_mc(
    g: &Graph,
    q: &GapSet,
    problem: Problem,
    fixed: &[NodeId],
    k: usize,
    mc_iterations: usize,
    master_seed: u64,
    lazy: bool,
    exclude_fixed: bool,
) -> Result<Vec<NodeId>> {
    if k > g.n() {
        return Err(invalid(format!("k = {k} exceeds n = {}", g.n())));
    }
    let value = |s: &[NodeId]| -> Result<f64> {
        Ok(match problem {
            Problem::SelfInfMax => estimate_spread(g, q, s, fixed, mc_iterations, master_seed)?.sigma_a,
            Problem::CompInfMax => estimate_spread(g, q, fixed, s, mc_iterations, master_seed)?.sigma_a,
        })
    };
    let mut allowed = vec![true; g.n()];
    if exclude_fixed {
        for &f in fixed {
            allowed[f as usize] = false;
        }
    }
    let mut chosen: Vec<NodeId> = Vec::with_capacity(k);
    let mut current = value(&chosen)?;
    let gain_of = |chosen: &[NodeId], v: NodeId, current: f64| -> Result<f64> {
        let mut s = chosen.to_vec();
        s.push(v);
        Ok(value(&s)? - current)
    };

    if lazy {
        let cands: Vec<NodeId> = (0..g.n() as NodeId).filter(|&v| allowed[v as usize]).collect();
        let gains: Vec<f64> = cands.par_iter().map(|&v| gain_of(&chosen, v, current)).collect::<Result<_>>()?;
        // (gain, node, round in which the gain was computed)
        let mut heap: Vec<(f64, NodeId, usize)> = cands.iter().zip(gains).map(|(&v, g)| (g, v, 0)).collect();
        while chosen.len() < k && !heap.is_empty() {
            let round = chosen.len();
            loop {
                let best = (0..heap.len())
                    .max_by(|&a, &b| heap[a].0.total_cmp(&heap[b].0).then(heap[b].1.cmp(&heap[a].1)))
                    .expect("non-empty");
                if heap[best].2 == round {
                    let (_, v, _) = heap.swap_remove(best);
                    chosen.push(v);
                    current = value(&chosen)?;
                    break;
                }
                let v = heap[best].1;
                heap[best] = (gain_of(&chosen, v, current)?, v, round);
            }
        }
    } else {
        while chosen.len() < k {
            let cands: Vec<NodeId> =
                (0..g.n() as NodeId).filter(|&v| allowed[v as usize] && !chosen.contains(&v)).collect();
            if cands.is_empty() {
                break;
            }
            let gains: Vec<f64> = cands.par_iter().map(|&v| gain_of(&chosen, v, current)).collect::<Result<_>>()?;
            let mut best = 0;
            for i in 1..cands.len() {
                if gains[i] > gains[best] {
                    best = i;
                }
            }
            chosen.push(cands[best]);
            current = value(&chosen)?;
        }
    }
    Ok(chosen)
}

/// Classic independent-cascade selection: every informed node adopts and the other item
/// is ignored.
pub fn vanilla_ic(g: &Graph, k: usize, params: &TimParams, master_seed: u64) -> Result<Vec<NodeId>> {
    let ic = GapSet { q_a0: 1.0, q_ab: 1.0, q_b0: 0.0, q_ba: 0.0 };
    let mut p = params.clone();
    p.k = k;
    p.exclude_fixed = false;
    p.variant = crate::rrset::RrVariant::SimPlus;
    Ok(general_tim(g, &ic, Problem::SelfInfMax, &[], &p, master_seed)?.seeds)
}

/// The fixed seeds in their given order, padded with the highest out-degree non-members.
pub fn copying(g: &Graph, fixed: &[NodeId], k: usize) -> Vec<NodeId> {
    let mut out: Vec<NodeId> = Vec::with_capacity(k);
    for &f in fixed {
        if out.len() == k {
            break;
        }
        if !out.contains(&f) {
            out.push(f);
        }
    }
    if out.len() < k {
        let mut taken = vec![false; g.n()];
        out.iter().for_each(|&v| taken[v as usize] = true);
        let pad = high_degree(g, k - out.len(), &taken);
        out.extend(pad);
    }
    out
}

#[allow(clippy::too_many_arguments)]
pub fn select_baseline(
    method: Baseline,
    params: &BaselineParams,
    g: &Graph,
    q: &GapSet,
    problem: Problem,
    fixed: &[NodeId],
    k: usize,
    master_seed: u64,
) -> Result<Vec<NodeId>> {
    if k > g.n() {
        return Err(invalid(format!("k = {k} exceeds n = {}", g.n())));
    }
    crate::model::simulate::check_seeds(g, fixed, "fixed")?;
    let mut excluded = vec![false; g.n()];
    if params.exclude_fixed {
        fixed.iter().for_each(|&f| excluded[f as usize] = true);
    }
    Ok(match method {
        Baseline::HighDegree => high_degree(g, k, &excluded),
        Baseline::PageRank => page_rank(g, k, params.damping, params.pagerank_iterations, &excluded),
        Baseline::Random => random_seeds(g, k, master_seed, &excluded),
        Baseline::GreedyMc => {
            greedy_mc(g, q, problem, fixed, k, params.mc_iterations, master_seed, params.lazy, params.exclude_fixed)?
        }
        Baseline::VanillaIc => {
            g.require_weighted()?;
            vanilla_ic(g, k, &params.tim, master_seed)?
        }
        Baseline::Copying => {
            if fixed.is_empty() && k > 0 {
                return Err(invalid("copying needs fixed seeds to copy"));
            }
            copying(g, fixed, k)
        }
    })
}
