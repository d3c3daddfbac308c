//! Two-phase RR-set seed selection: estimate a lower bound on the optimum, draw enough
//! RR-sets for the requested accuracy, then pick seeds by greedy maximum coverage.

use std::collections::BinaryHeap;
use std::cmp::Reverse;
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::graph::{Graph, NodeId};
use crate::model::{GapSet, Problem};
use crate::rng::{self, domain};
use crate::rrset::{LazyWorld, RrCounters, RrGenerator, RrVariant};

/// `ln C(n, k)` as a sum of logarithms.
pub fn ln_binomial(n: u64, k: u64) -> f64 {
    let k = k.min(n - k.min(n));
    (1..=k).map(|i| ((n - k + i) as f64).ln() - (i as f64).ln()).sum()
}

/// Number of RR-sets that makes the greedy solution a `(1 - 1/e - epsilon)`-approximation
/// with probability at least `1 - n^-ell`, given a lower bound `lb` on the optimum.
pub fn required_theta(n: u64, k: u64, epsilon: f64, ell: f64, lb: f64) -> u64 {
    let nf = n as f64;
    let lambda = (8.0 + 2.0 * epsilon) * nf * (ell * nf.ln() + ln_binomial(n, k) + 2f64.ln()) / (epsilon * epsilon);
    (lambda / lb).ceil().max(1.0) as u64
}

/// RR-sets stored back to back.
#[derive(Clone, Debug, Default)]
pub struct RrCollection {
    pub offsets: Vec<usize>,
    pub members: Vec<NodeId>,
}

impl RrCollection {
    pub fn len(&self) -> usize {
        self.offsets.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn set(&self, i: usize) -> &[NodeId] {
        &self.members[self.offsets[i]..self.offsets[i + 1]]
    }

    pub fn from_sets<I: IntoIterator<Item = Vec<NodeId>>>(sets: I) -> Self {
        let mut c = RrCollection { offsets: vec![0], members: Vec::new() };
        for s in sets {
            c.members.extend(s);
            c.offsets.push(c.members.len());
        }
        c
    }

    pub fn heap_bytes(&self) -> usize {
        self.offsets.capacity() * 8 + self.members.capacity() * 4
    }
}

fn chunk_ranges(lo: u64, hi: u64) -> Vec<(u64, u64)> {
    let per = ((hi - lo) / (rayon::current_num_threads() as u64 * 4)).max(1024);
    (lo..hi).step_by(per as usize).map(|a| (a, (a + per).min(hi))).collect()
}

/// Draws RR-sets with indices `lo..hi` of stream `dom`. Set `i` is a function of
/// `(master_seed, dom, i)` alone.
pub fn generate_rr_sets(
    g: &Graph,
    q: &GapSet,
    variant: RrVariant,
    fixed: &[NodeId],
    lo: u64,
    hi: u64,
    master_seed: u64,
    dom: u64,
) -> Result<(RrCollection, RrCounters)> {
    RrGenerator::new(g, q, variant, fixed)?;
    if g.n() == 0 {
        return Err(invalid("empty graph"));
    }
    let parts: Vec<(RrCollection, RrCounters)> = chunk_ranges(lo, hi)
        .into_par_iter()
        .map(|(a, b)| {
            let mut gen = RrGenerator::new(g, q, variant, fixed).expect("validated");
            let mut world = LazyWorld::new(g, rng::stream(master_seed, dom, a));
            let mut c = RrCollection { offsets: vec![0], members: Vec::new() };
            let mut counters = RrCounters::default();
            let mut buf = Vec::new();
            for i in a..b {
                let mut r = rng::stream(master_seed, dom, i);
                let root = r.gen_range(0..g.n() as NodeId);
                world.reset(r);
                counters.add(&gen.generate_into(root, &mut world, &mut buf));
                c.members.extend_from_slice(&buf);
                c.offsets.push(c.members.len());
            }
            (c, counters)
        })
        .collect();
    let mut all = RrCollection { offsets: vec![0], members: Vec::new() };
    let mut counters = RrCounters::default();
    for (c, k) in parts {
        let base = all.members.len();
        all.members.extend_from_slice(&c.members);
        all.offsets.extend(c.offsets[1..].iter().map(|o| o + base));
        counters.add(&k);
    }
    Ok((all, counters))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Coverage {
    pub seeds: Vec<NodeId>,
    /// Number of RR-sets hit by the seeds.
    pub covered: usize,
}

/// Greedy maximum coverage. Each pick maximizes newly covered sets, ties to the smallest
/// id; once nothing more can be covered the smallest remaining ids fill up to `k`.
pub fn greedy_max_coverage(sets: &RrCollection, n: usize, k: usize, excluded: &[bool]) -> Coverage {
    let mut index_off = vec![0usize; n + 1];
    for &v in &sets.members {
        index_off[v as usize + 1] += 1;
    }
    for i in 0..n {
        index_off[i + 1] += index_off[i];
    }
    let mut fill = index_off.clone();
    let mut index = vec![0u32; sets.members.len()];
    for s in 0..sets.len() {
        for &v in sets.set(s) {
            index[fill[v as usize]] = s as u32;
            fill[v as usize] += 1;
        }
    }
    let allowed = |v: usize| !excluded.get(v).copied().unwrap_or(false);
    let mut count: Vec<usize> = (0..n).map(|v| index_off[v + 1] - index_off[v]).collect();
    let mut heap: BinaryHeap<(usize, Reverse<NodeId>)> =
        (0..n).filter(|&v| allowed(v)).map(|v| (count[v], Reverse(v as NodeId))).collect();
    let mut covered_set = vec![false; sets.len()];
    let mut chosen = vec![false; n];
    let mut seeds = Vec::with_capacity(k);
    let mut covered = 0;
    while seeds.len() < k {
        let Some((c, Reverse(v))) = heap.pop() else { break };
        if c != count[v as usize] {
            heap.push((count[v as usize], Reverse(v)));
            continue;
        }
        seeds.push(v);
        chosen[v as usize] = true;
        for &s in &index[index_off[v as usize]..index_off[v as usize + 1]] {
            if !covered_set[s as usize] {
                covered_set[s as usize] = true;
                covered += 1;
                for &u in sets.set(s as usize) {
                    count[u as usize] -= 1;
                }
            }
        }
    }
    debug_assert!(seeds.iter().all(|&v| chosen[v as usize]));
    Coverage { seeds, covered }
}

fn kappa(sets: &RrCollection, g: &Graph, k: usize) -> f64 {
    let m = g.m().max(1) as f64;
    (0..sets.len())
        .map(|i| {
            let width: usize = sets.set(i).iter().map(|&v| g.in_degree(v)).sum();
            1.0 - (1.0 - width as f64 / m).powi(k as i32)
        })
        .sum()
}

/// Lower bound on the optimum from RR-set widths. Doubles the sample until the mean
/// width statistic exceeds the current guess. Returns `None` if no round succeeds, along
/// with the last round's mean.
pub fn estimate_lower_bound(
    g: &Graph,
    q: &GapSet,
    variant: RrVariant,
    fixed: &[NodeId],
    k: usize,
    ell: f64,
    master_seed: u64,
) -> Result<(Option<f64>, f64)> {
    let n = g.n() as f64;
    let log2n = n.log2().max(1.0);
    let rounds = (log2n.ceil() as usize).saturating_sub(1).max(1);
    let mut next = 0u64;
    let mut last_mean = 0.0;
    for i in 1..=rounds {
        let c = ((6.0 * ell * n.ln() + 6.0 * log2n.ln()) * 2f64.powi(i as i32)).ceil().max(1.0) as u64;
        let (sets, _) = generate_rr_sets(g, q, variant, fixed, next, next + c, master_seed, domain::LOWER_BOUND)?;
        next += c;
        last_mean = kappa(&sets, g, k) / c as f64;
        if last_mean > 1.0 / 2f64.powi(i as i32) {
            return Ok((Some(n * last_mean / 2.0), last_mean));
        }
    }
    Ok((None, last_mean))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TimParams {
    pub k: usize,
    pub epsilon: f64,
    pub ell: f64,
    /// Generator for A-seed selection; the boost problem always uses the boost generator.
    pub variant: RrVariant,
    /// Keep the fixed seeds of the other item out of the candidates.
    pub exclude_fixed: bool,
    /// Use this many RR-sets instead of the bound-driven count.
    pub theta: Option<u64>,
    /// Use this lower bound on the optimum instead of estimating it.
    pub lb: Option<f64>,
    /// Upper limit on the bound-driven count.
    pub max_theta: u64,
}

impl Default for TimParams {
    fn default() -> Self {
        TimParams {
            k: 50,
            epsilon: 0.5,
            ell: 1.0,
            variant: RrVariant::SimPlus,
            exclude_fixed: false,
            theta: None,
            lb: None,
            max_theta: 50_000_000,
        }
    }
}

/// Work summary of one selection run. `ept_*` are mean edges examined per RR-set.
#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
pub struct RrStats {
    pub theta: u64,
    pub lb: f64,
    pub ept_f: f64,
    pub ept_b1: f64,
    pub ept_b2: f64,
    pub ept_bs: f64,
    pub ept_bo: f64,
    pub wall_time_ms: f64,
}

#[derive(Clone, Debug)]
pub struct TimResult {
    pub seeds: Vec<NodeId>,
    pub stats: RrStats,
    /// `n` times the fraction of RR-sets covered by the seeds.
    pub estimate: f64,
    /// Whether the bound-driven RR-set count hit `max_theta`.
    pub theta_capped: bool,
    /// Total stored RR-set members.
    pub rr_members: usize,
}

/// The RR-set generator used for `problem`.
pub fn variant_for(problem: Problem, params: &TimParams) -> RrVariant {
    match problem {
        Problem::SelfInfMax if params.variant == RrVariant::Cim => RrVariant::SimPlus,
        Problem::SelfInfMax => params.variant,
        Problem::CompInfMax => RrVariant::Cim,
    }
}

/// Selects `k` seeds for `problem` with `fixed` seeds of the other item. Needs GAPs under
/// which the objective is submodular; otherwise use the sandwich selector.
pub fn general_tim(
    g: &Graph,
    q: &GapSet,
    problem: Problem,
    fixed: &[NodeId],
    params: &TimParams,
    master_seed: u64,
) -> Result<TimResult> {
    let start = Instant::now();
    if !(params.epsilon > 0.0) || !(params.ell > 0.0) {
        return Err(invalid("epsilon and ell must be positive"));
    }
    if g.n() == 0 {
        return Err(invalid("empty graph"));
    }
    let variant = variant_for(problem, params);
    RrGenerator::new(g, q, variant, fixed)?;
    let n = g.n();
    let k = params.k.min(n);
    if k == 0 {
        let stats = RrStats {
            theta: 0,
            lb: 0.0,
            ept_f: 0.0,
            ept_b1: 0.0,
            ept_b2: 0.0,
            ept_bs: 0.0,
            ept_bo: 0.0,
            wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
        };
        return Ok(TimResult { seeds: Vec::new(), stats, estimate: 0.0, theta_capped: false, rr_members: 0 });
    }

    let (lb, theta, capped) = match (params.theta, params.lb) {
        (Some(t), _) => (f64::NAN, t.max(1), false),
        (None, Some(lb)) => {
            if !(lb > 0.0) {
                return Err(invalid("lower bound must be positive"));
            }
            let t = required_theta(n as u64, k as u64, params.epsilon, params.ell, lb);
            (lb, t.min(params.max_theta), t > params.max_theta)
        }
        (None, None) => {
            let (lb, last_mean) = estimate_lower_bound(g, q, variant, fixed, k, params.ell, master_seed)?;
            let lb = match (problem, lb) {
                (Problem::SelfInfMax, lb) => lb.unwrap_or(k as f64).max(k as f64),
                (Problem::CompInfMax, Some(lb)) => lb,
                (Problem::CompInfMax, None) if last_mean > 0.0 => n as f64 * last_mean / 2.0,
                (Problem::CompInfMax, None) => 1.0,
            };
            let t = required_theta(n as u64, k as u64, params.epsilon, params.ell, lb);
            (lb, t.min(params.max_theta), t > params.max_theta)
        }
    };

    let (sets, counters) = generate_rr_sets(g, q, variant, fixed, 0, theta, master_seed, domain::RR_SETS)?;
    let mut excluded = vec![false; n];
    if params.exclude_fixed {
        for &s in fixed {
            excluded[s as usize] = true;
        }
    }
    let cov = greedy_max_coverage(&sets, n, k, &excluded);
    let t = theta as f64;
    Ok(TimResult {
        estimate: n as f64 * cov.covered as f64 / t,
        seeds: cov.seeds,
        stats: RrStats {
            theta,
            lb,
            ept_f: counters.ept_f as f64 / t,
            ept_b1: counters.ept_b1 as f64 / t,
            ept_b2: counters.ept_b2 as f64 / t,
            ept_bs: counters.ept_bs as f64 / t,
            ept_bo: counters.ept_bo as f64 / t,
            wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
        },
        theta_capped: capped,
        rr_members: sets.members.len(),
    })
}
