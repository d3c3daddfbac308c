//! Monte-Carlo estimators built on [`simulate`](super::simulate::simulate).

use rayon::prelude::*;
use serde::Serialize;

use super::gaps::{GapSet, Item};
use super::simulate::{check_seeds, SimOptions, Simulator};
use crate::error::{invalid, Result};
use crate::graph::{Graph, NodeId};
use crate::rng::{self, domain};

#[derive(Clone, Copy, Debug, Serialize, PartialEq)]
pub struct SpreadEstimate {
    pub sigma_a: f64,
    pub sigma_b: f64,
    pub stderr_a: f64,
    pub stderr_b: f64,
    pub iterations: usize,
}

#[derive(Clone, Copy, Debug, Serialize, PartialEq)]
pub struct BoostEstimate {
    pub boost: f64,
    pub stderr: f64,
    pub with_b: SpreadEstimate,
    pub without_b: SpreadEstimate,
}

#[derive(Clone, Copy, Default)]
struct Moments {
    sum: [u128; 2],
    sq: [u128; 2],
}

fn chunks(iterations: usize) -> Vec<std::ops::Range<usize>> {
    let per = (iterations / (rayon::current_num_threads() * 8)).max(16);
    (0..iterations).step_by(per).map(|lo| lo..(lo + per).min(iterations)).collect()
}

fn run_moments(g: &Graph, q: &GapSet, sa: &[NodeId], sb: &[NodeId], iterations: usize, seed: u64, dom: u64) -> Moments {
    chunks(iterations)
        .into_par_iter()
        .map(|range| {
            let mut sim = Simulator::new(g, *q, SimOptions::default());
            let mut m = Moments::default();
            for i in range {
                sim.run(sa, sb, &mut rng::stream(seed, dom, i as u64), &mut ());
                for k in 0..2 {
                    let c = sim.count[k] as u128;
                    m.sum[k] += c;
                    m.sq[k] += c * c;
                }
            }
            m
        })
        .reduce(Moments::default, |a, b| Moments {
            sum: [a.sum[0] + b.sum[0], a.sum[1] + b.sum[1]],
            sq: [a.sq[0] + b.sq[0], a.sq[1] + b.sq[1]],
        })
}

fn validate(g: &Graph, q: &GapSet, sa: &[NodeId], sb: &[NodeId], iterations: usize) -> Result<()> {
    g.require_weighted()?;
    q.validate()?;
    check_seeds(g, sa, "A")?;
    check_seeds(g, sb, "B")?;
    if iterations == 0 {
        return Err(invalid("iterations must be positive"));
    }
    Ok(())
}

fn summarize(m: Moments, iterations: usize) -> SpreadEstimate {
    let r = iterations as f64;
    let stat = |k: usize| {
        let mean = m.sum[k] as f64 / r;
        let var = if iterations > 1 { ((m.sq[k] as f64 - r * mean * mean) / (r - 1.0)).max(0.0) } else { 0.0 };
        (mean, (var / r).sqrt())
    };
    let (sigma_a, stderr_a) = stat(0);
    let (sigma_b, stderr_b) = stat(1);
    SpreadEstimate { sigma_a, sigma_b, stderr_a, stderr_b, iterations }
}

/// Mean number of A- and B-adopters over `iterations` independent diffusions. The result
/// depends only on `master_seed`, not on the number of worker threads.
pub fn estimate_spread(
    g: &Graph,
    q: &GapSet,
    seeds_a: &[NodeId],
    seeds_b: &[NodeId],
    iterations: usize,
    master_seed: u64,
) -> Result<SpreadEstimate> {
    validate(g, q, seeds_a, seeds_b, iterations)?;
    Ok(summarize(run_moments(g, q, seeds_a, seeds_b, iterations, master_seed, domain::SIMULATE), iterations))
}

/// Increase in A's spread caused by the B-seeds. The two spreads come from independent
/// streams; with no B-seeds both sides are the same estimator and the boost is exactly 0.
pub fn estimate_boost(
    g: &Graph,
    q: &GapSet,
    seeds_a: &[NodeId],
    seeds_b: &[NodeId],
    iterations: usize,
    master_seed: u64,
) -> Result<BoostEstimate> {
    validate(g, q, seeds_a, seeds_b, iterations)?;
    let without = summarize(run_moments(g, q, seeds_a, &[], iterations, master_seed, domain::BOOST_WITHOUT_B), iterations);
    if seeds_b.is_empty() {
        return Ok(BoostEstimate { boost: 0.0, stderr: 0.0, with_b: without, without_b: without });
    }
    let with = summarize(run_moments(g, q, seeds_a, seeds_b, iterations, master_seed, domain::SIMULATE), iterations);
    Ok(BoostEstimate {
        boost: with.sigma_a - without.sigma_a,
        stderr: (with.stderr_a.powi(2) + without.stderr_a.powi(2)).sqrt(),
        with_b: with,
        without_b: without,
    })
}

/// Per-node frequency of adopting each item, indexed `[item][node]`.
pub fn estimate_adoption_frequency(
    g: &Graph,
    q: &GapSet,
    seeds_a: &[NodeId],
    seeds_b: &[NodeId],
    iterations: usize,
    master_seed: u64,
) -> Result<[Vec<f64>; 2]> {
    validate(g, q, seeds_a, seeds_b, iterations)?;
    let n = g.n();
    let counts = chunks(iterations)
        .into_par_iter()
        .map(|range| {
            let mut sim = Simulator::new(g, *q, SimOptions::default());
            let mut c = vec![[0u64; 2]; n];
            for i in range {
                sim.run(seeds_a, seeds_b, &mut rng::stream(master_seed, domain::SIMULATE, i as u64), &mut ());
                for (v, cv) in c.iter_mut().enumerate() {
                    for item in [Item::A, Item::B] {
                        if sim.adopted(v as NodeId, item) {
                            cv[item.index()] += 1;
                        }
                    }
                }
            }
            c
        })
        .reduce(
            || vec![[0u64; 2]; n],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| {
                    x[0] += y[0];
                    x[1] += y[1];
                });
                a
            },
        );
    let r = iterations as f64;
    Ok([counts.iter().map(|c| c[0] as f64 / r).collect(), counts.iter().map(|c| c[1] as f64 / r).collect()])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boost_without_b_seeds_is_zero() {
        let g = Graph::from_edges(3, &[(0, 1, Some(0.5)), (1, 2, Some(0.5))]).unwrap();
        let q = GapSet::new(0.3, 0.9, 0.5, 0.5).unwrap();
        let b = estimate_boost(&g, &q, &[0], &[], 500, 3).unwrap();
        assert_eq!(b.boost, 0.0);
    }

    #[test]
    fn deterministic_given_seed() {
        let g = Graph::from_edges(3, &[(0, 1, Some(0.5)), (1, 2, Some(0.5)), (2, 0, Some(0.5))]).unwrap();
        let q = GapSet::new(0.3, 0.9, 0.5, 0.7).unwrap();
        let a = estimate_spread(&g, &q, &[0], &[2], 1000, 11).unwrap();
        let b = estimate_spread(&g, &q, &[0], &[2], 1000, 11).unwrap();
        assert_eq!(a, b);
        assert!(a.sigma_a >= 1.0 && a.sigma_b >= 1.0);
    }
}
