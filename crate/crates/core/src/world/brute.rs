use rayon::prelude::*;

use super::exact::{exact_spread, ExactOptions};
use crate::error::{invalid, Result};
use crate::graph::{Graph, NodeId};
use crate::model::{GapSet, Problem};

/// Exact objective value of `seeds` for `problem` with the other side fixed.
pub fn exact_objective(
    g: &Graph,
    q: &GapSet,
    problem: Problem,
    fixed: &[NodeId],
    seeds: &[NodeId],
    opts: &ExactOptions,
) -> Result<f64> {
    match problem {
        Problem::SelfInfMax => Ok(exact_spread(g, q, seeds, fixed, opts)?.sigma_a),
        Problem::CompInfMax => {
            let with = exact_spread(g, q, fixed, seeds, opts)?.sigma_a;
            let without = exact_spread(g, q, fixed, &[], opts)?.sigma_a;
            Ok(with - without)
        }
    }
}

/// Lexicographic k-subsets of `0..n`.
pub(crate) fn subsets(n: usize, k: usize) -> Vec<Vec<NodeId>> {
    let mut out = Vec::new();
    let mut cur: Vec<NodeId> = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<NodeId>, out: &mut Vec<Vec<NodeId>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            if n - v < k - cur.len() {
                break;
            }
            cur.push(v as NodeId);
            rec(v + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// The best k-subset by exhaustive search over exact objective values. Ties go to the
/// lexicographically smallest subset.
pub fn brute_force_optimal(
    g: &Graph,
    q: &GapSet,
    problem: Problem,
    fixed: &[NodeId],
    k: usize,
    opts: &ExactOptions,
) -> Result<(Vec<NodeId>, f64)> {
    if k > g.n() {
        return Err(invalid(format!("k = {k} exceeds n = {}", g.n())));
    }
    let candidates = subsets(g.n(), k);
    let values: Vec<f64> =
        candidates.par_iter().map(|s| exact_objective(g, q, problem, fixed, s, opts)).collect::<Result<_>>()?;
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best] + 1e-12 {
            best = i;
        }
    }
    Ok((candidates[best].clone(), values[best]))
}
