//! Seed selection for GAPs where the objective is not submodular: optimize submodular
//! upper and lower bounds obtained by moving one GAP, then keep whichever candidate does
//! best on the real objective.

use serde::Serialize;

use crate::baselines::greedy_mc;
use crate::error::Result;
use crate::graph::{Graph, NodeId};
use crate::model::{estimate_boost, estimate_spread, GapSet, Problem};
use crate::tim::{general_tim, RrStats, TimParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundSide {
    Upper,
    Lower,
}

/// GAPs bounding the objective from above or below by a submodular function. The boost
/// problem has no lower bound of this kind and yields `None`.
pub fn bound_gaps(q: &GapSet, problem: Problem, side: BoundSide) -> Result<Option<GapSet>> {
    q.validate()?;
    if !q.is_mutual_complement() {
        return Err(q.regime_error("bounds exist only for mutually complementary GAPs"));
    }
    let mut b = *q;
    Ok(match (problem, side) {
        (Problem::SelfInfMax, BoundSide::Upper) => {
            b.q_b0 = q.q_ba;
            Some(b)
        }
        (Problem::SelfInfMax, BoundSide::Lower) => {
            b.q_ba = q.q_b0;
            Some(b)
        }
        (Problem::CompInfMax, BoundSide::Upper) => {
            b.q_ba = 1.0;
            Some(b)
        }
        (Problem::CompInfMax, BoundSide::Lower) => None,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SandwichConfig {
    pub tim: TimParams,
    /// Simulations per objective evaluation of each candidate.
    pub eval_iterations: usize,
    /// Simulations per marginal-gain evaluation of the greedy candidate.
    pub greedy_iterations: usize,
    /// Include the Monte-Carlo greedy candidate on the real objective.
    pub include_greedy: bool,
    /// Lazy evaluation for the greedy candidate.
    pub lazy_greedy: bool,
}

impl Default for SandwichConfig {
    fn default() -> Self {
        SandwichConfig {
            tim: TimParams::default(),
            eval_iterations: 10_000,
            greedy_iterations: 1_000,
            include_greedy: true,
            lazy_greedy: false,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Candidate {
    pub label: &'static str,
    pub seeds: Vec<NodeId>,
    pub objective: f64,
    pub stderr: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SandwichReport {
    pub seeds: Vec<NodeId>,
    pub chosen: &'static str,
    pub candidates: Vec<Candidate>,
    pub upper_gaps: GapSet,
    pub lower_gaps: Option<GapSet>,
    /// Objective of the upper-bound solution divided by its upper-bound value.
    pub ratio_upper: f64,
    /// Largest relative gap between the greedy candidate and a bound candidate.
    pub sa_error: Option<f64>,
    pub upper_stats: RrStats,
}

/// Objective estimate under `q` with a fixed evaluation stream.
pub fn evaluate_objective(
    g: &Graph,
    q: &GapSet,
    problem: Problem,
    fixed: &[NodeId],
    seeds: &[NodeId],
    iterations: usize,
    master_seed: u64,
) -> Result<(f64, f64)> {
    match problem {
        Problem::SelfInfMax => {
            let e = estimate_spread(g, q, seeds, fixed, iterations, master_seed)?;
            Ok((e.sigma_a, e.stderr_a))
        }
        Problem::CompInfMax => {
            let e = estimate_boost(g, q, fixed, seeds, iterations, master_seed)?;
            Ok((e.boost, e.stderr))
        }
    }
}

pub fn sandwich_select(
    g: &Graph,
    q: &GapSet,
    problem: Problem,
    fixed: &[NodeId],
    cfg: &SandwichConfig,
    master_seed: u64,
) -> Result<SandwichReport> {
    let upper = bound_gaps(q, problem, BoundSide::Upper)?.expect("upper bound always exists");
    let lower = bound_gaps(q, problem, BoundSide::Lower)?;
    let up = general_tim(g, &upper, problem, fixed, &cfg.tim, master_seed)?;
    let mut found: Vec<(&'static str, Vec<NodeId>)> = vec![("upper", up.seeds.clone())];
    if let Some(lower) = lower {
        found.push(("lower", general_tim(g, &lower, problem, fixed, &cfg.tim, master_seed)?.seeds));
    }
    if cfg.include_greedy {
        let k = cfg.tim.k.min(g.n());
        let s = greedy_mc(g, q, problem, fixed, k, cfg.greedy_iterations, master_seed, cfg.lazy_greedy, cfg.tim.exclude_fixed)?;
        found.push(("greedy", s));
    }

    let mut candidates = Vec::new();
    for (label, seeds) in found {
        let (objective, stderr) = evaluate_objective(g, q, problem, fixed, &seeds, cfg.eval_iterations, master_seed)?;
        candidates.push(Candidate { label, seeds, objective, stderr });
    }
    let best = candidates
        .iter()
        .enumerate()
        .fold(0, |b, (i, c)| if c.objective > candidates[b].objective { i } else { b });

    let (upper_value, _) = evaluate_objective(g, &upper, problem, fixed, &candidates[0].seeds, cfg.eval_iterations, master_seed)?;
    let ratio_upper = if upper_value > 0.0 { candidates[0].objective / upper_value } else { 1.0 };
    let sa_error = candidates.iter().find(|c| c.label == "greedy").and_then(|gc| {
        (gc.objective > 0.0).then(|| {
            candidates
                .iter()
                .filter(|c| c.label != "greedy")
                .map(|c| (gc.objective - c.objective).abs() / gc.objective)
                .fold(0.0, f64::max)
        })
    });

    Ok(SandwichReport {
        seeds: candidates[best].seeds.clone(),
        chosen: candidates[best].label,
        candidates,
        upper_gaps: upper,
        lower_gaps: lower,
        ratio_upper,
        sa_error,
        upper_stats: up.stats,
    })
}
