//! Exact expected spreads on tiny graphs.
//!
//! The cascade is re-executed along every path of a lazily built decision tree. Each
//! question the cascade asks of the world (is this edge live, is this threshold below x,
//! where does this informer fall in the permutation, which seed item goes first) becomes a
//! branch point weighted by its conditional probability. Leaves are sets of worlds that
//! agree on every consulted variable; their masses sum to one.

use std::collections::BTreeMap;

use super::cascade::Cascade;
use super::world::WorldSource;
use crate::error::{invalid, Error, Result};
use crate::graph::{EdgeId, Graph, NodeId};
use crate::model::simulate::check_seeds;
use crate::model::{GapSet, Item};

#[derive(Clone, Copy, Debug)]
pub struct ExactOptions {
    pub max_nodes: usize,
    pub max_edges: usize,
    /// Refuse once this many leaves have been visited.
    pub max_leaves: u64,
    /// Branch over informer permutations even when the GAPs make them irrelevant.
    pub force_tie_break: bool,
}

impl Default for ExactOptions {
    fn default() -> Self {
        ExactOptions { max_nodes: 12, max_edges: 20, max_leaves: 20_000_000, force_tie_break: false }
    }
}

/// A set of worlds agreeing on every variable the cascade consulted.
#[derive(Clone, Debug)]
pub struct EquivalenceClass {
    pub mass: f64,
    /// Bitmasks of A- and B-adopters.
    pub a_adopted: u64,
    pub b_adopted: u64,
    /// Liveness of consulted edges.
    pub edges: Vec<(EdgeId, bool)>,
    /// Known interval `(lo, hi]` of each node's thresholds `[alpha_A, alpha_B]`.
    pub alpha: Vec<[(f64, f64); 2]>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExactSpread {
    pub sigma_a: f64,
    pub sigma_b: f64,
    pub classes: u64,
    pub total_mass: f64,
}

struct Tree {
    path: Vec<(u32, u32)>,
    pos: usize,
    mass: f64,
}

impl Tree {
    /// Picks a branch among outcomes with positive probability.
    fn choose(&mut self, probs: &[f64]) -> usize {
        let (taken, arity) = if self.pos < self.path.len() {
            self.path[self.pos]
        } else {
            self.path.push((0, probs.len() as u32));
            (0, probs.len() as u32)
        };
        debug_assert_eq!(arity as usize, probs.len());
        self.pos += 1;
        self.mass *= probs[taken as usize];
        taken as usize
    }

    fn advance(&mut self) -> bool {
        while let Some(last) = self.path.last_mut() {
            if last.0 + 1 < last.1 {
                last.0 += 1;
                return true;
            }
            self.path.pop();
        }
        false
    }
}

struct EnumWorld<'t> {
    tree: &'t mut Tree,
    edge: Vec<Option<bool>>,
    alpha: Vec<[(f64, f64); 2]>,
    revealed: Vec<Vec<EdgeId>>,
    tau: Vec<Option<Item>>,
    consulted: Vec<EdgeId>,
}

impl WorldSource for EnumWorld<'_> {
    fn edge_live(&mut self, g: &Graph, e: EdgeId) -> bool {
        if let Some(x) = self.edge[e as usize] {
            return x;
        }
        let p = g.prob(e);
        let live = if p >= 1.0 {
            true
        } else if p <= 0.0 {
            false
        } else {
            self.tree.choose(&[p, 1.0 - p]) == 0
        };
        self.edge[e as usize] = Some(live);
        self.consulted.push(e);
        live
    }

    fn alpha_at_most(&mut self, v: NodeId, item: Item, x: f64) -> bool {
        let (lo, hi) = self.alpha[v as usize][item.index()];
        let yes = if x <= lo {
            false
        } else if x >= hi {
            true
        } else {
            let p = (x - lo) / (hi - lo);
            self.tree.choose(&[p, 1.0 - p]) == 0
        };
        let iv = &mut self.alpha[v as usize][item.index()];
        if yes {
            iv.1 = iv.1.min(x);
        } else {
            iv.0 = iv.0.max(x);
        }
        yes
    }

    fn order_informers(&mut self, _g: &Graph, v: NodeId, edges: &mut [EdgeId]) {
        // The relative order of a uniform permutation restricted to revealed elements is
        // uniform, and a newly revealed element lands in each gap with equal chance.
        let mut fresh: Vec<EdgeId> = edges.iter().copied().filter(|e| !self.revealed[v as usize].contains(e)).collect();
        fresh.sort_unstable();
        for e in fresh {
            let r = self.revealed[v as usize].len();
            let slot = self.tree.choose(&vec![1.0 / (r + 1) as f64; r + 1]);
            self.revealed[v as usize].insert(slot, e);
        }
        let order = &self.revealed[v as usize];
        edges.sort_by_key(|e| order.iter().position(|x| x == e).unwrap());
    }

    fn seed_first(&mut self, v: NodeId) -> Item {
        *self.tau[v as usize].get_or_insert_with(|| if self.tree.choose(&[0.5, 0.5]) == 0 { Item::A } else { Item::B })
    }
}

fn check_size(g: &Graph, opts: &ExactOptions) -> Result<()> {
    if g.n() > opts.max_nodes.min(64) || g.m() > opts.max_edges {
        return Err(Error::Budget(format!(
            "graph has {} nodes and {} edges; limits are {} and {}",
            g.n(),
            g.m(),
            opts.max_nodes.min(64),
            opts.max_edges
        )));
    }
    Ok(())
}

/// Visits every equivalence class of worlds with its adoption outcome.
pub fn enumerate_classes<F: FnMut(&EquivalenceClass)>(
    g: &Graph,
    q: &GapSet,
    seeds_a: &[NodeId],
    seeds_b: &[NodeId],
    opts: &ExactOptions,
    mut visit: F,
) -> Result<u64> {
    g.require_weighted()?;
    q.validate()?;
    check_seeds(g, seeds_a, "A")?;
    check_seeds(g, seeds_b, "B")?;
    check_size(g, opts)?;
    let mut tree = Tree { path: Vec::new(), pos: 0, mass: 1.0 };
    let mut leaves = 0u64;
    loop {
        tree.pos = 0;
        tree.mass = 1.0;
        let mut world = EnumWorld {
            tree: &mut tree,
            edge: vec![None; g.m()],
            alpha: vec![[(0.0, 1.0); 2]; g.n()],
            revealed: vec![Vec::new(); g.n()],
            tau: vec![None; g.n()],
            consulted: Vec::new(),
        };
        let mut c = Cascade::new(g, *q, opts.force_tie_break);
        c.run(seeds_a, seeds_b, &mut world);
        let (a_adopted, b_adopted) = c.masks();
        let mut edges: Vec<(EdgeId, bool)> = world.consulted.iter().map(|&e| (e, world.edge[e as usize].unwrap())).collect();
        edges.sort_unstable();
        let class = EquivalenceClass { mass: world.tree.mass, a_adopted, b_adopted, edges, alpha: world.alpha };
        visit(&class);
        leaves += 1;
        if !tree.advance() {
            return Ok(leaves);
        }
        if leaves >= opts.max_leaves {
            return Err(Error::Budget(format!("more than {} world classes", opts.max_leaves)));
        }
    }
}

/// Compensated running sum.
#[derive(Default, Clone, Copy)]
pub(crate) struct Sum {
    s: f64,
    c: f64,
}

impl Sum {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.s + x;
        if self.s.abs() >= x.abs() {
            self.c += (self.s - t) + x;
        } else {
            self.c += (x - t) + self.s;
        }
        self.s = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.s + self.c
    }
}

/// Exact joint distribution of (A-adopter mask, B-adopter mask).
pub fn exact_outcome_distribution(
    g: &Graph,
    q: &GapSet,
    seeds_a: &[NodeId],
    seeds_b: &[NodeId],
    opts: &ExactOptions,
) -> Result<BTreeMap<(u64, u64), f64>> {
    let mut dist: BTreeMap<(u64, u64), Sum> = BTreeMap::new();
    enumerate_classes(g, q, seeds_a, seeds_b, opts, |c| dist.entry((c.a_adopted, c.b_adopted)).or_default().add(c.mass))?;
    Ok(dist.into_iter().map(|(k, s)| (k, s.value())).collect())
}

/// Exact expected numbers of A- and B-adopters.
pub fn exact_spread(
    g: &Graph,
    q: &GapSet,
    seeds_a: &[NodeId],
    seeds_b: &[NodeId],
    opts: &ExactOptions,
) -> Result<ExactSpread> {
    let (mut sa, mut sb, mut total) = (Sum::default(), Sum::default(), Sum::default());
    let classes = enumerate_classes(g, q, seeds_a, seeds_b, opts, |c| {
        sa.add(c.mass * c.a_adopted.count_ones() as f64);
        sb.add(c.mass * c.b_adopted.count_ones() as f64);
        total.add(c.mass);
    })?;
    let total_mass = total.value();
    if (total_mass - 1.0).abs() > 1e-9 {
        return Err(invalid(format!("class masses sum to {total_mass}")));
    }
    Ok(ExactSpread { sigma_a: sa.value(), sigma_b: sb.value(), classes, total_mass })
}

/// Exact probability that each node adopts each item, indexed `[item][node]`.
pub fn exact_adoption_probabilities(
    g: &Graph,
    q: &GapSet,
    seeds_a: &[NodeId],
    seeds_b: &[NodeId],
    opts: &ExactOptions,
) -> Result<[Vec<f64>; 2]> {
    let mut acc = vec![[Sum::default(); 2]; g.n()];
    enumerate_classes(g, q, seeds_a, seeds_b, opts, |c| {
        for (v, a) in acc.iter_mut().enumerate() {
            if c.a_adopted >> v & 1 == 1 {
                a[0].add(c.mass);
            }
            if c.b_adopted >> v & 1 == 1 {
                a[1].add(c.mass);
            }
        }
    })?;
    Ok([acc.iter().map(|a| a[0].value()).collect(), acc.iter().map(|a| a[1].value()).collect()])
}
